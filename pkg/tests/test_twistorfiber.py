from itertools import product

import pytest

from twistorcy.twistorfiber import (
    ALL,
    AXIS_POINTS,
    CENTRAL,
    COORDINATE_PLANES,
    GROUP,
    IDENTITY,
    CoordinatePlane,
    FiberError,
    FiberPoint,
    L_I,
    L_J,
    L_K,
    SignFlip,
    fiber_action,
    fiber_report,
    fixed_points,
    kernel,
    left_multiplication,
    octahedron_orbits,
    orbit,
    plane_lift_fiber_points,
    quaternion_product,
    stabilizer,
)


def mat3_mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def mat4_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]


ID3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def diag(*xs):
    return tuple(tuple(x if i == j else 0 for j in range(3)) for i, x in enumerate(xs))


def pair(*v):
    p = FiberPoint(v)
    return frozenset({p, p.antipode()})


def test_quaternion_units():
    i, j, k = (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
    assert quaternion_product(i, j) == k
    assert quaternion_product(j, k) == i
    assert quaternion_product(i, i) == (-1, 0, 0, 0)
    # left multiplications are complex structures
    for L in (L_I, L_J, L_K):
        assert mat4_mul(L, L) == [[-int(r == c) for c in range(4)] for r in range(4)]
    assert mat4_mul(L_I, L_J) == L_K


def test_odd_sign_flips_are_rejected():
    with pytest.raises(FiberError):
        SignFlip((1, 1, 1, -1))
    with pytest.raises(FiberError):
        fiber_action((1, -1, 1, 1))


def test_group_has_eight_elements():
    assert len(GROUP) == 8 and len(set(GROUP)) == 8
    assert IDENTITY in GROUP and CENTRAL in GROUP


def test_action_examples():
    assert fiber_action((1, 1, -1, -1)) == diag(1, -1, -1)
    assert fiber_action((-1, -1, -1, -1)) == ID3
    assert fiber_action((1, -1, 1, -1)) == diag(-1, 1, -1)
    assert fiber_action((1, -1, -1, 1)) == diag(-1, -1, 1)


def test_action_by_direct_conjugation():
    # independent oracle: conjugate each L and read off coefficients by matching
    basis = [L_I, L_J, L_K]
    for g in GROUP:
        r = g.matrix()
        a = fiber_action(g)
        for col, L in enumerate(basis):
            conj = mat4_mul(mat4_mul(r, L), r)
            recon = [[sum(a[row][col] * basis[row][x][y] for row in range(3)) for y in range(4)] for x in range(4)]
            assert conj == recon


def test_homomorphism_on_all_pairs():
    for g, h in product(GROUP, GROUP):
        assert fiber_action(g * h) == mat3_mul(fiber_action(g), fiber_action(h))


def test_rotations_are_orthogonal_with_det_one():
    for g in GROUP:
        a = fiber_action(g)
        assert mat3_mul(a, tuple(zip(*a))) == ID3
        assert all(x in (-1, 0, 1) for row in a for x in row)
        d = (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )
        assert d == 1


def test_kernel_and_image():
    assert set(kernel()) == {IDENTITY, CENTRAL}
    assert len({fiber_action(g) for g in GROUP}) == 4


def test_fixed_points():
    assert fixed_points((1, 1, -1, -1)) == pair(1, 0, 0)
    assert fixed_points(IDENTITY) == ALL
    assert fixed_points((1, -1, -1, 1)) == pair(0, 0, 1)


def test_fixed_points_cover_the_octahedron():
    pts = set()
    for g in GROUP:
        f = fixed_points(g)
        if f != ALL:
            pts |= f
    assert pts == set(AXIS_POINTS)


def test_stabilizers():
    assert len(stabilizer((1, 0, 0))) == 4
    assert set(stabilizer((1, 1, 1))) == {IDENTITY, CENTRAL}
    assert len(stabilizer((0, 0, 1))) == 4
    for p in list(AXIS_POINTS) + [FiberPoint(v) for v in [(1, 2, 3), (0, 1, 1), (2, -1, 0)]]:
        assert len(orbit(p)) * len(stabilizer(p)) == 8


def test_octahedron_orbits():
    orbits = octahedron_orbits()
    assert len(orbits) == 3
    assert orbits[0] == pair(1, 0, 0)
    assert set().union(*orbits) == set(AXIS_POINTS)
    assert sum(len(o) for o in orbits) == 6


def test_fiber_point_canonical():
    p = FiberPoint((0, -2, 4))
    assert p.direction == (0, -1, 2)
    assert p.sign == -1 and p.canonical == (0, 1, -2)


def test_plane_lifts():
    assert plane_lift_fiber_points((1, 2)) == pair(1, 0, 0)
    assert plane_lift_fiber_points((3, 4)) == pair(1, 0, 0)
    assert plane_lift_fiber_points((1, 3)) == pair(0, 1, 0)
    hit = set()
    for pl in COORDINATE_PLANES:
        lifts = plane_lift_fiber_points(pl)
        assert len(lifts) == 2
        assert lifts == plane_lift_fiber_points(pl.complement())
        hit |= lifts
    assert hit == set(AXIS_POINTS)


def test_plane_lift_preserves_the_plane():
    # oracle: the quaternion unit maps e_i, e_j into their span
    units = {(1, 0, 0): (0, 1, 0, 0), (0, 1, 0): (0, 0, 1, 0), (0, 0, 1): (0, 0, 0, 1)}
    for pl in COORDINATE_PLANES:
        p = next(iter(plane_lift_fiber_points(pl)))
        q = units[p.canonical]
        L = left_multiplication(q)
        for k in (pl.i - 1, pl.j - 1):
            image = [L[r][k] for r in range(4)]
            assert all(image[r] == 0 for r in range(4) if r not in (pl.i - 1, pl.j - 1))


def test_coordinate_plane_validation():
    assert CoordinatePlane(3, 1) == CoordinatePlane(1, 3)
    with pytest.raises(FiberError):
        CoordinatePlane(2, 2)
    with pytest.raises(FiberError):
        CoordinatePlane(0, 5)


def test_report_is_plain_data():
    import json

    rep = fiber_report()
    assert json.loads(json.dumps(rep)) == rep
    assert rep["kernel"] == [[1, 1, 1, 1], [-1, -1, -1, -1]]
    assert len(rep["group"]) == 8
