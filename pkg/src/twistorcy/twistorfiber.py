"""The sign-flip group acting on the twistor fiber over a fixed point.

The group is the set of diagonal sign changes of R^4 with an even number of
minus signs.  Orthogonal complex structures compatible with the orientation are
modelled by left multiplication by unit imaginary quaternions, with R^4 = H in
the basis (1, i, j, k).  A sign flip R acts on the fiber by J -> R J R^-1, which
we record as a 3x3 integer matrix in the basis (L_i, L_j, L_k).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .exactnum import integer_kernel, matmul, primitive

ALL = "all"


class FiberError(ValueError):
    pass


def quaternion_product(p: Sequence[int], q: Sequence[int]) -> tuple[int, int, int, int]:
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def left_multiplication(q: Sequence[int]) -> list[list[int]]:
    """4x4 matrix of ``x -> q x`` in the basis (1, i, j, k)."""
    cols = []
    for k in range(4):
        e = [0, 0, 0, 0]
        e[k] = 1
        cols.append(quaternion_product(q, e))
    return [[cols[c][r] for c in range(4)] for r in range(4)]


IMAGINARY_UNITS = ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
L_I, L_J, L_K = (left_multiplication(u) for u in IMAGINARY_UNITS)
_BASIS = (L_I, L_J, L_K)


@dataclass(frozen=True, order=True)
class SignFlip:
    signs: tuple[int, int, int, int]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if len(signs) != 4 or any(s not in (1, -1) for s in signs):
            raise FiberError(f"{self.signs} is not a 4-tuple of signs")
        if signs.count(-1) % 2:
            raise FiberError(f"{signs} reverses an odd number of signs; not orientation preserving")
        object.__setattr__(self, "signs", signs)

    def __mul__(self, other: SignFlip) -> SignFlip:
        return SignFlip(tuple(a * b for a, b in zip(self.signs, other.signs)))

    def matrix(self) -> list[list[int]]:
        return [[self.signs[i] if i == j else 0 for j in range(4)] for i in range(4)]

    def __str__(self):
        return "(" + ",".join("+" if s > 0 else "-" for s in self.signs) + ")"


GROUP: tuple[SignFlip, ...] = tuple(
    sorted(
        (SignFlip(s) for s in product((1, -1), repeat=4) if s.count(-1) % 2 == 0),
        reverse=True,
    )
)
IDENTITY = SignFlip((1, 1, 1, 1))
CENTRAL = SignFlip((-1, -1, -1, -1))


def _coefficients(x: list[list[int]]) -> tuple[int, int, int]:
    """Express a 4x4 matrix in the basis (L_i, L_j, L_k)."""
    coeffs = []
    for b in _BASIS:
        tr = sum(b[r][c] * x[r][c] for r in range(4) for c in range(4))
        if tr % 4:
            raise FiberError("matrix is not an integral combination of left multiplications")
        coeffs.append(tr // 4)
    recon = [[sum(coeffs[k] * _BASIS[k][r][c] for k in range(3)) for c in range(4)] for r in range(4)]
    if recon != x:
        raise FiberError("matrix does not lie in the span of left multiplications")
    return tuple(coeffs)


def fiber_action(g: SignFlip | Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Rotation of the fiber sphere induced by conjugation with ``g``."""
    if not isinstance(g, SignFlip):
        g = SignFlip(tuple(g))
    r = g.matrix()
    cols = [_coefficients(matmul(matmul(r, b), r)) for b in _BASIS]
    return tuple(tuple(cols[c][row] for c in range(3)) for row in range(3))


def _apply(a, v) -> tuple[int, ...]:
    return tuple(sum(a[r][c] * v[c] for c in range(3)) for r in range(3))


@dataclass(frozen=True, order=True)
class FiberPoint:
    """A rational direction on the fiber sphere, stored as a primitive integer vector."""

    direction: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "direction", primitive(self.direction))

    @property
    def sign(self) -> int:
        lead = next(x for x in self.direction if x)
        return 1 if lead > 0 else -1

    @property
    def canonical(self) -> tuple[int, int, int]:
        return tuple(self.sign * x for x in self.direction)

    def antipode(self) -> FiberPoint:
        return FiberPoint(tuple(-x for x in self.direction))


def fixed_points(g: SignFlip | Sequence[int]):
    """Fixed directions of ``g`` on the fiber: :data:`ALL` or one antipodal pair."""
    a = fiber_action(g)
    if all(a[r][c] == int(r == c) for r in range(3) for c in range(3)):
        return ALL
    ker = integer_kernel([[a[r][c] - int(r == c) for c in range(3)] for r in range(3)], 3)
    if len(ker) != 1:
        raise FiberError(f"fixed space of {g} has dimension {len(ker)}")
    p = FiberPoint(tuple(ker[0]))
    return frozenset({p, p.antipode()})


def stabilizer(p: FiberPoint | Sequence[int]) -> list[SignFlip]:
    if not isinstance(p, FiberPoint):
        p = FiberPoint(tuple(p))
    return [g for g in GROUP if _apply(fiber_action(g), p.direction) == p.direction]


def orbit(p: FiberPoint | Sequence[int]) -> frozenset[FiberPoint]:
    if not isinstance(p, FiberPoint):
        p = FiberPoint(tuple(p))
    return frozenset(FiberPoint(_apply(fiber_action(g), p.direction)) for g in GROUP)


def kernel() -> list[SignFlip]:
    ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    return [g for g in GROUP if fiber_action(g) == ident]


AXIS_POINTS = tuple(
    FiberPoint(tuple(s if k == i else 0 for k in range(3))) for i in range(3) for s in (1, -1)
)


def octahedron_orbits() -> list[frozenset[FiberPoint]]:
    """Orbits of the six axis points, ordered by axis."""
    out: list[frozenset[FiberPoint]] = []
    for p in AXIS_POINTS:
        if not any(p in o for o in out):
            out.append(orbit(p))
    return out


@dataclass(frozen=True, order=True)
class CoordinatePlane:
    """The coordinate 2-plane spanned by e_i and e_j (1-based, i < j)."""

    i: int
    j: int

    def __post_init__(self):
        if not (1 <= self.i <= 4 and 1 <= self.j <= 4) or self.i == self.j:
            raise FiberError(f"invalid coordinate plane ({self.i}, {self.j})")
        if self.i > self.j:
            a, b = self.j, self.i
            object.__setattr__(self, "i", a)
            object.__setattr__(self, "j", b)

    def complement(self) -> CoordinatePlane:
        rest = [k for k in range(1, 5) if k not in (self.i, self.j)]
        return CoordinatePlane(*rest)

    def __str__(self):
        return f"Pi_{self.i}{self.j}"


COORDINATE_PLANES = tuple(CoordinatePlane(i, j) for i, j in combinations(range(1, 5), 2))


def plane_lift_fiber_points(plane: CoordinatePlane | tuple[int, int]) -> frozenset[FiberPoint]:
    """The antipodal pair of complex structures making the plane a complex line."""
    if not isinstance(plane, CoordinatePlane):
        plane = CoordinatePlane(*plane)
    inside = (plane.i - 1, plane.j - 1)
    outside = [k for k in range(4) if k not in inside]
    rows = [[_BASIS[a][r][c] for a in range(3)] for c in inside for r in outside]
    ker = integer_kernel(rows, 3)
    if len(ker) != 1:
        raise FiberError(f"{plane} is preserved by a {len(ker)}-dimensional family")
    p = FiberPoint(tuple(ker[0]))
    return frozenset({p, p.antipode()})


def _point_json(p: FiberPoint) -> list[int]:
    return list(p.direction)


def _points_json(ps) -> list | str:
    if ps == ALL:
        return ALL
    return [_point_json(p) for p in sorted(ps, reverse=True)]


def fiber_report() -> dict:
    """Group table, fixed points, stabilisers, orbits and plane lifts as plain data."""
    elements = []
    for g in GROUP:
        elements.append(
            {
                "signs": list(g.signs),
                "rotation": [list(r) for r in fiber_action(g)],
                "fixed_points": _points_json(fixed_points(g)),
            }
        )
    generic = FiberPoint((1, 1, 1))
    return {
        "group": elements,
        "kernel": [list(g.signs) for g in kernel()],
        "stabilizer_orders": {
            **{",".join(map(str, p.direction)): len(stabilizer(p)) for p in AXIS_POINTS},
            "generic(1,1,1)": len(stabilizer(generic)),
        },
        "orbits": [_points_json(o) for o in octahedron_orbits()],
        "plane_lifts": {
            str(pl): _points_json(plane_lift_fiber_points(pl)) for pl in COORDINATE_PLANES
        },
    }
