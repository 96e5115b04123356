"""Acceptance criteria, one test per criterion, each timed against its budget.

A PASS/FAIL line per criterion is printed in the pytest terminal summary.
"""

import random
import time
import warnings
from contextlib import contextmanager
from fractions import Fraction
from itertools import product

from twistorcy import betti, coxeter, toric, twistorfiber
from twistorcy.exactnum import hermite_normal_form, invariant_factors, matmul, smith_normal_form
from twistorcy.polytope import HalfSpace, Polyhedron, face_lattice, v_representation

from conftest import E3, model_a1, model_p, model_r
from oracles import hull3_oracle, invariant_factors_oracle

RESULTS: list[tuple[int, str, bool, float, float]] = []


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget
        RESULTS.append((number, title, ok and within, elapsed, budget))
    assert within, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"


def F(*xs):
    return tuple(Fraction(x) for x in xs)


def test_criterion_01_model_p_audit():
    with criterion(1, "model P audit: vertex Z2+Z2, rays Z2", 1.0):
        p = model_p()
        (v,) = toric.vertex_smoothness(p)
        assert v.factors == (2, 2)
        rays = [t for f, t in toric.singular_faces(p) if f.dim == 1]
        assert rays == [(2,), (2,), (2,)]
        lat = face_lattice(p)
        assert [toric.face_orbifold_group(p, f) for f in lat.faces[1]] == [(2,), (2,), (2,)]


def test_criterion_02_resolution_r():
    with criterion(2, "resolution R: four vertices, Delzant", 1.0):
        r = toric.apply_cut(model_p(), toric.CutSpec.symmetric(E3, 1))
        assert set(v_representation(r).vertices) == {F(1, 1, 1), F(1, 1, 2), F(1, 2, 1), F(2, 1, 1)}
        verdicts = toric.vertex_smoothness(r)
        assert len(verdicts) == 4 and all(v.smooth for v in verdicts)


def test_criterion_03_crepancy():
    with criterion(3, "crepancy certificates and negative control", 1.0):
        p_cert = toric.crepancy_certificate([(1, 1, -1), (1, -1, 1), (-1, 1, 1)], E3)
        assert p_cert.certificate == (1, 1, 1)
        a1_cert = toric.crepancy_certificate([(2, -1, 0), (0, 1, 0)], [(1, 0, 0)])
        assert a1_cert.certificate == (1, 1, 0)
        neg = toric.crepancy_certificate(E3, [(1, 1, 1)])
        assert not neg.crepant and neg.pairing == 3


def test_criterion_04_curve_invariants():
    with criterion(4, "curve invariants: R walls (-1,-1), A1xC wall (-2,0)", 1.0):
        fan = toric.normal_fan(model_r())
        walls = fan.interior_walls()
        assert len(walls) == 3
        assert [toric.curve_normal_bundle(fan, w) for w in walls] == [(-1, -1)] * 3
        a1 = toric.apply_cut(model_a1(), toric.CutSpec.symmetric([(1, 0, 0)], 1))
        fan = toric.normal_fan(a1)
        assert len(fan.interior_walls()) == 1
        assert toric.curve_normal_bundle(fan, [(1, 0, 0), (0, 0, 1)]) == (-2, 0)


def test_criterion_05_exceptional_faces():
    with criterion(5, "exceptional faces: two -1 curves of length 1 each", 1.0):
        r = model_r()
        for n in E3:
            edges = toric.surface_face_analysis(r, r.index_of(n))
            assert len(edges) == 2
            assert [(e.self_intersection, e.lattice_length) for e in edges] == [(-1, 1), (-1, 1)]


def test_criterion_06_twistor_fiber():
    with criterion(6, "twistor fiber: homomorphism, kernel, octahedron, lifts", 1.0):
        G = twistorfiber.GROUP
        act = twistorfiber.fiber_action

        def mul(a, b):
            return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3))

        pairs = list(product(G, G))
        assert len(pairs) == 64
        assert all(act(g * h) == mul(act(g), act(h)) for g, h in pairs)
        assert set(twistorfiber.kernel()) == {twistorfiber.IDENTITY, twistorfiber.CENTRAL}
        fixed = set()
        for g in G:
            f = twistorfiber.fixed_points(g)
            if f != twistorfiber.ALL:
                fixed |= f
        assert fixed == set(twistorfiber.AXIS_POINTS) and len(fixed) == 6
        assert all(len(twistorfiber.stabilizer(p)) == 4 for p in fixed)
        orbits = twistorfiber.octahedron_orbits()
        assert len(orbits) == 3 and all(len(o) == 2 and next(iter(o)).antipode() in o for o in orbits)
        assert len(twistorfiber.stabilizer((1, 1, 1))) == 2
        lifts = [twistorfiber.plane_lift_fiber_points(pl) for pl in twistorfiber.COORDINATE_PLANES]
        assert sum(len(x) for x in lifts) == 12
        assert set().union(*lifts) == fixed
        for pl in twistorfiber.COORDINATE_PLANES:
            assert twistorfiber.plane_lift_fiber_points(pl) == twistorfiber.plane_lift_fiber_points(pl.complement())


def test_criterion_07_120_cell():
    with criterion(7, "120-cell combinatorics", 60.0):
        c600 = coxeter.build_600_cell()
        assert c600.f_vector == (120, 720, 1200, 600)
        c120 = coxeter.dualize(c600)
        assert c120.f_vector == (600, 1200, 720, 120)
        assert c600.euler == 0 and c120.euler == 0
        for f in c120.faces[3]:
            assert len(f) == 20
            pentagons = c120.faces_in(2, f)
            assert len(pentagons) == 12 and all(len(p) == 5 for p in pentagons)


def test_criterion_08_chain_gluing():
    with criterion(8, "chain gluing: cube regression, k=1, k=2", 60.0):
        assert coxeter.glue_chain(coxeter.ChainSpec(2), coxeter.hypercube()) == (16, 32, 24, 8)
        cell = coxeter.dualize(coxeter.build_600_cell())
        assert coxeter.glue_chain(coxeter.ChainSpec(1), cell) == (600, 1200, 720, 120)
        k2 = coxeter.glue_chain(coxeter.ChainSpec(2), cell)
        assert k2 == (1160, 2320, 1386, 226)
        assert k2.euler == 0


def test_criterion_09_betti_ledger():
    with criterion(9, "Betti ledger: 2041, deltas, chi consistency, growth", 5.0):
        b = betti.resolved_betti_doubled(600, 720)
        assert b.b2 == 2041 == 1 + 600 + 2 * 720 and b.b3 == 0
        rng = random.Random(99)
        for _ in range(100):
            comps = [betti.SingularComponent(rng.randint(0, 5), rng.randint(0, 3)) for _ in range(rng.randint(0, 25))]
            d = betti.resolution_deltas(comps)
            n = sum(1 for _ in comps)
            m = sum(c.genus for c in comps)
            assert (d.b2, d.b3, d.euler) == (n, 2 * m, 2 * (n - m))
        cell = coxeter.dualize(coxeter.build_600_cell())
        prev = None
        for k in range(1, 6):
            fv = coxeter.glue_chain(coxeter.ChainSpec(k), cell)
            resolved = betti.resolved_betti_doubled(fv.V, fv.F)
            desc = coxeter.double_to_singular_locus(fv.V, fv.F)
            assert resolved.euler == betti.doubled_polytope_base_betti().euler + betti.resolution_deltas(desc).euler
            assert resolved.euler == 4 + 2 * (fv.V + 2 * fv.F)
            assert resolved.satisfies_duality()
            if prev is not None:
                assert resolved.b2 > prev
            prev = resolved.b2


def _random_matrix(rng):
    r, c = rng.randint(1, 4), rng.randint(1, 4)
    return [[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)]


def _unimodular(rng, n):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(6):
        if n > 1:
            i, j = rng.sample(range(n), 2)
            f = rng.randint(-2, 2)
            u[i] = [a + f * b for a, b in zip(u[i], u[j])]
    return u


def _chopped_polygon(rng, steps):
    p = Polyhedron.from_inequalities([(1, 0, 0), (0, 1, 0), (-1, -1, -1000)])
    delta = Fraction(100)
    for _ in range(steps):
        corner = rng.choice(v_representation(p).vertices)
        i, j = sorted(p.active(corner))
        n = tuple(a + b for a, b in zip(p.halfspaces[i].normal, p.halfspaces[j].normal))
        p = p.intersect([HalfSpace(n, sum(a * b for a, b in zip(n, corner)) + delta)])
        delta /= 4
    return p


def test_criterion_10_property_suites():
    with criterion(10, "property suites: SNF/HNF, H<->V, cut reduction, 12 - 3n", 120.0):
        rng = random.Random(10)
        for _ in range(500):
            m = _random_matrix(rng)
            u, d, v = smith_normal_form(m)
            assert matmul(matmul(u, m), v) == d
            assert invariant_factors(m) == invariant_factors_oracle(m)
            h, w = hermite_normal_form(m)
            assert matmul(w, m) == h
            assert hermite_normal_form(matmul(_unimodular(rng, len(m)), m))[0] == h

        for _ in range(100):
            pts = [(0, 0, 0), (rng.randint(1, 3), 0, 0), (0, rng.randint(1, 3), 0), (0, 0, rng.randint(1, 3))]
            pts += [tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(rng.randint(2, 7))]
            facets, vertices = hull3_oracle(pts)
            p = Polyhedron.from_generators(pts)
            assert sorted((hs.normal, hs.level) for hs in p.halfspaces) == facets
            vrep = v_representation(p)
            assert sorted(vrep.vertices) == sorted(F(*x) for x in vertices)
            assert Polyhedron.from_generators(vrep.vertices) == p

        bases = [model_p().intersect([HalfSpace((-1, -1, -1), -9)]), Polyhedron.box((0, 0, 0), (3, 3, 3))]
        checked = 0
        for _ in range(60):
            p = rng.choice(bases)
            hs = []
            for _ in range(rng.randint(1, 3)):
                n = tuple(rng.randint(-1, 1) for _ in range(3))
                if any(n):
                    hs.append(HalfSpace(n, Fraction(rng.randint(-8, 4), rng.randint(1, 2))))
            if not hs:
                continue
            spec = toric.CutSpec(tuple(hs))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", toric.VacuousCutWarning)
                try:
                    full = toric.apply_cut(p, spec)
                except toric.CutFeasibilityError:
                    continue
                reduced = toric.compatibility_reduction(p, spec)
                again = toric.apply_cut(p, reduced) if reduced.halfspaces else p
            assert again == full
            checked += 1
        assert checked >= 20

        fans = [[(1, 0), (0, 1), (-1, -1)]] + [[(1, 0), (0, 1), (-1, a), (0, -1)] for a in range(4)]
        for rays in fans:
            s = toric.fan_self_intersections(rays)
            assert sum(x for _, x in s) == 12 - 3 * len(rays)
        for steps in range(6):
            q = _chopped_polygon(rng, steps)
            edges = toric.polygon_edge_analysis(q)
            assert sum(e.self_intersection for e in edges) == 12 - 3 * len(q)
