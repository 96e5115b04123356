from collections import Counter
from itertools import combinations

import networkx as nx
import pytest

from twistorcy.coxeter import (
    CellComplex4,
    ChainSpec,
    CoxeterError,
    FVector,
    build_600_cell,
    chain_complex,
    double_to_singular_locus,
    dualize,
    facet_isomorphism,
    glue_chain,
    golden_dot,
    hypercube,
    is_isomorphic_relabeling,
    six_hundred_cell_vertices,
)
from twistorcy.polytope import Polyhedron, face_lattice

PHI = (1 + 5**0.5) / 2


@pytest.fixture(scope="module")
def cell600():
    return build_600_cell()


@pytest.fixture(scope="module")
def cell120(cell600):
    return dualize(cell600)


def as_float(g):
    return float(g.a) + float(g.b) * PHI


def test_vertices_are_distinct_unit_vectors():
    pts = six_hundred_cell_vertices()
    assert len(pts) == 120 == len(set(pts))
    assert all(golden_dot(p, p) == 1 for p in pts)


def test_600_cell_against_float_clique_oracle(cell600):
    pts = [[as_float(x) for x in p] for p in six_hundred_cell_vertices()]
    g = nx.Graph()
    for i, j in combinations(range(120), 2):
        if abs(sum(a * b for a, b in zip(pts[i], pts[j])) - PHI / 2) < 1e-9:
            g.add_edge(i, j)
    assert g.number_of_edges() == 720
    cliques = Counter(len(c) for c in nx.enumerate_all_cliques(g))
    assert (cliques[1], cliques[2], cliques[3], cliques[4]) == (120, 720, 1200, 600)
    assert {frozenset(e) for e in g.edges} == set(cell600.faces[1])
    assert cell600.f_vector == (120, 720, 1200, 600)
    assert cell600.euler == 0


def test_600_cell_neighbours(cell600):
    deg = Counter(v for e in cell600.faces[1] for v in e)
    assert set(deg.values()) == {12}


def test_120_cell(cell120):
    assert cell120.f_vector == (600, 1200, 720, 120)
    assert cell120.euler == 0


def test_120_cell_regularity(cell120):
    for f in cell120.faces[3]:
        assert len(f) == 20
        assert len(cell120.faces_in(1, f)) == 30
        pentagons = cell120.faces_in(2, f)
        assert len(pentagons) == 12 and all(len(p) == 5 for p in pentagons)
    in_facets = Counter(v for f in cell120.faces[3] for v in f)
    in_edges = Counter(v for e in cell120.faces[1] for v in e)
    assert set(in_facets.values()) == {4}
    assert set(in_edges.values()) == {4}


def test_double_dual_is_the_original(cell600, cell120):
    back = dualize(cell120)
    assert is_isomorphic_relabeling(cell600, back, {i: i for i in range(120)})


def test_hypercube_dual():
    c = hypercube()
    assert c.f_vector == (16, 32, 24, 8)
    assert dualize(c).f_vector == (8, 24, 32, 16)
    assert dualize(dualize(c)).f_vector == c.f_vector


def test_cube_chain_matches_box_lattice():
    oracle = face_lattice(Polyhedron.box((0, 0, 0, 0), (2, 1, 1, 1))).f_vector[:4]
    assert glue_chain(ChainSpec(2), hypercube()) == FVector(*oracle) == (16, 32, 24, 8)
    glued = chain_complex(ChainSpec(2), hypercube())
    for f in glued.faces[3]:
        assert (len(f), len(glued.faces_in(1, f)), len(glued.faces_in(2, f))) == (8, 12, 6)


def test_longer_cube_chains_stay_cubes():
    for k in range(1, 5):
        oracle = face_lattice(Polyhedron.box((0, 0, 0, 0), (k, 1, 1, 1))).f_vector[:4]
        assert glue_chain(ChainSpec(k), hypercube()) == oracle


def test_chain_of_one_is_the_120_cell(cell120):
    c = chain_complex(ChainSpec(1), cell120)
    assert c.faces == cell120.faces
    assert glue_chain(ChainSpec(1)) == (600, 1200, 720, 120)


def test_chain_of_two(cell120):
    fv = glue_chain(ChainSpec(2), cell120)
    assert fv == (1160, 2320, 1386, 226)
    assert fv.euler == 0


def ridges_in_two_facets(c: CellComplex4) -> bool:
    count = Counter()
    for f in c.faces[3]:
        for r in c.faces_in(2, f):
            count[r] += 1
    return set(count.values()) == {2} and len(count) == len(c.faces[2])


def test_glued_complex_is_a_closed_pseudomanifold(cell120):
    c = chain_complex(ChainSpec(2), cell120)
    assert ridges_in_two_facets(c)
    # simple: every vertex still lies on 4 edges
    assert set(Counter(v for e in c.faces[1] for v in e).values()) == {4}


def test_chain_monotone(cell120):
    prev = None
    for k in range(1, 5):
        fv = glue_chain(ChainSpec(k), cell120)
        assert fv.euler == 0
        if prev is not None:
            assert fv.V > prev.V and fv.F > prev.F
        prev = fv


def test_opposite_facet_is_disjoint(cell120):
    top = cell120.opposite_facet(0)
    assert not cell120.faces[3][0] & cell120.faces[3][top]


def test_adjacent_gluing_facets_are_rejected(cell120):
    adj = min(cell120.facet_adjacency()[0])
    with pytest.raises(CoxeterError):
        glue_chain(ChainSpec(2, base_facet=0, top_facet=adj), cell120)


def test_chain_spec_validation():
    with pytest.raises(CoxeterError):
        ChainSpec(0)


def test_facet_isomorphism_preserves_faces(cell120):
    f0 = cell120.faces[3][0]
    f1 = cell120.faces[3][cell120.opposite_facet(0)]
    iso = facet_isomorphism(cell120, f0, f1)
    for k in range(3):
        image = {frozenset(iso[v] for v in f) for f in cell120.faces_in(k, f0)}
        assert image == set(cell120.faces_in(k, f1))


def test_double_to_singular_locus():
    d = double_to_singular_locus(600, 720)
    assert d.n == 2040 and d.m == 0
    assert double_to_singular_locus(0, 0).n == 0
    assert double_to_singular_locus(16, 24).n == 64


def test_vertex_spheres_carry_the_octahedral_points():
    d = double_to_singular_locus(2, 1)
    assert [c.z2z2_count for c in d.components] == [3, 3, None, None]
