"""Combinatorics of the 120-cell and of chains of 120-cells.

The 600-cell is built from its 120 exact vertices in Q(phi); the 120-cell is
its dual.  Chains of right-angled polytopes glued across facets are computed on
face lattices directly: where two right angles meet the dihedral angle is pi,
so faces flanking the shared facet merge pairwise.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import NamedTuple

from .betti import SingularComponent, SingularLocusDescription
from .exactnum import GoldenScalar
from .twistorfiber import octahedron_orbits

GoldenPoint = tuple[GoldenScalar, GoldenScalar, GoldenScalar, GoldenScalar]


class CoxeterError(ValueError):
    pass


class FVector(NamedTuple):
    V: int
    E: int
    F: int
    C: int

    @property
    def euler(self) -> int:
        return self.V - self.E + self.F - self.C


@dataclass
class CellComplex4:
    """Boundary complex of a 4-polytope; every face is the set of its vertex ids.

    ``faces[k]`` lists the k-faces for k = 0..3.
    """

    faces: list[list[frozenset[int]]]
    coords: list[GoldenPoint] | None = field(default=None, repr=False)

    @property
    def f_vector(self) -> FVector:
        return FVector(*(len(self.faces[k]) for k in range(4)))

    @property
    def euler(self) -> int:
        return self.f_vector.euler

    def faces_in(self, k: int, container: frozenset[int]) -> list[frozenset[int]]:
        return [f for f in self.faces[k] if f <= container]

    def faces_containing(self, k: int, face: frozenset[int]) -> list[frozenset[int]]:
        return [f for f in self.faces[k] if face <= f]

    def facet_adjacency(self) -> dict[int, set[int]]:
        """Facets sharing a 2-face."""
        owner: dict[frozenset[int], list[int]] = {}
        index = {f: i for i, f in enumerate(self.faces[3])}
        for f in self.faces[3]:
            for r in self.faces[2]:
                if r <= f:
                    owner.setdefault(r, []).append(index[f])
        adj: dict[int, set[int]] = {i: set() for i in range(len(self.faces[3]))}
        for fs in owner.values():
            for a, b in combinations(fs, 2):
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def opposite_facet(self, i: int) -> int:
        """A facet at maximal distance from facet ``i`` in the facet adjacency graph."""
        adj = self.facet_adjacency()
        dist = {i: 0}
        queue = deque([i])
        while queue:
            a = queue.popleft()
            for b in sorted(adj[a]):
                if b not in dist:
                    dist[b] = dist[a] + 1
                    queue.append(b)
        far = max(dist.values())
        return min(j for j, d in dist.items() if d == far)

    def edges_of(self, container: frozenset[int]) -> list[frozenset[int]]:
        return self.faces_in(1, container)


# ---------------------------------------------------------------------------
# 600-cell


def _g(a, b=0) -> GoldenScalar:
    return GoldenScalar(Fraction(a), Fraction(b))


def _even_permutations(n: int):
    for p in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        if inversions % 2 == 0:
            yield p


def six_hundred_cell_vertices() -> list[GoldenPoint]:
    """The 120 unit vectors of the 600-cell, exact in Q(phi)."""
    zero, one, half = _g(0), _g(1), _g(Fraction(1, 2))
    pts: list[GoldenPoint] = []
    for i in range(4):
        for s in (1, -1):
            v = [zero] * 4
            v[i] = one * s
            pts.append(tuple(v))
    for signs in product((1, -1), repeat=4):
        pts.append(tuple(half * s for s in signs))
    half_phi = _g(0, Fraction(1, 2))
    half_inv_phi = _g(Fraction(-1, 2), Fraction(1, 2))  # (phi - 1) / 2
    base = (half_phi, half, half_inv_phi, zero)
    for perm in _even_permutations(4):
        for signs in product((1, -1), repeat=3):
            vals = [base[0] * signs[0], base[1] * signs[1], base[2] * signs[2], zero]
            pts.append(tuple(vals[perm[k]] for k in range(4)))
    return pts


def golden_dot(u: GoldenPoint, v: GoldenPoint) -> GoldenScalar:
    a = Fraction(0)
    b = Fraction(0)
    for x, y in zip(u, v):
        # (x.a + x.b phi)(y.a + y.b phi) with phi^2 = phi + 1
        bb = x.b * y.b
        a += x.a * y.a + bb
        b += x.a * y.b + x.b * y.a + bb
    return GoldenScalar(a, b)


def build_600_cell() -> CellComplex4:
    """600-cell boundary: edges at the largest inner product below 1, then cliques."""
    pts = six_hundred_cell_vertices()
    n = len(pts)
    if any(golden_dot(p, p) != 1 for p in pts):
        raise CoxeterError("600-cell vertices must be unit vectors")
    products = {}
    for i, j in combinations(range(n), 2):
        products[(i, j)] = golden_dot(pts[i], pts[j])
    below = [v for v in set(products.values()) if v < 1]
    edge_value = max(below)
    nbrs: list[set[int]] = [set() for _ in range(n)]
    edges = []
    for (i, j), v in products.items():
        if v == edge_value:
            nbrs[i].add(j)
            nbrs[j].add(i)
            edges.append(frozenset((i, j)))
    triangles = []
    tetrahedra = []
    for i in range(n):
        for j in sorted(x for x in nbrs[i] if x > i):
            common = sorted(x for x in nbrs[i] & nbrs[j] if x > j)
            for k in common:
                triangles.append(frozenset((i, j, k)))
                for m in common:
                    if m > k and m in nbrs[k]:
                        tetrahedra.append(frozenset((i, j, k, m)))
    return CellComplex4(
        [[frozenset((i,)) for i in range(n)], sorted(edges, key=sorted), triangles, tetrahedra],
        coords=pts,
    )


def dualize(c: CellComplex4) -> CellComplex4:
    """Order-reversed complex: new vertices are the old facets."""
    facets = c.faces[3]
    containing: dict[int, set[int]] = {}
    for idx, f in enumerate(facets):
        for v in f:
            containing.setdefault(v, set()).add(idx)
    new_faces: list[list[frozenset[int]]] = []
    for k in range(4):
        layer = []
        for g in c.faces[3 - k]:
            it = iter(g)
            acc = set(containing[next(it)])
            for v in it:
                acc &= containing[v]
            layer.append(frozenset(acc))
        new_faces.append(layer)
    return CellComplex4(new_faces)


def hypercube() -> CellComplex4:
    """The 4-cube on vertices {0,1}^4 (vertex id = bitmask)."""
    faces: list[list[frozenset[int]]] = []
    for k in range(4):
        layer = []
        for free in combinations(range(4), k):
            fixed = [i for i in range(4) if i not in free]
            for vals in product((0, 1), repeat=len(fixed)):
                verts = []
                for v in range(16):
                    if all(((v >> i) & 1) == b for i, b in zip(fixed, vals)):
                        verts.append(v)
                layer.append(frozenset(verts))
        faces.append(layer)
    return CellComplex4(faces)


def is_isomorphic_relabeling(a: CellComplex4, b: CellComplex4, mapping: dict[int, int]) -> bool:
    for k in range(4):
        image = {frozenset(mapping[v] for v in f) for f in a.faces[k]}
        if image != set(b.faces[k]):
            return False
    return True


# ---------------------------------------------------------------------------
# gluing


def _facet_graph(c: CellComplex4, facet: frozenset[int]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in facet}
    for e in c.edges_of(facet):
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    return adj


def facet_isomorphism(c: CellComplex4, f1: frozenset[int], f2: frozenset[int]) -> dict[int, int]:
    """A vertex bijection ``f1 -> f2`` carrying the faces of one facet onto the other."""
    g1, g2 = _facet_graph(c, f1), _facet_graph(c, f2)
    faces1 = [c.faces_in(k, f1) for k in range(3)]
    faces2 = [set(c.faces_in(k, f2)) for k in range(3)]
    order = []
    start = min(g1)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in sorted(g1[v]):
            if w not in seen:
                seen.add(w)
                queue.append(w)

    def extend(i: int, m: dict[int, int], used: set[int]):
        if i == len(order):
            if all(frozenset(m[v] for v in f) in faces2[k] for k in range(3) for f in faces1[k]):
                return dict(m)
            return None
        v = order[i]
        mapped_nbrs = [m[w] for w in g1[v] if w in m]
        if mapped_nbrs:
            cands = set(g2[mapped_nbrs[0]])
            for w in mapped_nbrs[1:]:
                cands &= g2[w]
        else:
            cands = set(g2)
        for t in sorted(cands - used):
            if len(g2[t]) != len(g1[v]):
                continue
            m[v] = t
            used.add(t)
            out = extend(i + 1, m, used)
            if out is not None:
                return out
            del m[v]
            used.discard(t)
        return None

    iso = extend(0, {}, set())
    if iso is None:
        raise CoxeterError("facets are not combinatorially isomorphic")
    return iso


@dataclass
class GlueResult:
    complex: CellComplex4
    left_map: dict[int, int]
    right_map: dict[int, int]


def glue(
    a: CellComplex4,
    facet_a: int,
    b: CellComplex4,
    facet_b: int,
    phi: dict[int, int],
) -> GlueResult:
    """Glue two right-angled simple 4-polytopes across facets identified by ``phi``.

    The shared facet and all its faces disappear; every face meeting it
    transversally merges with its partner on the other side.
    """
    ga = a.faces[3][facet_a]
    gb = b.faces[3][facet_b]
    if set(phi) != set(ga) or set(phi.values()) != set(gb):
        raise CoxeterError("phi must be a bijection between the glued facets")
    partners: dict[tuple[int, frozenset[int]], frozenset[int]] = {}
    for k in range(1, 4):
        for f in b.faces[k]:
            cut = f & gb
            if cut and not f <= gb:
                key = (k, cut)
                if key in partners:
                    raise CoxeterError("polytope is not simple along the glued facet")
                partners[key] = f
    raw: list[list[tuple[str, frozenset[int]]]] = [[] for _ in range(4)]
    used_b: set[tuple[int, frozenset[int]]] = set()
    for k in range(4):
        for f in a.faces[k]:
            if f <= ga:
                continue
            cut = f & ga
            if not cut:
                raw[k].append(("a", f))
                continue
            image = frozenset(phi[v] for v in cut)
            partner = partners.get((k, image))
            if partner is None:
                raise CoxeterError("no transverse partner across the glued facet")
            used_b.add((k, image))
            raw[k].append(("m", frozenset(("a", v) for v in f - ga) | frozenset(("b", v) for v in partner - gb)))
        for f in b.faces[k]:
            if f <= gb or f & gb:
                continue
            raw[k].append(("b", f))
    if len(used_b) != len(partners):
        raise CoxeterError("unmatched transverse faces on the second polytope")
    keep_a = sorted(v for f in a.faces[0] for v in f if v not in ga)
    keep_b = sorted(v for f in b.faces[0] for v in f if v not in gb)
    left = {v: i for i, v in enumerate(keep_a)}
    right = {v: i + len(keep_a) for i, v in enumerate(keep_b)}

    def relabel(tag, f):
        if tag == "a":
            return frozenset(left[v] for v in f)
        if tag == "b":
            return frozenset(right[v] for v in f)
        return frozenset(left[v] if side == "a" else right[v] for side, v in f)

    faces = [[relabel(tag, f) for tag, f in layer] for layer in raw]
    return GlueResult(CellComplex4(faces), left, right)


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class ChainSpec:
    """``k`` copies of a cell glued end to end.

    Each middle copy is glued to its predecessor along ``base_facet`` and to its
    successor along ``top_facet`` (default: the facet opposite ``base_facet``).
    """

    k: int
    base_facet: int = 0
    top_facet: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise CoxeterError("a chain needs at least one cell")


def chain_complex(spec: ChainSpec, cell: CellComplex4 | None = None) -> CellComplex4:
    cell = cell if cell is not None else dualize(build_600_cell())
    base = spec.base_facet
    top = spec.top_facet if spec.top_facet is not None else cell.opposite_facet(base)
    fb, ft = cell.faces[3][base], cell.faces[3][top]
    if spec.k > 1 and fb & ft:
        raise CoxeterError(f"gluing facets {base} and {top} are not disjoint")
    if spec.k == 1:
        return cell
    iso = facet_isomorphism(cell, ft, fb)
    current = cell
    top_map = {v: v for v in ft}  # cell label -> label in the chain so far
    for _ in range(spec.k - 1):
        current_top = current.faces[3].index(frozenset(top_map.values()))
        phi = {top_map[v]: iso[v] for v in ft}
        res = glue(current, current_top, cell, base, phi)
        current = res.complex
        top_map = {v: res.right_map[v] for v in ft}
    return current


def glue_chain(spec: ChainSpec, cell: CellComplex4 | None = None) -> FVector:
    """f-vector (V, E, F, C) of the chain polytope."""
    return chain_complex(spec, cell).f_vector


def double_to_singular_locus(v: int, f: int) -> SingularLocusDescription:
    """Singular curves in the twistor space of the doubled polytope.

    One sphere over each vertex and two (the two lifts) over each 2-face, all
    of genus 0.  A vertex sphere is the fiber over the vertex and carries the
    three orbits of octahedral points; the count on a face lift depends on the
    face and is left undetermined.
    """
    if v < 0 or f < 0:
        raise CoxeterError("face counts must be non-negative")
    vertex_spheres = [SingularComponent(0, VERTEX_SPHERE_Z2Z2) for _ in range(v)]
    lifts = [SingularComponent(0, None) for _ in range(2 * f)]
    return SingularLocusDescription(tuple(vertex_spheres + lifts))


VERTEX_SPHERE_Z2Z2 = len(octahedron_orbits())
