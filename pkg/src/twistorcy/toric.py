"""Toric reading of rational polyhedra.

Normal fans, Delzant and orbifold checks, cuts by extra halfspaces, crepancy
certificates, normal-bundle splitting of torus-invariant curves, self-intersection
of curves on toric surfaces, and polytope-level checks of semilocal cutting data.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from typing import Iterable, Sequence

from . import linprog
from .exactnum import (
    det,
    dot,
    format_fraction,
    invariant_factors,
    primitive,
    primitive_rational,
    rank,
    solve_integer,
    solve_rational,
    to_fraction,
)
from .polytope import (
    Face,
    FaceLattice,
    HalfSpace,
    Polyhedron,
    PolyhedronError,
    face_lattice,
    restrict_to_face,
    v_representation,
)


class ToricError(PolyhedronError):
    pass


class NonSimpleVertexError(ToricError):
    def __init__(self, vertex, active):
        self.vertex = tuple(vertex)
        self.active = tuple(sorted(active))
        pts = ", ".join(str(x) for x in self.vertex)
        super().__init__(f"vertex ({pts}) is not simple: {len(self.active)} facets meet there")


class CutFeasibilityError(ToricError):
    pass


class VacuousCutWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# cones and fans


@dataclass(frozen=True)
class Cone:
    rays: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(primitive(r) for r in self.rays))

    @property
    def dim(self) -> int:
        return rank(self.rays) if self.rays else 0

    @property
    def simplicial(self) -> bool:
        return len(self.rays) == self.dim

    @property
    def smooth(self) -> bool:
        return self.simplicial and all(f == 1 for f in invariant_factors(self.rays))

    def contains(self, v: Sequence[int]) -> bool:
        """Whether ``v`` is a non-negative combination of the rays (simplicial cones only)."""
        if not self.simplicial:
            raise ToricError("membership is only implemented for simplicial cones")
        coeffs = solve_rational([list(c) for c in zip(*self.rays)], list(v))
        if coeffs is None:
            return False
        # the system may have been solved in a subspace; confirm it reproduces v
        back = [sum(c * r[k] for c, r in zip(coeffs, self.rays)) for k in range(len(v))]
        return back == list(v) and all(c >= 0 for c in coeffs)


@dataclass
class Fan:
    """Rays plus maximal cones given as tuples of ray indices."""

    rays: list[tuple[int, ...]]
    cones: list[tuple[int, ...]]

    @property
    def rank(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    @classmethod
    def from_cones(cls, cones: Iterable[Iterable[Sequence[int]]]) -> Fan:
        rays: list[tuple[int, ...]] = []
        idx = []
        for cone in cones:
            ids = []
            for r in cone:
                r = primitive(r)
                if r not in rays:
                    rays.append(r)
                ids.append(rays.index(r))
            idx.append(tuple(sorted(ids)))
        return cls(rays, idx)

    def cone(self, i: int) -> Cone:
        return Cone(tuple(self.rays[k] for k in self.cones[i]))

    def faces(self, k: int) -> list[tuple[int, ...]]:
        """All k-element subsets of maximal cones (the k-dimensional faces when simplicial)."""
        out = set()
        for c in self.cones:
            out.update(combinations(c, k))
        return sorted(out)

    def cones_containing(self, ids: Iterable[int]) -> list[int]:
        ids = set(ids)
        return [i for i, c in enumerate(self.cones) if ids <= set(c)]

    def interior_walls(self) -> list[tuple[int, ...]]:
        walls = []
        for w in self.faces(self.rank - 1):
            if len(self.cones_containing(w)) == 2:
                walls.append(w)
        return walls

    def ray_index(self, v: Sequence[int]) -> int:
        return self.rays.index(primitive(v))


def normal_fan(p: Polyhedron) -> Fan:
    """Inward facet normals as rays; one maximal cone per vertex."""
    vrep = v_representation(p)
    cones = [tuple(sorted(p.active(v))) for v in vrep.vertices]
    return Fan(list(p.normals), cones)


# ---------------------------------------------------------------------------
# smoothness and orbifold groups


@dataclass(frozen=True)
class VertexVerdict:
    vertex: tuple[Fraction, ...]
    normals: tuple[tuple[int, ...], ...]
    factors: tuple[int, ...]

    @property
    def smooth(self) -> bool:
        return not self.factors

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out

    def to_json(self) -> dict:
        return {
            "vertex": [format_fraction(x) for x in self.vertex],
            "normals": [list(n) for n in self.normals],
            "verdict": "smooth" if self.smooth else "orbifold",
            "invariant_factors": list(self.factors),
        }


def _torsion(normals: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return tuple(f for f in invariant_factors(normals) if f != 1)


def vertex_smoothness(p: Polyhedron) -> list[VertexVerdict]:
    """Delzant test at every vertex: smooth iff the normals form a lattice basis."""
    out = []
    for v in v_representation(p).vertices:
        active = p.active(v)
        if len(active) != p.dim:
            raise NonSimpleVertexError(v, active)
        normals = tuple(p.halfspaces[i].normal for i in sorted(active))
        if abs(det(normals)) == 1:
            out.append(VertexVerdict(v, normals, ()))
        else:
            out.append(VertexVerdict(v, normals, _torsion(normals)))
    return out


def is_delzant(p: Polyhedron) -> bool:
    return all(v.smooth for v in vertex_smoothness(p))


def face_of_point(p: Polyhedron, x: Sequence) -> frozenset[int]:
    """Active set of the smallest face containing the point ``x``."""
    if not p.contains(x):
        raise ToricError(f"point {tuple(x)} is not in the polyhedron")
    return p.active(x)


def _active_set(p: Polyhedron, face) -> frozenset[int]:
    if isinstance(face, Face):
        return face.active
    return frozenset(face)


def face_orbifold_group(p: Polyhedron, face) -> tuple[int, ...]:
    """Non-unit invariant factors of the lattice modulo the normals through a face."""
    active = _active_set(p, face)
    normals = [p.halfspaces[i].normal for i in sorted(active)]
    codim = rank(normals) if normals else 0
    if len(normals) != codim:
        raise ToricError(
            f"face has {len(normals)} facets through it but codimension {codim}; normal data not simplicial"
        )
    if not normals:
        return ()
    return _torsion(normals)


def singular_faces(p: Polyhedron, lattice: FaceLattice | None = None) -> list[tuple[Face, tuple[int, ...]]]:
    """Proper faces whose normal span is not saturated, with their torsion."""
    lattice = lattice or face_lattice(p)
    out = []
    for k in sorted(lattice.faces):
        if k == p.dim:
            continue
        for f in lattice.faces[k]:
            normals = [p.halfspaces[i].normal for i in sorted(f.active)]
            t = _torsion(normals)
            if t:
                out.append((f, t))
    return out


# ---------------------------------------------------------------------------
# cuts


@dataclass(frozen=True)
class CutSpec:
    """Extra halfspaces ``<n, x> >= level`` to intersect with (cut levels)."""

    halfspaces: tuple[HalfSpace, ...]

    def __post_init__(self):
        object.__setattr__(self, "halfspaces", tuple(sorted(set(self.halfspaces))))

    @classmethod
    def symmetric(cls, normals: Iterable[Sequence[int]], level) -> CutSpec:
        level = to_fraction(level)
        if level <= 0:
            raise ToricError("cut level must be strictly positive")
        return cls(tuple(HalfSpace(tuple(n), level) for n in normals))

    def check_levels(self) -> None:
        bad = [h for h in self.halfspaces if h.level <= 0]
        if bad:
            raise ToricError(f"cut levels must be strictly positive: {', '.join(map(str, bad))}")

    @property
    def is_symmetric(self) -> bool:
        return len({h.level for h in self.halfspaces}) <= 1

    def to_json(self) -> dict:
        return {"halfspaces": [h.to_json() for h in self.halfspaces]}

    @classmethod
    def from_json(cls, obj: dict | str) -> CutSpec:
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(tuple(HalfSpace.from_json(h) for h in obj["halfspaces"]))


def vacuous_cuts(p: Polyhedron, spec: CutSpec) -> list[HalfSpace]:
    """Halfspaces of ``spec`` already satisfied on all of ``p`` (their cut does nothing)."""
    out = []
    for h in spec.halfspaces:
        res = p.minimize(h.normal)
        if res.status == linprog.OPTIMAL and res.value >= h.level:
            out.append(h)
    return out


def apply_cut(p: Polyhedron, spec: CutSpec) -> Polyhedron:
    """Intersect with the cut halfspaces; warns about vacuous ones."""
    result = p.intersect(spec.halfspaces)
    if result.is_empty:
        raise CutFeasibilityError("cut leaves an empty polyhedron")
    if not result.is_full_dimensional:
        raise CutFeasibilityError("cut leaves a lower-dimensional polyhedron")
    unused = vacuous_cuts(p, spec)
    if unused:
        warnings.warn(
            f"vacuous cut halfspaces: {', '.join(map(str, unused))}", VacuousCutWarning, stacklevel=2
        )
    return result


def compatibility_reduction(p: Polyhedron, spec: CutSpec) -> CutSpec:
    """Drop every cut halfspace that holds strictly on all of ``p``."""
    keep = []
    for h in spec.halfspaces:
        res = p.minimize(h.normal)
        if res.status == linprog.OPTIMAL and res.value > h.level:
            continue
        keep.append(h)
    return CutSpec(tuple(keep))


def _face_generators_on(lattice: FaceLattice, f: Face, normal, value) -> bool:
    vrep = lattice.vrep
    return all(dot(normal, vrep.vertices[i]) == value for i in f.vertices) and all(
        dot(normal, vrep.rays[i]) == 0 for i in f.rays
    )


def check_cut_feasibility(p: Polyhedron, spec: CutSpec) -> None:
    """Raise unless the cut only touches the singular faces it is meant to resolve.

    A halfspace resolves the faces of ``p`` on which its functional is minimal.
    Every other singular face must lie strictly inside every cut halfspace.
    """
    result = p.intersect(spec.halfspaces)
    if result.is_empty or not result.is_full_dimensional:
        raise CutFeasibilityError("cut region is empty or not full-dimensional")
    lattice = face_lattice(p)
    resolved = set()
    for h in spec.halfspaces:
        res = p.minimize(h.normal)
        if res.status != linprog.OPTIMAL:
            continue
        for fs in lattice.faces.values():
            for f in fs:
                if _face_generators_on(lattice, f, h.normal, res.value):
                    resolved.add(f.active)
    for f, torsion in singular_faces(p, lattice):
        if f.active in resolved:
            continue
        eqs = []
        for i in f.active:
            g = p.halfspaces[i]
            eqs.append(HalfSpace(tuple(-x for x in g.normal), -g.level))
        face_poly = p.intersect(eqs)
        for h in spec.halfspaces:
            res = face_poly.minimize(h.normal)
            if res.status == linprog.UNBOUNDED or (res.status == linprog.OPTIMAL and res.value <= h.level):
                witness = res.point if res.point is not None else None
                raise CutFeasibilityError(
                    f"cut {h} reaches the singular face with facets {sorted(f.active)} "
                    f"(torsion {torsion}) that it does not resolve"
                    + (f"; witness {tuple(str(x) for x in witness)}" if witness else "")
                )


def default_resolution_cut(p: Polyhedron, level=1) -> CutSpec:
    """Blow up the maximal singular faces at distance ``level``.

    For each maximal singular face the new normal is the primitive vector along
    the sum of the normals through the face, and its level sits ``level`` above
    the (constant) value of that functional on the face.
    """
    level = to_fraction(level)
    if level <= 0:
        raise ToricError("cut level must be strictly positive")
    sing = singular_faces(p)
    maximal = [f for f, _ in sing if not any(g.active < f.active for g, _ in sing)]
    hs = []
    for f in maximal:
        total = [sum(p.halfspaces[i].normal[k] for i in f.active) for k in range(p.dim)]
        base = sum((p.halfspaces[i].level for i in f.active), Fraction(0))
        w, s = primitive_rational(total)
        hs.append(HalfSpace(w, base * s + level))
    return CutSpec(tuple(hs))


# ---------------------------------------------------------------------------
# crepancy


@dataclass(frozen=True)
class CrepancyResult:
    certificate: tuple[int, ...] | None
    violating_ray: tuple[int, ...] | None = None
    pairing: Fraction | None = None

    @property
    def crepant(self) -> bool:
        return self.certificate is not None

    def to_json(self) -> dict:
        if self.crepant:
            return {"crepant": True, "m": list(self.certificate)}
        return {
            "crepant": False,
            "violating_ray": list(self.violating_ray) if self.violating_ray else None,
            "pairing": format_fraction(self.pairing) if self.pairing is not None else None,
        }


def _height_one(rays: Sequence[Sequence[int]], dim: int):
    """Integer covector with value 1 on every ray, free coordinates zeroed; None if none."""
    if not rays:
        return tuple([0] * dim)
    a = [list(r) for r in rays]
    b = [1] * len(rays)
    x = solve_rational(a, b)
    if x is None:
        return None
    if all(v.denominator == 1 for v in x):
        return tuple(int(v) for v in x)
    z = solve_integer(a, b)
    return tuple(z) if z is not None else None


def crepancy_certificate(old_rays: Sequence[Sequence[int]], new_rays: Sequence[Sequence[int]]) -> CrepancyResult:
    """Find ``m`` with ``<m, v> = 1`` on all old and new rays.

    On failure, reports the first ray that breaks the system together with its
    pairing against the certificate of the rays before it.
    """
    rays = [tuple(r) for r in old_rays] + [primitive(r) for r in new_rays]
    dim = len(rays[0])
    m = _height_one(rays[:0], dim)
    for k in range(1, len(rays) + 1):
        nxt = _height_one(rays[:k], dim)
        if nxt is None:
            v = rays[k - 1]
            return CrepancyResult(None, v, Fraction(dot(m, v)))
        m = nxt
    return CrepancyResult(m)


# ---------------------------------------------------------------------------
# curves on toric threefolds


@dataclass(frozen=True)
class WallRelation:
    wall: tuple[tuple[int, ...], tuple[int, ...]]
    flanking: tuple[tuple[int, ...], tuple[int, ...]]
    a: int
    b: int

    @property
    def splitting(self) -> tuple[int, int]:
        return (self.a, self.b)

    def holds(self) -> bool:
        (u1, u2), (u3, u4) = self.wall, self.flanking
        return all(u3[k] + u4[k] + self.a * u1[k] + self.b * u2[k] == 0 for k in range(len(u1)))

    def to_json(self) -> dict:
        return {
            "wall": [list(u) for u in self.wall],
            "flanking": [list(u) for u in self.flanking],
            "splitting": [self.a, self.b],
        }


def wall_relation(fan: Fan, wall: Sequence) -> WallRelation:
    """The relation ``u3 + u4 + a*u1 + b*u2 = 0`` across an interior wall.

    ``wall`` is a pair of rays (vectors) or of ray indices into ``fan.rays``.
    """
    if fan.rank != 3:
        raise ToricError("wall relations are defined for rank-3 fans")
    ids = []
    for w in wall:
        ids.append(w if isinstance(w, int) else fan.ray_index(w))
    if len(ids) != 2:
        raise ToricError("a wall is a 2-cone")
    containing = fan.cones_containing(ids)
    if len(containing) != 2:
        raise ToricError(f"wall lies in {len(containing)} maximal cones; it is not interior")
    flank = []
    for ci in containing:
        cone = fan.cone(ci)
        if not cone.smooth or len(cone.rays) != 3:
            raise ToricError(f"flanking cone {cone.rays} is not smooth simplicial")
        (extra,) = [k for k in fan.cones[ci] if k not in ids]
        flank.append(fan.rays[extra])
    u1, u2 = fan.rays[ids[0]], fan.rays[ids[1]]
    u3, u4 = flank
    rhs = [-(x + y) for x, y in zip(u3, u4)]
    sol = solve_rational([[u1[k], u2[k]] for k in range(3)], rhs)
    if sol is None:
        raise ToricError("flanking rays do not satisfy a wall relation")
    if any(s.denominator != 1 for s in sol):
        raise ToricError("wall relation has non-integral coefficients")
    return WallRelation((u1, u2), (u3, u4), int(sol[0]), int(sol[1]))


def curve_normal_bundle(fan: Fan, wall: Sequence) -> tuple[int, int]:
    """Splitting type ``(a, b)``: the curve has normal bundle O(a) + O(b)."""
    return wall_relation(fan, wall).splitting


# ---------------------------------------------------------------------------
# curves on toric surfaces


def _angle_key(v: Sequence[int]):
    half = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    return half


def _angle_cmp(u, v) -> int:
    hu, hv = _angle_key(u), _angle_key(v)
    if hu != hv:
        return hu - hv
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def sort_by_angle(rays: Iterable[Sequence[int]]) -> list[tuple[int, int]]:
    return sorted((tuple(r) for r in rays), key=cmp_to_key(_angle_cmp))


def _relation_coefficient(prev, nxt, v) -> int:
    total = [a + b for a, b in zip(prev, nxt)]
    k = next(i for i, x in enumerate(v) if x)
    s = Fraction(-total[k], v[k])
    if any(total[i] + s * v[i] != 0 for i in range(2)) or s.denominator != 1:
        raise ToricError(f"no integral relation {prev} + {nxt} + s*{v} = 0")
    return int(s)


def fan_self_intersections(rays: Iterable[Sequence[int]]) -> list[tuple[tuple[int, int], int]]:
    """Self-intersection of each curve of a complete smooth 2D fan.

    Returns ``(ray, s)`` pairs in counter-clockwise order, where
    ``prev + next + s * ray = 0``.
    """
    rs = sort_by_angle(primitive(r) for r in rays)
    n = len(rs)
    if n < 3:
        raise ToricError("a complete 2D fan needs at least three rays")
    for i in range(n):
        u, v = rs[i], rs[(i + 1) % n]
        if u[0] * v[1] - u[1] * v[0] != 1:
            raise ToricError(f"cone ({u}, {v}) is not smooth or the fan is not complete")
    return [(rs[i], _relation_coefficient(rs[i - 1], rs[(i + 1) % n], rs[i])) for i in range(n)]


@dataclass(frozen=True)
class EdgeAnalysis:
    endpoints: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    normal: tuple[int, ...]
    self_intersection: int
    lattice_length: Fraction

    def to_json(self) -> dict:
        return {
            "endpoints": [[format_fraction(x) for x in e] for e in self.endpoints],
            "normal": list(self.normal),
            "self_intersection": self.self_intersection,
            "lattice_length": format_fraction(self.lattice_length),
        }


def polygon_edge_analysis(q: Polyhedron) -> list[EdgeAnalysis]:
    """Self-intersection and lattice length of every bounded edge of a smooth polygon."""
    if q.dim != 2:
        raise ToricError("edge analysis needs a 2-dimensional polyhedron")
    lattice = face_lattice(q)
    for vv in vertex_smoothness(q):
        if not vv.smooth:
            raise ToricError(f"face is not smooth at {tuple(str(x) for x in vv.vertex)}")
    out = []
    for edge in lattice.bounded_edges():
        (i,) = edge.active
        v = q.halfspaces[i].normal
        pa, pb = lattice.vertex_points(edge)
        neighbours = []
        for pt in (pa, pb):
            (j,) = q.active(pt) - {i}
            neighbours.append(q.halfspaces[j].normal)
        s = _relation_coefficient(neighbours[0], neighbours[1], v)
        diff = [b - a for a, b in zip(pa, pb)]
        d, scale = primitive_rational(diff)
        out.append(EdgeAnalysis((pa, pb), v, s, 1 / scale))
    return out


def surface_face_analysis(p: Polyhedron, facet) -> list[EdgeAnalysis]:
    """Curves on the toric surface of a facet of a 3-polyhedron."""
    if p.dim != 3:
        raise ToricError("surface analysis needs a 3-dimensional polyhedron")
    return polygon_edge_analysis(restrict_to_face(p, facet))


# ---------------------------------------------------------------------------
# semilocal cutting data


@dataclass(frozen=True)
class Hamiltonian:
    """A moment-map coordinate: a label and the integral covector it pairs with."""

    label: str
    covector: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "covector", tuple(int(x) for x in self.covector))


@dataclass(frozen=True)
class Region:
    """Polyhedral region; halfspaces flagged strict are open (``>``)."""

    dim: int
    halfspaces: tuple[HalfSpace, ...]
    strict: tuple[bool, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "halfspaces", tuple(self.halfspaces))
        strict = tuple(self.strict) or (False,) * len(self.halfspaces)
        if len(strict) != len(self.halfspaces):
            raise ToricError("strict flags must match the halfspaces")
        object.__setattr__(self, "strict", strict)

    def point(self, extra: Sequence[tuple[HalfSpace, bool]] = ()):
        hs = list(self.halfspaces) + [h for h, _ in extra]
        st = list(self.strict) + [s for _, s in extra]
        return linprog.feasible_point([h.normal for h in hs], [h.level for h in hs], st, self.dim)


@dataclass
class CuttingChart:
    id: str
    hamiltonians: tuple[Hamiltonian, ...]
    levels: tuple[Fraction, ...]
    overlaps: dict[str, Region] = field(default_factory=dict)

    def __post_init__(self):
        self.hamiltonians = tuple(self.hamiltonians)
        self.levels = tuple(to_fraction(c) for c in self.levels)
        if len(self.levels) != len(self.hamiltonians):
            raise ToricError(f"chart {self.id}: level vector length differs from Hamiltonian count")

    @property
    def k(self) -> int:
        return len(self.hamiltonians)


@dataclass(frozen=True)
class CoverViolation:
    condition: str
    charts: tuple[str, str]
    witness: tuple[Fraction, ...] | None
    detail: str

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "charts": list(self.charts),
            "witness": [format_fraction(x) for x in self.witness] if self.witness else None,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CoverReport:
    violation: CoverViolation | None = None

    @property
    def valid(self) -> bool:
        return self.violation is None


def validate_semilocal_cover(charts: Sequence[CuttingChart]) -> CoverReport:
    """Check matching, level agreement and strict positivity on every overlap."""
    by_id = {c.id: c for c in charts}
    pairs: dict[tuple[str, str], Region] = {}
    for c in charts:
        for other, region in c.overlaps.items():
            if other not in by_id:
                raise ToricError(f"chart {c.id} overlaps unknown chart {other}")
            key = tuple(sorted((c.id, other)))
            pairs.setdefault(key, region)
    for (ida, idb), region in sorted(pairs.items()):
        if region.point() is None:
            continue
        alpha, beta = by_id[ida], by_id[idb]
        if beta.k > alpha.k:
            alpha, beta = beta, alpha
        names = (alpha.id, beta.id)
        matched: dict[int, int] = {}
        for j, hb in enumerate(beta.hamiltonians):
            i = next((i for i, ha in enumerate(alpha.hamiltonians) if ha == hb and i not in matched), None)
            if i is None:
                return CoverReport(
                    CoverViolation("matching", names, region.point(), f"{hb.label} of {beta.id} has no partner in {alpha.id}")
                )
            matched[i] = j
        for i, j in sorted(matched.items()):
            if alpha.levels[i] != beta.levels[j]:
                return CoverReport(
                    CoverViolation(
                        "level",
                        names,
                        region.point(),
                        f"{alpha.hamiltonians[i].label}: level {alpha.levels[i]} on {alpha.id} "
                        f"but {beta.levels[j]} on {beta.id}",
                    )
                )
        for i, h in enumerate(alpha.hamiltonians):
            if i in matched:
                continue
            c = alpha.levels[i]
            below = HalfSpace.from_rational([-x for x in h.covector], -c)
            witness = region.point([(below, False)])
            if witness is not None:
                return CoverReport(
                    CoverViolation(
                        "strictness",
                        names,
                        witness,
                        f"{h.label} <= {c} somewhere on the overlap of {alpha.id} and {beta.id}",
                    )
                )
    return CoverReport()
