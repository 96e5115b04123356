"""Exact rational convex polyhedra in dimension <= 4.

A :class:`Polyhedron` is stored by its irredundant H-representation
``{x : <n_i, x> >= l_i}`` with primitive integer inward normals.  Vertex and ray
enumeration is exhaustive over facet subsets, which is fine for the small model
polytopes this package deals with.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import floor, gcd
from typing import Iterable, Sequence

from . import linprog
from .exactnum import (
    det,
    format_fraction,
    integer_kernel,
    matvec,
    primitive,
    primitive_rational,
    rank,
    solve_integer,
    solve_rational,
    to_fraction,
)

MAX_DIM = 4
MAX_FACETS = 64


class PolyhedronError(ValueError):
    pass


class CapacityError(PolyhedronError):
    """Input beyond the exhaustive-enumeration limits."""


class LinealityError(PolyhedronError):
    """The polyhedron contains a line, so it has no vertices."""


@dataclass(frozen=True, order=True)
class HalfSpace:
    """``{x : <normal, x> >= level}`` with a primitive integer ``normal``."""

    normal: tuple[int, ...]
    level: Fraction = Fraction(0)

    def __post_init__(self):
        normal = tuple(int(x) for x in self.normal)
        if primitive(normal) != normal:
            raise PolyhedronError(f"normal {normal} is not primitive")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "level", to_fraction(self.level))

    @classmethod
    def from_rational(cls, normal: Sequence, level=0) -> HalfSpace:
        """Rescale an arbitrary nonzero rational normal to primitive form."""
        w, s = primitive_rational(normal)
        return cls(w, to_fraction(level) * s)

    @property
    def dim(self) -> int:
        return len(self.normal)

    def value(self, x: Sequence) -> Fraction:
        return sum((a * Fraction(b) for a, b in zip(self.normal, x, strict=True)), Fraction(0))

    def contains(self, x: Sequence) -> bool:
        return self.value(x) >= self.level

    def on_boundary(self, x: Sequence) -> bool:
        return self.value(x) == self.level

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "level": format_fraction(self.level)}

    @classmethod
    def from_json(cls, obj: dict) -> HalfSpace:
        return cls.from_rational(obj["normal"], to_fraction(obj["level"]))

    def __str__(self):
        terms = " + ".join(f"{a}*x{i + 1}" for i, a in enumerate(self.normal) if a)
        return f"{terms} >= {self.level}"


class Polyhedron:
    """An exact convex polyhedron given by halfspaces.

    On construction duplicate and redundant halfspaces are removed (with exact
    LP checks), and the rest are kept in lexicographic order, so two
    full-dimensional polyhedra are equal iff their halfspace tuples are.
    """

    def __init__(self, dim: int, halfspaces: Iterable[HalfSpace], *, normalize: bool = True):
        hs = []
        for h in halfspaces:
            if not isinstance(h, HalfSpace):
                h = HalfSpace.from_rational(*h)
            if h.dim != dim:
                raise PolyhedronError(f"halfspace {h} does not live in dimension {dim}")
            hs.append(h)
        self.dim = int(dim)
        hs = sorted(set(hs))
        self.is_empty = bool(hs) and linprog.feasible_point(
            [h.normal for h in hs], [h.level for h in hs]
        ) is None
        if normalize and not self.is_empty:
            hs = _remove_redundant(hs)
        self.halfspaces: tuple[HalfSpace, ...] = tuple(hs)
        if self.is_empty:
            self.is_full_dimensional = False
        elif not hs:
            self.is_full_dimensional = True
        else:
            margin = linprog.interior_margin([h.normal for h in hs], [h.level for h in hs])
            self.is_full_dimensional = margin is not None and margin > 0

    # -- basic protocol ------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Polyhedron):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        return self.halfspaces == other.halfspaces

    def __hash__(self):
        return hash((self.dim, None if self.is_empty else self.halfspaces))

    def __repr__(self):
        return f"Polyhedron(dim={self.dim}, halfspaces={[str(h) for h in self.halfspaces]})"

    def __len__(self):
        return len(self.halfspaces)

    @property
    def normals(self) -> list[tuple[int, ...]]:
        return [h.normal for h in self.halfspaces]

    @property
    def levels(self) -> list[Fraction]:
        return [h.level for h in self.halfspaces]

    def contains(self, x: Sequence) -> bool:
        return all(h.contains(x) for h in self.halfspaces)

    def active(self, x: Sequence) -> frozenset[int]:
        """Indices of halfspaces tight at the point ``x``."""
        return frozenset(i for i, h in enumerate(self.halfspaces) if h.on_boundary(x))

    def intersect(self, halfspaces: Iterable[HalfSpace]) -> Polyhedron:
        return Polyhedron(self.dim, list(self.halfspaces) + list(halfspaces))

    def minimize(self, objective: Sequence) -> linprog.LPResult:
        if not self.halfspaces:
            if any(objective):
                return linprog.LPResult(linprog.UNBOUNDED)
            return linprog.LPResult(linprog.OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in range(self.dim)))
        return linprog.minimize(objective, self.normals, self.levels)

    def index_of(self, normal: Sequence[int], level=None) -> int:
        normal = tuple(normal)
        for i, h in enumerate(self.halfspaces):
            if h.normal == normal and (level is None or h.level == to_fraction(level)):
                return i
        raise KeyError(f"no halfspace with normal {normal}")

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        return {"dim": self.dim, "halfspaces": [h.to_json() for h in self.halfspaces]}

    @classmethod
    def from_json(cls, obj: dict | str) -> Polyhedron:
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            dim = int(obj["dim"])
            hs = [HalfSpace.from_json(h) for h in obj["halfspaces"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PolyhedronError(f"malformed polyhedron JSON: {exc}") from exc
        return cls(dim, hs)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_inequalities(cls, rows: Iterable[Sequence]) -> Polyhedron:
        """Build from rows ``(n_1, ..., n_d, level)`` meaning ``<n, x> >= level``."""
        hs = [HalfSpace.from_rational(r[:-1], r[-1]) for r in rows]
        return cls(hs[0].dim, hs)

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence) -> Polyhedron:
        d = len(lower)
        hs = []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            hs.append(HalfSpace(tuple(e), lower[i]))
            e[i] = -1
            hs.append(HalfSpace(tuple(e), -to_fraction(upper[i])))
        return cls(d, hs)

    @classmethod
    def from_generators(cls, vertices: Sequence[Sequence], rays: Sequence[Sequence] = ()) -> Polyhedron:
        """Facet description of ``conv(vertices) + cone(rays)`` (full-dimensional input)."""
        if not vertices:
            raise PolyhedronError("at least one vertex is required")
        d = len(vertices[0])
        gens = [(Fraction(1),) + tuple(Fraction(x) for x in v) for v in vertices]
        gens += [(Fraction(0),) + tuple(Fraction(x) for x in r) for r in rays]
        if rank(gens) != d + 1:
            raise PolyhedronError("generators are not full-dimensional")
        # positive rescaling keeps every hyperplane through the origin
        gens = [primitive_rational(g)[0] for g in gens]
        hs = set()
        for subset in combinations(range(len(gens)), d):
            nu = _cross([gens[i] for i in subset])
            if not any(nu):
                continue
            vals = [sum(a * b for a, b in zip(nu, g)) for g in gens]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                nu = [-a for a in nu]
            else:
                continue
            if not any(nu[1:]):
                continue
            hs.add(HalfSpace.from_rational(nu[1:], -nu[0]))
        # each plane contains d independent homogenised generators, so it is a
        # facet: the set is irredundant and the polyhedron full-dimensional
        out = cls.__new__(cls)
        out.dim = d
        out.halfspaces = tuple(sorted(hs))
        out.is_empty = False
        out.is_full_dimensional = True
        return out


def _remove_redundant(hs: list[HalfSpace]) -> list[HalfSpace]:
    keep = list(hs)
    i = 0
    while i < len(keep):
        h = keep[i]
        others = keep[:i] + keep[i + 1 :]
        if others:
            res = linprog.minimize(h.normal, [o.normal for o in others], [o.level for o in others])
            if res.status == linprog.OPTIMAL and res.value >= h.level:
                keep.pop(i)
                continue
        i += 1
    return keep


# ---------------------------------------------------------------------------
# V-representation


@dataclass(frozen=True)
class VRepresentation:
    vertices: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[int, ...], ...]
    empty: bool = False

    @property
    def bounded(self) -> bool:
        return not self.rays

    def to_json(self) -> dict:
        return {
            "empty": self.empty,
            "vertices": [[format_fraction(x) for x in v] for v in self.vertices],
            "rays": [list(r) for r in self.rays],
        }


def _check_capacity(p: Polyhedron) -> None:
    if p.dim > MAX_DIM:
        raise CapacityError(f"dimension {p.dim} exceeds the limit {MAX_DIM}")
    if len(p.halfspaces) > MAX_FACETS:
        raise CapacityError(f"{len(p.halfspaces)} facets exceed the limit {MAX_FACETS}")


def _check_pointed(p: Polyhedron) -> None:
    if rank(p.normals) < p.dim:
        raise LinealityError("polyhedron contains a line; no vertex description")


def _minor(a: Sequence[Sequence[int]], skip: int) -> int:
    return det([[row[j] for j in range(len(row)) if j != skip] for row in a]) if len(a) else 1


def _cramer(a: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[list[int], int] | None:
    """Solve the square integer system ``a x = b`` as ``x = num / den`` with ``den > 0``.

    Returns None when ``a`` is singular.
    """
    n = len(a)
    dt = det(a)
    if dt == 0:
        return None
    num = []
    for i in range(n):
        # column i replaced by b, expanded along that column
        total = 0
        for r in range(n):
            if b[r]:
                rest = [row for k, row in enumerate(a) if k != r]
                total += (-1) ** (r + i) * b[r] * _minor(rest, i)
        num.append(total)
    if dt < 0:
        num, dt = [-x for x in num], -dt
    return num, dt


def _cross(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Generalised cross product of d-1 integer vectors in Z^d (zero iff dependent)."""
    d = len(a[0])
    return tuple((-1) ** j * _minor(a, j) for j in range(d))


def v_representation(p: Polyhedron) -> VRepresentation:
    """Exact vertices and extreme rays of a pointed polyhedron."""
    _check_capacity(p)
    if p.is_empty:
        return VRepresentation((), (), empty=True)
    _check_pointed(p)
    d = p.dim
    normals = p.normals
    # clear denominators: <n, x> >= l  <=>  <n, x> * q >= p with l = p/q
    den = 1
    for lv in p.levels:
        den = den * lv.denominator // gcd(den, lv.denominator)
    levels = [int(lv * den) for lv in p.levels]
    vertices = set()
    for subset in combinations(range(len(normals)), d):
        sol = _cramer([normals[i] for i in subset], [levels[i] for i in subset])
        if sol is None:
            continue
        num, dt = sol
        if all(sum(a * b for a, b in zip(n, num)) >= lv * dt for n, lv in zip(normals, levels)):
            vertices.add(tuple(Fraction(x, dt * den) for x in num))
    rays = set()
    for subset in combinations(range(len(normals)), d - 1):
        c = _cross([normals[i] for i in subset]) if d > 1 else (1,)
        if not any(c):
            continue
        r = primitive(c)
        for cand in (r, tuple(-x for x in r)):
            if all(sum(a_ * b for a_, b in zip(n, cand)) >= 0 for n in normals):
                rays.add(cand)
    return VRepresentation(tuple(sorted(vertices)), tuple(sorted(rays)))


# ---------------------------------------------------------------------------
# face lattice


@dataclass(frozen=True)
class Face:
    """A nonempty face, identified by the set of halfspaces tight on it."""

    active: frozenset[int]
    dim: int
    vertices: tuple[int, ...]
    rays: tuple[int, ...]

    @property
    def bounded(self) -> bool:
        return not self.rays


@dataclass
class FaceLattice:
    polyhedron: Polyhedron
    vrep: VRepresentation
    faces: dict[int, list[Face]] = field(default_factory=dict)
    incidences: list[tuple[frozenset[int], frozenset[int]]] = field(default_factory=list)

    @property
    def f_vector(self) -> tuple[int, ...]:
        top = max(self.faces) if self.faces else -1
        return tuple(len(self.faces.get(k, [])) for k in range(top + 1))

    def face(self, active: Iterable[int]) -> Face:
        key = frozenset(active)
        for fs in self.faces.values():
            for f in fs:
                if f.active == key:
                    return f
        raise KeyError(f"no face with active set {sorted(key)}")

    def facets(self) -> list[Face]:
        return self.faces.get(self.polyhedron.dim - 1, [])

    def bounded_edges(self) -> list[Face]:
        return [f for f in self.faces.get(1, []) if f.bounded]

    def vertex_points(self, f: Face) -> list[tuple[Fraction, ...]]:
        return [self.vrep.vertices[i] for i in f.vertices]


def _face_dim(vrep: VRepresentation, verts: Sequence[int], rays: Sequence[int]) -> int:
    v0 = vrep.vertices[verts[0]]
    dirs = [[a - b for a, b in zip(vrep.vertices[i], v0)] for i in verts[1:]]
    dirs += [list(vrep.rays[i]) for i in rays]
    return rank(dirs) if dirs else 0


def face_lattice(p: Polyhedron) -> FaceLattice:
    """All nonempty faces with their active sets and covering incidences."""
    vrep = v_representation(p)
    lattice = FaceLattice(p, vrep)
    if vrep.empty:
        return lattice
    n = len(p.halfspaces)
    vact = [p.active(v) for v in vrep.vertices]
    ract = [
        frozenset(i for i, h in enumerate(p.halfspaces) if sum(a * b for a, b in zip(h.normal, r)) == 0)
        for r in vrep.rays
    ]

    def close(active: frozenset[int]) -> Face | None:
        verts = tuple(i for i, a in enumerate(vact) if active <= a)
        if not verts:
            return None
        rays = tuple(i for i, a in enumerate(ract) if active <= a)
        common = frozenset(range(n))
        for i in verts:
            common &= vact[i]
        for i in rays:
            common &= ract[i]
        return Face(common, _face_dim(vrep, verts, rays), verts, rays)

    top = close(frozenset())
    seen = {top.active: top}
    queue = [top]
    while queue:
        f = queue.pop()
        for i in range(n):
            if i in f.active:
                continue
            g = close(f.active | {i})
            if g is not None and g.active not in seen:
                seen[g.active] = g
                queue.append(g)
    by_dim: dict[int, list[Face]] = {}
    for f in seen.values():
        by_dim.setdefault(f.dim, []).append(f)
    for k in by_dim:
        by_dim[k].sort(key=lambda f: (sorted(f.active), f.vertices))
    lattice.faces = dict(sorted(by_dim.items()))
    for k, fs in lattice.faces.items():
        for lower in fs:
            for upper in lattice.faces.get(k + 1, []):
                if upper.active < lower.active:
                    lattice.incidences.append((lower.active, upper.active))
    return lattice


# ---------------------------------------------------------------------------
# restriction to a face


def _as_active(p: Polyhedron, face) -> frozenset[int]:
    if isinstance(face, Face):
        return face.active
    if isinstance(face, int):
        return frozenset([face])
    if isinstance(face, HalfSpace):
        return frozenset([p.halfspaces.index(face)])
    return frozenset(face)


def face_chart(p: Polyhedron, face) -> tuple[tuple[Fraction, ...], list[list[int]]]:
    """Lattice-affine coordinates on the affine span of a face.

    Returns ``(origin, basis)``: face point ``u`` corresponds to
    ``origin + sum(u_j * basis[j])``, with ``basis`` a Hermite-reduced lattice
    basis of the face's direction space and ``origin`` reduced against it
    (integral whenever the span contains lattice points).
    """
    active = _as_active(p, face)
    normals = [p.halfspaces[i].normal for i in sorted(active)]
    levels = [p.halfspaces[i].level for i in sorted(active)]
    basis = integer_kernel(normals, p.dim)
    origin = None
    if all(lv.denominator == 1 for lv in levels):
        sol = solve_integer(normals, [int(lv) for lv in levels])
        if sol is not None:
            origin = [Fraction(x) for x in sol]
    if origin is None:
        origin = solve_rational(normals, levels)
        if origin is None:
            raise PolyhedronError("face equations are inconsistent")
    for b in basis:
        piv = next(k for k, x in enumerate(b) if x)
        f = floor(origin[piv] / b[piv])
        if f:
            origin = [o - f * x for o, x in zip(origin, b)]
    return tuple(origin), basis


def restrict_to_face(p: Polyhedron, face) -> Polyhedron:
    """The face as a polyhedron in its own lattice-affine coordinates."""
    active = _as_active(p, face)
    if any(i >= len(p.halfspaces) or i < 0 for i in active):
        raise PolyhedronError("face refers to unknown halfspaces")
    origin, basis = face_chart(p, active)
    k = len(basis)
    if k == 0:
        raise PolyhedronError("cannot restrict to a zero-dimensional face")
    hs = []
    for i, h in enumerate(p.halfspaces):
        if i in active:
            continue
        w = matvec(basis, h.normal)
        shift = h.level - h.value(origin)
        if not any(w):
            if shift > 0:
                raise PolyhedronError("the requested face is empty")
            continue
        hs.append(HalfSpace.from_rational(w, shift))
    q = Polyhedron(k, hs)
    if q.is_empty:
        raise PolyhedronError("the requested face is empty")
    return q
