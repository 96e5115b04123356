"""Betti numbers of orbifold twistor spaces and their crepant resolutions.

Resolving a curve of genus g of transverse A1 singularities adds one class in
degree 2 and 4 and 2g classes in degree 3, raising the Euler characteristic by
2(1 - g).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple


class BettiError(ValueError):
    pass


@dataclass(frozen=True)
class SingularComponent:
    genus: int
    z2z2_count: int | None = 0  # None when the count is not determined

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 0:
            raise BettiError(f"genus must be a non-negative integer, got {self.genus!r}")
        if self.z2z2_count is not None and (not isinstance(self.z2z2_count, int) or self.z2z2_count < 0):
            raise BettiError(f"z2z2 count must be a non-negative integer, got {self.z2z2_count!r}")

    def to_json(self) -> dict:
        return {"genus": self.genus, "z2z2": self.z2z2_count}


@dataclass(frozen=True)
class SingularLocusDescription:
    components: tuple[SingularComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def m(self) -> int:
        return sum(c.genus for c in self.components)

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, data) -> SingularLocusDescription:
        if not isinstance(data, dict) or not isinstance(data.get("components"), list):
            raise BettiError('expected an object {"components": [...]}')
        comps = []
        for i, c in enumerate(data["components"]):
            if not isinstance(c, dict) or "genus" not in c:
                raise BettiError(f"components[{i}]: expected an object with a 'genus' field")
            unknown = set(c) - {"genus", "z2z2"}
            if unknown:
                raise BettiError(f"components[{i}]: unknown fields {sorted(unknown)}")
            comps.append(SingularComponent(c["genus"], c.get("z2z2", 0)))
        return cls(tuple(comps))


class BettiVector(NamedTuple):
    b0: int
    b1: int
    b2: int
    b3: int
    b4: int
    b5: int
    b6: int

    @property
    def euler(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self))

    def satisfies_duality(self) -> bool:
        return all(self[i] == self[6 - i] for i in range(3))

    def to_json(self) -> dict:
        return {"betti": list(self), "euler": self.euler, "poincare_duality": self.satisfies_duality()}


class Deltas(NamedTuple):
    b2: int
    b3: int
    euler: int


def resolution_deltas(desc: SingularLocusDescription | Iterable[SingularComponent]) -> Deltas:
    """Change of (b2, b3, chi) under the crepant resolution of the A1 curves."""
    if not isinstance(desc, SingularLocusDescription):
        desc = SingularLocusDescription(tuple(desc))
    n, m = desc.n, desc.m
    return Deltas(n, 2 * m, 2 * (n - m))


def doubled_polytope_base_betti() -> BettiVector:
    """Rational Betti numbers of the orbifold twistor space of a doubled right-angled polytope."""
    return BettiVector(1, 0, 1, 0, 1, 0, 1)


def resolved_betti_doubled(v: int, f: int) -> BettiVector:
    """Betti numbers after resolving the V + 2F rational curves of the doubled polytope."""
    if v < 0 or f < 0:
        raise BettiError("face counts must be non-negative")
    base = doubled_polytope_base_betti()
    d = resolution_deltas(SingularLocusDescription(tuple(SingularComponent(0, None) for _ in range(v + 2 * f))))
    b2 = base.b2 + d.b2
    b3 = base.b3 + d.b3
    return BettiVector(base.b0, base.b1, b2, b3, b2, base.b5, base.b6)


def theorem_b3_description(c: int, g: int) -> SingularLocusDescription:
    """A locus consisting of ``c`` curves of genus ``g``."""
    if c < 1:
        raise BettiError("need at least one curve")
    if g < 0:
        raise BettiError("genus must be non-negative")
    return SingularLocusDescription(tuple(SingularComponent(g, None) for _ in range(c)))
