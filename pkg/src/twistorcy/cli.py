"""Command-line front end: ``twistorcy <command> ...``.

Every command prints a deterministic JSON report (or a plain-text table with
``--format table``).  Rationals are written as "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import betti, coxeter, toric, twistorfiber
from .exactnum import format_fraction
from .polytope import (
    LinealityError,
    Polyhedron,
    PolyhedronError,
    restrict_to_face,
    v_representation,
)

SCHEMA_VERSION = 1
WORKERS_ENV = "TWISTORCY_WORKERS"

MODELS: dict[str, Polyhedron] = {
    "P": Polyhedron.from_inequalities([(1, 1, -1, 0), (1, -1, 1, 0), (-1, 1, 1, 0)]),
    "A1xC": Polyhedron.from_inequalities([(2, -1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]),
    "cube": Polyhedron.box((0, 0, 0), (1, 1, 1)),
}


class UsageError(Exception):
    pass


def max_workers() -> int:
    """Worker cap for independent checks, from ``TWISTORCY_WORKERS``."""
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


@dataclass
class CommandConfig:
    subcommand: str
    input: str | None = None
    output: str | None = None
    epsilon: Fraction = Fraction(1)
    cut: str | None = None
    chain: int | None = None
    selftest: bool = False
    doubled: tuple[int, int] | None = None
    section: str | None = None
    perturb: list[str] = field(default_factory=list)
    fmt: str = "json"
    verbose: bool = False


@dataclass
class Report:
    command: str
    data: dict
    exit_status: int = 0

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "command": self.command, **self.data}

    def render(self, fmt: str = "json") -> str:
        if fmt == "table":
            return "\n".join(_table_lines(self.to_json())) + "\n"
        return json.dumps(self.to_json(), indent=2) + "\n"


def _nested(v) -> bool:
    return isinstance(v, dict) or (isinstance(v, list) and any(isinstance(x, dict) for x in v))


def _table_lines(obj, prefix: str = "") -> list[str]:
    items = obj.items() if isinstance(obj, dict) else ((f"[{i}]", v) for i, v in enumerate(obj))
    lines = []
    for k, v in items:
        key = f"{prefix}{k}" if str(k).startswith("[") else (f"{prefix}.{k}" if prefix else str(k))
        if _nested(v) and v:
            lines.extend(_table_lines(v, key))
        else:
            lines.append(f"{key:<44} {json.dumps(v)}")
    return lines


def _pt(v) -> list[str]:
    return [format_fraction(x) for x in v]


# ---------------------------------------------------------------------------
# input


def _load_json(source: str, what: str):
    """Parse inline JSON or the contents of a file."""
    text = source
    if not source.lstrip().startswith(("{", "[")):
        path = Path(source)
        if not path.exists():
            raise UsageError(f"{what}: no such file {source!r}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_polyhedron(source: str) -> Polyhedron:
    if source in MODELS:
        return MODELS[source]
    data = _load_json(source, "polyhedron")
    try:
        return Polyhedron.from_json(data)
    except PolyhedronError as exc:
        raise UsageError(str(exc)) from None


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


# ---------------------------------------------------------------------------
# resolve


def _walls(fan: toric.Fan, new_normals: set) -> list[toric.WallRelation]:
    out = []
    for w in fan.interior_walls():
        pair = [fan.rays[i] for i in w]
        pair.sort(key=lambda r: (r not in new_normals, r))
        out.append(toric.wall_relation(fan, pair))
    return out


def run_resolve(config: CommandConfig) -> Report:
    if config.input is None:
        raise UsageError("resolve needs an input polyhedron (file, inline JSON or one of " + ", ".join(MODELS) + ")")
    p = load_polyhedron(config.input)
    if p.dim != 3:
        raise UsageError("resolve works on 3-dimensional polyhedra")
    if config.epsilon <= 0:
        raise UsageError("cut level must be strictly positive")
    try:
        before = toric.vertex_smoothness(p)
    except LinealityError as exc:
        raise UsageError(str(exc)) from None
    data: dict[str, Any] = {"input": p.to_json(), "before": [v.to_json() for v in before]}
    if all(v.smooth for v in before):
        data["status"] = "already Delzant, no cut applied"
        data["cut"] = None
        data["after"] = data["before"]
        data["certificates"] = []
        data["walls"] = [w.to_json() for w in _walls(toric.normal_fan(p), set())]
        data["face_analyses"] = []
        return Report("resolve", data)

    if config.cut is not None:
        spec = toric.CutSpec.from_json(_load_json(config.cut, "cut"))
        spec.check_levels()
    else:
        spec = toric.default_resolution_cut(p, config.epsilon)
    toric.check_cut_feasibility(p, spec)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", toric.VacuousCutWarning)
        r = toric.apply_cut(p, spec)
    after = toric.vertex_smoothness(r)
    new_normals = {h.normal for h in spec.halfspaces}

    certificates = []
    for face, torsion in toric.singular_faces(p):
        old = [p.halfspaces[i].normal for i in sorted(face.active)]
        cone = toric.Cone(tuple(old))
        new = [n for n in sorted(new_normals) if cone.contains(n)]
        res = toric.crepancy_certificate(old, new)
        certificates.append(
            {"face_normals": [list(n) for n in old], "torsion": list(torsion), "new_rays": [list(n) for n in new], **res.to_json()}
        )

    analyses = []
    for i, h in enumerate(r.halfspaces):
        if h.normal not in new_normals:
            continue
        entry: dict[str, Any] = {"facet": h.to_json()}
        try:
            entry["edges"] = [e.to_json() for e in toric.surface_face_analysis(r, i)]
        except (toric.ToricError, PolyhedronError) as exc:
            entry["error"] = str(exc)
        analyses.append(entry)

    data.update(
        {
            "status": "resolved" if all(v.smooth for v in after) else "partially resolved",
            "cut": spec.to_json(),
            "asymmetric_levels": not spec.is_symmetric,
            "vacuous": [str(w.message) for w in caught],
            "result": r.to_json(),
            "after": [v.to_json() for v in after],
            "certificates": certificates,
            "walls": [w.to_json() for w in _walls(toric.normal_fan(r), new_normals)],
            "face_analyses": analyses,
        }
    )
    return Report("resolve", data)


# ---------------------------------------------------------------------------
# other commands


def run_fiber_action(config: CommandConfig) -> Report:
    return Report("fiber-action", twistorfiber.fiber_report())


def run_betti(config: CommandConfig) -> Report:
    data: dict[str, Any] = {}
    desc = None
    if config.input is not None:
        try:
            desc = betti.SingularLocusDescription.from_json(_load_json(config.input, "description"))
        except betti.BettiError as exc:
            raise UsageError(str(exc)) from None
    elif config.doubled is not None:
        desc = coxeter.double_to_singular_locus(*config.doubled)
    if desc is None:
        raise UsageError("betti needs a description or --doubled V F")
    d = betti.resolution_deltas(desc)
    data["n"] = desc.n
    data["m"] = desc.m
    data["deltas"] = {"b2": d.b2, "b3": d.b3, "euler": d.euler}
    if config.doubled is not None:
        v, f = config.doubled
        data["doubled"] = {
            "V": v,
            "F": f,
            "base": betti.doubled_polytope_base_betti().to_json(),
            "resolved": betti.resolved_betti_doubled(v, f).to_json(),
        }
    return Report("betti", data)


def run_coxeter(config: CommandConfig) -> Report:
    if config.selftest:
        cube = coxeter.hypercube()
        glued = coxeter.glue_chain(coxeter.ChainSpec(2), cube)
        expected = coxeter.FVector(16, 32, 24, 8)
        ok = glued == expected
        data = {"selftest": "cube-chain", "expected": list(expected), "computed": list(glued), "pass": ok}
        return Report("coxeter", data, 0 if ok else 1)
    if config.chain is None:
        raise UsageError("coxeter needs --chain K or --selftest")
    if config.chain < 1:
        raise UsageError("chain length must be at least 1")
    fv = coxeter.glue_chain(coxeter.ChainSpec(config.chain))
    data = {
        "k": config.chain,
        "V": fv.V,
        "E": fv.E,
        "F": fv.F,
        "C": fv.C,
        "euler": fv.euler,
        "b2_of_resolution": betti.resolved_betti_doubled(fv.V, fv.F).b2,
        "gluing": "opposite facets" + (" (convention-dependent)" if config.chain > 2 else ""),
    }
    return Report("coxeter", data)


# ---------------------------------------------------------------------------
# verify-paper


@dataclass(frozen=True)
class Check:
    section: str
    name: str
    expected: Any
    compute: Callable[[frozenset], Any]


def _r_polytope(perturb: frozenset) -> Polyhedron:
    if "r-vertices" in perturb:
        return Polyhedron.from_generators([(1, 1, 1), (1, 1, 2), (1, 2, 1), (3, 1, 1)], [(1, 1, 0), (1, 0, 1), (0, 1, 1)])
    return toric.apply_cut(MODELS["P"], toric.CutSpec.symmetric([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 1))


def _vrep_json(p: Polyhedron) -> dict:
    v = v_representation(p)
    return {"vertices": sorted(_pt(x) for x in v.vertices), "rays": sorted(list(r) for r in v.rays)}


def _singular_ray_factors(p: Polyhedron) -> list:
    return [list(t) for f, t in toric.singular_faces(p) if f.dim == 1]


def _exceptional_faces(perturb) -> list:
    r = _r_polytope(perturb)
    out = []
    for n in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
        edges = toric.surface_face_analysis(r, r.index_of(n))
        out.append(sorted((e.self_intersection, format_fraction(e.lattice_length)) for e in edges))
    return [[list(e) for e in f] for f in out]


def _walls_of(p: Polyhedron, new) -> list:
    return [list(w.splitting) for w in _walls(toric.normal_fan(p), set(new))]


def _pair_json(ps) -> list:
    return sorted(list(p.direction) for p in ps)


def _paper_checks() -> list[Check]:
    P, A1 = MODELS["P"], MODELS["A1xC"]
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    a1_cut = toric.CutSpec.symmetric([(1, 0, 0)], 1)
    g = twistorfiber.SignFlip
    return [
        Check("polytope", "P is the cone over three rays", {"vertices": [_pt((0, 0, 0))], "rays": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]},
              lambda q: _vrep_json(P)),
        Check("polytope", "R vertices", sorted(_pt(v) for v in [(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1)]),
              lambda q: _vrep_json(_r_polytope(q))["vertices"]),
        Check("polytope", "R facet x=1 polygon", Polyhedron.from_inequalities([(1, 0, 1), (0, 1, 1), (1, -1, -1), (-1, 1, -1)]).to_json(),
              lambda q: restrict_to_face(_r_polytope(q), _r_polytope(q).index_of((1, 0, 0))).to_json()),
        Check("toric", "P vertex group Z2+Z2", [[2, 2]], lambda q: [list(v.factors) for v in toric.vertex_smoothness(P)]),
        Check("toric", "P rays have group Z2", [[2], [2], [2]], lambda q: _singular_ray_factors(P)),
        Check("toric", "A1xC singular ray Z2", [[2]], lambda q: _singular_ray_factors(A1)),
        Check("toric", "R is Delzant", True, lambda q: toric.is_delzant(_r_polytope(q))),
        Check("toric", "R curves have normal bundle O(-1)+O(-1)", [[-1, -1]] * 3, lambda q: _walls_of(_r_polytope(q), e)),
        Check("toric", "R divisors contain two -1 curves of equal area", [[[-1, "1/1"], [-1, "1/1"]]] * 3, _exceptional_faces),
        Check("toric", "A1xC exceptional curve has <S^2, E> = -2", [[-2, 0]],
              lambda q: _walls_of(toric.apply_cut(A1, a1_cut), [(1, 0, 0)])),
        Check("toric", "crepant resolution of P", [1, 1, 1],
              lambda q: list(toric.crepancy_certificate([(1, 1, -1), (1, -1, 1), (-1, 1, 1)], e).certificate)),
        Check("toric", "crepant resolution of A1xC", [1, 1, 0],
              lambda q: list(toric.crepancy_certificate([(2, -1, 0), (0, 1, 0)], [(1, 0, 0)]).certificate)),
        Check("fiber", "central symmetry acts trivially", [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
              lambda q: [list(r) for r in twistorfiber.fiber_action(g((-1, -1, -1, -1)))]),
        Check("fiber", "action is not faithful: kernel {+-Id}", [[1, 1, 1, 1], [-1, -1, -1, -1]],
              lambda q: [list(x.signs) for x in twistorfiber.kernel()]),
        Check("fiber", "six octahedron points with stabilizer of order 4", [4] * 6,
              lambda q: [len(twistorfiber.stabilizer(p)) for p in twistorfiber.AXIS_POINTS]),
        Check("fiber", "generic point has stabilizer of order 2", 2, lambda q: len(twistorfiber.stabilizer((1, 1, 1)))),
        Check("fiber", "opposite vertices form the orbits", [[[-1, 0, 0], [1, 0, 0]], [[0, -1, 0], [0, 1, 0]], [[0, 0, -1], [0, 0, 1]]],
              lambda q: [_pair_json(o) for o in twistorfiber.octahedron_orbits()]),
        Check("fiber", "each lift meets one lift of the orthogonal plane", [True] * 6,
              lambda q: [twistorfiber.plane_lift_fiber_points(pl) == twistorfiber.plane_lift_fiber_points(pl.complement())
                         for pl in twistorfiber.COORDINATE_PLANES]),
        Check("betti", "deltas for three spheres", [3, 0, 6],
              lambda q: list(betti.resolution_deltas([betti.SingularComponent(0)] * 3))),
        Check("betti", "deltas for a genus-2 curve", [1, 4, -2],
              lambda q: list(betti.resolution_deltas([betti.SingularComponent(2)]))),
        Check("betti", "doubled polytope orbifold Betti numbers", [1, 0, 1, 0, 1, 0, 1],
              lambda q: list(betti.doubled_polytope_base_betti())),
        Check("coxeter", "120-cell has 120 dodecahedral facets", [120, 20, 30, 12],
              lambda q: _dodecahedral_facets()),
        Check("coxeter", "singular spheres of the doubled 120-cell", 2040,
              lambda q: coxeter.double_to_singular_locus(600, 720).n),
        Check("betti", "doubled 120-cell: b2 = 1 + V + 2F, b3 = 0", [2041, 0],
              lambda q: _doubled_120()),
    ]


def _dodecahedral_facets() -> list:
    c = coxeter.dualize(coxeter.build_600_cell())
    sizes = {(len(f), len(c.faces_in(1, f)), len(c.faces_in(2, f))) for f in c.faces[3]}
    if len(sizes) != 1:
        return [len(c.faces[3]), sorted(sizes)]
    return [len(c.faces[3]), *sizes.pop()]


def _doubled_120() -> list:
    fv = coxeter.glue_chain(coxeter.ChainSpec(1))
    b = betti.resolved_betti_doubled(fv.V, fv.F)
    return [b.b2, b.b3]


SECTIONS = ("polytope", "toric", "fiber", "betti", "coxeter")
PERTURBATIONS = ("r-vertices",)


def _run_check(check: Check, perturb: frozenset) -> dict:
    try:
        computed = check.compute(perturb)
        error = None
    except Exception as exc:  # a failing check is reported, not raised
        computed, error = None, f"{type(exc).__name__}: {exc}"
    entry = {"section": check.section, "name": check.name, "expected": check.expected, "computed": computed}
    if error:
        entry["error"] = error
    entry["pass"] = error is None and computed == check.expected
    return entry


def run_verify_paper(config: CommandConfig) -> Report:
    if config.section is not None and config.section not in SECTIONS:
        raise UsageError(f"unknown section {config.section!r}; choose from {', '.join(SECTIONS)}")
    for p in config.perturb:
        if p not in PERTURBATIONS:
            raise UsageError(f"unknown perturbation {p!r}; choose from {', '.join(PERTURBATIONS)}")
    checks = [c for c in _paper_checks() if config.section in (None, c.section)]
    perturb = frozenset(config.perturb)
    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        results = list(pool.map(lambda c: _run_check(c, perturb), checks))
    failed = [r["name"] for r in results if not r["pass"]]
    data = {"checks": results, "passed": len(results) - len(failed), "failed": failed}
    return Report("verify-paper", data, 1 if failed else 0)


# ---------------------------------------------------------------------------
# argument parsing


COMMANDS = {
    "resolve": run_resolve,
    "fiber-action": run_fiber_action,
    "betti": run_betti,
    "coxeter": run_coxeter,
    "verify-paper": run_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistorcy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("-o", "--output", help="write the report here instead of stdout")
        p.add_argument("--format", dest="fmt", choices=("json", "table"), default="json")
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("resolve", help="audit and resolve a 3-dimensional polyhedron")
    p.add_argument("input", help="polyhedron JSON file, inline JSON, or a model name: " + ", ".join(MODELS))
    p.add_argument("--epsilon", default="1", help="cut level above each singular face (rational, > 0)")
    p.add_argument("--cut", help="explicit cut spec (file or inline JSON) instead of the default blow-up")
    common(p)

    p = sub.add_parser("fiber-action", help="sign-flip group acting on the twistor fiber")
    common(p)

    p = sub.add_parser("betti", help="Betti number changes under resolution")
    p.add_argument("input", nargs="?", help='description JSON {"components": [{"genus": g, "z2z2": k}]}')
    p.add_argument("--doubled", nargs=2, type=int, metavar=("V", "F"), help="vertex and 2-face counts of a doubled polytope")
    common(p)

    p = sub.add_parser("coxeter", help="120-cell chains")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--chain", type=int, metavar="K", help="number of 120-cells in the chain")
    g.add_argument("--selftest", action="store_true", help="run the 4-cube gluing regression")
    common(p)

    p = sub.add_parser("verify-paper", help="run every reference check")
    p.add_argument("--section", choices=SECTIONS)
    p.add_argument("--perturb", action="append", default=[], choices=PERTURBATIONS, help="inject a known-bad fixture")
    common(p)
    return parser


def parse_config(argv: list[str] | None = None) -> CommandConfig:
    ns = build_parser().parse_args(argv)
    cfg = CommandConfig(ns.subcommand, output=ns.output, fmt=ns.fmt, verbose=ns.verbose)
    if ns.subcommand == "resolve":
        cfg.input = ns.input
        cfg.epsilon = parse_rational(ns.epsilon)
        if cfg.epsilon <= 0:
            raise UsageError("cut level must be strictly positive")
        cfg.cut = ns.cut
    elif ns.subcommand == "betti":
        cfg.input = ns.input
        cfg.doubled = tuple(ns.doubled) if ns.doubled else None
    elif ns.subcommand == "coxeter":
        cfg.chain = ns.chain
        cfg.selftest = ns.selftest
    elif ns.subcommand == "verify-paper":
        cfg.section = ns.section
        cfg.perturb = ns.perturb
    return cfg


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        report = COMMANDS[cfg.subcommand](cfg)
    except (UsageError, toric.ToricError, PolyhedronError, betti.BettiError, coxeter.CoxeterError) as exc:
        print(f"twistorcy: error: {exc}", file=sys.stderr)
        return 2
    text = report.render(cfg.fmt)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
