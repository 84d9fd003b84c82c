"""Command line interface: structured-text input, four commands, and
deterministic text / machine reports.

Input documents are flat key-value with JSON-style arrays, e.g.

    dim: 2
    rays: [[1,1],[0,1],[-1,1],[0,-1]]
    maximal_cones: [[0,1],[1,2],[2,3],[3,0]]
    support: [0,-2,0,-2]

or, mutually exclusively, a ``polytope:`` vertex list.  Exit codes: 0 on
success (and a verified identity for ``brion``/``polytope``), 1 for domain
errors, 2 for parse errors, 3 when the identity check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field, asdict

import yaml

from .cohomology import (
    DegreeRegion,
    ShellCheckFailed,
    NoArrangementVertices,
    brion_terms,
    chi_polynomial,
    cohomology_table,
    degree_region,
    graded_cohomology,
    signed_count,
    verify_identity,
)
from .genfun import (
    DependentGenerators,
    NotFullDimensional,
    NotPointed,
    cone_genfun,
    expand_in_box,
    truncated_series,
)
from .polyhedral import (
    DegeneratePolytope,
    FanAxiomViolation,
    NonPointedCone,
    NotIntegral,
    NotLinearOnCone,
    build_fan,
    check_complete,
    dual_cone,
    lattice_polytope,
    normal_fan_of_polytope,
    support_from_ray_values,
)

DOMAIN_ERRORS = (FanAxiomViolation, NonPointedCone, NotLinearOnCone, NotIntegral,
                 DegeneratePolytope, NotPointed, NotFullDimensional,
                 DependentGenerators, ShellCheckFailed, NoArrangementVertices,
                 ValueError)


class SchemaError(Exception):
    """Missing, extra, or badly typed fields in an input document."""


class DimensionMismatch(Exception):
    """A vector in the input does not match the declared dimension."""


@dataclass(frozen=True)
class FanSpec:
    dim: int
    rays: tuple | None = None
    maximal_cones: tuple | None = None
    support: tuple | None = None
    polytope: tuple | None = None


_ALLOWED_KEYS = {"dim", "rays", "maximal_cones", "support", "polytope"}


def _int_vector(v, what):
    if not isinstance(v, (list, tuple)) or not all(isinstance(x, int) for x in v):
        raise SchemaError(f"{what} must be a list of integers, got {v!r}")
    return tuple(v)


def parse_spec(text: str) -> FanSpec:
    """Parse and validate an input document."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SchemaError(f"syntax error: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("document must be a key-value mapping")
    extra = set(data) - _ALLOWED_KEYS
    if extra:
        raise SchemaError(f"unknown fields: {sorted(extra)}")
    if "dim" not in data or not isinstance(data["dim"], int) or data["dim"] < 1:
        raise SchemaError("field 'dim' must be a positive integer")
    dim = data["dim"]
    has_fan = "rays" in data or "maximal_cones" in data or "support" in data
    has_polytope = "polytope" in data
    if has_fan == has_polytope:
        raise SchemaError(
            "exactly one of {rays+maximal_cones, polytope} must be given")
    if has_polytope:
        verts = data["polytope"]
        if not isinstance(verts, list) or not verts:
            raise SchemaError("field 'polytope' must be a nonempty list of vertices")
        verts = tuple(_int_vector(v, "polytope vertex") for v in verts)
        for v in verts:
            if len(v) != dim:
                raise DimensionMismatch(f"vertex {list(v)} is not {dim}-dimensional")
        return FanSpec(dim=dim, polytope=verts)
    if "rays" not in data or "maximal_cones" not in data:
        raise SchemaError("fan documents need both 'rays' and 'maximal_cones'")
    rays = data["rays"]
    if not isinstance(rays, list) or not rays:
        raise SchemaError("field 'rays' must be a nonempty list of vectors")
    rays = tuple(_int_vector(r, "ray") for r in rays)
    for r in rays:
        if len(r) != dim:
            raise DimensionMismatch(f"ray {list(r)} is not {dim}-dimensional")
    cones = data["maximal_cones"]
    if not isinstance(cones, list) or not cones:
        raise SchemaError("field 'maximal_cones' must be a nonempty list")
    cones = tuple(_int_vector(c, "maximal cone") for c in cones)
    for c in cones:
        if any(i < 0 or i >= len(rays) for i in c):
            raise SchemaError(f"maximal cone {list(c)} indexes a missing ray")
    support = None
    if "support" in data:
        support = _int_vector(data["support"], "support")
        if len(support) != len(rays):
            raise SchemaError(
                f"support has {len(support)} values for {len(rays)} rays")
    return FanSpec(dim=dim, rays=rays, maximal_cones=cones, support=support)


def emit_spec(spec: FanSpec) -> str:
    """Render a FanSpec back into the input document format."""
    lines = [f"dim: {spec.dim}"]
    if spec.polytope is not None:
        lines.append("polytope: " + json.dumps([list(v) for v in spec.polytope]))
    else:
        lines.append("rays: " + json.dumps([list(r) for r in spec.rays]))
        lines.append("maximal_cones: "
                     + json.dumps([list(c) for c in spec.maximal_cones]))
        if spec.support is not None:
            lines.append("support: " + json.dumps(list(spec.support)))
    return "\n".join(lines) + "\n"


@dataclass
class Flags:
    degree: tuple | None = None
    box: tuple | None = None
    oracle: bool = False
    fmt: str = "text"
    p: int | None = None


@dataclass
class Report:
    """Plain-data result of a command; everything JSON-serializable."""

    command: str
    fan: dict
    support_values: list | None = None
    coefficient_field: str = "rational"
    region: list | None = None
    region_caveat: str | None = None
    table: list | None = None
    chi_polynomial: list | None = None
    brion_terms: list | None = None
    identity_holds: bool | None = None
    corollaries: dict | None = None
    oracle: dict | None = None
    timing_ms: float | None = field(default=None, compare=False)


def _poly_data(poly) -> list:
    return [[list(e), c] for e, c in poly.sorted_terms()]


def _table_data(table) -> list:
    rows = []
    for deg in sorted(table.entries, key=lambda e: (sum(e), e)):
        dims, torsion, chi = table.entries[deg]
        rows.append({"degree": list(deg), "dims": list(dims),
                     "torsion": [list(t) for t in torsion], "chi": chi})
    return rows


def _fan_summary(fan, completeness) -> dict:
    return {
        "dim": fan.ambient_dim,
        "rays": [list(r) for r in fan.input_rays],
        "num_cones": len(fan.cones),
        "num_maximal": len(fan.maximal_ids),
        "complete": completeness.complete,
        "witness": completeness.witness,
    }


def _build(spec: FanSpec):
    if spec.polytope is not None:
        poly = lattice_polytope(spec.dim, spec.polytope)
        fan, support = normal_fan_of_polytope(poly)
        return fan, support
    fan = build_fan(spec.dim, spec.rays, spec.maximal_cones)
    support = None
    if spec.support is not None:
        support = support_from_ray_values(fan, spec.support)
    return fan, support


def _run_oracle(h, box) -> dict:
    fan = h.fan
    matches = True
    for i in fan.maximal_ids:
        shift = tuple(-x for x in h.linear_part(i))
        cone = dual_cone(fan.cones[i])
        gf = cone_genfun(shift, cone)
        if expand_in_box(gf, box) != truncated_series(shift, cone, box):
            matches = False
    chi = chi_polynomial(h)
    counts_ok = all(signed_count(h, b) == chi.coefficient(b)
                    for b in degree_region(h).candidates)
    return {"box": [list(b) for b in box],
            "cones_checked": len(fan.maximal_ids),
            "series_match": matches,
            "signed_counts_match": counts_ok}


def run(command: str, spec: FanSpec, flags: Flags | None = None) -> Report:
    """Execute a command against a parsed spec and return its report."""
    flags = flags or Flags()
    t0 = time.monotonic()
    fan, support = _build(spec)
    completeness = check_complete(fan)
    report = Report(command=command, fan=_fan_summary(fan, completeness))
    if support is not None:
        report.support_values = [support.value(r) for r in fan.input_rays]
    report.coefficient_field = "rational" if flags.p is None else f"modp:{flags.p}"

    if command == "validate":
        report.timing_ms = 1000 * (time.monotonic() - t0)
        return report

    if support is None:
        raise SchemaError(f"command '{command}' needs support values or a polytope")
    if not completeness.complete:
        raise FanAxiomViolation(f"fan is not complete: {completeness.witness}")

    if command == "cohomology" and flags.degree is not None:
        if len(flags.degree) != fan.ambient_dim:
            raise DimensionMismatch(
                f"degree {list(flags.degree)} is not {fan.ambient_dim}-dimensional")
        dims, torsion = graded_cohomology(support, flags.degree, flags.p)
        chi = sum((-1) ** k * d for k, d in enumerate(dims))
        report.table = [{"degree": list(flags.degree), "dims": list(dims),
                         "torsion": [list(t) for t in torsion], "chi": chi}]
        report.timing_ms = 1000 * (time.monotonic() - t0)
        return report

    region = None
    if flags.box is not None:
        if len(flags.box) != fan.ambient_dim:
            raise DimensionMismatch(
                f"box {list(flags.box)} is not {fan.ambient_dim}-dimensional")
        from itertools import product as iproduct

        candidates = tuple(iproduct(*(range(lo, hi + 1) for lo, hi in flags.box)))
        region = DegreeRegion(box=tuple(flags.box), candidates=candidates)

    if command == "cohomology":
        table = cohomology_table(support, flags.p, region)
        report.region = [list(b) for b in table.region.box]
        report.region_caveat = table.caveat
        report.table = _table_data(table)
        chi = chi_polynomial(support, table)
        report.chi_polynomial = _poly_data(chi)
    elif command in ("brion", "polytope"):
        table = cohomology_table(support, flags.p, region)
        verification = verify_identity(support)
        report.region = [list(b) for b in verification.region.box]
        report.region_caveat = verification.caveat
        report.table = _table_data(table)
        report.chi_polynomial = _poly_data(verification.chi_polynomial)
        report.brion_terms = [
            {"cone_rays": [list(r) for r in fan.cones[i].rays],
             "numerator": _poly_data(gf.numerator),
             "denominator_factors": [list(g) for g in gf.denominator_factors]}
            for i, gf in brion_terms(support)]
        report.identity_holds = verification.identity_holds
        report.corollaries = {
            name: {"holds": res.holds, "witness": res.witness}
            for name, res in verification.corollary_results.items()}
    else:
        raise SchemaError(f"unknown command {command!r}")

    if flags.oracle:
        n = fan.ambient_dim
        report.oracle = _run_oracle(support, tuple((-3, 2) for _ in range(n)))
    report.timing_ms = 1000 * (time.monotonic() - t0)
    return report


def format_monomial(exponent) -> str:
    bits = [f"x{i + 1}^{e}" if e != 1 else f"x{i + 1}"
            for i, e in enumerate(exponent) if e != 0]
    return "*".join(bits)


def format_polynomial(terms) -> str:
    """Render [[exponent, coeff], ...] (graded-lex order) as readable text."""
    if not terms:
        return "0"
    out = []
    for exponent, coeff in terms:
        mono = format_monomial(exponent)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if coeff > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(out)


def emit_report(report: Report, fmt: str = "text") -> bytes:
    """Render a report; the machine format is stable JSON that round-trips."""
    if fmt == "machine":
        data = asdict(report)
        data.pop("timing_ms")
        return (json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"command: {report.command}"]
    fan = report.fan
    lines.append(f"dim: {fan['dim']}")
    lines.append(f"rays: {len(fan['rays'])}")
    lines.append(f"cones: {fan['num_cones']}")
    lines.append(f"maximal_cones: {fan['num_maximal']}")
    lines.append(f"complete: {str(fan['complete']).lower()}")
    if fan["witness"]:
        lines.append(f"witness: {fan['witness']}")
    if report.support_values is not None:
        lines.append(f"support: {report.support_values}")
    lines.append(f"coefficients: {report.coefficient_field}")
    if report.region is not None:
        box = ", ".join(f"{lo}:{hi}" for lo, hi in report.region)
        lines.append(f"degree_box: {box}")
    if report.table is not None:
        lines.append(f"table_entries: {len(report.table)}")
        for row in report.table:
            dims = " ".join(f"h{k}={d}" for k, d in enumerate(row["dims"]))
            tors = ""
            if any(row["torsion"]):
                tors = "  torsion " + str(row["torsion"])
            lines.append(f"  degree {tuple(row['degree'])}: {dims}  "
                         f"chi={row['chi']}{tors}")
    if report.chi_polynomial is not None:
        lines.append(f"chi_polynomial: {format_polynomial(report.chi_polynomial)}")
    if report.brion_terms is not None:
        lines.append(f"rational_terms: {len(report.brion_terms)}")
        for term in report.brion_terms:
            num = format_polynomial(term["numerator"])
            dens = "".join(f"(1 - {format_monomial(g) or '1'})"
                           for g in term["denominator_factors"])
            lines.append(f"  ({num}) / {dens}")
    if report.identity_holds is not None:
        lines.append(f"identity_holds: {str(report.identity_holds).lower()}")
    if report.corollaries is not None:
        for name, res in sorted(report.corollaries.items()):
            suffix = "" if res["witness"] is None else f"  ({res['witness']})"
            lines.append(f"corollary {name}: {str(res['holds']).lower()}{suffix}")
    if report.oracle is not None:
        lines.append(f"oracle_series_match: {str(report.oracle['series_match']).lower()}")
        lines.append("oracle_signed_counts_match: "
                     f"{str(report.oracle['signed_counts_match']).lower()}")
    if report.region_caveat:
        lines.append(f"note: {report.region_caveat}")
    if report.timing_ms is not None:
        lines.append(f"timing_ms: {report.timing_ms:.1f}")
    return ("\n".join(lines) + "\n").encode()


def parse_report(data: bytes) -> Report:
    """Rebuild a Report from its machine format."""
    raw = json.loads(data.decode())
    raw["fan"] = dict(raw["fan"])
    return Report(**raw)


def _parse_degree(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise SchemaError(f"bad degree {text!r}: expected a1,a2,...") from exc


def _parse_box(text: str) -> tuple:
    out = []
    for part in text.split(","):
        try:
            lo, hi = part.split(":")
            out.append((int(lo), int(hi)))
        except ValueError as exc:
            raise SchemaError(f"bad box {text!r}: expected lo1:hi1,lo2:hi2") from exc
        if out[-1][0] > out[-1][1]:
            raise SchemaError(f"empty box interval {part!r}")
    return tuple(out)


def _parse_coefficients(text: str) -> int | None:
    if text == "rational":
        return None
    if text.startswith("modp:"):
        try:
            p = int(text.split(":", 1)[1])
        except ValueError:
            p = 0
        if p < 2:
            raise SchemaError(f"bad characteristic in {text!r}")
        return p
    raise SchemaError(f"unknown coefficient field {text!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="toricgf",
        description="Lattice point generating functions and line bundle "
                    "cohomology on complete fans.")
    parser.add_argument("command",
                        choices=["validate", "cohomology", "brion", "polytope"])
    parser.add_argument("spec", help="input document path, or - for stdin")
    parser.add_argument("--degree", help="restrict to one degree: a1,a2,...")
    parser.add_argument("--box", help="override the degree region: lo1:hi1,lo2:hi2")
    parser.add_argument("--oracle", action="store_true",
                        help="run the truncated-series cross-check")
    parser.add_argument("--format", default="text", choices=["text", "machine"])
    parser.add_argument("--coefficients", default="rational",
                        help="homology dimension field: rational or modp:<p>")
    args = parser.parse_args(argv)

    try:
        text = sys.stdin.read() if args.spec == "-" else open(args.spec).read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        spec = parse_spec(text)
        flags = Flags(
            degree=_parse_degree(args.degree) if args.degree else None,
            box=_parse_box(args.box) if args.box else None,
            oracle=args.oracle,
            fmt=args.format,
            p=_parse_coefficients(args.coefficients),
        )
    except (SchemaError, DimensionMismatch) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2

    try:
        report = run(args.command, spec, flags)
    except (SchemaError, DimensionMismatch) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    sys.stdout.buffer.write(emit_report(report, args.format))
    if report.identity_holds is False:
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
