"""Command line front end.

Subcommands cover the full pipeline: `validate`, `charges`, `periods`,
`mirror-map`, `invert`, `open-gw`, `mirror-eq`, `discriminant`, and
`verify`.  Input is a fan file (JSON document with keys `rank`, `rays`,
`max_cones`, optional `polytope_constants` whose rationals are "p/q" strings)
or one of the embedded examples via `--example`.  All rational output is
serialized exactly as "p/q" strings; identical invocations produce
byte-identical output (terms are emitted in graded-lexicographic order).
Errors map to distinct non-zero exit codes per error class; a failed
verification exits with code 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import disks, errors, flatcoords, periods, refdata, toric
from .pseries import MultiSeries, default_variable_names, format_rational, parse_rational

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

EXIT_CODES = {
    errors.FanFileError: 4,
    errors.EmptyFan: 10,
    errors.DuplicateRay: 11,
    errors.NonPrimitiveRay: 12,
    errors.NonUnimodularCone: 13,
    errors.NoCYCovector: 14,
    errors.NonConvexSupport: 15,
    errors.UnsupportedFan: 16,
    errors.NotACone: 17,
    errors.RayCollision: 18,
    errors.InconsistentPolytope: 19,
    errors.CutoffMismatch: 20,
    errors.VarCountMismatch: 21,
    errors.NonzeroConstantTerm: 22,
    errors.NonUnitConstantTerm: 23,
    errors.NegativeIndex: 24,
    errors.OperatorParseError: 25,
    errors.UnderdeterminedExtraction: 26,
    errors.NoUsableRow: 27,
    errors.UnknownDivisor: 28,
    errors.MissingInvariantData: 29,
    errors.UnknownExample: 30,
    errors.CutoffTooSmall: 31,
    errors.OrderBeyondReference: 32,
}


@dataclass
class RunConfig:
    """Parsed invocation: subcommand, input source, and output options."""

    subcommand: str
    input_path: str | None
    example: str | None
    cutoff: int
    base_cone: int | None
    output_format: str
    form: str = "flat"
    order: int | None = None

    def __post_init__(self):
        if self.cutoff < 1:
            raise errors.FanFileError("cutoff must be at least 1")


# ---------------------------------------------------------------------------
# Input handling
# ---------------------------------------------------------------------------

def load_fan_file(path: str):
    """Parse a fan file into (Fan, MomentPolytope | None)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise errors.FanFileError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.FanFileError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise errors.FanFileError(f"{path}: top level must be an object")
    for key in ("rank", "rays", "max_cones"):
        if key not in doc:
            raise errors.FanFileError(f"{path}: missing key {key!r}")
    try:
        fan = toric.Fan.make(doc["rank"], doc["rays"], doc["max_cones"])
    except (TypeError, ValueError) as exc:
        raise errors.FanFileError(f"{path}: malformed fan data: {exc}") from exc
    polytope = None
    if "polytope_constants" in doc:
        try:
            polytope = toric.MomentPolytope.make(
                [parse_rational(c) for c in doc["polytope_constants"]])
        except (TypeError, ValueError) as exc:
            raise errors.FanFileError(
                f"{path}: malformed polytope constants: {exc}") from exc
    return fan, polytope


def resolve_input(config: RunConfig):
    """Produce (validated fan, CYStructure, polytope-or-None) from the config."""
    if config.example is not None:
        ref = refdata.lookup_reference(config.example)
        fan = ref.fan()
    elif config.input_path is not None:
        fan, polytope = load_fan_file(config.input_path)
        if config.base_cone is not None:
            fan, permutation = toric.with_base_cone(fan, config.base_cone)
            if polytope is not None:
                polytope = toric.MomentPolytope(
                    tuple(polytope.constants[i] for i in permutation))
        fan, cy = toric.validate_fan(fan)
        return fan, cy, polytope
    else:
        raise errors.FanFileError("no input: pass a fan file or --example")
    if config.base_cone is not None:
        fan, _ = toric.with_base_cone(fan, config.base_cone)
    fan, cy = toric.validate_fan(fan)
    return fan, cy, None


# ---------------------------------------------------------------------------
# Pipeline helpers (no hidden state: every subcommand recomputes from the fan)
# ---------------------------------------------------------------------------

def compute_inverse(fan, cy, cutoff):
    charge = toric.charge_matrix(fan, cy)
    period_list = periods.single_log_periods(charge, cutoff)
    inverse = flatcoords.inverse_mirror_map(period_list, cutoff)
    return charge, period_list, inverse


def compute_correction(fan, cy, charge, inverse, cutoff):
    """The correction series delta_0 and the invariant lookup data.

    A fan without compact toric prime divisors has vanishing corrections (the
    sphere contributions need a compact divisor to live on), so the zero
    series is returned directly; extraction proper requires the single
    compact divisor to be ray 0.
    """
    compact = toric.compact_divisors(fan)
    l = fan.num_curve_classes
    if not compact:
        delta = MultiSeries.zero(l, cutoff)
        data = disks.CorrectionData.trivial(fan, l, cutoff)
        return flatcoords.CorrectionSeries(divisor_index=0, delta=delta), data
    correction = flatcoords.extract_delta(fan, cy, charge, inverse)
    data = disks.CorrectionData.from_delta(fan, correction, l)
    return correction, data


# ---------------------------------------------------------------------------
# Rendering helpers
# ---------------------------------------------------------------------------

def _emit(doc, text_lines, fmt, latex_lines=None) -> str:
    if fmt in ("structured", "json"):
        return json.dumps(doc, indent=2)
    if fmt == "latex" and latex_lines is not None:
        return "\n".join(latex_lines)
    return "\n".join(text_lines)


def _qc_names(l: int, latex: bool = False) -> list[str]:
    # Complex-structure side variables (arguments of periods and operators)
    # share the q names; the operator literal format indexes them the same way.
    return default_variable_names(l, "q", latex=latex) if l else []


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def cmd_validate(config: RunConfig) -> tuple[int, str]:
    fan, cy, polytope = resolve_input(config)
    compact = sorted(toric.compact_divisors(fan))
    doc = {
        "rank": fan.rank,
        "num_rays": fan.num_rays,
        "num_curve_classes": fan.num_curve_classes,
        "rays": [list(ray) for ray in fan.rays],
        "max_cones": [list(cone) for cone in fan.max_cones],
        "covector": list(cy.covector),
        "dual_basis": [list(row) for row in cy.dual_basis],
        "compact_divisors": compact,
    }
    lines = [
        f"valid Calabi-Yau fan: rank {fan.rank}, {fan.num_rays} rays, "
        f"{len(fan.max_cones)} maximal cones",
        f"covector: {list(cy.covector)}",
        f"dual basis: {[list(r) for r in cy.dual_basis]}",
        f"compact toric divisors: {compact}",
        f"curve classes: {fan.num_curve_classes}",
    ]
    return 0, _emit(doc, lines, config.output_format)


def cmd_charges(config: RunConfig) -> tuple[int, str]:
    fan, cy, _ = resolve_input(config)
    charge = toric.charge_matrix(fan, cy)
    doc = {"l": charge.l, "rows": [list(row) for row in charge.entries]}
    lines = [f"Q^{a} = {list(charge.row(a))}" for a in range(1, charge.l + 1)]
    if not lines:
        lines = ["no curve classes (m = n)"]
    latex = [
        "Q^{%d} = \\begin{pmatrix} %s \\end{pmatrix}"
        % (a, " & ".join(str(x) for x in charge.row(a)))
        for a in range(1, charge.l + 1)
    ]
    return 0, _emit(doc, lines, config.output_format, latex)


def cmd_periods(config: RunConfig) -> tuple[int, str]:
    fan, cy, _ = resolve_input(config)
    charge = toric.charge_matrix(fan, cy)
    period_list = periods.single_log_periods(charge, config.cutoff)
    names = _qc_names(charge.l)
    doc = {
        "cutoff": config.cutoff,
        "periods": [
            {"row": p.index, "f": p.f.to_document()} for p in period_list
        ],
    }
    lines = [f"f_{p.index} = {p.f.to_str(names)}" for p in period_list]
    if not lines:
        lines = ["no curve classes: no single-log periods"]
    latex_names = _qc_names(charge.l, latex=True)
    latex = [f"f_{{{p.index}}} = {p.f.to_latex(latex_names)}" for p in period_list]
    return 0, _emit(doc, lines, config.output_format, latex)


def cmd_mirror_map(config: RunConfig) -> tuple[int, str]:
    fan, cy, _ = resolve_input(config)
    charge = toric.charge_matrix(fan, cy)
    period_list = periods.single_log_periods(charge, config.cutoff)
    factors = periods.mirror_map_series(period_list)
    names = _qc_names(charge.l)
    doc = {
        "cutoff": config.cutoff,
        "exp_factors": [series.to_document() for series in factors],
    }
    lines = [
        f"q_{a} = qc_{a} * ({factors[a - 1].to_str(names)})"
        for a in range(1, charge.l + 1)
    ]
    if not lines:
        lines = ["identity (no curve classes)"]
    latex_names = _qc_names(charge.l, latex=True)
    latex = [
        f"q_{{{a}}} = \\check{{q}}_{{{a}}} \\left({factors[a - 1].to_latex(latex_names)}\\right)"
        for a in range(1, charge.l + 1)
    ]
    return 0, _emit(doc, lines, config.output_format, latex)


def cmd_invert(config: RunConfig) -> tuple[int, str]:
    fan, cy, _ = resolve_input(config)
    charge, _, inverse = compute_inverse(fan, cy, config.cutoff)
    names = default_variable_names(charge.l, "q") if charge.l else []
    doc = {
        "cutoff": config.cutoff,
        "exp_factors": [series.to_document() for series in inverse.exp_factors],
        "components": [inverse.component(a).to_document()
                       for a in range(1, charge.l + 1)],
    }
    lines = [
        f"qc_{a} = {inverse.component(a).to_str(names)}"
        for a in range(1, charge.l + 1)
    ]
    if not lines:
        lines = ["identity (no curve classes)"]
    latex_names = default_variable_names(charge.l, "q", latex=True) if charge.l else []
    latex = [
        f"\\check{{q}}_{{{a}}} = {inverse.component(a).to_latex(latex_names)}"
        for a in range(1, charge.l + 1)
    ]
    return 0, _emit(doc, lines, config.output_format, latex)


def cmd_open_gw(config: RunConfig) -> tuple[int, str]:
    fan, cy, _ = resolve_input(config)
    charge, _, inverse = compute_inverse(fan, cy, config.cutoff)
    correction, _ = compute_correction(fan, cy, charge, inverse, config.cutoff)
    coefficients = flatcoords.open_gw_coefficients(correction)
    report = flatcoords.verify_conjecture_relations(fan, cy, charge, inverse, correction)
    ordered = sorted(coefficients.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    doc = {
        "cutoff": config.cutoff,
        "divisor": correction.divisor_index,
        "coefficients": [
            {"index": list(index), "value": format_rational(value)}
            for index, value in ordered
        ],
        "relations": [
            {"row": check.row, "consistent": check.ok} for check in report.rows
        ],
    }
    lines = [f"n[{list(index)}] = {format_rational(value)}" for index, value in ordered]
    if not lines:
        lines = ["all corrections vanish"]
    lines += [check.describe() for check in report.rows]
    return 0, _emit(doc, lines, config.output_format)


def cmd_mirror_eq(config: RunConfig) -> tuple[int, str]:
    fan, cy, _ = resolve_input(config)
    charge, _, inverse = compute_inverse(fan, cy, config.cutoff)
    _, data = compute_correction(fan, cy, charge, inverse, config.cutoff)
    equation = disks.mirror_equation(fan, cy, charge, data, form=config.form)
    poly = equation.polynomial
    doc = disks.mirror_polynomial_to_document(poly)
    doc["gluing"] = {
        chamber.value: {"u": u.to_str(), "v": v.to_str()}
        for chamber, (u, v) in equation.gluing.items()
    }
    text = disks.mirror_polynomial_to_str(poly)
    latex = disks.mirror_polynomial_to_latex(poly)
    return 0, _emit(doc, [text], config.output_format, [latex])


def cmd_discriminant(config: RunConfig) -> tuple[int, str]:
    fan, cy, polytope = resolve_input(config)
    strata = toric.discriminant_locus(fan, polytope)
    doc = {"strata": []}
    lines = []
    for stratum in strata:
        entry = {
            "kind": stratum.kind,
            "height": format_rational(stratum.height),
            "span_dim": stratum.span_dim,
        }
        if stratum.pair is not None:
            entry["pair"] = list(stratum.pair)
            entry["equalities"] = [
                {"coeffs": [format_rational(c) for c in coeffs],
                 "rhs": format_rational(rhs)}
                for coeffs, rhs in stratum.equalities
            ]
            entry["inequalities"] = [
                {"coeffs": [format_rational(c) for c in coeffs],
                 "rhs": format_rational(rhs)}
                for coeffs, rhs in stratum.inequalities
            ]
        doc["strata"].append(entry)
        if stratum.kind == "boundary":
            lines.append(f"boundary stratum at height {stratum.height}")
        else:
            lines.append(
                f"wall stratum T_{list(stratum.pair)} at height 0, "
                f"affine span dim {stratum.span_dim}")
    return 0, _emit(doc, lines, config.output_format)


def cmd_verify(config: RunConfig) -> tuple[int, str]:
    if config.example is None:
        raise errors.UnknownExample("verify needs --example <id>")
    ref = refdata.lookup_reference(config.example)
    order = config.order if config.order is not None else min(
        filter(None, [ref.delta_order, ref.inverse_order]), default=6)
    cutoff = max(config.cutoff, order)
    fan, cy = toric.validate_fan(ref.fan())
    charge, _, inverse = compute_inverse(fan, cy, cutoff)
    correction, _ = compute_correction(fan, cy, charge, inverse, cutoff)
    report = refdata.verify_against_reference(ref, correction.delta, inverse, order)
    doc = {
        "example": ref.id,
        "order": order,
        "passed": report.passed,
        "entries": [
            {
                "kind": entry.kind,
                **({"row": entry.row} if entry.row is not None else {}),
                "index": list(entry.index),
                "expected": format_rational(entry.expected),
                "computed": format_rational(entry.computed),
                "ok": entry.ok,
            }
            for entry in report.entries
        ],
    }
    lines = [entry.describe() for entry in report.entries]
    lines.append(
        f"{'PASS' if report.passed else 'FAIL'}: {ref.id} at order {order} "
        f"({len(report.entries)} coefficients compared, "
        f"{len(report.mismatches)} mismatches)")
    status = 0 if report.passed else EXIT_VERIFY_FAILED
    return status, _emit(doc, lines, config.output_format)


HANDLERS = {
    "validate": cmd_validate,
    "charges": cmd_charges,
    "periods": cmd_periods,
    "mirror-map": cmd_mirror_map,
    "invert": cmd_invert,
    "open-gw": cmd_open_gw,
    "mirror-eq": cmd_mirror_eq,
    "discriminant": cmd_discriminant,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# Argument parsing and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricmirror",
        description=("Exact instanton-corrected mirror equations, periods, and "
                     "open Gromov-Witten invariants of toric Calabi-Yau manifolds"))
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in [
        ("validate", "validate a fan and report its Calabi-Yau structure"),
        ("charges", "print the charge matrix"),
        ("periods", "print the single-logarithm period series f_a"),
        ("mirror-map", "print the forward mirror map q_a(qc)"),
        ("invert", "print the inverse mirror map qc_a(q)"),
        ("open-gw", "print the open Gromov-Witten coefficients of delta_0"),
        ("mirror-eq", "print the corrected mirror equation"),
        ("discriminant", "print the discriminant locus strata"),
        ("verify", "compare the pipeline against an embedded reference example"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", nargs="?", default=None,
                       help="fan file (JSON); omit when using --example")
        p.add_argument("--example", default=None,
                       help=f"embedded example id ({', '.join(refdata.reference_ids())})")
        p.add_argument("--cutoff", "-T", type=int, default=8,
                       help="series truncation total degree (default 8)")
        p.add_argument("--base-cone", type=int, default=None,
                       help="index of the maximal cone to use as base cone")
        p.add_argument("--format", dest="output_format",
                       choices=("text", "structured", "json", "latex"),
                       default="text",
                       help="output format (default text; structured and its "
                            "alias json emit one JSON document)")
        if name == "mirror-eq":
            p.add_argument("--form", choices=("flat", "c"), default="flat",
                           help="flat form (Kaehler monomial coefficients) or "
                                "C-form (symbolic area constants)")
        if name == "verify":
            p.add_argument("--order", type=int, default=None,
                           help="comparison order (default: the reference table order)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    namespace = parser.parse_args(argv)
    try:
        config = RunConfig(
            subcommand=namespace.subcommand,
            input_path=namespace.input,
            example=namespace.example,
            cutoff=namespace.cutoff,
            base_cone=namespace.base_cone,
            output_format=namespace.output_format,
            form=getattr(namespace, "form", "flat"),
            order=getattr(namespace, "order", None),
        )
        status, output = HANDLERS[config.subcommand](config)
    except errors.ToricMirrorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for klass in type(exc).__mro__:
            if klass in EXIT_CODES:
                return EXIT_CODES[klass]
        return EXIT_USAGE
    print(output)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
