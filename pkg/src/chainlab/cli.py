"""Command-line front end.

Exit status: 0 when every check passes, 1 on a failed check, 2 on usage or
parse errors, 3 on unsupported input or internal errors.
"""
from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .chains import (ABEL, RICCATI, ChainFamily, ChainOrderError, catalog_check,
                     generate_chain, max_order, to_latex)
from .kernel import UnsupportedExpression
from .parser import ExpressionSyntaxError, parse_expression, parse_rational
from .report import FAIL, PASS, CheckEntry, VerificationReport

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
VERBS = ("chain", "reduce", "symmetry", "solve", "verify", "numcheck", "report")
FORMATS = ("text", "latex", "json")
SUITES = ("catalog", "determining", "invariants", "symmetry", "reduction", "solutions",
          "published", "generality", "numeric", "all")


class UsageError(ValueError):
    pass


@dataclass
class Command:
    verb: str
    family: Optional[ChainFamily] = None
    order: Optional[int] = None
    constants: Optional[List] = None
    format: str = "text"
    options: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verb not in VERBS:
            raise UsageError(f"unknown verb {self.verb!r}")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.order is not None and self.order < 1:
            raise UsageError("order must be at least 1")
        if self.constants is not None and self.order is not None and len(self.constants) != self.order:
            raise UsageError(f"order {self.order} needs {self.order} constants, "
                             f"got {len(self.constants)}")


@dataclass
class Outcome:
    status: int
    text: str
    report: Optional[VerificationReport] = None


# --- argument parsing -----------------------------------------------------------------

def _exact(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ExpressionSyntaxError) as exc:
        raise UsageError(f"not an exact rational: {text!r} ({exc})") from None


def _constants(text: Optional[str]) -> Optional[List]:
    if text is None:
        return None
    out = []
    for part in text.split(","):
        part = part.strip()
        if part.isidentifier():
            out.append(part)
        else:
            out.append(_exact(part))
    return out


def _decimal(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def _interval(text: str) -> Tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError("interval must be 'a,b'")
    a, b = (_decimal(p) for p in parts)
    if not a < b:
        raise UsageError("interval must satisfy a < b")
    return a, b


def _families(name: Optional[str]) -> List[ChainFamily]:
    if name in (None, "both"):
        return [RICCATI, ABEL]
    return [ChainFamily.parse(name)]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", metavar="FILE", help="write the output to FILE instead of stdout")
    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", choices=("riccati", "abel"), required=True)

    p = argparse.ArgumentParser(prog="chainlab", description="Riccati and Abel chains: "
                                "generation, nonlocal symmetries, reductions and solutions.")
    p.add_argument("--version", action="version", version=f"chainlab {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("chain", parents=[common, fam], help="print a chain member")
    s.add_argument("--order", type=int, required=True)

    s = sub.add_parser("reduce", parents=[common, fam], help="similarity reduction ladder")
    s.add_argument("--order", type=int, required=True)

    s = sub.add_parser("symmetry", parents=[common, fam], help="nonlocal symmetry checks")
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--c", dest="c_expr", metavar="EXPR", help="specialize c(x), e.g. 'exp(2*x)'")

    s = sub.add_parser("solve", parents=[common, fam], help="closed-form general solution")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--constants", help="comma-separated rationals or symbols (default k1..kN)")
    s.add_argument("--eval", dest="eval_at", metavar="X", help="evaluate at rational X")
    s.add_argument("--recursive", action="store_true",
                   help="build by reduce-solve-integrate instead of directly")

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", choices=SUITES, default="all")
    s.add_argument("--family", choices=("riccati", "abel", "both"), default="both")
    s.add_argument("--max-order", type=int, default=None)
    s.add_argument("--c", dest="c_expr", metavar="EXPR")
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("numcheck", parents=[common, fam], help="numerical cross-check")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--constants", help="comma-separated rationals")
    s.add_argument("--interval", help="'a,b' (decimals allowed)")
    s.add_argument("--rtol", type=float, default=1e-9)
    s.add_argument("--random", type=int, default=0, metavar="K",
                   help="check K random constant sets on pole-free intervals instead")
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("report", parents=[common], help="full reproduction report")
    s.add_argument("--max-order", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    return p


def command_from_args(ns: argparse.Namespace) -> Command:
    fam = getattr(ns, "family", None)
    family = ChainFamily.parse(fam) if fam in ("riccati", "abel") else None
    consts = _constants(getattr(ns, "constants", None)) if ns.verb in ("solve", "numcheck") else None
    opts = {k: v for k, v in vars(ns).items()
            if k not in ("verb", "family", "order", "constants", "format")}
    if fam == "both":
        opts["family_set"] = "both"
    if ns.verb == "numcheck":
        if ns.rtol <= 0:
            raise UsageError("--rtol must be positive")
        if not ns.random:
            if consts is None or ns.interval is None:
                raise UsageError("numcheck needs --constants and --interval (or --random K)")
            opts["interval"] = _interval(ns.interval)
            if any(isinstance(c, str) for c in consts):
                raise UsageError("numcheck constants must be numbers")
    if ns.verb == "solve" and ns.eval_at is not None:
        opts["eval_at"] = _exact(ns.eval_at)
    if ns.verb in ("verify", "report") and ns.max_order is not None and ns.max_order < 1:
        raise UsageError("--max-order must be at least 1")
    return Command(ns.verb, family, getattr(ns, "order", None), consts, ns.format, opts)


# --- rendering -----------------------------------------------------------------------

def report_latex(report: VerificationReport) -> str:
    def esc(s: str) -> str:
        return s.replace("_", r"\_").replace("^", r"\^{}").replace("&", r"\&")
    rows = [r"\begin{tabular}{lll}", r"check & status & anchor \\ \hline"]
    for e in report.entries:
        rows.append(f"{esc(e.name)} & {e.status} & {esc(e.anchor)} \\\\")
    rows.append(r"\end{tabular}")
    return "\n".join(rows)


def _render(report: VerificationReport, fmt: str, command: str, text: Optional[str] = None,
            latex: Optional[str] = None) -> str:
    if fmt == "json":
        return report.to_json(command)
    if fmt == "latex":
        return latex if latex is not None else report_latex(report)
    return text if text is not None else report.to_text()


def _status(report: VerificationReport) -> int:
    return EXIT_PASS if report.status == PASS else EXIT_FAIL


# --- verbs ------------------------------------------------------------------------------

def _c_expr(opts):
    src = opts.get("c_expr")
    return parse_expression(src) if src else None


def run_chain(cmd: Command, line: str) -> Outcome:
    eq = generate_chain(cmd.family, cmd.order)
    report = VerificationReport(f"{cmd.family.value} chain member N={cmd.order}")
    bad = eq.weight_violations()
    report.add(CheckEntry(f"{cmd.family.value} N={cmd.order} isobaric structure",
                          PASS if not bad else FAIL, f"{cmd.family.value} chain recursion",
                          "0" if not bad else str(len(bad)), cmd.family.value, cmd.order))
    report.data.update({"equation": str(eq), "latex": to_latex(eq), "terms": len(eq.lhs)})
    return Outcome(_status(report), _render(report, cmd.format, line, str(eq), to_latex(eq)), report)


def run_reduce(cmd: Command, line: str) -> Outcome:
    from .chains import format_chain
    from .reduction import FactorizationFailure, reduce_chain, ZETA
    if cmd.order < 2:
        raise UsageError("reduce needs --order at least 2")
    report = VerificationReport(f"reduction ladder from {cmd.family.value} N={cmd.order}")
    eq = generate_chain(cmd.family, cmd.order)
    lines, latex, ladder = [], [], []
    while eq.order >= 2:
        anchor = f"similarity reduction of the {eq.family.value} chain to the Riccati chain"
        name = f"{eq.family.value} N={eq.order} = u * riccati N={eq.order - 1}(zeta)"
        try:
            res = reduce_chain(eq)
        except FactorizationFailure as exc:
            report.add(CheckEntry(name, FAIL, anchor, str(exc), eq.family.value, eq.order))
            break
        report.add(CheckEntry(name, PASS, anchor, "0", eq.family.value, eq.order))
        t = res.target
        lines.append(f"{eq.family.value} N={eq.order} -> {format_chain(t.lhs, ZETA)} = 0  (cofactor u)")
        latex.append(to_latex(t).replace("z", r"\zeta"))
        ladder.append(str(t))
        eq = t.rename("u")
    report.data["ladder"] = ladder
    return Outcome(_status(report), _render(report, cmd.format, line, "\n".join(lines),
                                            "\n".join(latex)), report)


def run_symmetry(cmd: Command, line: str) -> Outcome:
    from .symmetry import (build_covering_flux, build_generator, check_invariant_functions,
                           verify_determining_equations, verify_invariance)
    c = _c_expr(cmd.options)
    report = VerificationReport(f"nonlocal symmetry, {cmd.family.value} N={cmd.order}")
    report.extend(verify_determining_equations(cmd.family, c))
    report.extend(check_invariant_functions(cmd.family, c))
    report.extend(verify_invariance(cmd.family, cmd.order, c))
    vf = build_generator(cmd.family)
    report.data.update({"xi": str(vf.xi), "phi": str(vf.phi), "psi": str(vf.psi),
                        "flux": str(build_covering_flux(cmd.family))})
    if c is not None:
        report.data["c"] = str(c)
    return Outcome(_status(report), _render(report, cmd.format, line), report)


def run_solve(cmd: Command, line: str) -> Outcome:
    from .solutions import (PoleAt, direct_solution, evaluate_solution, recursive_solve,
                            verify_solution_symbolic)
    rec = cmd.options.get("recursive")
    sol = (recursive_solve if rec else direct_solution)(cmd.family, cmd.order, cmd.constants)
    cert = verify_solution_symbolic(generate_chain(cmd.family, cmd.order), sol)
    report = VerificationReport(f"{cmd.family.value} N={cmd.order} general solution")
    report.add(CheckEntry(f"{cmd.family.value} N={cmd.order} symbolic residual",
                          PASS if cert.valid else FAIL,
                          f"{cmd.family.value} chain general solution, order {cmd.order}",
                          str(cert.residual_numerator), cmd.family.value, cmd.order))
    report.data.update({"solution": str(sol), "numerator": str(sol.numerator),
                        "denominator": str(sol.denominator)})
    if cmd.family is ABEL:
        report.data["normalization"] = sol.normalization
    latex = sol.to_latex()
    text = [str(sol)]
    x = cmd.options.get("eval_at")
    if x is not None:
        try:
            v = evaluate_solution(sol, x)
        except PoleAt:
            report.add(CheckEntry(f"evaluation at x = {x}", FAIL, "closed-form evaluation",
                                  "pole", cmd.family.value, cmd.order))
            text.append(f"u({x}): pole")
            report.data["value"] = "pole"
        else:
            if cmd.family is RICCATI:
                text.append(f"u({x}) = {v}")
                report.data["value"] = str(v)
            elif v.not_real:
                text.append(f"u({x}) is not real (radicand {sol.published_radicand()} is "
                            f"{v.s * sol.normalization} < 0 there)")
                report.data["value"] = "not real"
            else:
                text.append(f"u({x}) = ({v.p})/sqrt({v.s}) ~ {v.approx!r}")
                report.data["value"] = {"p": str(v.p), "s": str(v.s), "approx": v.approx}
    return Outcome(_status(report), _render(report, cmd.format, line, "\n".join(text), latex), report)


def run_numcheck(cmd: Command, line: str) -> Outcome:
    from .numcheck import (NotRealOnInterval, PoleInInterval, StepUnderflow, cross_check,
                           random_case)
    o = cmd.options
    report = VerificationReport(f"numerical cross-check, {cmd.family.value} N={cmd.order}")
    anchor = f"{cmd.family.value} chain general solution, order {cmd.order}"
    if o.get("random"):
        rng = random.Random(o.get("seed", 0))
        cases = [random_case(cmd.family, cmd.order, rng) for _ in range(o["random"])]
    else:
        cases = [(cmd.constants, o["interval"])]
    for consts, interval in cases:
        try:
            r = cross_check(cmd.family, cmd.order, consts, interval, o.get("rtol", 1e-9))
            if len(cases) > 1:
                r.data.pop("samples", None)
            report.extend(r)
        except (PoleInInterval, NotRealOnInterval, StepUnderflow) as exc:
            report.add(CheckEntry(f"{cmd.family.value} N={cmd.order} on "
                                  f"[{interval[0]}, {interval[1]}]", FAIL, anchor, str(exc),
                                  cmd.family.value, cmd.order))
    return Outcome(_status(report), _render(report, cmd.format, line), report)


def suite_report(suite: str, families: Sequence[ChainFamily], top: Optional[int],
                 c=None, seed: int = 0) -> VerificationReport:
    from . import numcheck, reduction, solutions, symmetry
    out = VerificationReport(f"verification suite '{suite}'")
    run_all = suite == "all"

    def cap(default: int) -> int:
        return min(top, default) if top is not None else default

    if suite in ("catalog",) or run_all:
        rep = catalog_check()
        keep = {f.value for f in families}
        rep.entries = [e for e in rep.entries if e.family in keep]
        rep.errata = [e for e in rep.errata if e.subject.split()[0] in keep]
        out.extend(rep)
    if suite == "determining" or run_all:
        for f in families:
            out.extend(symmetry.verify_determining_equations(f, c))
    if suite == "invariants" or run_all:
        for f in families:
            out.extend(symmetry.check_invariant_functions(f, c))
    if suite == "symmetry" or run_all:
        for f in families:
            for n in range(2, cap(8) + 1):
                sub = symmetry.verify_invariance(f, n, c)
                status = sub.status
                res = "; ".join(e.residual for e in sub.entries if e.residual not in ("", "0")) or "0"
                out.add(CheckEntry(f"{f.value} N={n} invariant under the nonlocal generator",
                                   status, f"nonlocal symmetry of the {f.value} chain", res,
                                   f.value, n))
    if suite == "reduction" or run_all:
        for f in families:
            if cap(10) >= 2:
                out.extend(reduction.verify_reductions(f, cap(10)))
    if suite == "solutions" or run_all:
        mr = cap(8) if RICCATI in families else 0
        ma = cap(6) if ABEL in families else 0
        rep = solutions.verify_solution_families(mr, ma)
        out.extend(rep)
    if suite == "published" or run_all:
        rep = solutions.verify_published_solutions()
        keep = {f.value for f in families}
        rep.entries = [e for e in rep.entries if e.family in keep]
        rep.errata = [e for e in rep.errata if e.subject.split()[0] in keep]
        out.extend(rep)
    if suite == "generality" or (run_all and RICCATI in families):
        out.extend(solutions.verify_generality(cap(8)))
    if suite == "numeric" or run_all:
        rng = random.Random(seed)
        for f in families:
            for n in range(1, cap(5) + 1):
                consts, iv = numcheck.random_case(f, n, rng)
                rep = numcheck.cross_check(f, n, consts, iv, 1e-9)
                rep.data.pop("samples", None)
                out.extend(rep)
    return out.sorted()


def run_verify(cmd: Command, line: str) -> Outcome:
    o = cmd.options
    fams = _families(o.get("family_set") or (cmd.family.value if cmd.family else None))
    report = suite_report(o.get("suite", "all"), fams, o.get("max_order"), _c_expr(o), o.get("seed", 0))
    return Outcome(_status(report), _render(report, cmd.format, line), report)


def run_report(cmd: Command, line: str) -> Outcome:
    report = suite_report("all", [RICCATI, ABEL], cmd.options.get("max_order"), None,
                          cmd.options.get("seed", 0))
    report.subject = "reproduction report: Riccati and Abel chains"
    return Outcome(_status(report), _render(report, cmd.format, line), report)


RUNNERS = {"chain": run_chain, "reduce": run_reduce, "symmetry": run_symmetry,
           "solve": run_solve, "verify": run_verify, "numcheck": run_numcheck,
           "report": run_report}


def run(cmd: Command, line: str = "") -> Outcome:
    if cmd.verb != "verify" and cmd.verb != "report" and cmd.family is None:
        raise UsageError("--family is required")
    if cmd.order is not None and cmd.order > max_order():
        raise ChainOrderError(f"order {cmd.order} exceeds the maximum {max_order()} "
                              "(CHAINLAB_MAX_ORDER)")
    return RUNNERS[cmd.verb](cmd, line)


VALUE_OPTIONS = ("--interval", "--constants", "--eval", "--c")


def _join_values(argv: List[str]) -> List[str]:
    """``--interval -1,1`` -> ``--interval=-1,1`` so values may start with a minus sign."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and argv[i + 1] not in ("-h", "--help") and not argv[i + 1].startswith("--"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _join_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else EXIT_USAGE
    line = " ".join(["chainlab", *argv])
    try:
        out = run(command_from_args(ns), line)
    except ExpressionSyntaxError as exc:
        print(f"chainlab: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ChainOrderError) as exc:
        print(f"chainlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedExpression as exc:
        print(f"chainlab: unsupported: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - last-resort exit-code contract
        print(f"chainlab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(out.text + "\n")
    else:
        print(out.text)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
