"""Command-line entry point: ``nsapprox {ns,alpha,net,sdf,counterexample}``.

Exit codes: 0 success, 2 input error, 3 numeric escalation failure,
4 infinity-plus where a finite value is required.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import HypothesisViolation, InvalidArgument, PrecisionError, ResourceError
from .exact import ONE, Z, poly
from .groupring import GroupElement, GroupRingMatrix, VCGroupSpec, infinite_dihedral, restrict_to_Z
from .nets import ReportConfig, counterexample_report, net_report
from .ns_exact import ns_number_matrix, unit_circle_roots
from .quotients import ExactData, Tolerances, dense_quotient, sdf_step, spectral_sample
from .smith import LaurentMatrix, smith_normal_form

EXIT_OK, EXIT_INPUT, EXIT_PRECISION, EXIT_HYPOTHESIS = 0, 2, 3, 4
DENSE_CHECK_MAX = 64  # cross-check against the dense quotient when r*i and s*i stay below this

BUILTINS = {
    "z-1": lambda: (LaurentMatrix([[Z - 1]]), None),
    "counterexample": lambda: (LaurentMatrix([[poly(5, -6, 5)]]), None),
    "dinf-xt": lambda: (GroupRingMatrix([[{GroupElement(1, 0): ONE, GroupElement(0, 1): ONE}]]),
                        infinite_dihedral()),
}


class Problem:
    """A resolved input: the Laurent matrix whose quotients are sampled, and [G : Z]."""

    def __init__(self, source: str, A: LaurentMatrix, cosets: int = 1, group: VCGroupSpec | None = None):
        self.source, self.A, self.cosets, self.group = source, A, cosets, group

    def header(self) -> dict:
        out = {"input": self.source, "rows": self.A.rows, "cols": self.A.cols, "cosets": self.cosets}
        if self.group is not None:
            out["group"] = self.group.name or self.group.to_json()
        return out


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidArgument(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{path}: invalid JSON ({exc})") from None


def load_problem(matrix: str, group: str | None) -> Problem:
    spec = None
    if group is not None:
        spec = VCGroupSpec.from_json(_read_json(group) if Path(group).is_file() else group)
    if matrix in BUILTINS:
        M, builtin_spec = BUILTINS[matrix]()
        spec = spec or builtin_spec
    else:
        data = _read_json(matrix)
        M = GroupRingMatrix.from_json(data) if spec is not None else LaurentMatrix.from_json(data)
    if spec is not None and isinstance(M, LaurentMatrix):
        M = GroupRingMatrix.from_laurent(M)
    if isinstance(M, GroupRingMatrix):
        if spec is None:
            raise InvalidArgument("a group-ring matrix needs --group")
        return Problem(matrix, restrict_to_Z(M, spec), spec.n, spec)
    return Problem(matrix, M)


def parse_levels(args) -> list[int]:
    levels: list[int] = []
    if args.levels:
        try:
            a, b = (int(x) for x in args.levels.split(".."))
        except ValueError:
            raise InvalidArgument(f"--levels expects a..b, got {args.levels!r}") from None
        levels.extend(range(a, b + 1))
    if args.level_list:
        levels.extend(_int_list(args.level_list, "--level-list"))
    if not levels:
        raise InvalidArgument("no levels given (use --levels a..b or --level-list)")
    if min(levels) < 1:
        raise InvalidArgument("levels must be positive")
    return sorted(set(levels))


def _int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidArgument(f"{flag} expects comma-separated integers, got {text!r}") from None


def tolerances(args) -> Tolerances:
    tols = Tolerances(tol_rank=args.tol_rank, tol_cluster=args.tol_cluster, bits=args.precision_bits)
    if not (0 < tols.tol_rank < 1 and 0 < tols.tol_cluster < 1) or tols.bits < 64:
        raise InvalidArgument("tolerances must lie in (0, 1) and --precision-bits be at least 64")
    return tols


def _config_lines(cfg: dict) -> str:
    return "".join(f"# {k}={json.dumps(v, sort_keys=True)}\n" for k, v in cfg.items())


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------

def cmd_ns(args) -> int:
    prob = load_problem(args.matrix, args.group)
    value = ns_number_matrix(prob.A, bits=args.precision_bits)
    factors = smith_normal_form(prob.A).factors if not prob.A.is_zero() else ()
    roots = unit_circle_roots(factors[-1], bits=args.precision_bits) if factors else []
    table = [{"turns": r.turns, "re": float(r.approx.real), "im": float(r.approx.imag),
              "multiplicity": r.multiplicity, "root_of_unity_order": r.root_of_unity_order} for r in roots]
    if args.format in (None, "json"):
        _emit(args, _dump({"config": {**prob.header(), "precision_bits": args.precision_bits},
                           "ns_number": value.to_json(), "display": str(value),
                           "invariant_factors": [str(f) for f in factors], "unit_circle_roots": table}))
    else:
        sep = "," if args.format == "csv" else "\t"
        lines = [_config_lines({**prob.header(), "ns_number": str(value),
                                "invariant_factors": [str(f) for f in factors]})]
        lines.append(sep.join(["turns", "re", "im", "multiplicity", "root_of_unity_order"]) + "\n")
        for row in table:
            lines.append(sep.join("" if v is None else repr(v) for v in row.values()) + "\n")
        _emit(args, "".join(lines))
    return EXIT_OK


def _dense_check(prob: Problem, i: int, sample) -> bool:
    """Compare rank and sigma_plus against the explicit block-circulant matrix."""
    if max(prob.A.rows, prob.A.cols) * i > DENSE_CHECK_MAX:
        return False
    sv = np.linalg.svd(dense_quotient(prob.A, i), compute_uv=False)
    top = sv.max() if sv.size else 0.0
    pos = sv[sv > sample.tol_rank * top] if top else sv[:0]
    if pos.size != sample.rank or (pos.size and abs(pos.min() - sample.sigma_plus) > 1e-9 * max(1.0, top)):
        raise PrecisionError(f"level {i}: block-DFT spectrum disagrees with the dense quotient")
    return True


def cmd_alpha(args) -> int:
    prob = load_problem(args.matrix, args.group)
    tols = tolerances(args)
    levels = parse_levels(args)
    exact = ExactData.of(prob.A, tols.bits) if not prob.A.is_zero() else None
    samples = []
    for i in levels:
        s = spectral_sample(prob.A, i, prob.cosets * i, tols, exact)
        if _dense_check(prob, i, s):
            s = replace(s, flags=s.flags + ("dense_checked",))
        samples.append(s)
    cfg = {**prob.header(), "levels": levels, "tol_rank": tols.tol_rank, "tol_cluster": tols.tol_cluster,
           "precision_bits": tols.bits}
    if args.format == "json":
        _emit(args, _dump({"config": cfg, "samples": [s.to_json() for s in samples]}))
    else:
        sep = "\t" if args.format == "tsv" else ","
        header = samples[0].CSV_HEADER if samples else ""
        body = [header.replace(",", sep)] + [s.csv_row().replace(",", sep) for s in samples]
        _emit(args, _config_lines(cfg) + "\n".join(body) + "\n")
    return EXIT_OK


def cmd_sdf(args) -> int:
    prob = load_problem(args.matrix, args.group)
    tols = tolerances(args)
    if args.level is None:
        raise InvalidArgument("sdf needs --level")
    i = args.level
    exact = ExactData.of(prob.A, tols.bits) if not prob.A.is_zero() else None
    step = sdf_step(prob.A, i, prob.cosets * i, tols, exact)
    cfg = {**prob.header(), "level": i, "group_order": prob.cosets * i, "tol_cluster": tols.tol_cluster}
    if args.format == "json":
        _emit(args, _dump({"config": cfg, "base": str(step.base),
                           "jumps": [{"lambda": s, "F": str(F)} for s, F in step.jumps]}))
    else:
        text = step.tsv()
        if args.format == "csv":
            text = text.replace("\t", ",")
        _emit(args, _config_lines(cfg) + text)
    return EXIT_OK


def _report_config(args, tols: Tolerances) -> ReportConfig:
    base = ReportConfig()
    K_set = tuple(_int_list(args.K_set, "--K-set")) if args.K_set else base.K_set
    if not K_set or min(K_set) < 1:
        raise InvalidArgument("--K-set must list positive integers")
    n_max = args.n_max or base.n_max
    i_max = args.i_max or base.i_budget
    if n_max < 1 or i_max < 3:
        raise InvalidArgument("--n-max must be positive and --i-max at least 3")
    lo, hi = base.sep_range
    return ReportConfig(K_set=K_set, n_max=n_max, i_budget=i_max, i_min=args.i_min,
                        sep_range=(min(lo, i_max), min(hi, i_max)), tols=tols)


def _write_report(args, report, extra_text: str = "") -> None:
    if args.format == "csv":
        _emit(args, _config_lines(report.config.to_json()) + report.alpha_csv())
        return
    if args.format == "json" or args.out:
        text = _dump(report.to_json())
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    if extra_text and args.format != "json":
        sys.stdout.write(extra_text)


def _summary(report) -> str:
    lines = [f"polynomial: {report.p}", f"Novikov-Shubin number: {report.ns}"]
    lines += [f"flag: {f}" for f in report.flags]
    for K in report.config.K_set:
        lines.append(f"K = {K}: alpha at record levels (new minima marked *)")
        desc = {s.level for s in report.descending_table(K)}
        for s in report.record_samples.get(K, []):
            a = "undefined" if s.alpha is None else f"{s.alpha:.6f}"
            lines.append(f"  {'*' if s.level in desc else ' '} i = {s.level:>8}  sigma+ = {s.sigma_plus:.6e}  "
                         f"alpha = {a}")
    est = report.net_estimate
    lines.append(f"net liminf estimate: {est.liminf_est:.6f} (K = {est.witnesses['liminf'][0]}, "
                 f"i = {est.witnesses['liminf'][1]})")
    lines.append(f"net limsup estimate: {est.limsup_est:.6f} (K = {est.witnesses['limsup'][0]}, "
                 f"i = {est.witnesses['limsup'][1]})")
    alphas = [s.alpha for s in report.samples.values() if s.alpha is not None]
    if alphas:
        lines.append(f"min sampled alpha: {min(alphas):.6f}")
    if report.baker is not None:
        b = report.baker
        lines.append(f"Baker floor with D = {b['D']}: {b['floor_fraction']} = {b['liminf_floor']:.6f}; "
                     f"all samples above: {b['all_samples_above_floor']}")
    return "\n".join(lines) + "\n"


def cmd_net(args) -> int:
    prob = load_problem(args.matrix, args.group)
    tols = tolerances(args)
    report = net_report(prob.A, _report_config(args, tols), args.baker_D, prob.cosets)
    _write_report(args, report, _summary(report))
    return EXIT_OK


def cmd_counterexample(args) -> int:
    tols = tolerances(args)
    report = counterexample_report(poly(5, -6, 5), _report_config(args, tols), args.baker_D)
    _write_report(args, report, _summary(report))
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    defaults = Tolerances()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rank", type=float, default=defaults.tol_rank)
    common.add_argument("--tol-cluster", type=float, default=defaults.tol_cluster)
    common.add_argument("--precision-bits", type=int, default=defaults.bits)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=["json", "csv", "tsv"])

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("matrix", help=f"matrix JSON file or built-in: {', '.join(BUILTINS)}")
    matrix.add_argument("--group", help="group spec JSON file or name (Z, Dinf, ZxZ2, ZxZ3)")

    levels = argparse.ArgumentParser(add_help=False)
    levels.add_argument("--levels", help="inclusive range a..b")
    levels.add_argument("--level-list", help="comma-separated levels")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--K-set", dest="K_set", help="comma-separated K (default 1)")
    budget.add_argument("--i-max", type=int, help="largest sampled level (default 100000)")
    budget.add_argument("--i-min", type=int, help="smallest sampled level (default: first level with sigma+ < 1)")
    budget.add_argument("--n-max", type=int, help="record search bound (default 100000)")
    budget.add_argument("--baker-D", type=float, help="Baker constant for the liminf floor")

    parser = argparse.ArgumentParser(prog="nsapprox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ns", parents=[matrix, common], help="exact Novikov-Shubin number").set_defaults(func=cmd_ns)
    sub.add_parser("alpha", parents=[matrix, levels, common],
                   help="alpha numbers of finite quotients").set_defaults(func=cmd_alpha)
    p = sub.add_parser("sdf", parents=[matrix, common], help="spectral distribution step function at one level")
    p.add_argument("--level", type=int)
    p.set_defaults(func=cmd_sdf)
    sub.add_parser("net", parents=[matrix, budget, common],
                   help="net liminf/limsup estimates").set_defaults(func=cmd_net)
    sub.add_parser("counterexample", parents=[budget, common],
                   help="alpha numbers of 5z^2 - 6z + 5 along records").set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HypothesisViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (InvalidArgument, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
