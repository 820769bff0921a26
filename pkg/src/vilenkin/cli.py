"""Command-line front end: verification suites, kernel dumps, and sweeps.

All output is deterministic: floats print with full double precision,
JSON keys are sorted, CSV rows use comma separators with '.' decimals and
LF line endings.  Identical configuration plus seed gives byte-identical
files.  A resource guard rejects bases with more than 2^20 cells since
several sweeps are quadratic.

The VILENKIN_THREADS environment variable, when set before startup, caps
the BLAS thread pools; it is the only environment knob.
"""

from __future__ import annotations

import os

if "VILENKIN_THREADS" in os.environ:  # must precede the numpy import
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["VILENKIN_THREADS"])

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .counterexample import blowup_table
from .functions import write_csv
from .group import VilenkinBase, load_base, make_base
from .hardy import CorpusSpec
from .kernels import KernelConvention, dirichlet, fejer_kernel, riesz_kernel
from .maximal import OperatorSpec, WeightSpec, hp_to_lp_ratio
from .transform import forward
from .verify import SUITES, run_suite

__all__ = ["main", "RunConfig"]

SIZE_GUARD = 2**20


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters: base geometry, seed, output routing."""

    moduli: tuple[int, ...]
    depth: int
    seed: int | None
    out: str | None
    format: str

    def base(self) -> VilenkinBase:
        base = make_base(self.moduli, self.depth)
        if base.size > SIZE_GUARD:
            raise SystemExit(
                f"refusing to run: base has {base.size} cells, guard is {SIZE_GUARD}"
            )
        return base

    def echo(self) -> dict[str, Any]:
        return {
            "moduli": list(self.moduli),
            "depth": self.depth,
            "seed": self.seed,
            "format": self.format,
        }


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    moduli: Sequence[int] | None = None
    depth: int | None = None
    if getattr(args, "config", None):
        loaded = load_base(args.config)
        moduli, depth = loaded.moduli, loaded.depth
    if getattr(args, "base", None):
        moduli = tuple(int(tok) for tok in args.base.split(","))
        depth = None
    if getattr(args, "depth", None):
        depth = args.depth
    if moduli is None:
        moduli = (2,)
        if depth is None:
            depth = 10
    if depth is None:
        depth = len(moduli)
    return RunConfig(
        moduli=tuple(moduli),
        depth=depth,
        seed=getattr(args, "seed", None),
        out=getattr(args, "out", None),
        format=getattr(args, "format", "csv") or "csv",
    )


def _json_default(obj: Any) -> Any:
    """Fold numpy scalars into plain JSON types."""
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _emit_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _emit_rows(header: list[str], rows: list[list[Any]], cfg: RunConfig) -> None:
    """Write a rectangular report as CSV or JSON per the config."""
    if cfg.format == "json":
        payload = {"config": cfg.echo(), "header": header, "rows": rows}
        _emit_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n", cfg.out)
        return
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _emit_text(buf.getvalue(), cfg.out)


def _parse_weight(spec: str, p: float | None) -> WeightSpec:
    if spec == "unit":
        return WeightSpec.unit()
    if spec == "log":
        return WeightSpec.log()
    if spec == "power_log":
        if p is None:
            raise SystemExit("weight power_log needs --p")
        return WeightSpec.power_log(p)
    if spec == "power_log_sq":
        if p is None:
            raise SystemExit("weight power_log_sq needs --p")
        return WeightSpec.power_log_sq(p)
    raise SystemExit(f"unknown weight spec {spec!r} (use unit|log|power_log|power_log_sq)")


# ----------------------------------------------------------------------
# subcommand handlers


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    cfg.base()  # applies the resource guard
    kwargs: dict[str, Any] = {}
    if args.suite == "kernels" and args.max_a is not None:
        kwargs["max_exponent"] = args.max_a
    if args.suite == "lemmas" and args.max_a is not None:
        kwargs["max_cylinder_level"] = args.max_a
    if args.suite == "atoms" and args.count is not None:
        kwargs["count"] = args.count
    try:
        report = run_suite(args.suite, seed=cfg.seed, **kwargs)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        extras = " ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}" for k, v in check.detail.items())
        print(f"[{status}] {report.suite}/{check.name} {extras}".rstrip())
    payload = {"config": cfg.echo(), **report.to_payload()}
    if cfg.out:
        _emit_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n", cfg.out)
    return 0 if report.passed else 1


def _cmd_kernel_dump(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    base = cfg.base()
    level = args.level if args.level is not None else base.depth
    convention = KernelConvention(args.convention)
    if args.which == "dirichlet":
        fn = dirichlet(base, args.n, level)
    elif args.which == "fejer":
        fn = fejer_kernel(base, args.n, level, convention)
    else:
        fn = riesz_kernel(base, args.n, level)
    if cfg.format == "json":
        rows = [[r, v.real, v.imag] for r, v in enumerate(fn.values)]
        _emit_rows(["rank", "real", "imag"], rows, cfg)
    elif cfg.out is None:
        write_csv(fn, sys.stdout)
    else:
        write_csv(fn, cfg.out)
    return 0


def _cmd_spectrum_dump(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    base = cfg.base()
    level = args.level if args.level is not None else base.depth
    convention = KernelConvention(args.convention)
    if args.which == "dirichlet":
        fn = dirichlet(base, args.n, level)
    elif args.which == "fejer":
        fn = fejer_kernel(base, args.n, level, convention)
    else:
        fn = riesz_kernel(base, args.n, level)
    spec = forward(fn)
    rows = [[k, _fmt(c.real), _fmt(c.imag)] for k, c in enumerate(spec.coeffs)]
    _emit_rows(["index", "real", "imag"], rows, cfg)
    return 0


def _cmd_atoms_corpus(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    base = cfg.base()
    if cfg.seed is None:
        raise SystemExit("atoms corpus is randomized: --seed is required")
    hi_default = max(1, min(4, base.depth - 1))
    spec = CorpusSpec(
        moduli=cfg.moduli,
        depth=cfg.depth,
        p=args.p,
        count=args.count,
        seed=cfg.seed,
        support_level_min=args.level_min,
        support_level_max=args.level_max if args.level_max is not None else hi_default,
    )
    spec.generate()  # fail fast if the geometry cannot host the corpus
    _emit_text(spec.to_json(), cfg.out)
    return 0


def _cmd_maximal_table(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    spec = CorpusSpec.from_path(args.input)
    base = spec.base()
    if base.size > SIZE_GUARD:
        raise SystemExit(f"refusing to run: corpus base has {base.size} cells")
    n_max = args.nmax if args.nmax is not None else base.size
    weight = _parse_weight(args.weight, args.p)
    if args.op == "sigma":
        operator = OperatorSpec("sigma", n_max)
    elif weight.kind == "unit":
        operator = OperatorSpec("riesz", n_max)
    else:
        operator = OperatorSpec("weighted_riesz", n_max, weight)
    header = ["atom", "support_level", "hardy_norm", "strong_ratio", "weak_ratio"]
    rows: list[list[Any]] = []
    for idx, atom in enumerate(spec.generate()):
        f = atom.values.at_level(base.depth)
        ratio = hp_to_lp_ratio(f, operator, args.p)
        rows.append(
            [
                idx,
                atom.support.level,
                _fmt(ratio.hardy_norm),
                _fmt(ratio.strong),
                _fmt(ratio.weak),
            ]
        )
    _emit_rows(header, rows, cfg)
    return 0


def _cmd_counterexample_sweep(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    base = cfg.base()
    weight = _parse_weight(args.phi, args.p)
    table = blowup_table(base, weight, args.p, range(1, args.kmax + 1))
    header = [
        "k",
        "probe_indices",
        "hardy_norm",
        "numerator",
        "ratio",
        "analytic_lower_bound",
        "trend_flag",
    ]
    rows = [
        [
            row.k,
            ";".join(str(q) for q in row.probe_indices),
            _fmt(row.hardy_norm),
            _fmt(row.numerator),
            _fmt(row.ratio),
            _fmt(row.analytic_lower_bound),
            table.flag,
        ]
        for row in table.rows
    ]
    _emit_rows(header, rows, cfg)
    return 0


# ----------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    # shared flags accepted both before and after the subcommand; SUPPRESS
    # keeps an omitted late flag from clobbering an early one
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON config file with moduli and depth")
    common.add_argument("--base", help="comma-separated moduli pattern, e.g. 2,3 (cycled to depth)")
    common.add_argument("--depth", type=int, help="truncation depth K")
    common.add_argument("--seed", type=int, help="seed for randomized commands")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")

    parser = argparse.ArgumentParser(
        prog="vilenkin",
        description="Exact harmonic-analysis checks on bounded Vilenkin groups",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a property suite", parents=[common])
    p_verify.add_argument("suite", choices=SUITES)
    p_verify.add_argument("--max-a", type=int, help="exponent / cylinder-level cap for kernels and lemmas")
    p_verify.add_argument("--count", type=int, help="corpus size for the atoms suite")
    p_verify.set_defaults(func=_cmd_verify)

    p_kernel = sub.add_parser("kernel", help="kernel value tables")
    kernel_sub = p_kernel.add_subparsers(dest="kernel_command", required=True)
    p_kdump = kernel_sub.add_parser("dump", help="dump one kernel as rank,real,imag", parents=[common])
    p_kdump.add_argument("--which", choices=("dirichlet", "fejer", "riesz"), required=True)
    p_kdump.add_argument("--n", type=int, required=True)
    p_kdump.add_argument("--level", type=int)
    p_kdump.add_argument("--convention", choices=("zero_based", "shifted"), default="shifted")
    p_kdump.set_defaults(func=_cmd_kernel_dump)

    p_spec = sub.add_parser("spectrum", help="coefficient tables")
    spec_sub = p_spec.add_subparsers(dest="spectrum_command", required=True)
    p_sdump = spec_sub.add_parser("dump", help="dump a kernel spectrum as index,real,imag", parents=[common])
    p_sdump.add_argument("--which", choices=("dirichlet", "fejer", "riesz"), required=True)
    p_sdump.add_argument("--n", type=int, required=True)
    p_sdump.add_argument("--level", type=int)
    p_sdump.add_argument("--convention", choices=("zero_based", "shifted"), default="shifted")
    p_sdump.set_defaults(func=_cmd_spectrum_dump)

    p_atoms = sub.add_parser("atoms", help="atom corpora")
    atoms_sub = p_atoms.add_subparsers(dest="atoms_command", required=True)
    p_corpus = atoms_sub.add_parser("corpus", help="emit a reproducible corpus descriptor", parents=[common])
    p_corpus.add_argument("--count", type=int, required=True)
    p_corpus.add_argument("--p", type=float, required=True)
    p_corpus.add_argument("--level-min", type=int, default=1)
    p_corpus.add_argument("--level-max", type=int)
    p_corpus.set_defaults(func=_cmd_atoms_corpus)

    p_max = sub.add_parser("maximal", help="maximal-operator ratio tables")
    max_sub = p_max.add_subparsers(dest="maximal_command", required=True)
    p_table = max_sub.add_parser("table", help="operator ratios per corpus atom", parents=[common])
    p_table.add_argument("--op", choices=("sigma", "riesz"), required=True)
    p_table.add_argument("--weight", default="unit")
    p_table.add_argument("--p", type=float, required=True)
    p_table.add_argument("--nmax", type=int)
    p_table.add_argument("--input", required=True, help="corpus descriptor JSON")
    p_table.set_defaults(func=_cmd_maximal_table)

    p_cex = sub.add_parser("counterexample", help="blow-up sweeps")
    cex_sub = p_cex.add_subparsers(dest="counterexample_command", required=True)
    p_sweep = cex_sub.add_parser("sweep", help="stage-by-stage blow-up table", parents=[common])
    p_sweep.add_argument("--phi", default="unit", help="weight: unit|log|power_log|power_log_sq")
    p_sweep.add_argument("--p", type=float, required=True)
    p_sweep.add_argument("--kmax", type=int, required=True)
    p_sweep.set_defaults(func=_cmd_counterexample_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:  # a downstream pager closed the stream
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    raise SystemExit(main())
