"""Command-line surface: every density, constant, and experiment as a
reproducible subcommand emitting CSV or JSON.

Exit codes: 0 on success, 2 on argument/domain errors, 1 on numerical
failure.  Every table carries a `# generated-by, version, seed, args` comment
line, and rerunning with the printed seed reproduces the bytes exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__, golden_thompson as gt, harness, qinfo, symbolic
from .errors import DomainError, NumericsError
from .horn import GapInterval, SpectrumPair2, diag_pdf_2x2, eigen_gap_pdf_2x2
from .linalg import RandomStream, Spectrum
from .special import single_eigenvalue_density_sum

DEFAULT_SAMPLES = 100_000
DEFAULT_BINS = 200
DEFAULT_GRID_POINTS = 400


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _spectrum2(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid_spec(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected lo:hi:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if steps < 2 or not lo < hi:
        raise argparse.ArgumentTypeError("grid needs lo < hi and steps >= 2")
    return lo, hi, steps


def _fit_window(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return float(parts[0]), float(parts[1])


def _orbit_param(text: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not 0.0 <= v < 0.5:
        raise argparse.ArgumentTypeError(
            f"orbit parameter must lie in [0, 1/2) (1/2 is a degenerate orbit), got {v}"
        )
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


class Output:
    """Uniform CSV/JSON rendering with the reproducibility header."""

    def __init__(self, args):
        self.meta = {
            "generated_by": f"orbitsum/{__version__}",
            "seed": args.seed,
            "args": args.args_string,
        }
        self.fmt = args.format
        self.columns: list = []
        self.rows: list = []
        self.extra: dict = {}

    def table(self, columns, rows):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]

    def note(self, key, value):
        self.extra[key] = value

    def render(self) -> str:
        if self.fmt == "json":
            payload = {
                "meta": self.meta,
                "columns": self.columns,
                "rows": [[v if not isinstance(v, float) else float(_fmt(v)) for v in row] for row in self.rows],
            }
            payload.update(self.extra)
            return json.dumps(payload, indent=2) + "\n"
        buf = io.StringIO()
        meta = self.meta
        buf.write(
            f"# generated-by={meta['generated_by']} seed={meta['seed']} args={meta['args']}\n"
        )
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        for key, value in self.extra.items():
            rendered = json.dumps(value) if isinstance(value, (dict, list)) else _fmt(value)
            buf.write(f"# {key}={rendered}\n")
        return buf.getvalue()


def _density_table(out: Output, grid, density):
    out.table(["x", "value"], [(float(x), float(density(x))) for x in grid])


def _default_grid(lo: float, hi: float, clip_lo=None, points: int = DEFAULT_GRID_POINTS):
    pad = harness.RANGE_PAD * (hi - lo)
    lo, hi = lo - pad, hi + pad
    if clip_lo is not None:
        lo = max(lo, clip_lo)
    return np.linspace(lo, hi, points)


def _cmd_pdf2(args, out: Output):
    pair = SpectrumPair2(Spectrum(args.a), Spectrum(args.b))
    pair.require_nondegenerate()
    iv = GapInterval.from_pair(pair)
    if args.which == "eigen":
        grid = (
            np.linspace(*args.grid)
            if args.grid
            else _default_grid(iv.low, iv.high, clip_lo=0.0)
        )
        _density_table(out, grid, lambda d: eigen_gap_pdf_2x2(pair, d))
    else:
        tr = pair.trace_sum
        half = 0.5 * (pair.alpha + pair.beta)
        grid = (
            np.linspace(*args.grid)
            if args.grid
            else _default_grid(0.5 * tr - half, 0.5 * tr + half)
        )
        _density_table(out, grid, lambda x: diag_pdf_2x2(pair, x, tr))


def _verify_into(out: Output, kind, params, args, note_key: str = "comparison"):
    stream = RandomStream(args.seed)
    _, report = harness.verify(kind, params, args.samples, stream, bins=args.bins)
    out.note(
        note_key,
        {
            "density_id": report.density_id,
            "ks_statistic": float(_fmt(report.ks_statistic)),
            "l1_distance": float(_fmt(report.l1_distance)),
            "sample_count": report.sample_count,
            "threshold": harness.KS_DEFAULT_THRESHOLD,
            "pass": report.ks_statistic < harness.KS_DEFAULT_THRESHOLD,
        },
    )


def _cmd_gue_sum(args, out: Output):
    n, K = args.n, args.k
    if n == 2:
        radius = 6.0 * math.sqrt(2.0 * K)
        grid = _default_grid(0.0, radius, clip_lo=0.0)
        _density_table(out, grid, lambda d: harness_gap_density_gue(K, d))
    else:
        radius = math.sqrt(K) * (math.sqrt(2.0 * n) + 2.0)
        grid = _default_grid(-radius, radius)
        _density_table(out, grid, lambda x: single_eigenvalue_density_sum(n, K, x))
    if args.verify:
        _verify_into(out, "gue-sum", {"n": n, "k": K}, args)


def harness_gap_density_gue(K: int, d: float) -> float:
    from .ensembles import gue_sum_gap_marginal

    return gue_sum_gap_marginal(K, d) if d >= 0 else 0.0


def _cmd_wishart_sum(args, out: Output):
    from .ensembles import wishart_sum_eigen_pdf, wishart_sum_gap_marginal

    m, n, K = args.m, args.n, args.k
    if m > n:
        raise DomainError(f"Wishart needs m <= n, got m={m}, n={n}")
    scale = K * n
    if m == 1:
        grid = _default_grid(0.0, scale + 12.0 * math.sqrt(scale) + 25.0, clip_lo=0.0)
        _density_table(out, grid, lambda w: wishart_sum_eigen_pdf(1, n, K, (w,)))
    elif m == 2:
        grid = _default_grid(0.0, 4.0 * scale + 40.0, clip_lo=0.0)
        _density_table(out, grid, lambda d: wishart_sum_gap_marginal(n, K, d))
    else:
        raise DomainError("wishart-sum tables support m in {1, 2} (no closed 1-d marginal beyond)")
    if args.verify:
        _verify_into(out, "wishart-sum", {"m": m, "n": n, "k": K}, args)


def _cmd_single_eig(args, out: Output):
    n, K = args.n, args.k
    radius = math.sqrt(K) * (math.sqrt(2.0 * n) + 2.0)
    grid = _default_grid(-radius, radius)
    _density_table(out, grid, lambda x: single_eigenvalue_density_sum(n, K, x))


def _cmd_gt(args, out: Output):
    if args.gt_command == "ratio":
        ratio = gt.alpha_ratio(args.n)
        out.table(["fraction", "decimal"], [[str(ratio), float(ratio)]])
    elif args.gt_command == "empirical":
        stream = RandomStream(args.seed)
        report = gt.gt_empirical(args.n, args.samples, stream)
        out.table(
            ["n", "samples", "empirical_ratio", "stderr", "analytic_ratio", "violations"],
            [[report.n, report.samples, report.empirical_ratio, report.stderr,
              report.analytic_ratio, report.violations]],
        )
    else:
        table = gt.ln_alpha_scan(args.nmax)
        out.table(["n", "ln_alpha"], list(zip(table.abscissae, table.ordinates)))
        window = args.fit if args.fit else (2.0, float(args.nmax))
        slope, intercept = gt.least_squares_fit(table, *window)
        out.note("fit", {"slope": float(_fmt(slope)), "intercept": float(_fmt(intercept)),
                         "window": f"{window[0]:g}:{window[1]:g}"})


def _mixture_verify(out: Output, args, p, empirical, analytic, histogram_kind):
    """3-sigma mean agreement plus the KS comparison of the matching mixture law."""
    stream = RandomStream(args.seed)
    mean, stderr = empirical(p, args.samples, stream)
    z = abs(mean - analytic) / stderr if stderr > 0 else 0.0
    out.note("comparison", {
        "empirical_mean": float(_fmt(mean)), "stderr": float(_fmt(stderr)),
        "analytic": float(_fmt(analytic)), "z_score": float(_fmt(z)), "pass": z < 3.0,
    })
    _verify_into(out, histogram_kind, {"mu": p.mu, "nu": p.nu}, args,
                 note_key="histogram_comparison")


def _cmd_qjsd(args, out: Output):
    p = qinfo.OrbitParams(args.mu, args.nu)
    out.table(["mu", "nu", "value"], [[p.mu, p.nu, qinfo.qjsd_average(p)]])
    if args.verify:
        _mixture_verify(out, args, p, qinfo.qjsd_empirical, qinfo.qjsd_average(p), "eigen-mix")


def _cmd_coherence(args, out: Output):
    p = qinfo.OrbitParams(args.mu, args.nu)
    out.table(["mu", "nu", "value"], [[p.mu, p.nu, qinfo.coherence_average(p)]])
    if args.verify:
        _mixture_verify(
            out, args, p, qinfo.coherence_empirical, qinfo.coherence_average(p), "diag-mix"
        )


def _cmd_surface(args, out: Output):
    rows = qinfo.surface_rows(args.which, args.grid)
    out.table(["mu", "nu", "value"], rows)


def _cmd_deriv(args, out: Output):
    if args.ensemble == "gue":
        diag = symbolic.gue_diag_density(args.n, args.k)
        closed = symbolic.gue_sum_closed_form(args.n, args.k)
        label = f"gue(n={args.n}, K={args.k})"
    else:
        diag = symbolic.wishart_diag_density(args.n, args.n, args.k)
        closed = symbolic.wishart_sum_closed_form(args.n, args.n, args.k)
        label = f"wishart(m=n={args.n}, K={args.k})"
    engine = symbolic.derivative_principle(diag)
    out.table(
        ["field", "value"],
        [
            ["ensemble", label],
            ["diagonal_density", str(diag)],
            ["engine_output", str(engine.canonical())],
            ["closed_form", str(closed.canonical())],
            ["exact_match", str(engine.equals_exactly(closed)).lower()],
        ],
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitsum",
        description="Spectral statistics of sums of random Hermitian matrices.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES,
                        help=f"Monte Carlo draws (default {DEFAULT_SAMPLES})")
    common.add_argument("--bins", type=_positive_int, default=DEFAULT_BINS,
                        help=f"histogram bins (default {DEFAULT_BINS})")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    sub = parser.add_subparsers(dest="command", required=True)

    pdf2 = sub.add_parser("pdf2", parents=[common],
                          help="closed-form n=2 orbit-sum densities")
    pdf2.add_argument("which", choices=("eigen", "diag"))
    pdf2.add_argument("--a", type=_spectrum2, required=True, metavar="a1,a2")
    pdf2.add_argument("--b", type=_spectrum2, required=True, metavar="b1,b2")
    pdf2.add_argument("--grid", type=_grid_spec, default=None, metavar="lo:hi:steps")
    pdf2.set_defaults(handler=_cmd_pdf2)

    gs = sub.add_parser("gue-sum", parents=[common], help="GUE sum eigenvalue density")
    gs.add_argument("--n", type=_positive_int, required=True)
    gs.add_argument("--k", type=_positive_int, required=True)
    gs.add_argument("--verify", action="store_true")
    gs.set_defaults(handler=_cmd_gue_sum)

    ws = sub.add_parser("wishart-sum", parents=[common], help="Wishart sum eigenvalue density")
    ws.add_argument("--m", type=_positive_int, required=True)
    ws.add_argument("--n", type=_positive_int, required=True)
    ws.add_argument("--k", type=_positive_int, required=True)
    ws.add_argument("--verify", action="store_true")
    ws.set_defaults(handler=_cmd_wishart_sum)

    se = sub.add_parser("single-eig", parents=[common],
                        help="single-eigenvalue density of a GUE sum")
    se.add_argument("--n", type=_positive_int, required=True)
    se.add_argument("--k", type=_positive_int, default=1)
    se.set_defaults(handler=_cmd_single_eig)

    gtp = sub.add_parser("gt", parents=[common], help="Golden-Thompson statistics")
    gtsub = gtp.add_subparsers(dest="gt_command", required=True)
    r = gtsub.add_parser("ratio", parents=[common])
    r.add_argument("--n", type=_positive_int, required=True)
    e = gtsub.add_parser("empirical", parents=[common])
    e.add_argument("--n", type=_positive_int, required=True)
    s = gtsub.add_parser("scan", parents=[common])
    s.add_argument("--nmax", type=_positive_int, required=True)
    s.add_argument("--fit", type=_fit_window, default=None, metavar="lo:hi")
    gtp.set_defaults(handler=_cmd_gt)
    r.set_defaults(handler=_cmd_gt)
    e.set_defaults(handler=_cmd_gt)
    s.set_defaults(handler=_cmd_gt)

    qj = sub.add_parser("qjsd", parents=[common], help="average QJSD between two orbits")
    qj.add_argument("--mu", type=_orbit_param, required=True)
    qj.add_argument("--nu", type=_orbit_param, required=True)
    qj.add_argument("--verify", action="store_true")
    qj.set_defaults(handler=_cmd_qjsd)

    co = sub.add_parser("coherence", parents=[common],
                        help="average coherence of the orbit mixture")
    co.add_argument("--mu", type=_orbit_param, required=True)
    co.add_argument("--nu", type=_orbit_param, required=True)
    co.add_argument("--verify", action="store_true")
    co.set_defaults(handler=_cmd_coherence)

    su = sub.add_parser("surface", parents=[common], help="mu,nu,value grid export")
    su.add_argument("which", choices=("qjsd", "coherence"))
    su.add_argument("--grid", type=_positive_int, required=True, metavar="steps")
    su.set_defaults(handler=_cmd_surface)

    dv = sub.add_parser("deriv", parents=[common], help="symbolic derivative-principle demo")
    dvsub = dv.add_subparsers(dest="deriv_command", required=True)
    demo = dvsub.add_parser("demo", parents=[common])
    demo.add_argument("--ensemble", choices=("gue", "wishart"), required=True)
    demo.add_argument("--n", type=_positive_int, required=True)
    demo.add_argument("--k", type=_positive_int, required=True)
    demo.set_defaults(handler=_cmd_deriv)
    dv.set_defaults(handler=_cmd_deriv)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.args_string = " ".join(argv)
    out = Output(args)
    try:
        args.handler(args, out)
        text = out.render()
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
