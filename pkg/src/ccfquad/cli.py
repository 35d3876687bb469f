"""Command-line front end.

    ccfquad --mode integrate --f ex41 --alpha -0.6 --beta -0.3 --nu 0 --k 10 --omega 50 --N 6 --s 2
    ccfquad --mode table --f ex41 --alpha -0.6 --beta -0.3 --nu 0 --k 10 --omega 10,20,50 --N 2,4,6 --s 0,1,2
    ccfquad --mode sweep --sweep omega --f ex41 ... --range 50,1000,40
    ccfquad --mode oracle --f ex41 ...

``--k`` also accepts ``omega/2`` (the w = 2k line).  Set OSCI_LOG to a
logging level name (DEBUG, INFO, ...) for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
import time
import warnings

from . import __version__
from .asymcheck import SWEEPS, ScalingSpec, scaled_series, theorem_exponent
from .ccf import MethodConfig, ccf_integrate, convergence_table
from .errors import CCFError
from .expr import BUILTINS, integrand_from_text
from .oracle import OracleConfig, reference_integral
from .params import ProblemParams

log = logging.getLogger("ccfquad")

MODES = ("integrate", "table", "sweep", "oracle")
FORMATS = ("pretty", "csv", "json")

EXIT_USAGE = 2
EXIT_STAGE = 3


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or comma list, got {text!r}") from None


def _ints(text: str) -> list[int]:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _k_arg(text: str):
    if text.replace(" ", "") in ("omega/2", "w/2"):
        return "half"
    return _floats(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ccfquad",
        description="Clenshaw-Curtis-Filon quadrature for int_0^1 f(x) x^a (1-x)^b e^{2ikx} H1_nu(wx) dx",
    )
    ap.add_argument("--mode", choices=MODES, default="integrate")
    ap.add_argument("--f", default="one", help=f"expression in x or builtin ({', '.join(BUILTINS)})")
    ap.add_argument("--alpha", type=float, default=0.0)
    ap.add_argument("--beta", type=float, default=0.0)
    ap.add_argument("--nu", type=float, default=0.0)
    ap.add_argument("--k", type=_k_arg, default=[0.0], help="number, comma list, or omega/2")
    ap.add_argument("--omega", type=_floats, default=[1.0], help="number or comma list")
    ap.add_argument("--N", type=_ints, default=[4], help="integer or comma list (table mode)")
    ap.add_argument("--s", type=_ints, default=[0], help="integer or comma list (table mode)")
    ap.add_argument("--out", default="-", help="output path, '-' for stdout")
    ap.add_argument("--format", choices=FORMATS, default="pretty")
    ap.add_argument("--reference", choices=("auto", "oracle", "ccf"), default="auto",
                    help="table mode: reference integral source")
    ap.add_argument("--sweep", choices=SWEEPS, default="omega")
    ap.add_argument("--quantity", choices=("integral_magnitude", "ccf_error"), default="ccf_error")
    ap.add_argument("--range", type=_floats, default=[50.0, 1000.0, 40.0], help="lo,hi,step")
    ap.add_argument("--exponent", type=float, default=None, help="override the predicted exponent")
    ap.add_argument("--error-json", action="store_true", help="print errors as JSON on stdout")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def _g(v: float) -> str:
    return format(v, ".17g")


def _params_list(args) -> list[ProblemParams]:
    omegas = args.omega
    ks = [w / 2 for w in omegas] if args.k == "half" else args.k
    if len(ks) > 1 and len(omegas) > 1 and args.k != "half":
        raise CCFError("give a list for at most one of --k and --omega", stage="cli")
    if args.k == "half":
        pairs = list(zip(ks, omegas))
    elif len(ks) > 1:
        pairs = [(k, omegas[0]) for k in ks]
    else:
        pairs = [(ks[0], w) for w in omegas]
    return [ProblemParams(args.alpha, args.beta, args.nu, k, w) for k, w in pairs]


def _single(args) -> ProblemParams:
    ps = _params_list(args)
    if len(ps) != 1:
        raise CCFError("this mode needs a single (k, omega) pair", stage="cli")
    return ps[0]


def _config(p: ProblemParams, **extra) -> dict:
    d = {"alpha": p.alpha, "beta": p.beta, "nu": p.nu, "k": p.k, "omega": p.omega}
    d.update(extra)
    return d


def _emit_value(args, out, value: complex, est: float, config: dict, timings: dict):
    if args.format == "json":
        json.dump(
            {
                "value_re": value.real,
                "value_im": value.imag,
                "est_error": est,
                "config": config,
                "timings_ms": {k: v * 1e3 for k, v in timings.items()},
            },
            out,
            indent=2,
            sort_keys=True,
        )
        out.write("\n")
    elif args.format == "csv":
        out.write("value_re,value_im,est_error\n")
        out.write(f"{_g(value.real)},{_g(value.imag)},{_g(est)}\n")
    else:
        sign = "+" if value.imag >= 0 else "-"
        out.write(f"value      = {value.real:.15f} {sign} {abs(value.imag):.15f}i\n")
        out.write(f"est_error  = {est:.2e}\n")
        for k, v in timings.items():
            out.write(f"time[{k}] = {v * 1e3:.3f} ms\n")


def run_integrate(args, out):
    p = _single(args)
    f = integrand_from_text(args.f)
    cfg = MethodConfig(args.N[0], args.s[0])
    t = time.perf_counter()
    r = ccf_integrate(f, p, cfg)
    timings = dict(r.timings, total=time.perf_counter() - t)
    config = _config(p, N=cfg.N, s=cfg.s, f=args.f, mode="integrate",
                     n_moments_forward=r.n_moments_forward, n_moments_bvp=r.n_moments_bvp,
                     n_moments_oracle=r.n_moments_oracle)
    _emit_value(args, out, r.value, r.est_error, config, timings)


def _oracle_value(f, p):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return reference_integral(f, p)


def run_oracle(args, out):
    p = _single(args)
    f = integrand_from_text(args.f)
    t = time.perf_counter()
    value = _oracle_value(f, p)
    _emit_value(args, out, value, 0.0, _config(p, f=args.f, mode="oracle"),
                {"oracle": time.perf_counter() - t})


def _reference(args, f, p):
    mode = args.reference
    if mode == "auto":
        mode = "oracle" if p.k + p.omega <= OracleConfig().cap else "ccf"
    if mode == "oracle":
        return _oracle_value(f, p)
    cfg = MethodConfig(max(args.N) + 12, max(args.s) + 2)
    return ccf_integrate(f, p, cfg).value


def run_table(args, out):
    f = integrand_from_text(args.f)
    ps = _params_list(args)
    if args.k == "half" or len(args.k) == 1 and len(ps) == len(args.omega):
        label = [f"omega={_g(p.omega)}" for p in ps]
    else:
        label = [f"k={_g(p.k)}" for p in ps]
    refs, cols = [], []
    for p in ps:
        ref = _reference(args, f, p)
        refs.append(ref)
        cols.append(convergence_table(f, p, args.N, args.s, ref))
    if args.format == "json":
        rows = [
            {"s": s, "N": N, "errors": [c[i, j] for c in cols]}
            for i, s in enumerate(args.s)
            for j, N in enumerate(args.N)
        ]
        json.dump({"columns": label, "rows": rows,
                   "reference": [[r.real, r.imag] for r in refs],
                   "config": {"alpha": args.alpha, "beta": args.beta, "nu": args.nu, "f": args.f}},
                  out, indent=2, sort_keys=True)
        out.write("\n")
        return
    if args.format == "csv":
        out.write(",".join(["s", "N"] + label) + "\n")
        for i, s in enumerate(args.s):
            for j, N in enumerate(args.N):
                out.write(",".join([str(s), str(N)] + [_g(c[i, j]) for c in cols]) + "\n")
        out.write(",".join(["ref_re", ""] + [_g(r.real) for r in refs]) + "\n")
        out.write(",".join(["ref_im", ""] + [_g(r.imag) for r in refs]) + "\n")
        return
    out.write(f"{'s':>3} {'N':>4} " + " ".join(f"{c:>14}" for c in label) + "\n")
    for i, s in enumerate(args.s):
        for j, N in enumerate(args.N):
            out.write(f"{s:>3} {N:>4} " + " ".join(f"{c[i, j]:>14.2e}" for c in cols) + "\n")
    out.write("reference: " + ", ".join(f"{r.real:.15f}{r.imag:+.15f}i" for r in refs) + "\n")


def run_sweep(args, out):
    if len(args.range) != 3:
        raise CCFError("--range needs lo,hi,step", stage="cli")
    base = ProblemParams(args.alpha, args.beta, args.nu,
                         1.0 if args.k == "half" else args.k[0], args.omega[0])
    s = args.s[0]
    if args.exponent is None:
        expo, logf = theorem_exponent(base, args.sweep, None if args.quantity == "integral_magnitude" else s)
    else:
        expo, logf = args.exponent, False
    spec = ScalingSpec(args.sweep, expo, tuple(args.range), base, logf)
    f = integrand_from_text(args.f) if args.quantity == "ccf_error" else None
    rows = scaled_series(spec, args.quantity, f=f, N=args.N[0], s=s)
    if args.format == "json":
        json.dump({"exponent": expo, "log_factor": logf,
                   "rows": [dict(x=x, raw=r, scaled=sc) for x, r, sc in rows]}, out, indent=2)
        out.write("\n")
        return
    if args.format == "csv":
        out.write("x,raw,scaled\n")
    for x, r, sc in rows:
        if args.format == "csv":
            out.write(f"{_g(x)},{_g(r)},{_g(sc)}\n")
        else:
            out.write(f"{x:10.3f} {r:14.6e} {sc:14.6e}\n")


RUNNERS = {"integrate": run_integrate, "table": run_table, "sweep": run_sweep, "oracle": run_oracle}


def _setup_logging():
    level = os.environ.get("OSCI_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _fail(args, exc, code):
    stage = getattr(exc, "stage", "cli")
    if args is not None and args.error_json:
        json.dump({"error": type(exc).__name__, "stage": stage, "message": str(exc)}, sys.stdout)
        sys.stdout.write("\n")
    else:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    _setup_logging()
    ap = build_parser()
    args = ap.parse_args(argv)
    buf = io.StringIO()
    try:
        RUNNERS[args.mode](args, buf)
    except CCFError as exc:
        code = EXIT_USAGE if exc.stage in ("parse", "cli", "params") else EXIT_STAGE
        return _fail(args, exc, code)
    if args.out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
