"""``besselpos`` command line.

Exit status: 0 for success, positive or member; 1 for refuted or
non-member; 2 for usage or numerical errors.
"""
from __future__ import annotations

import argparse
import io
import json
import sys

from . import io as bio
from .exceptions import BesselPosError, NotPositiveDefiniteError
from .integrals import (
    SCAN_DEFAULTS,
    KernelKind,
    VerdictKind,
    alpha_star,
    bessel_second_zero,
    closed_form_result,
    integral_direct,
    kernel_value,
    scan_positivity,
)
from .rbf import (
    PointSet,
    RbfSpec,
    certify_spec,
    cholesky_pivots,
    fit_interpolant,
    gram,
    w_hat_result,
    w_value,
)
from .regions import (
    IntegralParams,
    RegionId,
    corollary1_contains,
    fuzzy_contains,
    integral_region_contains,
    newton_contains,
    onef2_necessity,
    rbf_region_contains,
    thm3_classify,
)
from .sos import CoeffMethod, OmegaMethod, OmegaParams, coeff_C, omega_value

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2
_AGREE_RTOL = 1e-9
_FLAG_NAMES = {"lam": "lambda"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ("--" + _FLAG_NAMES.get(m, m).replace("_", "-") for m in missing)
        raise _UsageError("missing required option(s): " + ", ".join(flags))


# ---------------------------------------------------------------- handlers

def _region_check(args):
    region = RegionId(args.region)
    out = {"region": region.value}
    if region.is_integral_region:
        _need(args, "beta", "alpha")
        if region.needs_lambda:
            _need(args, "lam")
        member = integral_region_contains(region, args.beta, args.alpha, args.lam)
        out["classification"] = fuzzy_contains(
            integral_region_contains, region, args.beta, args.alpha, args.lam, slack=args.slack
        )
    elif region.is_rbf_region:
        _need(args, "n", "lam", "alpha")
        if region.needs_rho:
            _need(args, "rho")
        member = rbf_region_contains(region, args.n, args.lam, args.alpha, args.rho)
        out["classification"] = fuzzy_contains(
            rbf_region_contains, region, args.n, args.lam, args.alpha, args.rho, slack=args.slack
        )
    elif region is RegionId.COROLLARY1:
        _need(args, "a", "c")
        member = corollary1_contains(args.a, args.c)
    elif region is RegionId.THM3:
        _need(args, "a", "b", "c")
        cls = thm3_classify(args.a, args.b, args.c)
        out["class"] = cls.value
        member = cls.positive
    else:
        _need(args, "a", "b", "c")
        pred = newton_contains if region is RegionId.NEWTON else onef2_necessity
        member = pred(args.a, args.b, args.c)
        out["classification"] = fuzzy_contains(pred, args.a, args.b, args.c, slack=args.slack)
    out["verdict"] = "member" if member else "non-member"
    return out, EXIT_OK if member else EXIT_NO


def _integral_params(args):
    _need(args, "mu", "lam", "alpha", "beta")
    return IntegralParams(args.mu, args.lam, args.alpha, args.beta)


def _integral(args):
    p = _integral_params(args)
    rows = []
    for x in args.x:
        row = {"x": x}
        if args.method in ("direct", "both"):
            q = integral_direct(p, x, args.tol)
            row.update(direct=q.value, direct_err=q.abs_err_est, subdivisions=q.subdivisions)
        if args.method in ("closed", "both"):
            c = closed_form_result(p, x)
            if c is None:
                if args.method == "closed":
                    raise _UsageError("no closed form for these parameters; use --method direct")
            else:
                row.update(closed=c.value, closed_err=c.abs_err_est)
        rows.append(row)
    return {"verdict": "computed", "results": rows}, EXIT_OK


def _kernel(args):
    values = [kernel_value(args.kind, args.alpha, args.beta, x, args.lam) for x in args.x]
    return {"verdict": "computed", "kind": args.kind,
            "results": [{"x": x, "value": v} for x, v in zip(args.x, values)]}, EXIT_OK


def _scan(args):
    p = _integral_params(args)
    v = scan_positivity(p, args.xmax, args.step, args.tol, certify=not args.no_certify, n_jobs=args.threads)
    out = {"verdict": v.kind.value, "scan": v.to_dict(),
           "defaults": dict(SCAN_DEFAULTS)}
    if v.region is not None:
        out["region"] = v.region.value
    if v.is_refuted:
        out["witness"] = {"x": v.x, "value": v.value, "err": v.err}
    return out, EXIT_NO if v.kind is VerdictKind.REFUTED else EXIT_OK


def _alpha_star(args):
    value = alpha_star(args.beta, args.tol)
    return {"verdict": "computed", "alpha_star": value,
            "second_zero": bessel_second_zero(args.beta)}, EXIT_OK


def _omega(args):
    p = OmegaParams(args.a, args.b, args.c)
    methods = list(OmegaMethod) if args.method == "all" else [OmegaMethod(args.method)]
    rows = []
    for x in args.x:
        row = {"x": x}
        for m in methods:
            r = omega_value(p, x, m, n_terms=args.terms)
            row[m.value] = r.value
            row[m.value + "_err"] = r.abs_err_est
        rows.append(row)
    out = {"verdict": "computed", "thm3_class": thm3_classify(args.a, args.b, args.c).value, "results": rows}
    if len(methods) > 1:
        spread = max(abs(row[a.value] - row[b.value]) for row in rows for a in methods for b in methods)
        out["max_route_difference"] = spread
    return out, EXIT_OK


def _coeff_c(args):
    p = OmegaParams(args.a, args.b, args.c)
    methods = list(CoeffMethod) if args.method == "all" else [CoeffMethod(args.method)]
    ns = range(args.n + 1) if args.upto else [args.n]
    rows, agree = [], True
    for n in ns:
        row = {"n": n}
        vals = []
        for m in methods:
            v = coeff_C(n, p, m, exact=args.exact)
            vals.append(float(v))
            row[m.value] = str(v) if args.exact else v
        if len(vals) > 1:
            ref = max(abs(v) for v in vals)
            diff = max(vals) - min(vals)
            row["agree"] = diff <= _AGREE_RTOL * ref
            agree = agree and row["agree"]
        rows.append(row)
    verdict = "computed" if len(methods) == 1 else ("agree" if agree else "disagree")
    return {"verdict": verdict, "results": rows}, EXIT_OK if agree else EXIT_NO


def _spec(args):
    _need(args, "n", "delta", "rho", "lam", "alpha")
    return RbfSpec(args.n, args.delta, args.rho, args.lam, args.alpha)


def _region_info(spec):
    region = certify_spec(spec)
    return {"region": region.value if region else None, "certified": region is not None}


def _rbf_eval(args):
    spec = _spec(args)
    rows = [{"r": r, "value": w_value(spec, r)} for r in args.r]
    return {"verdict": "computed", "results": rows, **_region_info(spec)}, EXIT_OK


def _rbf_ft(args):
    spec = _spec(args)
    rows, refuted = [], False
    for s in args.s:
        r = w_hat_result(spec, s)
        rows.append({"s": s, "value": r.value, "err": r.abs_err_est})
        refuted = refuted or r.value + r.abs_err_est < 0
    return ({"verdict": "refuted" if refuted else "nonnegative", "results": rows, **_region_info(spec)},
            EXIT_NO if refuted else EXIT_OK)


def _load_points(args, spec):
    _need(args, "points")
    return PointSet(bio.read_points_csv(args.points, spec.n))


def _gram_check(args):
    spec = _spec(args)
    pts = _load_points(args, spec)
    G = gram(spec, pts, n_jobs=args.threads)
    L, pivot, index = cholesky_pivots(G, args.pivot_tol)
    if args.out:
        bio.write_matrix_csv(G, args.out)
    out = {"verdict": "positive-definite" if L is not None else "not-positive-definite",
           "size": len(pts), "min_pivot": pivot, "pivot_index": index, "pivot_tol": args.pivot_tol,
           **_region_info(spec)}
    return out, EXIT_OK if L is not None else EXIT_NO


def _fit(args):
    spec = _spec(args)
    pts = _load_points(args, spec)
    _need(args, "values")
    values = bio.read_matrix_csv(args.values).ravel()
    coef = fit_interpolant(spec, pts, values, tol=args.pivot_tol, n_jobs=args.threads)
    if args.out:
        bio.write_matrix_csv(coef, args.out, header=["coefficient"])
    return {"verdict": "fitted", "coefficients": coef.tolist(), **_region_info(spec)}, EXIT_OK


# ------------------------------------------------------------------ parser

def _add_integral_flags(p):
    p.add_argument("--mu", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)


def _add_spec_flags(p):
    p.add_argument("--n", type=int, help="ambient dimension")
    p.add_argument("--delta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--alpha", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="besselpos", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("human", "json", "csv"), default="human")
    parser.add_argument("--replay", metavar="JSON", help="re-run the command stored in a saved json output")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: BESSELPOS_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("region-check", help="membership in a named positivity region")
    p.add_argument("--region", required=True, choices=[r.value for r in RegionId])
    p.add_argument("--beta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--slack", type=float, default=1e-12, help="half-width for boundary detection")
    p.set_defaults(handler=_region_check)

    p = sub.add_parser("integral", help="the Bessel moment at one or more x")
    _add_integral_flags(p)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.add_argument("--method", choices=("direct", "closed", "both"), default="direct")
    p.add_argument("--tol", type=float, default=SCAN_DEFAULTS["tol"])
    p.set_defaults(handler=_integral)

    p = sub.add_parser("kernel", help="hypergeometric kernel Phi, Psi or K")
    p.add_argument("--kind", choices=[k.value for k in KernelKind], required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.set_defaults(handler=_kernel)

    p = sub.add_parser("scan", help="certify or refute positivity on a grid")
    _add_integral_flags(p)
    p.add_argument("--xmax", type=float, default=SCAN_DEFAULTS["x_max"])
    p.add_argument("--step", type=float, default=SCAN_DEFAULTS["step"])
    p.add_argument("--tol", type=float, default=SCAN_DEFAULTS["tol"])
    p.add_argument("--no-certify", action="store_true", help="skip region theorems and always scan")
    p.set_defaults(handler=_scan)

    p = sub.add_parser("alpha-star", help="root alpha of the moment up to the second Bessel zero")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(handler=_alpha_star)

    p = sub.add_parser("omega", help="the 2F3 family by series, integral or sums of squares")
    for name in ("a", "b", "c"):
        p.add_argument("--" + name, type=float, required=True)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.add_argument("--method", choices=[m.value for m in OmegaMethod] + ["all"], default="series")
    p.add_argument("--terms", type=int, default=60)
    p.set_defaults(handler=_omega)

    p = sub.add_parser("coeff-c", help="sums-of-squares coefficient C(n, nu)")
    for name in ("a", "b", "c"):
        p.add_argument("--" + name, type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--upto", action="store_true", help="all n' = 0..n")
    p.add_argument("--method", choices=[m.value for m in CoeffMethod] + ["all"], default="direct")
    p.add_argument("--exact", action="store_true", help="print exact rationals")
    p.set_defaults(handler=_coeff_c)

    p = sub.add_parser("rbf-eval", help="kernel value W(r)")
    _add_spec_flags(p)
    p.add_argument("--r", type=float, nargs="+", required=True)
    p.set_defaults(handler=_rbf_eval)

    p = sub.add_parser("rbf-ft", help="radial Fourier transform of W")
    _add_spec_flags(p)
    p.add_argument("--s", type=float, nargs="+", required=True)
    p.set_defaults(handler=_rbf_ft)

    for name, handler, helptext in (("gram-check", _gram_check, "Cholesky test of a Gram matrix"),
                                    ("fit", _fit, "interpolation coefficients")):
        p = sub.add_parser(name, help=helptext)
        _add_spec_flags(p)
        p.add_argument("--points", help="CSV, one point per row")
        p.add_argument("--pivot-tol", type=float, default=1e-13)
        p.add_argument("--out", help="write the Gram matrix or coefficients as CSV")
        if name == "fit":
            p.add_argument("--values", help="CSV with one value per point")
        p.set_defaults(handler=handler)
    return parser


# ------------------------------------------------------------------ output

def _flatten(d, prefix=""):
    flat = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            continue
        else:
            flat[key] = v
    return flat


def _cell(v):
    if isinstance(v, float):
        return bio.format_float(v)
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    return "" if v is None else str(v)


def render(result: dict, fmt: str) -> str:
    if fmt == "json":
        return bio.dumps(result)
    if fmt == "csv":
        buf = io.StringIO()
        rows = result.get("results")
        if rows:
            keys = list(dict.fromkeys(k for r in rows for k in r))
            buf.write(",".join(keys) + "\n")
            for r in rows:
                buf.write(",".join(_cell(r.get(k)) for k in keys) + "\n")
        else:
            flat = _flatten({k: v for k, v in result.items() if k not in ("argv", "parameters")})
            buf.write(",".join(flat) + "\n")
            buf.write(",".join(_cell(v) for v in flat.values()) + "\n")
        return buf.getvalue().rstrip("\n")
    lines = []
    for k, v in result.items():
        if k in ("argv", "parameters", "exit_code"):
            continue
        if isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{k}:")
            lines.extend("  " + ", ".join(f"{a}={_cell(b)}" for a, b in r.items()) for r in v)
        elif isinstance(v, dict):
            lines.append(f"{k}: " + ", ".join(f"{a}={_cell(b)}" for a, b in v.items()))
        else:
            lines.append(f"{k}: {_cell(v)}")
    return "\n".join(lines)


def run(argv=None):
    """Parse ``argv``, execute, and return ``(result_dict, exit_code)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.replay:
        with open(args.replay) as fh:
            saved = json.load(fh)
        stored = saved.get("argv")
        if not isinstance(stored, list):
            raise _UsageError(f"{args.replay} has no stored argv")
        result, code = run(stored)
        result["replayed_from"] = args.replay
        result["replay_matches"] = result.get("verdict") == saved.get("verdict")
        return result, code
    if args.command is None:
        raise _UsageError("a subcommand is required")
    params = {k: v for k, v in vars(args).items() if k not in ("handler", "replay", "format")}
    result, code = args.handler(args)
    # strip global flags so a replay re-runs the same computation in any format
    clean = _strip_globals(argv)
    return {"command": args.command, "argv": clean, "parameters": params, **result, "exit_code": code}, code


def _strip_globals(argv):
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--format", "--replay"):
            skip = True
            continue
        if tok.startswith("--format=") or tok.startswith("--replay="):
            continue
        out.append(tok)
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = _peek_format(argv)
    try:
        result, code = run(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    except NotPositiveDefiniteError as exc:
        return _fail(fmt, exc, {"min_pivot": exc.pivot, "pivot_index": exc.index})
    except (BesselPosError, ValueError, OSError, ArithmeticError) as exc:
        return _fail(fmt, exc)
    print(render(result, fmt))
    return code


def _peek_format(argv):
    for i, tok in enumerate(argv):
        if tok == "--format" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--format="):
            return tok.split("=", 1)[1]
    return "human"


def _fail(fmt, exc, extra=None):
    payload = {"verdict": "error", "error": f"{type(exc).__name__}: {exc}", **(extra or {})}
    if fmt == "json":
        print(bio.dumps(payload))
    print(f"error: {payload['error']}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
