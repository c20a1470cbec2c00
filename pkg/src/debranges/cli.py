"""Command-line interface: JSON in, JSON (or a PASS/FAIL report) out.

Exit codes: 0 ok, 1 bad input, 2 inner symbol, 3 not in the unit ball,
4 non-member, 5 inconclusive membership.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .decomp import decompose
from .errors import BallError, DeBrangesError, InnerFunctionError, MembershipError
from .factor import fejer_riesz
from .hardy import DEFAULT_TRUNC, HardyVector, membership_solve
from .kernel import KernelSpec, boundary_kernels, gram_matrix, kernel_eval, kernel_rational_form
from .mate import classify, corona_infimum, mate_data, mate_modulus_ratio_bounds
from .poly import Polynomial, RationalFunction, TrigPolynomial
from .regression import Tolerances, run_suite

EXIT_OK, EXIT_INPUT, EXIT_INNER, EXIT_BALL, EXIT_NONMEMBER, EXIT_INCONCLUSIVE = range(6)
VERDICT_EXIT = {"non-member": EXIT_NONMEMBER, "inconclusive": EXIT_INCONCLUSIVE}

CONFIG_KEYS = {"trunc": int, "depth": int, "tol_grid": float, "tol_limit": float, "tol_exact": float}


class InputError(Exception):
    pass


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not serializable: {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{n}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise InputError(f"{path}:{n}: unknown key {key!r}")
            out[key] = CONFIG_KEYS[key](val.strip("\"'"))
    return out


def _rational(data) -> RationalFunction:
    if isinstance(data, list):
        return RationalFunction(Polynomial([complex(*c) for c in data]))
    return RationalFunction.from_json(data)


def _q(payload) -> RationalFunction:
    if "q" in payload:
        return _rational(payload["q"])
    if "num" in payload or "coeffs" in payload:
        return _rational(payload)
    raise InputError("input needs a rational function under 'q'")


def _f(data):
    """HardyVector when 'M' is given, otherwise a rational function."""
    if isinstance(data, dict) and "M" in data:
        return HardyVector.from_json(data)
    return _rational(data)


def _r(payload) -> float:
    if "r" not in payload:
        raise InputError("input needs a power 'r'")
    return float(payload["r"])


def cmd_mate(payload, opts):
    q = _q(payload)
    pair, zeros, s = mate_data(q)
    return {"pair": pair.to_json(), "zeros": zeros.to_json(), "residual_factor": s.to_json()}, EXIT_OK


def cmd_factor(payload, opts):
    w = TrigPolynomial.from_json(payload.get("w", payload))
    return {"p": fejer_riesz(w, tol=opts.tol_grid).to_json()}, EXIT_OK


def cmd_classify(payload, opts):
    return {"classification": classify(_q(payload)).value}, EXIT_OK


def cmd_kernels(payload, opts):
    q, r = _q(payload), _r(payload)
    if "lambda" in payload:
        specs = [KernelSpec(r, complex(*payload["lambda"]), int(payload.get("ell", 0)))]
    else:
        specs = boundary_kernels(q, r)
    pts = [complex(*p) for p in payload.get("points", [])]
    out = []
    for spec in specs:
        item = {"spec": spec.to_json()}
        if float(r).is_integer():
            item["closed_form"] = kernel_rational_form(q, spec).value.to_json()
        if pts:
            vals = kernel_eval(q, spec, np.array(pts))
            item["values"] = [[v.real, v.imag] for v in np.atleast_1d(vals)]
        out.append(item)
    return {"kernels": out}, EXIT_OK


def cmd_gram(payload, opts):
    q, r = _q(payload), _r(payload)
    G = gram_matrix(q, r, method=payload.get("method"))
    out = G.to_json()
    out.update(min_eigenvalue=G.min_eigenvalue(), asymmetry=G.asymmetry())
    return out, EXIT_OK


def cmd_membership(payload, opts):
    if "a" in payload:
        a = _rational(payload["a"])
    else:
        a = mate_data(_q(payload))[0].a
    if "f" not in payload:
        raise InputError("input needs 'f'")
    M = int(payload.get("M", opts.trunc))
    res = membership_solve(a, _f(payload["f"]), M)
    return res.to_json(), VERDICT_EXIT.get(res.verdict, EXIT_OK)


def cmd_decompose(payload, opts):
    q, r = _q(payload), _r(payload)
    if "f" not in payload:
        raise InputError("input needs 'f'")
    M = int(payload.get("M", opts.trunc))
    try:
        dec = decompose(q, r, _f(payload["f"]), M)
    except MembershipError as exc:
        return {"verdict": exc.verdict, "message": str(exc)}, VERDICT_EXIT.get(exc.verdict, EXIT_INPUT)
    return dec.to_json(), EXIT_OK


def cmd_corona(payload, opts):
    q = _q(payload)
    a = _rational(payload["a"]) if "a" in payload else mate_data(q)[0].a
    est = corona_infimum(a, q, depth=int(payload.get("depth", opts.depth)))
    return est.to_json(), EXIT_OK


def cmd_ratio_bounds(payload, opts):
    q, r = _q(payload), _r(payload)
    lo, hi = mate_modulus_ratio_bounds(q, r, int(payload.get("grid", 4096)))
    return {"lo": lo, "hi": hi}, EXIT_OK


COMMANDS = {
    "mate": (cmd_mate, "Pythagorean mate and boundary zeros of q"),
    "factor": (cmd_factor, "outer factor p with |p|^2 = w for a trig polynomial w"),
    "classify": (cmd_classify, "NonExtreme / ExtremeInvertible / ExtremeNonInvertible"),
    "kernels": (cmd_kernels, "boundary kernels (closed forms for integer r, values at points)"),
    "gram": (cmd_gram, "Gram matrix of the boundary kernels"),
    "membership": (cmd_membership, "numerical membership verdict for f in H(q)"),
    "decompose": (cmd_decompose, "split f into its zero-product part and kernel part"),
    "corona": (cmd_corona, "estimate inf |a| + |q| over the closed disk"),
    "ratio-bounds": (cmd_ratio_bounds, "min/max of |a_r|/|a| on the circle"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="debranges", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="infile", help="input JSON file (default: stdin)")
    common.add_argument("--out", dest="outfile", help="output file (default: stdout)")
    common.add_argument("--config", help="key=value file (trunc, depth, tol_grid, tol_limit, tol_exact)")
    common.add_argument("--trunc", type=int, help=f"truncation degree M (default {DEFAULT_TRUNC})")
    common.add_argument("--depth", type=int, help="corona refinement rounds (default 8)")
    common.add_argument("--tol-grid", type=float, help="grid tolerance (default 1e-9)")
    common.add_argument("--tol-limit", type=float, help="boundary limit tolerance (default 1e-6)")
    common.add_argument("--tol-exact", type=float, help="closed-form tolerance (default 1e-9)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_)
    v = sub.add_parser("verify", parents=[common], help="run the worked-example regression suite")
    v.add_argument("--filter", help="only run groups whose name contains this string, e.g. example2")
    return parser


def _resolve(opts) -> argparse.Namespace:
    conf = read_config(opts.config) if opts.config else {}
    defaults = {"trunc": DEFAULT_TRUNC, "depth": 8, "tol_grid": 1e-9, "tol_limit": 1e-6, "tol_exact": 1e-9}
    for key, default in defaults.items():
        if getattr(opts, key) is None:
            setattr(opts, key, conf.get(key, default))
    return opts


def _emit(text: str, opts) -> None:
    if opts.outfile:
        with open(opts.outfile, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    try:
        opts = _resolve(opts)
    except (InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if opts.command == "verify":
        tol = Tolerances(exact=opts.tol_exact, grid=opts.tol_grid, limit=opts.tol_limit)
        results = run_suite(tol, opts.filter)
        lines = [f"debranges {__version__} worked-example suite"] + [r.line() for r in results]
        failed = sum(not r.passed for r in results)
        lines.append(f"{len(results) - failed} passed, {failed} failed")
        _emit("\n".join(lines) + "\n", opts)
        return EXIT_OK if failed == 0 and results else EXIT_INPUT

    try:
        raw = open(opts.infile).read() if opts.infile else sys.stdin.read()
        payload = json.loads(raw)
        if not isinstance(payload, (dict, list)):
            raise InputError("top-level JSON must be an object")
        if isinstance(payload, list):
            payload = {"q": payload}
    except (json.JSONDecodeError, InputError, OSError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT

    handler = COMMANDS[opts.command][0]
    try:
        result, code = handler(payload, opts)
    except InnerFunctionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INNER
    except BallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BALL
    except (InputError, DeBrangesError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(dumps(result), opts)
    return code


if __name__ == "__main__":
    sys.exit(main())
