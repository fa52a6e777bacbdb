"""Command-line front end.

Exit codes: 0 success, 2 a checked identity exceeded its tolerance (or a
golden file differs), 1 usage or parameter-domain error.

Parameters are resolved as flags > config file > defaults.  The config file
is JSON; its path comes from ``--config`` or the ``EIGHTVERTEX_CONFIG``
environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import checks, qkz, rmatrix, twistor
from .errors import EightVertexError
from .twistor import EllipticPoint, ModelParams

CONFIG_ENV = "EIGHTVERTEX_CONFIG"
PARAM_FLAGS = ("q", "eps", "u", "k", "g", "order_x", "order_eps", "tol")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    q: complex = 0.5
    eps: complex = 0.2
    u: complex = 0.5
    k: complex = 0.0
    g: int = 2
    order_x: int = 32
    order_eps: int = 4
    tol: float = 1e-8
    seed: int = 0
    output: str = None
    format: str = "json"
    golden: str = None

    def params(self) -> ModelParams:
        return ModelParams(self.q, self.eps, self.u, self.k, self.g, self.order_x, self.order_eps, self.tol)


def _complex(text):
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _coerce(name, value):
    if name in ("q", "eps", "u", "k"):
        if isinstance(value, (list, tuple)):
            return complex(value[0], value[1])
        return _complex(value)
    if name in ("g", "order_x", "order_eps", "seed"):
        return int(value)
    if name == "tol":
        return float(value)
    return value


def resolve_config(args) -> RunConfig:
    values = {}
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(RunConfig)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        values.update({k: _coerce(k, v) for k, v in data.items()})
    for name in (*PARAM_FLAGS, "seed", "output", "format", "golden"):
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    cfg = RunConfig(**values)
    try:
        cfg.params()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if cfg.format not in ("json", "csv"):
        raise UsageError(f"unknown format {cfg.format!r}")
    return cfg


# ------------------------------------------------------------------ output


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def render(payload: dict, rows: list, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return buf.getvalue()
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def _numbers_close(a, b, tol=1e-10):
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_numbers_close(a[k], b[k], tol) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_numbers_close(x, y, tol) for x, y in zip(a, b))
    if isinstance(a, (int, float)) and isinstance(b, (int, float)) and not isinstance(a, bool):
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
    return a == b


def compare_golden(text: str, path: str) -> bool:
    with open(path) as fh:
        return _numbers_close(json.loads(text), json.load(fh))


def _residual_rows(residuals):
    return [r.to_dict() for r in residuals]


# ---------------------------------------------------------------- commands


def cmd_rmat(cfg: RunConfig, args):
    R = rmatrix.R_series(cfg.q, cfg.order_x, normalized=not args.raw)
    payload = {"q": cfg.q, "order": cfg.order_x, "normalized": not args.raw, "R": R.to_json()}
    rows = [
        {"n": n, "row": i, "col": j, "re": float(R.data[i, j, n].real), "im": float(R.data[i, j, n].imag)}
        for n in range(R.order + 1)
        for i in range(4)
        for j in range(4)
        if R.data[i, j, n] != 0
    ]
    return payload, rows, []


def cmd_ybe_check(cfg: RunConfig, args):
    res = []
    for x23 in args.ratios:
        val = rmatrix.verify_ybe(cfg.q, (args.x12, args.x12 * x23, x23), cfg.order_x)
        res.append(checks.Residual(f"Yang-Baxter equation, x23={x23}", val, cfg.tol))
    return {"q": cfg.q, "residuals": _residual_rows(res)}, _residual_rows(res), res


def cmd_twistor(cfg: RunConfig, args):
    params = cfg.params()
    factors = []
    res = []
    for m in range(1, args.factors + 1):
        rec = twistor.solve_twistor_recursion(params, m, cfg.order_eps, args.z1, args.z2)
        cf = twistor.closed_form_factor(params, m, cfg.order_eps, args.z1, args.z2)
        diff = float(np.max(np.abs(rec.matrix.data - cf.matrix.data)))
        res.append(checks.Residual(f"factor F^{m}: recursion = closed form", diff, cfg.tol))
        factors.append({"m": m, "parity": rec.parity, "cartan_Q": list(rec.cartan_Q), "matrix": rec.matrix.to_json()})
    prod = twistor.assemble_product(params, args.z1, args.z2)
    res.append(checks.Residual("ordered product = closed product", prod.residual, cfg.tol))
    res.append(checks.Residual("sqrt(x) branch independence", prod.half_integer_residual, cfg.tol))
    payload = {
        "params": asdict(params),
        "point": [args.z1, args.z2],
        "factors": factors,
        "product": {
            "cutoff_M": prod.cutoff_M,
            "assembled": prod.assembled,
            "closed": prod.closed,
            "global_normalizer": prod.global_normalizer,
            "global_normalizer_odd": prod.global_normalizer_odd,
            "basis_change": np.diag(prod.basis_change),
        },
        "residuals": _residual_rows(res),
    }
    return payload, _residual_rows(res), res


def cmd_elliptic(cfg: RunConfig, args):
    params = cfg.params().replace(k=0)
    if args.points:
        rng = np.random.default_rng(cfg.seed)
        pts = [
            EllipticPoint(
                complex(rng.uniform(0.05, 0.35)),
                complex(0, rng.uniform(0.02, 0.08)),
                complex(cfg.eps) * np.exp(1j * rng.uniform(-0.3, 0.3)),
            )
            for _ in range(args.points)
        ]
    else:
        pts = [EllipticPoint.from_params(params)]
    rep = twistor.compare_elliptic(params, pts, tol=np.inf)
    res = [
        checks.Residual("theta ratio line", rep.deviation, cfg.tol),
        checks.Residual("sn/cn/dn ratio line", rep.jacobi_deviation, cfg.tol),
        checks.Residual("overall scalar", rep.scalar_deviation, cfg.tol),
    ]
    payload = rep.to_dict()
    payload["candidates"] = dict(sorted(rep.table.items(), key=lambda t: (t[1], t[0]))[:6])
    payload["residuals"] = _residual_rows(res)
    return payload, _residual_rows(res), res


def _weights(args):
    return qkz.WeightConfig(m_source=args.m_source, m_sink=args.m_sink)


def cmd_qkz(cfg: RunConfig, args):
    params = cfg.params()
    weights = _weights(args)
    res = []
    if args.qkz_command == "solve2":
        system = qkz.build_two_point_system(params, weights, args.flavor)
        for name, val in system.consistency_residuals().items():
            res.append(checks.Residual(f"two-point consistency {name}", val, cfg.tol))
        branches = qkz.solve_two_point(system, cfg.order_x)
        for b in branches:
            for key, val in sorted(b.residuals.items()):
                res.append(checks.Residual(f"branch weight {b.weight:g}, {key} shift", val, cfg.tol))
        payload = {"description": system.description, "branches": [b.to_dict() for b in branches]}
    elif args.qkz_command == "check3":
        for name, val in qkz.check_three_point(params, weights).items():
            res.append(checks.Residual(f"three-point {name}", val, cfg.tol))
        payload = {}
    else:
        system = qkz.build_two_point_system(params, weights, "g")
        rows = []
        for b in qkz.solve_two_point(system, cfg.order_x):
            tw = qkz.twist_two_point(params, system, b, args.mode)
            r = qkz.covariance_residuals(tw, args.z1, args.z2)
            rows.append({"weight": b.weight, "s": b.s, **r})
            res.append(checks.Residual(f"twisted equation, weight {b.weight:g}", r["correct"], cfg.tol))
            if complex(cfg.eps) != 0:
                res.append(checks.Residual(f"naive twisted equation fails, weight {b.weight:g}", r["naive"], 1e-3, True))
        payload = {"mode": args.mode, "branches": rows}
    payload["residuals"] = _residual_rows(res)
    return payload, _residual_rows(res), res


def cmd_kz(cfg: RunConfig, args):
    rng = np.random.default_rng(cfg.seed)
    res = []
    for pol in args.polarization:
        system = qkz.classical_kz_system(_weights(args), level=cfg.k, g=cfg.g, polarization=pol)
        flat = 0.0
        for _ in range(args.grid):
            z1 = complex(rng.uniform(0.5, 2) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
            z2 = complex(rng.uniform(0.1, 0.4) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
            flat = max(flat, qkz.flatness_residual(system, z1, z2))
        res.append(checks.Residual(f"{pol} connection flatness", flat, min(cfg.tol, 1e-12)))
    return {"residuals": _residual_rows(res)}, _residual_rows(res), res


def cmd_verify_all(cfg: RunConfig, args):
    crits = checks.run_all()
    res = [r for c in crits for r in c.residuals]
    rows = [{"criterion": c.number, "title": c.title, **r.to_dict()} for c in crits for r in c.residuals]
    table = [{"criterion": c.number, "title": c.title, "passed": c.passed} for c in crits]
    return {"summary": table, "criteria": [c.to_dict() for c in crits]}, rows, res


# ------------------------------------------------------------------ parser


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    common.add_argument("--q", type=_complex)
    common.add_argument("--eps", type=_complex)
    common.add_argument("--u", type=_complex)
    common.add_argument("--k", type=_complex)
    common.add_argument("--g", type=int)
    common.add_argument("--order-x", dest="order_x", type=int)
    common.add_argument("--order", dest="order_x", type=int, help="alias for --order-x")
    common.add_argument("--order-eps", dest="order_eps", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--output", "-o")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--golden", help="compare the JSON output with this file")

    p = _Parser(prog="eightvertex", description="Trigonometric and elliptic R-matrices of affine sl(2), twistors and q-KZ systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("rmat", parents=[common], help="standard R-matrix series")
    s.add_argument("--raw", action="store_true", help="omit the scalar normalizer")
    s.set_defaults(func=cmd_rmat)

    s = sub.add_parser("ybe-check", parents=[common], help="Yang-Baxter residuals")
    s.add_argument("--x12", type=_complex, default=0.7)
    s.add_argument("--ratios", type=_complex, nargs="+", default=[0.3, 0.5 + 0.2j, 0.8])
    s.set_defaults(func=cmd_ybe_check)

    s = sub.add_parser("twistor", parents=[common], help="twistor factors and product")
    s.add_argument("--factors", type=int, default=3)
    s.add_argument("--z1", type=_complex, default=0.3)
    s.add_argument("--z2", type=_complex, default=1.0)
    s.set_defaults(func=cmd_twistor)

    s = sub.add_parser("elliptic-compare", parents=[common], help="twisted R versus theta functions")
    s.add_argument("--points", type=int, default=0, help="random points instead of the configured one")
    s.set_defaults(func=cmd_elliptic)

    s = sub.add_parser("qkz", help="q-KZ systems")
    qsub = s.add_subparsers(dest="qkz_command", required=True, parser_class=_Parser)
    for name, hlp in (("solve2", "two-point series solutions"), ("check3", "three-point closure"), ("twist2", "twisted two-point function")):
        t = qsub.add_parser(name, parents=[common], help=hlp)
        t.add_argument("--m-source", type=float, default=0.5)
        t.add_argument("--m-sink", type=float, default=0.25)
        if name == "solve2":
            t.add_argument("--flavor", choices=("f", "g"), default="f")
        if name == "twist2":
            t.add_argument("--mode", choices=("hopf", "quasi"), default="hopf")
            t.add_argument("--z1", type=float, default=1.0)
            t.add_argument("--z2", type=float, default=0.05)
        t.set_defaults(func=cmd_qkz)

    s = sub.add_parser("kz", help="classical KZ systems")
    ksub = s.add_subparsers(dest="kz_command", required=True, parser_class=_Parser)
    t = ksub.add_parser("flat", parents=[common], help="flatness of the KZ connection")
    t.add_argument("--polarization", nargs="+", choices=("pole", "euler"), default=["pole", "euler"])
    t.add_argument("--grid", type=int, default=9)
    t.add_argument("--m-source", type=float, default=0.5)
    t.add_argument("--m-sink", type=float, default=0.25)
    t.set_defaults(func=cmd_kz)

    s = sub.add_parser("verify-all", parents=[common], help="full acceptance suite")
    s.set_defaults(func=cmd_verify_all)
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        payload, rows, residuals = args.func(cfg, args)
    except UsageError as exc:
        print(f"eightvertex: {exc}", file=sys.stderr)
        return 1
    except (EightVertexError, ValueError) as exc:
        print(f"eightvertex: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = render(payload, rows, cfg.format)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    failed = [r for r in residuals if not r.passed]
    for r in failed:
        rel = ">" if r.expect_above else "<"
        print(f"FAIL {r.identity}: {r.value:.3e} (needs {rel} {r.tol:g})", file=sys.stderr)
    if cfg.golden and cfg.format == "json" and not compare_golden(text, cfg.golden):
        print(f"FAIL output differs from golden file {cfg.golden}", file=sys.stderr)
        return 2
    return 2 if failed else 0


def main():
    sys.exit(run())
