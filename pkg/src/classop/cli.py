"""Command-line front end.

Every command reads a JSON document (a path, ``-`` for stdin, or inline JSON)
and writes JSON to stdout or ``--out``.  Exit codes: 0 success, 2 domain error
(payload ``{"error": {code, index, which, detail}}``), 1 input or I/O error.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import os
import sys

from . import errors
from .alternating import build_alternating_ops
from .families import (AWParams, CBIParams, FamilySpec, askey_wilson_table, askey_wilson_truncation,
                       cbi_base_and_interlaced, dual_m1_hahn_even, jacobi_shifted, laguerre)
from .maps import (MapModel, alternating_model, classify_samples, continuous_model, qexp_model,
                   quadratic_model)
from .nu import NUOperator, eigen_check, formal_symmetry_residual
from .functionals import moments_from_recurrence
from .operators import make_operators
from .poly import Poly, Tolerance, scalar_from_json, scalar_to_json
from .regularity import (ClassicalData, RecurrenceTable, christoffel_quadrature, classical_table,
                         generate_ops, q_to_1_degeneration)

DEFAULT_AW = {"a": [0.3, 0.1], "b": -0.4, "c": [0, 0.25], "d": 0.6, "A": 1.3, "B": [0.8, 0.2], "C": 0.5}
DEFAULT_CBI = {"alpha": 0.3, "beta": 0.7, "gamma": 0.2, "delta": 0.45}


class InputError(Exception):
    pass


# input helpers ------------------------------------------------------------

def _load(src: str | None):
    if src is None:
        return {}
    text = sys.stdin.read() if src == "-" else None
    if text is None:
        stripped = src.lstrip()
        if stripped.startswith("{") or stripped.startswith("["):
            text = src
        else:
            with open(src, encoding="utf-8") as fh:
                text = fh.read()
    return json.loads(text)


def _scalar(v, default=None) -> complex:
    if v is None:
        if default is None:
            raise InputError("missing scalar")
        return complex(default)
    return scalar_from_json(v)


def _poly(v) -> Poly:
    if isinstance(v, dict):
        v = v["coeffs"]
    return Poly([scalar_from_json(c) for c in v])


def _model(obj: dict, tol: Tolerance) -> MapModel:
    if "progressions" in obj:
        return MapModel.from_json(obj)
    regime = obj.get("regime")
    h = _scalar(obj.get("h"), 1)
    if regime == "quadratic":
        return quadratic_model(_scalar(obj.get("a")), _scalar(obj.get("b"), 0), _scalar(obj.get("c"), 0),
                               h=h, tol=tol)
    if regime == "qexponential":
        qh = obj.get("q_half")
        return qexp_model(_scalar(obj.get("q")), _scalar(obj.get("a")), _scalar(obj.get("b")),
                          _scalar(obj.get("c"), 0), h=h, q_half=None if qh is None else _scalar(qh),
                          tol=tol)
    if regime == "alternating":
        return alternating_model(_scalar(obj.get("a")), _scalar(obj.get("b"), 0), h=h, tol=tol)
    if regime == "continuous":
        return continuous_model()
    raise InputError(f"unknown regime {regime!r}")


def _classical(doc: dict, tol: Tolerance) -> ClassicalData:
    try:
        return ClassicalData(_poly(doc["phi"]), _poly(doc["psi"]), _model(doc["model"], tol))
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from exc


def _size(doc: dict, args) -> dict:
    N = args.N if getattr(args, "N", None) is not None else doc.get("N")
    count = args.count if getattr(args, "count", None) is not None else doc.get("count")
    if N is None and count is None:
        count = 8
    return {"N": N} if N is not None else {"count": count}


def _js(seq) -> list:
    return [scalar_to_json(z) for z in seq]


def _table_csv(table: RecurrenceTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "B_re", "B_im", "C_re", "C_im", "h_re", "h_im"])
    rows = max(len(table.B), len(table.C), len(table.h))
    get = lambda seq, n: (repr(seq[n].real), repr(seq[n].imag)) if n < len(seq) else ("", "")
    for n in range(rows):
        w.writerow([n, *get(table.B, n), *get(table.C, n), *get(table.h, n)])
    return buf.getvalue()


# commands -----------------------------------------------------------------

def cmd_classify(args, tol):
    doc = _load(args.input)
    samples = doc if isinstance(doc, list) else doc["samples"]
    h = _scalar(doc.get("h"), 1) if isinstance(doc, dict) else 1
    m = classify_samples([_scalar(v) for v in samples], h=h, tol=tol)
    out = {"regime": m.regime.value, "A": scalar_to_json(m.A), "B": scalar_to_json(m.B)}
    if m.q is not None:
        out["q"] = scalar_to_json(m.q)
    out["model"] = m.to_json()
    return out, None


def cmd_regularity(args, tol):
    doc = _load(args.input)
    cd = _classical(doc, tol)
    table = classical_table(cd, h0=_scalar(doc.get("h0"), 1), tol=tol, **_size(doc, args))
    return {"regular": True, **table.to_json()}, table


def cmd_ops(args, tol):
    doc = _load(args.input)
    cd = _classical(doc, tol)
    table = classical_table(cd, h0=_scalar(doc.get("h0"), 1), tol=tol, **_size(doc, args))
    count = table.ops_count()
    ops = generate_ops(table, count)
    L = NUOperator(cd.phi, cd.psi, make_operators(cd.model))
    lam = [lam for lam, _ in eigen_check(L, table, count)]
    out = {"model": cd.model.to_json(), "phi": _js(cd.phi.coeffs), "psi": _js(cd.psi.coeffs),
           "table": table.to_json(), "ops": [_js(p.coeffs) for p in ops], "lambda": _js(lam)}
    return out, table


def cmd_quadrature(args, tol):
    doc = _load(args.input)
    N = args.N if args.N is not None else doc.get("N")
    if N is None:
        raise InputError("quadrature needs N")
    if "table" in doc:
        table = RecurrenceTable.from_json(doc["table"])
    else:
        table = classical_table(_classical(doc, tol), count=N + 1, tol=tol)
    rule = christoffel_quadrature(table, N, tol)
    return {"N": N, **rule.to_json()}, None


def _base_R(doc: dict, N: int, tol: Tolerance) -> list[Poly]:
    if "R" in doc:
        return [_poly(p) for p in doc["R"]]
    fam = doc.get("family")
    p = doc.get("params", {})
    if fam == "laguerre":
        return laguerre(_scalar(p.get("alpha"), -0.5), N + 1, tol)
    if fam == "jacobi_shifted":
        return jacobi_shifted(_scalar(p.get("alpha")), _scalar(p.get("beta")), N + 1, tol)
    raise InputError("alternating-build needs explicit R or family laguerre / jacobi_shifted")


def cmd_alternating(args, tol):
    doc = _load(args.input)
    N = args.N if args.N is not None else doc.get("N", 4)
    R = _base_R(doc, N, tol)
    tau = _scalar(args.tau if args.tau is not None else doc.get("tau"))
    build = build_alternating_ops(R, tau, terminal=bool(doc.get("terminal", False)), tol=tol)
    return build.to_json(), None


def cmd_nu(args, tol):
    doc = _load(args.input)
    cd = _classical(doc, tol)
    table = RecurrenceTable.from_json(doc["table"])
    count = args.count if args.count is not None else doc.get("count", table.ops_count())
    ops = make_operators(cd.model)
    L = NUOperator(cd.phi, cd.psi, ops)
    checks = eigen_check(L, table, count)
    u = moments_from_recurrence(table, table.h[0])
    up_to = min(count, u.max_degree // 2)
    sym, scale = formal_symmetry_residual(L, u, up_to, with_scale=True)
    return {"lambda": _js(l for l, _ in checks), "residuals": [r for _, r in checks],
            "symmetry_residual": sym, "symmetry_scale": scale}, None


def _q_root(nu: int, doc_q) -> complex:
    return _scalar(doc_q) if doc_q is not None else cmath.exp(2j * cmath.pi / nu)


def cmd_family(args, tol):
    doc = _load(args.input) if args.input else {}
    spec = FamilySpec(args.name, doc.get("params", {}))
    p = dict(spec.params)
    if spec.name == "askey_wilson":
        merged = {**DEFAULT_AW, **p}
        nu = args.nu
        if nu is not None:
            merged["q"] = _q_root(nu, p.get("q"))
        elif "q" not in merged:
            merged["q"] = 0.7
        aw = AWParams.from_params({k: _scalar(v) for k, v in merged.items()})
        if args.truncate:
            if nu is None:
                raise InputError("--truncate needs --nu")
            tr = askey_wilson_truncation(aw, nu, tol=tol)
            return tr.to_json(), tr.table
        count = args.count if args.count is not None else (nu if nu is not None else 6)
        table = askey_wilson_table(aw, count, tol=tol)
        return table.to_json(), table
    if spec.name == "cbi":
        merged = {**DEFAULT_CBI, **p}
        c = CBIParams(*(_scalar(merged[k]) for k in ("alpha", "beta", "gamma", "delta")))
        res = cbi_base_and_interlaced(c, args.N if args.N is not None else 4, tol)
        return {"base": res.base.to_json(), "interlaced": res.interlaced.to_json(),
                "P": [_js(q.coeffs) for q in res.build.P]}, res.interlaced
    if spec.name == "dual_m1_hahn_even":
        N = args.N if args.N is not None else int(p.get("N", 8))
        res = dual_m1_hahn_even(_scalar(p.get("alpha"), 5.3), _scalar(p.get("beta"), 2.1), N)
        return {"N": N, "tau": scalar_to_json(res.tau), "u": _js(res.u), "b": _js(res.b),
                "P": [_js(q.coeffs) for q in res.P], "Q": [_js(q.coeffs) for q in res.Q],
                "split_residual": res.split_residual,
                "christoffel_remainders": list(res.christoffel_remainders)}, None
    N = args.N if args.N is not None else 6
    if spec.name == "jacobi_shifted":
        polys = jacobi_shifted(_scalar(p.get("alpha"), 0.5), _scalar(p.get("beta"), 0.5), N, tol)
    else:
        polys = laguerre(_scalar(p.get("alpha"), -0.5), N, tol)
    return {"R": [_js(q.coeffs) for q in polys]}, None


def cmd_degeneration(args, tol):
    doc = _load(args.input)
    cd = _classical(doc, tol)
    size = _size(doc, args)
    quad = classical_table(cd, tol=tol, **size)
    eps_list = args.eps or doc.get("eps") or [1e-2, 1e-3]
    runs = []
    for eps in eps_list:
        t = q_to_1_degeneration(cd, float(eps), tol=tol, **size)
        gap = 0.0
        for a, b in list(zip(t.B, quad.B)) + list(zip(t.C[1:], quad.C[1:])):
            gap = max(gap, abs(a - b) / max(abs(b), 1.0))
        runs.append({"eps": float(eps), "table": t.to_json(), "max_relative_gap": gap})
    return {"quadratic": quad.to_json(), "runs": runs}, None


COMMANDS = {
    "classify": cmd_classify,
    "ops-generate": cmd_ops,
    "regularity-check": cmd_regularity,
    "quadrature": cmd_quadrature,
    "alternating-build": cmd_alternating,
    "nu-verify": cmd_nu,
    "family": cmd_family,
    "degeneration": cmd_degeneration,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--tol", type=float, help="absolute tolerance (overrides COP_TOL_ABS)")
    common.add_argument("--rtol", type=float, help="relative tolerance (overrides COP_TOL_REL)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv",
                     help="emit the recurrence table as CSV where the command has one")

    p = argparse.ArgumentParser(prog="classop", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("classify", "regularity-check", "ops-generate", "quadrature", "nu-verify",
                 "degeneration", "alternating-build"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("input", help="JSON file, '-' for stdin, or inline JSON")
        if name in ("regularity-check", "ops-generate", "quadrature", "nu-verify", "degeneration",
                    "alternating-build"):
            sp.add_argument("--N", type=int, help="finite case size N")
        if name in ("regularity-check", "ops-generate", "nu-verify", "degeneration"):
            sp.add_argument("--count", type=int, help="number of B coefficients (infinite case)")
        if name == "degeneration":
            sp.add_argument("--eps", type=float, action="append", help="repeatable")
        if name == "alternating-build":
            sp.add_argument("--tau", type=float)
    fp = sub.add_parser("family", parents=[common])
    fp.add_argument("name", choices=["askey_wilson", "cbi", "dual_m1_hahn_even", "jacobi_shifted", "laguerre"])
    fp.add_argument("input", nargs="?", help="optional JSON with a 'params' object")
    fp.add_argument("--nu", type=int, help="order of the root of unity q (Askey-Wilson)")
    fp.add_argument("--truncate", action="store_true", help="nodes and weights at the root of unity")
    fp.add_argument("--N", type=int)
    fp.add_argument("--count", type=int)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    base = Tolerance.from_env()
    tol = Tolerance(args.tol if args.tol is not None else base.abs_eps,
                    args.rtol if args.rtol is not None else base.rel_eps)
    try:
        result, table = COMMANDS[args.command](args, tol)
    except errors.DomainError as exc:
        _emit(json.dumps({"error": exc.payload()}, indent=2) + "\n", args.out)
        return 2
    except (OSError, ValueError, KeyError, TypeError, InputError) as exc:
        payload = {"error": {"code": "InputError", "index": None, "which": None,
                             "detail": f"{type(exc).__name__}: {exc}"}}
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
        return 1
    if args.fmt == "csv":
        if table is None:
            sys.stderr.write(f"{args.command} has no table output; writing JSON\n")
        else:
            _emit(_table_csv(table), args.out)
            return 0
    _emit(json.dumps(result, indent=2) + "\n", args.out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
