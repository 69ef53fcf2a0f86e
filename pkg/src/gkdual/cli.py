"""Command-line frontend.

Subcommands:

    gkdual spectra list   [--model SPEC --n A..B]
    gkdual state eval     --model SPEC --family FAM --z RE[,IM] --alpha A
    gkdual op dump        --model SPEC --op OP [--dual] [--z RE[,IM]] --N N
    gkdual sweep          --model SPEC --family FAM --quantity Q ...
    gkdual verify suite   --model SPEC --family FAM [--config FILE] --out R.json

Model specs follow ``name[:key=value[,key=value]...]``, e.g.
``poschl_teller:nu=3``, ``morse:M=4``, ``custom:file=spectrum.json``.

Every output artifact embeds the full run configuration in its header, and
numbers are written with 17 significant digits, so re-running an embedded
configuration reproduces the artifact byte for byte on one platform.  The
environment variable GKDUAL_OUTPUT_DIR supplies a default directory for
relative --out paths.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import operators, spectra, states, verify
from .errors import GkdualError
from .spectra import SpectrumModel

_FAMILY_ALIASES = {
    "gk": "gk",
    "dual": "dual_gk",
    "dual_gk": "dual_gk",
    "even": "even_dual",
    "odd": "odd_dual",
    "cat-real": "cat_real",
    "cat-imag": "cat_imag",
}

_OP_CHOICES = ("A", "Adag", "B", "Bdag", "S", "T", "H", "D", "V", "a")


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs to reproduce its output, serialized into
    the output artifact's header.  The seed is recorded for reproducibility
    bookkeeping only; nothing here samples randomness."""

    command: str
    model: str
    family: str | None = None
    quantity: str | None = None
    z: str | None = None
    alpha: float | None = None
    n_range: str | None = None
    op: str | None = None
    dual: bool | None = None
    N: int | None = None
    z_min: float | None = None
    z_max: float | None = None
    steps: int | None = None
    r: float | None = None
    theta_steps: int | None = None
    n_max: int | None = None
    tail_tol: float | None = None
    fmt: str = "csv"
    out: str | None = None
    seed: int = 0

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: v for k, v in d.items() if v is not None}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise GkdualError(f"bad complex value {text!r}; expected RE or RE,IM")


def _parse_n_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        v = int(text)
        return range(v, v + 1)
    return range(int(lo), int(hi) + 1)


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get("GKDUAL_OUTPUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(text: str, out: str | None) -> None:
    out = _resolve_out(out)
    if out is None:
        sys.stdout.write(text)
    else:
        os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv_document(config: RunConfig, meta: dict, header: list, rows: list) -> str:
    lines = [f"# config: {json.dumps(config.to_dict(), sort_keys=True)}"]
    for key, value in meta.items():
        lines.append(f"# {key}: {value}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _json_document(config: RunConfig, meta: dict, header: list, rows: list) -> str:
    payload = {
        "config": config.to_dict(),
        "meta": meta,
        "columns": header,
        "rows": [[float(c) if i or not h.startswith("n") else c
                  for i, (c, h) in enumerate(zip(row, header))] for row in rows],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _document(config: RunConfig, meta: dict, header: list, rows: list) -> str:
    if config.fmt == "json":
        return _json_document(config, meta, header, rows)
    return _csv_document(config, meta, header, rows)


def _trunc(args) -> states.TruncConfig:
    if getattr(args, "tail_tol", None) is None:
        return states.DEFAULT_TRUNC
    return states.TruncConfig(tail_tol=args.tail_tol)


# ---------------------------------------------------------------------------
# spectra list
# ---------------------------------------------------------------------------

_CATALOG_ROWS = (
    ("harmonic", "-", "n", "n", "inf", "inf"),
    ("poschl_teller", "nu > 2", "n(n+nu)", "n/(n+nu)", "inf", "1"),
    ("infinite_well", "-", "n(n+2)", "n/(n+2)", "inf", "1"),
    ("morse", "integer M >= 1", "n(M+1-n)/(M+2)", "n(M+2)/(M+1-n)", "any (M+1 levels)", "any (M+1 levels)"),
    ("hydrogen", "-", "1 - 1/(n+1)^2", "n(n+1)^2/(n+2)", "1", "inf"),
    ("penson_solomon", "q > 0", "n q^(2(1-n))", "n q^(2(n-1))", "0 or inf by q", "0 or inf by q"),
    ("su11_gp", "2*kappa integer >= 2", "n/(n+2k-1)", "n(n+2k-1)", "1", "inf"),
    ("su11_bg", "2*kappa integer >= 2", "n(n+2k-1)", "n/(n+2k-1)", "inf", "1"),
)


def cmd_spectra_list(args) -> int:
    if args.model is None:
        widths = [16, 22, 16, 18, 18, 18]
        header = ("model", "constraint", "e_n", "eps_n", "radius", "dual radius")
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
        for row in _CATALOG_ROWS:
            lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    model = spectra.parse_model_spec(args.model)
    ns = _parse_n_range(args.n) if args.n else range(0, 9)
    top = model.max_index()
    lines = [f"# model: {model.spec_string()}  omega: {_fmt(model.omega)}", "n,e_n,eps_n"]
    for n in ns:
        if top is not None and n > top:
            break
        lines.append(f"{n},{_fmt(spectra.eigenvalue(model, n))},{_fmt(spectra.dual_eigenvalue(model, n))}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# state eval
# ---------------------------------------------------------------------------


def cmd_state_eval(args) -> int:
    model = spectra.parse_model_spec(args.model)
    family = _FAMILY_ALIASES[args.family]
    z = _parse_complex(args.z)
    s = states.state(model, family, z, args.alpha, _trunc(args))
    config = RunConfig(
        command="state eval", model=args.model, family=args.family, z=args.z,
        alpha=args.alpha, tail_tol=getattr(args, "tail_tol", None),
        fmt=args.format, out=args.out, seed=args.seed,
    )
    meta = {
        "cutoff": s.cutoff,
        "norm_constant": _fmt(s.norm_constant),
        "tail_bound": _fmt(s.tail_bound),
    }
    rows = [
        [str(n), _fmt(c.real), _fmt(c.imag), _fmt(abs(c) ** 2)]
        for n, c in enumerate(s.amplitudes)
    ]
    _emit(_document(config, meta, ["n", "re_c", "im_c", "p"], rows), args.out)
    return 0


# ---------------------------------------------------------------------------
# op dump
# ---------------------------------------------------------------------------


def _build_operator(model: SpectrumModel, name: str, dual: bool, alpha: float,
                    cutoff: int, z: complex) -> operators.TruncatedOperator:
    if name in ("A", "Adag"):
        which = ("dualA" if dual else "A") + ("_dag" if name.endswith("dag") else "")
        return operators.ladder(model, alpha, cutoff, which)
    if name in ("B", "Bdag"):
        which = ("dualB" if dual else "B") + ("_dag" if name.endswith("dag") else "")
        return operators.conjugate_b(model, alpha, cutoff, which)
    if name == "S":
        return operators.evolution(model, alpha, cutoff, dual=dual)
    if name == "T":
        return operators.interpolator(model, cutoff)
    if name == "H":
        return operators.hamiltonian(model, cutoff, dual=dual)
    if name == "D":
        return operators.displacement(model, z, alpha, cutoff, "dualD" if dual else "D")
    if name == "V":
        return operators.displacement(model, z, alpha, cutoff, "dualV" if dual else "V")
    if name == "a":
        return operators.check_a(model, cutoff)
    raise GkdualError(f"unknown operator {name!r}")


def cmd_op_dump(args) -> int:
    model = spectra.parse_model_spec(args.model)
    z = _parse_complex(args.z) if args.z else 0j
    if args.op in ("D", "V") and not args.z:
        raise GkdualError(f"operator {args.op} needs --z")
    op = _build_operator(model, args.op, args.dual, args.alpha, args.N, z)
    config = RunConfig(
        command="op dump", model=args.model, op=args.op, dual=args.dual,
        alpha=args.alpha, z=args.z, N=args.N, fmt=args.format, out=args.out,
        seed=args.seed,
    )
    if args.format == "json":
        payload = {
            "config": config.to_dict(),
            "cutoff": op.cutoff,
            "tag": op.tag,
            "entries_re": [[float(v.real) for v in row] for row in op.entries],
            "entries_im": [[float(v.imag) for v in row] for row in op.entries],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    meta = {"cutoff": op.cutoff, "tag": op.tag, "entries": "nonzero only"}
    rows = []
    for i in range(op.dim):
        for j in range(op.dim):
            v = op.entries[i, j]
            if v != 0:
                rows.append([str(i), str(j), _fmt(v.real), _fmt(v.imag)])
    _emit(_csv_document(config, meta, ["row", "col", "re", "im"], rows), args.out)
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def cmd_sweep(args) -> int:
    model = spectra.parse_model_spec(args.model)
    family = _FAMILY_ALIASES[args.family]
    dual = states.family_is_dual(family)
    trunc = _trunc(args)
    config = RunConfig(
        command="sweep", model=args.model, family=args.family, quantity=args.quantity,
        z=args.z, alpha=args.alpha, z_min=args.z_min, z_max=args.z_max,
        steps=args.steps, r=args.r, theta_steps=args.theta_steps, n_max=args.n_max,
        tail_tol=getattr(args, "tail_tol", None), fmt=args.format, out=args.out,
        seed=args.seed,
    )

    if args.quantity == "energy":
        rows = []
        skipped = []
        for k in range(args.steps):
            zr = args.z_min + (args.z_max - args.z_min) * k / max(args.steps - 1, 1)
            try:
                s = states.state(model, family, zr, args.alpha, trunc)
            except GkdualError as exc:
                skipped.append(f"z={_fmt(zr)} ({exc})")
                continue
            h = operators.hamiltonian(model, s.cutoff, dual=dual)
            mean = operators.expectation(h, s).real * model.omega
            rows.append([_fmt(zr * zr), _fmt(mean)])
        meta = {"columns_doc": "x = |z|^2, energy = omega * <H>"}
        if skipped:
            meta["skipped_points"] = "; ".join(skipped)
        _emit(_document(config, meta, ["x", "energy"], rows), args.out)
        return 0

    if args.quantity == "distribution":
        z = _parse_complex(args.z)
        s = states.state(model, family, z, args.alpha, trunc)
        rows = [[str(n), _fmt(p)] for n, p in enumerate(s.probabilities())]
        meta = {"columns_doc": "level n, occupation probability p"}
        _emit(_document(config, meta, ["n", "p"], rows), args.out)
        return 0

    if args.quantity == "cat":
        if family not in ("cat_real", "cat_imag"):
            raise GkdualError("quantity 'cat' needs --family cat-real or cat-imag")
        kind = "real" if family == "cat_real" else "imaginary"
        rows = []
        for k in range(args.theta_steps):
            theta = math.pi * (k + 1) / (args.theta_steps + 1)
            z = args.r * complex(math.cos(theta), math.sin(theta))
            s = states.cat(model, z, args.alpha, kind, trunc)
            formula = states.cat_distribution(model, args.r, theta, kind, s.cutoff)
            p = s.probabilities()
            top = min(args.n_max, s.cutoff)
            for n in range(top + 1):
                rows.append([_fmt(theta), str(n), _fmt(p[n]), _fmt(formula[n])])
        meta = {"columns_doc": "theta, level n, measured p, closed-form p"}
        _emit(_document(config, meta, ["theta", "n", "p", "p_formula"], rows), args.out)
        return 0

    raise GkdualError(f"unknown sweep quantity {args.quantity!r}")


# ---------------------------------------------------------------------------
# verify suite
# ---------------------------------------------------------------------------


def cmd_verify_suite(args) -> int:
    model = spectra.parse_model_spec(args.model)
    family = _FAMILY_ALIASES[args.family]
    if family not in ("gk", "dual_gk"):
        raise GkdualError("verify suite runs on --family gk or dual")
    config = verify.DEFAULT_VERIFY
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
        trunc_kw = overrides.pop("trunc", None)
        if trunc_kw:
            overrides["trunc"] = states.TruncConfig(**trunc_kw)
        config = dataclasses.replace(config, **{
            k: tuple(v) if isinstance(v, list) else v for k, v in overrides.items()
        })
    report = verify.run_suite(model, family, config)
    run_config = RunConfig(
        command="verify suite", model=args.model, family=args.family,
        fmt="json", out=args.out, seed=args.seed,
    )
    doc = dict(report.to_dict())
    doc["config"] = run_config.to_dict()
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    _emit(text, args.out)
    if args.out is not None:
        status = "pass" if report.passed else "FAIL"
        sys.stdout.write(f"{model.spec_string()} [{family}]: {status}\n")
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=0,
                   help="recorded in output metadata; no command draws randomness")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkdual",
        description="coherent-state families, duals, operators and criteria checks "
                    "on truncated Fock spaces",
    )
    top = parser.add_subparsers(dest="group", required=True)

    p_spectra = top.add_parser("spectra", help="inspect the spectrum catalog")
    sp = p_spectra.add_subparsers(dest="action", required=True)
    p_list = sp.add_parser("list", help="catalog table, or level values for one model")
    p_list.add_argument("--model", default=None)
    p_list.add_argument("--n", default=None, help="level range, e.g. 0..5")
    p_list.add_argument("--out", default=None)
    p_list.set_defaults(func=cmd_spectra_list)

    p_state = top.add_parser("state", help="construct states")
    st = p_state.add_subparsers(dest="action", required=True)
    p_eval = st.add_parser("eval", help="amplitudes and occupation probabilities")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--family", choices=sorted(_FAMILY_ALIASES), required=True)
    p_eval.add_argument("--z", required=True, help="complex label RE or RE,IM")
    p_eval.add_argument("--alpha", type=float, default=0.0)
    p_eval.add_argument("--tail-tol", dest="tail_tol", type=float, default=None)
    _add_common(p_eval)
    p_eval.set_defaults(func=cmd_state_eval)

    p_op = top.add_parser("op", help="materialize operators")
    od = p_op.add_subparsers(dest="action", required=True)
    p_dump = od.add_parser("dump", help="matrix entries as CSV triplets or dense JSON")
    p_dump.add_argument("--model", required=True)
    p_dump.add_argument("--op", choices=_OP_CHOICES, required=True)
    p_dump.add_argument("--dual", action="store_true")
    p_dump.add_argument("--alpha", type=float, default=0.0)
    p_dump.add_argument("--z", default=None)
    p_dump.add_argument("--N", type=int, required=True)
    _add_common(p_dump)
    p_dump.set_defaults(func=cmd_op_dump)

    p_sweep = top.add_parser("sweep", help="plot-ready tables over label grids")
    p_sweep.add_argument("--model", required=True)
    p_sweep.add_argument("--family", choices=sorted(_FAMILY_ALIASES), required=True)
    p_sweep.add_argument("--quantity", choices=("energy", "distribution", "cat"), required=True)
    p_sweep.add_argument("--z", default=None, help="fixed label for quantity=distribution")
    p_sweep.add_argument("--alpha", type=float, default=0.0)
    p_sweep.add_argument("--z-min", dest="z_min", type=float, default=0.1)
    p_sweep.add_argument("--z-max", dest="z_max", type=float, default=0.9)
    p_sweep.add_argument("--steps", type=int, default=9)
    p_sweep.add_argument("--r", type=float, default=0.4, help="cat sweep radius")
    p_sweep.add_argument("--theta-steps", dest="theta_steps", type=int, default=6)
    p_sweep.add_argument("--n-max", dest="n_max", type=int, default=12)
    p_sweep.add_argument("--tail-tol", dest="tail_tol", type=float, default=None)
    _add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = top.add_parser("verify", help="criteria suites")
    vf = p_verify.add_subparsers(dest="action", required=True)
    p_suite = vf.add_parser("suite", help="run every applicable check")
    p_suite.add_argument("--model", required=True)
    p_suite.add_argument("--family", choices=("gk", "dual", "dual_gk"), required=True)
    p_suite.add_argument("--config", default=None, help="JSON file of grid/tolerance overrides")
    p_suite.add_argument("--out", default=None)
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.set_defaults(func=cmd_verify_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GkdualError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
