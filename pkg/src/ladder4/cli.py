"""Command-line front end: ``ladder4 {steady,sweep,figure,verify,erratum}``.

Exit codes: 0 on success, 1 when ``verify`` finds a failing criterion, 2 on
argument or parameter errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .errors import LadderError

# flags whose values may legitimately start with '-'
_VALUE_FLAGS = ("--range", "--omega", "--delta", "--gamma", "--eps-g")

SWEEP_KEYS = (
    "omega", "delta", "gamma", "rho44_literal", "vary", "range",
    "observable", "method", "eps_g", "out", "threads",
)


class UsageError(Exception):
    """Bad command-line input detected after argparse."""


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _triple(text: str, name: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--{name} needs three comma-separated numbers, got {text!r}")
    try:
        return tuple(float(x) for x in parts)  # type: ignore[return-value]
    except ValueError:
        raise UsageError(f"--{name}: not a number in {text!r}") from None


def _ranges(text: str) -> tuple[tuple[float, float, float], ...]:
    out = []
    for chunk in text.split(","):
        parts = chunk.split(":")
        if len(parts) != 3:
            raise UsageError(f"--range entries must be start:stop:step, got {chunk!r}")
        try:
            out.append(tuple(float(x) for x in parts))
        except ValueError:
            raise UsageError(f"--range: not a number in {chunk!r}") from None
    return tuple(out)


def _params(args):
    from .model import SystemParams

    return SystemParams.from_triples(
        _triple(args.omega, "omega"),
        _triple(args.delta, "delta"),
        _triple(args.gamma, "gamma"),
        rho44_decay_literal=bool(args.rho44_literal),
    )


def _add_param_flags(p: argparse.ArgumentParser, defaults: bool = True) -> None:
    d = (lambda v: v) if defaults else (lambda v: None)
    p.add_argument("--omega", default=d("0,0,0"), help="Rabi frequencies omega1,omega2,omega3")
    p.add_argument("--delta", default=d("0,0,0"), help="detunings delta1,delta2,delta3")
    p.add_argument("--gamma", default=d("6,1,1"), help="decay constants gamma2,gamma3,gamma4")
    p.add_argument(
        "--rho44-literal",
        action="store_true",
        default=None if not defaults else False,
        help="decay the level-4 population with gamma3 instead of gamma4",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ladder4", description="Four-level ladder atom steady states.")
    parser.add_argument("--version", action="version", version=f"ladder4 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    st = sub.add_parser("steady", help="one steady state as JSON")
    _add_param_flags(st)

    sw = sub.add_parser("sweep", help="sweep one or two parameters, CSV out")
    sw.add_argument("--config", help="key=value file; command-line flags override it")
    _add_param_flags(sw, defaults=False)
    sw.add_argument("--vary", help="one or two comma-separated parameter names")
    sw.add_argument("--range", help="start:stop:step per varied parameter, comma-separated")
    sw.add_argument("--observable", help="rhoKK, im_rho21, im_rho32, im_rho43, re[i,j], im[i,j]")
    sw.add_argument("--method", help="exact, perturbative-order-K[-literal], analytic-*, resonance-limit, three-photon")
    sw.add_argument("--eps-g", type=float, help="decay regulariser for resonance-limit (default: exact)")
    sw.add_argument("--out", help="output CSV path (default: stdout)")
    sw.add_argument("--threads", type=int, help="worker cap (default: LADDER4_THREADS or CPU count)")

    fg = sub.add_parser("figure", help="reproduce a figure's data and summary")
    fg.add_argument("id", type=int)
    fg.add_argument("--out", default="results")
    fg.add_argument("--threads", type=int)

    vf = sub.add_parser("verify", help="run the acceptance criteria")
    vf.add_argument("--only", help="comma-separated criterion numbers")

    sub.add_parser("erratum", help="print the closed-form discrepancy ledger")
    return parser


def read_config(path: str) -> dict[str, str]:
    """Flat ``key=value`` file; lines starting with ``#`` are comments; keys mirror the long flags."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for n, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in SWEEP_KEYS:
                raise UsageError(f"{path}:{n}: unknown key {key!r}")
            values[key] = value
    return values


def _merge_sweep_args(args) -> argparse.Namespace:
    cfg = read_config(args.config) if args.config else {}
    merged = {
        "omega": "0,0,0",
        "delta": "0,0,0",
        "gamma": "6,1,1",
        "rho44_literal": False,
        "observable": "im_rho21",
        "method": "exact",
        "eps_g": None,
        "out": None,
        "threads": None,
        "vary": None,
        "range": None,
    }
    for key, value in cfg.items():
        if key == "rho44_literal":
            merged[key] = value.lower() in ("1", "true", "yes", "on")
        elif key == "eps_g":
            merged[key] = float(value)
        elif key == "threads":
            merged[key] = int(value)
        else:
            merged[key] = value
    for key in merged:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    if merged["vary"] is None or merged["range"] is None:
        raise UsageError("sweep needs --vary and --range (on the command line or in --config)")
    return argparse.Namespace(**merged)


def _cmd_steady(args) -> int:
    from .steady import steady_state_exact

    p = _params(args)
    res = steady_state_exact(p)
    rho = res.rho
    doc = {
        "version": __version__,
        "params": p.as_dict(),
        "rho_real": rho.real.tolist(),
        "rho_imag": rho.imag.tolist(),
        "residual_inf_norm": res.residual_inf_norm,
        "condition_estimate": res.condition_estimate,
        "trace": float(rho.trace().real),
        "absorption": {f"im_rho{k + 1}{k}": float(rho[k - 1, k].imag) for k in (1, 2, 3)},
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_sweep(args) -> int:
    from .sweep import SweepSpec, run_sweep, sweep_csv

    a = _merge_sweep_args(args)
    spec = SweepSpec(
        _params(a),
        tuple(v.strip() for v in a.vary.split(",")),
        _ranges(a.range),
        a.observable,
        a.method,
        a.eps_g,
    )
    text = sweep_csv(run_sweep(spec, threads=a.threads))
    if a.out:
        with open(a.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_figure(args) -> int:
    from .figures import FIGURE_IDS, reproduce_figure

    if args.id not in FIGURE_IDS:
        raise UsageError(f"figure id must be in 2..12, got {args.id}")
    summary = reproduce_figure(args.id, args.out, threads=args.threads)
    for name in summary["files"]:
        print(name)
    for check, ok in summary["checks"].items():
        print(f"{'PASS' if ok else 'FAIL'} {check}")
    return 0


def _cmd_verify(args) -> int:
    from .acceptance import CRITERIA, run_all

    keys = None
    if args.only:
        keys = [k.strip() for k in args.only.split(",")]
        bad = [k for k in keys if k not in CRITERIA]
        if bad:
            raise UsageError(f"unknown criteria {bad}; choose from {list(CRITERIA)}")
    results = run_all(keys, echo=print)
    failed = [r.key for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    return 1 if failed else 0


def _cmd_erratum(args) -> int:
    from .audit import build_ledger, format_ledger

    print(format_ledger(build_ledger()))
    return 0


COMMANDS = {
    "steady": _cmd_steady,
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
    "verify": _cmd_verify,
    "erratum": _cmd_erratum,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_join_negative_values(argv))
    try:
        return COMMANDS[args.command](args)
    except (UsageError, LadderError, ValueError, OSError) as exc:
        print(f"ladder4 {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
