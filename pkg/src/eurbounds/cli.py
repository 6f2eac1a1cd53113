"""Command-line front end.

Subcommands: ``bounds`` (closed-form bound table), ``diagram`` (Monte-Carlo
information diagram), ``region`` (entropy-region samples), ``witness``
(Werner threshold report), ``verify`` (invariant suite).  Human-readable
tables go to stdout; machine output (CSV/JSON) goes to files only.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
The default RNG seed may be overridden with the EURBOUNDS_SEED environment
variable.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import __version__
from . import bounds as B
from . import diagrams as D
from . import entanglement as E
from . import quantum as Q
from .util import ConvergenceError, DomainError

_SEED_ENV = "EURBOUNDS_SEED"


def _default_seed() -> int:
    raw = os.environ.get(_SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"{_SEED_ENV}={raw!r} is not an integer")


def _parse_alpha(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise DomainError(f"--alpha must be a positive number or 'inf', got {text!r}")
    if value <= 0:
        raise DomainError(f"--alpha must be positive, got {value}")
    return value


def _alpha_str(order: float) -> str:
    return "inf" if math.isinf(order) else f"{order:g}"


def _snap_purity(d: int, purity: float) -> float:
    """Snap command-line purity onto [1/d, 1] when it misses by rounding.

    Values like 0.3333 for d=3 are accepted as the maximally mixed boundary;
    anything off by more than 1e-3 is a genuine domain error and passes
    through to the validator unchanged.
    """
    lo = 1.0 / d
    if lo - 1e-3 <= purity < lo:
        return lo
    if 1.0 < purity <= 1.0 + 1e-3:
        return 1.0
    return purity


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eurbounds",
        description="Entropy bounds at fixed index of coincidence for symmetric measurements.")
    ap.add_argument("--version", action="version", version=f"eurbounds {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("bounds", help="print every applicable bound for a configuration")
    pb.add_argument("--d", type=int, required=True, help="Hilbert-space dimension")
    pb.add_argument("--kind", required=True, choices=("mub", "mum", "gsic", "sic"))
    pb.add_argument("--M", type=int, default=None, help="number of measurements (default: complete set)")
    pb.add_argument("--kappa", type=float, default=None, help="MUM efficiency parameter")
    pb.add_argument("--a", type=float, default=None, help="general-SIC self-overlap Tr(S_i S_i)")
    pb.add_argument("--purity", type=float, default=None, help="state purity Tr(rho^2)")
    pb.add_argument("--state-file", default=None,
                    help="JSON density matrix (row-major [[re,im],...]); overrides --purity")
    pb.add_argument("--alpha", default="1", help="entropy order (number or 'inf')")
    pb.add_argument("--out", default=None, help="write the bound set as JSON to this path")

    pd = sub.add_parser("diagram", help="sample an information diagram to CSV")
    pd.add_argument("--d", type=int, required=True)
    pd.add_argument("--kind", required=True, choices=("mub", "mum", "gsic", "sic"))
    pd.add_argument("--M", type=int, default=None)
    pd.add_argument("--kappa", type=float, default=None)
    pd.add_argument("--a", type=float, default=None)
    pd.add_argument("--t", type=float, default=None, help="raw construction strength")
    pd.add_argument("--fiducial", default=None, help="fiducial vector file for SIC kinds")
    pd.add_argument("--alpha", default="1")
    pd.add_argument("--samples", type=int, default=2000)
    pd.add_argument("--strategy", default="stratified", choices=D.STRATEGIES)
    pd.add_argument("--seed", type=int, default=None)
    pd.add_argument("--out", required=True, help="CSV output path")
    pd.add_argument("--plot", default=None, help="also render a PNG to this path")
    pd.add_argument("--gap-report", default=None, help="write a per-stratum gap CSV to this path")

    pr = sub.add_parser("region", help="sample per-measurement entropy vectors to CSV")
    pr.add_argument("--d", type=int, required=True)
    pr.add_argument("--mode", default="mub", choices=("mub", "constrained"))
    pr.add_argument("--samples", type=int, default=2000)
    pr.add_argument("--seed", type=int, default=None)
    pr.add_argument("--out", required=True)
    pr.add_argument("--plot", default=None)

    pw = sub.add_parser("witness", help="Werner-state threshold scan")
    pw.add_argument("--d", type=int, required=True)
    pw.add_argument("--alpha", default="inf")
    pw.add_argument("--resolution", type=float, default=1e-4)
    pw.add_argument("--out", default=None, help="write the JSON report to this path")

    pv = sub.add_parser("verify", help="run the invariant and oracle suite")
    pv.add_argument("--quick", action="store_true", help="reduced sizes, a few minutes")
    pv.add_argument("--seed", type=int, default=None)
    return ap


def _build_measurement_set(args) -> Q.MeasurementSet:
    d = args.d
    kind = args.kind
    if kind == "mub":
        mset = Q.mub_set(d)
        if args.M is not None:
            mset = mset.subset(args.M)
        return mset
    if kind == "mum":
        t = getattr(args, "t", None)
        if t is None:
            if args.kappa is None:
                raise DomainError("mum needs --kappa or --t")
            t = Q.mum_strength_for_kappa(d, args.kappa)
        mset = Q.mum_set(d, t)
        if args.M is not None:
            mset = mset.subset(args.M)
        return mset
    if kind == "gsic":
        t = getattr(args, "t", None)
        if t is None:
            if args.a is None:
                raise DomainError("gsic needs --a or --t")
            t = Q.gsic_strength_for_a(d, args.a)
        return Q.gsic(d, t)
    return Q.sic_set(d, getattr(args, "fiducial", None))


def _flags(br: B.BoundResult) -> str:
    bits = []
    if br.is_upper:
        bits.append("upper")
    else:
        bits.append("lower")
    if br.tight:
        bits.append("tight")
    if br.conjecture:
        bits.append("conjecture")
    if br.clamped:
        bits.append("clamped")
    return ",".join(bits)


def _cmd_bounds(args) -> int:
    order = _parse_alpha(args.alpha)
    if args.state_file is not None:
        with open(args.state_file) as fh:
            rho = Q.DensityMatrix.from_json(fh.read())
        if rho.d != args.d:
            raise DomainError(f"state file has d={rho.d}, expected {args.d}")
        purity = rho.purity
    elif args.purity is not None:
        purity = _snap_purity(args.d, args.purity)
    else:
        raise DomainError("either --purity or --state-file is required")

    kind = args.kind
    m = args.M
    kwargs = dict(kind=kind, d=args.d, purity=purity, order=order)
    if kind in ("mub", "mum"):
        kwargs["n_meas"] = m if m is not None else args.d + 1
        kwargs["complete"] = kwargs["n_meas"] == args.d + 1
        if kind == "mum":
            if args.kappa is None:
                raise DomainError("mum bounds need --kappa")
            kwargs["kappa"] = args.kappa
    else:
        kwargs["a"] = args.a if args.a is not None else (
            1.0 / args.d**2 if kind == "sic" else None)
    results = B.applicable_bounds(**kwargs)
    if not results:
        print(f"no bounds apply at alpha={_alpha_str(order)} for kind={kind}")
        return 0

    print(f"bounds for kind={kind} d={args.d} purity={purity:.10g} "
          f"alpha={_alpha_str(order)}")
    print(f"{'formula':<14} {'value (bits)':>14}   {'flags':<24} intermediates")
    for br in results:
        params = " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                          for k, v in br.params.items()
                          if k in ("C", "n", "k", "c", "p_a", "p_b", "ic", "a"))
        print(f"{br.formula_id:<14} {br.value:>14.10f}   {_flags(br):<24} {params}")
    if args.out:
        import json

        payload = [{
            "formula_id": br.formula_id, "value": br.value, "params": br.params,
            "is_upper": br.is_upper, "tight": br.tight,
            "conjecture": br.conjecture, "clamped": br.clamped,
        } for br in results]
        with open(args.out, "w") as fh:
            json.dump({"d": args.d, "kind": kind, "purity": purity,
                       "alpha": _alpha_str(order), "bounds": payload}, fh, indent=2)
        print(f"wrote {args.out}")
    return 0


def _cmd_diagram(args) -> int:
    order = _parse_alpha(args.alpha)
    seed = args.seed if args.seed is not None else _default_seed()
    mset = _build_measurement_set(args)
    points = D.info_diagram(mset, order, args.samples, args.strategy, seed)
    D.write_diagram_csv(points, args.out)
    ys = [p.y for p in points]
    print(f"diagram: {len(points)} points, kind={mset.kind} d={args.d} "
          f"alpha={_alpha_str(order)} strategy={args.strategy} seed={seed}")
    print(f"entropy sum range: [{min(ys):.6f}, {max(ys):.6f}] bits")
    print(f"wrote {args.out}")
    if args.plot:
        D.render_diagram_png(points, mset, order, args.plot)
        print(f"wrote {args.plot}")
    if args.gap_report:
        rows = D.gap_report(mset, order, seed=seed)
        D.write_gap_csv(rows, args.gap_report)
        print(f"wrote {args.gap_report}")
    return 0


def _cmd_region(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.mode == "mub":
        vectors = D.entropy_region_mub(args.d, args.samples, seed)
    else:
        vectors = D.entropy_region_constrained(args.d, args.samples, seed)
    D.write_region_csv(vectors, args.out)
    print(f"region: {len(vectors)} vectors, mode={args.mode} d={args.d} seed={seed}")
    print(f"wrote {args.out}")
    if args.plot:
        D.render_region_png(vectors, args.plot,
                            title=f"entropy region, {args.mode} d={args.d}")
        print(f"wrote {args.plot}")
    return 0


def _cmd_witness(args) -> int:
    order = _parse_alpha(args.alpha)
    result = E.werner_threshold(args.d, order, args.resolution)
    status = "found" if result.found else "no violation in [0, 1]"
    print(f"witness: d={args.d} alpha={_alpha_str(order)} rhs={result.rhs:.6f} bits")
    print(f"threshold p = {result.threshold:.6f} ({status})")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(result.to_json())
        print(f"wrote {args.out}")
    return 0


def _cmd_verify(args) -> int:
    from . import verify as V

    seed = args.seed if args.seed is not None else _default_seed()
    results = V.run_all(quick=args.quick, seed=seed)
    failed = [r for r in results if not r.passed]
    for r in results:
        print(r.line())
    if failed:
        print(f"\n{len(failed)} check(s) failed; first counterexample:")
        print(f"  {failed[0].name}: {failed[0].detail}")
        return 1
    print(f"\nall {len(results)} checks passed")
    return 0


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    handlers = {
        "bounds": _cmd_bounds,
        "diagram": _cmd_diagram,
        "region": _cmd_region,
        "witness": _cmd_witness,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (DomainError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
