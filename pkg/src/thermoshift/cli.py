"""Command line front end.

Every command prints one JSON result envelope to stdout and, with
``--out DIR``, also writes it to ``DIR/<command>.json`` (plus a CSV for
the curve and sweep commands).  The ``payload`` object inside the
envelope is deterministic for a fixed invocation; run metadata such as
the timestamp lives only in the envelope.

Exit codes: 0 success, 1 usage, 2 bad input or violated precondition,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from bisect import bisect_right
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import builtins as registry
from .boundary_entropy import differentiability_scan, face_entropy_curve
from .cache import atomic_write_text, cached_elementary_orbits
from .core_sft import Sft
from .errors import (InvalidArgumentError, NumericError, ResourceLimitError,
                     ThermoshiftError, UnderflowError)
from .potential import PotentialLC, cohomology_test
from .rotation_geometry import rotation_set
from .zero_temperature import (CASE_MULTI_COMPONENT, classify,
                               symmetry_coefficients, zt_coefficients)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

THREADS_ENV = "THERMOSHIFT_THREADS"


class UsageError(Exception):
    """Flag combination errors that argparse cannot express."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage failures exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# -- input resolution ------------------------------------------------------

def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InvalidArgumentError(f"cannot read {path}: {e}") from e


def _resolve_shift(spec: str) -> Sft:
    if spec in registry.shift_names():
        return registry.get_shift(spec)
    if Path(spec).exists():
        return Sft.from_json(_read_text(spec))
    raise InvalidArgumentError(
        f"'{spec}' is neither a builtin shift ({', '.join(registry.shift_names())}) "
        f"nor an existing file")


def _resolve_potential(args) -> PotentialLC:
    spec = args.potential
    if spec in registry.potential_names():
        phi = registry.get_potential(spec)
        if args.shift is not None:
            declared = _resolve_shift(args.shift)
            if declared != phi.sft:
                raise InvalidArgumentError(
                    f"builtin potential '{spec}' lives on shift "
                    f"'{registry.potential_shift_name(spec)}', not '{args.shift}'")
    else:
        if not Path(spec).exists():
            raise InvalidArgumentError(
                f"'{spec}' is neither a builtin potential "
                f"({', '.join(registry.potential_names())}) nor an existing file")
        if args.shift is None:
            raise UsageError("--shift is required with a potential file")
        sft = _resolve_shift(args.shift)
        phi = PotentialLC.from_json(_read_text(spec), sft, mode=args.mode)
    if args.k is not None and phi.k != args.k:
        raise InvalidArgumentError(
            f"--k {args.k} does not match the potential window {phi.k}")
    return phi


def _parse_alpha(text: str, exact: bool):
    parts = [p.strip() for p in text.split(",")]
    try:
        if exact:
            return tuple(Fraction(p) for p in parts)
        return tuple(float(p) for p in parts)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidArgumentError(f"cannot parse direction '{text}': {e}") from e


def _threads_hint() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(n, 1)


# -- serialization helpers -------------------------------------------------

def _num(x):
    """JSON-safe number: exact rationals as strings, the rest as floats."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def _vec(xs):
    return [_num(x) for x in xs]


def _seg_str(segment) -> str:
    if all(s < 10 for s in segment):
        return "".join(str(s) for s in segment)
    return ",".join(str(s) for s in segment)


def _measure_summary(mu) -> dict:
    return {
        "states": list(mu.state_labels),
        "stationary": [float(p) for p in mu.stationary],
        "entropy": float(mu.entropy),
        "precision": mu.precision,
    }


def _input_hash(command: str, args, phi: PotentialLC | None,
                sft: Sft | None, extra: dict) -> str:
    spec = {
        "command": command,
        "shift": json.loads(sft.to_json()) if sft is not None else None,
        "potential": json.loads(phi.to_json()) if phi is not None else None,
    }
    spec.update(extra)
    blob = json.dumps(spec, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _emit(args, command: str, input_hash: str, payload: dict, warnings: list,
          csv_header: list | None = None, csv_rows: list | None = None) -> int:
    envelope = {
        "tool": "thermoshift",
        "version": __version__,
        "command": command,
        "input_hash": input_hash,
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "threads": _threads_hint(),
        "warnings": warnings,
        "payload": payload,
    }
    text = json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        atomic_write_text(outdir / f"{command}.json", text)
        if csv_header is not None:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(csv_header)
            writer.writerows(csv_rows or [])
            atomic_write_text(outdir / f"{command}.csv", buf.getvalue())
    sys.stdout.write(text)
    return EXIT_OK


# -- commands --------------------------------------------------------------

def _cmd_orbits(args) -> int:
    sft = _resolve_shift(args.shift)
    orbits = cached_elementary_orbits(sft, args.k, enabled=not args.no_cache)
    hist: dict[int, int] = {}
    for o in orbits:
        hist[o.period] = hist.get(o.period, 0) + 1
    payload = {
        "shift": {"d": sft.d, "labels": list(sft.labels)},
        "k": args.k,
        "count": len(orbits),
        "histogram": [[p, hist[p]] for p in sorted(hist)],
        "orbits": [{"period": o.period, "segment": _seg_str(o.segment)}
                   for o in orbits],
    }
    h = _input_hash("orbits", args, None, sft, {"k": args.k})
    return _emit(args, "orbits", h, payload, [])


def _cmd_rotset(args) -> int:
    phi = _resolve_potential(args)
    poly = rotation_set(phi)
    payload = {
        "m": poly.m,
        "affine_dim": poly.affine_dim,
        "query_only": poly.query_only,
        "vertices": [_vec(v) for v in poly.vertices] if poly.vertices else [],
        "facets": [{"vertex_ids": list(f.vertex_ids), "normal": _vec(f.normal),
                    "offset": _num(f.offset), "ambient": f.ambient}
                   for f in (poly.facets or [])],
    }
    h = _input_hash("rotset", args, phi, phi.sft, {})
    return _emit(args, "rotset", h, payload, [])


def _cmd_classify(args) -> int:
    phi = _resolve_potential(args)
    if phi.m != 1:
        raise InvalidArgumentError("classify takes a scalar potential; "
                                   "use --alpha with facecurve for vectors")
    res = classify(phi)
    warnings = []
    if res.tolerance_limited:
        warnings.append("entropy tie decided within tolerance only")
    payload = {
        "case": res.case,
        "beta": _num(res.beta),
        "is_whole_shift": res.face.is_whole_shift,
        "constant": _num(res.constant) if res.constant is not None else None,
        "components": [{"id": c.index, "states": list(c.labels()),
                        "entropy": float(c.entropy)}
                       for c in res.face.components],
        "max_entropy_ids": list(res.max_entropy_ids),
    }
    if res.limit is not None:
        payload["limit"] = [{"component": i, "weight": _num(w),
                             "measure": _measure_summary(mu)}
                            for i, (w, mu) in zip(res.max_entropy_ids, res.limit)]
    elif res.case == CASE_MULTI_COMPONENT:
        sym = symmetry_coefficients(phi, res) if phi.mode == "exact" else None
        if sym is not None:
            payload["coefficients"] = _vec(sym)
            payload["coefficient_method"] = "symmetry"
        else:
            warnings.append("coefficients undetermined by symmetry; run ztsweep")
    h = _input_hash("classify", args, phi, phi.sft, {})
    return _emit(args, "classify", h, payload, warnings)


def _cmd_ztsweep(args) -> int:
    phi = _resolve_potential(args)
    if phi.m != 1:
        raise InvalidArgumentError("ztsweep takes a scalar potential")
    res = zt_coefficients(phi, t_max=float(args.tmax), method=args.method)
    ids = list(res.component_ids)
    header = ["t"] + [f"mass_c{i}" for i in ids] + ["boundary_mass"]
    rows = [[t] + [float(m) for m in masses] + [float(b)]
            for t, masses, b in zip(res.t_values, res.mass_history,
                                    res.boundary_history)]
    payload = {
        "case": res.case,
        "method": res.method,
        "component_ids": ids,
        "coefficients": _vec(res.coefficients),
        "est_error": float(res.est_error),
        "converged": res.converged,
        "flags": list(res.flags),
        "csv_header": header,
        "rows": rows,
    }
    if res.limit is not None:
        payload["limit"] = [{"component": i, "weight": _num(w),
                             "measure": _measure_summary(mu)}
                            for i, (w, mu) in zip(ids, res.limit)]
    h = _input_hash("ztsweep", args, phi, phi.sft,
                    {"tmax": args.tmax, "method": args.method})
    return _emit(args, "ztsweep", h, payload, list(res.flags), header, rows)


def _curve_rows(curve, n: int) -> list:
    """Sampled envelope rows: s, ambient point, height, provenance."""
    hull = curve.hull
    ss = [p.s for p in hull]
    e0 = tuple(float(x) for x in curve.e0)
    e1 = tuple(float(x) for x in curve.e1)
    rows = []
    for i in range(n):
        s = i / (n - 1) if n > 1 else 0.0
        j = bisect_right(ss, s) - 1
        if j < 0:
            prov = str(hull[0].comp)
        elif j + 1 >= len(hull) or abs(ss[j] - s) < 1e-12:
            prov = str(hull[min(j, len(hull) - 1)].comp)
        else:
            p, q = hull[j], hull[j + 1]
            prov = str(p.comp) if p.comp == q.comp else "bridge"
        w = tuple(a + s * (b - a) for a, b in zip(e0, e1))
        rows.append([s, w[0], w[1], float(curve.envelope(s)), prov])
    return rows


def _cmd_facecurve(args) -> int:
    phi = _resolve_potential(args)
    if phi.m != 2:
        raise InvalidArgumentError("facecurve needs a potential with m = 2")
    exact = phi.mode == "exact" and args.mode != "float"
    alpha = _parse_alpha(args.alpha, exact)
    curve = face_entropy_curve(phi, alpha, n_samples=args.samples)
    scan = differentiability_scan(curve)
    e0f = tuple(float(x) for x in curve.e0)
    e1f = tuple(float(x) for x in curve.e1)
    kinks = []
    for s, jump in scan.kinks:
        near = min(curve.hull, key=lambda p: abs(p.s - s))
        kinks.append({"s": float(s), "slope_jump": float(jump),
                      "w": [a + s * (b - a) for a, b in zip(e0f, e1f)],
                      "component": near.comp})
    payload = {
        "direction": _vec(curve.direction),
        "beta": _num(curve.beta),
        "endpoints": [_vec(curve.e0), _vec(curve.e1)],
        "component_labels": [list(labels) for labels in curve.component_labels],
        "n_samples": curve.n_samples,
        "vmax": curve.vmax,
        "hull": [{"s": p.s, "h": p.h, "component": p.comp, "kind": p.kind}
                 for p in curve.hull],
        "kinks": kinks,
        "kink_threshold": scan.threshold,
        "kink_margin": scan.excluded_margin,
        "smooth": scan.smooth,
    }
    header = ["s", "w_x", "w_y", "h_envelope", "component_id_or_bridge"]
    rows = _curve_rows(curve, args.samples)
    payload["csv_header"] = header
    payload["rows"] = rows
    h = _input_hash("facecurve", args, phi, phi.sft,
                    {"alpha": [str(a) for a in alpha], "samples": args.samples})
    return _emit(args, "facecurve", h, payload, [], header, rows)


def _cmd_cohom(args) -> int:
    phi = _resolve_potential(args)
    if phi.m != 1:
        raise InvalidArgumentError("cohom takes scalar potentials")
    if args.psi is not None:
        psi_args = argparse.Namespace(potential=args.psi, shift=args.shift,
                                      k=None, mode=args.mode)
        psi = _resolve_potential(psi_args)
        if psi.sft != phi.sft:
            raise InvalidArgumentError("phi and psi live on different shifts")
    else:
        psi = PotentialLC.constant(phi.sft, 0, k=1,
                                   mode="float" if phi.mode == "float" else "exact")
    k = max(phi.k, psi.k)
    orbits = cached_elementary_orbits(phi.sft, k, enabled=not args.no_cache)
    report = cohomology_test(phi, psi, orbits=orbits)
    payload = {
        "cohomologous": report.cohomologous,
        "constant": _num(report.constant) if report.constant is not None else None,
        "tolerance_limited": report.tolerance_limited,
        "spread": float(report.spread),
        "witness": None if report.witness is None else {
            "low_orbit": _seg_str(orbits[report.witness[0]].segment),
            "high_orbit": _seg_str(orbits[report.witness[1]].segment),
        },
    }
    h = _input_hash("cohom", args, phi, phi.sft,
                    {"psi": json.loads(psi.to_json())})
    return _emit(args, "cohom", h, payload, [])


_HANDLERS = {
    "orbits": _cmd_orbits,
    "rotset": _cmd_rotset,
    "classify": _cmd_classify,
    "ztsweep": _cmd_ztsweep,
    "facecurve": _cmd_facecurve,
    "cohom": _cmd_cohom,
}


# -- parser ----------------------------------------------------------------

def _add_common(sp, with_potential: bool):
    sp.add_argument("--shift", help="builtin shift name or shift JSON file")
    sp.add_argument("--k", type=int, help="cylinder window")
    sp.add_argument("--mode", choices=("exact", "float"),
                    help="value arithmetic for file inputs (default: as stored)")
    sp.add_argument("--out", help="directory for result files")
    sp.add_argument("--no-cache", action="store_true",
                    help="skip the on-disk orbit cache")
    if with_potential:
        sp.add_argument("--potential", required=True,
                        help="builtin potential name or potential JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="thermoshift",
        description="Zero-temperature limits, rotation sets and boundary "
                    "entropy for locally constant potentials on subshifts "
                    "of finite type.",
        epilog=registry.builtin_summary(),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version",
                        version=f"thermoshift {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    sp = sub.add_parser("orbits", help="enumerate elementary periodic orbits")
    _add_common(sp, with_potential=False)

    sp = sub.add_parser("rotset", help="rotation-set polytope of a potential")
    _add_common(sp, with_potential=True)

    sp = sub.add_parser("classify", help="zero-temperature classification")
    _add_common(sp, with_potential=True)

    sp = sub.add_parser("ztsweep", help="finite-t sweep of component masses")
    _add_common(sp, with_potential=True)
    sp.add_argument("--tmax", type=float, default=2.0 ** 14,
                    help="largest inverse temperature (default 2^14)")
    sp.add_argument("--method", choices=("auto", "symmetry", "sweep"),
                    default="sweep", help="coefficient method (default sweep)")

    sp = sub.add_parser("facecurve", help="entropy envelope along a face")
    _add_common(sp, with_potential=True)
    sp.add_argument("--alpha", required=True, help="face direction, e.g. 0,-1")
    sp.add_argument("--samples", type=int, default=201,
                    help="dual grid size per component (default 201)")

    sp = sub.add_parser("cohom", help="cohomology test against a second "
                                      "potential (default: constant zero)")
    _add_common(sp, with_potential=True)
    sp.add_argument("--psi", help="second potential (builtin name or file)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    # required-flag checks that depend on the command
    if args.command == "orbits":
        if args.shift is None or args.k is None:
            parser.print_usage(sys.stderr)
            sys.stderr.write("thermoshift orbits: error: --shift and --k are required\n")
            return EXIT_USAGE
    try:
        return _HANDLERS[args.command](args)
    except UsageError as e:
        sys.stderr.write(f"thermoshift {args.command}: error: {e}\n")
        return EXIT_USAGE
    except (UnderflowError, NumericError) as e:
        sys.stderr.write(f"thermoshift {args.command}: numeric error: {e}\n")
        return EXIT_NUMERIC
    except (InvalidArgumentError, ResourceLimitError) as e:
        sys.stderr.write(f"thermoshift {args.command}: input error: {e}\n")
        return EXIT_INPUT
    except ThermoshiftError as e:
        sys.stderr.write(f"thermoshift {args.command}: input error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
