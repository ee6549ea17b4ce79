"""Command-line front end.

Subcommands: describe, census, spectrum, solve, zeta, casimir.  Results
are deterministic: JSON keys are sorted, floats are printed with 17
significant digits, and identical invocations produce byte-identical
output.  Exit codes: 0 success, 2 invalid configuration, 3 solver
failure.
"""

from __future__ import annotations

import argparse
import sys

from . import (
    ConvergenceError,
    JSequence,
    MERGED,
    PER_FAMILY,
    PlateConfig,
    Potential,
    PoleError,
    SequenceTooShort,
    SpectrumQuery,
    build_graph,
    casimir_force,
    census_closed_form,
    cluster,
    column_boundaries,
    discretize,
    eigenfunction_trace,
    free_spectrum,
    hausdorff_dimension,
    interior_shape_counts,
    level_products,
    plate_zeta_energy,
    plates_spectrum,
    shape_census,
    solve_lowest,
    spectral_dimension,
    spectral_zeta_periodic,
    square_well_spectrum,
    well_geometry,
    zeta_limit_half,
    zeta_poles,
)
from .graphs import GraphBuildError
from .plates import PlateConfigError
from .solver import MeshError


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# deterministic serialization

def _fmt(x) -> str:
    return format(float(x), ".17g")


def render_json(obj, indent: int = 0) -> str:
    """Minimal JSON emitter: sorted keys, floats at 17 significant digits."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {render_json(obj[k], indent + 1)}' for k in sorted(obj)
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{pad}  {render_json(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    raise TypeError(f"cannot serialize {type(obj)}")


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _lines_to_csv(lines) -> str:
    rows = ["lambda,multiplicity,sources"]
    for line in lines:
        srcs = ";".join(f"{s.family}:{s.n}:{s.k}" for s in line.sources)
        rows.append(f"{_fmt(line.lam)},{line.multiplicity},{srcs}")
    return "\n".join(rows) + "\n"


def parse_lines_csv(text: str):
    """Parse the spectrum CSV back into (lambda, multiplicity, sources) rows."""
    out = []
    rows = text.strip().splitlines()
    if rows and rows[0] == "lambda,multiplicity,sources":
        rows = rows[1:]
    for row in rows:
        lam, mult, srcs = row.split(",", 2)
        sources = []
        for item in srcs.split(";"):
            if item:
                family, n, k = item.rsplit(":", 2)
                sources.append((family, int(n), int(k)))
        out.append((float(lam), int(mult), sources))
    return out


# ---------------------------------------------------------------------------
# argument handling

def _sequence(args) -> JSequence:
    try:
        values = tuple(int(v) for v in args.j.split(","))
    except ValueError:
        raise UsageError(f"cannot parse subdivision sequence {args.j!r}")
    return JSequence(values, periodic=args.periodic)


def _plate_config(args) -> PlateConfig:
    if args.plates is None:
        raise UsageError("this command needs --plates N,Z,X0")
    parts = args.plates.split(",")
    if len(parts) != 3:
        raise UsageError("--plates takes N,Z,X0")
    return PlateConfig(int(parts[0]), int(parts[1]), float(parts[2]),
                       hbar=getattr(args, "hbar", 1.0))


def _add_common(p):
    p.add_argument("--output", "-o", default="-", help="output path ('-' = stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _add_sequence(p):
    p.add_argument("--j", required=True, help="comma list of subdivision counts")
    p.add_argument("--periodic", action="store_true",
                   help="repeat the list forever instead of treating it as a prefix")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="laakso",
        description="Spectra, zeta functions, and Casimir energies on Laakso spaces",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="dimensions and basic data of a space")
    _add_sequence(p)
    p.add_argument("--level", type=int, default=None,
                   help="level for finite-level estimates (explicit sequences)")
    _add_common(p)

    p = sub.add_parser("census", help="shape counts, closed form vs brute force")
    _add_sequence(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--region", choices=("well", "plates"), default=None)
    p.add_argument("--plates", default=None, help="N,Z,X0 (region=plates)")
    _add_common(p)

    p = sub.add_parser("spectrum", help="closed-form eigenvalue lines")
    p.add_argument("--kind", choices=("free", "square-well", "plates"), required=True)
    p.add_argument("--j", default=None, help="comma list of subdivision counts")
    p.add_argument("--periodic", action="store_true")
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--policy", choices=(MERGED, PER_FAMILY), default=MERGED)
    p.add_argument("--plates", default=None, help="N,Z,X0 (kind=plates)")
    _add_common(p)

    p = sub.add_parser("solve", help="numeric eigensolve on a quantum graph")
    _add_sequence(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--potential", default="free",
                   choices=("free", "square_well", "coulomb", "parabolic"))
    p.add_argument("--cutoff", type=float, default=1e15)
    p.add_argument("--mesh", type=int, default=None,
                   help="interior points per edge (default: 8 per cell rule)")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--cluster-tol", type=float, default=1e-2)
    p.add_argument("--plates", default=None, help="N,Z,X0 for a plate graph")
    p.add_argument("--trace", type=int, default=None,
                   help="emit the eigenfunction trace of this index instead")
    _add_common(p)

    p = sub.add_parser("zeta", help="spectral zeta function of a periodic space")
    _add_sequence(p)
    p.add_argument("--s", required=True, help="argument, 're' or 're,im'")
    _add_common(p)

    p = sub.add_parser("casimir", help="regularized plate energy and force")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--Z", type=int, required=True)
    p.add_argument("--X0", type=float, required=True)
    p.add_argument("--hbar", type=float, default=1.0)
    _add_common(p)
    return ap


# ---------------------------------------------------------------------------
# commands

def _cmd_describe(args):
    seq = _sequence(args)
    n = args.level if args.level is not None else (seq.period or len(seq.values))
    out = {
        "sequence": seq.describe(),
        "level_products": level_products(seq, n),
        "hausdorff_dimension": hausdorff_dimension(
            seq, None if seq.periodic else n),
    }
    if seq.periodic:
        out["spectral_dimension"] = spectral_dimension(seq)
        out["poles_m0"] = [[p.real, p.imag] for p in zeta_poles(seq, (0,))]
    if n >= 1:
        geom = well_geometry(seq, n)
        out["well_geometry"] = {
            "level": n,
            "w": [geom.w.numerator, geom.w.denominator],
            "d": [geom.d.numerator, geom.d.denominator],
            "wall_on_node": geom.wall_on_node,
        }
    return out


def _cmd_census(args):
    seq = _sequence(args)
    n = args.level
    plates = _plate_config(args) if args.region == "plates" else None
    graph = build_graph(seq, n, plates=plates)
    brute = shape_census(graph, region=args.region)
    vees, loops, crosses = census_closed_form(seq, n)
    out = {
        "level": n,
        "cells": graph.num_cells,
        "closed_form": {"vees": vees, "loops": loops, "crosses": crosses},
        "brute_force": {"vees": brute.vees, "loops": brute.loops,
                        "crosses": brute.crosses},
        "match": (vees, loops, crosses) == (brute.vees, brute.loops, brute.crosses),
    }
    if args.region is not None:
        out["region"] = args.region
        out["split"] = {
            kind: {"interior": s.interior, "exterior": s.exterior,
                   "straddling": s.straddling}
            for kind, s in brute.split.items()
        }
        out["half_crosses_interior"] = brute.half_crosses_interior
        if args.region == "well":
            full, half, loops_in = interior_shape_counts(seq, n)
            out["interior_closed_form"] = {
                "full_crosses": full, "half_crosses": half, "loops": loops_in}
    out["column_boundaries"] = [
        {"kind": kind, "m": m, "a": a, "b": b}
        for kind, m, (a, b) in column_boundaries(seq, n)
    ] if n >= 1 else []
    return out


def _cmd_spectrum(args):
    query = SpectrumQuery(args.lambda_max, args.policy)
    if args.kind == "plates":
        lines = plates_spectrum(_plate_config(args), query)
    else:
        if args.j is None:
            raise UsageError("--j is required for free and square-well spectra")
        seq = _sequence(args)
        gen = free_spectrum if args.kind == "free" else square_well_spectrum
        lines = gen(seq, query)
    if args.format == "csv":
        return _lines_to_csv(lines)
    return {"kind": args.kind, "lambda_max": args.lambda_max,
            "policy": args.policy, "lines": [line.as_dict() for line in lines]}


# h = (1/I_n)/(M+1) <= 1/(8 I_n) needs M >= 7: at least 8 segments per cell
DEFAULT_MESH = 7


def _cmd_solve(args):
    seq = _sequence(args)
    plates = _plate_config(args) if args.plates else None
    graph = build_graph(seq, args.level, plates=plates)
    mesh = args.mesh if args.mesh is not None else DEFAULT_MESH
    potential = Potential(args.potential, cutoff=args.cutoff)
    op = discretize(graph, mesh, potential)
    result = solve_lowest(op, args.count)
    if args.trace is not None:
        trace = eigenfunction_trace(op, result, args.trace)
        if args.format == "csv":
            rows = ["x,row,value"]
            rows += [f"{_fmt(x)},{row},{_fmt(val)}" for x, row, val in trace]
            return "\n".join(rows) + "\n"
        return {"eigenvalue": float(result.eigenvalues[args.trace]),
                "trace": [{"x": x, "row": row, "value": val}
                          for x, row, val in trace]}
    clusters = cluster(result, args.cluster_tol)
    return {
        "dim": op.dimension,
        "mesh": mesh,
        "potential": args.potential,
        "eigenvalues": [float(v) for v in result.eigenvalues],
        "clusters": [{"mean": m, "count": c} for m, c in clusters],
        "residual_max": float(result.residuals.max()),
        "mode": result.info["mode"],
    }


def _cmd_zeta(args):
    seq = _sequence(args)
    parts = args.s.split(",")
    s = complex(float(parts[0]), float(parts[1]) if len(parts) > 1 else 0.0)
    if s == 0.5:
        value = complex(zeta_limit_half(seq))
        mode = "limit"
    else:
        zv = spectral_zeta_periodic(seq, s)
        value, mode = zv.value, zv.mode
    return {"s": [s.real, s.imag], "value": [value.real, value.imag], "mode": mode}


def _cmd_casimir(args):
    cfg = PlateConfig(args.N, args.Z, args.X0, hbar=args.hbar)
    energy = plate_zeta_energy(cfg)
    force = casimir_force(cfg)
    return {
        "N": cfg.N, "Z": cfg.Z, "X0": cfg.x0, "hbar": cfg.hbar,
        "energy": {"a": energy.a, "b": energy.b, "total": energy.total},
        "force": force.force,
        "oracle_force": force.oracle_force,
        "agreement": force.agreement,
        "consistent": force.consistent,
    }


_COMMANDS = {
    "describe": _cmd_describe,
    "census": _cmd_census,
    "spectrum": _cmd_spectrum,
    "solve": _cmd_solve,
    "zeta": _cmd_zeta,
    "casimir": _cmd_casimir,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = _COMMANDS[args.command](args)
    except (UsageError, ValueError, PlateConfigError, GraphBuildError,
            SequenceTooShort, MeshError, PoleError) as exc:
        sys.stderr.write(render_json({"error": str(exc), "exit": 2}) + "\n")
        return 2
    except ConvergenceError as exc:
        sys.stderr.write(render_json({"error": str(exc), "exit": 3}) + "\n")
        return 3
    text = out if isinstance(out, str) else render_json(out)
    _write(text, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
