"""Batch command-line front end.

Every subcommand reads its inputs from flags (IFS specs come from a JSON
file via --spec), prints a JSON result to stdout, and, when --out is given,
writes machine-readable files there along with a run manifest carrying the
parameter echo and sha256 digests of everything written.  Report-style
commands also render PNG figures next to the delimited output unless
--no-figures is passed.  Complex values are passed as two floats: RE IM.

Exit codes: 0 success, 2 validation error, 3 budget/resource error,
4 degenerate input, 64 usage.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
import warnings
from pathlib import Path

from . import __version__
from .algebra import IntPolynomial, is_complex_pisot, pisot_scan
from .config import stream
from .core import (
    Annulus,
    IFSSpec,
    RegionH,
    entropy,
    in_supercritical_region,
    load_spec,
    similarity_dimension,
    spec_to_dict,
)
from .ek import (
    EnumerationParams,
    calibrate_constants,
    ek_sequence,
    enumerate_covers,
    reconstruct_theta,
    reconstruct_u,
)
from .errors import BudgetError, DegenerateInputError, ValidationError
from .fourier import DecayParams, SeparationParams, ac_report, decay_exponent, ft_eval_many
from .measure import (
    PointCloud,
    cylinder_points,
    gasket_spec,
    rasterize,
    rotate_ifs,
    sample_measure,
    save_grid,
    save_points_csv,
)
from .separation import concentration_diagnostic, delta_n_brute, delta_n_pruned, overlap_roots

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_DEGENERATE = 4
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 64 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _complex_arg(pair) -> complex:
    return complex(float(pair[0]), float(pair[1]))


def _load_spec_arg(path: str) -> IFSSpec:
    try:
        return load_spec(path)
    except FileNotFoundError as exc:
        raise ValidationError("spec", f"spec file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError("spec", f"spec file is not valid JSON: {exc}") from exc


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _json_safe(value):
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    return value


def _param_echo(args: argparse.Namespace) -> dict:
    skip = {"func", "command"}
    return {k: _json_safe(v) for k, v in sorted(vars(args).items()) if k not in skip}


def _manifest(args, started: float, out_dir: Path | None, written: list[Path]) -> dict:
    outputs = []
    for path in sorted(written, key=lambda p: p.name):
        outputs.append({"path": path.name, "sha256": _sha256(path), "bytes": path.stat().st_size})
    return {
        "command": args.command,
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "parameters": _param_echo(args),
        "outputs": outputs,
        "duration_seconds": round(time.monotonic() - started, 6),
    }


def _finish(args, started: float, result: dict, out_dir: Path | None, written: list[Path]) -> int:
    """Print the result envelope and, with --out, write the manifest file."""
    manifest = _manifest(args, started, out_dir, written)
    if out_dir is not None:
        man_path = out_dir / "manifest.json"
        man_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        result = dict(result)
        result["out"] = str(out_dir)
        result["files"] = [o["path"] for o in manifest["outputs"]] + ["manifest.json"]
    else:
        result = dict(result)
        result["manifest"] = manifest
    json.dump(_json_safe(result), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK


def _out_dir(args) -> Path | None:
    if getattr(args, "out", None) is None:
        return None
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(_json_safe(payload), indent=2, sort_keys=True) + "\n")


def _fmt(value: float) -> str:
    return repr(float(value))


def _want(args, kind: str) -> bool:
    fmt = getattr(args, "format", "both")
    return fmt in (kind, "both")


def _figures_on(args) -> bool:
    return not getattr(args, "no_figures", False)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    started = time.monotonic()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec = _load_spec_arg(args.spec)
    notes = [str(w.message) for w in caught]
    result = {
        "spec": spec_to_dict(spec),
        "arity": spec.arity,
        "modulus": abs(spec.lam),
        "entropy": entropy(spec.weights),
        "similarity_dimension": similarity_dimension(spec.lam, spec.weights),
        "supercritical": in_supercritical_region(spec.lam),
        "attractor_radius": spec.attractor_radius(),
        "mean": spec.mean(),
        "warnings": notes,
    }
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        path = out / "validate.json"
        _write_json(path, result)
        written.append(path)
    return _finish(args, started, result, out, written)


def cmd_render(args) -> int:
    started = time.monotonic()
    spec = _load_spec_arg(args.spec)
    out = _out_dir(args)
    if out is None:
        raise ValidationError("out", "render writes files; pass --out DIR")
    if args.mode == "cylinders":
        pts = cylinder_points(spec, args.depth, budget=args.budget)
        tail = max(abs(a) for a in spec.translations) * abs(spec.lam) ** args.depth / (1.0 - abs(spec.lam))
        cloud = PointCloud(points=pts, seed=args.seed, truncation_n=args.depth, tail_radius=tail)
    else:
        cloud = sample_measure(spec, args.count, args.seed, tol=args.tol, threads=args.threads)
    bounds = tuple(args.bounds) if args.bounds else None
    grid = rasterize(cloud, bounds=bounds, nx=args.nx, ny=args.ny)
    written: list[Path] = []
    pgm = out / "density.pgm"
    sidecar = out / "density.json"
    save_grid(grid, pgm, sidecar)
    written += [pgm, sidecar]
    if args.points_csv:
        pts_path = out / "points.csv"
        save_points_csv(cloud, pts_path)
        written.append(pts_path)
    if _figures_on(args):
        from .figures import render_density

        written.append(render_density(grid, out / "density.png"))
    result = {
        "mode": args.mode,
        "points": cloud.count,
        "truncation_n": cloud.truncation_n,
        "tail_radius": cloud.tail_radius,
        "bounds": list(grid.bounds),
        "total_mass": grid.total_mass,
        "clipped_mass": grid.clipped_mass,
    }
    return _finish(args, started, result, out, written)


def cmd_fourier_eval(args) -> int:
    started = time.monotonic()
    spec = _load_spec_arg(args.spec)
    if not args.xi:
        raise ValidationError("xi", "pass at least one --xi RE IM")
    xis = sorted((_complex_arg(p) for p in args.xi), key=lambda z: (z.real, z.imag))
    samples = ft_eval_many(spec, xis, tol=args.tol)
    rows = [
        {
            "xi": s.xi,
            "value": s.value,
            "abs": abs(s.value),
            "truncation_n": s.truncation_n,
            "tail_error": s.tail_error,
        }
        for s in samples
    ]
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        if _want(args, "csv"):
            path = out / "ft_values.csv"
            _write_csv(
                path,
                ["xi_re", "xi_im", "value_re", "value_im", "abs", "truncation_n", "tail_error"],
                [
                    (
                        _fmt(s.xi.real),
                        _fmt(s.xi.imag),
                        _fmt(s.value.real),
                        _fmt(s.value.imag),
                        _fmt(abs(s.value)),
                        s.truncation_n,
                        _fmt(s.tail_error),
                    )
                    for s in samples
                ],
            )
            written.append(path)
        if _want(args, "json"):
            path = out / "ft_values.json"
            _write_json(path, rows)
            written.append(path)
    return _finish(args, started, {"values": rows}, out, written)


def cmd_decay(args) -> int:
    started = time.monotonic()
    spec = _load_spec_arg(args.spec)
    probes = [_complex_arg(p) for p in (args.probe_xi or [])]
    est = decay_exponent(
        spec,
        args.r_min,
        args.r_max,
        args.annuli,
        samples=args.samples,
        tol=args.tol,
        probe_xis=probes or None,
        threads=args.threads,
    )
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        if _want(args, "csv"):
            path = out / "decay.csv"
            _write_csv(
                path,
                ["R", "sup", "log_R", "log_sup"],
                [
                    (_fmt(r), _fmt(s), _fmt(math.log(r)), _fmt(math.log(max(s, 1e-300))))
                    for r, s in zip(est.r_values, est.sup_values)
                ],
            )
            written.append(path)
        if _want(args, "json"):
            path = out / "decay.json"
            _write_json(path, est.to_dict())
            written.append(path)
        if _figures_on(args):
            from .figures import render_decay

            written.append(render_decay(est, out / "decay.png"))
    return _finish(args, started, est.to_dict(), out, written)


def _delta_row(res) -> dict:
    return {
        "method": res.method,
        "n": res.n,
        "value": res.value,
        "argmin_diff": [ _json_safe(c) for c in res.argmin_diff],
        "nodes_expanded": res.nodes_expanded,
        "nodes_pruned": res.nodes_pruned,
        "nodes_merged": res.nodes_merged,
    }


def cmd_delta(args) -> int:
    started = time.monotonic()
    spec = _load_spec_arg(args.spec)
    results = []
    if args.mode in ("brute", "both"):
        results.append(delta_n_brute(spec, args.n, budget=args.budget))
    if args.mode in ("pruned", "both"):
        results.append(delta_n_pruned(spec, args.n, budget=args.budget))
    results.sort(key=lambda r: r.method)
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        if _want(args, "csv"):
            path = out / "delta.csv"
            _write_csv(
                path,
                ["method", "n", "value", "nodes_expanded", "nodes_pruned", "nodes_merged", "argmin_diff"],
                [
                    (
                        r.method,
                        r.n,
                        _fmt(r.value),
                        r.nodes_expanded,
                        r.nodes_pruned,
                        r.nodes_merged,
                        ";".join(f"{c.real} {c.imag}" for c in r.argmin_diff),
                    )
                    for r in results
                ],
            )
            written.append(path)
        if _want(args, "json"):
            path = out / "delta.json"
            _write_json(path, [_delta_row(r) for r in results])
            written.append(path)
    return _finish(args, started, {"results": [_delta_row(r) for r in results]}, out, written)


def cmd_concentration(args) -> int:
    started = time.monotonic()
    spec = _load_spec_arg(args.spec)
    report = concentration_diagnostic(
        spec,
        n_max=args.n_max,
        overlap_tol=args.overlap_tol,
        slope_threshold=args.slope_threshold,
        budget=args.budget,
    )
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        if _want(args, "csv"):
            path = out / "concentration.csv"
            _write_csv(
                path,
                ["n", "delta", "log_delta_over_n"],
                [
                    (n, _fmt(delta), ("-inf" if math.isinf(y) else _fmt(y)))
                    for n, delta, y in report.records
                ],
            )
            written.append(path)
        if _want(args, "json"):
            path = out / "concentration.json"
            _write_json(path, report.to_dict())
            written.append(path)
        if _figures_on(args):
            from .figures import render_concentration

            written.append(render_concentration(report, out / "concentration.png"))
    return _finish(args, started, report.to_dict(), out, written)


def cmd_overlap(args) -> int:
    started = time.monotonic()
    spec = _load_spec_arg(args.spec)
    annulus = Annulus(inner=args.inner, outer=args.outer, side="lambda")
    roots = overlap_roots(spec, args.max_degree, annulus, budget=args.budget)
    rows = [
        {
            "root": r.root,
            "modulus": abs(r.root),
            "coeffs": [_json_safe(c) for c in r.coeffs],
            "residual": r.residual,
        }
        for r in roots
    ]
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        if _want(args, "csv"):
            path = out / "overlap_roots.csv"
            _write_csv(
                path,
                ["re", "im", "poly_coeffs", "residual"],
                [
                    (
                        _fmt(r.root.real),
                        _fmt(r.root.imag),
                        ";".join(f"{c.real} {c.imag}" for c in r.coeffs),
                        _fmt(r.residual),
                    )
                    for r in roots
                ],
            )
            written.append(path)
        if _want(args, "json"):
            path = out / "overlap_roots.json"
            _write_json(path, rows)
            written.append(path)
    return _finish(args, started, {"roots": rows, "count": len(rows)}, out, written)


def cmd_ek_seq(args) -> int:
    started = time.monotonic()
    seq = ek_sequence(_complex_arg(args.theta), _complex_arg(args.t), args.n, wide=args.wide)
    result = {
        "theta": seq.theta,
        "t": seq.t,
        "K": list(seq.K),
        "eps": list(seq.eps),
        "Y": list(seq.Y),
    }
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        if _want(args, "csv"):
            path = out / "ek_seq.csv"
            _write_csv(
                path,
                ["n", "K", "eps", "Y"],
                [
                    (i + 1, seq.K[i], _fmt(seq.eps[i]), _fmt(seq.Y[i]))
                    for i in range(seq.N)
                ],
            )
            written.append(path)
        if _want(args, "json"):
            path = out / "ek_seq.json"
            _write_json(path, result)
            written.append(path)
    return _finish(args, started, result, out, written)


def cmd_ek_reconstruct(args) -> int:
    started = time.monotonic()
    x0, x1, x2, x3 = (float(v) for v in args.window)
    theta, y3 = reconstruct_theta(x0, x1, x2, x3)
    result = {"theta": theta, "theta_modulus": abs(theta), "y3": y3}
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        path = out / "reconstruct.json"
        _write_json(path, result)
        written.append(path)
    return _finish(args, started, result, out, written)


def cmd_ek_cover(args) -> int:
    started = time.monotonic()
    region = RegionH(b1=args.b1, b2=args.b2, eta=args.eta)
    rho, m_branch, c4 = args.rho, args.m_branch, args.c4
    calibration = None
    if rho is None or m_branch is None or c4 is None:
        calibration = calibrate_constants(
            region, n_sequences=args.cal_sequences, n_max=args.cal_depth, seed=args.seed
        )
        rho = rho if rho is not None else calibration.rho
        m_branch = m_branch if m_branch is not None else calibration.M
        c4 = c4 if c4 is not None else calibration.c4_hat
    params = EnumerationParams(
        region=region,
        N=args.n,
        delta=args.delta,
        rho=rho,
        M=m_branch,
        seed_grid=args.seed_grid,
        c4_hat=c4,
        budget=args.budget,
    )
    cover = enumerate_covers(params)
    result = cover.metadata()
    if calibration is not None:
        result["calibration"] = {
            "c4_hat": calibration.c4_hat,
            "c5_hat": calibration.c5_hat,
            "rho": calibration.rho,
            "M": calibration.M,
            "n_sequences": calibration.n_sequences,
            "seed": calibration.seed,
        }
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        if _want(args, "csv"):
            path = out / "cover.csv"
            _write_csv(
                path,
                ["re", "im", "radius", "N"],
                [
                    (_fmt(b.center.real), _fmt(b.center.imag), _fmt(b.radius), b.N)
                    for b in cover.balls
                ],
            )
            written.append(path)
        if _want(args, "json"):
            path = out / "cover_meta.json"
            _write_json(path, result)
            written.append(path)
        if _figures_on(args):
            from .figures import render_cover

            written.append(render_cover(cover, out / "cover.png"))
    return _finish(args, started, result, out, written)


def cmd_ek_u(args) -> int:
    started = time.monotonic()
    ball = reconstruct_u(
        (args.k_pair[0], args.k_pair[1]),
        (args.l_pair[0], args.l_pair[1]),
        _complex_arg(args.lam),
        args.n,
        c2_hat=args.c2,
    )
    result = {"center": ball.center, "radius": ball.radius, "n": ball.N, "source_K": list(ball.source_K)}
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        path = out / "reconstruct_u.json"
        _write_json(path, result)
        written.append(path)
    return _finish(args, started, result, out, written)


def cmd_pisot_check(args) -> int:
    started = time.monotonic()
    report = is_complex_pisot(IntPolynomial(tuple(args.coeffs)), factor_budget=args.factor_budget)
    result = report.to_dict()
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        path = out / "pisot_check.json"
        _write_json(path, result)
        written.append(path)
    return _finish(args, started, result, out, written)


def cmd_pisot_scan(args) -> int:
    started = time.monotonic()
    annulus = Annulus(inner=args.inner, outer=args.outer, side="theta")

    def progress(record: dict) -> None:
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")

    scan = pisot_scan(
        args.max_degree,
        args.coeff_bound,
        annulus,
        budget=args.budget,
        progress=progress if not args.quiet else None,
    )
    rows = [rep.to_dict() for rep in scan.reports]
    result = {"reports": rows, "scanned": scan.scanned, "truncated": scan.truncated}
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        if _want(args, "csv"):
            path = out / "pisot_scan.csv"
            _write_csv(
                path,
                ["re", "im", "modulus", "degree", "coeffs"],
                [
                    (
                        _fmt(rep.theta.real),
                        _fmt(rep.theta.imag),
                        _fmt(rep.theta_modulus),
                        rep.poly.degree,
                        ";".join(str(c) for c in rep.poly.coeffs),
                    )
                    for rep in scan.reports
                ],
            )
            written.append(path)
        if _want(args, "json"):
            path = out / "pisot_scan.json"
            _write_json(path, result)
            written.append(path)
    return _finish(args, started, result, out, written)


def cmd_ac_report(args) -> int:
    started = time.monotonic()
    spec = _load_spec_arg(args.spec)
    report = ac_report(
        spec,
        args.k,
        decay_params=DecayParams(
            r_min=args.r_min, r_max=args.r_max, n_annuli=args.annuli, samples=args.samples, tol=args.tol
        ),
        separation_params=SeparationParams(n_max=args.n_max, overlap_tol=args.overlap_tol),
        threads=args.threads,
    )
    result = report.to_dict()
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        path = out / "ac_report.json"
        _write_json(path, result)
        written.append(path)
        if _figures_on(args):
            from .figures import render_concentration, render_decay

            written.append(render_decay(report.decay, out / "decay.png"))
            written.append(render_concentration(report.concentration, out / "concentration.png"))
    return _finish(args, started, result, out, written)


def cmd_gasket(args) -> int:
    started = time.monotonic()
    base = gasket_spec(args.lam)
    sixth = rotate_ifs(base, complex(math.cos(math.pi / 3.0), math.sin(math.pi / 3.0)))
    third = rotate_ifs(base, complex(math.cos(2.0 * math.pi / 3.0), math.sin(2.0 * math.pi / 3.0)))
    rng = stream(args.seed, 0)
    radii = rng.uniform(0.5, 8.0, args.probes)
    angles = rng.uniform(0.0, 2.0 * math.pi, args.probes)
    xis = sorted(
        (complex(r * math.cos(a), r * math.sin(a)) for r, a in zip(radii, angles)),
        key=lambda z: (z.real, z.imag),
    )
    vals_base = ft_eval_many(base, xis, tol=args.tol)
    vals_sixth = ft_eval_many(sixth, xis, tol=args.tol)
    vals_third = ft_eval_many(third, xis, tol=args.tol)
    rows = []
    gap_mod = 0.0
    gap_third = 0.0
    tail_max = 0.0
    for b, s, t in zip(vals_base, vals_sixth, vals_third):
        dm = abs(abs(b.value) - abs(s.value))
        dt = abs(b.value - t.value)
        gap_mod = max(gap_mod, dm)
        gap_third = max(gap_third, dt)
        tail_max = max(tail_max, b.tail_error + s.tail_error, b.tail_error + t.tail_error)
        rows.append(
            {
                "xi": b.xi,
                "value": b.value,
                "value_sixth_rotation": s.value,
                "value_third_rotation": t.value,
                "modulus_gap_sixth": dm,
                "complex_gap_third": dt,
            }
        )
    result = {
        "lam": args.lam,
        "probes": len(xis),
        "max_modulus_gap_sixth_rotation": gap_mod,
        "max_complex_gap_third_rotation": gap_third,
        "max_combined_tail_error": tail_max,
        "rows": rows,
    }
    out = _out_dir(args)
    written: list[Path] = []
    if out is not None:
        if _want(args, "csv"):
            path = out / "gasket.csv"
            _write_csv(
                path,
                [
                    "xi_re",
                    "xi_im",
                    "abs_base",
                    "abs_sixth",
                    "modulus_gap_sixth",
                    "complex_gap_third",
                ],
                [
                    (
                        _fmt(r["xi"].real),
                        _fmt(r["xi"].imag),
                        _fmt(abs(r["value"])),
                        _fmt(abs(r["value_sixth_rotation"])),
                        _fmt(r["modulus_gap_sixth"]),
                        _fmt(r["complex_gap_third"]),
                    )
                    for r in rows
                ],
            )
            written.append(path)
        if _want(args, "json"):
            path = out / "gasket.json"
            _write_json(path, result)
            written.append(path)
        if args.render:
            cloud = sample_measure(base, args.count, args.seed, tol=args.tol, threads=args.threads)
            grid = rasterize(cloud, nx=args.nx, ny=args.ny)
            pgm = out / "density.pgm"
            sidecar = out / "density.json"
            save_grid(grid, pgm, sidecar)
            written += [pgm, sidecar]
            if _figures_on(args):
                from .figures import render_density

                written.append(render_density(grid, out / "density.png"))
    return _finish(args, started, result, out, written)


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, spec: bool = False) -> None:
    if spec:
        p.add_argument("--spec", required=True, help="IFS spec JSON file")
    p.add_argument("--out", help="output directory (created if missing)")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed")
    p.add_argument("--tol", type=float, default=1e-9, help="truncation tolerance")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker thread cap")
    p.add_argument("--format", choices=("json", "csv", "both"), default="both", help="delimited output style")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.add_argument("--budget", type=int, default=None, help="node budget override (also FRACTALCONV_BUDGET)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fractalconv", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check an IFS spec and report derived quantities")
    _add_common(p, spec=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="sample the measure and write a density raster")
    _add_common(p, spec=True)
    p.add_argument("--count", type=int, default=200_000, help="sample count")
    p.add_argument("--nx", type=int, default=512)
    p.add_argument("--ny", type=int, default=512)
    p.add_argument("--bounds", type=float, nargs=4, metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    p.add_argument("--mode", choices=("sample", "cylinders"), default="sample")
    p.add_argument("--depth", type=int, default=10, help="cylinder depth for --mode cylinders")
    p.add_argument("--points-csv", action="store_true", help="also write the raw points")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("fourier-eval", help="evaluate the measure transform at frequencies")
    _add_common(p, spec=True)
    p.add_argument("--xi", nargs=2, action="append", metavar=("RE", "IM"), help="frequency (repeatable)")
    p.set_defaults(func=cmd_fourier_eval)

    p = sub.add_parser("decay", help="fit a power-decay exponent over annulus suprema")
    _add_common(p, spec=True)
    p.add_argument("--r-min", type=float, default=4.0)
    p.add_argument("--r-max", type=float, default=256.0)
    p.add_argument("--annuli", type=int, default=8)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--probe-xi", nargs=2, action="append", metavar=("RE", "IM"))
    p.set_defaults(func=cmd_decay, tol=1e-8)

    p = sub.add_parser("delta", help="exact level-n cylinder separation")
    _add_common(p, spec=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("pruned", "brute", "both"), default="pruned")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("concentration", help="separation decay diagnostic over n = 1..n_max")
    _add_common(p, spec=True)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--overlap-tol", type=float, default=None)
    p.add_argument("--slope-threshold", type=float, default=-0.15)
    p.set_defaults(func=cmd_concentration)

    p = sub.add_parser("overlap", help="difference-polynomial roots inside an annulus")
    _add_common(p, spec=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--inner", type=float, default=2.0 ** -0.5)
    p.add_argument("--outer", type=float, default=0.9999)
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("ek-seq", help="forward integer shadow sequence of (theta, t)")
    _add_common(p)
    p.add_argument("--theta", nargs=2, required=True, metavar=("RE", "IM"))
    p.add_argument("--t", nargs=2, required=True, metavar=("RE", "IM"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--wide", action="store_true", help="arbitrary-precision mode for deep sequences")
    p.set_defaults(func=cmd_ek_seq)

    p = sub.add_parser("ek-reconstruct", help="invert four consecutive real parts")
    _add_common(p)
    p.add_argument("--window", nargs=4, required=True, metavar=("X0", "X1", "X2", "X3"))
    p.set_defaults(func=cmd_ek_reconstruct)

    p = sub.add_parser("ek-cover", help="enumerate candidate-expansion cover balls")
    _add_common(p)
    p.add_argument("--b1", type=float, required=True)
    p.add_argument("--b2", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--n", type=int, required=True, help="sequence depth N")
    p.add_argument("--delta", type=float, required=True, help="branch-token fraction")
    p.add_argument("--rho", type=float, default=None, help="prediction threshold (default: calibrate)")
    p.add_argument("--m-branch", type=int, default=None, help="branch width (default: calibrate)")
    p.add_argument("--c4", type=float, default=None, help="ball radius constant (default: calibrate)")
    p.add_argument("--seed-grid", type=int, default=12)
    p.add_argument("--cal-sequences", type=int, default=10_000)
    p.add_argument("--cal-depth", type=int, default=40)
    p.set_defaults(func=cmd_ek_cover)

    p = sub.add_parser("ek-u", help="translation-parameter ball from joint integer windows")
    _add_common(p)
    p.add_argument("--lam", nargs=2, required=True, metavar=("RE", "IM"))
    p.add_argument("--k-pair", nargs=2, type=int, required=True, metavar=("KN", "KN1"))
    p.add_argument("--l-pair", nargs=2, type=int, required=True, metavar=("LN", "LN1"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c2", type=float, default=10.0)
    p.set_defaults(func=cmd_ek_u)

    p = sub.add_parser("pisot-check", help="classify a monic integer polynomial")
    _add_common(p)
    p.add_argument("--coeffs", nargs="+", type=int, required=True, help="ascending coefficients c0 c1 ... 1")
    p.add_argument("--factor-budget", type=int, default=200_000)
    p.set_defaults(func=cmd_pisot_check)

    p = sub.add_parser("pisot-scan", help="scan for complex-pisot expansions in an annulus")
    _add_common(p)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--coeff-bound", type=int, required=True)
    p.add_argument("--inner", type=float, default=1.0 + 1e-9)
    p.add_argument("--outer", type=float, default=math.sqrt(2.0))
    p.add_argument("--quiet", action="store_true", help="suppress per-degree progress records")
    p.set_defaults(func=cmd_pisot_scan)

    p = sub.add_parser("ac-report", help="combined absolute-continuity diagnostic")
    _add_common(p, spec=True)
    p.add_argument("--k", type=int, default=3, help="decimation order (>= 3)")
    p.add_argument("--r-min", type=float, default=4.0)
    p.add_argument("--r-max", type=float, default=256.0)
    p.add_argument("--annuli", type=int, default=8)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--overlap-tol", type=float, default=None)
    p.set_defaults(func=cmd_ac_report, tol=1e-8)

    p = sub.add_parser("gasket", help="three-map triangle measure and its rotation symmetry")
    _add_common(p)
    p.add_argument("--lam", type=float, required=True, help="real contraction ratio in (0, 1)")
    p.add_argument("--probes", type=int, default=20)
    p.add_argument("--render", action="store_true", help="also write a density raster")
    p.add_argument("--count", type=int, default=200_000)
    p.add_argument("--nx", type=int, default=512)
    p.add_argument("--ny", type=int, default=512)
    p.set_defaults(func=cmd_gasket)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        sys.stderr.write(f"validation error: {exc}\n")
        return EXIT_VALIDATION
    except BudgetError as exc:
        sys.stderr.write(f"budget error: {exc}\n")
        return EXIT_BUDGET
    except DegenerateInputError as exc:
        sys.stderr.write(f"degenerate input: {exc}\n")
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
