"""Command-line front end.

Commands
--------
synthesize   evaluate the closed-form Cauchy data for a config and write
             cauchy.csv (+ meta.json)
reconstruct  run dsm or dsm2 on (possibly pre-synthesized) data and write
             indicator_<ell>.csv, reconstruction.csv, run.json
verify       run the built-in oracle suite (quick | full)
example      run one of the five built-in benchmark presets end to end and
             print a comparison table against the exact source locations

Exit codes: 0 success, 1 validation error, 2 runtime error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import _threads, io, verify
from .forward import add_noise, check_assumptions, synthesize_cauchy
from .indicators import IndicatorField, indicator_grid_values, reduced_data
from .locator import dsm, dsm2
from .presets import PRESETS, ConfigError, ExperimentConfig, exact_table, preset_config

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_VERIFICATION = 3


def _say(args, *message) -> None:
    if not args.quiet:
        print(*message)


def _load_config(args) -> ExperimentConfig:
    if getattr(args, "preset", None):
        cfg = preset_config(args.preset)
    elif args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        cfg = ExperimentConfig.from_json(path.read_text())
    else:
        raise ConfigError("either --config or --preset is required")
    if getattr(args, "seed", None) is not None:
        raw = cfg.to_dict()
        raw["noise"]["seed"] = args.seed
        cfg = ExperimentConfig.from_dict(raw)
    return cfg


def _out_dir(args, cfg: ExperimentConfig | None = None) -> Path:
    target = args.out or (cfg.output_dir if cfg is not None else None) or "out"
    out = Path(target)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _synthesize(cfg: ExperimentConfig, out: Path, args) -> tuple:
    ensemble = cfg.ensemble()
    report = check_assumptions(ensemble, cfg.wavenumber)
    for note in report.warnings:
        _say(args, note)
    t0 = time.perf_counter()
    clean = synthesize_cauchy(ensemble, cfg.wavenumber, cfg.surface())
    noisy = add_noise(clean, cfg.noise_spec())
    elapsed = time.perf_counter() - t0
    io.write_cauchy_csv(out / "cauchy.csv", clean, noisy)
    (out / "config.json").write_text(cfg.to_json())
    finite = lambda v: v if math.isfinite(v) else None
    io.write_run_json(
        out / "meta.json",
        {
            "points": len(clean.surface),
            "noise_level": cfg.noise_level,
            "seed": cfg.noise_seed,
            "min_separation": finite(report.min_separation),
            "separation_ratio": finite(report.separation_ratio),
            "warnings": list(report.warnings),
            "synthesize_seconds": elapsed,
        },
    )
    _say(args, f"wrote {out / 'cauchy.csv'} ({len(clean.surface)} points)")
    return clean, noisy


def cmd_synthesize(args) -> int:
    cfg = _load_config(args)
    out = _out_dir(args, cfg)
    _synthesize(cfg, out, args)
    return EXIT_OK


def _obtain_cauchy(cfg: ExperimentConfig, out: Path, args):
    path = out / "cauchy.csv"
    if path.exists():
        _say(args, f"reusing {path}")
        _, noisy = io.read_cauchy_csv(path, cfg.measurement_radius)
        return noisy
    _, noisy = _synthesize(cfg, out, args)
    return noisy


def _reconstruct(cfg: ExperimentConfig, algorithm: str, out: Path, args, tag: str = ""):
    noisy = _obtain_cauchy(cfg, out, args)
    k = cfg.wavenumber
    options = cfg.options()
    grid = cfg.dsm_grid() if algorithm == "dsm" else cfg.grid()
    if algorithm == "dsm":
        recon = dsm(noisy, k, grid, options)
    else:
        recon = dsm2(noisy, k, grid, cfg.fine_counts, options)

    # export the global-grid indicator fields used for peak collection
    comps = options.components if options.components is not None else tuple(range(cfg.dims + 1))
    red = reduced_data(noisy, k, options.directions)
    values = indicator_grid_values(red, k, grid, comps)
    for i, ell in enumerate(comps):
        fld = IndicatorField(grid=grid, component=ell, values=values[:, i])
        io.write_indicator_csv(out / f"indicator_{ell}{tag}.csv", fld)
    io.write_reconstruction_csv(out / f"reconstruction{tag}.csv", recon)
    io.write_run_json(
        out / f"run{tag}.json",
        {
            "parameters": recon.parameters,
            "seed": cfg.noise_seed,
            "estimated_count": recon.estimated_count,
            "elapsed_seconds": recon.elapsed_seconds,
            "threads": _threads.get_thread_count(),
        },
    )
    _say(
        args,
        f"{recon.algorithm}: {recon.estimated_count} source(s) in {recon.elapsed_seconds:.2f} s",
    )
    return recon


def cmd_reconstruct(args) -> int:
    cfg = _load_config(args)
    algorithm = args.algorithm or cfg.algorithm
    out = _out_dir(args, cfg)
    _reconstruct(cfg, algorithm, out, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    emit = (lambda *a, **k: None) if args.quiet else print
    ok = verify.run(args.level, emit=emit)
    return EXIT_OK if ok else EXIT_VERIFICATION


def _match_rows(exact_rows, recon):
    """Greedy nearest assignment of recovered groups to exact sources."""
    centroids = [g.centroid for g in recon.groups]
    taken = set()
    rows = []
    for entry in exact_rows:
        best, best_d = None, np.inf
        for gi, c in enumerate(centroids):
            if gi in taken:
                continue
            d = float(np.linalg.norm(c - entry["location"]))
            if d < best_d:
                best, best_d = gi, d
        if best is None:
            rows.append((entry, None, np.nan))
        else:
            taken.add(best)
            rows.append((entry, recon.groups[best], best_d))
    return rows


def _comparison_table(exact_rows, recon, args, label):
    lines = [f"-- {label}: recovered {recon.estimated_count} source(s) "
             f"in {recon.elapsed_seconds:.2f} s"]
    for entry, group, err in _match_rows(exact_rows, recon):
        exact = ", ".join(f"{v:+.4f}" for v in entry["location"])
        if group is None:
            lines.append(f"   {entry['kind']} {entry['label']}: ({exact})  -> MISSING")
            continue
        got = ", ".join(f"{v:+.4f}" for v in group.centroid)
        lines.append(
            f"   {entry['kind']} {entry['label']}: exact ({exact})  "
            f"recovered ({got})  |err| = {err:.4f}"
        )
    for line in lines:
        _say(args, line)
    return lines


def cmd_example(args) -> int:
    name = f"example{args.id}"
    if name not in PRESETS:
        raise ConfigError(f"unknown example id {args.id}")
    args.preset = name
    args.config = None
    cfg = _load_config(args)
    out = _out_dir(args, cfg)
    exact = exact_table(name)

    recon2 = _reconstruct(cfg, "dsm2", out, args)
    _comparison_table(exact, recon2, args, "DSM2")
    rows = _match_rows(exact, recon2)
    comparison = [
        {
            "algorithm": "dsm2",
            "label": e["label"],
            "kind": e["kind"],
            "exact": list(map(float, e["location"])),
            "recovered": None if g is None else list(map(float, g.centroid)),
            "error": None if g is None else err,
        }
        for e, g, err in rows
    ]
    payload = {
        "preset": name,
        "seed": cfg.noise_seed,
        "dsm2_seconds": recon2.elapsed_seconds,
        "comparison": comparison,
    }

    if args.id == 4:
        recon1 = _reconstruct(cfg, "dsm", out, args, tag="_dsm")
        _comparison_table(exact, recon1, args, "DSM")
        speedup = recon1.elapsed_seconds / max(recon2.elapsed_seconds, 1e-12)
        _say(args, f"-- DSM2 speedup over DSM: {speedup:.1f}x")
        payload["dsm_seconds"] = recon1.elapsed_seconds
        payload["speedup"] = speedup
        payload["comparison"] += [
            {
                "algorithm": "dsm",
                "label": e["label"],
                "kind": e["kind"],
                "exact": list(map(float, e["location"])),
                "recovered": None if g is None else list(map(float, g.centroid)),
                "error": None if g is None else err,
            }
            for e, g, err in _match_rows(exact, recon1)
        ]

    io.write_run_json(out / "comparison.json", payload)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heliodsm",
        description="Direct sampling localization of multipolar Helmholtz sources",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", help="experiment config (JSON)")
            p.add_argument("--preset", choices=PRESETS, help="built-in preset name")
            p.add_argument("--seed", type=int, help="override the noise seed")
        p.add_argument("--out", help="output directory (default: config output_dir or ./out)")
        p.add_argument("--threads", type=int, help="worker threads (env HELIO_DSM_THREADS)")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")

    p = sub.add_parser("synthesize", help="write closed-form Cauchy data")
    common(p)
    p.set_defaults(fn=cmd_synthesize)

    p = sub.add_parser("reconstruct", help="run dsm/dsm2 and export results")
    common(p)
    p.add_argument("--algorithm", choices=("dsm", "dsm2"), help="override config algorithm")
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("verify", help="run the oracle verification suite")
    p.add_argument("level", nargs="?", default="quick", choices=("quick", "full"))
    common(p, config=False)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("example", help="run a built-in benchmark preset end to end")
    p.add_argument("id", type=int, choices=(1, 2, 3, 4, 5))
    common(p, config=False)
    p.add_argument("--seed", type=int, help="override the preset noise seed")
    p.set_defaults(fn=cmd_example)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        try:
            _threads.set_thread_count(args.threads)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    finally:
        _threads.set_thread_count(None)


if __name__ == "__main__":
    sys.exit(main())
