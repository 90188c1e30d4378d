"""CSV and JSON serialization for Cauchy data, indicator fields, and results.

File formats
------------
cauchy.csv
    One row per measurement point:
    x1..xN, nu1..nuN, weight, u_re, u_im, dnu_re, dnu_im,
    u_noisy_re, u_noisy_im, dnu_noisy_re, dnu_noisy_im.
    With zero noise the noisy columns repeat the clean ones.
indicator_<ell>.csv
    One row per grid point, in grid order (first axis fastest):
    z1..zN, abs, re, im.
reconstruction.csv
    One row per recovered group:
    group, components ('|'-separated), z1..zN (centroid), lambda_re,
    lambda_im, eta1_re, eta1_im, .., magnitude, kind.
run.json
    Parameters, seed, timings, thread count.  Timings vary run to run, so
    determinism guarantees cover the CSV files only.

Floats are written with shortest round-trip precision (repr), so a file
read back reproduces the in-memory values exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .forward import CauchyData
from .geometry import MeasurementSurface, SamplingGrid
from .indicators import IndicatorField
from .locator import Reconstruction

__all__ = [
    "write_cauchy_csv",
    "read_cauchy_csv",
    "write_indicator_csv",
    "read_indicator_csv",
    "write_reconstruction_csv",
    "read_reconstruction_csv",
    "write_run_json",
]


def _fmt(x: float) -> str:
    return repr(float(x))


def write_cauchy_csv(path, clean: CauchyData, noisy: CauchyData | None = None) -> None:
    noisy = noisy if noisy is not None else clean
    surf = clean.surface
    n = surf.dims
    header = (
        [f"x{i+1}" for i in range(n)]
        + [f"nu{i+1}" for i in range(n)]
        + ["weight", "u_re", "u_im", "dnu_re", "dnu_im",
           "u_noisy_re", "u_noisy_im", "dnu_noisy_re", "dnu_noisy_im"]
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(surf)):
            row = [_fmt(v) for v in surf.points[i]]
            row += [_fmt(v) for v in surf.normals[i]]
            row.append(_fmt(surf.weights[i]))
            for z in (clean.dirichlet[i], clean.neumann[i], noisy.dirichlet[i], noisy.neumann[i]):
                row += [_fmt(z.real), _fmt(z.imag)]
            writer.writerow(row)


def read_cauchy_csv(path, radius: float) -> tuple[CauchyData, CauchyData]:
    """Load (clean, noisy) Cauchy data written by write_cauchy_csv."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    dims = sum(1 for h in header if h.startswith("x"))
    data = np.array([[float(v) for v in row] for row in body])
    points = data[:, :dims]
    normals = data[:, dims : 2 * dims]
    weights = data[:, 2 * dims]
    c = 2 * dims + 1
    surf = MeasurementSurface(dims=dims, points=points, normals=normals, weights=weights, radius=radius)
    clean = CauchyData(
        surface=surf,
        dirichlet=data[:, c] + 1j * data[:, c + 1],
        neumann=data[:, c + 2] + 1j * data[:, c + 3],
    )
    noisy = CauchyData(
        surface=surf,
        dirichlet=data[:, c + 4] + 1j * data[:, c + 5],
        neumann=data[:, c + 6] + 1j * data[:, c + 7],
    )
    return clean, noisy


def write_indicator_csv(path, field: IndicatorField) -> None:
    n = field.grid.dims
    header = [f"z{i+1}" for i in range(n)] + ["abs", "re", "im"]
    points = field.grid.points
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(field.grid)):
            v = field.values[i]
            row = [_fmt(x) for x in points[i]] + [_fmt(abs(v)), _fmt(v.real), _fmt(v.imag)]
            writer.writerow(row)


def read_indicator_csv(path, grid: SamplingGrid, component: int) -> IndicatorField:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    body = rows[1:]
    n = grid.dims
    values = np.array([float(r[n + 1]) + 1j * float(r[n + 2]) for r in body])
    return IndicatorField(grid=grid, component=component, values=values)


def write_reconstruction_csv(path, recon: Reconstruction) -> None:
    dims = recon.groups[0].centroid.shape[0] if recon.groups else 0
    header = (
        ["group", "components"]
        + [f"z{i+1}" for i in range(dims)]
        + ["lambda_re", "lambda_im"]
        + [f"eta{i+1}_{p}" for i in range(dims) for p in ("re", "im")]
        + ["magnitude", "kind"]
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for gi, g in enumerate(recon.groups):
            row = [str(gi), "|".join(str(c) for c in g.components)]
            row += [_fmt(v) for v in g.centroid]
            lam = g.lambda_estimate if g.lambda_estimate is not None else 0j
            row += [_fmt(lam.real), _fmt(lam.imag)]
            eta = g.eta_estimate if g.eta_estimate is not None else np.zeros(dims, complex)
            for v in eta:
                row += [_fmt(v.real), _fmt(v.imag)]
            row.append(_fmt(max(p.magnitude for p in g.members)))
            row.append(g.kind or "")
            writer.writerow(row)


def read_reconstruction_csv(path) -> list[dict]:
    """Rows of the reconstruction table as dicts with parsed numerics."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        dims = sum(1 for key in r if key.startswith("z"))
        entry = {
            "group": int(r["group"]),
            "components": tuple(int(c) for c in r["components"].split("|") if c != ""),
            "centroid": np.array([float(r[f"z{i+1}"]) for i in range(dims)]),
            "lambda": complex(float(r["lambda_re"]), float(r["lambda_im"])),
            "eta": np.array(
                [complex(float(r[f"eta{i+1}_re"]), float(r[f"eta{i+1}_im"])) for i in range(dims)]
            ),
            "magnitude": float(r["magnitude"]),
            "kind": r["kind"],
        }
        out.append(entry)
    return out


def write_run_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
