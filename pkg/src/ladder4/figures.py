"""Figure recipes: fixed parameters, sweeps, and feature summaries.

A recipe lists one or more curves, each a :class:`~ladder4.sweep.SweepSpec`.
:func:`reproduce_figure` runs every curve, writes one CSV per curve, then
reads the CSVs back and extracts features (peak counts, extremum locations,
widths) into ``summary.json`` together with pass/fail checks of the
qualitative behaviour each figure is meant to show.  Ranges marked
``reconstructed`` are not stated with the figure and were chosen to cover the
features of interest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .lineshape import AbsorptionProfile, find_peaks
from .model import SystemParams
from .sweep import SweepSpec, SweepTable, read_sweep_csv, run_sweep, write_sweep_csv

FIGURE_IDS = tuple(range(2, 13))

DELTA_RANGE = (-60.0, 60.0, 0.05)
DELTA3_RANGE = (-60.0, 60.0, 0.02)
OMEGA_RANGE = (0.0, 40.0, 0.5)
OMEGA_STEP = OMEGA_RANGE[2]

#: Rabi frequency above which the drive dominates every decay and the middle
#: coupling; the resonance extremum at omega1 = omega3 is only claimed there
STRONG_DRIVE_MIN = 12.0

SUBNATURAL_LIMIT = 6.0  # gamma2 at the default decays


@dataclass(frozen=True)
class Curve:
    name: str
    spec: SweepSpec
    label: str


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: int
    description: str
    curves: tuple[Curve, ...]
    reconstructed: tuple[str, ...] = ()


def _spec(base, vary, ranges, observable) -> SweepSpec:
    if isinstance(vary, str):
        vary, ranges = (vary,), (ranges,)
    return SweepSpec(base, tuple(vary), tuple(ranges), observable, "exact")


def _figure2() -> FigureRecipe:
    cases = {
        "a": SystemParams(omega1=20.0),
        "b": SystemParams(omega1=20.0, omega2=2.0),
        "c": SystemParams(omega1=20.0, omega2=2.0, omega3=20.0),
    }
    curves = tuple(
        Curve(k, _spec(p, "delta1", DELTA_RANGE, "im_rho21"), f"omega={p.omegas}")
        for k, p in cases.items()
    )
    return FigureRecipe(2, "ground-state absorption versus delta1 as fields are added", curves, ("delta1",))


def _population_map(fig: int, observable: str) -> FigureRecipe:
    base = SystemParams(omega2=2.0)
    spec = _spec(base, ("omega1", "omega3"), (OMEGA_RANGE, OMEGA_RANGE), observable)
    return FigureRecipe(
        fig,
        f"{observable} over the (omega1, omega3) plane at omega2 = 2",
        (Curve("map", spec, "omega2=2"),),
        ("omega1", "omega3"),
    )


def _population_cuts(fig: int, observable: str) -> FigureRecipe:
    cases = {
        "a": (SystemParams(omega1=20.0, omega2=2.0), "omega3"),
        "b": (SystemParams(omega2=2.0, omega3=20.0), "omega1"),
        "c": (SystemParams(omega1=20.0, omega2=8.0), "omega3"),
        "d": (SystemParams(omega2=8.0, omega3=20.0), "omega1"),
    }
    curves = tuple(
        Curve(k, _spec(p, var, OMEGA_RANGE, observable), f"omega2={p.omega2:g}, vary {var}")
        for k, (p, var) in cases.items()
    )
    return FigureRecipe(
        fig, f"{observable} along cuts through omega1 = omega3 = 20", curves, ("omega",)
    )


def _figure9() -> FigureRecipe:
    cases = {"a": SystemParams(20.0, 2.0, 20.0), "b": SystemParams(4.0, 20.0, 4.0)}
    panels = {
        "A": ("im_rho21", "delta1"),
        "B": ("im_rho21", "delta3"),
        "C": ("im_rho32", "delta1"),
        "D": ("im_rho32", "delta3"),
        "E": ("im_rho43", "delta1"),
        "F": ("im_rho43", "delta3"),
    }
    curves = []
    for panel, (obs, var) in panels.items():
        rng = DELTA_RANGE if var == "delta1" else DELTA3_RANGE
        for case, p in cases.items():
            curves.append(Curve(f"{panel}{case}", _spec(p, var, rng, obs), f"{obs} vs {var}"))
    return FigureRecipe(9, "absorption of each transition versus delta1 and delta3", tuple(curves), ("delta1", "delta3"))


def _omega3_delta3_map(fig: int, observable: str) -> FigureRecipe:
    base = SystemParams(omega1=4.0, omega2=20.0)
    spec = _spec(base, ("omega3", "delta3"), ((0.0, 20.0, 0.5), (-20.0, 20.0, 0.05)), observable)
    return FigureRecipe(
        fig,
        f"{observable} over the (omega3, delta3) plane at omega1 = 4, omega2 = 20",
        (Curve("map", spec, "omega1=4, omega2=20"),),
        ("omega3", "delta3"),
    )


RECIPES: dict[int, Callable[[], FigureRecipe]] = {
    2: _figure2,
    3: lambda: _population_map(3, "rho22"),
    4: lambda: _population_map(4, "rho33"),
    5: lambda: _population_map(5, "rho44"),
    6: lambda: _population_cuts(6, "rho22"),
    7: lambda: _population_cuts(7, "rho33"),
    8: lambda: _population_cuts(8, "rho44"),
    9: _figure9,
    10: lambda: _omega3_delta3_map(10, "im_rho21"),
    11: lambda: _omega3_delta3_map(11, "im_rho32"),
    12: lambda: _omega3_delta3_map(12, "im_rho43"),
}


def recipe(figure_id: int) -> FigureRecipe:
    if figure_id not in RECIPES:
        raise ValueError(f"figure id must be one of {FIGURE_IDS}, got {figure_id!r}")
    return RECIPES[figure_id]()


# ---------------------------------------------------------------- features


def _peak_summary(profile: AbsorptionProfile) -> dict:
    report = find_peaks(profile)
    return {
        "count": report.count,
        "locations": [pk.location for pk in report.peaks],
        "heights": [pk.height for pk in report.peaks],
        "fwhm": [pk.fwhm for pk in report.peaks],
    }


def _value_at(x: np.ndarray, v: np.ndarray, x0: float) -> float:
    return float(v[int(np.argmin(np.abs(x - x0)))])


def _extremum(x: np.ndarray, v: np.ndarray, kind: str) -> tuple[float, float]:
    k = int(np.argmin(v)) if kind == "min" else int(np.argmax(v))
    return float(x[k]), float(v[k])


def _extremum_kind(observable: str) -> str:
    return "min" if observable == "rho22" else "max"


def _summarise_figure2(tables: dict[str, SweepTable]) -> dict:
    features, center = {}, {}
    for name, t in tables.items():
        prof = t.profile()
        features[name] = _peak_summary(prof)
        center[name] = _value_at(prof.grid, prof.values, 0.0)
        features[name]["line_center"] = center[name]
    return {
        "features": features,
        "checks": {"line_center_dip_with_upper_field": center["c"] < center["b"]},
    }


def _summarise_map(tables: dict[str, SweepTable], observable: str) -> dict:
    t = tables["map"]
    o1, o3 = t.axes()
    grid = t.grid()
    kind = _extremum_kind(observable)
    slices = []
    for i, w1 in enumerate(o1):
        loc, val = _extremum(o3, grid[i], kind)
        slices.append({"omega1": float(w1), "omega3_at_extremum": loc, "value": val})
    strong = [s for s in slices if s["omega1"] >= STRONG_DRIVE_MIN]
    on_diagonal = [abs(s["omega3_at_extremum"] - s["omega1"]) <= OMEGA_STEP + 1e-9 for s in slices]
    # smallest omega1 from which every slice has its extremum on the diagonal
    onset = None
    for i in range(len(slices) - 1, -1, -1):
        if not on_diagonal[i]:
            break
        onset = slices[i]["omega1"]
    return {
        "features": {
            "extremum": kind,
            "slices": slices,
            "diagonal_onset_omega1": onset,
            "strong_drive_min_omega1": STRONG_DRIVE_MIN,
        },
        "checks": {
            f"{kind}_on_diagonal_for_strong_drive": all(
                abs(s["omega3_at_extremum"] - s["omega1"]) <= OMEGA_STEP + 1e-9 for s in strong
            )
        },
    }


def _local_extremum_near(x, v, x0: float, kind: str) -> bool:
    k = int(np.argmin(np.abs(x - x0)))
    for j in range(max(1, k - 1), min(x.size - 1, k + 2)):
        if kind == "min" and v[j] < v[j - 1] and v[j] < v[j + 1]:
            return True
        if kind == "max" and v[j] > v[j - 1] and v[j] > v[j + 1]:
            return True
    return False


def _summarise_cuts(tables: dict[str, SweepTable], observable: str) -> dict:
    kind = _extremum_kind(observable)
    features = {}
    for name, t in tables.items():
        x, v = t.coords[:, 0], t.values
        loc, val = _extremum(x, v, kind)
        baseline = float(v[0])
        features[name] = {
            "vary": t.vary[0],
            "extremum_location": loc,
            "extremum_value": val,
            "baseline": baseline,
            "feature_depth": abs(baseline - val),
            "local_extremum_at_20": _local_extremum_near(x, v, 20.0, kind),
        }
    checks = {f"curve_a_local_{kind}_at_20": features["a"]["local_extremum_at_20"]}
    if observable == "rho22":
        checks["dip_shallower_at_stronger_omega2"] = (
            features["c"]["feature_depth"] < features["a"]["feature_depth"]
        )
    return {"features": features, "checks": checks}


def _summarise_figure9(tables: dict[str, SweepTable]) -> dict:
    features = {name: _peak_summary(t.profile()) for name, t in tables.items()}
    ab, bb = features["Ab"], features["Bb"]
    return {
        "features": features,
        "checks": {
            "Ab_three_peaks": ab["count"] == 3,
            "Ab_central_peak": any(abs(x) <= DELTA_RANGE[2] for x in ab["locations"]),
            "Bb_single_peak": bb["count"] == 1,
            "Bb_peak_at_center": bb["count"] == 1 and abs(bb["locations"][0]) <= DELTA3_RANGE[2],
        },
    }


def _summarise_omega3_map(tables: dict[str, SweepTable], observable: str) -> dict:
    t = tables["map"]
    o3, d3 = t.axes()
    grid = t.grid()
    slices = []
    for i, w3 in enumerate(o3):
        if w3 == 0.0:
            continue
        prof = AbsorptionProfile("delta3", d3, grid[i], "exact")
        s = _peak_summary(prof)
        s["omega3"] = float(w3)
        s["line_center"] = _value_at(d3, grid[i], 0.0)
        slices.append(s)
    center = np.array([s["line_center"] for s in slices])
    w3 = np.array([s["omega3"] for s in slices])
    step = float(d3[1] - d3[0])
    checks = {
        "largest_peak_at_line_center": all(
            s["count"] > 0 and abs(s["locations"][int(np.argmax(s["heights"]))]) <= step + 1e-9
            for s in slices
        ),
    }
    features = {"slices": slices}
    if observable == "im_rho21":
        widths = [s["fwhm"][0] if s["count"] == 1 else None for s in slices]
        features["central_fwhm"] = widths
        checks["single_peak_every_slice"] = all(s["count"] == 1 for s in slices)
        checks["width_grows_with_omega3"] = all(
            w is not None for w in widths
        ) and bool(np.all(np.diff(np.array(widths, dtype=float)) > 0))
        w_at = {float(x): w for x, w in zip(w3, widths)}
        features["fwhm_ratio_omega3_4_over_2"] = (
            w_at[4.0] / w_at[2.0] if w_at.get(4.0) and w_at.get(2.0) else None
        )
        checks["subnatural_at_omega3_4"] = w_at.get(4.0) is not None and w_at[4.0] < SUBNATURAL_LIMIT
        checks["line_center_grows_with_omega3"] = bool(np.all(np.diff(center) > 0))
    else:
        k = int(np.argmax(center))
        features["line_center_max_omega3"] = float(w3[k])
        features["line_center_end_over_max"] = float(center[-1] / center[k])
        checks["line_center_rises_then_falls"] = bool(
            0 < k < center.size - 1 and np.all(np.diff(center[: k + 1]) > 0) and np.all(np.diff(center[k:]) < 0)
        )
    return {"features": features, "checks": checks}


def summarise(figure_id: int, tables: dict[str, SweepTable]) -> dict:
    if figure_id == 2:
        return _summarise_figure2(tables)
    if figure_id in (3, 4, 5):
        return _summarise_map(tables, {3: "rho22", 4: "rho33", 5: "rho44"}[figure_id])
    if figure_id in (6, 7, 8):
        return _summarise_cuts(tables, {6: "rho22", 7: "rho33", 8: "rho44"}[figure_id])
    if figure_id == 9:
        return _summarise_figure9(tables)
    return _summarise_omega3_map(tables, {10: "im_rho21", 11: "im_rho32", 12: "im_rho43"}[figure_id])


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(type(x).__name__)


def reproduce_figure(figure_id: int, out_dir, threads: int | None = None) -> dict:
    """Write one CSV per curve and ``summary.json`` into ``out_dir``; return the summary.

    Features are computed from the CSV files as read back from disk.
    """
    rec = recipe(figure_id)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for curve in rec.curves:
        path = out / f"fig{figure_id:02d}_{curve.name}.csv"
        header = [f"figure={figure_id}", f"curve={curve.name}", f"label={curve.label}"]
        if rec.reconstructed:
            header.append(f"reconstructed_ranges={','.join(rec.reconstructed)}")
        write_sweep_csv(run_sweep(curve.spec, threads=threads), path, header)
        files[curve.name] = path
    tables = {name: read_sweep_csv(path) for name, path in files.items()}
    summary = {
        "figure": figure_id,
        "version": __version__,
        "description": rec.description,
        "files": [p.name for p in files.values()],
        **summarise(figure_id, tables),
    }
    summary["passed"] = all(summary["checks"].values())
    text = json.dumps(summary, indent=2, sort_keys=True, default=_json_default)
    (out / f"fig{figure_id:02d}_summary.json").write_text(text + "\n")
    return summary
