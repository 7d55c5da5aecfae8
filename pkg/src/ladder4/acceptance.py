"""Acceptance criteria, runnable from the CLI (``verify``) and the test suite.

Each criterion is a function returning a :class:`CriterionResult` with the
measured quantities that decided it.  A few criteria cannot be met by a
faithful implementation; they are listed in :data:`KNOWN_UNATTAINABLE` with the
reason, still evaluated, and still reported as failures.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .audit import build_ledger, gated
from .figures import FIGURE_IDS, reproduce_figure
from .lineshape import (
    AbsorptionProfile,
    doublet_absorption,
    find_peaks,
    lorentzian_profile,
    symmetric_grid,
    three_peak_absorption,
)
from .model import SystemParams, hermiticity_error, min_eigenvalue, trace_error
from .steady import evolve_rk4, steady_state_exact, steady_state_many
from .sweep import SweepSpec, read_sweep_csv, run_sweep
from .perturb import weak_omega2


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        note = " (known unattainable)" if self.key in KNOWN_UNATTAINABLE else ""
        shown = ", ".join(f"{k}={_short(v)}" for k, v in self.measured.items())
        return f"{status} [{self.key}] {self.title}{note}: {shown}"


def _short(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    return str(v)


KNOWN_UNATTAINABLE = {
    "5b": "at omega1 = 4 the probe saturates the ground transition; the first-order "
    "three-peak heights overestimate the exact ones several-fold",
    "7b": "the single-line width at omega2 = 20 is dominated by decay terms, so "
    "doubling omega3 raises it far less than fourfold",
    "7c": "at omega1 = 4 power broadening widens the exact line well beyond the "
    "first-order closed form; they agree only as omega1 -> 0",
    "9b": "the line-center value carries decay terms comparable to omega3**2 at "
    "omega3 <= 4, so the ratio drifts by tens of percent",
}


def _rel(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def _loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


# ------------------------------------------------------------------ 1, 2


def physicality(n: int = 1000, seed: int = 20240601) -> CriterionResult:
    rng = np.random.default_rng(seed)
    omegas = rng.uniform(0.0, 40.0, size=(n, 3))
    deltas = rng.uniform(-60.0, 60.0, size=(n, 3))
    params = [SystemParams.from_triples(o, d) for o, d in zip(omegas, deltas)]
    results = steady_state_many(params)
    singular = sum(not hasattr(r, "rho") for r in results)
    ok = [r for r in results if hasattr(r, "rho")]
    worst = {
        "residual": max(r.residual_inf_norm for r in ok),
        "trace": max(trace_error(r.rho) for r in ok),
        "hermiticity": max(hermiticity_error(r.rho) for r in ok),
        "min_eigenvalue": min(min_eigenvalue(r.rho) for r in ok),
        "singular": singular,
    }
    passed = (
        singular == 0
        and worst["residual"] <= 1e-9
        and worst["trace"] <= 1e-12
        and worst["hermiticity"] <= 1e-12
        and worst["min_eigenvalue"] >= -1e-9
    )
    return CriterionResult("1", f"physicality over {n} random points", passed, worst)


ORACLE_POINTS = {
    "2a": SystemParams(omega1=20.0),
    "2b": SystemParams(omega1=20.0, omega2=2.0),
    "2c": SystemParams(omega1=20.0, omega2=2.0, omega3=20.0),
    "9a": SystemParams(omega1=20.0, omega2=2.0, omega3=20.0),
    "9b": SystemParams(omega1=4.0, omega2=20.0, omega3=4.0),
}


def oracle_equivalence(t_final: float = 50.0, dt: float = 1e-3) -> CriterionResult:
    cache: dict[SystemParams, float] = {}
    measured = {}
    for name, p in ORACLE_POINTS.items():
        if p not in cache:
            exact = steady_state_exact(p).rho
            cache[p] = float(np.max(np.abs(evolve_rk4(p, t_final=t_final, dt=dt) - exact)))
        measured[name] = cache[p]
    passed = all(v <= 1e-6 for v in measured.values())
    return CriterionResult("2", "RK4 evolution matches linear-solve steady state", passed, measured)


# ------------------------------------------------------------------ 3


CONVERGENCE_OMEGA2 = (0.2, 0.1, 0.05, 0.02)
_POPULATIONS = [(k, k) for k in range(4)]
_FIRST_ORDER = [(1, 2), (0, 2), (0, 3), (1, 3)]


def _convergence_slopes(method: str) -> tuple[float, float]:
    pop_err, coh_err = [], []
    for w2 in CONVERGENCE_OMEGA2:
        p = SystemParams(omega1=20.0, omega2=w2, omega3=10.0)
        exact = steady_state_exact(p).rho
        second = weak_omega2(p, 2, method).total
        first = weak_omega2(p, 1, method).total
        pop_err.append(max(abs(second[i, j] - exact[i, j]) for i, j in _POPULATIONS))
        coh_err.append(max(abs(first[i, j] - exact[i, j]) for i, j in _FIRST_ORDER))
    return _loglog_slope(CONVERGENCE_OMEGA2, pop_err), _loglog_slope(CONVERGENCE_OMEGA2, coh_err)


def perturbative_convergence() -> CriterionResult:
    pop, coh = _convergence_slopes("closed")
    pop_solve, coh_solve = _convergence_slopes("solve")
    pop_lit, coh_lit = _convergence_slopes("literal")
    ledger = {e.key: e for e in build_ledger()}
    literal_broken = pop_lit < 2.5 or coh_lit < 1.5
    ledgered = all(
        ledger[k].resolved and not ledger[k].literal_ok
        for k in ledger
        if k.startswith(("order1-rho13", "order1-rho23", "order1-rho14", "order2-"))
    )
    passed = (
        pop >= 2.5 and coh >= 1.5 and pop_solve >= 2.5 and coh_solve >= 1.5
        and (not literal_broken or ledgered)
    )
    return CriterionResult(
        "3",
        "weak-omega2 convergence slopes",
        passed,
        {
            "population_slope": pop,
            "coherence_slope": coh,
            "solve_population_slope": pop_solve,
            "solve_coherence_slope": coh_solve,
            "literal_population_slope": pop_lit,
            "literal_coherence_slope": coh_lit,
            "literal_discrepancy_ledgered": ledgered,
        },
    )


# ------------------------------------------------------------------ 4


def _omega3_cut(omega2: float, observable: str):
    spec = SweepSpec(
        SystemParams(omega1=20.0, omega2=omega2), ("omega3",), ((0.0, 40.0, 0.5),), observable
    )
    res = run_sweep(spec)
    return res.axes[0], res.values


def _local_extremum_within(x, v, centre, tol, kind) -> list[float]:
    sign = -1.0 if kind == "min" else 1.0
    w = sign * v
    hits = []
    for k in range(1, x.size - 1):
        if w[k] > w[k - 1] and w[k] > w[k + 1] and abs(x[k] - centre) <= tol + 1e-9:
            hits.append(float(x[k]))
    return hits


def resonance_condition() -> CriterionResult:
    measured = {}
    ok = True
    for obs, kind in (("rho22", "min"), ("rho33", "max"), ("rho44", "max")):
        x, v = _omega3_cut(2.0, obs)
        hits = _local_extremum_within(x, v, 20.0, 0.5, kind)
        measured[f"{obs}_local_{kind}"] = hits
        ok &= bool(hits)
    depth = {}
    for w2 in (2.0, 8.0):
        x, v = _omega3_cut(w2, "rho22")
        # baseline: the value with the upper field off
        measured[f"dip_depth_omega2_{w2:g}"] = float(v[0] - v.min())
        depth[w2] = float((v[0] - v.min()) / v[0])
        measured[f"relative_dip_omega2_{w2:g}"] = depth[w2]
    ok &= depth[8.0] < depth[2.0]
    return CriterionResult("4", "populations extremal at omega3 = omega1", ok, measured)


# ------------------------------------------------------------------ 5, 6


FIG9B = SystemParams(omega1=4.0, omega2=20.0, omega3=4.0)


def _exact_profile(p: SystemParams, var: str, step: float) -> AbsorptionProfile:
    spec = SweepSpec(p, (var,), ((-60.0, 60.0, step),), "im_rho21")
    return run_sweep(spec).to_profile()


def three_peak_structure() -> list[CriterionResult]:
    prof = _exact_profile(FIG9B, "delta1", 0.05)
    report = find_peaks(prof)
    locs = report.locations
    central = [x for x in locs if abs(x) <= 0.05]
    a = CriterionResult(
        "5a",
        "exact delta1 profile has three peaks, one central",
        report.count == 3 and len(central) == 1,
        {"count": report.count, "locations": locs},
    )
    heights = [pk.height for pk in report.peaks]
    analytic = [float(three_peak_absorption(FIG9B, x)) for x in locs]
    errs = [_rel(g, h) for h, g in zip(heights, analytic)]
    b = CriterionResult(
        "5b",
        "three-peak closed form matches exact peak heights to 5%",
        report.count == 3 and max(errs, default=math.inf) <= 0.05,
        {"exact_heights": heights, "closed_form_heights": analytic, "rel_errors": errs},
    )
    return [a, b]


def autler_townes_filtering() -> CriterionResult:
    prof = _exact_profile(FIG9B, "delta3", 0.02)
    report = find_peaks(prof)
    passed = report.count == 1 and abs(report.locations[0]) <= 0.02
    return CriterionResult(
        "6", "exact delta3 profile has a single central peak", passed,
        {"count": report.count, "locations": report.locations},
    )


# ------------------------------------------------------------------ 7


def _single_fwhm(prof: AbsorptionProfile) -> float:
    report = find_peaks(prof)
    if report.count != 1 or report.peaks[0].fwhm is None:
        return math.nan
    return report.peaks[0].fwhm


def subnatural_linewidth(omega1: float = 4.0) -> list[CriterionResult]:
    base = FIG9B.replace(omega1=omega1)
    exact = {w3: _single_fwhm(_exact_profile(base.replace(omega3=w3), "delta3", 0.02)) for w3 in (2.0, 4.0)}
    closed = {w3: _single_fwhm(lorentzian_profile(base.replace(omega3=w3))) for w3 in (2.0, 4.0)}
    a = CriterionResult(
        "7a", "exact single-line FWHM below gamma2 = 6", exact[4.0] < 6.0, {"fwhm": exact[4.0]}
    )
    ratio = closed[4.0] / closed[2.0]
    b = CriterionResult(
        "7b",
        "FWHM(omega3=4)/FWHM(omega3=2) = 4 +- 15%",
        abs(ratio - 4.0) <= 0.6,
        {"closed_form_ratio": ratio, "exact_ratio": exact[4.0] / exact[2.0]},
    )
    err = _rel(closed[4.0], exact[4.0])
    c = CriterionResult(
        "7c",
        "closed-form FWHM within 10% of exact",
        err <= 0.10,
        {"closed_form_fwhm": closed[4.0], "exact_fwhm": exact[4.0], "rel_error": err},
    )
    return [a, b, c]


def weak_probe_width_check(omega1: float = 0.1) -> CriterionResult:
    """The closed-form width against the exact one where the probe is weak."""
    (c,) = [r for r in subnatural_linewidth(omega1) if r.key == "7c"]
    c.key, c.title = "7c-weak", f"closed-form FWHM within 10% of exact at omega1 = {omega1:g}"
    return c


# ------------------------------------------------------------------ 8, 9


def algebraic_limit_chain() -> CriterionResult:
    ledger = build_ledger()
    grid = symmetric_grid(60.0, 0.05)
    p0 = FIG9B.replace(omega3=0.0)
    collapse = float(np.max(np.abs(three_peak_absorption(p0, grid) - doublet_absorption(p0, grid))))
    unresolved = [e.key for e in ledger if gated(e) and not e.resolved]
    special = max(
        e.literal_residual for e in ledger if e.key.startswith(("doublet-", "three-peak-vs", "lorentzian-"))
    )
    passed = collapse <= 1e-12 and special <= 1e-10 and not unresolved
    return CriterionResult(
        "8",
        "lineshape specialisations and ledger",
        passed,
        {"three_peak_vs_doublet": collapse, "specialisation_residual": special, "unresolved": unresolved},
    )


def line_center_scalings() -> list[CriterionResult]:
    p = SystemParams(omega1=4.0, omega2=20.0)
    got = float(doublet_absorption(p, 0.0))
    want = p.omega1 * p.gbar3 / (p.gbar2 * p.gbar3 + p.omega2**2)
    a = CriterionResult("9a", "doublet line-center value", _rel(got, want) <= 1e-12, {"rel_error": _rel(got, want)})
    ratios = []
    for w3 in (1.0, 2.0, 4.0):
        q = p.replace(omega3=w3)
        scale = q.omega1 * w3**2 / (q.gbar4 * q.omega2**2 + q.gbar2 * w3**2)
        ratios.append(float(three_peak_absorption(q, 0.0)) / scale)
    spread = (max(ratios) - min(ratios)) / np.mean(ratios)
    b = CriterionResult(
        "9b",
        "three-peak line-center ratio constant over omega3",
        spread <= 1e-9,
        {"ratios": ratios, "relative_spread": float(spread)},
    )
    return [a, b]


# ------------------------------------------------------------------ 10


def figure_regression(ids=FIGURE_IDS) -> CriterionResult:
    failed, differing = [], []
    with tempfile.TemporaryDirectory() as tmp:
        first, second = Path(tmp, "run1"), Path(tmp, "run2")
        for fid in ids:
            summary = reproduce_figure(fid, first)
            for name in summary["files"]:
                read_sweep_csv(first / name)
            if not summary["passed"]:
                failed.append(fid)
            reproduce_figure(fid, second, threads=1)
        for f in sorted(first.iterdir()):
            if f.read_bytes() != (second / f.name).read_bytes():
                differing.append(f.name)
    return CriterionResult(
        "10",
        "figure reproduction, schema, features, byte-identical reruns",
        not failed and not differing,
        {"failed_figures": failed, "differing_files": differing},
    )


CRITERIA: dict[str, Callable[[], list[CriterionResult] | CriterionResult]] = {
    "1": physicality,
    "2": oracle_equivalence,
    "3": perturbative_convergence,
    "4": resonance_condition,
    "5": three_peak_structure,
    "6": autler_townes_filtering,
    "7": subnatural_linewidth,
    "8": algebraic_limit_chain,
    "9": line_center_scalings,
    "10": figure_regression,
}


def run_criterion(key: str) -> list[CriterionResult]:
    out = CRITERIA[key]()
    return out if isinstance(out, list) else [out]


def run_all(keys=None, echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for key in keys or CRITERIA:
        for r in run_criterion(key):
            results.append(r)
            if echo is not None:
                echo(r.line())
    return results
