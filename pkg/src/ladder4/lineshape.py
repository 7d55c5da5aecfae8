"""Closed-form weak-probe absorption lineshapes and peak/width extraction.

The three closed forms here are specialisations of the weak-probe absorption
(see :func:`ladder4.perturb.weak_probe_rho12`) to a single swept detuning:

* :func:`doublet_absorption` -- no upper field, ``delta2 = 0``; the
  Autler-Townes doublet in ``delta1``.
* :func:`three_peak_absorption` -- ``delta2 = delta3 = 0``; doublet plus a
  narrow three-photon line at ``delta1 = 0``.
* :func:`lorentzian_absorption` -- ``delta1 = delta2 = 0``; a single
  Lorentzian (on a constant pedestal) in ``delta3``.

All of them return the absorption with the sign convention of
:func:`ladder4.model.absorption` (positive = absorbing) and are linear in
``omega1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import TooFewSamples
from .model import SystemParams

SWEEP_VARIABLES = ("delta1", "delta2", "delta3", "omega1", "omega2", "omega3")
PROVENANCES = (
    "exact",
    "weak_probe",
    "doublet",
    "three_peak",
    "lorentzian",
    "perturbative",
)

DEFAULT_DELTA_STEP = 0.05
LORENTZIAN_DELTA_STEP = 0.02


@dataclass(frozen=True)
class AbsorptionProfile:
    sweep_variable: str
    grid: np.ndarray
    values: np.ndarray
    provenance: str = "exact"

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if self.sweep_variable not in SWEEP_VARIABLES:
            raise ValueError(f"unknown sweep variable {self.sweep_variable!r}")
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D and of equal length")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("profile values must be finite")


@dataclass(frozen=True)
class Peak:
    location: float
    height: float
    fwhm: float | None
    interpolated: bool
    index: int
    baseline: float

    @property
    def bounded(self) -> bool:
        return self.fwhm is not None


@dataclass(frozen=True)
class PeakReport:
    peaks: list[Peak] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.peaks)

    @property
    def locations(self) -> list[float]:
        return [pk.location for pk in self.peaks]


def symmetric_grid(half_range: float = 60.0, step: float = DEFAULT_DELTA_STEP) -> np.ndarray:
    """Grid ``-half_range .. half_range`` inclusive, containing 0 exactly."""
    n = int(round(half_range / step))
    return np.arange(-n, n + 1) * step


# ---------------------------------------------------------------- closed forms


def doublet_absorption(p: SystemParams, delta1) -> np.ndarray:
    """Weak-probe absorption versus ``delta1`` with the upper field off and ``delta2 = 0``."""
    x2 = np.asarray(delta1, dtype=float) ** 2
    g2, g3 = p.gbar2, p.gbar3
    o1, o2 = p.omega1, p.omega2
    num = o1 * (x2 * g2 + g3 * (g3 * g2 + o2**2))
    den = x2**2 + x2 * (g2**2 + g3**2 - 2 * o2**2) + (g2 * g3 + o2**2) ** 2
    return num / den


def _three_peak_coefficients(p: SystemParams) -> tuple[float, float, float]:
    g2, g3, g4 = p.gbar2, p.gbar3, p.gbar4
    gamma_sum = g2 + g3 + g4
    gamma_pairs = g2 * g3 + g3 * g4 + g4 * g2
    o2s, o3s = p.omega2**2, p.omega3**2
    t1 = (
        g2 * g3**2 * g4**2
        + g3 * g4**2 * o2s
        + 2 * g2 * g3 * g4 * o3s
        + g4 * o3s * o2s
        + g2 * o3s**2
    )
    return gamma_sum, gamma_pairs, t1


def three_peak_absorption(p: SystemParams, delta1) -> np.ndarray:
    """Weak-probe absorption versus ``delta1`` with ``delta2 = delta3 = 0``.

    The denominator is cubic in ``delta1**2``; its three minima give the
    Autler-Townes pair and the central three-photon line.
    """
    x2 = np.asarray(delta1, dtype=float) ** 2
    g2, g3, g4 = p.gbar2, p.gbar3, p.gbar4
    o1, o2s, o3s = p.omega1, p.omega2**2, p.omega3**2
    gamma_sum, gamma_pairs, t1 = _three_peak_coefficients(p)
    num = o1 * (x2 * (x2 * g2 + g2 * (g3**2 + g4**2) + g3 * o2s - 2 * g2 * o3s) + t1)
    den = x2 * (x2 - gamma_pairs - o2s - o3s) ** 2 + (
        x2 * gamma_sum - g2 * g3 * g4 - g4 * o2s - g2 * o3s
    ) ** 2
    return num / den


def lorentzian_absorption(p: SystemParams, delta3) -> np.ndarray:
    """Weak-probe absorption versus ``delta3`` with ``delta1 = delta2 = 0``."""
    x2 = np.asarray(delta3, dtype=float) ** 2
    g2, g3, g4 = p.gbar2, p.gbar3, p.gbar4
    o1, o2s, o3s = p.omega1, p.omega2**2, p.omega3**2
    k = g4 * o2s + g2 * (g3 * g4 + o3s)
    num = o1 * (x2 * g3 * (g2 * g3 + o2s) + (g3 * g4 + o3s) * k)
    den = x2 * (g2 * g3 + o2s) ** 2 + k**2
    return num / den


def lorentzian_half_width(p: SystemParams) -> float:
    """Half width at half maximum (above the pedestal) of :func:`lorentzian_absorption`."""
    g2, g3, g4 = p.gbar2, p.gbar3, p.gbar4
    return (g4 * p.omega2**2 + g2 * (g3 * g4 + p.omega3**2)) / (g2 * g3 + p.omega2**2)


def doublet_profile(p: SystemParams, delta1_grid=None) -> AbsorptionProfile:
    grid = symmetric_grid() if delta1_grid is None else np.asarray(delta1_grid, dtype=float)
    p = p.replace(delta2=0.0, omega3=0.0)
    return AbsorptionProfile("delta1", grid, doublet_absorption(p, grid), "doublet")


def three_peak_profile(p: SystemParams, delta1_grid=None) -> AbsorptionProfile:
    grid = symmetric_grid() if delta1_grid is None else np.asarray(delta1_grid, dtype=float)
    p = p.replace(delta2=0.0, delta3=0.0)
    return AbsorptionProfile("delta1", grid, three_peak_absorption(p, grid), "three_peak")


def lorentzian_profile(p: SystemParams, delta3_grid=None) -> AbsorptionProfile:
    grid = (
        symmetric_grid(step=LORENTZIAN_DELTA_STEP)
        if delta3_grid is None
        else np.asarray(delta3_grid, dtype=float)
    )
    p = p.replace(delta1=0.0, delta2=0.0)
    return AbsorptionProfile("delta3", grid, lorentzian_absorption(p, grid), "lorentzian")


@dataclass(frozen=True)
class WindowWidth:
    value: float
    radicand: float
    imaginary: bool


def eit_window_width(
    p: SystemParams, variant: Literal["literal", "squared"] = "literal"
) -> WindowWidth:
    """Width measure of the transparency window between the doublet peaks.

    ``variant="literal"`` evaluates
    ``sqrt((g2^2 + g3^2 - 2 W^2)^2 - 4 (g2 g3 + W^2))`` with ``W = omega2`` and
    half-rates ``g``; ``"squared"`` squares the last bracket, which makes every
    term fourth order.  A negative radicand is flagged with ``imaginary=True``
    and ``value = nan`` rather than raised.
    """
    g2, g3, o2s = p.gbar2, p.gbar3, p.omega2**2
    lead = (g2**2 + g3**2 - 2 * o2s) ** 2
    if variant == "literal":
        radicand = lead - 4 * (g2 * g3 + o2s)
    elif variant == "squared":
        radicand = lead - 4 * (g2 * g3 + o2s) ** 2
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if radicand < 0:
        return WindowWidth(math.nan, radicand, True)
    return WindowWidth(math.sqrt(radicand), radicand, False)


# ------------------------------------------------------------- peak analysis


def _local_maxima(v: np.ndarray) -> list[int]:
    """Indices of strict interior maxima; a flat-topped maximum reports its leftmost sample."""
    out = []
    n = v.size
    i = 1
    while i < n - 1:
        if v[i] > v[i - 1]:
            j = i
            while j + 1 < n and v[j + 1] == v[i]:
                j += 1
            if j + 1 < n and v[j + 1] < v[i]:
                out.append(i)
            i = j + 1
        else:
            i += 1
    return out


def _parabolic_vertex(x: np.ndarray, y: np.ndarray, i: int) -> tuple[float, float, bool]:
    x0, x1, x2 = x[i - 1], x[i], x[i + 1]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
    if not a < 0:
        return float(x1), float(y1), False
    xv = -b / (2 * a)
    if not x0 <= xv <= x2:
        return float(x1), float(y1), False
    c = y1 - a * x1 * x1 - b * x1
    return float(xv), float(a * xv * xv + b * xv + c), True


def _crossing(x: np.ndarray, v: np.ndarray, start: int, stop: int, level: float, step: int):
    """Linear-interpolated position where ``v`` first falls below ``level`` walking from ``start``."""
    i = start
    while i != stop:
        k = i + step
        if v[k] < level:
            frac = (v[i] - level) / (v[i] - v[k])
            return x[i] + frac * (x[k] - x[i])
        i = k
    return None


def find_peaks(profile: AbsorptionProfile) -> PeakReport:
    """Locate interior maxima and measure their full width at half maximum.

    The half-maximum level is taken above the lowest value in the window
    spanned by the local minima on either side of the peak, so a narrow line
    sitting inside a transparency window is measured against the window floor.
    A side whose half-maximum crossing lies outside that window leaves the
    width unbounded (``fwhm=None``).
    """
    x, v = profile.grid, profile.values
    if x.size < 3:
        raise TooFewSamples(f"need at least 3 samples, got {x.size}")
    idx = _local_maxima(v)
    bounds = [0] + idx + [x.size - 1]
    peaks = []
    for n, i in enumerate(idx):
        lo, hi = bounds[n], bounds[n + 2]
        left_min = lo + int(np.argmin(v[lo : i + 1]))
        right_min = i + int(np.argmin(v[i : hi + 1]))
        baseline = float(min(v[left_min], v[right_min]))
        plateau = v[i + 1] == v[i]
        if plateau:
            loc, height, interp = float(x[i]), float(v[i]), False
        else:
            loc, height, interp = _parabolic_vertex(x, v, i)
        half = baseline + (float(v[i]) - baseline) / 2
        xl = _crossing(x, v, i, left_min, half, -1)
        # walk right from the last sample of a plateau
        j = i
        while j + 1 < x.size and v[j + 1] == v[i]:
            j += 1
        xr = _crossing(x, v, j, right_min, half, +1)
        fwhm = None if xl is None or xr is None else float(xr - xl)
        peaks.append(Peak(loc, height, fwhm, interp, i, baseline))
    return PeakReport(peaks)
