"""Parameter sweeps over one or two axes, with CSV serialisation.

A sweep evaluates one observable on a rectangular grid using one method.
Points are independent; they are evaluated in fixed-size chunks that may run
on a thread pool (``LADDER4_THREADS`` caps the pool), and results are always
stored in grid order so output is identical for any worker count.  A point
that raises a :class:`~ladder4.errors.LadderError` becomes a hole: its value
is NaN and its flag names the error.
"""

from __future__ import annotations

import io
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .errors import LadderError, SingularSystem
from .lineshape import (
    SWEEP_VARIABLES,
    AbsorptionProfile,
    doublet_absorption,
    lorentzian_absorption,
    three_peak_absorption,
)
from .model import SystemParams
from .perturb import (
    resonance_limit,
    three_photon_coherences,
    weak_omega2,
    weak_probe_absorption,
)
from .steady import steady_state_many

CHUNK_SIZE = 512
THREADS_ENV = "LADDER4_THREADS"

ABSORPTION_OBSERVABLES = {"im_rho21": (0, 1), "im_rho32": (1, 2), "im_rho43": (2, 3)}
POPULATION_OBSERVABLES = {f"rho{k}{k}": (k - 1, k - 1) for k in range(1, 5)}
_ELEMENT = re.compile(r"^(re|im)\[([1-4]),([1-4])\]$")

ANALYTIC_METHODS = {
    "analytic-weak-probe": None,
    "analytic-doublet": doublet_absorption,
    "analytic-three-peak": three_peak_absorption,
    "analytic-lorentzian": lorentzian_absorption,
}
_PERTURBATIVE = re.compile(r"^perturbative-order-([012])(-literal)?$")
RESONANCE_OBSERVABLES = ("rho22", "im_rho21", "im_rho34", "rho33", "rho44")
THREE_PHOTON_OBSERVABLES = ("re[2,3]", "im[2,3]", "re[1,3]", "im[1,3]", "re[2,4]", "im[2,4]")


def observable_reader(name: str) -> Callable[[np.ndarray], float]:
    """Map an observable name to a function of the density matrix.

    ``rhoKK`` are populations; ``im_rho21``, ``im_rho32``, ``im_rho43`` are the
    absorptions of the three transitions (positive when absorbing, i.e. the
    imaginary part of the upper-triangle element); ``re[i,j]`` and ``im[i,j]``
    address raw matrix elements with 1-based indices.
    """
    if name in POPULATION_OBSERVABLES:
        i, _ = POPULATION_OBSERVABLES[name]
        return lambda rho: float(rho[i, i].real)
    if name in ABSORPTION_OBSERVABLES:
        i, j = ABSORPTION_OBSERVABLES[name]
        return lambda rho: float(rho[i, j].imag)
    m = _ELEMENT.match(name)
    if m:
        part, i, j = m.group(1), int(m.group(2)) - 1, int(m.group(3)) - 1
        if part == "re":
            return lambda rho: float(rho[i, j].real)
        return lambda rho: float(rho[i, j].imag)
    raise ValueError(f"unknown observable {name!r}")


def grid_points(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid ``start, start+step, ... <= stop``."""
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(n), 12) + 0.0


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams
    vary: tuple[str, ...]
    ranges: tuple[tuple[float, float, float], ...]
    observable: str = "im_rho21"
    method: str = "exact"
    eps_g: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "vary", tuple(self.vary))
        object.__setattr__(self, "ranges", tuple(tuple(float(x) for x in r) for r in self.ranges))
        if not 1 <= len(self.vary) <= 2:
            raise ValueError("vary must name one or two parameters")
        if len(self.ranges) != len(self.vary):
            raise ValueError("need one (start, stop, step) range per varied parameter")
        if len(set(self.vary)) != len(self.vary):
            raise ValueError("varied parameters must be distinct")
        for name, (start, stop, step) in zip(self.vary, self.ranges):
            if name not in SWEEP_VARIABLES:
                raise ValueError(f"cannot sweep {name!r}; choose from {SWEEP_VARIABLES}")
            if not all(math.isfinite(x) for x in (start, stop, step)):
                raise ValueError("range bounds must be finite")
            if not step > 0:
                raise ValueError(f"step must be > 0 for {name}")
            if not start < stop:
                raise ValueError(f"start must be < stop for {name}")
        self._check_method()

    def _check_method(self) -> None:
        m = self.method
        if m == "exact" or _PERTURBATIVE.match(m):
            observable_reader(self.observable)
        elif m in ANALYTIC_METHODS:
            if self.observable != "im_rho21":
                raise ValueError(f"method {m} only provides im_rho21")
        elif m == "resonance-limit":
            if self.observable not in RESONANCE_OBSERVABLES:
                raise ValueError(f"resonance-limit provides {RESONANCE_OBSERVABLES}")
        elif m == "three-photon":
            if self.observable not in THREE_PHOTON_OBSERVABLES:
                raise ValueError(f"three-photon provides {THREE_PHOTON_OBSERVABLES}")
        else:
            raise ValueError(f"unknown method {m!r}")

    @property
    def axes(self) -> list[np.ndarray]:
        return [grid_points(*r) for r in self.ranges]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.size for a in self.axes)

    def points(self) -> list[tuple[float, ...]]:
        """Grid coordinates in row-major order (last axis fastest)."""
        axes = self.axes
        if len(axes) == 1:
            return [(float(x),) for x in axes[0]]
        return [(float(x), float(y)) for x in axes[0] for y in axes[1]]

    def params_at(self, coords: Sequence[float]) -> SystemParams:
        return self.base.replace(**dict(zip(self.vary, coords)))


@dataclass
class SweepResult:
    spec: SweepSpec
    values: np.ndarray
    flags: list[str] = field(default_factory=list)

    @property
    def axes(self) -> list[np.ndarray]:
        return self.spec.axes

    @property
    def holes(self) -> list[int]:
        return [k for k, f in enumerate(self.flags) if f != "ok"]

    def grid_values(self) -> np.ndarray:
        return self.values.reshape(self.spec.shape)

    def to_profile(self, provenance: str | None = None) -> AbsorptionProfile:
        if len(self.spec.vary) != 1:
            raise ValueError("only one-dimensional sweeps convert to a profile")
        if self.holes:
            raise ValueError(f"sweep has {len(self.holes)} flagged points")
        prov = provenance or _provenance(self.spec.method)
        return AbsorptionProfile(self.spec.vary[0], self.axes[0], self.values, prov)


def _provenance(method: str) -> str:
    if method == "exact":
        return "exact"
    if method.startswith("analytic-"):
        return method[len("analytic-") :].replace("-", "_")
    return "perturbative"


def worker_count(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env is not None:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(f"{THREADS_ENV} must be an integer >= 1, got {env!r}") from None
        else:
            threads = min(8, os.cpu_count() or 1)
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def _point_evaluator(spec: SweepSpec) -> Callable[[SystemParams], float]:
    m, obs = spec.method, spec.observable
    pm = _PERTURBATIVE.match(m)
    if pm:
        order = int(pm.group(1))
        method = "literal" if pm.group(2) else "closed"
        read = observable_reader(obs)
        return lambda p: read(weak_omega2(p, order, method=method).total)
    if m == "analytic-weak-probe":
        return weak_probe_absorption
    if m in ANALYTIC_METHODS:
        fn = ANALYTIC_METHODS[m]
        var = {"analytic-lorentzian": "delta3"}.get(m, "delta1")
        return lambda p: float(fn(p, getattr(p, var)))
    if m == "resonance-limit":
        reg = "exact" if spec.eps_g is None else spec.eps_g
        return lambda p: resonance_limit(p, reg).values[obs]
    if m == "three-photon":
        part, i, j = _ELEMENT.match(obs).groups()
        key = f"rho{i}{j}"
        return lambda p: getattr(three_photon_coherences(p)[key], "real" if part == "re" else "imag")
    raise ValueError(f"unknown method {m!r}")


def _evaluate_chunk(spec: SweepSpec, coords: list[tuple[float, ...]]) -> list[tuple[float, str]]:
    out: list[tuple[float, str]] = []
    params: list[SystemParams | LadderError] = []
    for c in coords:
        try:
            params.append(spec.params_at(c))
        except LadderError as exc:
            params.append(exc)
    if spec.method == "exact":
        read = observable_reader(spec.observable)
        good = [p for p in params if isinstance(p, SystemParams)]
        solved = iter(steady_state_many(good))
        for p in params:
            if isinstance(p, LadderError):
                out.append((math.nan, type(p).__name__))
                continue
            res = next(solved)
            if isinstance(res, SingularSystem):
                out.append((math.nan, "SingularSystem"))
            else:
                out.append((read(res.rho), "ok"))
        return out
    evaluate = _point_evaluator(spec)
    for p in params:
        if isinstance(p, LadderError):
            out.append((math.nan, type(p).__name__))
            continue
        try:
            value = float(evaluate(p))
        except LadderError as exc:
            out.append((math.nan, type(exc).__name__))
            continue
        if math.isfinite(value):
            out.append((value, "ok"))
        else:
            out.append((math.nan, "NonFinite"))
    return out


def run_sweep(spec: SweepSpec, threads: int | None = None) -> SweepResult:
    """Evaluate ``spec`` on every grid point; output order is the grid order."""
    coords = spec.points()
    chunks = [coords[k : k + CHUNK_SIZE] for k in range(0, len(coords), CHUNK_SIZE)]
    n_workers = min(worker_count(threads), max(1, len(chunks)))
    if n_workers == 1:
        results = [_evaluate_chunk(spec, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(lambda c: _evaluate_chunk(spec, c), chunks))
    flat = [item for chunk in results for item in chunk]
    values = np.array([v for v, _ in flat], dtype=float)
    flags = [f for _, f in flat]
    return SweepResult(spec, values, flags)


# ------------------------------------------------------------------ CSV I/O


def _fmt(x: float) -> str:
    return repr(float(x))


def range_text(r: tuple[float, float, float]) -> str:
    return ":".join(_fmt(x) for x in r)


def sweep_csv(result: SweepResult, extra_header: Sequence[str] = ()) -> str:
    """CSV text: ``#`` comment header, a column row, then one row per grid point."""
    spec = result.spec
    buf = io.StringIO()
    buf.write(f"# ladder4 {__version__}\n")
    for key, value in spec.base.as_dict().items():
        buf.write(f"# {key}={value!r}\n")
    buf.write(f"# vary={','.join(spec.vary)}\n")
    buf.write(f"# range={','.join(range_text(r) for r in spec.ranges)}\n")
    buf.write(f"# observable={spec.observable}\n")
    buf.write(f"# method={spec.method}\n")
    if spec.eps_g is not None:
        buf.write(f"# eps_g={spec.eps_g!r}\n")
    for line in extra_header:
        buf.write(f"# {line}\n")
    buf.write(",".join([*spec.vary, "value", "flag"]) + "\n")
    for coords, value, flag in zip(spec.points(), result.values, result.flags):
        row = [_fmt(c) for c in coords] + [_fmt(value) if flag == "ok" else "nan", flag]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def write_sweep_csv(result: SweepResult, path, extra_header: Sequence[str] = ()) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(sweep_csv(result, extra_header))


@dataclass
class SweepTable:
    """A sweep CSV read back from disk."""

    metadata: dict[str, str]
    columns: list[str]
    coords: np.ndarray
    values: np.ndarray
    flags: list[str]

    @property
    def vary(self) -> list[str]:
        return self.columns[:-2]

    def axes(self) -> list[np.ndarray]:
        return [np.unique(self.coords[:, k]) for k in range(self.coords.shape[1])]

    def grid(self) -> np.ndarray:
        return self.values.reshape(tuple(a.size for a in self.axes()))

    def profile(self, provenance: str = "exact") -> AbsorptionProfile:
        if self.coords.shape[1] != 1:
            raise ValueError("not a one-dimensional sweep")
        return AbsorptionProfile(self.vary[0], self.coords[:, 0], self.values, provenance)


class SchemaError(ValueError):
    """A sweep CSV does not follow the expected layout."""


def read_sweep_csv(path) -> SweepTable:
    """Parse and validate a file written by :func:`write_sweep_csv`."""
    metadata: dict[str, str] = {}
    rows: list[list[str]] = []
    columns: list[str] | None = None
    with open(path, newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    metadata[k.strip()] = v.strip()
                continue
            if columns is None:
                columns = line.split(",")
                continue
            rows.append(line.split(","))
    if columns is None or columns[-2:] != ["value", "flag"] or not 1 <= len(columns) - 2 <= 2:
        raise SchemaError(f"{path}: bad column row {columns!r}")
    for key in ("vary", "range", "observable", "method"):
        if key not in metadata:
            raise SchemaError(f"{path}: missing header field {key!r}")
    if metadata["vary"].split(",") != columns[:-2]:
        raise SchemaError(f"{path}: header vary does not match columns")
    n_coord = len(columns) - 2
    coords, values, flags = [], [], []
    for r in rows:
        if len(r) != len(columns):
            raise SchemaError(f"{path}: row has {len(r)} fields, expected {len(columns)}")
        coords.append([float(x) for x in r[:n_coord]])
        v = float(r[n_coord])
        if r[-1] == "ok" and not math.isfinite(v):
            raise SchemaError(f"{path}: non-finite value flagged ok")
        values.append(v)
        flags.append(r[-1])
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    table = SweepTable(metadata, columns, np.array(coords), np.array(values), flags)
    expected = int(np.prod([a.size for a in table.axes()]))
    if expected != len(rows):
        raise SchemaError(f"{path}: {len(rows)} rows do not fill a rectangular grid")
    return table
