"""Exact steady state by constrained linear solve, and an RK4 time-evolution oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import SingularSystem, StepTooLarge
from .model import (
    DIM,
    POPULATION_INDICES,
    SystemParams,
    build_liouvillian,
    ground_state,
    rhs,
    unvec,
    vec,
)

#: condition number above which the constrained system is treated as singular
CONDITION_LIMIT = 1e14
DEFAULT_DT = 1e-3


@dataclass(frozen=True)
class SteadyStateResult:
    rho: np.ndarray
    residual_inf_norm: float
    condition_estimate: float


def constrained_system(lv: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Replace the (redundant) ground-population row of ``lv`` with ``Tr rho = 1``.

    Works on a single ``(16, 16)`` generator or a stack ``(n, 16, 16)``.
    """
    a = np.array(lv, dtype=complex, copy=True)
    a[..., POPULATION_INDICES[0], :] = 0.0
    a[..., POPULATION_INDICES[0], list(POPULATION_INDICES)] = 1.0
    b = np.zeros(a.shape[:-1], dtype=complex)
    b[..., POPULATION_INDICES[0]] = 1.0
    return a, b


def _finish(lv: np.ndarray, x: np.ndarray, cond: float) -> SteadyStateResult:
    rho = unvec(x)
    rho = (rho + rho.conj().T) / 2
    residual = float(np.max(np.abs(lv @ vec(rho))))
    return SteadyStateResult(rho=rho, residual_inf_norm=residual, condition_estimate=cond)


def steady_state_exact(p: SystemParams) -> SteadyStateResult:
    """Unique trace-one density matrix annihilated by the Liouvillian of ``p``."""
    lv = build_liouvillian(p)
    a, b = constrained_system(lv)
    cond = float(np.linalg.cond(a))
    if not math.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularSystem(f"constrained steady-state system is singular (cond={cond:.3g})")
    x = np.linalg.solve(a, b)
    return _finish(lv, x, cond)


def steady_state_many(params: Iterable[SystemParams]) -> list[SteadyStateResult | SingularSystem]:
    """Batched :func:`steady_state_exact`.

    Returns one entry per input, in order.  Points whose constrained system is
    singular yield a :class:`SingularSystem` instance instead of a result, so a
    bad point never spoils the rest of the batch.
    """
    params = list(params)
    if not params:
        return []
    lvs = np.stack([build_liouvillian(p) for p in params])
    a, b = constrained_system(lvs)
    conds = np.linalg.cond(a)
    ok = np.isfinite(conds) & (conds <= CONDITION_LIMIT)
    out: list[SteadyStateResult | SingularSystem] = [
        SingularSystem(f"constrained steady-state system is singular (cond={c:.3g})")
        for c in conds
    ]
    idx = np.flatnonzero(ok)
    if idx.size:
        xs = np.linalg.solve(a[idx], b[idx][..., None])[..., 0]
        for k, x in zip(idx, xs):
            out[k] = _finish(lvs[k], x, float(conds[k]))
    return out


def _check_state(rho: np.ndarray, tolerance: float = 1e-3) -> None:
    if not np.all(np.isfinite(rho)):
        raise StepTooLarge("non-finite state during integration")
    drift = abs(np.trace(rho) - 1.0)
    if drift > tolerance:
        raise StepTooLarge(f"trace drifted by {drift:.3g} during integration")


def evolve_rk4(
    p: SystemParams,
    rho0: np.ndarray | None = None,
    t_final: float = 50.0,
    dt: float = DEFAULT_DT,
) -> np.ndarray:
    """Integrate the equations of motion with classical fixed-step RK4.

    The state is re-Hermitised and renormalised to unit trace after every step.
    A final partial step is taken when ``t_final`` is not a multiple of ``dt``.
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    if not t_final >= 0:
        raise ValueError(f"t_final must be >= 0, got {t_final!r}")
    rho = ground_state() if rho0 is None else np.array(rho0, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"rho0 must be 4x4, got shape {rho.shape}")
    _check_state(rho)

    n_full = int(math.floor(t_final / dt + 1e-9))
    remainder = t_final - n_full * dt
    steps = [dt] * n_full
    if remainder > 1e-12 * max(1.0, t_final):
        steps.append(remainder)

    for h in steps:
        k1 = rhs(p, rho)
        s = rho + 0.5 * h * k1
        _check_state(s)
        k2 = rhs(p, s)
        s = rho + 0.5 * h * k2
        _check_state(s)
        k3 = rhs(p, s)
        s = rho + h * k3
        _check_state(s)
        k4 = rhs(p, s)
        rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        _check_state(rho)
        rho = (rho + rho.conj().T) / 2
        rho = rho / np.trace(rho).real
    return rho


def relaxation_time(p: SystemParams) -> float:
    """``20 / min(Gamma_i)``: integration time long enough to reach steady state."""
    return 20.0 / min(p.gammas)


__all__ = [
    "CONDITION_LIMIT",
    "DEFAULT_DT",
    "DIM",
    "SteadyStateResult",
    "constrained_system",
    "evolve_rk4",
    "relaxation_time",
    "steady_state_exact",
    "steady_state_many",
]
