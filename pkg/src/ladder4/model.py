"""Four-level ladder atom driven by three fields: parameters and equations of motion.

Levels are labelled 1..4 in the text and 0..3 as array indices.  Field ``k``
couples level ``k`` to ``k+1`` with Rabi frequency ``omega_k`` and detuning
``delta_k``.  All rates are in units of the ground-state linewidth (gamma = 1).

Density matrices are plain ``(4, 4)`` complex arrays.  The 16-component vector
form is the row-major flattening ``(rho11, rho12, rho13, rho14, rho21, ...)``,
which is what ``numpy.ravel`` produces; every module uses this ordering.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidDecay, InvalidParameter, InvalidRabi

N_LEVELS = 4
DIM = N_LEVELS * N_LEVELS

#: flat indices of the four populations in the row-major vector
POPULATION_INDICES = tuple(k * N_LEVELS + k for k in range(N_LEVELS))


@dataclass(frozen=True)
class SystemParams:
    """Drive strengths, detunings and decay constants of the ladder.

    ``rho44_decay_literal`` selects the population decay rate of level 4:
    ``gamma3`` when true, ``gamma4`` (the default) otherwise.  Coherences
    involving level 4 always dephase with ``gamma4``.
    """

    omega1: float = 0.0
    omega2: float = 0.0
    omega3: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    delta3: float = 0.0
    gamma2: float = 6.0
    gamma3: float = 1.0
    gamma4: float = 1.0
    rho44_decay_literal: bool = False

    def __post_init__(self) -> None:
        validate_params(self)

    @classmethod
    def from_triples(
        cls,
        omega: Sequence[float] = (0.0, 0.0, 0.0),
        delta: Sequence[float] = (0.0, 0.0, 0.0),
        gamma: Sequence[float] = (6.0, 1.0, 1.0),
        rho44_decay_literal: bool = False,
    ) -> "SystemParams":
        o1, o2, o3 = (float(x) for x in omega)
        d1, d2, d3 = (float(x) for x in delta)
        g2, g3, g4 = (float(x) for x in gamma)
        return cls(o1, o2, o3, d1, d2, d3, g2, g3, g4, bool(rho44_decay_literal))

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    @property
    def omegas(self) -> tuple[float, float, float]:
        return (self.omega1, self.omega2, self.omega3)

    @property
    def deltas(self) -> tuple[float, float, float]:
        return (self.delta1, self.delta2, self.delta3)

    @property
    def gammas(self) -> tuple[float, float, float]:
        return (self.gamma2, self.gamma3, self.gamma4)

    # half-rates; these are what the closed-form lineshapes are written in
    @property
    def gbar2(self) -> float:
        return self.gamma2 / 2.0

    @property
    def gbar3(self) -> float:
        return self.gamma3 / 2.0

    @property
    def gbar4(self) -> float:
        return self.gamma4 / 2.0

    @property
    def level4_population_decay(self) -> float:
        return self.gamma3 if self.rho44_decay_literal else self.gamma4

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


FLOAT_FIELDS = tuple(f.name for f in dataclasses.fields(SystemParams) if f.type == "float")


def validate_params(p: SystemParams) -> SystemParams:
    """Return ``p`` unchanged if every field is finite and physically allowed."""
    for name in FLOAT_FIELDS:
        value = getattr(p, name)
        if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
            raise InvalidParameter(f"{name} must be a real number, got {value!r}")
        if not math.isfinite(value):
            raise InvalidParameter(f"{name} must be finite, got {value!r}")
    for name in ("omega1", "omega2", "omega3"):
        if getattr(p, name) < 0:
            raise InvalidRabi(f"{name} must be >= 0, got {getattr(p, name)!r}")
    for name in ("gamma2", "gamma3", "gamma4"):
        if getattr(p, name) <= 0:
            raise InvalidDecay(f"{name} must be > 0, got {getattr(p, name)!r}")
    return p


def rhs(p: SystemParams, rho: np.ndarray) -> np.ndarray:
    """Time derivative of a Hermitian density matrix, written out term by term.

    The nine independent equations are evaluated for the upper triangle and the
    populations of levels 2-4; the lower triangle follows by conjugation and the
    ground-state population derivative closes the trace.
    """
    r = np.asarray(rho, dtype=complex)
    o1, o2, o3 = p.omegas
    d1, d2, d3 = p.deltas
    g2, g3, g4 = p.gammas
    g44 = p.level4_population_decay
    r11, r22, r33, r44 = r[0, 0], r[1, 1], r[2, 2], r[3, 3]
    r12, r13, r14 = r[0, 1], r[0, 2], r[0, 3]
    r23, r24, r34 = r[1, 2], r[1, 3], r[2, 3]
    r21, r32, r43 = r[1, 0], r[2, 1], r[3, 2]

    d_r12 = (-1j * d1 - g2 / 2) * r12 - 1j * o1 * (r22 - r11) + 1j * o2 * r13
    d_r23 = (
        (-1j * d2 - (g2 + g3) / 2) * r23
        - 1j * o1 * r13
        - 1j * o2 * (r33 - r22)
        + 1j * o3 * r24
    )
    d_r34 = (-1j * d3 - (g3 + g4) / 2) * r34 - 1j * o2 * r24 - 1j * o3 * (r44 - r33)
    d_r13 = (
        (-1j * (d1 + d2) - g3 / 2) * r13
        - 1j * o1 * r23
        + 1j * o2 * r12
        + 1j * o3 * r14
    )
    d_r14 = (-1j * (d1 + d2 + d3) - g4 / 2) * r14 - 1j * o1 * r24 + 1j * o3 * r13
    d_r24 = (
        (-1j * (d2 + d3) - (g2 + g4) / 2) * r24
        - 1j * o1 * r14
        - 1j * o2 * r34
        + 1j * o3 * r23
    )
    d_r22 = -g2 * r22 + 1j * o1 * (r21 - r12) + 1j * o2 * (r23 - r32)
    d_r33 = -g3 * r33 + 1j * o3 * (r34 - r43) - 1j * o2 * (r23 - r32)
    d_r44 = -g44 * r44 - 1j * o3 * (r34 - r43)

    out = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    out[1, 1] = d_r22.real
    out[2, 2] = d_r33.real
    out[3, 3] = d_r44.real
    out[0, 0] = -(out[1, 1] + out[2, 2] + out[3, 3])
    for (i, j), value in {
        (0, 1): d_r12,
        (1, 2): d_r23,
        (2, 3): d_r34,
        (0, 2): d_r13,
        (0, 3): d_r14,
        (1, 3): d_r24,
    }.items():
        out[i, j] = value
        out[j, i] = np.conj(value)
    return out


def hamiltonian(p: SystemParams) -> np.ndarray:
    """Rotating-frame Hamiltonian generating the coherent part of :func:`rhs`."""
    h = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    h[1, 1] = -p.delta1
    h[2, 2] = -(p.delta1 + p.delta2)
    h[3, 3] = -(p.delta1 + p.delta2 + p.delta3)
    for k, omega in enumerate(p.omegas):
        h[k, k + 1] = h[k + 1, k] = omega
    return h


def build_liouvillian(p: SystemParams) -> np.ndarray:
    """16x16 generator ``L`` with ``vec(drho/dt) = L @ vec(rho)`` (row-major vec).

    Built from the Hamiltonian commutator plus diagonal decay, independently of
    the term-by-term :func:`rhs`; the two are cross-checked in the test suite.
    """
    h = hamiltonian(p)
    eye = np.eye(N_LEVELS)
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))

    level_rates = np.array([0.0, p.gamma2, p.gamma3, p.gamma4])
    for i in range(N_LEVELS):
        for j in range(N_LEVELS):
            if i != j:
                lv[i * N_LEVELS + j, i * N_LEVELS + j] -= (level_rates[i] + level_rates[j]) / 2

    population_rates = (p.gamma2, p.gamma3, p.level4_population_decay)
    for k, rate in zip(range(1, N_LEVELS), population_rates):
        kk = POPULATION_INDICES[k]
        lv[kk, kk] -= rate
        # every excited level relaxes straight to the ground state
        lv[POPULATION_INDICES[0], kk] += rate
    return lv


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(DIM)


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(N_LEVELS, N_LEVELS)


def basis_state(level: int) -> np.ndarray:
    """Projector onto ``level`` (1-based)."""
    rho = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    rho[level - 1, level - 1] = 1.0
    return rho


def ground_state() -> np.ndarray:
    return basis_state(1)


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix (Hermitian, positive, unit trace)."""
    a = rng.normal(size=(N_LEVELS, N_LEVELS)) + 1j * rng.normal(size=(N_LEVELS, N_LEVELS))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def hermiticity_error(rho: np.ndarray) -> float:
    return float(np.max(np.abs(rho - rho.conj().T)))


def trace_error(rho: np.ndarray) -> float:
    return float(abs(np.trace(rho) - 1.0))


def min_eigenvalue(rho: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0])


def absorption(rho: np.ndarray, lower: int) -> float:
    """Absorption on the ``lower`` -> ``lower+1`` transition (1-based ``lower``).

    This is ``Im rho[lower, lower+1]`` of the upper triangle, i.e. minus the
    imaginary part of the lower-triangle element.  It is positive for an
    absorbing transition under the equations of :func:`rhs`.
    """
    return float(np.imag(rho[lower - 1, lower]))
