"""Perturbative steady states of the ladder.

Two hierarchies are implemented:

* weak middle coupling -- expansion in ``omega2``.  Order 0 is the driven
  1-2 two-level atom; order 1 adds the coherences rho23, rho13, rho14, rho24;
  order 2 corrects the populations and rho12, rho34.
* weak probe -- first order in ``omega1`` with everything else to all orders,
  giving the ground-state absorption lineshape.

Each hierarchy quantity is available three ways, selected by ``method``:

* ``"literal"`` -- the closed-form expressions in their literal
  form, typos included.  Kept so their disagreement with the equations of motion
  can be measured (see :mod:`ladder4.audit`).
* ``"closed"`` -- closed forms re-derived from the steady-state equations.
* ``"solve"`` -- a direct linear solve of the same steady-state equations;
  this is the arbiter whenever the other two disagree.

Element labels (``"rho12"`` ...) always refer to the upper triangle of the
density matrix ``rho[i-1, j-1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .errors import DivergentApproximation, DomainError, ResonantDenominator
from .model import N_LEVELS, SystemParams

Method = Literal["literal", "closed", "solve"]

#: relative size below which a denominator counts as vanishing
RESONANCE_TOLERANCE = 1e-12

ORDER0_SUPPORT = frozenset({"rho11", "rho12", "rho22"})
ORDER1_SUPPORT = frozenset({"rho23", "rho13", "rho14", "rho24"})
ORDER2_SUPPORT = frozenset({"rho11", "rho12", "rho22", "rho33", "rho44", "rho34"})


def _index(label: str) -> tuple[int, int]:
    return int(label[3]) - 1, int(label[4]) - 1


@dataclass(frozen=True)
class PerturbativeSolution:
    """Order-by-order corrections and their sum.

    ``corrections[k]`` maps element labels to the order-``k`` correction;
    ``total`` is the Hermitian matrix assembled from every order present.
    """

    order: int
    corrections: dict[int, dict[str, complex]] = field(default_factory=dict)

    @property
    def total(self) -> np.ndarray:
        rho = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
        for terms in self.corrections.values():
            for label, value in terms.items():
                i, j = _index(label)
                rho[i, j] += value
                if i != j:
                    rho[j, i] += np.conj(value)
        return rho

    def element(self, label: str) -> complex:
        return complex(sum(terms.get(label, 0.0) for terms in self.corrections.values()))


@dataclass(frozen=True)
class LFactors:
    """Complex rates and denominators shared by the closed forms."""

    L1: complex
    L2: complex
    L12: complex
    L23: complex
    L123: complex
    D1: float
    D2: complex
    D3: float
    gamma_sum: float
    gamma_pairs: float
    T1: float
    G0: float


def l_factors(p: SystemParams) -> LFactors:
    d1, d2, d3 = p.deltas
    g2, g3, g4 = p.gammas
    gb2, gb3, gb4 = p.gbar2, p.gbar3, p.gbar4
    o1s, o3s = p.omega1**2, p.omega3**2
    L1 = -1j * d1 - g2 / 2
    L2 = -1j * d2 - (g2 + g3) / 2
    L12 = -1j * (d1 + d2) - g3 / 2
    L23 = -1j * (d2 + d3) - (g2 + g4) / 2
    L123 = -1j * (d1 + d2 + d3) - g4 / 2
    D1 = gb2 * (d1**2 + gb2**2 + 4 * o1s)
    D2 = (
        (o1s - o3s) ** 2
        + o1s * (L123 * L23 + L12 * L2)
        + o3s * (L12 * L123 + L2 * L23)
        + L12 * L23 * L123 * L2
    )
    D3 = 2 * o3s * (gb3 + gb4) ** 2 - gb3 * gb4 * (d3**2 + (gb3 + gb4) ** 2)
    gamma_sum = gb2 + gb3 + gb4
    gamma_pairs = gb2 * gb3 + gb3 * gb4 + gb4 * gb2
    T1 = (
        gb2 * gb3**2 * gb4**2
        + gb3 * gb4**2 * p.omega2**2
        + 2 * gb2 * gb3 * gb4 * o3s
        + gb4 * o3s * p.omega2**2
        + gb2 * o3s**2
    )
    G0 = gb4 * (o1s - o3s)
    return LFactors(L1, L2, L12, L23, L123, D1, D2, D3, gamma_sum, gamma_pairs, T1, G0)


def _check_denominator(den: complex, numerators, what: str) -> bool:
    """Raise if ``den`` vanishes against the numerators; return False if they are all zero."""
    scale = max((abs(n) for n in numerators), default=0.0)
    if scale == 0.0:
        return False
    if abs(den) < RESONANCE_TOLERANCE * scale:
        raise ResonantDenominator(f"{what}: |denominator| = {abs(den):.3g} vs numerator scale {scale:.3g}")
    return True


def _solve_affine(residual: Callable[[np.ndarray], np.ndarray], n: int) -> np.ndarray:
    """Solve ``residual(x) = 0`` for an affine real map ``R^n -> R^n``."""
    r0 = residual(np.zeros(n))
    a = np.empty((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        a[:, k] = residual(e) - r0
    return np.linalg.solve(a, -r0)


def _split(z) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


# ------------------------------------------------------------------ order 0


def two_level_steady_state(p: SystemParams) -> tuple[float, complex]:
    """``(rho22, rho12)`` of the driven 1-2 transition alone, in closed form."""
    gb2 = p.gbar2
    rho22 = p.omega1**2 / (p.delta1**2 + gb2**2 + 2 * p.omega1**2)
    rho12 = -1j * p.omega1 * (2 * rho22 - 1) / (1j * p.delta1 + gb2)
    return rho22, rho12


def weak_omega2_order0(p: SystemParams, method: Method = "solve") -> PerturbativeSolution:
    """Zeroth order in ``omega2``: only levels 1 and 2 are involved.

    ``method="solve"`` solves the three two-level equations with unit trace;
    ``"closed"`` uses the algebraic solution of the same system.
    """
    if method == "closed":
        rho22, rho12 = two_level_steady_state(p)
    elif method == "solve":
        L1 = -1j * p.delta1 - p.gamma2 / 2
        o1 = p.omega1

        def residual(x):
            r22, r12 = x[0], x[1] + 1j * x[2]
            r11 = 1.0 - r22
            e12 = L1 * r12 - 1j * o1 * (r22 - r11)
            e22 = -p.gamma2 * r22 + 1j * o1 * (np.conj(r12) - r12)
            return np.array([e22.real, *_split(e12)])

        x = _solve_affine(residual, 3)
        rho22, rho12 = float(x[0]), complex(x[1], x[2])
    else:
        raise ValueError(f"unknown method {method!r}")
    terms = {"rho11": complex(1.0 - rho22), "rho22": complex(rho22), "rho12": complex(rho12)}
    return PerturbativeSolution(0, {0: terms})


# ------------------------------------------------------------------ order 1

_ORDER1_LABELS = ("rho23", "rho13", "rho14", "rho24")


def _order1_literal(p: SystemParams, rho22: complex, rho12: complex) -> dict[str, complex]:
    """The first-order coherences in their literal form (three are wrong)."""
    f = l_factors(p)
    o1, o2, o3 = p.omegas
    o1s, o3s = o1**2, o3**2
    n23 = o2 * (
        o1 * rho12 * (o1s - o3s + f.L123 * f.L23)
        + 1j * rho22 * (f.L12 * f.L23 * f.L123 + f.L12 * o1s + f.L23 * o3s)
    )
    # stated with first-order superscripts on rho12, rho22; read as zeroth order
    n13 = o2 * (
        1j * rho12 * (f.L123 * f.L2 * f.L23 + f.L2 * o1s + f.L123 * o3s)
        - o1 * rho22 * (o1s - o3s + f.L123 * f.L23)
    )
    n24 = -o2 * o3 * (rho22 * (f.L12 * f.L123 - o1s + o3s) + 1j * o1 * rho12 * (f.L123 + f.L2))
    n14 = o2 * o3 * (rho22 * (o1s - o3s - f.L12 * f.L123) + 1j * o1 * rho12 * (f.L123 + f.L2))
    return _divide({"rho23": n23, "rho13": n13, "rho14": n14, "rho24": n24}, f.D2)


def _order1_closed(p: SystemParams, rho22: complex, rho12: complex) -> dict[str, complex]:
    """Cramer's-rule solution of the first-order system over its determinant ``D2``."""
    f = l_factors(p)
    o1, o2, o3 = p.omegas
    o1s, o3s = o1**2, o3**2
    split = o1s - o3s
    n23 = o2 * (
        o1 * rho12 * (split + f.L123 * f.L23)
        - 1j * rho22 * (f.L12 * f.L23 * f.L123 + f.L12 * o1s + f.L23 * o3s)
    )
    n13 = o2 * (
        o1 * rho22 * (split + f.L123 * f.L23)
        - 1j * rho12 * (f.L123 * f.L2 * f.L23 + f.L2 * o1s + f.L123 * o3s)
    )
    n14 = o2 * o3 * (rho12 * (split - f.L2 * f.L23) - 1j * o1 * rho22 * (f.L12 + f.L23))
    n24 = -o2 * o3 * (rho22 * (f.L12 * f.L123 - split) + 1j * o1 * rho12 * (f.L123 + f.L2))
    return _divide({"rho23": n23, "rho13": n13, "rho14": n14, "rho24": n24}, f.D2)


def _divide(nums: dict[str, complex], den: complex, what: str = "first-order coherences"):
    if not _check_denominator(den, nums.values(), what):
        return {k: 0j for k in nums}
    return {k: complex(v / den) for k, v in nums.items()}


def _order1_solve(p: SystemParams, rho22: complex, rho12: complex) -> dict[str, complex]:
    f = l_factors(p)
    o1, o2, o3 = p.omegas
    # unknowns (rho23, rho13, rho14, rho24)
    m = np.array(
        [
            [f.L2, -1j * o1, 0, 1j * o3],
            [-1j * o1, f.L12, 1j * o3, 0],
            [0, 1j * o3, f.L123, -1j * o1],
            [1j * o3, 0, -1j * o1, f.L23],
        ],
        dtype=complex,
    )
    b = -np.array([1j * o2 * rho22, 1j * o2 * rho12, 0, 0], dtype=complex)
    x = np.linalg.solve(m, b)
    return dict(zip(_ORDER1_LABELS, (complex(v) for v in x)))


_ORDER1 = {"literal": _order1_literal, "closed": _order1_closed, "solve": _order1_solve}


def weak_omega2_order1_coherences(p: SystemParams, method: Method = "closed") -> PerturbativeSolution:
    """First-order coherences driven by the zeroth-order two-level state."""
    if method not in _ORDER1:
        raise ValueError(f"unknown method {method!r}")
    zeroth = weak_omega2_order0(p)
    rho22, rho12 = zeroth.element("rho22"), zeroth.element("rho12")
    first = _ORDER1[method](p, rho22, rho12)
    return PerturbativeSolution(1, {0: zeroth.corrections[0], 1: first})


# ------------------------------------------------------------------ order 2


def _order2_literal(p: SystemParams, first: dict[str, complex], zeroth: dict[str, complex]):
    """Second-order corrections in their literal form.

    The literal rho22 and rho12 expressions include the zeroth order; it is
    subtracted here so every entry is a pure second-order correction.
    """
    o1, o2, o3 = p.omegas
    d1, _, d3 = p.deltas
    gb2, gb3, gb4 = p.gbar2, p.gbar3, p.gbar4
    g34 = gb3 + gb4
    f = l_factors(p)
    r23, r13, r24 = first["rho23"], first["rho13"], first["rho24"]

    n33 = (gb4 * o2 * (d3**2 + g34**2) - 2 * o2 * o3**2 * g34) * r23.imag + 2 * o2 * o3 * gb4 * (
        d3 * r24.imag + g34 * r24.real
    )
    n44 = 2 * o2 * o3 * gb3 * (d3 * r24.imag + g34 * r24.real) + o2 * o3**2 * g34 * r23.imag
    n34 = 1j * (
        2j * o2 * o3**2 * g34 * r24.imag
        - gb3 * gb4 * o2 * (1j * d3 - g34) * r24
        + gb4 * o2 * o3 * (1j * d3 - g34) * r23.imag
    )
    upper = _divide({"rho33": n33, "rho44": n44, "rho34": n34}, f.D3, "second-order upper block")
    remaining = 1.0 - upper["rho33"].real - upper["rho44"].real
    n22 = (
        2 * gb2 * o1**2 * remaining
        - o2 * r23.imag * (d1**2 + gb2**2)
        + 2 * o1 * o2 * (d1 * r13.imag + gb2 * r13.real)
    )
    n12 = -1j * (
        gb2 * o1 * (1j * d1 - gb2) * remaining
        + gb2 * o2 * (1j * d1 - gb2) * r13
        + 2 * o1 * o2 * (1j * d1 - gb2) * r23.imag
        - 2 * o1**2 * o2 * (r13 - np.conj(r13))
    )
    lower = _divide({"rho22": n22, "rho12": n12}, f.D1, "second-order lower block")
    return {
        "rho22": lower["rho22"] - zeroth["rho22"],
        "rho12": lower["rho12"] - zeroth["rho12"],
        **upper,
    }


def _order2_closed(p: SystemParams, first: dict[str, complex], zeroth: dict[str, complex]):
    """Algebraic solution of the second-order equations, upper block first."""
    o1, o2, o3 = p.omegas
    d1, _, d3 = p.deltas
    gb2, gb3 = p.gbar2, p.gbar3
    g34 = gb3 + p.gbar4
    h4 = p.level4_population_decay / 2
    y = first["rho23"].imag
    u, v = first["rho24"].real, first["rho24"].imag
    pr, qi = first["rho13"].real, first["rho13"].imag

    den3 = gb3 * h4 * (d3**2 + g34**2) + o3**2 * g34 * (gb3 + h4)
    n33 = o2 * (h4 * (d3**2 + g34**2) * y + h4 * o3 * (d3 * v + g34 * u) + g34 * o3**2 * y)
    n44 = o2 * o3 * (g34 * o3 * y - gb3 * (d3 * v + g34 * u))
    n34 = o2 * (h4 * d3 * (o3 * y - gb3 * u) + v * (gb3 * g34 * h4 + o3**2 * (gb3 + h4))) + 1j * h4 * o2 * (
        g34 * o3 * y - gb3 * (d3 * v + g34 * u)
    )
    upper = _divide({"rho33": n33, "rho44": n44, "rho34": n34}, den3, "second-order upper block")
    s = upper["rho33"].real + upper["rho44"].real

    den1 = gb2 * (d1**2 + gb2**2 + 2 * o1**2)
    n22 = -s * gb2 * o1**2 + o1 * o2 * (d1 * qi + gb2 * pr) - o2 * (d1**2 + gb2**2) * y
    n12 = (
        -s * d1 * gb2 * o1 + d1 * gb2 * o2 * pr + 2 * d1 * o1 * o2 * y - o2 * (gb2**2 + 2 * o1**2) * qi
    ) + 1j * gb2 * (-s * gb2 * o1 + d1 * o2 * qi + gb2 * o2 * pr + 2 * o1 * o2 * y)
    lower = _divide({"rho22": n22, "rho12": n12}, den1, "second-order lower block")
    return {**lower, **upper}


def _order2_solve(p: SystemParams, first: dict[str, complex], zeroth: dict[str, complex]):
    f = l_factors(p)
    o1, o2, o3 = p.omegas
    g2, g3 = p.gamma2, p.gamma3
    g44 = p.level4_population_decay
    L34 = -1j * p.delta3 - (p.gamma3 + p.gamma4) / 2
    r23, r13, r24 = first["rho23"], first["rho13"], first["rho24"]

    def upper(x):
        r33, r44, r34 = x[0], x[1], x[2] + 1j * x[3]
        e34 = L34 * r34 - 1j * o2 * r24 - 1j * o3 * (r44 - r33)
        e33 = -g3 * r33 + 1j * o3 * (r34 - np.conj(r34)) - 1j * o2 * (r23 - np.conj(r23))
        e44 = -g44 * r44 - 1j * o3 * (r34 - np.conj(r34))
        return np.array([*_split(e34), e33.real, e44.real])

    x = _solve_affine(upper, 4)
    r33, r44, r34 = float(x[0]), float(x[1]), complex(x[2], x[3])

    def lower(y):
        r22, r12 = y[0], y[1] + 1j * y[2]
        r11 = -(r22 + r33 + r44)
        e12 = f.L1 * r12 - 1j * o1 * (r22 - r11) + 1j * o2 * r13
        e22 = -g2 * r22 + 1j * o1 * (np.conj(r12) - r12) + 1j * o2 * (r23 - np.conj(r23))
        return np.array([e22.real, *_split(e12)])

    y = _solve_affine(lower, 3)
    return {"rho22": y[0], "rho12": complex(y[1], y[2]), "rho33": r33, "rho44": r44, "rho34": r34}


_ORDER2 = {"literal": _order2_literal, "closed": _order2_closed, "solve": _order2_solve}


def weak_omega2_order2(p: SystemParams, method: Method = "closed") -> PerturbativeSolution:
    """Second-order corrections to populations and the rho12, rho34 coherences.

    The rho33/rho44/rho34 block depends only on the first-order coherences and
    is solved first; the rho22/rho12 block then takes ``rho33 + rho44`` as
    input through the trace.  The first-order coherences come from the same
    ``method``.
    """
    if method not in _ORDER2:
        raise ValueError(f"unknown method {method!r}")
    first_sol = weak_omega2_order1_coherences(p, method=method)
    zeroth, first = first_sol.corrections[0], first_sol.corrections[1]
    second = {k: complex(v) for k, v in _ORDER2[method](p, first, zeroth).items()}
    for k in ("rho22", "rho33", "rho44"):
        second[k] = complex(second[k].real)
    second["rho11"] = -(second["rho22"] + second["rho33"] + second["rho44"])
    return PerturbativeSolution(2, {0: zeroth, 1: first, 2: second})


def weak_omega2(p: SystemParams, order: int, method: Method = "closed") -> PerturbativeSolution:
    """Assembled weak-``omega2`` solution through ``order`` (0, 1 or 2)."""
    if order == 0:
        return weak_omega2_order0(p, method="closed" if method == "literal" else method)
    if order == 1:
        return weak_omega2_order1_coherences(p, method=method)
    if order == 2:
        return weak_omega2_order2(p, method=method)
    raise ValueError(f"order must be 0, 1 or 2, got {order!r}")


# ------------------------------------------------- resonance approximations


def _require_zero_detuning(p: SystemParams, what: str) -> None:
    if any(d != 0.0 for d in p.deltas):
        raise DomainError(f"{what} holds only for zero detunings, got {p.deltas}")


@dataclass(frozen=True)
class ResonanceLimit:
    """Strong-drive approximations to the second-order populations at zero detuning.

    ``values`` holds ``rho22`` and ``im_rho21`` (assembled through second
    order), ``im_rho34``, ``rho33`` and ``rho44`` (second-order parts).
    ``regularizers`` is the value of the additive denominator term used for
    each entry.  ``divergent`` marks ``omega1 == omega3``, where the leading
    denominators vanish.
    """

    values: dict[str, float]
    regularizers: dict[str, float]
    divergent: bool


def resonance_limit(p: SystemParams, regularizer: float | Literal["exact"] = "exact") -> ResonanceLimit:
    """Leading-order (``omega >> Gamma``) second-order populations at zero detuning.

    Every entry has the form ``lead + N / (D0 + G)`` where ``D0`` is the leading
    resonant denominator (proportional to ``omega1**2 - omega3**2``) and ``G``
    collects the dropped decay-rate terms.  With a numeric ``regularizer`` the
    same ``G`` is used everywhere; ``0`` gives the bare approximation, which
    raises :class:`DivergentApproximation` at ``omega1 == omega3``.  With
    ``"exact"`` each ``G`` is recovered so that the entry reproduces the
    directly solved second-order value, which makes the bare numerators'
    resonance structure inspectable without the pole.
    """
    _require_zero_detuning(p, "resonance_limit")
    o1, o2, o3 = p.omegas
    gb2, gb3, gb4 = p.gbar2, p.gbar3, p.gbar4
    rho22_0, rho12_0 = two_level_steady_state(p)
    im21_0 = float(np.imag(rho12_0))  # absorption convention, positive
    split = o1**2 - o3**2
    divergent = split == 0.0

    entries = {
        "rho22": (rho22_0, o1**2 * o2**2 * o3**2 * (gb3 * rho22_0 - o1 * im21_0), gb4 * split),
        "im_rho21": (
            im21_0,
            4 * o2**2 * o3**2 * o1 * (gb2 * rho22_0 * (2 * gb3 - gb4) + im21_0 * (-2 * gb2 + gb4) * o1),
            gb4 * split,
        ),
        "im_rho34": (0.0, gb4 * o2**2 * o3 * (-rho22_0 * gb3 + o1 * im21_0), 2 * gb4 * o3**2 * split),
        "rho33": (
            0.0,
            o2**2 * (2 * o3**2 * (gb4 - gb3) * rho22_0 + 2 * o3**2 * o1 * im21_0),
            2 * gb4 * o3**2 * split,
        ),
        "rho44": (0.0, 2 * o2**2 * o3**2 * (gb3 * rho22_0 - o1 * im21_0), 2 * gb4 * o3**2 * split),
    }

    if regularizer == "exact":
        second = weak_omega2_order2(p, method="solve").corrections[2]
        targets = {
            "rho22": rho22_0 + second["rho22"].real,
            "im_rho21": im21_0 + second["rho12"].imag,
            "im_rho34": second["rho34"].imag,
            "rho33": second["rho33"].real,
            "rho44": second["rho44"].real,
        }
    else:
        targets = None

    values, regs = {}, {}
    for key, (lead, num, den0) in entries.items():
        if num == 0.0:
            values[key], regs[key] = float(lead), 0.0
            continue
        if targets is not None:
            excess = targets[key] - lead
            g = num / excess - den0 if excess != 0.0 else np.inf
        else:
            g = float(regularizer)
        den = den0 + g
        if den == 0.0:
            raise DivergentApproximation(f"{key}: resonant denominator vanishes at omega1 = omega3")
        values[key], regs[key] = float(lead + num / den), float(g)
    return ResonanceLimit(values, regs, divergent)


def three_photon_coherences(p: SystemParams) -> dict[str, complex]:
    """Leading strong-drive first-order coherences at zero detuning.

    Each is a two-level quantity times ``omega2`` over
    ``G0 = gbar4 (omega1**2 - omega3**2)``, so all three change sign together
    as ``omega1`` crosses ``omega3``.
    """
    _require_zero_detuning(p, "three_photon_coherences")
    o1, o2, o3 = p.omegas
    rho22_0, rho12_0 = two_level_steady_state(p)
    im21_0 = float(np.imag(rho12_0))
    g0 = p.gbar4 * (o1**2 - o3**2)
    nums = {"rho23": o2 * im21_0, "rho13": o1 * o2 * rho22_0, "rho24": o2 * o3 * rho22_0}
    if not _check_denominator(g0, nums.values(), "three-photon coherences"):
        return {k: 0j for k in nums}
    return {k: complex(v / g0) for k, v in nums.items()}


# ------------------------------------------------------------ weak probe


def weak_probe_factor(p: SystemParams) -> complex:
    """``omega1 (L12 + W3/L123) / (W2 + L1 L12 + W3 L1/L123)`` with ``Wk = omega_k**2``.

    The first-order coherence is ``rho12 = -1j * factor``; the absorption is
    therefore ``-factor.real``.
    """
    f = l_factors(p)
    o1s, o2s, o3s = p.omega1**2, p.omega2**2, p.omega3**2
    num = p.omega1 * (f.L12 + o3s / f.L123)
    den = o2s + f.L1 * f.L12 + o3s * f.L1 / f.L123
    if not _check_denominator(den, (num,), "weak-probe absorption"):
        return 0j
    return complex(num / den)


def weak_probe_rho12(p: SystemParams, method: Method = "closed") -> complex:
    """First-order-in-``omega1`` coherence rho12 with ``rho11 = 1``.

    ``"solve"`` solves the three coupled equations for rho12, rho13, rho14
    directly.
    """
    if method in ("closed", "literal"):
        return -1j * weak_probe_factor(p)
    if method == "solve":
        f = l_factors(p)
        _, o2, o3 = p.omegas
        m = np.array(
            [
                [f.L1, 1j * o2, 0],
                [1j * o2, f.L12, 1j * o3],
                [0, 1j * o3, f.L123],
            ],
            dtype=complex,
        )
        # rho22 - rho11 = -1 at this order
        b = np.array([-1j * p.omega1, 0, 0], dtype=complex)
        return complex(np.linalg.solve(m, b)[0])
    raise ValueError(f"unknown method {method!r}")


def weak_probe_absorption(p: SystemParams, method: Method = "closed") -> float:
    return float(np.imag(weak_probe_rho12(p, method=method)))
