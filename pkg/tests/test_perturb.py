import numpy as np
import pytest

from ladder4.errors import DivergentApproximation, DomainError, ResonantDenominator
from ladder4.model import SystemParams
from ladder4.perturb import (
    l_factors,
    resonance_limit,
    three_photon_coherences,
    two_level_steady_state,
    weak_omega2,
    weak_omega2_order0,
    weak_omega2_order1_coherences,
    weak_omega2_order2,
    weak_probe_absorption,
    weak_probe_rho12,
)
from ladder4.steady import steady_state_exact


def _points(rng, n=15, literal=False):
    for _ in range(n):
        yield SystemParams.from_triples(
            rng.uniform(0.5, 30, 3), rng.uniform(-20, 20, 3), rng.uniform(0.5, 8, 3), literal
        )


def test_order0_closed_matches_solve(rng):
    for p in _points(rng):
        a = weak_omega2_order0(p, "closed").corrections[0]
        b = weak_omega2_order0(p, "solve").corrections[0]
        for k in a:
            assert a[k] == pytest.approx(b[k], rel=1e-12, abs=1e-15)


def test_order0_on_resonance():
    p = SystemParams(omega1=20.0)
    rho22, rho12 = two_level_steady_state(p)
    assert rho22 == pytest.approx(400 / 809)
    assert rho12.imag > 0 and abs(rho12.real) < 1e-15


@pytest.mark.parametrize("literal", [False, True])
def test_order1_closed_matches_solve(rng, literal):
    for p in _points(rng, literal=literal):
        a = weak_omega2_order1_coherences(p, "closed").corrections[1]
        b = weak_omega2_order1_coherences(p, "solve").corrections[1]
        for k in a:
            assert abs(a[k] - b[k]) <= 1e-10 * max(abs(b[k]), 1e-12)


@pytest.mark.parametrize("literal", [False, True])
def test_order2_closed_matches_solve(rng, literal):
    for p in _points(rng, literal=literal):
        a = weak_omega2_order2(p, "closed").corrections[2]
        b = weak_omega2_order2(p, "solve").corrections[2]
        for k in a:
            assert abs(a[k] - b[k]) <= 1e-9 * max(abs(b[k]), 1e-12), k


def test_order2_keeps_trace(rng):
    for p in _points(rng, n=5):
        sol = weak_omega2_order2(p)
        assert np.trace(sol.total).real == pytest.approx(1.0, abs=1e-13)
        assert np.allclose(sol.total, sol.total.conj().T)


def test_literal_first_order_forms():
    p = SystemParams(20.0, 1.0, 10.0, 1.5, -0.7, 2.2)
    lit = weak_omega2_order1_coherences(p, "literal").corrections[1]
    ref = weak_omega2_order1_coherences(p, "solve").corrections[1]
    assert lit["rho24"] == pytest.approx(ref["rho24"], rel=1e-12)
    assert lit["rho13"] == pytest.approx(-ref["rho13"], rel=1e-12)
    assert abs(lit["rho23"] - ref["rho23"]) > 0.1 * abs(ref["rho23"])


def test_literal_lower_denominator_has_doubled_drive_term():
    p = SystemParams(omega1=3.0, delta1=1.0)
    assert l_factors(p).D1 == pytest.approx(p.gbar2 * (1.0 + p.gbar2**2 + 4 * 9.0))


@pytest.mark.parametrize("order, expected", [(1, 2.0), (2, 3.0)])
def test_error_scales_with_next_order(order, expected):
    # order-k truncation leaves an O(omega2^(k+1)) remainder somewhere in rho
    errs = []
    grid = (0.1, 0.05, 0.025)
    for w2 in grid:
        p = SystemParams(20.0, w2, 10.0)
        errs.append(np.max(np.abs(weak_omega2(p, order).total - steady_state_exact(p).rho)))
    slope = np.polyfit(np.log(grid), np.log(errs), 1)[0]
    assert slope >= expected - 0.1


def test_weak_omega2_rejects_bad_order():
    with pytest.raises(ValueError):
        weak_omega2(SystemParams(omega1=1.0), 3)
    with pytest.raises(ValueError):
        weak_omega2_order2(SystemParams(), method="guess")


def test_resonance_limit_exact_reproduces_second_order():
    p = SystemParams(40.0, 2.0, 5.0)
    lim = resonance_limit(p)
    second = weak_omega2_order2(p, "solve").corrections[2]
    assert lim.values["rho33"] == pytest.approx(second["rho33"].real, rel=1e-10)
    assert lim.values["rho44"] == pytest.approx(second["rho44"].real, rel=1e-10)
    assert lim.values["rho44"] > 0 and lim.values["rho33"] > 0
    assert not lim.divergent


def test_resonance_limit_bare_pole():
    p = SystemParams(20.0, 2.0, 20.0)
    with pytest.raises(DivergentApproximation):
        resonance_limit(p, 0.0)
    lim = resonance_limit(p)
    assert lim.divergent
    assert all(np.isfinite(v) for v in lim.values.values())


def test_resonance_limit_needs_zero_detuning():
    with pytest.raises(DomainError):
        resonance_limit(SystemParams(20.0, 2.0, 10.0, delta1=0.1))


def test_resonance_limit_rho44_grows_toward_resonance():
    vals = [resonance_limit(SystemParams(20.0, 2.0, w3)).values["rho44"] for w3 in (10, 14, 18, 20)]
    assert np.all(np.diff(vals) > 0)


def test_three_photon_coherences_flip_sign_across_resonance():
    below = three_photon_coherences(SystemParams(20.0, 1.0, 10.0))
    above = three_photon_coherences(SystemParams(20.0, 1.0, 30.0))
    for k in below:
        assert np.sign(below[k].real or below[k].imag) == -np.sign(above[k].real or above[k].imag)
    with pytest.raises(ResonantDenominator):
        three_photon_coherences(SystemParams(20.0, 1.0, 20.0))


def test_three_photon_outer_coherences_order_of_magnitude():
    p = SystemParams(20.0, 1.0, 10.0)
    approx = three_photon_coherences(p)
    first = weak_omega2(p, 1, "solve").corrections[1]
    for k in ("rho13", "rho24"):
        ratio = abs(approx[k]) / abs(first[k])
        assert 0.3 < ratio < 3.0


@pytest.mark.xfail(strict=True, reason="the leading rho23 estimate misses the solved value by ~16x")
def test_three_photon_rho23_order_of_magnitude():
    p = SystemParams(20.0, 1.0, 10.0)
    ratio = abs(three_photon_coherences(p)["rho23"]) / abs(weak_omega2(p, 1, "solve").corrections[1]["rho23"])
    assert 0.3 < ratio < 3.0


def test_weak_probe_closed_matches_solve(rng):
    for p in _points(rng):
        assert weak_probe_rho12(p, "closed") == pytest.approx(weak_probe_rho12(p, "solve"), rel=1e-11)
    with pytest.raises(ValueError):
        weak_probe_rho12(SystemParams(), "guess")


def test_weak_probe_matches_exact_at_small_probe(rng):
    for p in _points(rng, n=5):
        q = p.replace(omega1=1e-3)
        exact = steady_state_exact(q).rho[0, 1]
        assert weak_probe_rho12(q) == pytest.approx(exact, rel=1e-5)


def test_weak_probe_absorbs(rng):
    for p in _points(rng):
        assert weak_probe_absorption(p) > 0
    assert weak_probe_absorption(SystemParams()) == 0.0
