import numpy as np
import pytest

from ladder4.errors import TooFewSamples
from ladder4.lineshape import (
    AbsorptionProfile,
    doublet_absorption,
    doublet_profile,
    eit_window_width,
    find_peaks,
    lorentzian_absorption,
    lorentzian_half_width,
    lorentzian_profile,
    symmetric_grid,
    three_peak_absorption,
    three_peak_profile,
)
from ladder4.model import SystemParams
from ladder4.perturb import weak_probe_absorption


def test_symmetric_grid_contains_zero():
    g = symmetric_grid(60.0, 0.05)
    assert g.size == 2401 and g[1200] == 0.0 and g[0] == -60.0 and g[-1] == 60.0


def test_profile_validation():
    with pytest.raises(ValueError):
        AbsorptionProfile("delta1", [0, 1, 1], [0, 0, 0])
    with pytest.raises(ValueError):
        AbsorptionProfile("delta1", [0, 1], [0, np.nan])
    with pytest.raises(ValueError):
        AbsorptionProfile("delta1", [0, 1], [0])
    with pytest.raises(ValueError):
        AbsorptionProfile("gamma2", [0, 1], [0, 1])


def test_lorentzian_peak_and_width():
    x = np.arange(-20, 20.0001, 0.01)
    w, x0 = 0.7, 1.234
    prof = AbsorptionProfile("delta1", x, 3.0 / ((x - x0) ** 2 + w**2))
    (pk,) = find_peaks(prof).peaks
    assert abs(pk.location - x0) <= 0.001
    assert pk.interpolated
    assert pk.fwhm == pytest.approx(2 * w, rel=0.02)


def test_monotone_profile_has_no_peaks():
    x = np.linspace(0, 1, 50)
    assert find_peaks(AbsorptionProfile("omega1", x, x**2)).count == 0


def test_too_few_samples():
    with pytest.raises(TooFewSamples):
        find_peaks(AbsorptionProfile("delta1", [0.0, 1.0], [1.0, 2.0]))


def test_plateau_reports_leftmost_sample():
    x = np.arange(7.0)
    (pk,) = find_peaks(AbsorptionProfile("delta1", x, [0, 1, 3, 3, 3, 1, 0])).peaks
    assert pk.index == 2 and pk.location == 2.0 and not pk.interpolated


def test_half_level_not_reached_is_unbounded():
    # the right flank stays above half height until the grid ends
    x = np.arange(8.0)
    (pk,) = find_peaks(AbsorptionProfile("delta1", x, [0, 10, 9, 8, 7, 6.5, 6.2, 6.1])).peaks
    assert pk.fwhm is None and not pk.bounded and pk.baseline == 0.0


def test_doublet_peaks_near_plus_minus_omega2():
    prof = doublet_profile(SystemParams(omega1=1.0, omega2=20.0))
    rep = find_peaks(prof)
    assert rep.count == 2
    assert np.allclose(sorted(rep.locations), [-20, 20], atol=0.5)


def test_doublet_line_center():
    for w2 in (0.0, 2.0, 20.0):
        p = SystemParams(omega1=4.0, omega2=w2)
        want = p.omega1 * p.gbar3 / (p.gbar2 * p.gbar3 + w2**2)
        assert float(doublet_absorption(p, 0.0)) == pytest.approx(want, rel=1e-12)


def test_doublet_without_coupling_is_single_lorentzian():
    p = SystemParams(omega1=2.0)
    x = symmetric_grid(60.0, 0.5)
    assert np.allclose(doublet_absorption(p, x), p.omega1 * p.gbar2 / (x**2 + p.gbar2**2), rtol=1e-13)


def test_three_peak_count(fig9b):
    rep = find_peaks(three_peak_profile(fig9b))
    assert rep.count == 3
    assert min(abs(x) for x in rep.locations) <= 0.05


def test_three_peak_collapses_to_doublet(fig9b):
    p = fig9b.replace(omega3=0.0)
    x = symmetric_grid()
    assert np.max(np.abs(three_peak_absorption(p, x) - doublet_absorption(p, x))) <= 1e-12


@pytest.mark.parametrize("fn", [doublet_absorption, three_peak_absorption, lorentzian_absorption])
def test_lineshapes_even_and_nonnegative(fig9b, fn):
    x = symmetric_grid(60.0, 0.05)
    v = fn(fig9b, x)
    assert np.array_equal(v, v[::-1])
    assert np.all(v >= 0)


@pytest.mark.parametrize(
    "fn, var, fixed",
    [
        (doublet_absorption, "delta1", {"omega3": 0.0}),
        (three_peak_absorption, "delta1", {}),
        (lorentzian_absorption, "delta3", {}),
    ],
)
def test_lineshapes_specialise_weak_probe(fig9b, fn, var, fixed):
    p = fig9b.replace(**fixed)
    for x in np.linspace(-60, 60, 97):
        got = float(fn(p, x))
        want = weak_probe_absorption(p.replace(**{var: float(x)}))
        assert got == pytest.approx(want, rel=1e-10)


def test_lorentzian_single_central_peak(fig9b):
    rep = find_peaks(lorentzian_profile(fig9b))
    assert rep.count == 1 and abs(rep.locations[0]) <= 0.02
    assert rep.peaks[0].fwhm < 6.0


def test_lorentzian_half_width_matches_profile(fig9b):
    # for a Lorentzian on a pedestal the FWHM above the pedestal is twice the half width
    x = np.arange(-20, 20.0001, 0.001)
    prof = AbsorptionProfile("delta3", x, lorentzian_absorption(fig9b, x))
    pk = find_peaks(prof).peaks[0]
    pedestal = float(lorentzian_absorption(fig9b, 1e9))
    half = pedestal + (pk.height - pedestal) / 2
    inside = x[prof.values >= half]
    assert inside[-1] - inside[0] == pytest.approx(2 * lorentzian_half_width(fig9b), abs=0.003)


def test_eit_width_literal_radicand():
    w = eit_window_width(SystemParams(omega2=20.0))
    assert not w.imaginary
    assert w.radicand == pytest.approx((9 + 0.25 - 800) ** 2 - 4 * (1.5 + 400), rel=1e-14)
    assert w.value == pytest.approx(np.sqrt(w.radicand))


def test_eit_width_negative_radicand_flagged():
    # half-rates 1/2: (1/4 + 1/4)^2 - 4 * 1/4 < 0
    w = eit_window_width(SystemParams(gamma2=1.0, gamma3=1.0))
    assert w.imaginary and np.isnan(w.value) and w.radicand == pytest.approx(-0.75)


def test_eit_width_zero_radicand_is_real():
    w = eit_window_width(SystemParams(gamma2=2.0, gamma3=2.0))
    assert not w.imaginary and w.value == 0.0 and w.radicand == 0.0


def test_eit_width_grows_with_coupling():
    ws = [eit_window_width(SystemParams(omega2=w2)).value for w2 in (10, 15, 20, 30, 40)]
    assert np.all(np.diff(ws) > 0)
    big = eit_window_width(SystemParams(omega2=400.0)).value
    assert big / (2 * 400.0**2) == pytest.approx(1.0, rel=1e-3)


def test_eit_width_squared_variant():
    p = SystemParams(omega2=1.0)
    sq = eit_window_width(p, "squared")
    assert sq.radicand == pytest.approx((9 + 0.25 - 2) ** 2 - 4 * (1.5 + 1) ** 2)
    with pytest.raises(ValueError):
        eit_window_width(p, "cubed")
