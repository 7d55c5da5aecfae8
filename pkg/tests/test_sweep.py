import math

import numpy as np
import pytest

from ladder4 import sweep as sweep_mod
from ladder4.model import SystemParams
from ladder4.steady import steady_state_exact
from ladder4.sweep import (
    SchemaError,
    SweepSpec,
    grid_points,
    observable_reader,
    read_sweep_csv,
    run_sweep,
    sweep_csv,
    worker_count,
    write_sweep_csv,
)


def test_grid_points_inclusive_and_rounded():
    g = grid_points(-1.0, 1.0, 0.1)
    assert g.size == 21 and g[0] == -1.0 and g[-1] == 1.0 and 0.0 in g
    assert g[3] == -0.7


def test_degenerate_range_gives_one_point():
    spec = SweepSpec(SystemParams(omega1=1.0), ("delta1",), ((0.0, 1.0, 2.0),))
    res = run_sweep(spec)
    assert res.values.shape == (1,)
    assert res.to_profile().grid.tolist() == [0.0]


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(vary=("delta1",), ranges=((0, 1, 0),)),
        dict(vary=("delta1",), ranges=((1, 0, 0.1),)),
        dict(vary=("delta1",), ranges=((0, 1, 0.1), (0, 1, 0.1))),
        dict(vary=("gamma2",), ranges=((0, 1, 0.1),)),
        dict(vary=("delta1", "delta1"), ranges=((0, 1, 0.1),) * 2),
        dict(vary=("delta1",), ranges=((0, 1, 0.1),), observable="rho55"),
        dict(vary=("delta1",), ranges=((0, 1, 0.1),), method="analytic-doublet", observable="rho22"),
        dict(vary=("delta1",), ranges=((0, 1, 0.1),), method="magic"),
        dict(vary=("delta1",), ranges=((0, math.inf, 0.1),)),
    ],
)
def test_invalid_specs_rejected(kwargs):
    with pytest.raises(ValueError):
        SweepSpec(SystemParams(), **kwargs)


def test_observable_reader():
    rho = steady_state_exact(SystemParams(3.0, 2.0, 1.0, 0.5)).rho
    assert observable_reader("rho22")(rho) == rho[1, 1].real
    assert observable_reader("im_rho32")(rho) == rho[1, 2].imag
    assert observable_reader("re[1,3]")(rho) == rho[0, 2].real
    assert observable_reader("im[3,1]")(rho) == rho[2, 0].imag


def test_exact_sweep_matches_pointwise():
    base = SystemParams(omega1=4.0, omega2=20.0, omega3=4.0)
    spec = SweepSpec(base, ("delta3",), ((-5.0, 5.0, 0.5),), "im_rho21")
    res = run_sweep(spec)
    for x, v in zip(res.axes[0], res.values):
        assert v == steady_state_exact(base.replace(delta3=float(x))).rho[0, 1].imag


def test_two_dimensional_row_major():
    spec = SweepSpec(SystemParams(omega2=2.0), ("omega1", "omega3"), ((0, 1, 0.5), (0, 2, 1.0)), "rho22")
    pts = spec.points()
    assert pts[:4] == [(0.0, 0.0), (0.0, 1.0), (0.0, 2.0), (0.5, 0.0)]
    res = run_sweep(spec)
    assert res.grid_values().shape == (3, 3)
    with pytest.raises(ValueError):
        res.to_profile()


def test_output_independent_of_worker_count(monkeypatch):
    monkeypatch.setattr(sweep_mod, "CHUNK_SIZE", 7)
    spec = SweepSpec(SystemParams(20.0, 2.0), ("omega3",), ((0, 40, 0.5),), "rho44")
    texts = {sweep_csv(run_sweep(spec, threads=t)) for t in (1, 3, 8)}
    assert len(texts) == 1


def test_resonant_points_become_holes():
    spec = SweepSpec(
        SystemParams(20.0, 1.0), ("omega3",), ((0, 40, 0.5),), "im[2,3]", method="three-photon"
    )
    res = run_sweep(spec)
    assert [spec.points()[k] for k in res.holes] == [(20.0,)]
    assert res.flags[res.holes[0]] == "ResonantDenominator"
    assert np.isnan(res.values[res.holes[0]])
    assert np.isfinite(np.delete(res.values, res.holes)).all()
    with pytest.raises(ValueError):
        res.to_profile()


def test_bare_resonance_limit_holes_only_on_pole():
    spec = SweepSpec(
        SystemParams(20.0, 2.0), ("omega3",), ((10, 30, 1.0),), "rho44", "resonance-limit", eps_g=0.0
    )
    res = run_sweep(spec)
    assert [res.flags[k] for k in res.holes] == ["DivergentApproximation"]


def test_invalid_point_parameters_become_holes():
    spec = SweepSpec(SystemParams(omega1=1.0), ("omega2",), ((-1.0, 1.0, 0.5),), "rho22")
    res = run_sweep(spec)
    assert res.flags[:2] == ["InvalidRabi", "InvalidRabi"]
    assert res.flags[2:] == ["ok"] * 3


@pytest.mark.parametrize(
    "method, observable",
    [
        ("perturbative-order-2", "rho33"),
        ("perturbative-order-1-literal", "im[2,3]"),
        ("analytic-weak-probe", "im_rho21"),
        ("analytic-three-peak", "im_rho21"),
        ("analytic-lorentzian", "im_rho21"),
        ("resonance-limit", "rho44"),
    ],
)
def test_non_exact_methods_run(method, observable):
    var = "delta3" if method == "analytic-lorentzian" else "omega3"
    rng = (-2.0, 2.0, 0.5) if var == "delta3" else (1.0, 5.0, 0.5)
    spec = SweepSpec(SystemParams(20.0, 0.5, 4.0), (var,), (rng,), observable, method)
    res = run_sweep(spec)
    assert not res.holes


def test_weak_probe_method_tracks_exact_at_small_probe():
    base = SystemParams(omega1=1e-3, omega2=20.0, omega3=4.0)
    r = ((-30.0, 30.0, 1.0),)
    a = run_sweep(SweepSpec(base, ("delta1",), r, "im_rho21", "analytic-weak-probe")).values
    b = run_sweep(SweepSpec(base, ("delta1",), r, "im_rho21", "exact")).values
    assert np.allclose(a, b, rtol=1e-4)


def test_csv_round_trip(tmp_path):
    spec = SweepSpec(SystemParams(1 / 3, 2.0, 0.1), ("delta1",), ((-1.0, 1.0, 0.1),), "im_rho21")
    res = run_sweep(spec)
    path = tmp_path / "s.csv"
    write_sweep_csv(res, path, ["note=hello"])
    table = read_sweep_csv(path)
    assert table.metadata["omega1"] == repr(1 / 3)
    assert table.metadata["note"] == "hello"
    assert np.array_equal(table.values, res.values)
    assert np.array_equal(table.coords[:, 0], res.axes[0])
    assert table.profile().values.tolist() == res.values.tolist()


def test_csv_schema_errors(tmp_path):
    good = sweep_csv(run_sweep(SweepSpec(SystemParams(), ("delta1",), ((0, 1, 0.5),))))
    cases = {
        "no_header.csv": "\n".join(l for l in good.splitlines() if not l.startswith("# method")),
        "short_row.csv": good + "1.5,0.0\n",
        "bad_columns.csv": good.replace("delta1,value,flag", "delta1,val,flag"),
        "no_rows.csv": good[: good.index("delta1,value,flag")] + "delta1,value,flag\n",
    }
    for name, text in cases.items():
        p = tmp_path / name
        p.write_text(text)
        with pytest.raises(SchemaError):
            read_sweep_csv(p)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("LADDER4_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("LADDER4_THREADS", "zero")
    with pytest.raises(ValueError):
        worker_count()
    monkeypatch.setenv("LADDER4_THREADS", "0")
    with pytest.raises(ValueError):
        worker_count()
    assert worker_count(2) == 2
