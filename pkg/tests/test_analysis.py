import math

import numpy as np
import pytest

from mzi_lab import (
    DarkBracketError,
    DarkPortError,
    GaussianPacket,
    LarmorConfig,
    SuperpositionSpec,
    TwoPathConfig,
    VanishingNormError,
    asymptotic_peak,
    center_of_mass,
    compare_profiles,
    density_d1,
    eval_gaussian,
    find_peak,
    infer_tau_inside,
    larmor_angle,
    mean_position,
    superposition_density,
    width_scan,
)
from mzi_lab.analysis import golden_max, local_extrema, two_path_com

from conftest import FIG2_A1, FIG2_A2, fig2_config


def test_golden_max_parabola():
    assert golden_max(lambda t: -(t - 0.3) ** 2, -2, 5, 1e-12) == pytest.approx(0.3, abs=1e-7)


def test_find_peak_free_packet():
    p = GaussianPacket(1.5, center=0.7)
    assert find_peak(lambda t: eval_gaussian(t, p) ** 2, (-10, 10)) == pytest.approx(0.7, abs=1e-7)


def test_find_peak_fig3_width():
    assert find_peak(lambda t: density_d1(t, fig2_config(5.0)), (-31, 32)) == pytest.approx(1.35, abs=0.05)


def test_find_peak_broad():
    assert find_peak(lambda t: density_d1(t, fig2_config(50.0)), (-301, 302)) == pytest.approx(2.0, rel=0.01)


def test_find_peak_dark_bracket():
    p = GaussianPacket(0.1)
    with pytest.raises(DarkBracketError):
        find_peak(lambda t: eval_gaussian(t, p) ** 2, (50, 60))


def test_find_peak_bad_bracket():
    with pytest.raises(ValueError):
        find_peak(lambda t: t, (1, 0))


@pytest.mark.parametrize("w", [0.5, 1.0, 2.0, 5.0])
def test_find_peak_source_independence(w):
    cfg = fig2_config(w)
    spec = SuperpositionSpec.from_config(cfg)
    window = (-1 - 6 * w, 2 + 6 * w)
    a = find_peak(lambda t: density_d1(t, cfg), window)
    b = find_peak(lambda t: superposition_density(t, spec), window)
    assert a == pytest.approx(b, abs=1e-8)


def test_center_of_mass_free():
    p = GaussianPacket(0.4, center=-1.3)
    assert center_of_mass(lambda t: eval_gaussian(t, p) ** 2, (-8, 6), points=[-1.3]) == pytest.approx(-1.3, abs=1e-9)


@pytest.mark.parametrize("w", [0.05, 0.3, 1.0, 5.0, 50.0])
def test_center_of_mass_matches_closed_form(w):
    cfg = fig2_config(w)
    assert two_path_com(cfg) == pytest.approx(mean_position(cfg), abs=1e-9)


def test_center_of_mass_equal_disjoint():
    cfg = TwoPathConfig(0.5, 0.5, GaussianPacket(0.02))
    assert two_path_com(cfg) == pytest.approx(-0.5, abs=1e-9)


def test_center_of_mass_no_mass():
    with pytest.raises(VanishingNormError):
        center_of_mass(lambda t: 0.0, (0, 1))


def test_local_extrema_threshold():
    v = np.array([0, 1, 0.9995, 1, 0, 2, 0.5, 3, 0])
    maxima, minima = local_extrema(v)
    assert list(maxima) == [1, 3, 5, 7]
    # 0.9995 is above 0.999 of its neighbours and is ignored
    assert list(minima) == [4, 6]


def test_width_scan_morphology():
    narrow, broad = width_scan(FIG2_A1, FIG2_A2, 1.0, [0.1, 50.0])
    assert len(narrow.maxima_x) == 2
    assert sorted(narrow.maxima_x) == pytest.approx([-1.0, 0.0], abs=0.01)
    assert narrow.n_minima == 1
    assert narrow.minima_x[0] == pytest.approx(-0.5, rel=0.05)
    # the exact zero of the amplitude: -1/2 + w^2 ln(2/3) / 2
    assert narrow.minima_x[0] == pytest.approx(-0.5 + 0.01 * math.log(2 / 3) / 2, abs=1e-6)
    assert len(broad.maxima_x) == 1 and broad.n_minima == 0
    assert broad.peak_x == pytest.approx(2.0, rel=0.01)


def test_width_scan_free_propagation():
    for r in width_scan(1.0, 0.0, 1.0, [0.1, 1.0, 10.0]):
        assert r.peak_x == pytest.approx(0.0, abs=1e-7 * r.delta_x)
        assert r.com_x == pytest.approx(0.0, abs=1e-9)
        assert r.p_detect == pytest.approx(1.0)


def test_width_scan_records_consistent():
    ladder = list(np.geomspace(0.2, 20, 6))
    serial = width_scan(FIG2_A1, FIG2_A2, 1.0, ladder)
    threaded = width_scan(FIG2_A1, FIG2_A2, 1.0, ladder, max_workers=3)
    assert [r.delta_x for r in serial] == ladder
    for a, b in zip(serial, threaded):
        assert a == b
        assert 0 <= a.p_detect <= 1
        assert a.com_x == pytest.approx(mean_position(fig2_config(a.delta_x)), abs=1e-9)


def test_peak_com_gap_shrinks():
    recs = width_scan(FIG2_A1, FIG2_A2, 1.0, [5, 10, 20, 50])
    gaps = [abs(r.peak_x - r.com_x) for r in recs]
    assert gaps[0] > 0
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


@pytest.mark.parametrize("ladder", [[], [1.0, 1.0], [2.0, 1.0], [-1.0, 1.0]])
def test_width_scan_bad_ladder(ladder):
    with pytest.raises(ValueError):
        width_scan(FIG2_A1, FIG2_A2, 1.0, ladder)


def test_compare_profiles_fig3_fig4():
    rep = compare_profiles(fig2_config(5.0))
    assert rep.exact_peak == pytest.approx(1.35, abs=0.05)
    assert rep.asymptotic_peak == pytest.approx(2.0)
    assert rep.peak_offset == pytest.approx(0.65, abs=0.05)
    assert rep.fits_under_front_tail is True
    ahead = rep.positions > 0
    assert np.all(rep.exact[ahead] < rep.free[ahead])
    dx = np.diff(rep.positions)[0]
    assert np.sum(rep.exact_normalized) * dx == pytest.approx(1.0, rel=1e-3)


def test_compare_profiles_single_path():
    rep = compare_profiles(TwoPathConfig(0.8, 0, GaussianPacket(2.0)))
    np.testing.assert_allclose(rep.exact, rep.asymptotic, rtol=1e-13)
    np.testing.assert_allclose(rep.exact, 0.64 * rep.free, rtol=1e-13)
    assert rep.fits_under_front_tail is None


def test_compare_profiles_dark():
    with pytest.raises(DarkPortError):
        compare_profiles(TwoPathConfig(0.5, -0.5, GaussianPacket(1.0)))


@pytest.mark.parametrize(
    "L, v, xbar, tau, tau_inside, label",
    [
        (10, 1, 2, 1, 8, "normal"),
        (10, 1, 10, 1, 0, "zero-crossing"),
        (10, 1, 11, 1, -1, "negative"),
        (10, 2, -30, 1, 20, "abnormal-delay"),
        (10, 1, -1, 1, 11, "normal"),
    ],
)
def test_infer_tau_inside(L, v, xbar, tau, tau_inside, label):
    res = infer_tau_inside(L, v, xbar, tau)
    assert res.tau_inside == tau_inside
    assert res.classification == label


def test_infer_tau_inside_tolerance():
    assert infer_tau_inside(1.0, 1.0, 1.0 + 1e-14).classification == "zero-crossing"
    assert infer_tau_inside(1.0, 1.0, 1.0 + 1e-6).classification == "negative"
    assert infer_tau_inside(1.0, 1.0, 1.0 + 1e-6, eps_t=1e-5).classification == "zero-crossing"


def test_infer_tau_inside_total():
    rng = np.random.default_rng(1)
    labels = set()
    for L, v, xbar, tau in zip(rng.uniform(0.1, 10, 500), rng.uniform(0.1, 3, 500),
                               rng.uniform(-40, 20, 500), rng.uniform(0, 5, 500)):
        res = infer_tau_inside(L, v, xbar, tau)
        assert res.tau_inside == L / v - xbar / v
        labels.add(res.classification)
    assert labels == {"normal", "negative", "abnormal-delay"}


def test_larmor_examples():
    assert larmor_angle(LarmorConfig(2.0, 2.0, 0.3 + 0.2j, -0.1 + 0.4j, 3.0)) == pytest.approx(6.0, rel=1e-15)
    assert larmor_angle(LarmorConfig(1.5, 9.0, 0.4, 0, 2.0)) == pytest.approx(3.0, rel=4e-16)
    a1, a2 = 0.5 + 0.1j, -0.3 + 0.05j
    ratio = a2 / (a1 + a2)
    assert larmor_angle(LarmorConfig(0, 1, a1, a2)) == pytest.approx(ratio.real, rel=1e-14)
    assert ratio.real < 0
    with pytest.raises(DarkPortError):
        larmor_angle(LarmorConfig(0, 1, 0.5, -0.5))


def test_larmor_matches_peak_shift():
    rng = np.random.default_rng(9)
    for _ in range(100):
        a1, a2 = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        v, tau, omega = rng.uniform(0.1, 3), rng.uniform(0.1, 3), rng.uniform(0.1, 10)
        phi = larmor_angle(LarmorConfig(0, tau, a1, a2, omega))
        xbar = asymptotic_peak(a1, a2, v * tau)
        assert phi == pytest.approx(-omega * xbar / v, rel=1e-12, abs=1e-12)
