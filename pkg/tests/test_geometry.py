import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mimo_lsa.errors import ConfigError
from mimo_lsa.geometry import (DropModel, GainTensor, LinkBudget, build_hex_layout, compute_gains,
                               cost231_pathloss_db, distances, drop_users, equal_power_gains,
                               hata_mobile_correction, UserDrop, write_drop_csv)
from mimo_lsa.rng import Stream

# mean distance to the center of a hexagon with circumradius R, by polar
# quadrature over one of its 12 right triangles (scipy dblquad, frozen)
HEX_MEAN_DISTANCE = 0.6079864055003606


def test_single_cell_layout():
    layout = build_hex_layout(1, 2.0)
    assert layout.B == 1
    assert np.array_equal(layout.base_positions, [[0.0, 0.0]])


def test_seven_cell_layout_geometry():
    layout = build_hex_layout(7, 2.0)
    assert layout.B == 7
    assert np.array_equal(layout.base_positions[0], [0.0, 0.0])
    outer = layout.base_positions[1:]
    np.testing.assert_allclose(np.hypot(outer[:, 0], outer[:, 1]), 2 * math.sqrt(3), rtol=1e-12)
    angles = np.degrees(np.arctan2(outer[:, 1], outer[:, 0])) % 360
    np.testing.assert_allclose(np.sort(angles), 30 + 60 * np.arange(6), atol=1e-9)
    d = np.hypot(*(outer[:, None, :] - outer[None, :, :]).transpose(2, 0, 1))
    d[np.eye(6, dtype=bool)] = np.inf
    np.testing.assert_allclose(d.min(axis=1), 2 * math.sqrt(3), rtol=1e-12)


@pytest.mark.parametrize("B", [0, 2, 19])
def test_unsupported_cell_count(B):
    with pytest.raises(ConfigError, match=r"\(1, 7\)"):
        build_hex_layout(B, 2.0)


def test_drop_is_deterministic():
    layout = build_hex_layout(1, 2.0)
    a = drop_users(layout, 1, 0.035, Stream(5))
    b = drop_users(layout, 1, 0.035, Stream(5))
    assert np.array_equal(a.positions, b.positions)


def test_drop_inside_hexagons_and_outside_min_distance():
    layout = build_hex_layout(7, 2.0)
    drop = drop_users(layout, 300, 0.035, Stream(9))
    assert drop.positions.shape == (7, 300, 2)
    for j in range(7):
        assert layout.contains(j, drop.positions[j]).all()
        own = np.hypot(*(drop.positions[j] - layout.base_positions[j]).T)
        assert own.min() >= 0.035


def test_drop_mean_distance_matches_quadrature():
    R = 2.0
    layout = build_hex_layout(7, R)
    drop = drop_users(layout, 1000, 0.001, Stream(1))
    own = np.hypot(*(drop.positions - layout.base_positions[:, None, :]).transpose(2, 0, 1))
    # std of a single distance is ~0.24 R, so the mean of 7000 has se ~0.003 R
    assert own.mean() / R == pytest.approx(HEX_MEAN_DISTANCE, abs=0.012)


def test_drop_rejects_bad_arguments():
    layout = build_hex_layout(1, 2.0)
    with pytest.raises(ConfigError):
        drop_users(layout, 0, 0.035, Stream(0))
    with pytest.raises(ConfigError):
        drop_users(layout, 1, 2.0, Stream(0))


def test_mobile_correction_is_near_zero_at_1p5m():
    assert hata_mobile_correction(1.5) == pytest.approx(-0.0009, abs=0.001)


def test_cost231_hand_values():
    budget = LinkBudget()
    assert cost231_pathloss_db(1.0, budget) == pytest.approx(140.04, abs=0.05)
    assert cost231_pathloss_db(2.0, budget) == pytest.approx(150.64, abs=0.05)


@given(st.floats(0.01, 50.0))
def test_cost231_doubling_adds_constant(d):
    budget = LinkBudget()
    slope = (44.9 - 6.55 * math.log10(30.0)) * math.log10(2.0)
    diff = cost231_pathloss_db(2 * d, budget) - cost231_pathloss_db(d, budget)
    assert diff == pytest.approx(slope, abs=1e-9)


def test_cost231_monotone_and_domain():
    d = np.linspace(0.01, 10, 1000)
    pl = cost231_pathloss_db(d, LinkBudget())
    assert np.all(np.diff(pl) > 0)
    with pytest.raises(ValueError):
        cost231_pathloss_db(0.0, LinkBudget())
    with pytest.raises(ValueError):
        cost231_pathloss_db(-1.0, LinkBudget())


def test_link_budget_validation():
    with pytest.raises(ConfigError, match="carrier_mhz"):
        LinkBudget(carrier_mhz=900.0)
    with pytest.raises(ConfigError):
        LinkBudget(tx_power_dbm=float("nan"))
    assert LinkBudget().rho_r_db == pytest.approx(197.0)


def test_gain_from_path_loss():
    layout = build_hex_layout(1, 2.0)
    drop = UserDrop(np.array([[[1.0, 0.0]]]), 0.035)
    g = compute_gains(layout, drop, LinkBudget())
    pl = cost231_pathloss_db(1.0, LinkBudget())
    assert g.beta[0, 0, 0] == pytest.approx(10 ** (-pl / 10), rel=1e-12)
    assert g.beta[0, 0, 0] == pytest.approx(9.91e-15, rel=0.012)


def test_equal_power_gains():
    g = equal_power_gains(7, 3)
    assert g.mean_beta == 1.0
    assert np.all(g.beta == 1.0)
    assert GainTensor(np.ones((1, 1, 1))).beta[0, 0, 0] == 1.0  # 0 dB path loss


def test_gain_tensor_rejects_nonpositive():
    with pytest.raises(ValueError):
        GainTensor(np.zeros((1, 1, 1)))
    with pytest.raises(ValueError):
        GainTensor(np.full((2, 2, 1), np.inf))


def test_gains_finite_positive_and_permutation_invariant():
    layout = build_hex_layout(7, 2.0)
    drop = drop_users(layout, 20, 0.035, Stream(4))
    g = compute_gains(layout, drop, LinkBudget())
    assert np.all(np.isfinite(g.beta)) and np.all(g.beta > 0)
    assert g.mean_beta == pytest.approx(g.beta[0].mean())
    perm = np.random.default_rng(0).permutation(20)
    g2 = compute_gains(layout, UserDrop(drop.positions[:, perm], drop.min_distance), LinkBudget())
    np.testing.assert_array_equal(g2.beta, g.beta[:, :, perm])


def test_same_position_same_gain():
    layout = build_hex_layout(7, 2.0)
    pos = np.zeros((7, 2, 2))
    pos[:, :, 0] = 0.5
    pos += layout.base_positions[:, None, :]
    g = compute_gains(layout, UserDrop(pos, 0.035), LinkBudget())
    np.testing.assert_array_equal(g.beta[:, :, 0], g.beta[:, :, 1])


def test_in_cell_range_is_finite():
    pl = cost231_pathloss_db(np.array([0.035, 2.0]), LinkBudget())
    beta = 10 ** (-pl / 10)
    assert np.all(np.isfinite(beta)) and np.all(beta > 0)


def test_shadowing_changes_gains_reproducibly():
    layout = build_hex_layout(7, 2.0)
    budget = LinkBudget(shadowing_sigma_db=8.0)
    dm = DropModel(layout, budget, 5)
    a, b = dm.draw(Stream(3, 3)), dm.draw(Stream(3, 3))
    assert np.array_equal(a.beta, b.beta)
    plain = DropModel(layout, LinkBudget(), 5).draw(Stream(3, 3))
    ratio_db = 10 * np.log10(a.beta / plain.beta)
    assert 4.0 < ratio_db.std() < 12.0


def test_distances_shape():
    layout = build_hex_layout(7, 2.0)
    drop = drop_users(layout, 4, 0.035, Stream(0))
    d = distances(layout, drop)
    assert d.shape == (7, 7, 4)
    assert np.all(d[np.arange(7), np.arange(7)] <= 2.0 + 1e-12)


def test_drop_csv(tmp_path):
    layout = build_hex_layout(7, 2.0)
    drop = drop_users(layout, 3, 0.035, Stream(0))
    path = tmp_path / "drop.csv"
    write_drop_csv(path, drop)
    lines = path.read_text().splitlines()
    assert lines[0] == "cell_index,user_index,x_km,y_km"
    assert len(lines) == 1 + 21
    j, k, x, y = lines[5].split(",")
    assert (int(j), int(k)) == (1, 1)
    assert float(x) == drop.positions[1, 1, 0]
