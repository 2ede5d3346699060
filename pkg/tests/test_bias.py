import math

import numpy as np
import pytest
from scipy.integrate import quad

from wpc.bias import (
    Constant,
    Explicit,
    Linear,
    NestedExact,
    Threshold,
    ThresholdLinear,
    calibrate,
    cdf,
    expected_hb,
    parse_spec,
    quantile_vector,
    sample_iid,
)
from wpc.theory import hb

LINEAR_E = 1.0 / (2.0 * math.log(2.0))


# ----------------------------------------------------------------------- cdf


def test_cdf_threshold_linear_middle_branch():
    assert cdf(ThresholdLinear(0.0), 0.3) == pytest.approx(0.3, abs=1e-15)


def test_cdf_threshold_linear_theta_one():
    spec = ThresholdLinear(1.0)
    assert cdf(spec, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert cdf(spec, -0.1) == 0.0
    assert cdf(spec, 1.0) == 1.0


def test_cdf_threshold_atom_then_flat():
    assert cdf(Threshold(0.5), 0.4) == pytest.approx(0.25, abs=1e-15)


def test_cdf_symmetry_identity():
    # Q ~ 1-Q means F(t) + F((1-t)^-) = 1; checked at continuity points
    specs = [
        Threshold(0.5),
        Threshold(0.2),
        Constant(0.11),
        Linear(),
        ThresholdLinear(0.5),
        ThresholdLinear(-0.42),
        Explicit((0.2, 0.35, 0.65, 0.8)),
    ]
    ts = [0.07, 0.13, 0.31, 0.47, 0.53, 0.68, 0.93]
    for spec in specs:
        for t in ts:
            assert cdf(spec, t) + cdf(spec, 1.0 - t) == pytest.approx(1.0, abs=1e-12)


def test_cdf_monotone_right_continuous():
    rng = np.random.default_rng(0)
    specs = [Threshold(0.3), Constant(0.2), ThresholdLinear(0.7), ThresholdLinear(-0.6)]
    for spec in specs:
        ts = np.sort(rng.uniform(-0.2, 1.2, size=200))
        vals = [cdf(spec, float(t)) for t in ts]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        for t in (0.0, 0.25, 0.5, 0.75, 1.0):
            assert cdf(spec, t + 1e-13) == pytest.approx(cdf(spec, t), abs=1e-9)


# ------------------------------------------------------------ quantile rule


def test_quantile_threshold_half_counts():
    q = quantile_vector(Threshold(0.5), 16)
    assert np.sum(q == 0.0) == 4
    assert np.sum(q == 0.5) == 8
    assert np.sum(q == 1.0) == 4


def test_quantile_linear_length4():
    q = quantile_vector(Linear(), 4)
    assert np.allclose(q, [0.0625, 0.3125, 0.5625, 0.8125], atol=1e-15)


def test_quantile_nested_layout():
    q = quantile_vector(NestedExact(3, 8), 8)
    assert list(q) == [0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0]


def test_quantile_nested_length_mismatch():
    with pytest.raises(ValueError):
        quantile_vector(NestedExact(3, 8), 10)


def test_quantile_multiset_reflection():
    # symmetric families on grid-aligned parameters reflect about 1/2 up to
    # the quantile grid resolution
    for length in (4, 8, 16, 64):
        specs = [
            Threshold(0.0),
            Threshold(0.5),
            Threshold(1.0),
            Constant(0.11),
            Constant(0.3),
            Linear(),
            ThresholdLinear(-1.0),
            ThresholdLinear(-0.5),
            ThresholdLinear(0.0),
            ThresholdLinear(0.5),
            ThresholdLinear(1.0),
        ]
        for spec in specs:
            q = np.sort(quantile_vector(spec, length))
            r = np.sort(1.0 - q)
            assert np.max(np.abs(q - r)) <= 0.5 / length + 1e-12, (spec, length)


# --------------------------------------------------------------- expected_hb


def test_expected_hb_linear_closed_form_vs_quadrature():
    assert expected_hb(Linear()) == pytest.approx(LINEAR_E, abs=1e-15)
    num, _ = quad(lambda t: hb(t), 0.0, 1.0, epsabs=1e-12)
    assert expected_hb(Linear()) == pytest.approx(num, abs=1e-10)


def test_expected_hb_threshold_linear_endpoints():
    assert expected_hb(ThresholdLinear(1.0)) == 0.0
    assert expected_hb(ThresholdLinear(-1.0)) == 1.0


def test_expected_hb_threshold_linear_half():
    got = expected_hb(ThresholdLinear(0.5))
    assert got == pytest.approx(0.4691, abs=1e-3)
    num, _ = quad(lambda t: hb(t), 0.25, 0.75, epsabs=1e-12)
    assert got == pytest.approx(num, abs=1e-10)


def test_expected_hb_negative_theta_vs_quadrature_plus_atoms():
    theta = -0.42
    a = 0.21
    num, _ = quad(lambda t: hb(t), a, 1.0 - a, epsabs=1e-12)
    want = num + 2 * a * hb(a)
    assert expected_hb(ThresholdLinear(theta)) == pytest.approx(want, abs=1e-10)


def test_expected_hb_atomic_families():
    assert expected_hb(Threshold(0.37)) == pytest.approx(0.37, abs=1e-15)
    assert expected_hb(Constant(0.2)) == pytest.approx(hb(0.2), abs=1e-15)
    assert expected_hb(NestedExact(5, 16)) == pytest.approx(5 / 16, abs=1e-15)
    vals = (0.2, 0.8, 0.5, 0.5)
    assert expected_hb(Explicit(vals)) == pytest.approx(
        np.mean([hb(v) for v in vals]), abs=1e-12
    )


# ----------------------------------------------------------------- calibrate


def test_calibrate_threshold_linear_uniform_target():
    spec = calibrate("threshold-linear", LINEAR_E)
    assert abs(spec.theta) < 1e-6


def test_calibrate_threshold_linear_exact_endpoints():
    assert calibrate("threshold-linear", 0.0).theta == 1.0
    assert calibrate("threshold-linear", 1.0).theta == -1.0


def test_calibrate_constant_half():
    spec = calibrate("constant", 0.5)
    assert spec.c == pytest.approx(0.1100, abs=1e-4)


def test_calibrate_threshold_embedding_target():
    target = (1.0 - hb(0.1)) / 0.8
    spec = calibrate("threshold", target)
    assert spec.gamma == pytest.approx(0.66376, abs=1e-5)


def test_calibrate_hits_target_for_random_targets():
    rng = np.random.default_rng(1)
    for family in ("threshold", "constant", "threshold-linear"):
        for _ in range(50):
            target = float(rng.uniform(0.0, 1.0))
            spec = calibrate(family, target)
            assert abs(expected_hb(spec) - target) <= 1e-9


def test_calibrate_round_trip():
    assert calibrate("threshold", expected_hb(Threshold(0.41))).gamma == pytest.approx(
        0.41, abs=1e-6
    )
    assert calibrate("constant", expected_hb(Constant(0.17))).c == pytest.approx(
        0.17, abs=1e-6
    )
    assert calibrate(
        "threshold-linear", expected_hb(ThresholdLinear(0.33))
    ).theta == pytest.approx(0.33, abs=1e-6)
    assert calibrate(
        "threshold-linear", expected_hb(ThresholdLinear(-0.71))
    ).theta == pytest.approx(-0.71, abs=1e-6)
    assert calibrate("linear", expected_hb(Linear())).family == "linear"
    assert calibrate("nested-exact", 5 / 16, length=16).ktilde == 5


def test_calibrate_out_of_range():
    with pytest.raises(ValueError):
        calibrate("linear", 0.5)
    with pytest.raises(ValueError):
        calibrate("nested-exact", 0.3, length=16)
    with pytest.raises(ValueError):
        calibrate("explicit", 0.5)
    with pytest.raises(ValueError):
        calibrate("threshold", 1.5)


def test_expected_hb_strictly_decreasing_in_theta():
    thetas = np.linspace(-1.0, 1.0, 41)
    vals = [expected_hb(ThresholdLinear(float(t))) for t in thetas]
    assert vals[0] == 1.0 and vals[-1] == 0.0
    assert all(b < a for a, b in zip(vals, vals[1:]))


# ------------------------------------------------------------- serialization


def test_label_parse_round_trip():
    specs = [
        Threshold(0.66376),
        Constant(0.11),
        Linear(),
        ThresholdLinear(0.2371),
        Explicit((0.25, 0.75)),
        NestedExact(4, 16),
    ]
    for spec in specs:
        back = parse_spec(spec.label())
        assert back == spec


def test_explicit_requires_symmetric_multiset():
    with pytest.raises(ValueError):
        Explicit((0.2, 0.3))
    Explicit((0.2, 0.8))  # fine


# ------------------------------------------------------------- iid sampling


def test_sample_iid_matches_family_statistics():
    rng = np.random.default_rng(2)
    spec = ThresholdLinear(0.4)
    qs = sample_iid(spec, 20000, rng)
    got = np.mean([hb(float(v)) for v in qs])
    assert got == pytest.approx(expected_hb(spec), abs=0.01)
