"""Operator module: weighted norms, the shift group, the multiplicative
shift operator, Euler factors, the Moebius inverse, truncated spectra and
invertibility verdicts.

Exactness conventions under test: step-type inputs evaluate through their
exact closures, so operator identities hold bit-for-bit; smooth inputs
hold to quadrature tolerance.
"""

import math

import numpy as np
import pytest

from fracspec import (
    NotPrime,
    PoleLine,
    PoleOnSegment,
    SampledFunction,
    UnboundedTail,
    almost_invertibility_verdict,
    apply_euler_factor,
    apply_inverse,
    apply_spectral_operator,
    counting_pullback,
    euler_product_apply,
    find_critical_zeros,
    from_callable,
    indicator,
    line_modulus_extrema,
    make_cantor_string,
    mobius,
    norm_bound_check,
    phase_transition_scan,
    quasi_invertibility_verdict,
    shift,
    spectral_counting,
    spectral_measure,
    truncated_spectrum,
    unit_step,
    weighted_norm,
    zeta,
)

STEP = 1.0 / 1024.0  # binary-friendly grid so aligned shifts are exact


def smooth_bump(center, width, amp, weight, step=1e-3, pad=0.5):
    """C^1 bump amp*(1 - u^2)^2 on |u| <= 1, u = (t-center)/width."""

    def src(taus):
        u = (np.asarray(taus) - center) / width
        inside = np.abs(u) < 1.0
        return np.where(inside, amp * (1.0 - u**2) ** 2, 0.0)

    return from_callable(
        src, center - width - pad, center + width + pad, step, weight,
        (center - width, center + width),
    )


# ---------------------------------------------------------------------------
# Norms.


def test_weighted_norm_indicator():
    # jump cells limit step-function quadrature to O(step) accuracy
    f = indicator(0.0, 1.0, weight=0.0, step=1e-3)
    assert abs(weighted_norm(f) - 1.0) < 1e-3


def test_weighted_norm_exponential_weight():
    # closed-form oracle: integral of e^(-t) over [0,1] is 1 - e^(-1)
    f = indicator(0.0, 1.0, weight=0.5, step=1e-3)
    assert abs(weighted_norm(f) ** 2 - (1.0 - math.exp(-1.0))) < 1e-3


def test_weighted_norm_smooth_oracle():
    # smooth Gaussian against its closed-form weighted integral: the
    # quadrature itself is O(step^4) accurate away from jumps
    c, a = 0.8, 3.0

    def src(taus):
        taus = np.asarray(taus)
        return np.where(np.abs(taus) < 6.0, np.exp(-a * taus**2), 0.0)

    f = from_callable(src, -6.5, 6.5, 1e-3, c, (-6.0, 6.0))
    # integral of e^(-2at^2 - 2ct) dt = sqrt(pi/(2a)) e^(c^2/(2a)) (tails < 1e-28)
    want = math.sqrt(math.pi / (2 * a)) * math.exp(c**2 / (2 * a))
    assert abs(weighted_norm(f) ** 2 - want) / want < 1e-10


def test_weighted_norm_zero_function():
    f = from_callable(lambda t: np.zeros_like(np.asarray(t)), 0.0, 1.0, 0.01, 1.0, (0.0, 1.0))
    assert weighted_norm(f) == 0.0


def test_shift_identity():
    f = smooth_bump(0.5, 0.4, 1.0, 1.0, step=STEP)
    g = shift(f, 0.0)
    assert g.t_min == f.t_min
    assert np.array_equal(g.values, f.values)


def test_shift_group_law_bitwise():
    f = smooth_bump(0.5, 0.4, 1.0, 1.0, step=STEP)
    a, b = 96 * STEP, -160 * STEP
    lhs = shift(shift(f, a), b)
    rhs = shift(f, a + b)
    assert lhs.t_min == rhs.t_min
    assert np.array_equal(lhs.values, rhs.values)


def test_shift_norm_scaling_exact_source(rng):
    for _ in range(20):
        c = rng.uniform(0.0, 3.0)
        t = rng.uniform(-2.0, 2.0)
        f = smooth_bump(rng.uniform(-0.5, 0.5), rng.uniform(0.2, 1.0), rng.uniform(0.5, 2.0), c)
        ratio = weighted_norm(shift(f, t)) / weighted_norm(f)
        assert abs(ratio - math.exp(-t * c)) / math.exp(-t * c) < 1e-6


def test_shift_interpolation_path():
    # sample-only function: off-grid shift interpolates and flags it
    f0 = smooth_bump(0.0, 1.0, 1.0, 0.7, step=2e-4)
    f = SampledFunction(f0.t_min, f0.step, f0.values, 0.7, f0.support)
    t = 0.123456789
    g = shift(f, t)
    assert g.interpolated
    ratio = weighted_norm(g) / weighted_norm(f)
    assert abs(ratio - math.exp(-t * 0.7)) < 1e-6


def test_apply_operator_unit_step_floor():
    u = unit_step(2.0, t_max=math.log(60), step=0.01)
    au = apply_spectral_operator(u)
    for x in (3.5, 12.0, 59.5):
        assert au(math.log(x)) == math.floor(x)
    assert au(-0.2) == 0.0


def test_apply_operator_no_reach_below_support():
    f = indicator(0.0, 0.5, weight=1.0, step=0.01)
    af = apply_spectral_operator(f)
    assert af(-0.05) == 0.0


def test_apply_operator_unbounded_support():
    f = from_callable(
        lambda t: np.ones_like(np.asarray(t, dtype=float)),
        -1.0, 1.0, 0.01, 1.0, (-math.inf, math.inf),
    )
    with pytest.raises(UnboundedTail):
        apply_spectral_operator(f)


def test_counting_bridge_exact():
    # a maps geometric counting to spectral counting: exact equality away
    # from the logs of the frequency atoms
    eta = make_cantor_string(5)
    t_max = math.log(500.0)
    f = counting_pullback(eta, weight=1.0, t_max=t_max, step=0.01)
    af = apply_spectral_operator(f)
    grid = af.grid
    freq_logs = np.log(spectral_measure(eta, math.exp(af.t_max) * 1.05).underlying.positions)
    dist = np.min(np.abs(grid[:, None] - freq_logs[None, :]), axis=1)
    safe = (dist > af.step) & (grid >= f.support[0])
    assert safe.sum() > 100
    direct = np.array([spectral_counting(eta, float(x)) for x in np.exp(grid[safe])])
    assert np.array_equal(np.asarray(af.values)[safe], direct)


def test_euler_factor_step_counts_powers():
    u = unit_step(2.0, t_max=4.0, step=0.01)
    a2 = apply_euler_factor(u, 2)
    for t in (0.1, 1.0, 2.5, 3.9):
        assert a2(t) == 1 + math.floor(t / math.log(2))


def test_euler_factor_dominates_identity(rng):
    f = smooth_bump(1.0, 0.8, 1.5, 1.0)
    a3 = apply_euler_factor(f, 3)
    taus = rng.uniform(-1.0, 3.5, size=50)
    assert np.all(a3(taus) >= f(taus) - 1e-15)


def test_euler_factor_rejects_composite():
    u = unit_step(2.0, t_max=1.0, step=0.01)
    with pytest.raises(NotPrime):
        apply_euler_factor(u, 6)


def test_euler_factors_commute_bitwise():
    u = unit_step(2.0, t_max=math.log(40), step=0.01)
    ab = apply_euler_factor(apply_euler_factor(u, 3), 2)
    ba = apply_euler_factor(apply_euler_factor(u, 2), 3)
    assert np.array_equal(ab.values, ba.values)


def test_smooth_number_counts():
    # brute-force oracles for composed Euler factors
    u = unit_step(2.0, t_max=math.log(60), step=0.01)
    a23 = apply_euler_factor(apply_euler_factor(u, 3), 2)
    smooth3 = [n for n in range(1, 13) if max(_factors(n)) <= 3]
    assert a23(math.log(12)) == len(smooth3) == 8
    ep = euler_product_apply(u, 11)
    smooth11 = [n for n in range(1, 51) if max(_factors(n)) <= 11]
    assert ep(math.log(50)) == len(smooth11)


def _factors(n):
    out = [1]
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def test_euler_product_window_exactness():
    # every k <= e^t is P-smooth once P >= e^t: equality with a, bitwise
    u = unit_step(2.0, t_max=3.1, step=0.02)
    full = apply_spectral_operator(u)
    prod = euler_product_apply(u, 23)
    assert np.array_equal(full.values, prod.values)


def test_euler_product_empty_is_identity():
    u = unit_step(2.0, t_max=2.0, step=0.01)
    assert np.array_equal(euler_product_apply(u, 1).values, u.values)


def test_mobius_values():
    assert mobius(1) == 1
    assert mobius(6) == 1
    assert mobius(12) == 0
    brute = {n: _mobius_brute(n) for n in range(1, 200)}
    assert all(mobius(n) == v for n, v in brute.items())
    assert mobius(10**6 + 3) == _mobius_brute(10**6 + 3)


def _mobius_brute(n):
    fs = [f for f in _factors(n) if f > 1]
    if len(set(fs)) != len(fs):
        return 0
    return (-1) ** len(fs)


def test_mobius_floor_identity_small():
    for x in range(1, 500):
        total = sum(mobius(n) * (x // n) for n in range(1, x + 1))
        assert total == 1


def test_inverse_is_identity_on_step_functions():
    u = unit_step(2.0, t_max=math.log(40), step=0.01)
    au = apply_spectral_operator(u)
    back = apply_inverse(au, 41)
    assert np.array_equal(back.values, u.values)


def test_inverse_nmax_one_is_identity():
    u = unit_step(2.0, t_max=2.0, step=0.01)
    assert np.array_equal(apply_inverse(u, 1).values, u.values)


def test_norm_bound_indicator():
    lhs, rhs, ok = norm_bound_check(indicator(0.0, 1.0, weight=2.0, step=2e-3))
    assert ok and lhs <= rhs


def test_norm_bound_random_bumps(rng):
    for _ in range(8):
        f = smooth_bump(
            rng.uniform(0.0, 0.6), rng.uniform(0.2, 0.7), rng.uniform(0.5, 2.0), 1.5, step=2e-3
        )
        lhs, rhs, ok = norm_bound_check(f)
        assert ok, (lhs, rhs)


def test_norm_bound_zero_function():
    f = from_callable(
        lambda t: np.zeros_like(np.asarray(t, dtype=float)), -0.5, 1.0, 0.01, 2.0, (0.0, 1.0)
    )
    lhs, rhs, ok = norm_bound_check(f)
    assert ok and lhs <= rhs == 0.0


def test_norm_bound_needs_c_above_one():
    with pytest.raises(ValueError):
        norm_bound_check(indicator(0.0, 1.0, weight=0.5, step=1e-2))


def test_truncated_spectrum_degenerate():
    curve = truncated_spectrum(2.0, 0.0, 0.0)
    assert len(curve.points) == 1
    assert curve.points[0] == pytest.approx(math.pi**2 / 6, abs=1e-12)


def test_truncated_spectrum_zero_dip_and_floor():
    # step 1e-3 puts a sample within ~5e-4 of the zero at 14.1347
    curve = truncated_spectrum(0.5, 0.0, 15.0, step=1e-3)
    assert curve.min_modulus < 1e-3
    curve2 = truncated_spectrum(2.0, 0.0, 50.0, step=0.05)
    assert curve2.min_modulus >= 0.657


def test_truncated_spectrum_guards():
    with pytest.raises(PoleOnSegment):
        truncated_spectrum(1.0, 0.0, 5.0)
    with pytest.raises(ValueError):
        truncated_spectrum(2.0, 5.0, 1.0)
    # off the pole point the c = 1 line is allowed
    curve = truncated_spectrum(1.0, 1.0, 2.0, step=0.1)
    assert np.all(np.isfinite(curve.points))


def test_spectrum_matches_line_extrema():
    curve = truncated_spectrum(0.75, 0.0, 40.0, step=0.05)
    v_min, _, v_max, _ = line_modulus_extrema(0.75, 0.0, 40.0)
    assert curve.min_modulus >= v_min - 1e-12
    assert curve.max_modulus <= v_max + 1e-12


def test_quasi_verdict_half():
    report = quasi_invertibility_verdict(0.5, 20.0)
    assert report.quasi_invertible_verdict == "no"
    assert report.zero_found
    assert report.min_mod < 1e-6
    # verdict "no" iff a refined zero bracket exists in the scanned range
    assert len(find_critical_zeros(0.0, 20.0)) > 0


def test_quasi_verdict_zero_free_halfplane():
    report = quasi_invertibility_verdict(2.0, 50.0)
    assert report.quasi_invertible_verdict == "yes"
    assert not report.zero_found
    assert report.min_mod >= 0.657


def test_quasi_verdict_undetermined():
    report = quasi_invertibility_verdict(0.75, 100.0)
    assert report.quasi_invertible_verdict == "undetermined-up-to-T"
    assert report.min_mod > 0
    assert not report.zero_found


def test_quasi_verdict_pole_line():
    with pytest.raises(PoleLine):
        quasi_invertibility_verdict(1.0, 10.0)


def test_almost_verdict_window_with_witness_beyond():
    # no zero inside [15, 20], but raising T0 does not rescue: the zero
    # near 21.022 is located just past the window and certifies "no"
    report = almost_invertibility_verdict(0.5, 15.0, 20.0)
    assert report.quasi_invertible_verdict == "no"
    assert abs(report.notes["witness_beyond_scan"] - 21.022040) < 1e-4


def test_almost_verdict_three_zeros():
    report = almost_invertibility_verdict(0.5, 0.0, 30.0)
    assert report.quasi_invertible_verdict == "no"
    assert len(report.notes["zeros"]) == 3


def test_almost_verdict_halfplane_any_t0():
    for t0 in (0.0, 7.0):
        report = almost_invertibility_verdict(2.0, t0, t0 + 20.0)
        assert report.quasi_invertible_verdict == "yes"


def test_phase_scan_small():
    reports = phase_transition_scan([0.3, 0.9, 1.0, 2.0], 40.0)
    by_c = {r.c: r for r in reports}
    assert [r.c for r in reports] == [0.3, 0.9, 1.0, 2.0]
    assert by_c[2.0].sup_mod <= zeta(2).real + 1e-9
    assert by_c[2.0].notes["sup_2T"] <= zeta(2).real + 1e-9
    assert "flag" in by_c[1.0].notes
    # both strip curves hit a nontrivial cell fraction; empirically the
    # c = 0.3 curve covers MORE cells at every reachable T (its larger
    # reflection amplitude sweeps the disc faster than the slow-moving
    # c = 0.9 curve, whose image only fills the plane asymptotically)
    d03, d09 = by_c[0.3].notes["density_fraction"], by_c[0.9].notes["density_fraction"]
    assert 0.0 < d09 < d03 < 1.0
    assert by_c[0.9].quasi_invertible_verdict == "undetermined-up-to-T"
    assert by_c[2.0].quasi_invertible_verdict == "yes"


def test_phase_scan_respects_thread_env(monkeypatch):
    monkeypatch.setenv("FS_THREADS", "2")
    reports = phase_transition_scan([0.7, 2.0], 10.0)
    assert [r.c for r in reports] == [0.7, 2.0]
