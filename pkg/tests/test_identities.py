import math
from fractions import Fraction

import numpy as np
import pytest

from bakersim import identities as ids


def test_q_pair_examples():
    assert ids.q_pair_sum_bruteforce(1, 1) == 4
    assert ids.q_pair_sum_bruteforce(1, 2) == 2
    assert ids.q_pair_sum_closed(1, 1) == 4
    assert ids.q_pair_sum_closed(1, 2) == 2
    assert ids.q_pair_sum_closed(2, 3) == 6 == ids.q_pair_sum_bruteforce(2, 3)


def test_q_pair_out_of_range_is_zero():
    for L in (1, 2, 5):
        assert ids.q_pair_sum_bruteforce(L, (2 << L)) == 0
        assert ids.q_pair_sum_bruteforce(L, (2 << L) + 7) == 0


def test_q_pair_closed_domain():
    with pytest.raises(ValueError):
        ids.q_pair_sum_closed(2, 0)
    with pytest.raises(ValueError):
        ids.q_pair_sum_closed(2, 8)


@pytest.mark.parametrize("L", range(1, 7))
def test_histogram_against_loop(L):
    for s in range(-(2 << L), (2 << L) + 2):
        assert ids.q_pair_sum_bruteforce(L, s) == ids.q_count(L, s) + ids.q_count(L, 1 - s)


@pytest.mark.parametrize("L", range(1, 13))
def test_q_pair_closed_exhaustive(L):
    for s in range(1, (2 << L)):
        assert ids.q_pair_sum_closed(L, s) == ids.q_pair_sum_bruteforce(L, s)


def test_cos_product_examples():
    lhs, rhs = ids.cos_product_check(math.pi / 6, 2)
    assert lhs == pytest.approx(math.sqrt(3) / 4, abs=1e-15)
    assert rhs == pytest.approx(math.sqrt(3) / 4, abs=1e-15)
    x = 0.7
    lhs, rhs = ids.cos_product_check(x, 1)
    assert lhs == pytest.approx(math.sin(2 * x) / (2 * math.sin(x)), abs=1e-15)
    with pytest.raises(ValueError):
        ids.cos_product_check(math.pi, 3)


def test_cos_product_sweep(rng):
    for _ in range(500):
        lhs, rhs = ids.cos_product_check(rng.uniform(1e-3, math.pi - 1e-3), int(rng.integers(1, 21)))
        assert abs(lhs - rhs) < 1e-12


def test_odd_inverse_square_partial():
    assert ids.odd_inverse_square_partial(1) == pytest.approx(10 / 9, abs=1e-15)
    assert abs(ids.odd_inverse_square_partial(10) - math.pi ** 2 / 8) < 2 ** -10
    vals = [ids.odd_inverse_square_partial(L) for L in range(1, 15)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_odd_harmonic_ratio():
    assert ids.odd_harmonic_ratio(1) == pytest.approx(2 / 3, abs=1e-15)
    ratios = [ids.odd_harmonic_ratio(L) / (L / 2 ** L) for L in range(2, 21)]
    assert max(ratios) <= 1.0
    assert ids.odd_harmonic_ratio(20) < ids.odd_harmonic_ratio(10) < ids.odd_harmonic_ratio(2)


def test_catalan_partial():
    assert ids.catalan_partial(1) == pytest.approx(8 / 9, abs=1e-15)
    assert abs(ids.catalan_partial(2000) - 0.915965) < 1e-6
    # alternate partial sums bracket the limit
    g = ids.catalan_partial(200_000)
    for T in range(1, 30):
        lo, hi = sorted([ids.catalan_partial(T), ids.catalan_partial(T + 1)])
        assert lo <= g <= hi
        assert abs(ids.catalan_partial(T) - g) < 1 / (2 * T + 1) ** 2


@pytest.mark.parametrize("L", range(1, 7))
def test_q_reduction_exact(L):
    assert ids.lower_bound_double_sum(L) == ids.lower_bound_q_sum(L, exact=True)
    assert float(ids.lower_bound_q_sum(L, exact=True)) == pytest.approx(ids.lower_bound_q_sum(L), rel=1e-14)


def test_lower_bound_envelope():
    vals = [ids.fidelity_lower_bound_sum(L) for L in range(1, 15)]
    assert all(v < 1 for v in vals)
    ratios = [(1 - ids.fidelity_lower_bound_sum(L)) * 2 ** L / L for L in range(4, 15)]
    assert max(ratios) / min(ratios) < 2
    assert max(ratios) < 1
