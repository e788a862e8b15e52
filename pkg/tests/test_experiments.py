import math

import pytest

from conftest import brute_cut_sum
from kuramoto_fp import (
    InvalidSizeError,
    circulant_network,
    conjecture51_half_cut,
    conjecture51_r,
    theorem51_harness,
    twisted_state,
)


def partial_sums(n, upto):
    total, out = 0.0, []
    for i in range(1, upto + 1):
        total += i * math.cos(2 * math.pi * i / n)
        out.append(total)
    return out


def test_threshold_small_n_by_hand():
    assert partial_sums(6, 2) == pytest.approx([0.5, -0.5])
    assert partial_sums(10, 4) == pytest.approx([0.809017, 1.427051, 0.5, -2.736068], abs=1e-6)
    assert conjecture51_r(6).r == 2
    assert conjecture51_r(10).r == 4


def test_threshold_row_invariant():
    for n in range(3, 120):
        row = conjecture51_r(n)
        sums = partial_sums(n, row.r)
        assert sums[-1] <= 0
        assert all(s > 0 for s in sums[:-1])
        assert row.ratio == 2 * row.r / n


def test_threshold_nondecreasing():
    rs = [conjecture51_r(n).r for n in range(6, 201)]
    assert all(b >= a for a, b in zip(rs, rs[1:]))


def test_threshold_large_n():
    assert 0.73 <= conjecture51_r(10_000).ratio <= 0.75


def _enumerated_half_cut(n, r):
    net = circulant_network(n, range(1, r + 1))
    return brute_cut_sum(net, twisted_state(n, 1), range(n // 2))


def test_half_cut_ring6():
    assert conjecture51_half_cut(6, 1) == pytest.approx(1.0, abs=1e-12)


def test_half_cut_sign_matches_threshold_sum():
    value = conjecture51_half_cut(12, 2)
    assert value == pytest.approx(_enumerated_half_cut(12, 2), abs=1e-12)
    assert math.copysign(1, value) == math.copysign(1, partial_sums(12, 2)[-1])


@pytest.mark.parametrize("n", [6, 8, 12, 20, 31 + 1])
def test_half_cut_against_enumeration_and_formula(n):
    for r in range(1, n // 2 + 1):
        value = conjecture51_half_cut(n, r)
        assert value == pytest.approx(_enumerated_half_cut(n, r), abs=1e-12)
        if r < n // 2:
            # offset s contributes 2s crossing edges at both ends of the half
            assert value == pytest.approx(2 * partial_sums(n, r)[-1], abs=1e-9)


def test_half_cut_rejects_odd():
    with pytest.raises(InvalidSizeError):
        conjecture51_half_cut(7, 2)


def test_harness_k3():
    rep = theorem51_harness(3, trials=300, seed=1)
    assert rep.nonzero > 0
    assert rep.unstable_by_spectrum == rep.unstable_by_cut == rep.unstable_by_centroid == rep.nonzero
    assert rep.max_min_cut == pytest.approx(-1.0, abs=1e-9)
    assert rep.upheld
    assert rep.newton_failures + rep.zero_class + rep.nonzero == rep.trials


def test_harness_near_complete():
    rep = theorem51_harness(6, trials=150, seed=4, min_degree="n-2")
    assert rep.graph == "K6 minus 0-1 2-3 4-5"
    assert rep.nonzero > 0 and rep.upheld


def test_harness_deterministic_across_workers():
    a = theorem51_harness(5, trials=60, seed=9).to_text()
    b = theorem51_harness(5, trials=60, seed=9).to_text()
    c = theorem51_harness(5, trials=60, seed=9, workers=2).to_text()
    assert a == b == c


def test_harness_range():
    with pytest.raises(InvalidSizeError):
        theorem51_harness(13, trials=1)
    with pytest.raises(InvalidSizeError):
        theorem51_harness(2, trials=1)
