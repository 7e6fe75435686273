import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsmac.channels import (BudgetExceeded, Channel, brute_force_success,
                            make_bac, make_noisy_bac, p2p_success,
                            random_channel, read_channel, tensor,
                            tensor_power, write_channel)


def test_bac_definition():
    W = make_bac()
    assert (W.nx1, W.nx2, W.ny) == (2, 2, 3)
    for x1, x2 in itertools.product(range(2), range(2)):
        assert W.w[x1, x2, x1 + x2] == 1.0
    assert W.is_rational


def test_noisy_bac_rows_and_exactness():
    W = make_noisy_bac(Fraction(1, 100), Fraction(3, 100))
    assert W.is_rational
    for x1, x2 in itertools.product(range(2), range(2)):
        assert sum(W.w_exact[x1][x2]) == 1
    # zero noise degenerates to the clean adder
    W0 = make_noisy_bac(0, 0)
    assert np.array_equal(W0.w, make_bac().w)


def test_noisy_bac_flip_mixture():
    e1, e2 = Fraction(1, 10), Fraction(1, 5)
    W = make_noisy_bac(e1, e2)
    # P(y=0 | 0,0) = both unflipped
    assert W.w_exact[0][0][0] == (1 - e1) * (1 - e2)
    # P(y=2 | 0,0) = both flipped
    assert W.w_exact[0][0][2] == e1 * e2


def test_tensor_index_order():
    """First factor is the most significant digit of the combined index."""
    a = make_bac()
    t = tensor(a, a)
    for x1 in range(4):
        for x2 in range(4):
            y = (x1 // 2 + x2 // 2) * 3 + (x1 % 2 + x2 % 2)
            assert t.w[x1, x2, y] == 1.0
    assert t.is_rational


def test_tensor_power_shapes():
    W3 = tensor_power(make_bac(), 3)
    assert (W3.nx1, W3.nx2, W3.ny) == (8, 8, 27)
    assert np.allclose(W3.w.sum(axis=2), 1.0)


def test_brute_force_known_values():
    W = make_bac()
    assert brute_force_success(W, 1, 1) == 1.0
    assert brute_force_success(W, 1, 2) == 1.0
    assert brute_force_success(W, 2, 2) == 0.75
    assert brute_force_success(W, 2, 2, objective="sum") == 0.75


def test_brute_force_matches_exhaustive_oracle():
    """Independent oracle: enumerate all encoder/decoder triples directly."""
    rng = np.random.default_rng(0)
    for _ in range(5):
        W = random_channel(rng, 2, 2, 2)
        k1 = k2 = 2
        best = 0.0
        for e1 in itertools.product(range(2), repeat=k1):
            for e2 in itertools.product(range(2), repeat=k2):
                s = 0.0
                for y in range(W.ny):
                    s += max(W.w[e1[i1], e2[i2], y]
                             for i1 in range(k1) for i2 in range(k2))
                best = max(best, s / (k1 * k2))
        assert abs(brute_force_success(W, k1, k2) - best) <= 1e-12


def test_brute_force_tables_consistent():
    rng = np.random.default_rng(3)
    W = random_channel(rng, 2, 2, 3)
    val, tab = brute_force_success(W, 2, 2, return_tables=True)
    s = 0.0
    for y in range(W.ny):
        i1, i2 = tab.d[y]
        s += W.w[tab.e1[i1], tab.e2[i2], y]
    assert abs(s / 4 - val) <= 1e-12


def test_brute_force_budget():
    W = tensor_power(make_bac(), 3)
    with pytest.raises(BudgetExceeded):
        brute_force_success(W, 8, 8, budget=1000)


def test_p2p_success():
    W = make_bac()
    # x2 fixed at 0: y = x1, perfectly distinguishable
    assert p2p_success(W.w[:, 0, :], 2) == 1.0
    assert p2p_success(W.w[:, 0, :], 1) == 1.0


def test_channel_file_roundtrip(tmp_path):
    W = make_noisy_bac(Fraction(1, 7), Fraction(2, 13))
    path = str(tmp_path / "ch.txt")
    write_channel(W, path)
    W2 = read_channel(path)
    assert W2.w_exact == W.w_exact
    assert W2.content_hash() == W.content_hash()


def test_invalid_channel_rejected():
    w = np.zeros((2, 2, 2))
    w[:, :, 0] = 0.7   # rows sum to 0.7
    with pytest.raises(ValueError):
        Channel(2, 2, 2, w)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 4))
def test_random_channel_is_valid(seed, ny):
    W = random_channel(np.random.default_rng(seed), 2, 2, ny)
    assert np.allclose(W.w.sum(axis=2), 1.0, atol=1e-12)
    assert W.w.min() >= 0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_success_monotone_in_messages(seed):
    rng = np.random.default_rng(seed)
    W = random_channel(rng, 2, 2, 3)
    vals = [brute_force_success(W, k, 2) for k in (1, 2, 3)]
    assert vals[0] >= vals[1] - 1e-12 >= vals[2] - 2e-12
