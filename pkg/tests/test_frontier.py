import math

import pytest

from nsmac.channels import make_bac
from nsmac.frontier import FrontierPoint, ScanConfig, zero_error_frontier

BAC = make_bac()


def test_bac_n1_frontier():
    scan = zero_error_frontier(ScanConfig(channel=BAC, n=1))
    assert not scan.failures
    got = {(p.k1, p.k2) for p in scan.points}
    # one sender idle: the other signals noiselessly with two messages
    assert got == {(1, 2), (2, 1)}


def test_bac_n2_frontier_monotone():
    scan = zero_error_frontier(ScanConfig(channel=BAC, n=2))
    assert not scan.failures
    k2s = [p.k2 for p in scan.points]
    assert k2s == sorted(k2s, reverse=True)
    k1s = [p.k1 for p in scan.points]
    assert k1s == sorted(k1s)
    # (1, 4): four messages through the noiseless x2 -> y channel squared
    assert (1, 4) in {(p.k1, p.k2) for p in scan.points}


def test_rates_are_log_scaled():
    scan = zero_error_frontier(ScanConfig(channel=BAC, n=2))
    for p in scan.points:
        assert abs(p.rate1 - math.log2(p.k1) / 2) <= 1e-12
        assert abs(p.rate2 - math.log2(p.k2) / 2) <= 1e-12


def test_relaxed_dominates_ns_frontier():
    ns = zero_error_frontier(ScanConfig(channel=BAC, n=2, mode="ns"))
    rx = zero_error_frontier(ScanConfig(channel=BAC, n=2, mode="relaxed"))
    best_ns = {p.k1: p.k2 for p in ns.points}
    best_rx = {p.k1: p.k2 for p in rx.points}
    for k1, k2 in best_ns.items():
        cover = max((v for k, v in best_rx.items() if k >= k1), default=0)
        assert cover >= k2


def test_config_validation():
    with pytest.raises(ValueError):
        ScanConfig(channel=BAC, mode="bogus")
    with pytest.raises(ValueError):
        ScanConfig(channel=BAC, tol=0.5)


def test_k2_cap_respected():
    scan = zero_error_frontier(ScanConfig(channel=BAC, n=2, k2_cap=2))
    assert all(p.k2 <= 2 for p in scan.points)
