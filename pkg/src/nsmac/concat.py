"""Concatenated codes: wrap a non-signaling strategy around W^{tensor n} and
code classically over the induced message channel.

The symmetrized strategy treats all messages alike, so the induced channel
on [k1]x[k2] depends on the message pair only through the two correctness
patterns (j1 == i1) and (j2 == i2): a four-parameter transition structure
whose mutual informations have closed forms.  This keeps rate evaluation
polynomial even when the explicit box would be astronomically large.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .channels import BudgetExceeded, Channel, tensor_power
from .orbits import OrbitSystem, channel_values_all_orbits
from .programs import NsCode, solve_ns
from .regions import Frontier, RatePoint


def _eta(t: float) -> float:
    return -t * math.log2(t) if t > 0 else 0.0


@dataclass
class InducedChannelStats:
    """Aggregate success masses of an NS strategy and the derived
    four-parameter induced channel.

    A  = P(both messages decoded correctly)
    B1 = P(second message correct), B2 = P(first message correct)
    a, b, c, d: transition probabilities for the patterns (both correct),
    (message 1 wrong), (message 2 wrong), (both wrong), each spread uniformly
    over its message pairs.
    """

    k1: int
    k2: int
    A: float
    B1: float
    B2: float
    a: float = field(init=False)
    b: float = field(init=False)
    c: float = field(init=False)
    d: float = field(init=False)

    def __post_init__(self):
        k1, k2 = self.k1, self.k2
        vals = [self.A,
                (self.B1 - self.A) / (k1 - 1) if k1 > 1 else 0.0,
                (self.B2 - self.A) / (k2 - 1) if k2 > 1 else 0.0,
                (1 - self.B1 - self.B2 + self.A) / ((k1 - 1) * (k2 - 1))
                if k1 > 1 and k2 > 1 else 0.0]
        for i, v in enumerate(vals):
            if v < -1e-10:
                raise ValueError(f"induced transition weight {v} < -1e-10")
            vals[i] = max(v, 0.0)
        a, b, c, d = vals
        row = a + (k1 - 1) * b + (k2 - 1) * c + (k1 - 1) * (k2 - 1) * d
        if abs(row - 1) > 1e-9:
            raise ValueError(f"induced channel row sum {row} != 1")
        # renormalize away the clamping noise
        self.a, self.b, self.c, self.d = a / row, b / row, c / row, d / row

    def transition_matrix(self) -> np.ndarray:
        """Explicit channel [k1]x[k2] -> [k1]x[k2], indexed
        (i1, i2, j1, j2)."""
        k1, k2 = self.k1, self.k2
        T = np.full((k1, k2, k1, k2), self.d)
        i1 = np.arange(k1)
        i2 = np.arange(k2)
        T[i1[:, None, None], i2[None, :, None], i1[:, None, None], :] = self.c
        T[i1[:, None, None], i2[None, None, :], :, i2[None, None, :]] = self.b
        T[i1[:, None], i2[None, :], i1[:, None], i2[None, :]] = self.a
        return T


def induced_stats(code: NsCode) -> InducedChannelStats:
    """Aggregate A, B1, B2 from the orbit-level strategy (orbit sums already
    include orbit multiplicities)."""
    sy = code.system
    if sy is None:
        raise ValueError("code lacks its orbit system")
    wv = channel_values_all_orbits(sy.W, sy.t3)
    k12 = code.k1 * code.k2
    A = float(wv @ code.r) / k12
    B1 = float(wv @ code.r1) / k12
    B2 = float(wv @ code.r2) / k12
    return InducedChannelStats(code.k1, code.k2, min(A, 1.0),
                               min(B1, 1.0), min(B2, 1.0))


def _induced_infos(st: InducedChannelStats) -> Tuple[float, float, float, float]:
    """(I(I1:J|I2), I(I2:J), I(I1:J), I(I2:J|I1)) in bits for uniform
    message inputs, via the closed-form entropies of the four-parameter
    channel.  The output marginal is uniform, so H(J) = log2(k1 k2)."""
    k1, k2 = st.k1, st.k2
    a, b, c, d = st.a, st.b, st.c, st.d
    h_row = _eta(a) + (k1 - 1) * _eta(b) + (k2 - 1) * _eta(c) \
        + (k1 - 1) * (k2 - 1) * _eta(d)
    alpha = (a + (k1 - 1) * b) / k1          # P(j | I2), j2 == i2 branch
    beta = (c + (k1 - 1) * d) / k1
    h_j_i2 = k1 * _eta(alpha) + k1 * (k2 - 1) * _eta(beta)
    gamma = (a + (k2 - 1) * c) / k2          # P(j | I1), j1 == i1 branch
    delta = (b + (k2 - 1) * d) / k2
    h_j_i1 = k2 * _eta(gamma) + k2 * (k1 - 1) * _eta(delta)
    h_j = math.log2(k1 * k2)
    i1_g2 = max(h_j_i2 - h_row, 0.0)
    i2_marg = max(h_j - h_j_i2, 0.0)
    i1_marg = max(h_j - h_j_i1, 0.0)
    i2_g1 = max(h_j_i1 - h_row, 0.0)
    return i1_g2, i2_marg, i1_marg, i2_g1


def corner_rates(stats: InducedChannelStats, n: int) -> Tuple[RatePoint, RatePoint]:
    """The two corner points of the induced channel's pentagon with uniform
    message inputs, per channel use of the underlying W."""
    i1_g2, i2_marg, i1_marg, i2_g1 = _induced_infos(stats)
    meta = {"k1": stats.k1, "k2": stats.k2, "n": n,
            "A": stats.A, "B1": stats.B1, "B2": stats.B2}
    return (RatePoint(i1_g2 / n, i2_marg / n, "concat", dict(meta)),
            RatePoint(i1_marg / n, i2_g1 / n, "concat", dict(meta)))


def concat_scan(W: Channel, n: int, k1_range: Iterable[int],
                k2_range: Iterable[int],
                solver: Optional[str] = None,
                system: Optional[OrbitSystem] = None) -> Frontier:
    """Solve the NS LP for each (k1, k2), convert the strategy into corner
    rate points of the induced channel, and keep the nondominated ones.
    Per-cell failures are recorded and skipped."""
    sy = system if system is not None else OrbitSystem(W, n)
    pts: List[RatePoint] = []
    failures: List[Tuple[int, int, str]] = []
    for k1 in k1_range:
        for k2 in k2_range:
            try:
                _, code = solve_ns(W, n, k1, k2, system=sy, solver=solver)
                st = induced_stats(code)
                pts.extend(corner_rates(st, n))
            except Exception as e:  # noqa: BLE001 - scan must continue
                failures.append((k1, k2, str(e)))
    fr = Frontier.from_points(pts) if pts else Frontier([], [])
    fr.failures = failures
    return fr


def induced_channel_explicit(box: np.ndarray, W: Channel, n: int) -> np.ndarray:
    """W[P](j1 j2 | i1 i2) from an explicit box, indexed (i1, i2, j1, j2);
    cross-checks the structured four-parameter form at small n."""
    Wn = tensor_power(W, n) if n > 1 else W
    # box axes: (x1, x2, i1, i2, j1, j2, y)
    return np.einsum("aby,abijkly->ijkl", Wn.w, box)
