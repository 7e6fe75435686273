"""Finite two-sender channels and exact brute-force coding oracles.

A channel is a conditional distribution W(y|x1,x2) stored as a dense float
tensor indexed (x1, x2, y).  Channels built from rational data additionally
carry an exact rational copy of every entry, which the exact LP certification
path consumes.
"""

import hashlib
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from ._rat import Rat, as_rat, rat_to_str

_ATOL = 1e-12


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""


@dataclass
class Channel:
    """W(y|x1,x2) with alphabet sizes nx1, nx2, ny.

    `w` is float64 of shape (nx1, nx2, ny).  `w_exact` is an optional nested
    tuple of rationals with the same indexing; when present it agrees with `w`
    entrywise.
    """

    nx1: int
    nx2: int
    ny: int
    w: np.ndarray
    w_exact: Optional[tuple] = None

    def __post_init__(self):
        if min(self.nx1, self.nx2, self.ny) < 1:
            raise ValueError("alphabet sizes must be >= 1")
        self.w = np.asarray(self.w, dtype=float)
        if self.w.shape != (self.nx1, self.nx2, self.ny):
            raise ValueError(f"bad tensor shape {self.w.shape}")
        if np.any(self.w < -_ATOL):
            raise ValueError("negative probability entry")
        rows = self.w.sum(axis=2)
        if np.max(np.abs(rows - 1.0)) > _ATOL:
            raise ValueError("rows of W(y|x1,x2) must sum to 1")
        self.w.flags.writeable = False

    @property
    def is_rational(self) -> bool:
        return self.w_exact is not None

    def exact(self, x1: int, x2: int, y: int):
        if self.w_exact is None:
            raise ValueError("channel has no exact rational entries")
        return self.w_exact[x1][x2][y]

    def flat(self) -> np.ndarray:
        """Entries in (x1, x2, y) row-major order, length nx1*nx2*ny."""
        return self.w.reshape(-1)

    def flat_exact(self) -> list:
        return [self.w_exact[x1][x2][y]
                for x1 in range(self.nx1)
                for x2 in range(self.nx2)
                for y in range(self.ny)]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.nx1},{self.nx2},{self.ny};".encode())
        if self.w_exact is not None:
            body = ";".join(rat_to_str(v) for v in self.flat_exact())
        else:
            body = ";".join(repr(float(v)) for v in self.flat())
        h.update(body.encode())
        return h.hexdigest()[:16]


def _channel_from_exact(nx1, nx2, ny, entries) -> Channel:
    """entries: nested list [x1][x2][y] of rationals."""
    w = np.array([[[float(entries[a][b][c]) for c in range(ny)]
                   for b in range(nx2)] for a in range(nx1)])
    frozen = tuple(tuple(tuple(entries[a][b][c] for c in range(ny))
                         for b in range(nx2)) for a in range(nx1))
    return Channel(nx1, nx2, ny, w, frozen)


def make_bac() -> Channel:
    """Binary adder channel: y = x1 + x2, binary inputs, ternary output."""
    e = [[[Rat(1) if y == x1 + x2 else Rat(0) for y in range(3)]
          for x2 in range(2)] for x1 in range(2)]
    return _channel_from_exact(2, 2, 3, e)


def make_noisy_bac(eps1, eps2) -> Channel:
    """Adder channel whose inputs are flipped independently with probabilities eps1, eps2.

    W(y|x1,x2) = sum over flip patterns of the flip probability times the
    adder channel applied to the flipped inputs.
    """
    e1, e2 = as_rat(eps1), as_rat(eps2)
    if not (0 <= e1 <= 1 and 0 <= e2 <= 1):
        raise ValueError("flip probabilities must lie in [0, 1]")
    ent = [[[ (1 - e1) * (1 - e2) * (1 if y == x1 + x2 else 0)
            + e1 * (1 - e2) * (1 if y == (1 - x1) + x2 else 0)
            + (1 - e1) * e2 * (1 if y == x1 + (1 - x2) else 0)
            + e1 * e2 * (1 if y == (1 - x1) + (1 - x2) else 0)
              for y in range(3)] for x2 in range(2)] for x1 in range(2)]
    return _channel_from_exact(2, 2, 3, ent)


def tensor(a: Channel, b: Channel, max_entries: int = 50_000_000) -> Channel:
    """Product channel; indices combine with the first factor most significant."""
    n_entries = a.nx1 * b.nx1 * a.nx2 * b.nx2 * a.ny * b.ny
    if n_entries > max_entries:
        raise BudgetExceeded(f"tensor channel would have {n_entries} entries")
    w = np.einsum("abc,ijk->aibjck", a.w, b.w).reshape(
        a.nx1 * b.nx1, a.nx2 * b.nx2, a.ny * b.ny)
    exact = None
    if a.w_exact is not None and b.w_exact is not None and n_entries <= 2_000_000:
        exact = tuple(
            tuple(
                tuple(a.w_exact[a1][a2][ay] * b.w_exact[b1][b2][by]
                      for ay in range(a.ny) for by in range(b.ny))
                for a2 in range(a.nx2) for b2 in range(b.nx2))
            for a1 in range(a.nx1) for b1 in range(b.nx1))
    return Channel(a.nx1 * b.nx1, a.nx2 * b.nx2, a.ny * b.ny, w, exact)


def tensor_power(a: Channel, n: int, **kw) -> Channel:
    out = a
    for _ in range(n - 1):
        out = tensor(out, a, **kw)
    return out


@dataclass
class CodeTables:
    """Deterministic encoders/decoder achieving a brute-force optimum."""

    e1: Tuple[int, ...]
    e2: Tuple[int, ...]
    d: Optional[Tuple[Tuple[int, int], ...]] = None   # joint decoder, per y
    d1: Optional[Tuple[int, ...]] = None              # sum-variant decoders
    d2: Optional[Tuple[int, ...]] = None


def brute_force_success(W: Channel, k1: int, k2: int, objective: str = "joint",
                        budget: int = 200_000_000,
                        return_tables: bool = False):
    """Exact optimum of the (sum-)success probability over deterministic codes.

    Deterministic tables suffice: the objective is affine in each table's
    probabilities, so an extreme point of the product of simplices is optimal.
    """
    if objective not in ("joint", "sum"):
        raise ValueError("objective must be 'joint' or 'sum'")
    m1, m2 = W.nx1 ** k1, W.nx2 ** k2
    cost = m1 * m2 * k1 * k2 * W.ny
    if cost > budget:
        raise BudgetExceeded(f"brute force cost {cost} exceeds budget {budget}")
    E1 = np.array(list(itertools.product(range(W.nx1), repeat=k1)))  # (m1,k1)
    E2 = list(itertools.product(range(W.nx2), repeat=k2))
    A1 = W.w[E1]                      # (m1, k1, nx2, ny)
    best = -1.0
    best_idx = (0, 0)
    vals = np.empty(m1)
    for j, e2 in enumerate(E2):
        M = A1[:, :, e2, :]           # (m1, k1, k2, ny)
        if objective == "joint":
            vals = M.max(axis=(1, 2)).sum(axis=-1)
        else:
            vals = 0.5 * (M.sum(axis=2).max(axis=1).sum(axis=-1)
                          + M.sum(axis=1).max(axis=1).sum(axis=-1))
        i = int(np.argmax(vals))
        # strict improvement keeps the lexicographically smallest optimum
        if vals[i] > best + 1e-15:
            best, best_idx = float(vals[i]), (i, j)
    value = best / (k1 * k2)
    if not return_tables:
        return value
    i, j = best_idx
    e1, e2 = tuple(int(v) for v in E1[i]), tuple(int(v) for v in E2[j])
    M = W.w[np.ix_(e1, e2)]           # (k1, k2, ny)
    if objective == "joint":
        flat = M.reshape(k1 * k2, W.ny)
        dec = tuple((int(q) // k2, int(q) % k2) for q in np.argmax(flat, axis=0))
        tables = CodeTables(e1, e2, d=dec)
    else:
        d1 = tuple(int(v) for v in np.argmax(M.sum(axis=1), axis=0))
        d2 = tuple(int(v) for v in np.argmax(M.sum(axis=0), axis=0))
        tables = CodeTables(e1, e2, d1=d1, d2=d2)
    return value, tables


def p2p_success(wp: np.ndarray, k: int, budget: int = 2_000_000) -> float:
    """Point-to-point analogue: (1/k) max over codebooks S, |S| <= k, of
    sum_y max_{x in S} W(y|x)."""
    wp = np.asarray(wp, dtype=float)
    nx = wp.shape[0]
    kk = min(k, nx)
    if math.comb(nx, kk) > budget:
        raise BudgetExceeded("too many codebooks")
    best = 0.0
    for S in itertools.combinations(range(nx), kk):
        best = max(best, float(wp[list(S)].max(axis=0).sum()))
    return best / k


# ---------------------------------------------------------------------------
# channel file format: header sizes, then sparse "x1 x2 y value" entries with
# value either decimal or p/q; unlisted entries are zero.

def write_channel(W: Channel, path: str) -> None:
    lines = ["# nsmac channel v1",
             f"nx1 {W.nx1}", f"nx2 {W.nx2}", f"ny {W.ny}"]
    for x1 in range(W.nx1):
        for x2 in range(W.nx2):
            for y in range(W.ny):
                if W.w_exact is not None:
                    v = W.w_exact[x1][x2][y]
                    if v == 0:
                        continue
                    lines.append(f"{x1} {x2} {y} {rat_to_str(v)}")
                else:
                    v = W.w[x1, x2, y]
                    if v == 0.0:
                        continue
                    lines.append(f"{x1} {x2} {y} {v!r}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def read_channel(path: str) -> Channel:
    sizes = {}
    entries = []
    with open(path) as f:
        for raw in f:
            line = raw.split("#")[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] in ("nx1", "nx2", "ny"):
                sizes[parts[0]] = int(parts[1])
            else:
                x1, x2, y = int(parts[0]), int(parts[1]), int(parts[2])
                entries.append((x1, x2, y, as_rat(Fraction(parts[3]))))
    nx1, nx2, ny = sizes["nx1"], sizes["nx2"], sizes["ny"]
    ent = [[[Rat(0) for _ in range(ny)] for _ in range(nx2)] for _ in range(nx1)]
    for x1, x2, y, v in entries:
        ent[x1][x2][y] = v
    return _channel_from_exact(nx1, nx2, ny, ent)


def random_channel(rng, nx1: int, nx2: int, ny: int) -> Channel:
    """Random MAC with Dirichlet(1) rows; float-only entries."""
    w = rng.random((nx1, nx2, ny)) + 1e-3
    w /= w.sum(axis=2, keepdims=True)
    return Channel(nx1, nx2, ny, w)
