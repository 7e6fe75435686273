"""Coordinate-permutation orbits (joint types) of tuple alphabets.

An orbit of A^n under the symmetric group S_n permuting coordinates is a
joint type: a count vector t over A with sum n.  Orbit size is the
multinomial n!/prod(t_s!).  Marginal projection of an orbit is again an
orbit, with counts summed over the dropped coordinates of A.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ._rat import Rat
from .channels import BudgetExceeded, Channel


def _compositions(total: int, parts: int):
    """All count vectors of length `parts` summing to `total`, first
    coordinate descending: (n,0,..), (n-1,1,0,..), ..., (0,..,n)."""
    if parts == 1:
        yield (total,)
        return
    for v in range(total, -1, -1):
        for rest in _compositions(total - v, parts - 1):
            yield (v,) + rest


def multinomial(t: Sequence[int]) -> int:
    out = math.factorial(int(sum(t)))
    for c in t:
        out //= math.factorial(int(c))
    return out


@dataclass
class OrbitTable:
    n: int
    alphabet: int
    types: np.ndarray                 # (num_orbits, alphabet) int64
    sizes: List[int] = field(default_factory=list)   # exact multinomials
    index: Dict[Tuple[int, ...], int] = field(default_factory=dict)

    def __len__(self):
        return self.types.shape[0]

    def lookup(self, t: Sequence[int]) -> int:
        return self.index[tuple(int(v) for v in t)]

    def dump(self) -> str:
        lines = [f"# orbits: n={self.n} |A|={self.alphabet} count={len(self)}"]
        for i in range(len(self)):
            lines.append(f"{i}\t{tuple(self.types[i])}\tsize={self.sizes[i]}")
        return "\n".join(lines)


def enumerate_orbits(alphabet: int, n: int, budget: int = 5_000_000) -> OrbitTable:
    count = math.comb(n + alphabet - 1, alphabet - 1)
    if count > budget:
        raise BudgetExceeded(f"{count} orbits exceed budget {budget}")
    types = np.array(list(_compositions(n, alphabet)), dtype=np.int64)
    sizes = [multinomial(t) for t in types]
    index = {tuple(int(v) for v in t): i for i, t in enumerate(types)}
    return OrbitTable(n, alphabet, types, sizes, index)


def project_orbit(t: Sequence[int], src_shape: Sequence[int],
                  coords: Sequence[int]) -> Tuple[int, ...]:
    """Marginal type: reshape t over the product alphabet and sum out the
    coordinates not in `coords` (kept in their original order)."""
    arr = np.asarray(t, dtype=np.int64).reshape(tuple(src_shape))
    drop = tuple(i for i in range(len(src_shape)) if i not in coords)
    out = arr.sum(axis=drop) if drop else arr
    return tuple(int(v) for v in out.reshape(-1))


def _symbol_projection(src_shape: Sequence[int], coords: Sequence[int]) -> np.ndarray:
    """Map flat source symbol -> flat target symbol for a coordinate subset."""
    idx = np.arange(int(np.prod(src_shape)))
    digits = []
    rem = idx
    for s in reversed(src_shape):
        digits.append(rem % s)
        rem = rem // s
    digits = digits[::-1]             # digits[i] = coordinate i of each symbol
    tgt = np.zeros_like(idx)
    for c in coords:
        tgt = tgt * src_shape[c] + digits[c]
    return tgt


def project_table(src: OrbitTable, src_shape: Sequence[int],
                  coords: Sequence[int], tgt: OrbitTable) -> np.ndarray:
    """Index array mapping each orbit of `src` to its projected orbit in `tgt`."""
    sym = _symbol_projection(src_shape, coords)
    tgt_alpha = tgt.alphabet
    M = np.zeros((src.alphabet, tgt_alpha), dtype=np.int64)
    M[np.arange(src.alphabet), sym] = 1
    proj_counts = src.types @ M
    return np.array([tgt.index[tuple(int(v) for v in row)] for row in proj_counts],
                    dtype=np.int64)


def channel_value_on_orbit(W: Channel, t: Sequence[int]) -> float:
    """prod over triples of W(y|x1,x2)^count; the tensor-power channel value
    at any member of the orbit."""
    flat = W.flat()
    t = np.asarray(t, dtype=np.int64)
    return float(np.prod(np.where(t > 0, flat ** t, 1.0)))


def channel_values_all_orbits(W: Channel, table: OrbitTable) -> np.ndarray:
    flat = W.flat()
    if len(flat) != table.alphabet:
        raise ValueError("orbit table alphabet does not match channel")
    t = table.types
    return np.prod(np.where(t > 0, flat[None, :] ** t, 1.0), axis=1)


def channel_value_on_orbit_exact(W: Channel, t: Sequence[int]):
    flat = W.flat_exact()
    out = Rat(1)
    for v, c in zip(flat, t):
        if c:
            out *= v ** int(c)
    return out


class OrbitSystem:
    """All orbit tables and projections needed by the symmetry-reduced LPs
    for W^{tensor n}: triples (x1,x2,y), pairs (x1,x2), (x2,y), (x1,y),
    and singles y, x1, x2."""

    def __init__(self, W: Channel, n: int, budget: int = 5_000_000):
        self.W, self.n = W, n
        nx1, nx2, ny = W.nx1, W.nx2, W.ny
        self.shape3 = (nx1, nx2, ny)
        self.t3 = enumerate_orbits(nx1 * nx2 * ny, n, budget)
        self.t12 = enumerate_orbits(nx1 * nx2, n, budget)
        self.t2y = enumerate_orbits(nx2 * ny, n, budget)
        self.t1y = enumerate_orbits(nx1 * ny, n, budget)
        self.ty = enumerate_orbits(ny, n, budget)
        self.t1 = enumerate_orbits(nx1, n, budget)
        self.t2 = enumerate_orbits(nx2, n, budget)
        # triple-orbit projections
        self.p3_12 = project_table(self.t3, self.shape3, (0, 1), self.t12)
        self.p3_2y = project_table(self.t3, self.shape3, (1, 2), self.t2y)
        self.p3_1y = project_table(self.t3, self.shape3, (0, 2), self.t1y)
        self.p3_y = project_table(self.t3, self.shape3, (2,), self.ty)
        # pair-orbit projections to singles
        self.p12_1 = project_table(self.t12, (nx1, nx2), (0,), self.t1)
        self.p12_2 = project_table(self.t12, (nx1, nx2), (1,), self.t2)
        self.p2y_2 = project_table(self.t2y, (nx2, ny), (0,), self.t2)
        self.p1y_1 = project_table(self.t1y, (nx1, ny), (0,), self.t1)

    def triple_orbit_of_element(self, x1e: int, x2e: int, ye: int) -> int:
        """Orbit index of an element triple of the tensor-power alphabets,
        with per-copy digits most-significant-first (matching `tensor`)."""
        nx1, nx2, ny = self.shape3
        counts = [0] * (nx1 * nx2 * ny)
        d1 = _digits(x1e, nx1, self.n)
        d2 = _digits(x2e, nx2, self.n)
        dy = _digits(ye, ny, self.n)
        for a, b, c in zip(d1, d2, dy):
            counts[(a * nx2 + b) * ny + c] += 1
        return self.t3.lookup(counts)


def _digits(v: int, base: int, n: int) -> List[int]:
    out = []
    for _ in range(n):
        out.append(v % base)
        v //= base
    return out[::-1]
