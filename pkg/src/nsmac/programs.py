"""Assistance programs over a channel: the non-signaling LP (element-level
and symmetry-reduced), its relaxation, strategy extraction (including the
explicit box reconstruction), and the independent-assistance heuristic.

Variable conventions for the NS program: r is the probability mass on both
decoded messages being correct, r1/r2 on one side being correct with the
other summed out, and p the correctness-independent input marginal.  In the
symmetry-reduced LPs each variable is the *sum* of its element-level
counterpart over an orbit; dividing by the orbit size recovers a feasible
element-level point.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._rat import Rat, as_rat
from .channels import (BudgetExceeded, Channel, CodeTables, brute_force_success,
                       tensor_power)
from .lp import (EQ, GE, LE, LinearProgram, LpSolution, OneCheck,
                 check_value_is_one, solve)
from .orbits import (OrbitSystem, channel_value_on_orbit_exact,
                     channel_values_all_orbits)


# ---------------------------------------------------------------------------
# element-level NS LP

def build_ns_lp_element(W: Channel, k1: int, k2: int,
                        rational: bool = False) -> LinearProgram:
    """NS success-probability LP over single-letter elements.

    Variables: r, r1, r2 indexed (x1,x2,y) and p indexed (x1,x2).
    maximize (1/k1k2) sum W(y|x1,x2) r_{x1,x2,y}.
    """
    nx1, nx2, ny = W.nx1, W.nx2, W.ny
    nel = nx1 * nx2 * ny
    npair = nx1 * nx2

    def ir(x1, x2, y):
        return (x1 * nx2 + x2) * ny + y

    def ir1(x1, x2, y):
        return nel + ir(x1, x2, y)

    def ir2(x1, x2, y):
        return 2 * nel + ir(x1, x2, y)

    def ip(x1, x2):
        return 3 * nel + x1 * nx2 + x2

    lp = LinearProgram(3 * nel + npair, maximize=True, rational=rational)
    flat = W.flat_exact() if rational else W.flat()
    denom = Rat(1, k1 * k2) if rational else 1.0 / (k1 * k2)
    lp.set_objective({ir(x1, x2, y): denom * flat[ir(x1, x2, y)]
                      for x1 in range(nx1) for x2 in range(nx2)
                      for y in range(ny)})
    one = Rat(1) if rational else 1.0
    # normalization of the decoder marginal
    for y in range(ny):
        lp.add_row({ir(x1, x2, y): one for x1 in range(nx1)
                    for x2 in range(nx2)}, EQ, 1)
    # non-signaling of sender 1 relative to (x2, y) statistics
    for x2 in range(nx2):
        for y in range(ny):
            row = {ir1(x1, x2, y): 1 for x1 in range(nx1)}
            for x1 in range(nx1):
                row[ir(x1, x2, y)] = -k1
            lp.add_row(row, EQ, 0)
    # non-signaling of sender 2 relative to (x1, y) statistics
    for x1 in range(nx1):
        for y in range(ny):
            row = {ir2(x1, x2, y): 1 for x2 in range(nx2)}
            for x2 in range(nx2):
                row[ir(x1, x2, y)] = -k2
            lp.add_row(row, EQ, 0)
    # input marginal consistency
    for x2 in range(nx2):
        for y in range(ny):
            row = {ip(x1, x2): 1 for x1 in range(nx1)}
            for x1 in range(nx1):
                row[ir2(x1, x2, y)] = -k1
            lp.add_row(row, EQ, 0)
    for x1 in range(nx1):
        for y in range(ny):
            row = {ip(x1, x2): 1 for x2 in range(nx2)}
            for x2 in range(nx2):
                row[ir1(x1, x2, y)] = -k2
            lp.add_row(row, EQ, 0)
    # pointwise box constraints: 0 <= r <= r1, r2 <= p and positivity of the
    # doubly-wrong branch
    for x1 in range(nx1):
        for x2 in range(nx2):
            for y in range(ny):
                a, b, c, d = ir(x1, x2, y), ir1(x1, x2, y), ir2(x1, x2, y), ip(x1, x2)
                lp.add_row({b: 1, a: -1}, GE, 0)
                lp.add_row({c: 1, a: -1}, GE, 0)
                lp.add_row({d: 1, b: -1}, GE, 0)
                lp.add_row({d: 1, c: -1}, GE, 0)
                lp.add_row({d: 1, b: -1, c: -1, a: 1}, GE, 0)
    return lp


# ---------------------------------------------------------------------------
# symmetry-reduced NS LP

def build_ns_lp_orbit(W: Channel, n: int, k1: int, k2: int,
                      system: Optional[OrbitSystem] = None,
                      rational: bool = False) -> LinearProgram:
    """NS LP for W^{tensor n}, reduced by the S_n coordinate permutation
    symmetry.  Variables are orbit aggregates; the per-orbit upper bounds
    against p carry the exact size ratio |w| / |w_{X1X2}|."""
    sy = system if system is not None else OrbitSystem(W, n)
    N3, N12 = len(sy.t3), len(sy.t12)

    def vr(w):
        return w

    def vr1(w):
        return N3 + w

    def vr2(w):
        return 2 * N3 + w

    def vp(u):
        return 3 * N3 + u

    lp = LinearProgram(3 * N3 + N12, maximize=True, rational=rational)
    denom = Rat(1, k1 * k2) if rational else 1.0 / (k1 * k2)
    if rational:
        wvals = [channel_value_on_orbit_exact(W, sy.t3.types[w])
                 for w in range(N3)]
    else:
        wvals = channel_values_all_orbits(W, sy.t3)
    lp.set_objective({vr(w): denom * wvals[w]
                      for w in range(N3) if wvals[w] != 0})

    fibers_y = _fibers(sy.p3_y, len(sy.ty))
    fibers_2y = _fibers(sy.p3_2y, len(sy.t2y))
    fibers_1y = _fibers(sy.p3_1y, len(sy.t1y))
    fibers_p2 = _fibers(sy.p12_2, len(sy.t2))
    fibers_p1 = _fibers(sy.p12_1, len(sy.t1))

    # decoder-marginal normalization per output orbit
    for v, ws in enumerate(fibers_y):
        lp.add_row({vr(w): 1 for w in ws}, EQ, sy.ty.sizes[v])
    # r1 aggregation against r, per (x2, y) orbit
    for v, ws in enumerate(fibers_2y):
        row = {vr1(w): 1 for w in ws}
        for w in ws:
            row[vr(w)] = -k1
        lp.add_row(row, EQ, 0)
    # r2 aggregation against r, per (x1, y) orbit
    for v, ws in enumerate(fibers_1y):
        row = {vr2(w): 1 for w in ws}
        for w in ws:
            row[vr(w)] = -k2
        lp.add_row(row, EQ, 0)
    # p coupling to r2, per (x2, y) orbit; the ratio |v_{X2}| / |v| rescales
    # the aggregated inequality exactly as the element-level sum does
    for v, ws in enumerate(fibers_2y):
        v2 = sy.p2y_2[v]
        ratio = _ratio(sy.t2.sizes[v2], sy.t2y.sizes[v], rational)
        row = {vp(u): 1 for u in fibers_p2[v2]}
        for w in ws:
            row[vr2(w)] = -ratio * k1
        lp.add_row(row, EQ, 0)
    # p coupling to r1, per (x1, y) orbit
    for v, ws in enumerate(fibers_1y):
        v1 = sy.p1y_1[v]
        ratio = _ratio(sy.t1.sizes[v1], sy.t1y.sizes[v], rational)
        row = {vp(u): 1 for u in fibers_p1[v1]}
        for w in ws:
            row[vr1(w)] = -ratio * k2
        lp.add_row(row, EQ, 0)
    # five box inequalities per triple orbit; r_w >= 0 stays a variable bound
    for w in range(N3):
        u = int(sy.p3_12[w])
        rat = _ratio(sy.t3.sizes[w], sy.t12.sizes[u], rational)
        lp.add_row({vr1(w): 1, vr(w): -1}, GE, 0)
        lp.add_row({vr2(w): 1, vr(w): -1}, GE, 0)
        lp.add_row({vp(u): rat, vr1(w): -1}, GE, 0)
        lp.add_row({vp(u): rat, vr2(w): -1}, GE, 0)
        lp.add_row({vp(u): rat, vr1(w): -1, vr2(w): -1, vr(w): 1}, GE, 0)
    return lp


def _fibers(proj: np.ndarray, n_targets: int) -> List[List[int]]:
    out: List[List[int]] = [[] for _ in range(n_targets)]
    for w, v in enumerate(proj):
        out[int(v)].append(w)
    return out


def _ratio(num: int, den: int, rational: bool):
    return Rat(num, den) if rational else num / den


# ---------------------------------------------------------------------------
# relaxed NS LP

def build_relaxed_lp(W: Channel, n: int = 1, k1: int = 1, k2: int = 1,
                     level: str = "orbit",
                     system: Optional[OrbitSystem] = None,
                     rational: bool = False) -> LinearProgram:
    """Relaxation of the NS program: variables r, p only, with the r1/r2
    coupling equalities loosened to inequalities."""
    if level == "element":
        return _build_relaxed_element(W if n == 1 else tensor_power(W, n),
                                      k1, k2, rational)
    if level != "orbit":
        raise ValueError("level must be 'element' or 'orbit'")
    sy = system if system is not None else OrbitSystem(W, n)
    N3, N12 = len(sy.t3), len(sy.t12)
    lp = LinearProgram(N3 + N12, maximize=True, rational=rational)

    def vp(u):
        return N3 + u

    denom = Rat(1, k1 * k2) if rational else 1.0 / (k1 * k2)
    if rational:
        wvals = [channel_value_on_orbit_exact(W, sy.t3.types[w])
                 for w in range(N3)]
    else:
        wvals = channel_values_all_orbits(W, sy.t3)
    lp.set_objective({w: denom * wvals[w] for w in range(N3) if wvals[w] != 0})
    fibers_y = _fibers(sy.p3_y, len(sy.ty))
    fibers_2y = _fibers(sy.p3_2y, len(sy.t2y))
    fibers_1y = _fibers(sy.p3_1y, len(sy.t1y))
    fibers_p2 = _fibers(sy.p12_2, len(sy.t2))
    fibers_p1 = _fibers(sy.p12_1, len(sy.t1))
    for v, ws in enumerate(fibers_y):
        lp.add_row({w: 1 for w in ws}, LE, sy.ty.sizes[v])
    lp.add_row({vp(u): 1 for u in range(N12)}, EQ, k1 * k2)
    for v, ws in enumerate(fibers_2y):
        v2 = sy.p2y_2[v]
        # summing the element rows over the (x2,y) orbit multiplies the p
        # side by the fiber count |v| / |v_{X2}|
        ratio = _ratio(sy.t2y.sizes[v], sy.t2.sizes[v2], rational)
        row = {vp(u): ratio for u in fibers_p2[v2]}
        for w in ws:
            row[w] = -k1
        lp.add_row(row, GE, 0)
    for v, ws in enumerate(fibers_1y):
        v1 = sy.p1y_1[v]
        ratio = _ratio(sy.t1y.sizes[v], sy.t1.sizes[v1], rational)
        row = {vp(u): ratio for u in fibers_p1[v1]}
        for w in ws:
            row[w] = -k2
        lp.add_row(row, GE, 0)
    for w in range(N3):
        u = int(sy.p3_12[w])
        rat = _ratio(sy.t3.sizes[w], sy.t12.sizes[u], rational)
        lp.add_row({vp(u): rat, w: -1}, GE, 0)
    return lp


def _build_relaxed_element(W: Channel, k1: int, k2: int,
                           rational: bool) -> LinearProgram:
    nx1, nx2, ny = W.nx1, W.nx2, W.ny
    nel, npair = nx1 * nx2 * ny, nx1 * nx2

    def ir(x1, x2, y):
        return (x1 * nx2 + x2) * ny + y

    def ip(x1, x2):
        return nel + x1 * nx2 + x2

    lp = LinearProgram(nel + npair, maximize=True, rational=rational)
    flat = W.flat_exact() if rational else W.flat()
    denom = Rat(1, k1 * k2) if rational else 1.0 / (k1 * k2)
    lp.set_objective({ir(x1, x2, y): denom * flat[ir(x1, x2, y)]
                      for x1 in range(nx1) for x2 in range(nx2)
                      for y in range(ny)})
    for y in range(ny):
        lp.add_row({ir(x1, x2, y): 1 for x1 in range(nx1)
                    for x2 in range(nx2)}, LE, 1)
    lp.add_row({ip(x1, x2): 1 for x1 in range(nx1) for x2 in range(nx2)},
               EQ, k1 * k2)
    for x2 in range(nx2):
        for y in range(ny):
            row = {ip(x1, x2): 1 for x1 in range(nx1)}
            for x1 in range(nx1):
                row[ir(x1, x2, y)] = -k1
            lp.add_row(row, GE, 0)
    for x1 in range(nx1):
        for y in range(ny):
            row = {ip(x1, x2): 1 for x2 in range(nx2)}
            for x2 in range(nx2):
                row[ir(x1, x2, y)] = -k2
            lp.add_row(row, GE, 0)
    for x1 in range(nx1):
        for x2 in range(nx2):
            for y in range(ny):
                lp.add_row({ip(x1, x2): 1, ir(x1, x2, y): -1}, GE, 0)
    return lp


# ---------------------------------------------------------------------------
# solve + strategy extraction

@dataclass
class NsCode:
    """Orbit-indexed symmetrized NS strategy for (W^{tensor n}, k1, k2)."""

    channel_hash: str
    n: int
    k1: int
    k2: int
    value: float
    r: np.ndarray    # per triple orbit (aggregated over the orbit)
    r1: np.ndarray
    r2: np.ndarray
    p: np.ndarray    # per (x1,x2) pair orbit
    system: Optional[OrbitSystem] = None

    def validate(self, tol: float = 1e-8) -> None:
        if min(self.r.min(), self.r1.min(), self.r2.min(), self.p.min()) < -tol:
            raise ValueError("negative strategy values")
        sy = self.system
        if sy is None:
            return
        wv = channel_values_all_orbits(sy.W, sy.t3)
        s = float(wv @ self.r) / (self.k1 * self.k2)
        if abs(s - self.value) > max(tol, 1e-8):
            raise ValueError(f"objective mismatch {s} vs {self.value}")

    def serialize(self) -> str:
        lines = [f"# nsmac nscode v1",
                 f"channel {self.channel_hash}",
                 f"n {self.n}", f"k1 {self.k1}", f"k2 {self.k2}",
                 f"value {self.value!r}"]
        for name, arr in (("r", self.r), ("r1", self.r1),
                          ("r2", self.r2), ("p", self.p)):
            lines.append(f"{name} " + " ".join(repr(float(v)) for v in arr))
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "NsCode":
        meta, arrs = {}, {}
        for line in text.splitlines():
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(" ")
            if key in ("r", "r1", "r2", "p"):
                arrs[key] = np.array([float(v) for v in rest.split()])
            else:
                meta[key] = rest
        return cls(meta["channel"], int(meta["n"]), int(meta["k1"]),
                   int(meta["k2"]), float(meta["value"]),
                   arrs["r"], arrs["r1"], arrs["r2"], arrs["p"])


def solve_ns(W: Channel, n: int, k1: int, k2: int,
             system: Optional[OrbitSystem] = None,
             solver: Optional[str] = None,
             mode: str = "float") -> Tuple[float, NsCode]:
    sy = system if system is not None else OrbitSystem(W, n)
    lp = build_ns_lp_orbit(W, n, k1, k2, system=sy,
                           rational=(mode == "exact" and W.is_rational))
    sol = solve(lp, mode=mode, solver=solver)
    if sol.status != "optimal":
        raise RuntimeError(f"NS LP solver status: {sol.status}")
    N3 = len(sy.t3)
    x = sol.x
    code = NsCode(W.content_hash(), n, k1, k2, sol.value,
                  r=np.clip(x[:N3], 0.0, None),
                  r1=np.clip(x[N3:2 * N3], 0.0, None),
                  r2=np.clip(x[2 * N3:3 * N3], 0.0, None),
                  p=np.clip(x[3 * N3:], 0.0, None),
                  system=sy)
    return sol.value, code


def solve_relaxed(W: Channel, n: int, k1: int, k2: int,
                  system: Optional[OrbitSystem] = None,
                  solver: Optional[str] = None,
                  mode: str = "float") -> float:
    sy = system if system is not None else OrbitSystem(W, n)
    lp = build_relaxed_lp(W, n, k1, k2, level="orbit", system=sy,
                          rational=(mode == "exact" and W.is_rational))
    sol = solve(lp, mode=mode, solver=solver)
    if sol.status != "optimal":
        raise RuntimeError(f"relaxed LP solver status: {sol.status}")
    return sol.value


# ---------------------------------------------------------------------------
# explicit box reconstruction

def reconstruct_box(code: NsCode, max_entries: int = 20_000_000) -> np.ndarray:
    """Explicit NS box P(x1, x2, (j1, j2) | i1, i2, y) as an array indexed
    [x1e, x2e, i1, i2, j1, j2, ye] over tensor-power element alphabets.

    Built from the de-symmetrized element values (orbit aggregate / orbit
    size) through the four correctness-pattern branches; for k=1 the
    wrong-message branches are absent.
    """
    sy = code.system
    if sy is None:
        raise ValueError("code lacks its orbit system")
    W, n, k1, k2 = sy.W, sy.n, code.k1, code.k2
    m1, m2, my = W.nx1 ** n, W.nx2 ** n, W.ny ** n
    total = m1 * m2 * my * (k1 * k2) ** 2
    if total > max_entries:
        raise BudgetExceeded(f"explicit box would have {total} entries")
    sizes3 = np.array([float(s) for s in sy.t3.sizes])
    sizes12 = np.array([float(s) for s in sy.t12.sizes])
    r_el = code.r / sizes3
    r1_el = code.r1 / sizes3
    r2_el = code.r2 / sizes3
    p_el = code.p / sizes12
    box = np.zeros((m1, m2, k1, k2, k1, k2, my))
    for x1e in range(m1):
        for x2e in range(m2):
            for ye in range(my):
                w = sy.triple_orbit_of_element(x1e, x2e, ye)
                u = int(sy.p3_12[w])
                r, r1v, r2v, p = r_el[w], r1_el[w], r2_el[w], p_el[u]
                for i1 in range(k1):
                    for i2 in range(k2):
                        box[x1e, x2e, i1, i2, i1, i2, ye] = r / (k1 * k2)
                        if k1 > 1:
                            v = (r1v - r) / (k1 * k2 * (k1 - 1))
                            for j1 in range(k1):
                                if j1 != i1:
                                    box[x1e, x2e, i1, i2, j1, i2, ye] = v
                        if k2 > 1:
                            v = (r2v - r) / (k1 * k2 * (k2 - 1))
                            for j2 in range(k2):
                                if j2 != i2:
                                    box[x1e, x2e, i1, i2, i1, j2, ye] = v
                        if k1 > 1 and k2 > 1:
                            v = (p - r1v - r2v + r) / (k1 * k2 * (k1 - 1) * (k2 - 1))
                            for j1 in range(k1):
                                for j2 in range(k2):
                                    if j1 != i1 and j2 != i2:
                                        box[x1e, x2e, i1, i2, j1, j2, ye] = v
    return np.clip(box, 0.0, None)


def box_ns_residuals(box: np.ndarray) -> float:
    """Largest violation of the non-signaling marginal equalities: the
    marginal on any two parties' outputs must not depend on the remaining
    party's input."""
    # parties: sender1 (in i1 / out x1), sender2 (in i2 / out x2),
    # receiver (in y / out (j1,j2)); axes (x1, x2, i1, i2, j1, j2, y)
    res = 0.0
    m = box.sum(axis=(1, 4, 5))              # P(x1 | i1, i2, y)
    res = max(res, float(np.abs(m - m.mean(axis=2, keepdims=True)).max()))
    res = max(res, float(np.abs(m - m.mean(axis=3, keepdims=True)).max()))
    m = box.sum(axis=(0, 4, 5))              # P(x2 | i1, i2, y)
    res = max(res, float(np.abs(m - m.mean(axis=1, keepdims=True)).max()))
    res = max(res, float(np.abs(m - m.mean(axis=3, keepdims=True)).max()))
    m = box.sum(axis=(0, 1))                 # P(j1, j2 | i1, i2, y)
    res = max(res, float(np.abs(m - m.mean(axis=0, keepdims=True)).max()))
    res = max(res, float(np.abs(m - m.mean(axis=1, keepdims=True)).max()))
    return res


def box_success(box: np.ndarray, W: Channel, n: int) -> float:
    """Success probability of the box when used as a code on W^{tensor n}."""
    Wn = tensor_power(W, n) if n > 1 else W
    k1, k2 = box.shape[2], box.shape[3]
    i1 = np.arange(k1)[:, None]
    i2 = np.arange(k2)[None, :]
    # correctly decoded branch P(x1, x2, (i1,i2) | i1, i2, y)
    diag = box[:, :, i1, i2, i1, i2, :]      # (x1, x2, k1, k2, y)
    s = np.einsum("aby,abijy->", Wn.w, diag)
    return float(s) / (k1 * k2)


# ---------------------------------------------------------------------------
# independent NS assistance (bilinear heuristic)

@dataclass
class IndepNsStrategy:
    r1: np.ndarray   # (nx1, ny)
    p1: np.ndarray   # (nx1,)
    r2: np.ndarray   # (nx2, ny)
    p2: np.ndarray   # (nx2,)
    value: float = 0.0

    def validate(self, k1: int, k2: int, tol: float = 1e-7) -> None:
        assert np.all(self.r1 >= -tol) and np.all(self.r2 >= -tol)
        assert np.abs(self.r1.sum(axis=0) - 1).max() < tol
        assert np.abs(self.r2.sum(axis=0) - 1).max() < tol
        assert abs(self.p1.sum() - k1) < tol and abs(self.p2.sum() - k2) < tol
        assert np.all(self.r1 <= self.p1[:, None] + tol)
        assert np.all(self.r2 <= self.p2[:, None] + tol)


def _side_lp(W: Channel, side: int, k: int, c_r: np.ndarray,
             c_p: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    """maximize c_r.r + c_p.p over one sender's strategy polytope."""
    nx = W.nx1 if side == 1 else W.nx2
    ny = W.ny
    lp = LinearProgram(nx * ny + nx, maximize=True)

    def ir(x, y):
        return x * ny + y

    def ip(x):
        return nx * ny + x

    obj = {ir(x, y): c_r[x, y] for x in range(nx) for y in range(ny)}
    for x in range(nx):
        obj[ip(x)] = c_p[x]
    lp.set_objective(obj)
    for y in range(ny):
        lp.add_row({ir(x, y): 1 for x in range(nx)}, EQ, 1)
    lp.add_row({ip(x): 1 for x in range(nx)}, EQ, k)
    for x in range(nx):
        for y in range(ny):
            lp.add_row({ip(x): 1, ir(x, y): -1}, GE, 0)
    sol = solve(lp)
    if sol.status != "optimal":
        raise RuntimeError(f"side LP status {sol.status}")
    r = sol.x[: nx * ny].reshape(nx, ny)
    p = sol.x[nx * ny:]
    return r, p, sol.value


def _indep_value(W: Channel, k1: int, k2: int, s: IndepNsStrategy) -> float:
    t1 = np.einsum("aby,ay,b->", W.w, s.r1, s.p2)
    t2 = np.einsum("aby,by,a->", W.w, s.r2, s.p1)
    return (t1 + t2) / (2 * k1 * k2)


def indep_ns_sum(W: Channel, k1: int, k2: int, restarts: int = 4,
                 tol: float = 1e-9, max_rounds: int = 200,
                 seed: int = 0) -> Tuple[float, IndepNsStrategy]:
    """Alternating-LP lower bound on the sum-success probability with
    independent sender-receiver assistance.

    The program is bilinear, so this is a heuristic; the classical-code seed
    guarantees the result is at least the unassisted sum-success value.
    """
    nx1, nx2, ny = W.nx1, W.nx2, W.ny
    seeds: List[Tuple[np.ndarray, np.ndarray]] = []
    seeds.append((np.full((nx2, ny), 1.0 / nx2), np.full(nx2, k2 / nx2)))
    _, tables = brute_force_success(W, k1, k2, "sum", return_tables=True)
    r2c = np.zeros((nx2, ny))
    for y in range(ny):
        r2c[tables.e2[tables.d2[y]], y] = 1.0
    p2c = np.zeros(nx2)
    for x in tables.e2:
        p2c[x] += 1.0
    seeds.append((r2c, p2c))
    rng = np.random.default_rng(seed)
    while len(seeds) < restarts:
        p2 = rng.dirichlet(np.ones(nx2)) * k2
        r2 = rng.dirichlet(np.ones(nx2), size=ny).T
        r2 = np.minimum(r2, p2[:, None])
        r2 /= np.maximum(r2.sum(axis=0, keepdims=True), 1e-12)
        if np.all(r2 <= p2[:, None] + 1e-12):
            seeds.append((r2, p2))
        else:
            seeds.append((np.full((nx2, ny), 1.0 / nx2), p2))
    best_val, best = -1.0, None
    for r2, p2 in seeds[:max(restarts, 2)]:
        cur = IndepNsStrategy(np.full((nx1, ny), 1.0 / nx1),
                              np.full(nx1, float(k1)) / nx1, r2, p2)
        val = None
        for _ in range(max_rounds):
            # optimize side 1 given side 2
            c_r = np.einsum("aby,b->ay", W.w, cur.p2) / (2 * k1 * k2)
            c_p = np.einsum("aby,by->a", W.w, cur.r2) / (2 * k1 * k2)
            r1, p1, _ = _side_lp(W, 1, k1, c_r, c_p)
            cur = IndepNsStrategy(r1, p1, cur.r2, cur.p2)
            # optimize side 2 given side 1
            c_r = np.einsum("aby,a->by", W.w, cur.p1) / (2 * k1 * k2)
            c_p = np.einsum("aby,ay->b", W.w, cur.r1) / (2 * k1 * k2)
            r2n, p2n, _ = _side_lp(W, 2, k2, c_r, c_p)
            cur = IndepNsStrategy(cur.r1, cur.p1, r2n, p2n)
            newval = _indep_value(W, k1, k2, cur)
            if val is not None and newval <= val + tol:
                val = max(val, newval)
                break
            val = newval
        if val > best_val:
            best_val, best = val, cur
    best.value = best_val
    return best_val, best


def build_ns_sum_lp(W: Channel, k1: int, k2: int) -> LinearProgram:
    """Tripartite NS program for the sum-success objective: same feasible
    set as the joint NS LP, objective (r1 + r2) / 2 instead of r.  Upper
    bounds the independent-assistance heuristic."""
    lp = build_ns_lp_element(W, k1, k2)
    nx1, nx2, ny = W.nx1, W.nx2, W.ny
    nel = nx1 * nx2 * ny
    flat = W.flat()
    denom = 1.0 / (2 * k1 * k2)
    obj = {}
    for e in range(nel):
        if flat[e] != 0:
            obj[nel + e] = denom * flat[e]
            obj[2 * nel + e] = denom * flat[e]
    lp.set_objective(obj)
    return lp


def nssr_factor(k: int, l: int) -> float:
    """(k/l)(1 - (1 - 1/k)^l): the random-coding contraction factor."""
    return (k / l) * (1.0 - (1.0 - 1.0 / k) ** l)


@dataclass
class NssrReport:
    factor: float
    indep_value: float
    lhs: float
    rhs: float
    holds: bool


def check_nssr_inequality(W: Channel, k1: int, k2: int, l1: int, l2: int,
                          tol: float = 1e-9) -> NssrReport:
    """Necessary check of min(factor1, factor2) * S_sum^indep(W,k1,k2)
    <= S_sum(W,l1,l2), with the left side evaluated via the alternating
    heuristic (a lower bound, so a violation would be a true violation)."""
    fac = min(nssr_factor(k1, l1), nssr_factor(k2, l2))
    val, _ = indep_ns_sum(W, k1, k2)
    rhs = brute_force_success(W, l1, l2, "sum")
    lhs = fac * val
    return NssrReport(fac, val, lhs, rhs, bool(lhs <= rhs + tol))
