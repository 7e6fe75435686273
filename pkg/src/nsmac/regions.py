"""Single-letter capacity regions, mutual-information utilities, and
one-shot hypothesis-testing converse bounds.

All logarithms are base 2 and 0*log(0) = 0.  Regions are unions of
"pentagons" {R1 <= I(X1:Y|X2), R2 <= I(X2:Y|X1), R1+R2 <= I(X1X2:Y)} over
input distributions: product laws for the classical region, arbitrary joint
laws for the relaxed non-signaling outer bound.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .channels import Channel
from .lp import GE, LE, LinearProgram, solve


def _xlog2x(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    mask = v > 0
    out[mask] = v[mask] * np.log2(v[mask])
    return out


def entropy(p: np.ndarray, axis=None) -> np.ndarray:
    return -_xlog2x(np.asarray(p, dtype=float)).sum(axis=axis)


def binary_entropy(p: float) -> float:
    if not 0 <= p <= 1:
        raise ValueError("binary entropy argument outside [0,1]")
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


@dataclass
class JointDist:
    """Input distribution P(x1,x2), optionally flagged as a product law."""

    p: np.ndarray
    product_form: bool = False
    p1: Optional[np.ndarray] = None
    p2: Optional[np.ndarray] = None

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        if np.any(self.p < -1e-12) or abs(self.p.sum() - 1) > 1e-12:
            raise ValueError("not a probability distribution")
        if self.product_form:
            if self.p1 is None:
                self.p1 = self.p.sum(axis=1)
            if self.p2 is None:
                self.p2 = self.p.sum(axis=0)
            if np.abs(np.outer(self.p1, self.p2) - self.p).max() > 1e-12:
                raise ValueError("product flag set but P does not factorize")

    @classmethod
    def product(cls, p1: Sequence[float], p2: Sequence[float]) -> "JointDist":
        p1 = np.asarray(p1, dtype=float)
        p2 = np.asarray(p2, dtype=float)
        return cls(np.outer(p1, p2), product_form=True, p1=p1, p2=p2)


def mutual_informations(W: Channel, P) -> Tuple[float, float, float]:
    """(I(X1:Y|X2), I(X2:Y|X1), I(X1X2:Y)) in bits for inputs ~ P."""
    p = P.p if isinstance(P, JointDist) else np.asarray(P, dtype=float)
    J = p[:, :, None] * W.w                      # (x1, x2, y)
    h_y_x1x2 = entropy(J) - entropy(p)
    h_y_x2 = entropy(J.sum(axis=0)) - entropy(p.sum(axis=0))
    h_y_x1 = entropy(J.sum(axis=1)) - entropy(p.sum(axis=1))
    h_y = entropy(J.sum(axis=(0, 1)))
    i1g2 = max(h_y_x2 - h_y_x1x2, 0.0)
    i2g1 = max(h_y_x1 - h_y_x1x2, 0.0)
    isum = max(h_y - h_y_x1x2, 0.0)
    return i1g2, i2g1, isum


# ---------------------------------------------------------------------------
# rate points / frontier

@dataclass
class RatePoint:
    R1: float
    R2: float
    provenance: str = ""
    params: dict = field(default_factory=dict)

    def key(self):
        return (self.R1, self.R2)


def _upper_concave_hull(points: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    """Upper-right boundary of the convex/time-sharing closure, anchored on
    both axes."""
    if not points:
        return []
    max_r1 = max(p[0] for p in points)
    max_r2 = max(p[1] for p in points)
    pts = sorted(set(points) | {(0.0, max_r2), (max_r1, 0.0)})
    hull: List[Tuple[float, float]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep only right turns (concave from above)
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= -1e-15:
                hull.pop()
            else:
                break
        hull.append(pt)
    # drop dominated tail pieces with increasing R2 (can occur at the left edge)
    out = []
    for pt in hull:
        while out and out[-1][0] <= pt[0] and out[-1][1] <= pt[1]:
            out.pop()
        out.append(pt)
    return out


@dataclass
class Frontier:
    points: List[RatePoint]
    hull: List[Tuple[float, float]] = field(default_factory=list)

    @classmethod
    def from_points(cls, points: List[RatePoint]) -> "Frontier":
        hull = _upper_concave_hull([p.key() for p in points])
        return cls(sorted(points, key=RatePoint.key), hull)

    def max_sum_rate(self) -> float:
        cands = [x + y for x, y in self.hull] or \
                [p.R1 + p.R2 for p in self.points]
        return max(cands) if cands else 0.0

    def r2_at(self, r1: float) -> float:
        """Largest achievable R2 at the given R1 (hull interpolation)."""
        h = self.hull
        if not h or r1 > h[-1][0] + 1e-12:
            return 0.0
        for (x1, y1), (x2, y2) in zip(h, h[1:]):
            if x1 - 1e-12 <= r1 <= x2 + 1e-12:
                if x2 == x1:
                    return max(y1, y2)
                t = (r1 - x1) / (x2 - x1)
                return y1 + t * (y2 - y1)
        return h[0][1] if r1 <= h[0][0] else 0.0

    def dominates(self, other: "Frontier", tol: float = 1e-9) -> bool:
        return all(self.r2_at(x) >= y - tol for x, y in other.hull)

    def to_csv(self, path: Optional[str] = None, samples: Optional[int] = None) -> str:
        lines = ["R1,R2"]
        if samples:
            xmax = self.hull[-1][0] if self.hull else 0.0
            for i in range(samples):
                x = xmax * i / (samples - 1)
                lines.append(f"{x:.10f},{self.r2_at(x):.10f}")
        else:
            for x, y in self.hull:
                lines.append(f"{x:.10f},{y:.10f}")
        text = "\n".join(lines) + "\n"
        if path:
            with open(path, "w") as f:
                f.write(text)
        return text


# ---------------------------------------------------------------------------
# region computation by grid + local refinement

def _simplex_grid(dim: int, res: int) -> np.ndarray:
    """All distributions with denominators res over `dim` atoms."""
    if dim == 1:
        return np.ones((1, 1))
    if res == 0:
        z = np.zeros((1, dim))
        z[0, 0] = 1.0   # placeholder; callers scale this block by zero mass
        return z
    out = []
    for lead in range(res, -1, -1):
        rest = _simplex_grid(dim - 1, res - lead)
        block = np.empty((rest.shape[0], dim))
        block[:, 0] = lead / res
        block[:, 1:] = rest * ((res - lead) / res if res > lead else 0.0)
        out.append(block)
    return np.vstack(out)


def _pentagon_corners(i1g2, i2g1, isum):
    # corner a: maximize R1 first, then R2; corner b the other way round.
    # all three pentagon constraints are enforced (for correlated inputs the
    # sum bound can cut below the two individual bounds).
    r1a = np.minimum(i1g2, isum)
    r2a = np.maximum(np.minimum(i2g1, isum - r1a), 0.0)
    r2b = np.minimum(i2g1, isum)
    r1b = np.maximum(np.minimum(i1g2, isum - r2b), 0.0)
    return (r1a, r2a), (r1b, r2b)


def _batch_infos(W: Channel, P: np.ndarray):
    """P: (N, nx1, nx2) batch of joint input laws -> three info arrays."""
    J = P[..., None] * W.w[None, ...]
    h_y_x1x2 = entropy(J.reshape(len(P), -1), axis=1) - \
        entropy(P.reshape(len(P), -1), axis=1)
    j2 = J.sum(axis=1)
    h_y_x2 = entropy(j2.reshape(len(P), -1), axis=1) - \
        entropy(P.sum(axis=1), axis=1)
    j1 = J.sum(axis=2)
    h_y_x1 = entropy(j1.reshape(len(P), -1), axis=1) - \
        entropy(P.sum(axis=2), axis=1)
    h_y = entropy(J.sum(axis=(1, 2)), axis=1)
    return (np.maximum(h_y_x2 - h_y_x1x2, 0.0),
            np.maximum(h_y_x1 - h_y_x1x2, 0.0),
            np.maximum(h_y - h_y_x1x2, 0.0))


def _scalarized(i1g2, i2g1, isum, t: float):
    """Best value of R1 + t R2 over the pentagon (attained at a corner)."""
    (ax, ay), (bx, by) = _pentagon_corners(i1g2, i2g1, isum)
    return np.maximum(ax + t * ay, bx + t * by)


def _refine_scalarized(W: Channel, p0: np.ndarray, product: bool,
                       t: float = 1.0):
    """Local refinement of max R1 + t R2 (t=1: the sum rate): Nelder-Mead
    on a softmax parameterization around the best grid cell."""
    from scipy.optimize import minimize
    nx1, nx2 = W.nx1, W.nx2

    def unpack(z):
        if product:
            a = np.exp(z[:nx1] - z[:nx1].max())
            b = np.exp(z[nx1:] - z[nx1:].max())
            return np.outer(a / a.sum(), b / b.sum())
        a = np.exp(z - z.max())
        return (a / a.sum()).reshape(nx1, nx2)

    def neg(z):
        i1g2, i2g1, isum = mutual_informations(W, unpack(z))
        return -float(_scalarized(i1g2, i2g1, isum, t))

    if product:
        z0 = np.concatenate([np.log(p0.sum(axis=1) + 1e-9),
                             np.log(p0.sum(axis=0) + 1e-9)])
    else:
        z0 = np.log(p0.reshape(-1) + 1e-9)
    res = minimize(neg, z0, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
    return float(-res.fun), unpack(res.x)


def _refine_sum_rate(W: Channel, p0: np.ndarray, product: bool):
    return _refine_scalarized(W, p0, product, t=1.0)


# weighted-sum directions refined after the grid pass; the extreme weights
# pull the hull out near the axes where grid laws converge slowly
_REFINE_WEIGHTS = (0.05, 0.25, 0.5, 1.0, 2.0, 4.0, 20.0)


def _region_from_grid(W: Channel, P: np.ndarray, provenance: str,
                      chunk: int = 65536) -> Frontier:
    pts: List[Tuple[float, float]] = []
    best = {t: (-1.0, None) for t in _REFINE_WEIGHTS}
    for s in range(0, len(P), chunk):
        block = P[s:s + chunk]
        i1g2, i2g1, isum = _batch_infos(W, block)
        (ax, ay), (bx, by) = _pentagon_corners(i1g2, i2g1, isum)
        pts.extend(zip(ax.tolist(), ay.tolist()))
        pts.extend(zip(bx.tolist(), by.tolist()))
        for t in _REFINE_WEIGHTS:
            score = _scalarized(i1g2, i2g1, isum, t)
            k = int(np.argmax(score))
            if score[k] > best[t][0]:
                best[t] = (float(score[k]), block[k])
    product = (provenance == "classical")
    for t, (grid_val, p0) in best.items():
        refined, p_ref = _refine_scalarized(W, p0, product, t)
        if refined > grid_val:
            i1g2, i2g1, isum = mutual_informations(W, p_ref)
            (ax, ay), (bx, by) = _pentagon_corners(i1g2, i2g1, isum)
            pts.extend([(float(ax), float(ay)), (float(bx), float(by))])
    rps = [RatePoint(x, y, provenance) for x, y in pts]
    return Frontier.from_points(rps)


def classical_region(W: Channel, grid: int = 512) -> Frontier:
    """Union of pentagons over product input laws on a simplex grid."""
    G1 = _simplex_grid(W.nx1, grid)
    G2 = _simplex_grid(W.nx2, grid)
    P = (G1[:, None, :, None] * G2[None, :, None, :]).reshape(
        len(G1) * len(G2), W.nx1, W.nx2)
    return _region_from_grid(W, P, "classical")


def relaxed_region(W: Channel, grid: int = 256) -> Frontier:
    """Union of pentagons over *joint* input laws: the relaxed-NS outer
    bound region."""
    G = _simplex_grid(W.nx1 * W.nx2, grid).reshape(-1, W.nx1, W.nx2)
    return _region_from_grid(W, G, "relaxed")


def classical_corner(W: Channel, grid: int = 512) -> Tuple[float, float]:
    """Corner (I(X1:Y), I(X2:Y|X1)) of the sum-rate-maximizing pentagon over
    product laws; by the chain rule its coordinates add up to the maximum
    sum-rate."""
    G1 = _simplex_grid(W.nx1, grid)
    G2 = _simplex_grid(W.nx2, grid)
    best = -1.0
    best_p = None
    for s in range(0, len(G1)):
        P = (G1[s][None, :, None] * G2[:, None, :])
        i1g2, i2g1, isum = _batch_infos(W, P)
        k = int(np.argmax(isum))
        if isum[k] > best:
            best = float(isum[k])
            best_p = P[k]
    refined, p_ref = _refine_sum_rate(W, best_p, product=True)
    if refined > best:
        best_p = p_ref
    i1g2, i2g1, isum = mutual_informations(W, best_p)
    return (isum - i2g1, i2g1)


def bac_relaxed_closed_form(q: float) -> Tuple[float, float, float]:
    """(R1 bound, R2 bound, sum bound) = (h(q), h(q), q + h(q)) for the
    adder channel's relaxed-NS region, q in [1/2, 2/3]."""
    if not 0.5 <= q <= 2.0 / 3.0 + 1e-12:
        raise ValueError("q must lie in [1/2, 2/3]")
    h = binary_entropy(q)
    return h, h, q + h


def bac_relaxed_closed_form_frontier(samples: int = 257) -> Frontier:
    pts = []
    for q in np.linspace(0.5, 2.0 / 3.0, samples):
        r1b, r2b, sb = bac_relaxed_closed_form(float(q))
        (ax, ay), (bx, by) = _pentagon_corners(r1b, r2b, sb)
        pts.append(RatePoint(float(ax), float(ay), "relaxed-closed-form", {"q": float(q)}))
        pts.append(RatePoint(float(bx), float(by), "relaxed-closed-form", {"q": float(q)}))
    return Frontier.from_points(pts)


# ---------------------------------------------------------------------------
# hypothesis testing and one-shot converse

def beta_hypothesis(P0: Sequence[float], P1: Sequence[float], eps: float) -> float:
    """Minimum type-II error of a test T with type-I error at most eps:
    min sum T P1 s.t. sum T P0 >= 1 - eps, 0 <= T <= 1 (an LP)."""
    P0 = np.asarray(P0, dtype=float)
    P1 = np.asarray(P1, dtype=float)
    if P0.shape != P1.shape:
        raise ValueError("distributions must share a support space")
    if not 0 <= eps <= 1:
        raise ValueError("eps outside [0,1]")
    n = len(P0)
    lp = LinearProgram(n, maximize=False)
    lp.set_objective({i: P1[i] for i in range(n)})
    lp.add_row({i: P0[i] for i in range(n)}, GE, 1.0 - eps)
    for i in range(n):
        lp.set_bounds(i, 0.0, 1.0)
    sol = solve(lp)
    if sol.status != "optimal":
        raise RuntimeError(f"beta LP status {sol.status}")
    return max(sol.value, 0.0)


def one_shot_converse(W: Channel, P: JointDist, eps: float) -> Tuple[float, float, float]:
    """Upper bounds on log k1, log k2, log k1k2 for codes with error at most
    eps: (I + h(eps)) / (1 - eps) for the three mutual informations."""
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    infos = mutual_informations(W, P)
    if eps == 0:
        return infos
    h = binary_entropy(eps)
    return tuple((i + h) / (1 - eps) for i in infos)
