"""Zero-error NS-assisted rate pairs for W^{tensor n}: the largest (k1, k2)
with success probability exactly 1, searched per k1 by bisection on k2
(sound because the optimal success probability is nonincreasing in the
message counts)."""

import math
from dataclasses import dataclass, field
from typing import List, Optional

from .channels import Channel
from .orbits import OrbitSystem
from .programs import build_ns_lp_orbit, build_relaxed_lp
from .lp import check_value_is_one


@dataclass
class ScanConfig:
    channel: Channel
    n: int = 1
    mode: str = "ns"                  # "ns" | "relaxed"
    certify: Optional[str] = None     # "exact" | "float"; default by n
    tol: float = 1e-7                 # float certification slack
    k1_max: Optional[int] = None      # default: nx1 ** n
    k2_cap: Optional[int] = None      # extra cap on the k2 search window
    solver: Optional[str] = None

    def __post_init__(self):
        if self.mode not in ("ns", "relaxed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0 < self.tol <= 1e-3:
            raise ValueError("tol must lie in (0, 1e-3]")


@dataclass
class FrontierPoint:
    k1: int
    k2: int
    rate1: float
    rate2: float
    diagnostics: List[dict] = field(default_factory=list)


@dataclass
class FrontierScan:
    points: List[FrontierPoint] = field(default_factory=list)
    failures: List[dict] = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _certify_mode(cfg: ScanConfig) -> str:
    if cfg.certify is not None:
        return cfg.certify
    return "exact" if cfg.n <= 4 else "float"


def _is_one(sy: OrbitSystem, cfg: ScanConfig, k1: int, k2: int,
            mode: str, diag: List[dict]) -> bool:
    rational = mode == "exact" and cfg.channel.is_rational
    if cfg.mode == "relaxed":
        lp = build_relaxed_lp(cfg.channel, cfg.n, k1, k2, level="orbit",
                              system=sy, rational=rational)
    else:
        lp = build_ns_lp_orbit(cfg.channel, cfg.n, k1, k2, system=sy,
                               rational=rational)
    chk = check_value_is_one(lp, tol=cfg.tol, mode=mode, solver=cfg.solver)
    diag.append({"k1": k1, "k2": k2, "status": chk.status,
                 "value": float(chk.value)})
    return chk.is_one


def zero_error_frontier(cfg: ScanConfig) -> FrontierScan:
    """For each k1 in 1..k1_max, bisect for the largest k2 with certified
    success 1 and report rates (log2 k1 / n, log2 k2 / n).  A row whose best
    k2 equals that of a larger k1 is dominated and dropped.  Solver failures
    abort that k1 and are recorded in the scan's failure list."""
    W, n = cfg.channel, cfg.n
    sy = OrbitSystem(W, n)
    mode = _certify_mode(cfg)
    k1_max = cfg.k1_max if cfg.k1_max is not None else W.nx1 ** n
    scan = FrontierScan()
    pts = scan.points
    prev_k2 = None
    for k1 in range(1, k1_max + 1):
        diag: List[dict] = []
        hi = min(W.nx2 ** n, max(W.ny ** n // k1, 1))
        if cfg.k2_cap is not None:
            hi = min(hi, cfg.k2_cap)
        if prev_k2 is not None:
            hi = min(hi, prev_k2)   # best k2 is nonincreasing in k1
        try:
            if not _is_one(sy, cfg, k1, 1, mode, diag):
                break               # even a single message fails: done
            lo = 1
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if _is_one(sy, cfg, k1, mid, mode, diag):
                    lo = mid
                else:
                    hi = mid - 1
        except Exception as e:  # noqa: BLE001 - record and abort this k1
            scan.failures.append({"k1": k1, "error": str(e),
                                  "diagnostics": diag})
            continue
        prev_k2 = lo
        if pts and pts[-1].k2 == lo:
            pts.pop()               # same k2 at smaller k1 is dominated
        pts.append(FrontierPoint(k1, lo, math.log2(k1) / n,
                                 math.log2(lo) / n, diag))
    return scan
