"""Sparse linear programs with variable bounds, a bounded-variable revised
simplex (float and exact-rational), and an exact certification path.

The bundled simplex is the reference solver.  A pluggable external solver
(scipy's HiGHS by default) handles the largest instances; exact-rational
results always come from the bundled code paths.
"""

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import blas

from ._rat import Rat, as_rat, rat_to_str

LE, EQ, GE = "<=", "=", ">="

_FEAS_TOL = 1e-8
_PIV_TOL = 1e-9


class LpError(RuntimeError):
    pass


class CertificationError(LpError):
    """Exact certification could not be completed from any solved basis."""


class LinearProgram:
    """max (or min) c.x subject to sparse rows (coefs, rel, rhs) and
    per-variable bounds [lo, hi] (hi=None means +inf, lo=None means -inf)."""

    def __init__(self, num_vars: int, maximize: bool = True, rational: bool = False):
        self.num_vars = num_vars
        self.maximize = maximize
        self.rational = rational
        zero = Rat(0) if rational else 0.0
        self.obj: Dict[int, object] = {}
        self.rows: List[Tuple[List[int], List[object], str, object]] = []
        self.lo = [zero] * num_vars
        self.hi: List[Optional[object]] = [None] * num_vars

    # -- construction -------------------------------------------------------
    def _coerce(self, v):
        return as_rat(v) if self.rational else float(v)

    def set_objective(self, coefs: Dict[int, object]) -> None:
        self.obj = {j: self._coerce(v) for j, v in coefs.items() if v != 0}

    def add_row(self, coefs: Dict[int, object], rel: str, rhs) -> int:
        if rel not in (LE, EQ, GE):
            raise ValueError(f"bad relation {rel!r}")
        cols, vals = [], []
        for j, v in sorted(coefs.items()):
            if not (0 <= j < self.num_vars):
                raise ValueError(f"column {j} out of range")
            if v != 0:
                cols.append(j)
                vals.append(self._coerce(v))
        self.rows.append((cols, vals, rel, self._coerce(rhs)))
        return len(self.rows) - 1

    def set_bounds(self, j: int, lo, hi) -> None:
        self.lo[j] = None if lo is None else self._coerce(lo)
        self.hi[j] = None if hi is None else self._coerce(hi)

    @property
    def num_constraints(self) -> int:
        return len(self.rows)

    def validate(self) -> None:
        if not self.rational:
            for cols, vals, _, rhs in self.rows:
                if any(math.isnan(v) for v in vals) or math.isnan(rhs):
                    raise ValueError("NaN coefficient")
            if any(math.isnan(v) for v in self.obj.values()):
                raise ValueError("NaN objective coefficient")

    # -- float views --------------------------------------------------------
    def matrix(self) -> sp.csc_matrix:
        data, ri, ci = [], [], []
        for i, (cols, vals, _, _) in enumerate(self.rows):
            ri.extend([i] * len(cols))
            ci.extend(cols)
            data.extend(float(v) for v in vals)
        return sp.csc_matrix((data, (ri, ci)),
                             shape=(len(self.rows), self.num_vars))

    def rhs_array(self) -> np.ndarray:
        return np.array([float(r[3]) for r in self.rows])

    def obj_array(self) -> np.ndarray:
        c = np.zeros(self.num_vars)
        for j, v in self.obj.items():
            c[j] = float(v)
        return c

    def bounds_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        lo = np.array([-np.inf if v is None else float(v) for v in self.lo])
        hi = np.array([np.inf if v is None else float(v) for v in self.hi])
        return lo, hi


@dataclass
class LpSolution:
    status: str                      # optimal | infeasible | unbounded | iteration-limit
    value: float = math.nan
    x: Optional[np.ndarray] = None   # structural primal (float)
    iterations: int = 0
    value_exact: object = None       # Rat, set by exact paths
    x_exact: Optional[list] = None
    # internals for certification (bundled solver only)
    basis: Optional[list] = None     # basic column index per row (incl. slacks)
    var_status: Optional[np.ndarray] = None  # per column: 0 at-lo, 1 at-hi, 2 basic, 3 free-at-0
    ncols: int = 0


# ---------------------------------------------------------------------------
# bundled float simplex

class _FloatSimplex:
    """Revised simplex with bounded variables, dense basis inverse.

    Columns: structural | slacks (one per row) | artificials (phase 1 only).
    Dantzig pricing, switching to Bland's rule after a stall streak, which
    guarantees termination on the highly degenerate orbit LPs.
    """

    def __init__(self, lp: LinearProgram, max_iter: Optional[int] = None,
                 force_bland: bool = False):
        lp.validate()
        self.force_bland = force_bland
        self.lp = lp
        m, n = lp.num_constraints, lp.num_vars
        self.m, self.n = m, n
        A = lp.matrix()
        self.b = lp.rhs_array()
        lo_s, hi_s = lp.bounds_arrays()
        # slack columns
        slack = sp.identity(m, format="csc")
        slo = np.empty(m)
        shi = np.empty(m)
        for i, (_, _, rel, _) in enumerate(lp.rows):
            if rel == LE:
                slo[i], shi[i] = 0.0, np.inf
            elif rel == GE:
                slo[i], shi[i] = -np.inf, 0.0
            else:
                slo[i], shi[i] = 0.0, 0.0
        self.A = sp.hstack([A, slack], format="csc")
        self.lo = np.concatenate([lo_s, slo])
        self.hi = np.concatenate([hi_s, shi])
        self.N = n + m
        self.max_iter = max_iter if max_iter is not None else 50_000 + 60 * m
        self.stall_limit = 5 * self.N
        self.art_sign: Dict[int, float] = {}   # column -> sigma, artificials

    # -- setup --------------------------------------------------------------
    def _initial_basis(self):
        # nonbasic start: every variable at a finite bound (or 0 if free)
        x = np.where(np.isfinite(self.lo), self.lo,
                     np.where(np.isfinite(self.hi), self.hi, 0.0))
        self.status = np.where(np.isfinite(self.lo), 0,
                               np.where(np.isfinite(self.hi), 1, 3)).astype(np.int8)
        r = self.b - self.A @ x   # residual each row's slack or artificial absorbs
        basis = []
        art_cols = []
        for i in range(self.m):
            s = self.n + i
            val = x[s] + r[i]
            lo_ok = not np.isfinite(self.lo[s]) or val >= self.lo[s]
            hi_ok = not np.isfinite(self.hi[s]) or val <= self.hi[s]
            if lo_ok and hi_ok:
                x[s] = val
                basis.append(s)
            else:
                sig = 1.0 if r[i] >= 0 else -1.0
                col = self.N + len(art_cols)
                art_cols.append((i, sig, abs(r[i])))
                basis.append(col)
        if art_cols:
            data = [sig for _, sig, _ in art_cols]
            ri = [i for i, _, _ in art_cols]
            ci = list(range(len(art_cols)))
            Aa = sp.csc_matrix((data, (ri, ci)), shape=(self.m, len(art_cols)))
            self.A = sp.hstack([self.A, Aa], format="csc")
            self.lo = np.concatenate([self.lo, np.zeros(len(art_cols))])
            self.hi = np.concatenate([self.hi, np.full(len(art_cols), np.inf)])
            x = np.concatenate([x, np.array([v for _, _, v in art_cols])])
            self.status = np.concatenate(
                [self.status, np.zeros(len(art_cols), dtype=np.int8)])
            for k, (i, sig, _) in enumerate(art_cols):
                self.art_sign[self.N + k] = sig
        self.Ntot = self.A.shape[1]
        self.basis = basis
        self.status[basis] = 2
        self.x = x
        self._refactor()
        self._recompute_basics()

    def _refactor(self):
        B = self.A[:, self.basis].toarray()
        try:
            # fortran order so the BLAS rank-1 pivot update can run in place
            self.Binv = np.asfortranarray(np.linalg.inv(B))
            return
        except np.linalg.LinAlgError:
            pass
        # a drifted rank-1-updated inverse can let a dependent column into
        # the basis; swap the dependent columns for fresh slack columns
        self._repair_basis(B)
        B = self.A[:, self.basis].toarray()
        try:
            self.Binv = np.asfortranarray(np.linalg.inv(B))
        except np.linalg.LinAlgError as e:  # pragma: no cover - defensive
            raise LpError("singular basis") from e

    def _repair_basis(self, B: np.ndarray) -> None:
        from scipy.linalg import qr
        Q, R, perm = qr(B, pivoting=True)
        diag = np.abs(np.diag(R))
        scale = diag.max() if diag.size else 1.0
        tol = self.m * np.finfo(float).eps * max(scale, 1.0)
        rank = int((diag > tol).sum())
        if rank == self.m:
            raise LpError("singular basis")  # inversion failed some other way
        # rows whose unit vectors restore full rank: pivoted QR of the
        # null-space transpose picks a nonsingular row subset (rows whose
        # unit columns already sit in the basis project to zero and are
        # never picked)
        N = Q[:, rank:]
        _, _, rperm = qr(N.T, pivoting=True)
        rows = rperm[: self.m - rank]
        for i, pos in zip(rows, perm[rank:]):
            s = self.n + int(i)
            leave = self.basis[pos]
            lo, hi = self.lo[leave], self.hi[leave]
            xv = self.x[leave]
            if np.isfinite(lo) and (not np.isfinite(hi)
                                    or abs(xv - lo) <= abs(xv - hi)):
                near, st = lo, 0
            elif np.isfinite(hi):
                near, st = hi, 1
            else:
                near, st = 0.0, 3
            if abs(xv - near) > 1e-6:
                # parking the variable would move the iterate materially;
                # feasibility cannot be preserved, so give up instead of
                # silently continuing from an infeasible point
                raise LpError("singular basis (unrepairable)")
            self.x[leave], self.status[leave] = near, st
            self.basis[pos] = s
            self.status[s] = 2

    def _recompute_basics(self):
        nonbasic = self.status != 2
        xn = np.where(nonbasic, self.x, 0.0)
        rhs = self.b - self.A @ xn
        self.x[self.basis] = self.Binv @ rhs

    # -- core loop ----------------------------------------------------------
    def _iterate(self, c: np.ndarray) -> str:
        iters = 0
        stall = 0
        bland = self.force_bland
        last_obj = -np.inf
        refactor_period = 400
        since_refactor = 0
        degen_retries = 0
        while iters < self.max_iter:
            iters += 1
            self.total_iters += 1
            cB = c[self.basis]
            y = cB @ self.Binv
            d = c - self.A.T @ y
            free = self.status == 3
            cand_up = ((self.status == 0) | free) & (d > _PIV_TOL)
            cand_dn = ((self.status == 1) | free) & (d < -_PIV_TOL)
            cand = cand_up | cand_dn
            if not cand.any():
                return "optimal"
            idx = np.nonzero(cand)[0]
            if bland:
                q = int(idx[0])
            else:
                q = int(idx[np.argmax(np.abs(d[idx]))])
            sigma = 1.0 if d[q] > 0 else -1.0
            a_q = self.A[:, q]
            alpha = np.zeros(self.m)
            alpha[a_q.indices] = a_q.data
            alpha = self.Binv @ alpha
            aeff = sigma * alpha
            xB = self.x[self.basis]
            loB = self.lo[self.basis]
            hiB = self.hi[self.basis]
            with np.errstate(divide="ignore", invalid="ignore"):
                t_dec = np.where(aeff > _PIV_TOL, (xB - loB) / aeff, np.inf)
                t_inc = np.where(aeff < -_PIV_TOL, (xB - hiB) / aeff, np.inf)
            t_rows = np.minimum(t_dec, t_inc)
            t_rows = np.where(t_rows < 0, 0.0, t_rows)
            span = self.hi[q] - self.lo[q]
            t_min = float(t_rows.min(initial=np.inf))
            if t_min == np.inf and not np.isfinite(span):
                return "unbounded"
            if np.isfinite(span) and span <= t_min:
                # bound flip, basis unchanged
                self.x[self.basis] = xB - aeff * span
                self.x[q] = self.hi[q] if self.status[q] != 1 else self.lo[q]
                self.status[q] = 1 if self.status[q] != 1 else 0
            else:
                tie = np.nonzero(t_rows <= t_min + 1e-12)[0]
                if bland:
                    # smallest-variable-index tie-break (termination proof)
                    r = int(tie[np.argmin(np.take(self.basis, tie))])
                else:
                    # largest-pivot tie-break keeps the updated inverse sane
                    r = int(tie[np.argmax(np.abs(alpha[tie]))])
                piv = alpha[r]
                if abs(piv) < (1e-11 if since_refactor == 0 else 1e-9):
                    # numerically unusable pivot
                    if since_refactor == 0:
                        # even the fresh factorization cannot use this step;
                        # force a different entering choice
                        degen_retries += 1
                        if degen_retries > 50:
                            raise LpError("persistent degenerate pivot")
                        bland = True
                        continue
                    self._refactor()
                    self._recompute_basics()
                    since_refactor = 0
                    continue
                degen_retries = 0
                leave = self.basis[r]
                t = max(t_min, 0.0)
                self.x[self.basis] = xB - aeff * t
                self.x[q] = (self.x[q] + sigma * t)
                self.x[leave] = self.lo[leave] if aeff[r] > 0 else self.hi[leave]
                self.status[leave] = 0 if aeff[r] > 0 else 1
                self.status[q] = 2
                self.basis[r] = q
                row = self.Binv[r, :] / piv
                self.Binv = blas.dger(-1.0, alpha, row, a=self.Binv,
                                      overwrite_a=1)
                self.Binv[r, :] = row
                since_refactor += 1
                if since_refactor >= refactor_period:
                    self._refactor()
                    self._recompute_basics()
                    since_refactor = 0
            obj = float(c @ self.x)
            if obj > last_obj + 1e-12:
                stall = 0
                last_obj = obj
            else:
                stall += 1
                if stall >= self.stall_limit:
                    bland = True
        return "iteration-limit"

    def solve(self) -> LpSolution:
        self.total_iters = 0
        self._initial_basis()
        sign = 1.0 if self.lp.maximize else -1.0
        if self.art_sign:
            c1 = np.zeros(self.Ntot)
            for col in self.art_sign:
                c1[col] = -1.0
            st = self._iterate(c1)
            infeas = -float(c1 @ self.x)
            if st == "iteration-limit":
                return LpSolution("iteration-limit", iterations=self.total_iters)
            if infeas > 1e-7:
                return LpSolution("infeasible", iterations=self.total_iters)
            # pin artificials at zero for phase 2
            for col in self.art_sign:
                self.lo[col] = 0.0
                self.hi[col] = 0.0
            self._pivot_out_artificials()
        c = np.zeros(self.Ntot)
        c[: self.n] = sign * self.lp.obj_array()
        st = self._iterate(c)
        self._refactor()
        self._recompute_basics()
        value = sign * float(c @ self.x)
        x = self.x[: self.n].copy()
        sol = LpSolution(st, value=value, x=x, iterations=self.total_iters,
                         basis=list(self.basis),
                         var_status=self.status.copy(), ncols=self.Ntot)
        if st == "optimal":
            res = self._residuals()
            if res > _FEAS_TOL:
                raise LpError(f"primal residual {res:.2e} above tolerance")
        return sol

    def _pivot_out_artificials(self):
        for r in range(self.m):
            col = self.basis[r]
            if col not in self.art_sign:
                continue
            # try replacing by any non-artificial column with nonzero in row r
            row_of_binv = self.Binv[r, :]
            done = False
            for q in range(self.N):
                if self.status[q] == 2 or q in self.art_sign:
                    continue
                a_q = self.A[:, q]
                piv = float(row_of_binv[a_q.indices] @ a_q.data)
                if abs(piv) > 1e-8:
                    alpha = np.zeros(self.m)
                    alpha[a_q.indices] = a_q.data
                    alpha = self.Binv @ alpha
                    self.status[col] = 0
                    self.x[col] = 0.0
                    self.status[q] = 2
                    self.basis[r] = q
                    rownew = self.Binv[r, :] / alpha[r]
                    self.Binv -= np.outer(alpha, rownew)
                    self.Binv[r, :] = rownew
                    self._recompute_basics()
                    done = True
                    break
            if not done:
                pass  # redundant row; artificial stays basic, pinned at 0

    def _residuals(self) -> float:
        r = self.A @ self.x - self.b
        lo_v = np.max(np.where(np.isfinite(self.lo), self.lo - self.x, 0.0),
                      initial=0.0)
        hi_v = np.max(np.where(np.isfinite(self.hi), self.x - self.hi, 0.0),
                      initial=0.0)
        return max(float(np.max(np.abs(r), initial=0.0)), lo_v, hi_v)


# ---------------------------------------------------------------------------
# bundled exact simplex (small problems)

class _ExactSimplex:
    """Same algorithm as _FloatSimplex with all pivoting in rationals.
    Intended for small LPs; the big orbit LPs go through basis certification."""

    MAX_ROWS = 420

    def __init__(self, lp: LinearProgram, max_iter: int = 100_000):
        if not lp.rational:
            raise LpError("exact mode requires rational coefficients")
        if lp.num_constraints > self.MAX_ROWS:
            raise LpError("LP too large for full exact pivoting; "
                          "use certification from a float basis")
        self.lp = lp
        self.max_iter = max_iter
        m, n = lp.num_constraints, lp.num_vars
        self.m, self.n = m, n
        zero, one = Rat(0), Rat(1)
        cols = [dict() for _ in range(n + m)]
        for i, (cs, vs, rel, _) in enumerate(lp.rows):
            for j, v in zip(cs, vs):
                cols[j][i] = as_rat(v)
        self.slo = [None] * m
        self.shi = [None] * m
        for i, (_, _, rel, _) in enumerate(lp.rows):
            cols[n + i][i] = one
            if rel == LE:
                self.slo[i], self.shi[i] = zero, None
            elif rel == GE:
                self.slo[i], self.shi[i] = None, zero
            else:
                self.slo[i], self.shi[i] = zero, zero
        self.cols = cols
        self.b = [as_rat(r[3]) for r in lp.rows]
        self.lo = [None if v is None else as_rat(v) for v in lp.lo] + self.slo
        self.hi = [None if v is None else as_rat(v) for v in lp.hi] + self.shi
        self.N = n + m

    def _col_times(self, j, y):
        return sum(v * y[i] for i, v in self.cols[j].items())

    def solve(self) -> LpSolution:
        zero, one = Rat(0), Rat(1)
        m, n, N = self.m, self.n, self.N
        x = [self.lo[j] if self.lo[j] is not None
             else (self.hi[j] if self.hi[j] is not None else zero)
             for j in range(N)]
        status = [0 if self.lo[j] is not None
                  else (1 if self.hi[j] is not None else 3) for j in range(N)]
        resid = [self.b[i] - sum(self.cols[j].get(i, zero) * x[j]
                                 for j in range(N) if x[j] != 0)
                 for i in range(m)]
        basis, art = [], {}
        for i in range(m):
            s = n + i
            val = x[s] + resid[i]
            ok_lo = self.lo[s] is None or val >= self.lo[s]
            ok_hi = self.hi[s] is None or val <= self.hi[s]
            if ok_lo and ok_hi:
                x[s] = val
                basis.append(s)
            else:
                col = N + len(art)
                sig = one if resid[i] >= 0 else -one
                self.cols.append({i: sig})
                self.lo.append(zero)
                self.hi.append(None)
                x.append(abs(resid[i]))
                status.append(0)
                art[col] = sig
                basis.append(col)
        Ntot = len(self.cols)
        for col in basis:
            status[col] = 2
        self.basis, self.status, self.x = basis, status, x
        self.Binv = self._invert_basis()
        self.total_iters = 0
        sign = 1 if self.lp.maximize else -1
        if art:
            c1 = [zero] * Ntot
            for col in art:
                c1[col] = -one
            st = self._iterate(c1)
            if st == "iteration-limit":
                return LpSolution(st, iterations=self.total_iters)
            if -sum(c1[j] * self.x[j] for j in range(Ntot)) > 0:
                return LpSolution("infeasible", iterations=self.total_iters)
            for col in art:
                self.lo[col] = zero
                self.hi[col] = zero
        c = [zero] * Ntot
        for j, v in self.lp.obj.items():
            c[j] = sign * as_rat(v)
        st = self._iterate(c)
        val = sign * sum(c[j] * self.x[j] for j in range(Ntot))
        xs = [self.x[j] for j in range(n)]
        return LpSolution(st, value=float(val),
                          x=np.array([float(v) for v in xs]),
                          iterations=self.total_iters,
                          value_exact=val, x_exact=xs,
                          basis=list(self.basis),
                          var_status=np.array(self.status[:Ntot]), ncols=Ntot)

    def _invert_basis(self):
        zero, one = Rat(0), Rat(1)
        m = self.m
        M = [[self.cols[self.basis[r]].get(i, zero) for r in range(m)]
             + [one if i == k else zero for k in range(m)] for i in range(m)]
        for col in range(m):
            piv = next(r for r in range(col, m) if M[r][col] != 0)
            M[col], M[piv] = M[piv], M[col]
            pv = M[col][col]
            M[col] = [v / pv for v in M[col]]
            for r in range(m):
                if r != col and M[r][col] != 0:
                    f = M[r][col]
                    M[r] = [a - f * b for a, b in zip(M[r], M[col])]
        return [row[m:] for row in M]

    def _iterate(self, c):
        zero = Rat(0)
        m, Ntot = self.m, len(self.cols)
        stall, bland = 0, False
        last_obj = None
        it = 0
        while it < self.max_iter:
            it += 1
            self.total_iters += 1
            cB = [c[j] for j in self.basis]
            y = [sum(cB[r] * self.Binv[r][i] for r in range(m) if cB[r] != 0)
                 for i in range(m)]
            entering, best = -1, zero
            for j in range(Ntot):
                if self.status[j] == 2:
                    continue
                d = c[j] - self._col_times(j, y)
                ok = (d > 0 and self.status[j] in (0, 3)) or \
                     (d < 0 and self.status[j] == 1)
                if not ok:
                    continue
                if bland:
                    entering, d_q = j, d
                    break
                if abs(d) > best:
                    best, entering, d_q = abs(d), j, d
            if entering < 0:
                return "optimal"
            q = entering
            sigma = 1 if d_q > 0 else -1
            alpha = [sum(self.Binv[r][i] * v for i, v in self.cols[q].items())
                     for r in range(m)]
            t_min, leave_r = None, -1
            for r in range(m):
                ae = sigma * alpha[r]
                if ae == 0:
                    continue
                jb = self.basis[r]
                if ae > 0 and self.lo[jb] is not None:
                    t = (self.x[jb] - self.lo[jb]) / ae
                elif ae < 0 and self.hi[jb] is not None:
                    t = (self.x[jb] - self.hi[jb]) / ae
                else:
                    continue
                if t_min is None or t < t_min or (t == t_min and jb < self.basis[leave_r]):
                    t_min, leave_r = t, r
            span = None
            if self.lo[q] is not None and self.hi[q] is not None:
                span = self.hi[q] - self.lo[q]
            if t_min is None and span is None:
                return "unbounded"
            if span is not None and (t_min is None or span <= t_min):
                for r in range(m):
                    jb = self.basis[r]
                    self.x[jb] -= sigma * alpha[r] * span
                self.x[q] = self.hi[q] if self.status[q] != 1 else self.lo[q]
                self.status[q] = 1 if self.status[q] != 1 else 0
            else:
                t = t_min
                for r in range(m):
                    jb = self.basis[r]
                    self.x[jb] -= sigma * alpha[r] * t
                self.x[q] = self.x[q] + sigma * t
                leave = self.basis[leave_r]
                ae = sigma * alpha[leave_r]
                self.x[leave] = self.lo[leave] if ae > 0 else self.hi[leave]
                self.status[leave] = 0 if ae > 0 else 1
                self.status[q] = 2
                self.basis[leave_r] = q
                piv = alpha[leave_r]
                newrow = [v / piv for v in self.Binv[leave_r]]
                for r in range(m):
                    if r != leave_r and alpha[r] != 0:
                        f = alpha[r]
                        self.Binv[r] = [a - f * b
                                        for a, b in zip(self.Binv[r], newrow)]
                self.Binv[leave_r] = newrow
            obj = sum(c[j] * self.x[j] for j in self.basis if c[j] != 0)
            if last_obj is None or obj > last_obj:
                stall, last_obj = 0, obj
            else:
                stall += 1
                if stall >= 5 * Ntot:
                    bland = True
        return "iteration-limit"


# ---------------------------------------------------------------------------
# exact sparse linear solve + certification from a float basis

def _exact_sparse_solve(cols: List[Dict[int, object]], b: List[object]) -> List[object]:
    """Solve B x = b exactly, B given by columns as sparse rational dicts.
    Gauss-Jordan with a Markowitz-style pivot choice; the LP basis matrices
    are dominated by unit slack columns, so fill-in stays small."""
    m = len(b)
    zero = Rat(0)
    rows = [dict() for _ in range(m)]
    for j, col in enumerate(cols):
        for i, v in col.items():
            if v != 0:
                rows[i][j] = v
    rhs = list(b)
    col_rows: Dict[int, set] = {}
    for i, row in enumerate(rows):
        for j in row:
            col_rows.setdefault(j, set()).add(i)
    pivot_of_col: Dict[int, int] = {}
    active_rows = set(range(m))
    for _ in range(m):
        best = None
        for j, rset in col_rows.items():
            if j in pivot_of_col:
                continue
            live = [i for i in rset if i in active_rows]
            if not live:
                raise LpError("singular basis in exact solve")
            for i in live:
                score = (len(live) - 1) * (len(rows[i]) - 1)
                if best is None or score < best[0]:
                    best = (score, i, j)
                    if score == 0:
                        break
            if best and best[0] == 0:
                break
        if best is None:
            raise LpError("singular basis in exact solve")
        _, pi, pj = best
        piv = rows[pi][pj]
        prow = {j: v / piv for j, v in rows[pi].items()}
        prhs = rhs[pi] / piv
        rows[pi], rhs[pi] = prow, prhs
        for i in list(col_rows.get(pj, ())):
            if i == pi:
                continue
            f = rows[i].get(pj)
            if f is None or f == 0:
                continue
            ri = rows[i]
            for j, v in prow.items():
                nv = ri.get(j, zero) - f * v
                if nv == 0:
                    ri.pop(j, None)
                    col_rows.get(j, set()).discard(i)
                else:
                    if j not in ri:
                        col_rows.setdefault(j, set()).add(i)
                    ri[j] = nv
            rhs[i] = rhs[i] - f * prhs
        pivot_of_col[pj] = pi
        active_rows.discard(pi)
    x = [zero] * m
    for j, i in pivot_of_col.items():
        x[j] = rhs[i]
    return x


class _ExactView:
    """Exact columns/bounds of the simplex tableau (structural + slacks +
    artificials) reconstructed from a bundled float solve."""

    def __init__(self, lp: LinearProgram, sol: LpSolution):
        if not lp.rational:
            raise LpError("exact certification requires rational coefficients")
        zero, one = Rat(0), Rat(1)
        m, n = lp.num_constraints, lp.num_vars
        self.m, self.n = m, n
        cols = [dict() for _ in range(n)]
        for i, (cs, vs, rel, _) in enumerate(lp.rows):
            for j, v in zip(cs, vs):
                cols[j][i] = as_rat(v)
        lo = [None if v is None else as_rat(v) for v in lp.lo]
        hi = [None if v is None else as_rat(v) for v in lp.hi]
        for i, (_, _, rel, _) in enumerate(lp.rows):
            cols.append({i: one})
            if rel == LE:
                lo.append(zero); hi.append(None)
            elif rel == GE:
                lo.append(None); hi.append(zero)
            else:
                lo.append(zero); hi.append(zero)
        # any extra columns in the float solve are artificials pinned at 0
        for col in range(n + m, sol.ncols):
            i = _artificial_row(sol, col, m)
            cols.append({i: one})
            lo.append(zero); hi.append(zero)
        self.cols, self.lo, self.hi = cols, lo, hi
        self.b = [as_rat(r[3]) for r in lp.rows]
        self.c = [zero] * len(cols)
        sign = 1 if lp.maximize else -1
        for j, v in lp.obj.items():
            self.c[j] = sign * as_rat(v)


def _artificial_row(sol: LpSolution, col: int, m: int):
    # artificial columns are unit columns; their row is recoverable from the
    # basis position when basic, else irrelevant (they are pinned at 0)
    if col in sol.basis:
        return sol.basis.index(col)
    return 0


def certify_from_basis(lp: LinearProgram, sol: LpSolution,
                       check_dual: bool = True):
    """Recompute the basic solution of `sol`'s final basis in exact rationals.

    Returns (value, x_structural, dual_ok, feas_ok).  The primal point is the
    exact vertex for that basis; when it is feasible and the exact reduced
    costs have optimal signs, the value is the exact optimum.
    """
    if sol.basis is None or sol.var_status is None:
        raise LpError("solution carries no basis (external solver?)")
    ev = _ExactView(lp, sol)
    zero = Rat(0)
    Ntot = len(ev.cols)
    x = [zero] * Ntot
    for j in range(Ntot):
        st = sol.var_status[j] if j < len(sol.var_status) else 0
        if st == 2:
            continue
        if st == 0:
            x[j] = ev.lo[j] if ev.lo[j] is not None else zero
        elif st == 1:
            x[j] = ev.hi[j] if ev.hi[j] is not None else zero
        else:
            x[j] = zero
    rhs = list(ev.b)
    for j in range(Ntot):
        if x[j] != 0:
            for i, v in ev.cols[j].items():
                rhs[i] = rhs[i] - v * x[j]
    bas_cols = [ev.cols[j] for j in sol.basis]
    xb = _exact_sparse_solve(bas_cols, rhs)
    for r, j in enumerate(sol.basis):
        x[j] = xb[r]
    feas_ok = True
    for j in range(Ntot):
        if ev.lo[j] is not None and x[j] < ev.lo[j]:
            feas_ok = False
        if ev.hi[j] is not None and x[j] > ev.hi[j]:
            feas_ok = False
    value = sum(ev.c[j] * x[j] for j in range(Ntot) if ev.c[j] != 0)
    dual_ok = True
    if check_dual:
        cB = [ev.c[j] for j in sol.basis]
        # solve B^T y = cB: transpose the basis columns into rows
        bt_cols = [dict() for _ in range(ev.m)]
        for r, col in enumerate(bas_cols):
            for i, v in col.items():
                bt_cols[i][r] = v
        y = _exact_sparse_solve(bt_cols, cB)
        for j in range(Ntot):
            st = sol.var_status[j] if j < len(sol.var_status) else 0
            if st == 2:
                continue
            d = ev.c[j] - sum(v * y[i] for i, v in ev.cols[j].items())
            free = ev.lo[j] is None and ev.hi[j] is None
            fixed = ev.lo[j] is not None and ev.lo[j] == ev.hi[j]
            if fixed:
                continue
            if free and d != 0:
                dual_ok = False
            elif st == 0 and d > 0:
                dual_ok = False
            elif st == 1 and d < 0:
                dual_ok = False
    sign = 1 if lp.maximize else -1
    return sign * value, x[: lp.num_vars], dual_ok, feas_ok


# ---------------------------------------------------------------------------
# external solver hook + public API

_external_solver: Optional[Callable[[LinearProgram], LpSolution]] = None


def set_external_solver(fn: Optional[Callable[[LinearProgram], LpSolution]]) -> None:
    global _external_solver
    _external_solver = fn


def solve_with_highs(lp: LinearProgram) -> LpSolution:
    """scipy HiGHS backend; used for the largest orbit LPs."""
    from scipy.optimize import linprog
    lp.validate()
    A = lp.matrix().tocsr()
    b = lp.rhs_array()
    rel = np.array([{"<=": 0, "=": 1, ">=": 2}[r[2]] for r in lp.rows])
    ub = rel == 0
    ge = rel == 2
    eq = rel == 1
    A_ub = sp.vstack([A[ub], -A[ge]]) if (ub.any() or ge.any()) else None
    b_ub = np.concatenate([b[ub], -b[ge]]) if A_ub is not None else None
    A_eq = A[eq] if eq.any() else None
    b_eq = b[eq] if A_eq is not None else None
    lo, hi = lp.bounds_arrays()
    sign = -1.0 if lp.maximize else 1.0
    # the largest orbit LPs are massively degenerate at the zero-error
    # point and stall HiGHS's dual simplex; interior point finishes them
    # in minutes
    method = "highs-ipm" if len(lp.rows) >= 50000 else "highs"
    res = linprog(sign * lp.obj_array(), A_ub=A_ub, b_ub=b_ub,
                  A_eq=A_eq, b_eq=b_eq,
                  bounds=np.stack([lo, hi], axis=1), method=method)
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(res.status,
                                                                 "iteration-limit")
    value = sign * res.fun if res.status == 0 else math.nan
    x = res.x if res.x is not None else None
    return LpSolution(status, value=value, x=x,
                      iterations=int(res.nit) if hasattr(res, "nit") else 0)


def solve(lp: LinearProgram, mode: str = "float",
          solver: Optional[str] = None, max_iter: Optional[int] = None) -> LpSolution:
    """Solve an LP.

    mode='float': bundled simplex (solver=None), 'highs', 'external', or a
    callable.  mode='exact': full rational pivoting for small LPs, otherwise
    a bundled float solve followed by exact recomputation of the final basis
    (with an exact optimality check of the reduced costs).
    """
    if mode == "float":
        if solver is None or solver == "bundled":
            return _FloatSimplex(lp, max_iter=max_iter).solve()
        if solver == "highs":
            return solve_with_highs(lp)
        if solver == "external":
            if _external_solver is None:
                raise LpError("no external solver registered")
            return _external_solver(lp)
        if callable(solver):
            return solver(lp)
        raise ValueError(f"unknown solver {solver!r}")
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if not lp.rational:
        raise LpError("exact mode requires a rational LP")
    if lp.num_constraints <= _ExactSimplex.MAX_ROWS:
        return _ExactSimplex(lp).solve()
    last_err = None
    for attempt in range(2):
        sol = _FloatSimplex(lp, max_iter=max_iter,
                            force_bland=(attempt > 0)).solve()
        if sol.status != "optimal":
            return sol
        try:
            value, x, dual_ok, feas_ok = certify_from_basis(lp, sol)
        except LpError as e:
            last_err = e
            continue
        if feas_ok and dual_ok:
            sol.value_exact = value
            sol.x_exact = x
            sol.value = float(value)
            sol.x = np.array([float(v) for v in x])
            return sol
        last_err = LpError(f"basis not exactly optimal (feas={feas_ok}, dual={dual_ok})")
    raise CertificationError(f"exact certification failed: {last_err}")


@dataclass
class OneCheck:
    status: str            # certified_one | certified_exact_one | below_one
    value: object          # float or Rat

    @property
    def is_one(self) -> bool:
        return self.status in ("certified_one", "certified_exact_one")


def check_value_is_one(lp: LinearProgram, tol: float = 1e-7,
                       mode: str = "float", solver: Optional[str] = None) -> OneCheck:
    """Decide whether the optimal value of a success-probability LP is 1.

    The LP value is known a priori to lie in [0, 1], so in exact mode an
    exactly feasible point of value 1 is already a proof of optimality; a
    full exact optimum is computed when the value is below 1.
    """
    if mode == "float":
        sol = solve(lp, mode="float", solver=solver)
        if sol.status != "optimal":
            raise LpError(f"solver status {sol.status}")
        if sol.value >= 1.0 - tol:
            return OneCheck("certified_one", sol.value)
        return OneCheck("below_one", sol.value)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if lp.num_constraints <= _ExactSimplex.MAX_ROWS:
        sol = _ExactSimplex(lp).solve()
        if sol.status != "optimal":
            raise LpError(f"solver status {sol.status}")
        if sol.value_exact == 1:
            return OneCheck("certified_exact_one", sol.value_exact)
        return OneCheck("below_one", sol.value_exact)
    last_err = None
    for attempt in range(2):
        fsol = _FloatSimplex(lp, force_bland=(attempt > 0)).solve()
        if fsol.status != "optimal":
            raise LpError(f"solver status {fsol.status}")
        try:
            value, x, _, feas_ok = certify_from_basis(lp, fsol, check_dual=False)
            if feas_ok and value == 1:
                # value <= 1 holds for every feasible point of these programs,
                # so an exact feasible point at 1 certifies optimality
                return OneCheck("certified_exact_one", value)
            value, x, dual_ok, feas_ok = certify_from_basis(lp, fsol,
                                                            check_dual=True)
        except LpError as e:
            last_err = e
            continue
        if feas_ok and dual_ok:
            if value == 1:
                return OneCheck("certified_exact_one", value)
            return OneCheck("below_one", value)
        if feas_ok and value < 1 and fsol.value < 1 - 1e-7 and attempt > 0:
            # the vertex is exactly feasible with value < 1 but not exactly
            # optimal (degenerate alternative optima); the verdict "not one"
            # stands on float evidence even without a dual certificate
            return OneCheck("below_one", value)
        last_err = LpError(f"basis check failed (feas={feas_ok}, dual={dual_ok})")
    raise CertificationError(f"exact certification failed: {last_err}")


# ---------------------------------------------------------------------------
# text dump

def dump_lp(lp: LinearProgram, path: Optional[str] = None) -> str:
    """Canonical LP-format text dump.  In rational mode coefficients are
    printed bit-exactly as p/q (a documented extension of the format)."""
    def fmt(v):
        return rat_to_str(v) if lp.rational else repr(float(v))

    def term(v, j):
        return f"{fmt(v)} x{j}"

    lines = ["\\ nsmac LP dump", "Maximize" if lp.maximize else "Minimize"]
    obj = " + ".join(term(v, j) for j, v in sorted(lp.obj.items())) or "0 x0"
    lines.append(" obj: " + obj)
    lines.append("Subject To")
    for i, (cols, vals, rel, rhs) in enumerate(lp.rows):
        body = " + ".join(term(v, j) for j, v in zip(cols, vals)) or "0 x0"
        lines.append(f" c{i}: {body} {rel} {fmt(rhs)}")
    lines.append("Bounds")
    for j in range(lp.num_vars):
        lo, hi = lp.lo[j], lp.hi[j]
        if lo is None and hi is None:
            lines.append(f" x{j} free")
        elif hi is None:
            lines.append(f" {fmt(lo)} <= x{j}")
        elif lo is None:
            lines.append(f" -inf <= x{j} <= {fmt(hi)}")
        else:
            lines.append(f" {fmt(lo)} <= x{j} <= {fmt(hi)}")
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as f:
            f.write(text)
    return text
