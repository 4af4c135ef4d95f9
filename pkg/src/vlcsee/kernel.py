"""Log-barrier interior-point solver for small dense convex programs.

Supported constraint classes::

    LinearIneq        A x <= b
    ConvexQuadIneq    x'Qx + a'x <= b                (Q PSD)
    SecondOrderCone   ||A x + b||_2 <= c'x + d
    ConcaveLogIneq    g'x + g0 <= alpha * log2(a'x + b)

The objective is ``maximize c'x - x'Px + const`` with ``P`` PSD. The solver
runs a phase-I slack minimisation when no strictly feasible start is given,
then follows the central path with Newton centering, shrinking the barrier
weight by 10 per stage from 1 until ``mu * nu < tol_opt`` where ``nu`` is the
barrier parameter (number of scalar log terms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numba import njit

LN2 = math.log(2.0)
KKT_TOL = 1e-6  # relative stationarity required for an Optimal report


class KernelError(RuntimeError):
    """Malformed program or numerical breakdown inside the solver."""


class Status(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    MAX_ITER = "MaxIter"


@dataclass
class LinearIneq:
    """``A x <= b``; ``A`` may be a single row."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, float))
        self.b = np.atleast_1d(np.asarray(self.b, float))


@dataclass
class ConvexQuadIneq:
    """``x'Qx + a'x <= b``."""

    Q: np.ndarray
    a: np.ndarray
    b: float


@dataclass
class SecondOrderCone:
    """``||A x + b|| <= c'x + d``."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: float


@dataclass
class ConcaveLogIneq:
    """``g'x + g0 <= alpha * log2(a'x + b)`` with ``alpha > 0``."""

    g: np.ndarray
    g0: float
    alpha: float
    a: np.ndarray
    b: float


@dataclass
class ConvexProgram:
    """maximize ``c'x - x'Px + const`` subject to ``constraints``."""

    n_vars: int
    c: np.ndarray
    P: np.ndarray | None = None
    constraints: list = field(default_factory=list)
    const: float = 0.0
    feasibility_only: bool = False

    def objective(self, x) -> float:
        x = np.asarray(x, float)
        val = float(self.c @ x) + self.const
        if self.P is not None:
            val -= float(x @ self.P @ x)
        return val


@dataclass
class SolveReport:
    status: Status
    x: np.ndarray | None
    objective_value: float
    barrier_mu_final: float
    newton_iterations: int
    kkt_residual: float = math.inf
    stage_objectives: list = field(default_factory=list)
    phase1_slack: float | None = None
    first_center: np.ndarray | None = None  # central point of the first barrier stage

# ---------------------------------------------------------------------------
# compiled barrier core; the constraint data travel as one tuple of arrays:
# (lin_A, lin_b, q_Q, q_a, q_b, s_A, s_b, s_c, s_d, l_G, l_g0, l_al, l_A, l_b)

@njit(cache=True)
def _phi(x, lin_A, lin_b, q_Q, q_a, q_b, s_A, s_b, s_c, s_d, l_G, l_g0, l_al, l_A, l_b):
    total = 0.0
    if lin_b.size:
        r = lin_b - lin_A @ x
        if r.min() <= 0:
            return np.inf
        total -= np.log(r).sum()
    for i in range(q_b.size):
        r = q_b[i] - x @ (q_Q[i] @ x) - q_a[i] @ x
        if r <= 0:
            return np.inf
        total -= math.log(r)
    for i in range(s_d.size):
        u = s_A[i] @ x + s_b[i]
        tau = s_c[i] @ x + s_d[i]
        r = tau * tau - u @ u
        if tau <= 0 or r <= 0:
            return np.inf
        total -= math.log(r)
    for i in range(l_b.size):
        z = l_A[i] @ x + l_b[i]
        if z <= 0:
            return np.inf
        r = l_al[i] * math.log2(z) - (l_G[i] @ x + l_g0[i])
        if r <= 0:
            return np.inf
        total -= math.log(r) + math.log(z)
    return total


@njit(cache=True)
def _derivs(x, lin_A, lin_b, q_Q, q_a, q_b, s_A, s_b, s_c, s_d, l_G, l_g0, l_al, l_A, l_b):
    n = x.size
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    if lin_b.size:
        Ar = lin_A / (lin_b - lin_A @ x).reshape(-1, 1)
        grad += Ar.sum(axis=0)
        hess += Ar.T @ Ar
    for i in range(q_b.size):
        Q = q_Q[i]
        Qx = Q @ x
        r = q_b[i] - x @ Qx - q_a[i] @ x
        q = (2.0 * Qx + q_a[i]) / r
        grad += q
        c2 = 2.0 / r
        for j in range(n):
            for k in range(n):
                hess[j, k] += c2 * Q[j, k] + q[j] * q[k]
    for i in range(s_d.size):
        A = s_A[i]
        u = A @ x + s_b[i]
        tau = s_c[i] @ x + s_d[i]
        r = tau * tau - u @ u
        dr = 2.0 * tau * s_c[i] - 2.0 * (A.T @ u)
        grad -= dr / r
        hess += (2.0 * (A.T @ A) - 2.0 * np.outer(s_c[i], s_c[i])) / r + np.outer(dr, dr) / (r * r)
    for i in range(l_b.size):
        a = l_A[i]
        z = a @ x + l_b[i]
        r = l_al[i] * math.log2(z) - (l_G[i] @ x + l_g0[i])
        dr = (l_al[i] / (LN2 * z)) * a - l_G[i]
        grad -= dr / r + a / z
        wa = l_al[i] / (LN2 * z * z * r) + 1.0 / (z * z)
        wd = 1.0 / (r * r)
        for j in range(n):
            for k in range(n):
                hess[j, k] += wa * a[j] * a[k] + wd * dr[j] * dr[k]
    return grad, hess


@njit(cache=True)
def _cholesky_solve(H, g):
    """Solve ``H d = -g`` by Cholesky; ``ok`` is False when H is not PD."""
    n = H.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        s = H[j, j]
        for k in range(j):
            s -= L[j, k] * L[j, k]
        if not s > 0:
            return False, g
        L[j, j] = math.sqrt(s)
        for i in range(j + 1, n):
            s = H[i, j]
            for k in range(j):
                s -= L[i, k] * L[j, k]
            L[i, j] = s / L[j, j]
    y = np.empty(n)
    for i in range(n):
        s = -g[i]
        for k in range(i):
            s -= L[i, k] * y[k]
        y[i] = s / L[i, i]
    d = np.empty(n)
    for i in range(n - 1, -1, -1):
        s = y[i]
        for k in range(i + 1, n):
            s -= L[k, i] * d[k]
        d[i] = s / L[i, i]
    return True, d


@njit(cache=True)
def _newton_dir(H, g):
    """Newton direction. Rounding can leave the barrier Hessian slightly
    indefinite; then its spectrum is clipped to keep a descent step."""
    Hs = 0.5 * (H + H.T)
    ok, d = _cholesky_solve(Hs, g)
    if ok:
        return d
    lam, U = np.linalg.eigh(Hs)
    floor = max(np.abs(lam).max(), 1e-300) * 1e-15
    return -(U @ ((U.T @ g) / np.maximum(lam, floor)))


@njit(cache=True)
def _max_linear_step(x, dx, lin_A, lin_b):
    step = 1.0
    for i in range(lin_b.size):
        ad = lin_A[i] @ dx
        if ad > 1e-300:
            step = min(step, 0.99 * (lin_b[i] - lin_A[i] @ x) / ad)
    return step


@njit(cache=True)
def _center(x, t, max_iter, tol, stop_rel, c, H0, lin_A, lin_b, q_Q, q_a, q_b,
            s_A, s_b, s_c, s_d, l_G, l_g0, l_al, l_A, l_b):
    """Minimise ``t f0 + phi`` from a strictly feasible ``x``.

    Returns ``(x, iterations, stopped_early, status)`` with status 0 ok and
    1 non-finite step. With ``stop_rel > 0`` the last coordinate is a
    phase-I slack and centering exits once it drops below
    ``-stop_rel (1 + max|x|)``.
    """
    F = t * (-(c @ x) + 0.5 * (x @ (H0 @ x))) + _phi(
        x, lin_A, lin_b, q_Q, q_a, q_b, s_A, s_b, s_c, s_d, l_G, l_g0, l_al, l_A, l_b)
    tiny = 0
    for it in range(1, max_iter + 1):
        gphi, hphi = _derivs(x, lin_A, lin_b, q_Q, q_a, q_b, s_A, s_b, s_c, s_d,
                             l_G, l_g0, l_al, l_A, l_b)
        g = t * (H0 @ x - c) + gphi
        dx = _newton_dir(t * H0 + hphi, g)
        dec = -(g @ dx)
        if not np.isfinite(dec):
            return x, it, False, 1
        # F carries rounding error of order 1e-13 |F| once t is large
        if dec / 2 <= max(tol, 1e-13 * abs(F)):
            return x, it - 1, False, 0
        step = _max_linear_step(x, dx, lin_A, lin_b)
        # flat directions (unbounded phase-I problems) must not blow x up
        step = min(step, 10.0 * (1.0 + np.abs(x).max()) / max(np.abs(dx).max(), 1e-300))
        while True:
            xn = x + step * dx
            Fn = t * (-(c @ xn) + 0.5 * (xn @ (H0 @ xn))) + _phi(
                xn, lin_A, lin_b, q_Q, q_a, q_b, s_A, s_b, s_c, s_d, l_G, l_g0, l_al, l_A, l_b)
            if Fn <= F - 0.25 * step * dec:
                break
            step *= 0.5
            if step < 1e-10:
                # no further progress possible in floating point
                return x, it, False, 0
        x, F = xn, Fn
        tiny = tiny + 1 if step < 1e-3 else 0
        if tiny >= 3 and dec < 1e-3:
            return x, it, False, 0
        if stop_rel > 0 and x[-1] < -stop_rel * (1.0 + np.abs(x[:-1]).max()):
            return x, it, True, 0
    return x, max_iter, False, 0


class _Compiled:
    """Constraints stacked by class into the arrays the compiled core reads."""

    def __init__(self, n, constraints, c, P):
        self.n = n
        self.c = np.asarray(c, float)
        if self.c.shape != (n,):
            raise KernelError("objective vector has wrong length")
        if P is None:
            self.H0 = np.zeros((n, n))
        else:
            P = np.asarray(P, float)
            if P.shape != (n, n):
                raise KernelError("objective quadratic term has wrong shape")
            if np.linalg.eigvalsh(0.5 * (P + P.T))[0] < -1e-10 * max(1.0, np.abs(P).max()):
                raise KernelError("objective quadratic term is not PSD")
            self.H0 = P + P.T
        lin_A, lin_b = [], []
        qQ, qa, qb = [], [], []
        soc = []
        lG, lg0, lal, lA, lb = [], [], [], [], []
        for con in constraints:
            if isinstance(con, LinearIneq):
                if con.A.shape[1] != n:
                    raise KernelError("linear constraint has wrong width")
                lin_A.append(con.A)
                lin_b.append(con.b)
            elif isinstance(con, ConvexQuadIneq):
                Q = np.asarray(con.Q, float)
                if Q.shape != (n, n):
                    raise KernelError("quadratic constraint has wrong shape")
                Q = 0.5 * (Q + Q.T)
                if np.linalg.eigvalsh(Q)[0] < -1e-10 * max(1.0, np.abs(Q).max()):
                    raise KernelError("quadratic constraint matrix is not PSD")
                qQ.append(Q)
                qa.append(np.asarray(con.a, float))
                qb.append(float(con.b))
            elif isinstance(con, SecondOrderCone):
                A = np.atleast_2d(np.asarray(con.A, float))
                if A.shape[1] != n:
                    raise KernelError("cone constraint has wrong width")
                soc.append((A, np.atleast_1d(np.asarray(con.b, float)),
                            np.asarray(con.c, float), float(con.d)))
            elif isinstance(con, ConcaveLogIneq):
                if not con.alpha > 0:
                    raise KernelError("log constraint needs alpha > 0")
                lG.append(np.asarray(con.g, float))
                lg0.append(float(con.g0))
                lal.append(float(con.alpha))
                lA.append(np.asarray(con.a, float))
                lb.append(float(con.b))
            else:
                raise KernelError(f"unsupported constraint {type(con).__name__}")
        self.lin_A = np.vstack(lin_A) if lin_A else np.zeros((0, n))
        self.lin_b = np.concatenate(lin_b) if lin_b else np.zeros(0)
        self.q_Q = np.array(qQ, float).reshape(-1, n, n)
        self.q_a = np.array(qa, float).reshape(-1, n)
        self.q_b = np.array(qb, float)
        rows = max((s[0].shape[0] for s in soc), default=1)
        self.s_A = np.zeros((len(soc), rows, n))
        self.s_b = np.zeros((len(soc), rows))
        self.s_c = np.zeros((len(soc), n))
        self.s_d = np.zeros(len(soc))
        for i, (A, b, cc, d) in enumerate(soc):
            self.s_A[i, :A.shape[0]] = A
            self.s_b[i, :b.size] = b
            self.s_c[i] = cc
            self.s_d[i] = d
        self.l_G = np.array(lG, float).reshape(-1, n)
        self.l_g0 = np.array(lg0, float)
        self.l_alpha = np.array(lal, float)
        self.l_A = np.array(lA, float).reshape(-1, n)
        self.l_b = np.array(lb, float)
        self.nu = self.lin_b.size + self.q_b.size + 2 * self.s_d.size + 2 * self.l_b.size

    @property
    def data(self):
        return (self.lin_A, self.lin_b, self.q_Q, self.q_a, self.q_b, self.s_A, self.s_b,
                self.s_c, self.s_d, self.l_G, self.l_g0, self.l_alpha, self.l_A, self.l_b)

    # objective is minimised internally: f0 = -c'x + x'Px
    def f0(self, x):
        return float(-self.c @ x + 0.5 * x @ self.H0 @ x)

    def f0_grad(self, x):
        return self.H0 @ x - self.c

    def phi(self, x):
        """Barrier value, +inf outside the strict interior."""
        return _phi(np.asarray(x, float), *self.data)

    def phi_derivs(self, x):
        return _derivs(np.asarray(x, float), *self.data)

    def violations(self, x):
        """Constraint values in ``<= 0`` form; +inf outside a log domain."""
        out = [self.lin_A @ x - self.lin_b]
        if self.q_b.size:
            Qx = self.q_Q @ x
            out.append(Qx @ x + self.q_a @ x - self.q_b)
        if self.s_d.size:
            u = self.s_A @ x + self.s_b
            out.append(np.linalg.norm(u, axis=1) - (self.s_c @ x + self.s_d))
        if self.l_b.size:
            z = self.l_A @ x + self.l_b
            with np.errstate(divide="ignore", invalid="ignore"):
                val = self.l_G @ x + self.l_g0 - self.l_alpha * np.log2(z)
            out.append(np.where(z > 0, val, np.inf))
        return np.concatenate(out)

    def jacobian(self, x):
        """Gradients of the constraints in ``<= 0`` form, one row each."""
        rows = [self.lin_A]
        if self.q_b.size:
            rows.append(2.0 * (self.q_Q @ x) + self.q_a)
        if self.s_d.size:
            u = self.s_A @ x + self.s_b
            nu = np.linalg.norm(u, axis=1)
            safe = np.where(nu > 0, nu, 1.0)[:, None]
            rows.append(np.einsum("kij,ki->kj", self.s_A, u) / safe - self.s_c)
        if self.l_b.size:
            z = self.l_A @ x + self.l_b
            rows.append(self.l_G - (self.l_alpha / (LN2 * z))[:, None] * self.l_A)
        return np.vstack(rows)

    def _copy(self):
        out = object.__new__(_Compiled)
        out.__dict__.update(self.__dict__)
        return out

    def shifted(self, eps):
        """Copy with every constraint relaxed by ``eps``."""
        out = self._copy()
        out.lin_b = self.lin_b + eps
        out.q_b = self.q_b + eps
        out.s_d = self.s_d + eps
        out.l_g0 = self.l_g0 - eps
        return out

    def with_slack(self, radius=1e6):
        """Phase-I program: minimise s subject to every constraint relaxed by s.

        The box ``|x_i| <= radius`` keeps the phase-I barrier bounded below
        when the feasible set is unbounded.
        """
        n = self.n
        out = self._copy()
        out.n = n + 1
        out.c = np.zeros(n + 1)
        out.c[-1] = -1.0
        out.H0 = np.zeros((n + 1, n + 1))
        col = -np.ones((self.lin_b.size, 1))
        box = np.hstack([np.vstack([np.eye(n), -np.eye(n)]), np.zeros((2 * n, 1))])
        out.lin_A = np.vstack([np.hstack([self.lin_A, col]), -np.eye(1, n + 1, n), box])
        # s >= -1 keeps phase I bounded
        out.lin_b = np.concatenate([self.lin_b, [1.0], np.full(2 * n, radius)])
        out.q_Q = np.zeros((self.q_b.size, n + 1, n + 1))
        out.q_Q[:, :n, :n] = self.q_Q
        out.q_a = np.hstack([self.q_a, -np.ones((self.q_b.size, 1))])
        out.s_A = np.concatenate([self.s_A, np.zeros(self.s_A.shape[:2] + (1,))], axis=2)
        out.s_c = np.hstack([self.s_c, np.ones((self.s_d.size, 1))])
        out.l_G = np.hstack([self.l_G, -np.ones((self.l_b.size, 1))])
        out.l_A = np.hstack([self.l_A, np.zeros((self.l_b.size, 1))])
        out.nu = self.nu + 1 + 2 * n
        return out

    def center(self, x, t, max_iter=100, tol=1e-10, stop_rel=0.0):
        x, its, hit, status = _center(np.asarray(x, float), float(t), max_iter, tol, float(stop_rel),
                                      self.c, self.H0, *self.data)
        if status:
            raise KernelError("non-finite Newton step")
        return x, its, hit


def _polish(cp: _Compiled, x, t, max_iter=8):
    """Extra Newton steps on the last stage to drive stationarity down."""
    its = 0
    for _ in range(max_iter):
        gphi, hphi = cp.phi_derivs(x)
        g = t * cp.f0_grad(x) + gphi
        if np.max(np.abs(g)) / t <= 1e-12:
            break
        dx = _newton_dir(t * cp.H0 + hphi, g)
        step = 1.0
        while not math.isfinite(cp.phi(x + step * dx)):
            step *= 0.5
            if step < 1e-6:
                return x, its
        xn = x + step * dx
        g_new = t * cp.f0_grad(xn) + cp.phi_derivs(xn)[0]
        if not np.all(np.isfinite(g_new)) or np.linalg.norm(g_new) >= np.linalg.norm(g):
            break
        x = xn
        its += 1
    return x, its


def _ls_multipliers(J, g0):
    """Nonnegative least-squares multipliers for ``g0 + J'lam = 0`` by active-set pruning."""
    idx = np.arange(J.shape[0])
    lam = np.zeros(0)
    while idx.size:
        lam = np.linalg.lstsq(J[idx].T, -g0, rcond=None)[0]
        if lam.min() >= 0:
            break
        idx = idx[lam > 0] if np.any(lam > 0) else idx[:0]
    return idx, (lam if idx.size else np.zeros(0))


def _kkt_residual(cp: _Compiled, x, mu):
    """max(relative stationarity, complementarity, duality gap).

    Stationarity is scaled by ``max(1, |grad f0|_inf)`` so the measure does
    not depend on the units of the program. Two multiplier estimates are
    tried: the barrier duals and a least-squares fit on the nearly active
    constraints. The latter avoids dividing by slacks that have lost their
    significant digits when mu is tiny.
    """
    gphi, _ = cp.phi_derivs(x)
    g0 = cp.f0_grad(x)
    scale = max(1.0, float(np.max(np.abs(g0))))
    stat = float(np.max(np.abs(g0 + mu * gphi))) / scale
    slack = -cp.violations(x)
    near = np.flatnonzero(slack <= 1e-6 * (1.0 + float(np.max(np.abs(x)))))
    if near.size and stat > KKT_TOL:
        sub, lam = _ls_multipliers(cp.jacobian(x)[near], g0)
        J = cp.jacobian(x)[near[sub]]
        r = g0 + (J.T @ lam if lam.size else 0.0)
        comp = float(np.max(lam * slack[near[sub]], initial=0.0)) / scale
        stat = min(stat, max(float(np.max(np.abs(r))) / scale, comp))
    return max(stat, mu * cp.nu)


def _barrier(cp: _Compiled, x, tol_opt, max_newton, mu0=1.0):
    mu = mu0
    total = 0
    stage_obj = []
    first = None
    while True:
        x, its, _ = cp.center(x, 1.0 / mu)
        total += its
        if first is None:
            first = x.copy()
        stage_obj.append(-cp.f0(x))
        if total > max_newton:
            return x, mu, total, stage_obj, False, first
        if mu * cp.nu < tol_opt:
            break
        mu /= 10.0
    x, its = _polish(cp, x, 1.0 / mu)
    total += its
    return x, mu, total, stage_obj, True, first


def _phase1(cp: _Compiled, x0, tol_feas, max_newton, early_stop=True, margin=1e-6):
    """Return ``(x, s)``: a strictly feasible x if ``s < 0``.

    With ``early_stop`` the search ends at the first point whose constraints
    all hold with slack ``margin (1 + max|x|)``; starts that already do are
    returned unchanged. Points closer to the boundary than that make the
    barrier Hessian numerically singular.
    """
    x0 = np.zeros(cp.n) if x0 is None else np.asarray(x0, float)
    viol = cp.violations(x0)
    if not np.all(np.isfinite(viol)):
        x0 = np.zeros(cp.n)
        viol = cp.violations(x0)
        if not np.all(np.isfinite(viol)):
            raise KernelError("origin lies outside a log-constraint domain")
    if viol.size == 0:
        return x0, -1.0
    if early_stop and viol.max() < -margin * (1.0 + np.abs(x0).max()):
        return x0, float(viol.max())
    aug = cp.with_slack(1e6 * (1.0 + np.abs(x0).max(initial=0.0)))
    y = np.append(x0, viol.max() + 1.0)
    mu = 1.0
    total = 0
    best = (x0, float(viol.max()))
    while True:
        y, its, hit = aug.center(y, 1.0 / mu, stop_rel=margin if early_stop else 0.0)
        total += its
        s = float(cp.violations(y[:-1]).max())
        if s < best[1]:
            best = (y[:-1].copy(), s)
        if hit and s < 0:
            return best
        if mu * aug.nu < tol_feas * 1e-2 or total > max_newton:
            break
        mu /= 10.0
    return best


def phase1_feasible(p: ConvexProgram, tol_feas: float = 1e-8, x0=None):
    """Phase-I test: ``(feasible, point, max violation at point)``.

    Feasible means a strictly feasible point was found, or the minimal
    maximum violation is within ``tol_feas`` of zero (boundary case).
    """
    cp = _Compiled(p.n_vars, p.constraints, p.c, p.P)
    x, s = _phase1(cp, x0, tol_feas, 2000, early_stop=False)
    return s <= tol_feas, x, s


def solve(p: ConvexProgram, tol_feas: float = 1e-8, tol_opt: float = 1e-8,
          x0=None, max_newton: int = 2000) -> SolveReport:
    """Solve ``p`` with a log-barrier method.

    ``x0`` is one starting point or a list of candidates. The first strictly
    feasible candidate is used directly; otherwise the last one seeds phase I.
    """
    cp = _Compiled(p.n_vars, p.constraints, p.c, p.P)
    if isinstance(x0, (list, tuple)):
        cands = [np.asarray(c, float) for c in x0 if c is not None]
        x0 = cands[-1] if cands else None
        for c in cands:
            v = cp.violations(c)
            if v.size == 0 or v.max() < 0:
                x0 = c
                break
    x, s = _phase1(cp, x0, tol_feas, max_newton)
    if s > tol_feas:
        return SolveReport(Status.INFEASIBLE, None, math.nan, math.nan, 0, phase1_slack=s)
    work = cp
    if s >= 0:
        # boundary-feasible: optimise over the constraints relaxed by tol_feas
        work = cp.shifted(s + tol_feas)
    if p.feasibility_only:
        return SolveReport(Status.OPTIMAL, x, p.objective(x), math.nan, 0, 0.0, [], s)
    try:
        x, mu, its, stage_obj, ok, first = _barrier(work, x, tol_opt, max_newton)
    except KernelError:
        # singular Newton system, typically an objective unbounded above
        return SolveReport(Status.MAX_ITER, x, p.objective(x), math.nan, 0, phase1_slack=s)
    kkt = _kkt_residual(work, x, mu)
    # Optimal is only reported for verified points
    ok = ok and kkt <= KKT_TOL and cp.violations(x).max(initial=-math.inf) <= tol_feas
    status = Status.OPTIMAL if ok else Status.MAX_ITER
    stage_obj = [v + p.const for v in stage_obj]
    return SolveReport(status, x, p.objective(x), mu, its, kkt, stage_obj, s, first)
