"""Shared builders and brute-force oracles for the test suite."""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import minimize

from vlcsee.channel import ChannelState, RoomScenario, Scheme, build_channel
from vlcsee.experiments import place_receivers
from vlcsee.kernel import ConcaveLogIneq, ConvexProgram, ConvexQuadIneq, LinearIneq, SecondOrderCone
from vlcsee.metrics import (PrecoderSolution, bob_rate_raw, delta_dc, eve_rate_raw, min_see,
                            total_power)

BASE = RoomScenario()


def hand_channel(h_b, hbar_b, h_e=(), hbar_e=(), s2_b=1.0, s2_e=(), scheme=Scheme.SELECTIVE_SISO):
    """ChannelState from explicit gains (Eve arrays are one row per Eve)."""
    h_b = np.atleast_1d(np.asarray(h_b, float))
    hbar_b = np.atleast_1d(np.asarray(hbar_b, float))
    h_e = np.asarray(h_e, float).reshape(-1, h_b.size)
    hbar_e = np.asarray(hbar_e, float).reshape(-1, hbar_b.size)
    s2_e = np.asarray(s2_e, float).reshape(-1)
    return ChannelState(Scheme(scheme), h_b, hbar_b, h_e, hbar_e, float(s2_b), s2_e,
                        0 if h_b.size == 1 else None)


def random_channel(seed, scheme, k=1, p_dbm=30.0, base=BASE):
    """Scenario and channel for one uniform random placement."""
    rng = np.random.default_rng(seed)
    pos = place_receivers(rng, base, k)
    sc = base.with_power_dbm(p_dbm)
    return sc, build_channel(sc, pos[0, :2], pos[1:, :2], scheme)


# ---------------------------------------------------------------------------
# convex kernel: random programs and a zooming grid oracle

def random_program(rng, n):
    """Random bounded program with a strictly feasible point ``x0`` in [-1, 1]^n."""
    x0 = rng.uniform(-0.5, 0.5, n)
    cons = [LinearIneq(np.vstack([np.eye(n), -np.eye(n)]), np.ones(2 * n))]
    kinds = rng.choice(["lin", "quad", "soc", "log"], size=rng.integers(1, 4))
    for kind in kinds:
        if kind == "lin":
            a = rng.normal(size=n)
            cons.append(LinearIneq(a, a @ x0 + rng.uniform(0.1, 1.0)))
        elif kind == "quad":
            M = rng.normal(size=(n, n))
            Q = M @ M.T / n
            a = rng.normal(size=n)
            cons.append(ConvexQuadIneq(Q, a, x0 @ Q @ x0 + a @ x0 + rng.uniform(0.1, 1.0)))
        elif kind == "soc":
            m = rng.integers(1, n + 1)
            A = rng.normal(size=(m, n))
            b = rng.normal(size=m) * 0.3
            c = rng.normal(size=n) * 0.3
            d = np.linalg.norm(A @ x0 + b) - c @ x0 + rng.uniform(0.1, 1.0)
            cons.append(SecondOrderCone(A, b, c, d))
        else:
            g = rng.normal(size=n)
            a = rng.normal(size=n) * 0.5
            b = abs(a) @ np.ones(n) + rng.uniform(0.2, 1.0)  # argument > 0 on the box
            alpha = rng.uniform(0.5, 2.0)
            g0 = alpha * math.log2(a @ x0 + b) - g @ x0 - rng.uniform(0.1, 1.0)
            cons.append(ConcaveLogIneq(g, g0, alpha, a, b))
    c = rng.normal(size=n)
    P = None
    if rng.random() < 0.6:
        M = rng.normal(size=(n, n))
        P = M @ M.T * rng.uniform(0.1, 1.0) / n
    return ConvexProgram(n, c, P, cons)


def _violation(p: ConvexProgram, X):
    """Max constraint violation at each row of X (<= 0 means feasible)."""
    v = np.full(X.shape[0], -np.inf)
    for con in p.constraints:
        if isinstance(con, LinearIneq):
            g = (X @ con.A.T - con.b).max(axis=1)
        elif isinstance(con, ConvexQuadIneq):
            g = np.einsum("ij,jk,ik->i", X, con.Q, X) + X @ con.a - con.b
        elif isinstance(con, SecondOrderCone):
            g = np.linalg.norm(X @ con.A.T + con.b, axis=1) - (X @ con.c + con.d)
        else:
            arg = X @ con.a + con.b
            with np.errstate(divide="ignore", invalid="ignore"):
                rhs = np.where(arg > 0, con.alpha * np.log2(np.maximum(arg, 1e-300)), -np.inf)
            g = X @ con.g + con.g0 - rhs
        v = np.maximum(v, g)
    return v


def _objective(p: ConvexProgram, X):
    val = X @ p.c + p.const
    if p.P is not None:
        val = val - np.einsum("ij,jk,ik->i", X, p.P, X)
    return val


def _grid_nodes(p: ConvexProgram, lo, hi, keep):
    """Best feasible objective on a uniform grid over the box and its top nodes."""
    n = p.n_vars
    points = {1: 4001, 2: 301, 3: 61, 4: 21, 5: 13}[n]
    X = np.array(list(itertools.product(*[np.linspace(lo, hi, points)] * n)))
    f = _objective(p, X)
    f[_violation(p, X) > 0] = -np.inf
    top = np.argsort(f)[::-1][:keep]
    top = top[np.isfinite(f[top])]
    return (float(f[top[0]]) if top.size else -np.inf), X[top]


def conic_reference(p: ConvexProgram):
    """Optimal value from an independent conic solver (cvxpy + Clarabel); None if infeasible."""
    import cvxpy as cp

    x = cp.Variable(p.n_vars)
    obj = p.c @ x + p.const
    if p.P is not None:
        obj = obj - cp.quad_form(x, cp.psd_wrap(0.5 * (p.P + p.P.T)))
    cons = []
    for con in p.constraints:
        if isinstance(con, LinearIneq):
            cons.append(con.A @ x <= con.b)
        elif isinstance(con, ConvexQuadIneq):
            cons.append(cp.quad_form(x, cp.psd_wrap(0.5 * (con.Q + con.Q.T))) + con.a @ x <= con.b)
        elif isinstance(con, SecondOrderCone):
            cons.append(cp.norm(con.A @ x + con.b) <= con.c @ x + con.d)
        else:
            cons.append(con.g @ x + con.g0 <= con.alpha / math.log(2) * cp.log(con.a @ x + con.b))
    prob = cp.Problem(cp.Maximize(obj), cons)
    prob.solve(solver=cp.CLARABEL)
    if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        return None
    return float(prob.value)


def grid_oracle(p: ConvexProgram, lo=-1.0, hi=1.0):
    """Best objective over the feasible nodes of a dense uniform grid on the box.

    Grid nodes are feasible, so the value is a certified lower bound on the
    optimum; -inf when no node is feasible.
    """
    n = p.n_vars
    points = {1: 4001, 2: 301, 3: 61, 4: 21, 5: 13}[n]
    X = np.array(list(itertools.product(*[np.linspace(lo, hi, points)] * n)))
    f = _objective(p, X)
    f[_violation(p, X) > 0] = -np.inf
    return float(f.max())


# ---------------------------------------------------------------------------
# known CSI: direct multi-start maximisation of the min-SEE

def direct_maxmin(channel, scenario, n_starts=20, seed=0, use_an=True):
    """Multi-start SLSQP on the epigraph form of max-min SEE.

    The AN matrix is split as W = W+ - W- so the row-wise L1 limit becomes
    linear. Returns (best min-SEE, best solution).
    """
    rng = np.random.default_rng(seed)
    d = delta_dc(scenario.dc_bias_Idc, scenario.i_min, scenario.i_max)
    ni, na, K = channel.n_info, channel.n_an, channel.n_eves
    kw = K if use_an else 0
    nW = na * kw
    n = ni + 2 * nW + 1

    def unpack(z):
        v = z[:ni] * d
        W = (z[ni:ni + nW] - z[ni + nW:ni + 2 * nW]).reshape(na, kw) * d if kw else np.zeros((na, K))
        return PrecoderSolution(channel.scheme, v, W)

    def rates(z):
        sol = unpack(z)
        v, W = sol.info_precoder, sol.an_matrix
        cb = bob_rate_raw((channel.bob_alice_gain @ v) ** 2,
                          np.sum((channel.bob_jammer_gains @ W) ** 2), channel.bob_noise_norm)
        ce = [eve_rate_raw((channel.eve_alice_gains[k] @ v) ** 2,
                           np.sum((channel.eve_jammer_gains[k] @ W) ** 2), channel.eve_noise_norm[k])
              for k in range(K)]
        return (cb - np.array(ce)) / total_power(scenario, sol)

    cons = [{"type": "ineq", "fun": lambda z: rates(z[:-1]) - z[-1]}]
    if kw:
        A = np.zeros((na, n))
        for r in range(na):
            A[r, ni + r * kw:ni + (r + 1) * kw] = -1
            A[r, ni + nW + r * kw:ni + nW + (r + 1) * kw] = -1
        cons.append({"type": "ineq", "fun": lambda z: 1 + A @ z})
    bounds = [(-1, 1)] * ni + [(0, 1)] * (2 * nW) + [(None, None)]
    grad = -np.eye(n)[-1]
    best, best_sol = 0.0, None
    for _ in range(n_starts):
        z0 = np.concatenate([rng.uniform(-1, 1, ni),
                             rng.uniform(0, 1 / max(kw, 1), 2 * nW) * rng.uniform(0, 1), [0.0]])
        z0[-1] = rates(z0[:-1]).min()
        r = minimize(lambda z: -z[-1], z0, jac=lambda z: grad, constraints=cons, bounds=bounds,
                     method="SLSQP", options={"maxiter": 500, "ftol": 1e-12})
        sol = unpack(r.x[:-1])
        if sol.satisfies_amplitude(d, 1e-6):
            val = min_see(scenario, channel, sol)
            if val > best:
                best, best_sol = val, sol
    return best, best_sol


# ---------------------------------------------------------------------------
# unknown CSI: direct multi-start maximisation of Bob's EE

def direct_max_ee(channel, scenario, cfg, n_starts=30, seed=0, zf_direction=None):
    """Multi-start SLSQP over (v, w) in amplitude units of Delta.

    With ``zf_direction`` the AN is restricted to sqrt(phi) times that vector.
    Returns the best EE found at a point meeting every constraint.
    """
    from vlcsee.metrics import ee_bob, sinr

    rng = np.random.default_rng(seed)
    d = delta_dc(scenario.dc_bias_Idc, scenario.i_min, scenario.i_max)
    ni, na = channel.n_info, channel.n_an
    pth = cfg.p_th / d ** 2
    zf = zf_direction is not None
    nw = 1 if zf else na

    def unpack(z):
        w = math.sqrt(max(z[ni], 0.0)) * zf_direction if zf else z[ni:]
        return PrecoderSolution(channel.scheme, z[:ni] * d, w * d)

    def neg_ee(z):
        return -ee_bob(scenario, channel, unpack(z))

    cons = [{"type": "ineq", "fun": lambda z: (z[ni] if zf else z[ni:] @ z[ni:]) - pth}]
    if cfg.delta_b > 0:
        cons.append({"type": "ineq", "fun": lambda z: sinr(channel, unpack(z)) / cfg.delta_b - 1})
    if zf:
        wmax = float(np.max(np.abs(zf_direction)))
        bounds = [(-1, 1)] * ni + [(0, 1 / wmax ** 2)]
    else:
        bounds = [(-1, 1)] * (ni + nw)
    best = -math.inf
    for _ in range(n_starts):
        z0 = rng.uniform(-1, 1, ni + nw)
        if zf:
            z0[ni] = rng.uniform(pth, bounds[-1][1])
        r = minimize(neg_ee, z0, bounds=bounds, constraints=cons, method="SLSQP",
                     options={"maxiter": 500, "ftol": 1e-13})
        sol = unpack(r.x)
        ok = sol.satisfies_amplitude(d, 1e-7) and float(np.sum(sol.an_precoder ** 2)) >= cfg.p_th - 1e-7
        if cfg.delta_b > 0:
            ok = ok and sinr(channel, sol) >= cfg.delta_b * (1 - 1e-6)
        if ok:
            best = max(best, -r.fun)
    return best
