"""Max-min secrecy energy efficiency when every eavesdropper's CSI is known.

The design maximises ``min_k (C_B - C_E,k) / P`` over the data precoder v and
one AN column per eavesdropper (matrix W). For a fixed efficiency target t
the constraint ``C_B - C_E,k >= t P`` is rewritten with epigraph variables,
its non-convex parts are replaced by first-order expansions, and a
convex-concave loop maximises a common margin s. The largest t with a
non-negative margin is then located by bisection.

Variables are scaled exactly as in :mod:`vlcsee.unknown_csi`: precoders by the
amplitude headroom, received powers by each receiver's own noise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernel
from .channel import ChannelState, RoomScenario
from .kernel import ConcaveLogIneq, ConvexProgram, ConvexQuadIneq, LinearIneq
from .metrics import (PI_E, PrecoderSolution, bob_rate_raw, delta_dc, ee_bob, fixed_power,
                      min_see, secrecy_rate_k, total_power)

LN2 = math.log(2.0)

SOLVED = "Solved"
INFEASIBLE = "Infeasible"


class BracketError(RuntimeError):
    """No infeasible upper end for the bisection could be found."""


@dataclass(frozen=True)
class MaxMinConfig:
    """Bisection and CCP settings. ``t_low``/``t_high`` of None mean automatic."""

    t_low: float | None = None
    t_high: float | None = None
    eps_bisect: float = 1e-3
    eps_ccp: float = 1e-3
    max_iter_ccp: int = 40
    use_an: bool = True
    seed_with_noan: bool = True
    seed_an_level: float = 0.05
    max_ascent: int = 20

    def __post_init__(self):
        if not (self.eps_bisect > 0 and self.eps_ccp > 0):
            raise ValueError("tolerances must be positive")
        if self.t_low is not None and self.t_high is not None and not self.t_low < self.t_high:
            raise ValueError("require t_low < t_high")


@dataclass
class MaxMinOutcome:
    status: str
    sol: PrecoderSolution | None
    t_star: float = math.nan
    see: float = math.nan
    ee_bob: float = math.nan
    bisection_trace: list = field(default_factory=list)  # (t, feasible, ccp iterations)
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


@dataclass
class P12Result:
    feasible: bool
    margin: float
    sol: PrecoderSolution | None
    iterations: int
    state: tuple | None = None  # warm start: (linearisation point, solver point)


def rate_ceiling(channel: ChannelState, scenario: RoomScenario) -> float:
    """Upper bound on any achievable SEE: Bob's best rate over the fixed power."""
    delta = delta_dc(scenario.dc_bias_Idc, scenario.i_min, scenario.i_max)
    sig = delta * float(np.sum(np.abs(channel.bob_alice_gain)))
    return float(bob_rate_raw(sig ** 2, 0.0, channel.bob_noise_norm)) / fixed_power(scenario)


class _Layout:
    """Variable indices and convex restrictions of the margin problem."""

    def __init__(self, channel: ChannelState, scenario: RoomScenario, use_an: bool):
        self.channel = channel
        self.delta = delta_dc(scenario.dc_bias_Idc, scenario.i_min, scenario.i_max)
        self.fixed = fixed_power(scenario)
        self.zd2 = scenario.power.zeta * self.delta ** 2
        d = self.delta
        sb = math.sqrt(channel.bob_noise_norm)
        self.hb = channel.bob_alice_gain * d / sb
        self.hbb = channel.bob_jammer_gains * d / sb
        se = np.sqrt(channel.eve_noise_norm)[:, None]
        self.he = channel.eve_alice_gains * d / se
        self.hbe = channel.eve_jammer_gains * d / se
        self.K = channel.n_eves
        if self.K < 1:
            raise ValueError("known-CSI design needs at least one eavesdropper")
        self.ni = channel.n_info
        self.na = channel.n_an
        self.kw = self.K if use_an else 0  # AN columns
        self.iv = np.arange(self.ni)
        self.iw = self.ni + np.arange(self.na * self.kw).reshape(self.na, self.kw)
        base = self.ni + self.na * self.kw
        self.icb1, self.icb2, self.ipb1, self.ipb2 = base, base + 1, base + 2, base + 3
        e0 = base + 4
        self.ice1 = e0 + 4 * np.arange(self.K)
        self.ice2 = self.ice1 + 1
        self.ipe1 = self.ice1 + 2
        self.ipe2 = self.ice1 + 3
        self.js = e0 + 4 * self.K
        self.n = self.js + 1
        self.pb_max = float(np.sum(np.abs(self.hb)) ** 2 + np.sum(np.abs(self.hbb)) ** 2) + 1.0
        self.pe_max = (np.sum(np.abs(self.he), axis=1) ** 2
                       + np.sum(np.abs(self.hbe), axis=1) ** 2 + 1.0)
        # row-wise L1 limit on W as 2^K sign patterns per row
        self.signs = np.array(list(itertools.product((-1.0, 1.0), repeat=self.kw))) \
            if self.kw else np.zeros((0, 0))

    # -- views ---------------------------------------------------------------
    def split(self, x):
        return x[self.iv], x[self.iw] if self.kw else np.zeros((self.na, 0))

    def lin_point(self, x):
        xv, XW = self.split(x)
        return xv.copy(), XW.copy(), float(x[self.ipb2]), x[self.ipe1].copy()

    def solution(self, xv, XW) -> PrecoderSolution:
        v = xv * self.delta
        if float(self.hb @ xv) < 0:
            v = -v
        W = XW * self.delta if self.kw else np.zeros((self.na, self.K))
        return PrecoderSolution(self.channel.scheme, v, W)

    def rel_change(self, new, old) -> float:
        errs = []
        for a, b in ((new[0], old[0]), (new[1], old[1])):
            if a.size:
                errs.append(np.linalg.norm(a - b) / max(np.linalg.norm(a), 1e-3))
        errs.append(abs(new[2] - old[2]) / max(abs(new[2]), 1.0))
        errs.append(float(np.max(np.abs(new[3] - old[3]) / np.maximum(np.abs(new[3]), 1.0))))
        return float(max(errs))

    # -- restriction -----------------------------------------------------------
    def program(self, t, lp) -> ConvexProgram:
        n, K = self.n, self.K
        xv0, XW0, pb20, pe10 = lp
        c = np.zeros(n)
        c[self.js] = 1.0
        cons = []
        rows, rhs = [], []

        def row():
            return np.zeros(n)

        # per-Eve margin: tP + s <= (cB1 - cB2 - cE1 + cE2)/2, power quadratic in v, W
        Q = np.zeros((n, n))
        pw = np.concatenate([self.iv, self.iw.ravel()])
        Q[pw, pw] = t * self.zd2
        for k in range(K):
            a = row()
            a[self.icb1], a[self.icb2] = -0.5, 0.5
            a[self.ice1[k]], a[self.ice2[k]] = 0.5, -0.5
            a[self.js] = 1.0
            cons.append(ConvexQuadIneq(Q, a, -t * self.fixed))

        # Bob: cB1 <= log2(2 pB1 + pi e)
        g = row()
        g[self.icb1] = 1.0
        a = row()
        a[self.ipb1] = 2.0
        cons.append(ConcaveLogIneq(g, 0.0, 1.0, a, PI_E))
        # pB1 <= expansion of (h'v)^2 + ||hbar'W||^2
        r = row()
        r[self.ipb1] = 1.0
        s0 = float(self.hb @ xv0)
        r[self.iv] = -2 * s0 * self.hb
        val = -s0 ** 2
        if self.kw:
            ab = self.hbb @ XW0
            r[self.iw] = -2 * np.outer(self.hbb, ab)
            val -= float(ab @ ab)
        rows.append(r)
        rhs.append(val)
        # cB2 >= tangent of log2(pi e (pB2/3 + 1))
        slope = 1.0 / (LN2 * (pb20 + 3.0))
        r = row()
        r[self.ipb2] = slope
        r[self.icb2] = -1.0
        rows.append(r)
        rhs.append(slope * pb20 - math.log2(PI_E * (pb20 / 3 + 1)))
        # pB2 >= ||hbar'W||^2
        Qb = np.zeros((n, n))
        for j in range(self.kw):
            idx = self.iw[:, j]
            Qb[np.ix_(idx, idx)] = np.outer(self.hbb, self.hbb)
        a = row()
        a[self.ipb2] = -1.0
        cons.append(ConvexQuadIneq(Qb, a, 0.0))

        for k in range(K):
            ge, gbe = self.he[k], self.hbe[k]
            # cE1 >= tangent of log2(pi e (pE1/3 + 1))
            slope = 1.0 / (LN2 * (pe10[k] + 3.0))
            r = row()
            r[self.ipe1[k]] = slope
            r[self.ice1[k]] = -1.0
            rows.append(r)
            rhs.append(slope * pe10[k] - math.log2(PI_E * (pe10[k] / 3 + 1)))
            # pE1 >= (g'v)^2 + ||gbar'W||^2
            Qe = np.zeros((n, n))
            Qe[np.ix_(self.iv, self.iv)] = np.outer(ge, ge)
            for j in range(self.kw):
                idx = self.iw[:, j]
                Qe[np.ix_(idx, idx)] = np.outer(gbe, gbe)
            a = row()
            a[self.ipe1[k]] = -1.0
            cons.append(ConvexQuadIneq(Qe, a, 0.0))
            # cE2 <= log2(2 pE2 + pi e)
            g = row()
            g[self.ice2[k]] = 1.0
            a = row()
            a[self.ipe2[k]] = 2.0
            cons.append(ConcaveLogIneq(g, 0.0, 1.0, a, PI_E))
            # pE2 <= expansion of ||gbar'W||^2
            r = row()
            r[self.ipe2[k]] = 1.0
            val = 0.0
            if self.kw:
                ae = gbe @ XW0
                r[self.iw] = -2 * np.outer(gbe, ae)
                val = -float(ae @ ae)
            rows.append(r)
            rhs.append(val)

        # loose bounds keep the feasible set compact
        cb2_max = math.log2(PI_E * (self.pb_max / 3 + 1)) + 1.0
        for idx, sign, bound in ((self.ipb1, -1, 1.0), (self.icb1, -1, 0.0),
                                 (self.ipb2, 1, self.pb_max), (self.icb2, 1, cb2_max)):
            r = row()
            r[idx] = sign
            rows.append(r)
            rhs.append(bound)
        for k in range(K):
            ce1_max = math.log2(PI_E * (self.pe_max[k] / 3 + 1)) + 1.0
            for idx, sign, bound in ((self.ipe2[k], -1, 1.0), (self.ice2[k], -1, 0.0),
                                     (self.ipe1[k], 1, self.pe_max[k]), (self.ice1[k], 1, ce1_max)):
                r = row()
                r[idx] = sign
                rows.append(r)
                rhs.append(bound)
        r = row()
        r[self.js] = -1.0
        rows.append(r)
        rhs.append(self.s_floor(t))

        # amplitude limits
        for i in self.iv:
            for sgn in (1.0, -1.0):
                r = row()
                r[i] = sgn
                rows.append(r)
                rhs.append(1.0)
        for a_ in range(self.na if self.kw else 0):
            for pattern in self.signs:
                r = row()
                r[self.iw[a_]] = pattern
                rows.append(r)
                rhs.append(1.0)
        cons.append(LinearIneq(np.array(rows), np.array(rhs)))
        return ConvexProgram(n, c, None, cons)

    def s_floor(self, t):
        p_max = self.fixed + self.zd2 * (self.ni + self.na)
        return t * p_max + 100.0

    def initial_guess(self, t, lp):
        xv0, XW0, pb20, pe10 = lp
        x = np.zeros(self.n)
        x[self.iv] = xv0
        if self.kw:
            x[self.iw] = XW0
        pb1 = float((self.hb @ xv0) ** 2)
        ib = float(np.sum((self.hbb @ XW0) ** 2)) if self.kw else 0.0
        x[self.ipb1] = 0.5 * (pb1 + ib)
        x[self.icb1] = math.log2(pb1 + ib + PI_E) - 1.0
        x[self.ipb2] = min(ib + 1.0, self.pb_max - 0.5)
        x[self.icb2] = math.log2(PI_E * (x[self.ipb2] / 3 + 1)) + 0.5
        for k in range(self.K):
            ie = float(np.sum((self.hbe[k] @ XW0) ** 2)) if self.kw else 0.0
            pe1 = float((self.he[k] @ xv0) ** 2) + ie
            x[self.ipe1[k]] = min(pe1 + 1.0, self.pe_max[k] - 0.5)
            x[self.ice1[k]] = math.log2(PI_E * (x[self.ipe1[k]] / 3 + 1)) + 0.5
            x[self.ipe2[k]] = 0.5 * ie - 0.5
            x[self.ice2[k]] = math.log2(max(ie - 1.0, 0.0) + PI_E) - 1.0
        x[self.js] = -self.s_floor(t) + 1.0
        return x

    def make_lp(self, xv0, XW0):
        pb2 = float(np.sum((self.hbb @ XW0) ** 2)) if self.kw else 0.0
        pe1 = (self.he @ xv0) ** 2
        if self.kw:
            pe1 = pe1 + np.sum((self.hbe @ XW0) ** 2, axis=1)
        return np.asarray(xv0, float), XW0, pb2, np.asarray(pe1, float)

    def default_lp(self, an_level: float = 0.5):
        """Half-amplitude data precoder; AN rows using ``an_level`` of their L1 budget."""
        hmax = np.max(np.abs(self.hb))
        xv0 = 0.5 * (self.hb / hmax if hmax > 0 else np.ones(self.ni))
        XW0 = np.full((self.na, self.kw), an_level / self.kw) if self.kw else np.zeros((self.na, 0))
        return self.make_lp(xv0, XW0)

    def reseat(self, x, t):
        """Lower the margin variable so a warm point is strictly feasible at level t."""
        x = x.copy()
        xv, XW = self.split(x)
        power = self.fixed + self.zd2 * float(xv @ xv + np.sum(XW ** 2))
        gaps = 0.5 * (x[self.icb1] - x[self.icb2] - x[self.ice1] + x[self.ice2]) - t * power
        x[self.js] = max(float(np.min(gaps)) - 1e-3 * (1 + abs(float(np.min(gaps)))),
                         -self.s_floor(t) + 1e-3)
        return x


def p12_feasible(channel: ChannelState, scenario: RoomScenario, t: float,
                 cfg: MaxMinConfig = MaxMinConfig(), warm=None, layout: _Layout | None = None,
                 stop_when_feasible: bool = True) -> P12Result:
    """Is SEE level ``t`` reachable? Runs the margin-maximising CCP loop.

    Returns as soon as a restriction certifies a non-negative margin (unless
    ``stop_when_feasible`` is False); otherwise iterates until the iterates or
    the margin stop moving and declares feasibility iff the margin is at
    least -1e-8.
    """
    lay = layout or _Layout(channel, scenario, cfg.use_an)
    if t >= rate_ceiling(channel, scenario) and t > 0:
        return P12Result(False, -math.inf, None, 0)
    if warm is not None:
        lp, x_prev = warm[0], lay.reseat(warm[1], t)
    else:
        lp = lay.default_lp()
        x_prev = lay.initial_guess(t, lp)
    margin = -math.inf
    start = x_prev
    for j in range(1, cfg.max_iter_ccp + 1):
        rep = kernel.solve(lay.program(t, lp), x0=start)
        if rep.status is kernel.Status.INFEASIBLE:
            raise kernel.KernelError("margin restriction unexpectedly infeasible")
        x = rep.x
        new_lp = lay.lin_point(x)
        err = lay.rel_change(new_lp, lp)
        prev_margin, margin = margin, float(x[lay.js])
        lp, x_prev = new_lp, x
        start = [0.5 * (x + rep.first_center), x]
        stalled = abs(margin - prev_margin) <= cfg.eps_ccp * max(abs(margin), 1e-2)
        if (margin >= 0 and stop_when_feasible) or err <= cfg.eps_ccp or stalled:
            break
    sol = lay.solution(*lay.split(x_prev))
    return P12Result(margin >= -1e-8, margin, sol, j, (lp, x_prev))


def maxmin_see(channel: ChannelState, scenario: RoomScenario,
               cfg: MaxMinConfig = MaxMinConfig()) -> MaxMinOutcome:
    """Bisection on the SEE level t using :func:`p12_feasible`.

    The bracket starts at ``[0, rate_ceiling]`` (the upper end is doubled
    while feasible) and the last feasible point is returned with t* = t_low.
    """
    lay = _Layout(channel, scenario, cfg.use_an)
    t_low = 0.0 if cfg.t_low is None else cfg.t_low
    t_high = rate_ceiling(channel, scenario) if cfg.t_high is None else cfg.t_high
    trace = []
    best = lay.solution(np.zeros(lay.ni), np.zeros((lay.na, lay.kw)))
    if t_high <= 0:
        # Bob cannot be reached by the data luminaires: no secrecy is possible
        return MaxMinOutcome(SOLVED, best, 0.0, min_see(scenario, channel, best),
                             ee_bob(scenario, channel, best), trace)
    warm = None
    if cfg.use_an and cfg.seed_with_noan and cfg.t_low is None:
        # the no-AN optimum is feasible here; start just off W = 0, which the
        # convex-concave loop could never leave
        base = maxmin_see(channel, scenario, replace(cfg, use_an=False))
        trace.extend(base.bisection_trace)
        if base.solved and base.t_star > 0:
            xv = base.sol.info_precoder / lay.delta
            lp = lay.make_lp(xv, np.full((lay.na, lay.kw), cfg.seed_an_level / lay.kw))
            res = p12_feasible(channel, scenario, base.t_star, cfg,
                               (lp, lay.initial_guess(base.t_star, lp)), lay)
            trace.append((base.t_star, res.feasible, res.iterations))
            if res.feasible:
                t_low, best, warm = base.t_star, res.sol, res.state
            else:
                t_low, best = base.t_star, PrecoderSolution(
                    channel.scheme, base.sol.info_precoder, np.zeros((lay.na, lay.K)))
    if warm is None and cfg.t_low is None:
        # without a seed, maximise the secrecy margin at t = 0 to convergence;
        # the point reached certifies its own SEE as a lower bracket end
        res = p12_feasible(channel, scenario, 0.0, cfg, layout=lay, stop_when_feasible=False)
        trace.append((0.0, res.feasible, res.iterations))
        warm = res.state
        see0 = min_see(scenario, channel, res.sol) if res.feasible else 0.0
        if see0 > t_low:
            t_low, best = see0, res.sol
        elif t_low == 0:
            # no point with positive secrecy was found at the most permissive
            # level; t = 0 is certified by v = 0, W = 0
            return MaxMinOutcome(SOLVED, best, 0.0, min_see(scenario, channel, best),
                                 ee_bob(scenario, channel, best), trace)
    if t_low > 0 and warm is None and cfg.t_low is not None:
        res = p12_feasible(channel, scenario, t_low, cfg, layout=lay)
        trace.append((t_low, res.feasible, res.iterations))
        if not res.feasible:
            return MaxMinOutcome(INFEASIBLE, None, bisection_trace=trace,
                                 message="lower bracket end is infeasible")
        best, warm = res.sol, res.state
    for _ in range(60):
        res = p12_feasible(channel, scenario, t_high, cfg, warm, lay)
        trace.append((t_high, res.feasible, res.iterations))
        if not res.feasible:
            break
        t_low, best, warm = t_high, res.sol, res.state
        t_high *= 2
    else:
        raise BracketError("could not find an infeasible SEE level")
    ceiling = rate_ceiling(channel, scenario)
    reopen = 3
    while t_high - t_low > cfg.eps_bisect:
        t = 0.5 * (t_low + t_high)
        res = p12_feasible(channel, scenario, t, cfg, warm, lay)
        trace.append((t, res.feasible, res.iterations))
        if not res.feasible:
            t_high = t
            continue
        best, warm = res.sol, res.state
        # the point itself certifies its own SEE, which may exceed t
        t_low = max(t, min_see(scenario, channel, best))
        if t_low >= t_high and reopen > 0 and cfg.t_high is None:
            # an earlier infeasible verdict came from a worse start
            reopen -= 1
            t_high = ceiling
        t_low = min(t_low, t_high)
    if cfg.t_high is None and warm is not None:
        # level ascent: maximise the margin at the certified level until the
        # returned point stops raising its own SEE (bisection stops at eps)
        for _ in range(cfg.max_ascent):
            res = p12_feasible(channel, scenario, t_low, cfg, warm, lay, stop_when_feasible=False)
            trace.append((t_low, res.feasible, res.iterations))
            see = min_see(scenario, channel, res.sol) if res.feasible else -math.inf
            if see <= t_low + 1e-4 * max(t_low, cfg.eps_bisect):
                break
            t_low, best, warm = see, res.sol, res.state
    see = min_see(scenario, channel, best)
    if see < t_low - cfg.eps_bisect:
        return MaxMinOutcome(INFEASIBLE, best, t_low, see, bisection_trace=trace,
                             message="returned point misses the certified SEE level")
    return MaxMinOutcome(SOLVED, best, t_low, see, ee_bob(scenario, channel, best), trace)


def secrecy_margins(scenario: RoomScenario, channel: ChannelState, sol: PrecoderSolution,
                    t: float) -> np.ndarray:
    """Per-Eve ``C_s,k - t P`` at a precoder pair (non-negative when level t is met)."""
    p = total_power(scenario, sol)
    return np.array([secrecy_rate_k(scenario, channel, sol, k) - t * p
                     for k in range(channel.n_eves)])
