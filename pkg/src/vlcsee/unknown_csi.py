"""AN designs when the eavesdroppers' CSI is unavailable.

The transmitter maximises the energy efficiency of Bob's link instead of the
secrecy energy efficiency:

* ``solve_p1_noan``   no AN (the unconstrained EE optimum switches AN off);
* ``dinkelbach_ee``   general AN design with a minimum AN power and a Bob
  SINR floor, solved by Dinkelbach iterations whose parametric subproblems
  are handled by a convex-concave procedure (``ccp_stage``);
* ``zf_siso`` / ``zf_miso``  AN restricted to the null space of Bob's jammer
  channel; the SISO case has a closed form up to a scalar bisection.

Internally every problem is solved in scaled units: precoders are divided by
the amplitude headroom and received powers by Bob's normalized noise, which
keeps the convex subproblems well conditioned.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .channel import ChannelState, RoomScenario, Scheme
from .kernel import ConcaveLogIneq, ConvexProgram, ConvexQuadIneq, LinearIneq, SecondOrderCone
from .metrics import (PI_E, PrecoderSolution, bob_rate_raw, delta_dc, ee_bob, fixed_power,
                      min_see)

LN2 = math.log(2.0)
LOG2_PIE = math.log2(PI_E)

SOLVED = "Solved"
INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class DesignConfig:
    """Design thresholds and iteration limits.

    ``delta_b`` is Bob's minimum SINR as a linear ratio (0 disables the
    constraint) and ``p_th`` the minimum AN power in A^2.
    """

    delta_b: float = 1.0
    p_th: float = 0.0
    rho: float | None = None
    eps_dinkelbach: float = 1e-3
    eps_ccp: float = 1e-3
    max_iter_dinkelbach: int = 30
    max_iter_ccp: int = 60

    def __post_init__(self):
        if not (self.eps_dinkelbach > 0 and self.eps_ccp > 0):
            raise ValueError("tolerances must be positive")
        if self.p_th < 0 or self.delta_b < 0:
            raise ValueError("p_th and delta_b must be non-negative")

    @classmethod
    def from_rho(cls, scenario: RoomScenario, rho: float, delta_b_db: float = 0.0, **kw):
        """AN power floor ``(N_T - 1) (rho I_DC)^2``."""
        if not 0 <= rho <= 1:
            raise ValueError("rho must lie in [0, 1]")
        p_th = (scenario.n_luminaires - 1) * (rho * scenario.dc_bias_Idc) ** 2
        return cls(delta_b=10 ** (delta_b_db / 10), p_th=p_th, rho=rho, **kw)


@dataclass
class DesignOutcome:
    status: str
    sol: PrecoderSolution | None
    ee_bob: float = math.nan
    resultant_see: float = math.nan
    dinkelbach_iters: int = 0
    ccp_iters_per_stage: list = field(default_factory=list)
    lambda_trace: list = field(default_factory=list)
    dinkelbach_errors: list = field(default_factory=list)
    ccp_errors: list = field(default_factory=list)
    message: str = ""
    slack_gap: float = math.nan  # |c1 - log2(2 p1 + pi e)| at the returned iterate

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


def _finish(scenario, channel, sol, **kw) -> DesignOutcome:
    see = min_see(scenario, channel, sol) if channel.n_eves else math.nan
    return DesignOutcome(SOLVED, sol, ee_bob(scenario, channel, sol), see, **kw)


# ---------------------------------------------------------------------------
# null-space AN

def zf_basis(h_bar) -> np.ndarray:
    """Unit vector in the null space of ``h_bar'`` (all-ones projection)."""
    h = np.asarray(h_bar, float)
    n = h.shape[0]
    if n < 2:
        raise ValueError("null space needs dimension >= 2")
    hh = h @ h
    proj = np.eye(n) if hh == 0 else np.eye(n) - np.outer(h, h) / hh
    w = proj @ np.ones(n)
    if np.linalg.norm(w) < 1e-9 * math.sqrt(n):
        w = proj[:, 0]
    return w / np.linalg.norm(w)


def zf_objective(V, h, s2, fixed, zeta, phi):
    """Bob's EE with null-space AN as a function of V = v^2."""
    a = 2 * h * h / (PI_E * s2)
    return np.log2(1 + a * V) / (2 * (fixed + zeta * (V + phi)))


def zf_derivative_numerator(V, h, s2, fixed, zeta, phi):
    """Numerator of d(EE)/dV; strictly decreasing in V."""
    a = 2 * h * h / (PI_E * s2)
    b = 2 * (fixed + zeta * phi)
    return a * (b + 2 * zeta * V) / (LN2 * (1 + a * V)) - 2 * zeta * np.log2(1 + a * V)


@dataclass
class ZFScalarResult:
    V: float
    ee: float
    case: str  # "interior", "upper", "lower"


def zf_optimal_V(channel: ChannelState, scenario: RoomScenario, cfg: DesignConfig,
                 phi: float | None = None) -> ZFScalarResult:
    """Optimal data power V = v^2 for a SISO link with null-space AN of power ``phi``.

    ``phi`` defaults to the AN floor ``cfg.p_th`` (EE decreases in AN power).
    """
    if channel.n_info != 1:
        raise ValueError("closed-form ZF design applies to SISO schemes only")
    phi = cfg.p_th if phi is None else phi
    delta = delta_dc(scenario.dc_bias_Idc, scenario.i_min, scenario.i_max)
    h = float(channel.bob_alice_gain[0])
    s2 = channel.bob_noise_norm
    fixed = fixed_power(scenario)
    zeta = scenario.power.zeta
    hi = delta ** 2
    if h == 0:
        if cfg.delta_b > 0:
            raise ValueError("infeasible: Alice is invisible to Bob")
        return ZFScalarResult(0.0, 0.0, "lower")
    lo = cfg.delta_b * s2 / h ** 2
    if lo > hi:
        raise ValueError("infeasible: SINR floor exceeds the amplitude limit")

    def f(V):
        return zf_derivative_numerator(V, h, s2, fixed, zeta, phi)

    if f(hi) > 0:
        V, case = hi, "upper"
    elif f(lo) < 0:
        V, case = lo, "lower"
    else:
        a, b = lo, hi
        while b - a > 1e-10 * hi:
            mid = 0.5 * (a + b)
            if f(mid) >= 0:
                a = mid
            else:
                b = mid
        V, case = 0.5 * (a + b), "interior"
    return ZFScalarResult(V, float(zf_objective(V, h, s2, fixed, zeta, phi)), case)


# ---------------------------------------------------------------------------
# scaled problem data

class _Scaled:
    """Bob's link in units of the amplitude headroom and Bob's noise."""

    def __init__(self, channel: ChannelState, scenario: RoomScenario):
        self.delta = delta_dc(scenario.dc_bias_Idc, scenario.i_min, scenario.i_max)
        if self.delta <= 0:
            raise ValueError("zero modulation headroom")
        sd = math.sqrt(channel.bob_noise_norm)
        self.h = channel.bob_alice_gain * self.delta / sd
        self.hbar = channel.bob_jammer_gains * self.delta / sd
        self.fixed = fixed_power(scenario)
        self.zd2 = scenario.power.zeta * self.delta ** 2
        self.ni = self.h.size
        self.na = self.hbar.size

    def rate(self, xv, xw):
        return float(bob_rate_raw((self.h @ xv) ** 2, (self.hbar @ xw) ** 2, 1.0))

    def power(self, xv, xw):
        return self.fixed + self.zd2 * float(xv @ xv + xw @ xw)


def max_an_norm2(hbar, r2: float) -> tuple[float, np.ndarray | None]:
    """Max of ||w||^2 over {|w_n| <= 1, (hbar'w)^2 <= r2}, by vertex enumeration."""
    hbar = np.asarray(hbar, float)
    n = hbar.size
    if r2 < 0:
        return -math.inf, None
    r = math.sqrt(r2) if math.isfinite(r2) else math.inf
    best, arg = -math.inf, None
    for signs in itertools.product((-1.0, 1.0), repeat=n):
        w = np.array(signs)
        if abs(hbar @ w) <= r * (1 + 1e-12) and w @ w > best:
            best, arg = float(w @ w), w
    if math.isfinite(r):
        for j in range(n):
            if hbar[j] == 0:
                continue
            rest = [i for i in range(n) if i != j]
            for signs in itertools.product((-1.0, 1.0), repeat=n - 1):
                for target in (r, -r):
                    w = np.zeros(n)
                    w[rest] = signs
                    num = target - hbar[rest] @ w[rest]
                    if abs(num) > abs(hbar[j]):
                        continue
                    w[j] = num / hbar[j]
                    if w @ w > best:
                        best, arg = float(w @ w), w
    return best, arg


def p2_feasible(channel: ChannelState, scenario: RoomScenario, cfg: DesignConfig):
    """Exact feasibility of the general AN design: ``(feasible, reason, w_vertex)``.

    ``w_vertex`` (scaled) maximises AN power subject to Bob's SINR floor.
    """
    sc = _Scaled(channel, scenario)
    sig_max = float(np.sum(np.abs(sc.h)))  # max h'v over the amplitude box
    if cfg.delta_b > 0:
        r2 = sig_max ** 2 / cfg.delta_b - 1.0
        if r2 < 0:
            return False, "SINR floor unreachable at full amplitude", None
    else:
        r2 = math.inf
    p_th = cfg.p_th / sc.delta ** 2
    if p_th > sc.na:
        return False, "AN power floor exceeds the amplitude limits", None
    best, w = max_an_norm2(sc.hbar, r2)
    if best < p_th:
        return False, "no AN precoder meets both the SINR and power floors", None
    return True, "", w


def zf_feasible(channel: ChannelState, scenario: RoomScenario, cfg: DesignConfig):
    sc = _Scaled(channel, scenario)
    wt = zf_basis(channel.bob_jammer_gains)
    if cfg.p_th / sc.delta ** 2 > 1.0 / np.max(np.abs(wt)) ** 2:
        return False, "AN power floor exceeds the null-space amplitude limit"
    if cfg.delta_b > 0 and float(np.sum(sc.h)) ** 2 < cfg.delta_b:
        return False, "SINR floor unreachable at full amplitude"
    return True, ""


# ---------------------------------------------------------------------------
# convex-concave procedure on the parametric subproblem

class _Subproblem:
    """Variable layout and convex restriction builder for one AN mode.

    Modes: ``"free"`` (v, w, c1, c2, p1, p2), ``"off"`` (v, c1, p1) and
    ``"zf"`` (v, phi, c1, p1) with w = sqrt(phi) * w_tilde.
    """

    def __init__(self, sc: _Scaled, cfg: DesignConfig, mode: str, w_tilde=None):
        self.sc = sc
        self.mode = mode
        self.delta_b = cfg.delta_b
        self.p_th = cfg.p_th / sc.delta ** 2
        self.w_tilde = w_tilde
        ni, na = sc.ni, sc.na
        self.iv = slice(0, ni)
        if mode == "free":
            self.iw = slice(ni, ni + na)
            k = ni + na
            self.ic1, self.ic2, self.ip1, self.ip2 = k, k + 1, k + 2, k + 3
            self.n = k + 4
        elif mode == "zf":
            self.iphi = ni
            self.ic1, self.ip1 = ni + 1, ni + 2
            self.n = ni + 3
        elif mode == "off":
            self.ic1, self.ip1 = ni, ni + 1
            self.n = ni + 2
        else:
            raise ValueError(f"unknown AN mode {mode!r}")

    # -- physical views of a scaled iterate --------------------------------
    def split(self, x):
        xv = x[self.iv]
        if self.mode == "free":
            return xv, x[self.iw], x[self.ip2]
        if self.mode == "zf":
            phi = max(x[self.iphi], 0.0)
            return xv, math.sqrt(phi) * self.w_tilde, 0.0
        return xv, np.zeros(self.sc.na), 0.0

    def true_values(self, x):
        xv, xw, _ = self.split(x)
        return self.sc.rate(xv, xw), self.sc.power(xv, xw)

    def slack_gap(self, x) -> float:
        return abs(x[self.ic1] - math.log2(2 * x[self.ip1] + PI_E))

    def lin_point(self, x):
        """Quantities the next restriction is linearised around."""
        xv, xw, p2 = self.split(x)
        if self.mode == "zf":
            return xv.copy(), np.array([x[self.iphi]]), 0.0
        return xv.copy(), xw.copy(), float(p2)

    def rel_change(self, lp_new, lp_old) -> float:
        """Largest relative change of (v, w, p2) between CCP iterates."""
        errs = []
        for new, old, floor in ((lp_new[0], lp_old[0], 1e-3), (lp_new[1], lp_old[1], 1e-3)):
            if new.size:
                errs.append(np.linalg.norm(new - old) / max(np.linalg.norm(new), floor))
        if self.mode == "free":
            errs.append(abs(lp_new[2] - lp_old[2]) / max(abs(lp_new[2]), 1.0))
        return float(max(errs))

    # -- the convex restriction ---------------------------------------------
    def program(self, lam, lp) -> ConvexProgram:
        sc, n = self.sc, self.n
        xv0, xw0, p20 = lp
        c = np.zeros(n)
        P = np.zeros((n, n))
        c[self.ic1] = 0.5
        const = -lam * sc.fixed
        P[self.iv, self.iv] = lam * sc.zd2 * np.eye(sc.ni)
        if self.mode == "free":
            c[self.ic2] = -0.5
            P[self.iw, self.iw] = lam * sc.zd2 * np.eye(sc.na)
        else:
            const -= 0.5 * LOG2_PIE
            if self.mode == "zf":
                c[self.iphi] = -lam * sc.zd2
        cons = []

        # c1 <= log2(2 p1 + pi e)
        g = np.zeros(n)
        g[self.ic1] = 1.0
        a = np.zeros(n)
        a[self.ip1] = 2.0
        cons.append(ConcaveLogIneq(g, 0.0, 1.0, a, PI_E))

        # p1 <= first-order expansion of (h'v)^2 + (hbar'w)^2
        row = np.zeros(n)
        row[self.ip1] = 1.0
        sv = float(sc.h @ xv0)
        row[self.iv] = -2 * sv * sc.h
        rhs = -sv ** 2
        if self.mode == "free":
            sw = float(sc.hbar @ xw0)
            row[self.iw] = -2 * sw * sc.hbar
            rhs -= sw ** 2
        rows, rhss = [row], [rhs]

        if self.mode == "free":
            # c2 >= tangent of log2(pi e (p2/3 + 1)) at p20
            slope = 1.0 / (LN2 * (p20 + 3.0))
            row = np.zeros(n)
            row[self.ip2] = slope
            row[self.ic2] = -1.0
            rows.append(row)
            rhss.append(slope * p20 - math.log2(PI_E * (p20 / 3 + 1)))
            # p2 >= (hbar'w)^2
            Q = np.zeros((n, n))
            Q[self.iw, self.iw] = np.outer(sc.hbar, sc.hbar)
            a = np.zeros(n)
            a[self.ip2] = -1.0
            cons.append(ConvexQuadIneq(Q, a, 0.0))
            if self.p_th > 0:
                # ||w||^2 >= p_th, linearised at w0
                row = np.zeros(n)
                row[self.iw] = -2 * xw0
                rows.append(row)
                rhss.append(-self.p_th - xw0 @ xw0)
        elif self.mode == "zf":
            wt_inf = np.max(np.abs(self.w_tilde))
            row = np.zeros(n)
            row[self.iphi] = -1.0
            rows.append(row)
            rhss.append(-self.p_th)
            row = np.zeros(n)
            row[self.iphi] = 1.0
            rows.append(row)
            rhss.append(1.0 / wt_inf ** 2)

        if self.delta_b > 0:
            # sqrt((hbar'w)^2 + 1) <= h'v / sqrt(delta_b)
            A = np.zeros((2, n))
            if self.mode == "free":
                A[0, self.iw] = sc.hbar
            cvec = np.zeros(n)
            cvec[self.iv] = sc.h / math.sqrt(self.delta_b)
            cons.append(SecondOrderCone(A, np.array([0.0, 1.0]), cvec, 0.0))

        # loose bounds on the epigraph variables keep the feasible set compact
        row = np.zeros(n)
        row[self.ip1] = -1.0
        rows.append(row)
        rhss.append(1.0)
        row = np.zeros(n)
        row[self.ic1] = -1.0
        rows.append(row)
        rhss.append(0.0)
        if self.mode == "free":
            p2_max = float(np.sum(np.abs(sc.hbar))) ** 2 + 1.0
            row = np.zeros(n)
            row[self.ip2] = 1.0
            rows.append(row)
            rhss.append(p2_max)
            row = np.zeros(n)
            row[self.ic2] = 1.0
            rows.append(row)
            rhss.append(math.log2(PI_E * (p2_max / 3 + 1)) + 1.0)

        # amplitude box
        box = np.zeros((2 * sc.ni, n))
        box[:sc.ni, self.iv] = np.eye(sc.ni)
        box[sc.ni:, self.iv] = -np.eye(sc.ni)
        rows.extend(box)
        rhss.extend([1.0] * (2 * sc.ni))
        if self.mode == "free":
            box = np.zeros((2 * sc.na, n))
            box[:sc.na, self.iw] = np.eye(sc.na)
            box[sc.na:, self.iw] = -np.eye(sc.na)
            rows.extend(box)
            rhss.extend([1.0] * (2 * sc.na))
        cons.append(LinearIneq(np.array(rows), np.array(rhss)))
        return ConvexProgram(n, c, P, cons, const=const)

    def initial_guess(self, lp):
        """Phase-I seed with the slack variables near their defining values."""
        xv0, xw0, p20 = lp
        x = np.zeros(self.n)
        x[self.iv] = xv0
        p1 = float((self.sc.h @ xv0) ** 2)
        if self.mode == "free":
            x[self.iw] = xw0
            p1 += float((self.sc.hbar @ xw0) ** 2)
            x[self.ip2] = p20 + 1.0
            x[self.ic2] = math.log2(PI_E * (p20 / 3 + 1)) + 1.0
        elif self.mode == "zf":
            x[self.iphi] = xw0[0]
        x[self.ip1] = 0.5 * p1
        x[self.ic1] = math.log2(p1 + PI_E) - 1.0
        return x


@dataclass
class CCPResult:
    x: np.ndarray
    lin_point: tuple
    iterations: int
    errors: list
    objectives: list


class CCPFailure(RuntimeError):
    pass


def ccp_stage(sub: _Subproblem, lam: float, lp, x_start=None, eps: float = 1e-3,
              max_iter: int = 60) -> CCPResult:
    """Convex-concave procedure for the parametric subproblem at ``lam``.

    ``lp`` is the linearisation point ``(v, w, p2)`` (scaled) and ``x_start``
    an optional strictly feasible point of the first restriction.
    """
    x_prev = x_start if x_start is not None else sub.initial_guess(lp)
    errors, objs = [], []
    start = x_prev
    for j in range(1, max_iter + 1):
        rep = kernel.solve(sub.program(lam, lp), x0=start)
        if rep.status is kernel.Status.INFEASIBLE:
            raise CCPFailure("convex restriction infeasible")
        x = rep.x
        objs.append(rep.objective_value)
        lp_new = sub.lin_point(x)
        err = sub.rel_change(lp_new, lp)
        errors.append(err)
        lp, x_prev = lp_new, x
        # pull the warm start off the boundary toward the first central point
        start = [0.5 * (x + rep.first_center), x]
        if err <= eps:
            break
    return CCPResult(x_prev, lp, j, errors, objs)


# ---------------------------------------------------------------------------
# Dinkelbach outer loop

def _dinkelbach(sub: _Subproblem, cfg: DesignConfig, lp0):
    lam = 0.0
    lam_trace = [0.0]
    din_err, ccp_iters, ccp_errs = [], [], []
    x, lp = None, lp0
    for i in range(1, cfg.max_iter_dinkelbach + 1):
        res = ccp_stage(sub, lam, lp, x, cfg.eps_ccp, cfg.max_iter_ccp)
        ccp_iters.append(res.iterations)
        ccp_errs.append(res.errors)
        rate, power = sub.true_values(res.x)
        gap = rate - lam * power
        din_err.append(gap)
        if gap >= 0 or x is None:
            x, lp = res.x, res.lin_point
            lam = rate / power
        # otherwise the stage found nothing better than the incumbent
        lam_trace.append(lam)
        if gap <= cfg.eps_dinkelbach:
            break
    return x, lam_trace, din_err, ccp_iters, ccp_errs


def _to_solution(sub: _Subproblem, x, channel: ChannelState, zf: bool) -> PrecoderSolution:
    sc = sub.sc
    xv, xw, _ = sub.split(x)
    v = xv * sc.delta
    if float(sc.h @ xv) < 0:
        v = -v
    return PrecoderSolution(channel.scheme, v, xw * sc.delta, zf_flag=zf)


def default_start(sc: _Scaled, cfg: DesignConfig):
    """Full-amplitude data precoder and an evenly spread AN precoder at the floor."""
    hmax = np.max(np.abs(sc.h))
    xv0 = sc.h / hmax if hmax > 0 else np.ones(sc.ni)
    level = min(math.sqrt(cfg.p_th / sc.delta ** 2 / sc.na), 1.0)
    return xv0, np.full(sc.na, level), None


def dinkelbach_ee(channel: ChannelState, scenario: RoomScenario, cfg: DesignConfig,
                  scheme=None, an_mode: str = "free", start=None) -> DesignOutcome:
    """Maximise Bob's EE with AN power and SINR floors (general AN design).

    ``an_mode="off"`` pins the AN to zero and ``"zf"`` restricts it to the
    null space of Bob's jammer channel. ``start`` optionally overrides the
    first linearisation point with physical ``(v, w)``.
    """
    sc = _Scaled(channel, scenario)
    w_tilde = zf_basis(channel.bob_jammer_gains) if an_mode == "zf" else None
    if an_mode == "free":
        ok, why, w_vertex = p2_feasible(channel, scenario, cfg)
    elif an_mode == "zf":
        (ok, why), w_vertex = zf_feasible(channel, scenario, cfg), None
    else:
        ok = cfg.delta_b == 0 or float(np.sum(sc.h)) ** 2 >= cfg.delta_b
        why, w_vertex = "SINR floor unreachable", None
    if not ok:
        return DesignOutcome(INFEASIBLE, None, message=why)
    sub = _Subproblem(sc, cfg, an_mode, w_tilde)

    starts = []
    if start is not None:
        xv0 = np.atleast_1d(np.asarray(start[0], float)) / sc.delta
        xw0 = np.asarray(start[1], float) / sc.delta
        starts.append((xv0, xw0, float((sc.hbar @ xw0) ** 2)))
    else:
        xv0, xw0, _ = default_start(sc, cfg)
        if an_mode == "zf":
            starts.append((xv0, np.array([sub.p_th]), 0.0))
        elif an_mode == "off":
            starts.append((xv0, np.zeros(sc.na), 0.0))
        else:
            starts.append((xv0, xw0, float((sc.hbar @ xw0) ** 2)))
            if w_vertex is not None:
                starts.append((np.ones(sc.ni) * np.sign(sc.h + 1e-300), w_vertex,
                               float((sc.hbar @ w_vertex) ** 2)))
    if an_mode == "zf" and start is not None:
        starts = [(starts[0][0], np.array([max(sub.p_th, float(starts[0][1] @ starts[0][1]))]), 0.0)]

    last_err = ""
    for lp0 in starts:
        try:
            x, lam_trace, din_err, ccp_iters, ccp_errs = _dinkelbach(sub, cfg, lp0)
        except CCPFailure as exc:
            last_err = str(exc)
            continue
        sol = _to_solution(sub, x, channel, an_mode == "zf")
        return _finish(scenario, channel, sol, dinkelbach_iters=len(din_err),
                       ccp_iters_per_stage=ccp_iters, lambda_trace=lam_trace,
                       dinkelbach_errors=din_err, ccp_errors=ccp_errs,
                       slack_gap=sub.slack_gap(x))
    return DesignOutcome(INFEASIBLE, None, message=f"phase I failed: {last_err}")


def solve_p1_noan(channel: ChannelState, scenario: RoomScenario, cfg: DesignConfig | None = None
                  ) -> DesignOutcome:
    """EE optimum without AN (no SINR or AN-power floor)."""
    base = cfg or DesignConfig()
    cfg = DesignConfig(delta_b=0.0, p_th=0.0, eps_dinkelbach=base.eps_dinkelbach,
                       eps_ccp=base.eps_ccp, max_iter_dinkelbach=base.max_iter_dinkelbach,
                       max_iter_ccp=base.max_iter_ccp)
    if channel.n_info == 1:
        res = zf_optimal_V(channel, scenario, cfg, phi=0.0)
        sol = PrecoderSolution(channel.scheme, [math.sqrt(res.V)], np.zeros(channel.n_an))
        return _finish(scenario, channel, sol)
    return dinkelbach_ee(channel, scenario, cfg, an_mode="off")


def zf_siso(channel: ChannelState, scenario: RoomScenario, cfg: DesignConfig) -> DesignOutcome:
    """Null-space AN for a SISO scheme: AN power at its floor, V by bisection."""
    ok, why = zf_feasible(channel, scenario, cfg)
    if not ok:
        return DesignOutcome(INFEASIBLE, None, message=why)
    try:
        res = zf_optimal_V(channel, scenario, cfg)
    except ValueError as exc:
        return DesignOutcome(INFEASIBLE, None, message=str(exc))
    w = math.sqrt(cfg.p_th) * zf_basis(channel.bob_jammer_gains)
    sol = PrecoderSolution(channel.scheme, [math.sqrt(res.V)], w, zf_flag=True)
    return _finish(scenario, channel, sol)


def zf_miso(channel: ChannelState, scenario: RoomScenario, cfg: DesignConfig) -> DesignOutcome:
    """Null-space AN for MISO: Dinkelbach + CCP over (v, AN power)."""
    if channel.scheme is not Scheme.MISO:
        raise ValueError("zf_miso needs a MISO channel")
    return dinkelbach_ee(channel, scenario, cfg, an_mode="zf")


def design_unknown(channel: ChannelState, scenario: RoomScenario, cfg: DesignConfig,
                   variant: str = "an") -> DesignOutcome:
    """Dispatch ``variant`` in {"an", "zf", "noan"} for the channel's scheme."""
    if variant == "noan":
        return solve_p1_noan(channel, scenario, cfg)
    if variant == "zf":
        return zf_miso(channel, scenario, cfg) if channel.scheme is Scheme.MISO \
            else zf_siso(channel, scenario, cfg)
    if variant == "an":
        return dinkelbach_ee(channel, scenario, cfg)
    raise ValueError(f"unknown design variant {variant!r}")
