"""Monte Carlo harness: random receiver placement, scheme comparison, sweeps.

Every realization draws its own generator from a ``SeedSequence`` spawned off
the sweep seed, so results do not depend on the worker count or on the order
in which realizations finish. One placement is shared by all sweep values and
schemes of a realization (common random numbers), which keeps scheme
comparisons paired.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import RoomScenario, Scheme, build_channel, receiver_gains
from .known_csi import MaxMinConfig, maxmin_see
from .metrics import min_see, sinr
from .unknown_csi import DesignConfig, design_unknown, p2_feasible, zf_feasible

log = logging.getLogger(__name__)

SWEEP_VARIABLES = ("p_t_dbm", "rho", "k_eves")
CSI_MODES = ("unknown", "known")
VARIANTS = {"unknown": ("an", "zf", "noan"), "known": ("an", "noan")}
SINR_GAP_CAP_DB = 100.0


@dataclass(frozen=True)
class SchemeVariant:
    """A transmission scheme paired with a design variant (``an``, ``zf`` or ``noan``)."""

    scheme: Scheme
    variant: str = "an"

    @classmethod
    def parse(cls, text: str) -> "SchemeVariant":
        """Parse ``"selective_siso"`` or ``"miso:zf"``."""
        name, _, variant = text.partition(":")
        return cls(Scheme(name.strip()), variant.strip() or "an")

    @property
    def label(self) -> str:
        return self.scheme.value if self.variant == "an" else f"{self.scheme.value}:{self.variant}"


DEFAULT_SCHEMES = tuple(SchemeVariant(s) for s in Scheme)


@dataclass(frozen=True)
class SweepSpec:
    """One Monte Carlo sweep.

    ``variable`` names the swept quantity and ``values`` its grid. The other
    two operating-point quantities are held at ``p_t_dbm``, ``rho`` and
    ``k_eves``. ``feasibility_only`` skips the optimisation and records only
    the exact feasibility tests (unknown CSI).
    """

    variable: str
    values: tuple
    n_realizations: int = 200
    rng_seed: int = 0
    schemes: tuple = DEFAULT_SCHEMES
    csi_mode: str = "unknown"
    scenario: RoomScenario = field(default_factory=RoomScenario)
    p_t_dbm: float = 30.0
    rho: float = 0.2
    delta_b_db: float = 0.0
    k_eves: int = 1
    eps: float = 1e-3
    max_iter_dinkelbach: int = 30
    max_iter_ccp: int = 60
    max_iter_ccp_known: int = 40
    feasibility_only: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "schemes", tuple(
            s if isinstance(s, SchemeVariant) else SchemeVariant.parse(s) for s in self.schemes))
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if self.csi_mode not in CSI_MODES:
            raise ValueError(f"csi_mode must be one of {CSI_MODES}")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if not self.schemes:
            raise ValueError("sweep needs at least one scheme")
        for s in self.schemes:
            if s.variant not in VARIANTS[self.csi_mode]:
                raise ValueError(f"variant {s.variant!r} not available with {self.csi_mode} CSI")
        if self.variable == "k_eves" and any(int(k) != k or k < 1 for k in self.values):
            raise ValueError("eavesdropper counts must be positive integers")
        if self.variable == "rho" and any(not 0 <= r <= 1 for r in self.values):
            raise ValueError("rho values must lie in [0, 1]")
        if not 0 <= self.rho <= 1:
            raise ValueError("rho must lie in [0, 1]")
        if self.k_eves < 1:
            raise ValueError("k_eves must be >= 1")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if min(self.max_iter_dinkelbach, self.max_iter_ccp, self.max_iter_ccp_known) < 1:
            raise ValueError("iteration limits must be >= 1")

    def point(self, value):
        """(p_t_dbm, rho, k_eves) at one sweep value."""
        p, r, k = self.p_t_dbm, self.rho, self.k_eves
        if self.variable == "p_t_dbm":
            p = float(value)
        elif self.variable == "rho":
            r = float(value)
        else:
            k = int(value)
        return p, r, k

    @property
    def max_eves(self) -> int:
        return max(int(v) for v in self.values) if self.variable == "k_eves" else self.k_eves


@dataclass
class Record:
    """Outcome of one design on one realization."""

    feasible: bool
    error: bool = False
    ee: float = math.nan
    see: float = math.nan
    sinr_gap_db: float = math.nan
    dinkelbach_iters: float = math.nan
    ccp_iters: float = math.nan
    trace: dict | None = None


@dataclass
class PointStats:
    n_realizations: int
    n_feasible: int
    n_errors: int
    feas_prob: float
    mean_ee: float
    mean_see: float
    mean_sinr_gap_db: float
    mean_dinkelbach_iters: float
    mean_ccp_iters: float
    n_paired: int


@dataclass
class ExperimentResult:
    spec: SweepSpec
    stats: dict  # (value, label) -> PointStats
    records: list  # realization -> {(value, label): Record}

    def rows(self):
        for value in self.spec.values:
            for s in self.spec.schemes:
                yield value, s, self.stats[(value, s.label)]

    def optimum(self, label: str, key: str = "mean_see"):
        """Sweep value with the largest mean of ``key`` for one scheme."""
        vals = [(getattr(self.stats[(v, label)], key), v) for v in self.spec.values]
        vals = [(m, v) for m, v in vals if not math.isnan(m)]
        return max(vals)[1] if vals else None


def place_receivers(rng: np.random.Generator, scenario: RoomScenario, k: int) -> np.ndarray:
    """Bob followed by ``k`` Eves, uniform over the floor at receiver height.

    Rows are ``(x, y, z)``. A receiver that sees no luminaire is redrawn.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    out = np.empty((k + 1, 3))
    hx, hy = scenario.length / 2, scenario.width / 2
    for i in range(k + 1):
        while True:
            xy = rng.uniform((-hx, -hy), (hx, hy))
            if np.any(receiver_gains(scenario, xy) > 0):
                break
        out[i] = (xy[0], xy[1], scenario.receiver_height)
    return out


def sinr_gap(channel, sol) -> float:
    """Bob's SINR over the strongest Eve's SINR in dB, capped at 100 dB."""
    bob = sinr(channel, sol, "bob")
    eve = max(sinr(channel, sol, k) for k in range(channel.n_eves))
    if bob <= 0:
        return -SINR_GAP_CAP_DB
    if eve <= 0:
        return SINR_GAP_CAP_DB
    gap = 10 * math.log10(bob) - 10 * math.log10(eve)
    return float(min(max(gap, -SINR_GAP_CAP_DB), SINR_GAP_CAP_DB))


def _design_record(spec: SweepSpec, sv: SchemeVariant, scenario, channel, rho) -> Record:
    if spec.csi_mode == "unknown":
        cfg = DesignConfig.from_rho(scenario, rho, spec.delta_b_db,
                                    eps_dinkelbach=spec.eps, eps_ccp=spec.eps,
                                    max_iter_dinkelbach=spec.max_iter_dinkelbach,
                                    max_iter_ccp=spec.max_iter_ccp)
        if spec.feasibility_only:
            if sv.variant == "noan":
                return Record(True)
            test = p2_feasible if sv.variant == "an" else zf_feasible
            return Record(bool(test(channel, scenario, cfg)[0]))
        out = design_unknown(channel, scenario, cfg, sv.variant)
        if not out.solved:
            return Record(False)
        ccp = list(out.ccp_iters_per_stage) or [math.nan]
        return Record(True, ee=out.ee_bob, see=out.resultant_see,
                      sinr_gap_db=sinr_gap(channel, out.sol),
                      dinkelbach_iters=out.dinkelbach_iters or math.nan,
                      ccp_iters=float(np.mean(ccp)),
                      trace={"dinkelbach": list(out.dinkelbach_errors),
                             "ccp": [list(e) for e in out.ccp_errors]})
    cfg = MaxMinConfig(eps_bisect=spec.eps, eps_ccp=spec.eps, max_iter_ccp=spec.max_iter_ccp_known,
                       use_an=sv.variant == "an")
    out = maxmin_see(channel, scenario, cfg)
    if not out.solved:
        return Record(False)
    return Record(True, ee=out.ee_bob, see=min_see(scenario, channel, out.sol),
                  sinr_gap_db=sinr_gap(channel, out.sol),
                  ccp_iters=float(np.mean([it for _, _, it in out.bisection_trace])))


def run_realization(spec: SweepSpec, index: int, seed_seq: np.random.SeedSequence | None = None):
    """All designs of one realization: ``{(value, label): Record}``."""
    seq = seed_seq if seed_seq is not None else np.random.SeedSequence(spec.rng_seed).spawn(index + 1)[index]
    rng = np.random.default_rng(seq)
    pos = place_receivers(rng, spec.scenario, spec.max_eves)
    out = {}
    for value in spec.values:
        p_dbm, rho, k = spec.point(value)
        scenario = spec.scenario.with_power_dbm(p_dbm)
        for sv in spec.schemes:
            try:
                channel = build_channel(scenario, pos[0, :2], pos[1:k + 1, :2], sv.scheme)
                rec = _design_record(spec, sv, scenario, channel, rho)
            except Exception as exc:  # a failed design never aborts the sweep
                log.warning("realization %d, %s=%s, %s: %s", index, spec.variable, value,
                            sv.label, exc)
                rec = Record(False, error=True)
            out[(value, sv.label)] = rec
    return out


def _run_one(args):
    spec, index, seq = args
    return index, run_realization(spec, index, seq)


def _nanmean(xs):
    xs = [x for x in xs if not math.isnan(x)]
    return float(np.mean(xs)) if xs else math.nan


def summarize(spec: SweepSpec, records: list) -> dict:
    stats = {}
    for value in spec.values:
        recs = {s.label: [r[(value, s.label)] for r in records] for s in spec.schemes}
        n = len(records)
        # SEE is averaged over realizations feasible for every compared scheme
        paired = [i for i in range(n) if all(recs[s.label][i].feasible for s in spec.schemes)]
        for s in spec.schemes:
            rs = recs[s.label]
            feas = [r for r in rs if r.feasible]
            n_err = sum(r.error for r in rs)
            denom = n - n_err
            stats[(value, s.label)] = PointStats(
                n_realizations=n,
                n_feasible=len(feas),
                n_errors=n_err,
                feas_prob=len(feas) / denom if denom else math.nan,
                mean_ee=_nanmean([r.ee for r in feas]),
                mean_see=_nanmean([rs[i].see for i in paired]),
                mean_sinr_gap_db=_nanmean([r.sinr_gap_db for r in feas]),
                mean_dinkelbach_iters=_nanmean([r.dinkelbach_iters for r in feas]),
                mean_ccp_iters=_nanmean([r.ccp_iters for r in feas]),
                n_paired=len(paired),
            )
    return stats


def run_sweep(spec: SweepSpec, workers: int = 1) -> ExperimentResult:
    """Run every realization (in ``workers`` processes) and reduce by index."""
    seqs = np.random.SeedSequence(spec.rng_seed).spawn(spec.n_realizations)
    jobs = [(spec, i, seqs[i]) for i in range(spec.n_realizations)]
    records = [None] * spec.n_realizations
    if workers <= 1:
        for job in jobs:
            i, rec = _run_one(job)
            records[i] = rec
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, rec in pool.map(_run_one, jobs, chunksize=1):
                records[i] = rec
    return ExperimentResult(spec, summarize(spec, records), records)
