"""Closed-form link quantities: amplitude headroom, SINR, capacity bounds,
power consumption, energy efficiency and secrecy energy efficiency.

All precoders are in amperes. Capacities are in bit/s/Hz and efficiencies in
bit/J/Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelState, RoomScenario, Scheme

PI_E = math.pi * math.e


def delta_dc(i_dc: float, i_min: float, i_max: float) -> float:
    """Largest modulation amplitude that keeps the LED drive current linear."""
    if not i_min <= i_dc <= i_max:
        raise ValueError("require i_min <= i_dc <= i_max")
    return min(i_dc - i_min, i_max - i_dc)


@dataclass(frozen=True, eq=False)
class PrecoderSolution:
    """Information and AN precoders for one scheme.

    ``info_precoder`` is always 1-D (length one for SISO schemes).
    ``an_precoder`` is a vector for a single AN stream (unknown Eve CSI) or a
    matrix with one column per Eve (known Eve CSI).
    """

    scheme: Scheme
    info_precoder: np.ndarray
    an_precoder: np.ndarray
    zf_flag: bool = False

    def __post_init__(self):
        object.__setattr__(self, "info_precoder", np.atleast_1d(np.asarray(self.info_precoder, float)))
        object.__setattr__(self, "an_precoder", np.asarray(self.an_precoder, float))

    @property
    def an_matrix(self) -> np.ndarray:
        w = self.an_precoder
        return w.reshape(-1, 1) if w.ndim == 1 else w

    def satisfies_amplitude(self, delta: float, tol: float = 1e-8) -> bool:
        """Check the per-LED amplitude limits (row-wise L1 for AN matrices)."""
        ok_v = np.all(np.abs(self.info_precoder) <= delta + tol)
        ok_w = np.all(np.sum(np.abs(self.an_matrix), axis=1) <= delta + tol)
        return bool(ok_v and ok_w)


def _parts(channel: ChannelState, sol: PrecoderSolution, who):
    """(signal amplitude, interference power, normalized noise) for a receiver."""
    v = sol.info_precoder
    W = sol.an_matrix
    if who == "bob":
        h, hbar, s2 = channel.bob_alice_gain, channel.bob_jammer_gains, channel.bob_noise_norm
    else:
        k = int(who)
        h, hbar, s2 = channel.eve_alice_gains[k], channel.eve_jammer_gains[k], channel.eve_noise_norm[k]
    sig = float(h @ v)
    interf = float(np.sum((hbar @ W) ** 2)) if W.size else 0.0
    return sig, interf, float(s2)


def sinr(channel: ChannelState, sol: PrecoderSolution, who="bob") -> float:
    """SINR of Bob (``who="bob"``) or of Eve ``who=k``."""
    sig, interf, s2 = _parts(channel, sol, who)
    return sig ** 2 / (interf + s2)


def bob_rate_raw(sig2, interf, s2):
    """Unclamped lower-bound rate for signal power, interference and noise."""
    return 0.5 * np.log2((2 * (sig2 + interf) + PI_E * s2) / (PI_E * (interf / 3 + s2)))


def eve_rate_raw(sig2, interf, s2):
    """Upper-bound rate of an eavesdropper's channel."""
    return 0.5 * np.log2(PI_E * ((sig2 + interf) / 3 + s2) / (2 * interf + PI_E * s2))


def capacity_lower_bob(channel: ChannelState, sol: PrecoderSolution) -> float:
    sig, interf, s2 = _parts(channel, sol, "bob")
    return max(0.0, float(bob_rate_raw(sig ** 2, interf, s2)))


def capacity_upper_eve(channel: ChannelState, sol: PrecoderSolution, k: int) -> float:
    sig, interf, s2 = _parts(channel, sol, k)
    return float(eve_rate_raw(sig ** 2, interf, s2))


def fixed_power(scenario: RoomScenario) -> float:
    """Circuit plus illumination power, independent of the precoders."""
    pw = scenario.power
    return pw.p_circuit + scenario.n_luminaires * pw.u_leds * scenario.dc_bias_Idc


def total_power(scenario: RoomScenario, sol: PrecoderSolution) -> float:
    signal = float(np.sum(sol.info_precoder ** 2) + np.sum(sol.an_matrix ** 2))
    return fixed_power(scenario) + scenario.power.zeta * signal


def ee_bob(scenario: RoomScenario, channel: ChannelState, sol: PrecoderSolution) -> float:
    return capacity_lower_bob(channel, sol) / total_power(scenario, sol)


def secrecy_rate_k(scenario: RoomScenario, channel: ChannelState, sol: PrecoderSolution, k: int) -> float:
    """Secrecy-rate lower bound of the wiretap pair (Bob, Eve k), floored at 0."""
    return max(0.0, capacity_lower_bob(channel, sol) - capacity_upper_eve(channel, sol, k))


def min_see(scenario: RoomScenario, channel: ChannelState, sol: PrecoderSolution) -> float:
    """Secrecy energy efficiency of the weakest wiretap pair."""
    if channel.n_eves == 0:
        raise ValueError("min_see needs at least one eavesdropper")
    worst = min(secrecy_rate_k(scenario, channel, sol, k) for k in range(channel.n_eves))
    return worst / total_power(scenario, sol)
