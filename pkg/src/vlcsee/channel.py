"""Indoor VLC geometry, line-of-sight channel gains and receiver noise.

Luminaires point straight down and photodiodes straight up, so the angle of
irradiance equals the angle of incidence for every link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

ELEMENTARY_CHARGE = 1.602176634e-19  # C


class Scheme(str, Enum):
    """Transmission scheme: which luminaires carry data and which jam."""

    FIXED_SISO = "fixed_siso"
    SELECTIVE_SISO = "selective_siso"
    MISO = "miso"

    @property
    def is_siso(self) -> bool:
        return self is not Scheme.MISO


class DegenerateChannelError(ValueError):
    """Receiver sees no luminaire (all LoS gains are zero)."""


@dataclass(frozen=True)
class OpticalParams:
    """Photodiode, LED and noise parameters (defaults: typical indoor setup)."""

    active_area_Ar: float = 1e-4            # m^2
    semi_angle_half: float = 60.0           # deg
    fov_Psi: float = 60.0                   # deg
    filter_gain_Ts: float = 1.0
    refractive_index_kappa: float = 1.5
    responsivity_gamma: float = 0.54        # A/W
    conversion_eta: float = 0.44            # W/A
    bandwidth_Bmod: float = 20e6            # Hz
    ambient_photocurrent_chi: float = 10.93  # A/(m^2 sr)
    preamp_density_iamp: float = 5e-12     # A/sqrt(Hz)

    def __post_init__(self):
        for name, value in self.__dict__.items():
            # a dark room (no ambient light) is allowed
            dark_ok = name == "ambient_photocurrent_chi"
            if not (value >= 0 if dark_ok else value > 0):
                kind = "non-negative" if dark_ok else "strictly positive"
                raise ValueError(f"{name} must be {kind}, got {value}")
        if not 0 < self.fov_Psi <= 90:
            raise ValueError("fov_Psi must lie in (0, 90] degrees")
        if not 0 < self.semi_angle_half < 90:
            raise ValueError("semi_angle_half must lie in (0, 90) degrees")


@dataclass(frozen=True)
class PowerParams:
    """Circuit power, LED forward voltage and AC-resistance factor."""

    p_circuit: float = 8.0   # W
    u_leds: float = 3.3      # V
    zeta: float = 2.0        # R_AC / 3

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")


_R2 = math.sqrt(2.0)
DEFAULT_LUMINAIRES = ((-_R2, -_R2, 3.0), (_R2, -_R2, 3.0), (_R2, _R2, 3.0), (-_R2, _R2, 3.0))


def dbm_to_dc_bias(p_t_dbm: float, eta: float) -> float:
    """DC bias giving an average emitted optical power of `p_t_dbm` per luminaire."""
    return 10.0 ** ((p_t_dbm - 30.0) / 10.0) / eta


@dataclass(frozen=True)
class RoomScenario:
    """Room geometry, luminaire layout and operating point.

    Coordinates are centred on the floor; the footprint is
    ``[-length/2, length/2] x [-width/2, width/2]``.
    """

    length: float = 5.0
    width: float = 5.0
    height: float = 3.0
    luminaire_positions: tuple = DEFAULT_LUMINAIRES
    receiver_height: float = 0.5
    dc_bias_Idc: float = 1.0
    i_min: float = 0.0
    i_max: float = 2.0
    optical: OpticalParams = field(default_factory=OpticalParams)
    power: PowerParams = field(default_factory=PowerParams)

    def __post_init__(self):
        pos = tuple(tuple(float(c) for c in p) for p in self.luminaire_positions)
        object.__setattr__(self, "luminaire_positions", pos)
        if len(pos) < 2:
            raise ValueError("need at least two luminaires")
        for p in pos:
            if len(p) != 3:
                raise ValueError("luminaire positions must be 3-D points")
            if not math.isclose(p[2], self.height):
                raise ValueError("luminaires must be mounted on the ceiling (z = height)")
            if not self.inside_footprint(p[0], p[1]):
                raise ValueError(f"luminaire {p} lies outside the room footprint")
        if not self.i_min <= self.dc_bias_Idc <= self.i_max:
            raise ValueError("require i_min <= dc_bias_Idc <= i_max")
        if not 0 <= self.receiver_height < self.height:
            raise ValueError("receiver_height must lie between floor and ceiling")

    @property
    def n_luminaires(self) -> int:
        return len(self.luminaire_positions)

    @property
    def luminaires(self) -> np.ndarray:
        return np.asarray(self.luminaire_positions, dtype=float)

    def inside_footprint(self, x: float, y: float) -> bool:
        return abs(x) <= self.length / 2 + 1e-12 and abs(y) <= self.width / 2 + 1e-12

    def with_power_dbm(self, p_t_dbm: float) -> "RoomScenario":
        """Copy with I_DC set from an emitted power in dBm and I_max = 2 I_DC."""
        i_dc = dbm_to_dc_bias(p_t_dbm, self.optical.conversion_eta)
        return replace(self, dc_bias_Idc=i_dc, i_min=0.0, i_max=2.0 * i_dc)


def lambertian_order(semi_angle_half: float) -> float:
    """Lambertian emission order for a semi-angle at half illuminance (degrees)."""
    if not 0 < semi_angle_half < 90:
        raise ValueError("semi-angle must lie strictly between 0 and 90 degrees")
    return -math.log(2.0) / math.log(math.cos(math.radians(semi_angle_half)))


def channel_gain(tx_pos, rx_pos, optical: OpticalParams) -> float:
    """LoS DC gain between a downward luminaire and an upward photodiode."""
    tx = np.asarray(tx_pos, dtype=float)
    rx = np.asarray(rx_pos, dtype=float)
    diff = tx - rx
    dist = float(np.linalg.norm(diff))
    if dist == 0.0:
        raise ValueError("transmitter and receiver coincide")
    if diff[2] <= 0:
        raise ValueError("transmitter must be above the receiver")
    cos_psi = diff[2] / dist
    psi = math.degrees(math.acos(min(1.0, cos_psi)))
    if psi > optical.fov_Psi:
        return 0.0
    m = lambertian_order(optical.semi_angle_half)
    g = optical.refractive_index_kappa ** 2 / math.sin(math.radians(optical.fov_Psi)) ** 2
    return (optical.active_area_Ar * (m + 1) / (2 * math.pi * dist ** 2)
            * optical.filter_gain_Ts * g * cos_psi ** m * cos_psi)


def noise_variance(channel_gains, dc_bias: float, optical: OpticalParams) -> float:
    """Shot + ambient + preamplifier noise variance (A^2) at a receiver.

    The ambient-light term uses the modulation bandwidth as its bandwidth.
    """
    gains = np.asarray(channel_gains, dtype=float)
    if np.any(gains < 0):
        raise ValueError("channel gains must be non-negative")
    o = optical
    e = ELEMENTARY_CHARGE
    p_rx = o.conversion_eta * float(np.sum(gains)) * dc_bias
    shot = 2 * o.responsivity_gamma * e * p_rx * o.bandwidth_Bmod
    ambient = (4 * math.pi * e * o.active_area_Ar * o.responsivity_gamma
               * o.ambient_photocurrent_chi * (1 - math.cos(math.radians(o.fov_Psi)))
               * o.bandwidth_Bmod)
    amp = o.preamp_density_iamp ** 2 * o.bandwidth_Bmod
    return shot + ambient + amp


def normalized_noise(sigma2: float, optical: OpticalParams) -> float:
    """Noise variance referred to unit-variance-free uniform symbols."""
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    return sigma2 / ((optical.responsivity_gamma * optical.conversion_eta) ** 2 / 3.0)


@dataclass(frozen=True, eq=False)
class ChannelState:
    """Gains and normalized noise of Bob and the Eves for one scheme.

    ``bob_alice_gain`` holds the gains of the data-carrying luminaires (one
    entry for SISO schemes, all of them for MISO) and ``bob_jammer_gains``
    those of the AN-carrying luminaires (the others for SISO, all for MISO).
    Eve arrays carry one row per eavesdropper. ``alice_index`` is 0-based.
    """

    scheme: Scheme
    bob_alice_gain: np.ndarray
    bob_jammer_gains: np.ndarray
    eve_alice_gains: np.ndarray
    eve_jammer_gains: np.ndarray
    bob_noise_norm: float
    eve_noise_norm: np.ndarray
    alice_index: int | None = None
    bob_gains: np.ndarray | None = None
    eve_gains: np.ndarray | None = None

    @property
    def n_eves(self) -> int:
        return int(self.eve_alice_gains.shape[0])

    @property
    def n_info(self) -> int:
        return int(self.bob_alice_gain.shape[0])

    @property
    def n_an(self) -> int:
        return int(self.bob_jammer_gains.shape[0])

    def only_eves(self, k: int) -> "ChannelState":
        """Copy restricted to the first `k` eavesdroppers."""
        return replace(self, eve_alice_gains=self.eve_alice_gains[:k],
                       eve_jammer_gains=self.eve_jammer_gains[:k],
                       eve_noise_norm=self.eve_noise_norm[:k],
                       eve_gains=None if self.eve_gains is None else self.eve_gains[:k])


def receiver_gains(scenario: RoomScenario, xy) -> np.ndarray:
    rx = (float(xy[0]), float(xy[1]), scenario.receiver_height)
    return np.array([channel_gain(p, rx, scenario.optical) for p in scenario.luminaire_positions])


def split_gains(gains: np.ndarray, scheme: Scheme, alice: int | None):
    if scheme is Scheme.MISO:
        return gains.copy(), gains.copy()
    mask = np.ones(gains.shape[0], dtype=bool)
    mask[alice] = False
    return gains[[alice]], gains[mask]


def build_channel(scenario: RoomScenario, bob_xy, eve_xys, scheme: Scheme | str) -> ChannelState:
    """Compute all gains and normalized noise levels for one placement."""
    scheme = Scheme(scheme)
    for xy in [bob_xy, *eve_xys]:
        if not scenario.inside_footprint(xy[0], xy[1]):
            raise ValueError(f"receiver {tuple(xy)} lies outside the room")
    opt = scenario.optical
    bob = receiver_gains(scenario, bob_xy)
    if not np.any(bob > 0):
        raise DegenerateChannelError(f"Bob at {tuple(bob_xy)} is outside every luminaire's FOV")

    if scheme is Scheme.SELECTIVE_SISO:
        alice = int(np.argmax(bob))  # first maximum on ties
    elif scheme is Scheme.FIXED_SISO:
        alice = 0
    else:
        alice = None

    h_b, hbar_b = split_gains(bob, scheme, alice)
    nb = normalized_noise(noise_variance(bob, scenario.dc_bias_Idc, opt), opt)

    eves = [receiver_gains(scenario, xy) for xy in eve_xys]
    n_i = h_b.shape[0]
    n_a = hbar_b.shape[0]
    he = np.zeros((len(eves), n_i))
    hbe = np.zeros((len(eves), n_a))
    ne = np.zeros(len(eves))
    for k, g in enumerate(eves):
        he[k], hbe[k] = split_gains(g, scheme, alice)
        ne[k] = normalized_noise(noise_variance(g, scenario.dc_bias_Idc, opt), opt)

    return ChannelState(
        scheme=scheme,
        bob_alice_gain=h_b,
        bob_jammer_gains=hbar_b,
        eve_alice_gains=he,
        eve_jammer_gains=hbe,
        bob_noise_norm=nb,
        eve_noise_norm=ne,
        alice_index=alice,
        bob_gains=bob,
        eve_gains=np.array(eves).reshape(len(eves), scenario.n_luminaires),
    )
