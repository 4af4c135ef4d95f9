"""YAML run configuration with a strict schema.

A config document is a mapping of sections. Every key is optional and falls
back to the defaults below; unknown keys are rejected. ``load_config`` returns
a fully validated :class:`RunConfig`, and each command builds its sweep specs
from it before any computation starts.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, fields

import numpy as np
import yaml

from .channel import DEFAULT_LUMINAIRES, OpticalParams, PowerParams, RoomScenario
from .experiments import CSI_MODES, SchemeVariant, SweepSpec


class ConfigError(ValueError):
    """Invalid configuration document."""


def _grid(start, stop, step):
    return [round(float(v), 10) for v in np.arange(start, stop + step / 2, step)]


DEFAULTS = {
    "seed": 0,
    "realizations": 200,
    "threads": 1,
    "room": {
        "length": 5.0,
        "width": 5.0,
        "height": 3.0,
        "receiver_height": 0.5,
        "luminaires": [list(p) for p in DEFAULT_LUMINAIRES],
    },
    "optical": {f.name: f.default for f in fields(OpticalParams)},
    "power": {f.name: f.default for f in fields(PowerParams)},
    "design": {
        "delta_b_db": 0.0,
        "rho": 0.2,
        "eps": 1e-3,
        "max_iter_dinkelbach": 30,
        "max_iter_ccp": 60,
        "max_iter_ccp_known": 40,
    },
    "sweep_power": {
        "p_t_dbm": _grid(20, 44, 2),
        "csi_mode": "unknown",
        "schemes": ["fixed_siso", "selective_siso", "miso"],
    },
    "feasibility": {
        "rho": _grid(0.0, 1.0, 0.05),
        "p_t_dbm": [30.0, 35.0, 40.0],
        "schemes": ["fixed_siso", "selective_siso", "miso",
                    "fixed_siso:zf", "selective_siso:zf", "miso:zf"],
    },
    "eves_sweep": {
        "k_eves": [1, 2, 3, 4, 5],
        "p_t_dbm": 26.0,
        "schemes": ["fixed_siso", "selective_siso", "miso",
                    "fixed_siso:noan", "selective_siso:noan", "miso:noan"],
    },
    "convergence": {
        "p_t_dbm": 30.0,
        "realizations": 20,
        "schemes": ["selective_siso", "miso"],
    },
    "design_point": {
        "p_t_dbm": 30.0,
        "csi_mode": "unknown",
        "scheme": "selective_siso",
        "bob": [0.5, 0.5],
        "eves": [[-1.0, 1.5]],
    },
}


def _merge(default, user, path):
    if user is None:
        return copy.deepcopy(default)
    if not isinstance(user, dict):
        raise ConfigError(f"{path or 'config'} must be a mapping")
    unknown = sorted(map(str, set(user) - set(default)))
    if unknown:
        where = f" in {path}" if path else ""
        raise ConfigError(f"unknown key(s){where}: {', '.join(unknown)}")
    out = {}
    for k, v in default.items():
        if isinstance(v, dict):
            out[k] = _merge(v, user.get(k), f"{path}.{k}" if path else k)
        else:
            out[k] = user[k] if k in user else copy.deepcopy(v)
    return out


def _num(value, name, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite")
    if integer and int(value) != value:
        raise ConfigError(f"{name} must be an integer")
    return int(value) if integer else float(value)


def _nums(value, name, integer=False):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a non-empty list")
    return tuple(_num(v, name, integer) for v in value)


def _schemes(value, name):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a non-empty list")
    out = []
    for text in value:
        try:
            out.append(SchemeVariant.parse(str(text)))
        except ValueError:
            raise ConfigError(f"{name}: unknown scheme {text!r}") from None
    return tuple(out)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration plus the raw merged document."""

    raw: dict
    seed: int
    realizations: int
    threads: int
    scenario: RoomScenario

    def _spec(self, **kw) -> SweepSpec:
        d = self.raw["design"]
        base = dict(n_realizations=self.realizations, rng_seed=self.seed, scenario=self.scenario,
                    rho=_num(d["rho"], "design.rho"),
                    delta_b_db=_num(d["delta_b_db"], "design.delta_b_db"),
                    eps=_num(d["eps"], "design.eps"),
                    max_iter_dinkelbach=_num(d["max_iter_dinkelbach"], "design.max_iter_dinkelbach", True),
                    max_iter_ccp=_num(d["max_iter_ccp"], "design.max_iter_ccp", True),
                    max_iter_ccp_known=_num(d["max_iter_ccp_known"], "design.max_iter_ccp_known", True))
        base.update(kw)
        try:
            return SweepSpec(**base)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    def sweep_power_spec(self) -> SweepSpec:
        s = self.raw["sweep_power"]
        return self._spec(variable="p_t_dbm", values=_nums(s["p_t_dbm"], "sweep_power.p_t_dbm"),
                          csi_mode=s["csi_mode"],
                          schemes=_schemes(s["schemes"], "sweep_power.schemes"))

    def feasibility_specs(self) -> list[SweepSpec]:
        s = self.raw["feasibility"]
        rhos = _nums(s["rho"], "feasibility.rho")
        schemes = _schemes(s["schemes"], "feasibility.schemes")
        return [self._spec(variable="rho", values=rhos, p_t_dbm=p, schemes=schemes,
                           feasibility_only=True)
                for p in _nums(s["p_t_dbm"], "feasibility.p_t_dbm")]

    def eves_sweep_spec(self) -> SweepSpec:
        s = self.raw["eves_sweep"]
        return self._spec(variable="k_eves", values=_nums(s["k_eves"], "eves_sweep.k_eves", True),
                          csi_mode="known", p_t_dbm=_num(s["p_t_dbm"], "eves_sweep.p_t_dbm"),
                          schemes=_schemes(s["schemes"], "eves_sweep.schemes"))

    def convergence_spec(self) -> SweepSpec:
        s = self.raw["convergence"]
        p = _num(s["p_t_dbm"], "convergence.p_t_dbm")
        n = _num(s["realizations"], "convergence.realizations", True)
        return self._spec(variable="p_t_dbm", values=(p,), p_t_dbm=p, n_realizations=n,
                          schemes=_schemes(s["schemes"], "convergence.schemes"))

    def design_point(self) -> dict:
        s = self.raw["design_point"]
        if s["csi_mode"] not in CSI_MODES:
            raise ConfigError(f"design_point.csi_mode must be one of {CSI_MODES}")
        sv = _schemes([s["scheme"]], "design_point.scheme")[0]
        bob = _nums(s["bob"], "design_point.bob")
        if not isinstance(s["eves"], list):
            raise ConfigError("design_point.eves must be a list of [x, y] points")
        eves = [_nums(e, "design_point.eves") for e in s["eves"]]
        scenario = self.scenario.with_power_dbm(_num(s["p_t_dbm"], "design_point.p_t_dbm"))
        for p in [bob, *eves]:
            if len(p) != 2 or not scenario.inside_footprint(*p):
                raise ConfigError(f"receiver position {list(p)} must be an [x, y] point inside the room")
        if s["csi_mode"] == "known" and not eves:
            raise ConfigError("known-CSI design needs at least one eavesdropper")
        # reuse SweepSpec validation of the scheme/variant combination
        self._spec(variable="p_t_dbm", values=(0.0,), csi_mode=s["csi_mode"], schemes=(sv,))
        return {"scheme": sv, "csi_mode": s["csi_mode"], "scenario": scenario,
                "bob": np.array(bob), "eves": np.array(eves).reshape(-1, 2)}

    def validate(self) -> None:
        """Build every command's inputs once; raises ConfigError on the first problem."""
        self.sweep_power_spec()
        self.feasibility_specs()
        self.eves_sweep_spec()
        self.convergence_spec()
        self.design_point()


def build_config(doc: dict | None = None, **overrides) -> RunConfig:
    """Merge ``doc`` over the defaults, apply top-level overrides and validate."""
    raw = _merge(DEFAULTS, doc if doc is not None else {}, "")
    for k, v in overrides.items():
        if v is not None:
            raw[k] = v
    if overrides.get("realizations") is not None:
        # an explicit count applies to every command, convergence included
        raw["convergence"]["realizations"] = overrides["realizations"]
    seed = _num(raw["seed"], "seed", True)
    realizations = _num(raw["realizations"], "realizations", True)
    threads = _num(raw["threads"], "threads", True)
    if seed < 0:
        raise ConfigError("seed must be non-negative")
    if realizations < 1 or threads < 1:
        raise ConfigError("realizations and threads must be >= 1")
    room = raw["room"]
    try:
        optical = OpticalParams(**{k: _num(v, f"optical.{k}") for k, v in raw["optical"].items()})
        power = PowerParams(**{k: _num(v, f"power.{k}") for k, v in raw["power"].items()})
        lum = room["luminaires"]
        if not isinstance(lum, list):
            raise ConfigError("room.luminaires must be a list of [x, y, z] points")
        scenario = RoomScenario(
            length=_num(room["length"], "room.length"), width=_num(room["width"], "room.width"),
            height=_num(room["height"], "room.height"),
            luminaire_positions=tuple(_nums(p, "room.luminaires") for p in lum),
            receiver_height=_num(room["receiver_height"], "room.receiver_height"),
            optical=optical, power=power)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    cfg = RunConfig(raw, seed, realizations, threads, scenario)
    cfg.validate()
    return cfg


def load_config(path=None, **overrides) -> RunConfig:
    """Read a YAML file (or use pure defaults when ``path`` is None)."""
    doc = None
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = yaml.safe_load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed YAML: {exc}") from None
    return build_config(doc, **overrides)


def default_yaml() -> str:
    return yaml.safe_dump(DEFAULTS, sort_keys=False)
