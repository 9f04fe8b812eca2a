"""Scenario files: ``key = value`` text read with :mod:`configparser`.

Keys are dotted, ``section.key``. Example::

    # weak damping, one kick at t = 0
    name = weak
    alpha = 1+0.5j
    params.omega0 = 1.0
    params.gamma = 0.2
    params.kappa = 1.0
    params.kick_times = 0
    time.t_start = 0
    time.t_end = 10
    time.n_points = 201
    frames.theta = 0, 0.7853981633974483, 1.5707963267948966
    xgrid.x_min = -6
    xgrid.x_max = 6
    xgrid.n_points = 241
    tomogram.t = 0

The same keys may be grouped under INI headers instead (``[params]`` then
``omega0 = 1.0``); top-level ``name``, ``alpha`` and ``outputs`` also live
in ``[scenario]``. Frames may be given as paired lists ``frames.mu`` /
``frames.nu``. Optional: ``squeezing.period`` and ``outputs``. Unknown keys
and keys given twice are errors.
"""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .tomography import FrameParams, frame_from_angle
from .trajectory import OscillatorParams

__all__ = ["ConfigError", "Scenario", "parse_scenario", "load_scenario"]

KNOWN_KEYS = {
    "scenario": {"name", "alpha", "outputs"},
    "params": {"omega0", "gamma", "kappa", "kick_times"},
    "time": {"t_start", "t_end", "n_points"},
    "frames": {"theta", "mu", "nu"},
    "xgrid": {"x_min", "x_max", "n_points"},
    "tomogram": {"t"},
    "squeezing": {"period"},
}

OUTPUTS = ("trajectory", "moments", "tomogram", "squeezing", "verify")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    params: OscillatorParams
    alpha: complex = 0j
    t_start: float = 0.0
    t_end: float = 10.0
    n_time: int = 201
    frames: tuple[FrameParams, ...] = field(default_factory=lambda: (frame_from_angle(0.0), frame_from_angle(math.pi / 2)))
    x_min: float = -6.0
    x_max: float = 6.0
    n_x: int = 241
    tomogram_t: float = 0.0
    period: int = 1
    outputs: tuple[str, ...] = ()
    name: str = "scenario"
    digest: str = ""

    def __post_init__(self):
        if self.n_time < 1 or self.n_x < 1:
            raise ConfigError("grids need n_points >= 1")
        if self.n_time > 1 and not self.t_end > self.t_start:
            raise ConfigError(f"time grid is degenerate: [{self.t_start}, {self.t_end}]")
        if self.n_x > 1 and not self.x_max > self.x_min:
            raise ConfigError(f"X grid is degenerate: [{self.x_min}, {self.x_max}]")
        if not self.frames:
            raise ConfigError("at least one frame is required")

    @property
    def time_grid(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_time)

    @property
    def x_grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_x)


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


_TOP = "\x01top"  # implicit section for lines before any header


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"), default_section="\x00")
    try:
        cp.read_string(f"[{_TOP}]\n{text}")
    except configparser.Error as exc:
        raise ConfigError(str(exc).replace("\n", " ")) from exc
    raw: dict[str, str] = {}
    for section in cp.sections():
        if section != _TOP and section not in KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key, value in cp.items(section):
            if section != _TOP:
                full = f"{section}.{key}"
            else:
                full = key if "." in key else f"scenario.{key}"
            head, _, tail = full.partition(".")
            if tail not in KNOWN_KEYS.get(head, ()):
                raise ConfigError(f"unknown key {key!r}" + ("" if section == _TOP else f" in [{section}]"))
            if full in raw:
                raise ConfigError(f"key {full!r} given twice")
            raw[full] = value.strip()

    canonical = "\n".join(f"{k}={raw[k]}" for k in sorted(raw))
    digest = hashlib.sha256(canonical.encode()).hexdigest()[:16]

    try:
        if "params.omega0" not in raw or "params.gamma" not in raw:
            raise ConfigError("[params] omega0 and gamma are required")
        params = OscillatorParams(
            omega0=float(raw["params.omega0"]),
            gamma=float(raw["params.gamma"]),
            kappa=float(raw.get("params.kappa", "0")),
            kick_times=tuple(_floats(raw.get("params.kick_times", "0"))),
        )
        if "frames.theta" in raw:
            if "frames.mu" in raw or "frames.nu" in raw:
                raise ConfigError("give frames either as theta or as mu/nu")
            frames = tuple(frame_from_angle(a) for a in _floats(raw["frames.theta"]))
        elif "frames.mu" in raw or "frames.nu" in raw:
            mus, nus = _floats(raw.get("frames.mu", "")), _floats(raw.get("frames.nu", ""))
            if len(mus) != len(nus):
                raise ConfigError("[frames] mu and nu must have the same length")
            frames = tuple(FrameParams(m, n) for m, n in zip(mus, nus))
        else:
            frames = (frame_from_angle(0.0), frame_from_angle(math.pi / 2))
        outputs = tuple(v.strip() for v in raw.get("scenario.outputs", "").split(",") if v.strip())
        unknown = sorted(set(outputs) - set(OUTPUTS))
        if unknown:
            raise ConfigError(f"unknown outputs {unknown}; choose from {list(OUTPUTS)}")
        t_start = float(raw.get("time.t_start", "0"))
        return Scenario(
            params=params,
            alpha=complex(raw.get("scenario.alpha", "0").replace(" ", "")),
            t_start=t_start,
            t_end=float(raw.get("time.t_end", "10")),
            n_time=int(raw.get("time.n_points", "201")),
            frames=frames,
            x_min=float(raw.get("xgrid.x_min", "-6")),
            x_max=float(raw.get("xgrid.x_max", "6")),
            n_x=int(raw.get("xgrid.n_points", "241")),
            tomogram_t=float(raw.get("tomogram.t", str(t_start))),
            period=int(raw.get("squeezing.period", "1")),
            outputs=outputs,
            name=raw.get("scenario.name", name),
            digest=digest,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_scenario(text, name=path.stem)
