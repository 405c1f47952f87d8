"""Capture timing of the triaxial rig.

Durations are integer microseconds. Row ``k`` of the rolling-shutter view
starts exposing at ``k * row_delay_us`` and owns exactly one of the
``n_latent`` sharp instants that uniformly span the frame exposure.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, ParameterError


@dataclass(frozen=True)
class TimingConfig:
    image_height: int
    image_width: int
    n_latent: int
    row_exposure_us: int
    row_delay_us: int
    frame_exposure_us: int
    deadtime_us: int
    frame_rate_hz: float

    def __post_init__(self):
        for name in ("image_height", "image_width", "n_latent", "row_exposure_us",
                     "row_delay_us", "frame_exposure_us", "deadtime_us"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigError(f"{name} must be an integer, got {value!r}")
        if self.image_height < 2:
            raise ConfigError("image_height must be >= 2")
        if self.image_width < 1:
            raise ConfigError("image_width must be >= 1")
        if self.n_latent < 2:
            raise ConfigError("n_latent must be >= 2")
        if min(self.row_exposure_us, self.row_delay_us,
               self.frame_exposure_us, self.deadtime_us) < 0:
            raise ConfigError("durations must be non-negative")
        if not self.frame_rate_hz > 0:
            raise ConfigError("frame_rate_hz must be positive")
        # The last row may finish up to one row delay early (2 ms + 20 us * 799 = 17.98 ms).
        readout = self.row_exposure_us + self.row_delay_us * (self.image_height - 1)
        if abs(readout - self.frame_exposure_us) > self.row_delay_us:
            raise ConfigError(
                f"row timing spans {readout} us but frame_exposure_us is {self.frame_exposure_us}")
        if self.period_us < self.frame_exposure_us + self.deadtime_us:
            raise ConfigError("frame period shorter than exposure plus deadtime")

    @property
    def period_us(self) -> float:
        return 1e6 / self.frame_rate_hz

    @property
    def is_global_shutter(self) -> bool:
        return self.row_delay_us == 0

    def with_size(self, height: int, width: int) -> "TimingConfig":
        """Same camera timing re-expressed for a resampled image size.

        Row delay is rescaled so the readout still spans the frame exposure;
        the result is used for pyramid levels and crops, not for capture.
        """
        if height == self.image_height:
            return dataclasses.replace(self, image_width=width)
        delay = 0
        if self.row_delay_us:
            delay = max(0, (self.frame_exposure_us - self.row_exposure_us) // max(height - 1, 1))
        exposure = self.frame_exposure_us - delay * (height - 1) if self.row_delay_us else self.row_exposure_us
        return dataclasses.replace(self, image_height=height, image_width=width,
                                   row_delay_us=delay, row_exposure_us=exposure)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TimingConfig":
        names = [f.name for f in dataclasses.fields(cls)]
        unknown = sorted(set(data) - set(names))
        if unknown:
            raise ConfigError(f"unknown timing keys: {', '.join(unknown)}")
        missing = [n for n in names if n not in data]
        if missing:
            raise ConfigError(f"missing timing keys: {', '.join(missing)}")
        return cls(**data)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "TimingConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        return cls.from_dict(data)


def default_realbr_timing() -> TimingConfig:
    """Rolling-shutter camera of the RealBR rig (800x800, 9 latent frames)."""
    return TimingConfig(
        image_height=800,
        image_width=800,
        n_latent=9,
        row_exposure_us=2000,
        row_delay_us=20,
        frame_exposure_us=18000,
        deadtime_us=32000,
        frame_rate_hz=20.0,
    )


def realbr_gs_timing() -> TimingConfig:
    """Global-shutter (blur) camera of the same rig: one 18 ms window for all rows."""
    return dataclasses.replace(default_realbr_timing(), row_exposure_us=18000, row_delay_us=0)


def scaled_timing(height: int, width: int, n_latent: int) -> TimingConfig:
    """RealBR row timing (2 ms exposure, 20 us delay, 20 fps) at another size.

    Frame exposure follows from the readout, so the config is always valid;
    used for synthetic scenes.
    """
    base = default_realbr_timing()
    frame = base.row_exposure_us + base.row_delay_us * (height - 1)
    period = 1e6 / base.frame_rate_hz
    return dataclasses.replace(
        base,
        image_height=height,
        image_width=width,
        n_latent=n_latent,
        frame_exposure_us=frame,
        deadtime_us=int(period - frame),
    )


def _check_row(cfg: TimingConfig, k) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise IndexError(f"row index must be an integer, got {k!r}")
    if not 0 <= k < cfg.image_height:
        raise IndexError(f"row {k} outside 0..{cfg.image_height - 1}")
    return int(k)


def row_to_latent(cfg: TimingConfig, k: int) -> int:
    """Latent frame index whose instant is nearest to row ``k``.

    Exact integer rounding of ``k (N-1) / (H-1)``; halves go to the later frame.
    """
    k = _check_row(cfg, k)
    h1 = cfg.image_height - 1
    return (2 * k * (cfg.n_latent - 1) + h1) // (2 * h1)


def row_latent_indices(cfg: TimingConfig) -> np.ndarray:
    """Vectorised :func:`row_to_latent` over all rows."""
    k = np.arange(cfg.image_height, dtype=np.int64)
    h1 = cfg.image_height - 1
    return (2 * k * (cfg.n_latent - 1) + h1) // (2 * h1)


def row_capture_times(cfg: TimingConfig) -> np.ndarray:
    """Normalised capture time in [0, 1] of every RS row (owning latent / (N-1))."""
    return row_latent_indices(cfg) / (cfg.n_latent - 1)


def exposure_window(cfg: TimingConfig, k: int) -> tuple[int, int]:
    """(start_us, end_us) of row ``k``, left-aligned on the row's readout start."""
    k = _check_row(cfg, k)
    start = k * cfg.row_delay_us
    return start, start + cfg.row_exposure_us


def latent_instants_us(cfg: TimingConfig) -> np.ndarray:
    """Times of the N latent instants, uniformly spanning the frame exposure."""
    return np.linspace(0.0, cfg.frame_exposure_us, cfg.n_latent)
