"""Link-level math: distances, path loss, noise and NOMA spectral efficiencies.

Convention for a NOMA pair: the far (weaker) user gets the larger power
share and decodes its own signal treating the near user's signal as
interference; the near user cancels the far user's signal first and then
decodes interference-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LinkGain:
    station_id: int
    user_id: int
    channel: int
    gain: float

    def __post_init__(self):
        if not 0.0 < self.gain <= 1.0:
            raise ValueError(f"gain must lie in (0, 1], got {self.gain!r}")


@dataclass(frozen=True)
class NoiseModel:
    sigma2_w: float

    def __post_init__(self):
        if not self.sigma2_w > 0:
            raise ValueError(f"sigma2_w must be positive, got {self.sigma2_w!r}")

    @classmethod
    def from_density(cls, n0_dbm_hz: float, bandwidth_hz: float) -> "NoiseModel":
        return cls(noise_power_w(n0_dbm_hz, bandwidth_hz))


def distance_m(a, b) -> float:
    """Euclidean distance between two points of equal dimension, never below 1 m."""
    return max(1.0, math.dist(a, b))


def path_loss_db(d_m: float, fc_ghz: float) -> float:
    return 28.1 + 37.6 * math.log10(d_m) + math.log10(fc_ghz / 2.5)


def path_gain(d_m: float, fc_ghz: float) -> float:
    return 10.0 ** (-path_loss_db(d_m, fc_ghz) / 10.0)


def noise_power_w(n0_dbm_hz: float, bandwidth_hz: float) -> float:
    if not bandwidth_hz > 0:
        raise ValueError(f"bandwidth_hz must be positive, got {bandwidth_hz!r}")
    return 10.0 ** ((n0_dbm_hz - 30.0) / 10.0) * bandwidth_hz


_LN2 = math.log(2.0)


def _log2_1p(x: float) -> float:
    # log1p keeps precision at the very low SINRs of macro-cell users
    return math.log1p(x) / _LN2


def se_far(p_far: float, h_far: float, p_near: float, sigma2: float) -> float:
    return _log2_1p(p_far * h_far / (p_near * h_far + sigma2))


def se_near(p_near: float, h_near: float, sigma2: float) -> float:
    return _log2_1p(p_near * h_near / sigma2)


def se_oma(p: float, h: float, sigma2: float) -> float:
    return _log2_1p(p * h / sigma2)


def sic_margin(p_near: float, h_near: float, p_far: float, h_far: float, sigma2: float) -> float:
    """SINR of the far user's signal at the near receiver minus the same at the far receiver.

    SIC at the near user is deemed reliable when this reaches ``p_tol``.
    """
    at_near = p_far * h_near / (p_near * h_near + sigma2)
    at_far = p_far * h_far / (p_near * h_far + sigma2)
    return at_near - at_far
