"""Time-magnification schedule: alpha(t), advanced time, wall trajectory and velocity.

All functions are pure in (config, t) and accept scalars or numpy arrays;
scalar input returns a float.
"""

import math

import numpy as np

from .exceptions import DomainError
from .models import Clock, ScheduleConfig, ScheduleShape


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def _unwrap(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def _require_non_negative(t: np.ndarray) -> None:
    if np.any(t < 0) or np.any(np.isnan(t)):
        bad = float(np.min(t)) if t.size else float("nan")
        raise DomainError("time must be non-negative", t=bad)


def _require_fast_forward_range(cfg: ScheduleConfig, t: np.ndarray) -> None:
    if np.any(t < 0) or np.any(t > cfg.T_FF) or np.any(np.isnan(t)):
        offending = t[(t < 0) | (t > cfg.T_FF) | np.isnan(t)] if t.ndim else t
        raise DomainError(f"time outside the fast-forward range [0, {cfg.T_FF}]",
                          t=float(np.ravel(offending)[0]))


def _phase(cfg: ScheduleConfig, t: np.ndarray) -> np.ndarray:
    # 2*pi*t / (T / alpha_bar)
    return 2.0 * math.pi * cfg.alpha_bar * t / cfg.T_standard


def alpha(cfg: ScheduleConfig, t):
    """Magnification factor alpha(t); pinned to 1 after T_FF."""
    t, scalar = _as_array(t)
    _require_non_negative(t)
    inside = t <= cfg.T_FF
    if cfg.shape is ScheduleShape.COSINE:
        value = cfg.alpha_bar - (cfg.alpha_bar - 1.0) * np.cos(_phase(cfg, t))
    else:
        value = np.full_like(t, cfg.alpha_bar)
    return _unwrap(np.where(inside, value, 1.0), scalar)


def alpha_rate(cfg: ScheduleConfig, t):
    """Analytic d(alpha)/dt; zero after T_FF and for the constant shape."""
    t, scalar = _as_array(t)
    _require_non_negative(t)
    if cfg.shape is ScheduleShape.COSINE:
        omega = 2.0 * math.pi * cfg.alpha_bar / cfg.T_standard
        value = (cfg.alpha_bar - 1.0) * omega * np.sin(_phase(cfg, t))
    else:
        value = np.zeros_like(t)
    return _unwrap(np.where(t <= cfg.T_FF, value, 0.0), scalar)


def advanced_time(cfg: ScheduleConfig, t):
    """Lambda(t) = int_0^t alpha, in closed form; Lambda(T_FF) = T_standard."""
    t, scalar = _as_array(t)
    _require_fast_forward_range(cfg, t)
    if cfg.shape is ScheduleShape.COSINE:
        amplitude = (cfg.alpha_bar - 1.0) * cfg.T_standard / (2.0 * math.pi * cfg.alpha_bar)
        value = cfg.alpha_bar * t - amplitude * np.sin(_phase(cfg, t))
    else:
        value = cfg.alpha_bar * t
    return _unwrap(value, scalar)


def wall_position(cfg: ScheduleConfig, t, clock: Clock = Clock.STANDARD):
    """Wall position L0 + eps*t (standard) or L0 + eps*Lambda(t) (fast_forward)."""
    if Clock(clock) is Clock.FAST_FORWARD:
        return wall_position(cfg, advanced_time(cfg, t), Clock.STANDARD)
    t, scalar = _as_array(t)
    _require_non_negative(t)
    return _unwrap(cfg.L0 + cfg.epsilon * t, scalar)


def wall_velocity(cfg: ScheduleConfig, t, clock: Clock = Clock.FAST_FORWARD):
    """Wall velocity v = eps*alpha(t); the standard wall moves at eps."""
    t, scalar = _as_array(t)
    if Clock(clock) is Clock.STANDARD:
        _require_non_negative(t)
        return _unwrap(np.full_like(t, cfg.epsilon), scalar)
    _require_fast_forward_range(cfg, t)
    return _unwrap(cfg.epsilon * np.asarray(alpha(cfg, t)), scalar)
