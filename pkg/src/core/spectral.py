"""Sine-eigenmode machinery for the heat equation on a (possibly expanding) box.

u(x, t) = sum_n C_n D_n(t) sin(n pi x / L), with D_n the mode decay factor.
Every evaluator funnels through ``series`` so that degenerate configurations
reproduce each other bit for bit.
"""

import math
from typing import Callable, Optional, Union

import numpy as np

from .exceptions import ConfigError, DomainError
from .models import Clock, DecayModel, GaussianProfile, ModalDecomposition, ScheduleConfig
from .quadrature import composite_rule, integrate
from .schedule import advanced_time, wall_position

Profile = Union[GaussianProfile, Callable[[np.ndarray], np.ndarray]]

DECAY_CLOCK_POINTS = 1024


def project_profile(f: Profile, L: float, n_max: int, quad_points: int, kappa: float = 0.5,
                    tail_tol: Optional[float] = 1e-10) -> ModalDecomposition:
    """Project f onto the sine modes of [0, L]: C_n = (2/L) int_0^L f(x) sin(n pi x/L) dx.

    Raises ConfigError when quad_points cannot resolve mode n_max or when the
    truncated series fails the tail check (skipped with tail_tol=None), and
    DomainError when a Gaussian center lies outside (0, L).
    """
    if not L > 0:
        raise DomainError("box length must be positive", L=L)
    if n_max < 1:
        raise ConfigError("n_max must be at least 1", key="numerics.n_max")
    if quad_points < 10 * n_max:
        raise ConfigError("quad_points cannot resolve the highest mode (need ≥ 10·n_max)",
                          key="numerics.quad_points", quad_points=quad_points, n_max=n_max)
    if isinstance(f, GaussianProfile) and not 0 < f.x0 < L:
        raise DomainError("profile center outside the box", x0=f.x0, L=L)

    nodes, weights = composite_rule(0.0, L, quad_points)
    modes = np.arange(1, n_max + 1, dtype=float)
    samples = np.asarray(f(nodes), dtype=float) * weights
    basis = np.sin(np.pi * np.outer(modes, nodes) / L)
    coeffs = (2.0 / L) * (basis @ samples)

    peak = float(np.max(np.abs(coeffs)))
    tail = float(np.max(np.abs(coeffs[-2:]))) / peak if peak > 0 else 0.0
    if tail_tol is not None and tail >= tail_tol:
        raise ConfigError("truncation inadequate: increase n_max", key="numerics.n_max",
                          tail_bound=tail, tail_tol=tail_tol)
    return ModalDecomposition(coeffs=tuple(float(c) for c in coeffs), n_max=n_max,
                              L_ref=L, kappa=kappa, tail_bound=tail)


def check_inside(x, L: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > L) or np.any(np.isnan(x)):
        outside = x[(x < 0) | (x > L) | np.isnan(x)] if x.ndim else x
        raise DomainError("position outside the box", x=float(np.ravel(outside)[0]), L=L)
    return x


def series(md: ModalDecomposition, x: np.ndarray, L: float, scaled_time: float) -> np.ndarray:
    """sum_n C_n exp(-(pi kappa n)^2 s) sin(n pi x/L), s = int dt/L^2."""
    xi = np.atleast_1d(x) / L
    rates = (math.pi * md.kappa * md.modes) ** 2
    weights = md.coefficients * np.exp(-rates * scaled_time)
    basis = np.sin(math.pi * np.outer(xi, md.modes))
    basis[xi == 1.0] = 0.0  # Dirichlet wall
    return basis @ weights


def series_gradient(md: ModalDecomposition, x: np.ndarray, L: float, scaled_time: float) -> np.ndarray:
    """Term-by-term x-derivative of ``series``."""
    xi = np.atleast_1d(x) / L
    rates = (math.pi * md.kappa * md.modes) ** 2
    weights = md.coefficients * np.exp(-rates * scaled_time) * (math.pi * md.modes / L)
    return np.cos(math.pi * np.outer(xi, md.modes)) @ weights


def series_curvature(md: ModalDecomposition, x: np.ndarray, L: float, scaled_time: float) -> np.ndarray:
    """Term-by-term second x-derivative of ``series``."""
    xi = np.atleast_1d(x) / L
    rates = (math.pi * md.kappa * md.modes) ** 2
    weights = -md.coefficients * np.exp(-rates * scaled_time) * (math.pi * md.modes / L) ** 2
    basis = np.sin(math.pi * np.outer(xi, md.modes))
    basis[xi == 1.0] = 0.0
    return basis @ weights


def decay_clock(sched: ScheduleConfig, t: float, clock: Clock, model: DecayModel) -> float:
    """Scaled time s entering D_n = exp(-pi^2 n^2 kappa^2 s).

    literal: t / L(t)^2 with the wall read on ``clock``.
    integrated: int_0^t dt' / L(t')^2.
    """
    L = wall_position(sched, t, clock)
    if DecayModel(model) is DecayModel.LITERAL:
        return t / (L * L)
    if t == 0:
        return 0.0
    if Clock(clock) is Clock.STANDARD or sched.epsilon == 0 or sched.alpha_bar == 1:
        # wall is affine in t on these clocks
        return t / (sched.L0 * L)

    def inverse_square(tp):
        Lp = sched.L0 + sched.epsilon * advanced_time(sched, tp)
        return 1.0 / (Lp * Lp)

    return integrate(inverse_square, 0.0, float(t), DECAY_CLOCK_POINTS)


def eval_standard_fixed(md: ModalDecomposition, x, t: float):
    """Fixed-box solution on [0, L_ref]."""
    if t < 0:
        raise DomainError("time must be non-negative", t=t)
    x = check_inside(x, md.L_ref)
    L = md.L_ref
    return _shape_like(x, series(md, x, L, t / (L * L)))


def eval_standard_adiabatic(md: ModalDecomposition, sched: ScheduleConfig, x, t: float,
                            decay_model: DecayModel = DecayModel.LITERAL):
    """Standard system on the slowly expanding box L(t) = L0 + eps*t."""
    L = wall_position(sched, t, Clock.STANDARD)
    x = check_inside(x, L)
    s = decay_clock(sched, t, Clock.STANDARD, decay_model)
    return _shape_like(x, series(md, x, L, s))


def modal_energy(md: ModalDecomposition, t: float) -> float:
    """int_0^L u^2 dx on the fixed box, by Parseval: (L/2) sum C_n^2 exp(-2 pi^2 kappa^2 n^2 t / L^2)."""
    L = md.L_ref
    rates = (math.pi * md.kappa * md.modes / L) ** 2
    return float(0.5 * L * np.sum(md.coefficients ** 2 * np.exp(-2.0 * rates * t)))


def _shape_like(x: np.ndarray, values: np.ndarray):
    return float(values[0]) if np.ndim(x) == 0 else values
