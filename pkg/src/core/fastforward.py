"""Fast-forward protocol for the heat equation on an expanding box.

The regularization phase theta solves
    d_x theta = -(1/u^2) d_L int_0^x u^2 dx'
for a box eigenmode u. With the L-normalized basis sqrt(2/L) sin(n pi x/L)
this gives d_x theta = x/L for every n, hence theta = x^2/(2L), and the
fast-forward potential
    V_FF = -(d alpha/dt) eps theta - alpha^2 eps^2 d_L theta - (1/2) alpha^2 eps^2 (d_x theta)^2.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DomainError, SingularityError
from .models import (BasisNormalization, Clock, DecayModel, ModalDecomposition,
                     ScheduleConfig, ThetaExponent)
from .schedule import alpha, alpha_rate, wall_position, wall_velocity
from .spectral import (check_inside, decay_clock, eval_standard_adiabatic, series, series_curvature,
                       series_gradient)

NODE_TOLERANCE = 1e-8


def _basis_weights(L: float, basis: BasisNormalization):
    """Squared amplitude A^2 of the basis and its scale defect A^2/L + d(A^2)/dL.

    The defect vanishes exactly for the normalized basis, which is what makes
    the node singularities of the theta equation cancel.
    """
    if BasisNormalization(basis) is BasisNormalization.NORMALIZED:
        return 2.0 / L, 0.0
    return 1.0, 1.0 / L


def theta_gradient(x: float, L: float, mode_n: int,
                   basis: BasisNormalization = BasisNormalization.NORMALIZED) -> float:
    """Evaluate -(1/u^2) d_L int_0^x u^2 dx' for u the n-th box mode.

    Writing int_0^x u^2 = A^2 (x/2 - sin(2kx)/(4k)) with k = n pi/L, the
    L-derivative splits into
        -A^2 x sin^2(kx)/L + defect * (x/2 - sin(kx) cos(kx)/(2k)),
    so the ratio is x/L plus a defect term that is singular at nodes of u.
    """
    if not 0 < x < L:
        raise DomainError("theta_gradient needs 0 < x < L", x=x, L=L)
    if mode_n < 1:
        raise DomainError("mode index must be at least 1", mode_n=mode_n)
    amplitude_sq, defect = _basis_weights(L, basis)
    result = x / L
    if defect == 0.0:
        return result
    k = mode_n * math.pi / L
    s = math.sin(k * x)
    if abs(s) < NODE_TOLERANCE:
        raise SingularityError("theta equation is singular at a node of the raw mode",
                               x=x, L=L, mode_n=mode_n)
    remainder = x / 2.0 - s * math.cos(k * x) / (2.0 * k)
    return result - defect * remainder / (amplitude_sq * s * s)


def theta(x, L: float):
    """theta(x, L) = x^2 / (2L), gauge theta(0, L) = 0."""
    x = check_inside(x, L)
    value = x * x / (2.0 * L)
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class FastForwardProtocol:
    """Protocol fields theta, its derivatives and V_FF for one schedule."""
    schedule: ScheduleConfig
    basis: BasisNormalization = BasisNormalization.NORMALIZED
    theta_exponent: ThetaExponent = ThetaExponent.EPSILON
    gauge: float = 0.0

    def __post_init__(self):
        if BasisNormalization(self.basis) is not BasisNormalization.NORMALIZED:
            # theta ~ 1/sin^2 near the wall for the raw basis
            raise SingularityError("theta is regular only for the normalized basis",
                                   basis=BasisNormalization(self.basis).value)

    def theta(self, x, L: float):
        return theta(x, L) + self.gauge

    def dtheta_dx(self, x, L: float):
        x = check_inside(x, L)
        return x / L

    def dtheta_dL(self, x, L: float):
        x = check_inside(x, L)
        return -(x * x) / (2.0 * L * L)

    def wall(self, t: float) -> float:
        return wall_position(self.schedule, t, Clock.FAST_FORWARD)

    def v_ff(self, x, t: float):
        """Three-term fast-forward potential at wall-clock time t."""
        sched = self.schedule
        L = self.wall(t)
        a = alpha(sched, t)
        rate = alpha_rate(sched, t)
        eps = sched.epsilon
        drive = -rate * eps * self.theta(x, L)
        stretch = -(a * a) * (eps * eps) * self.dtheta_dL(x, L)
        kinetic = -0.5 * (a * a) * (eps * eps) * self.dtheta_dx(x, L) ** 2
        return drive + stretch + kinetic

    def exponent_prefactor(self, t: float, clock: Clock = Clock.FAST_FORWARD) -> float:
        """Prefactor lambda in exp(lambda * theta): eps, or the wall velocity."""
        if ThetaExponent(self.theta_exponent) is ThetaExponent.VELOCITY:
            return wall_velocity(self.schedule, t, clock)
        return self.schedule.epsilon

    def regularization_factor(self, x, L: float, t: float, clock: Clock = Clock.FAST_FORWARD):
        return np.exp(self.exponent_prefactor(t, clock) * self.theta(x, L))


def ff_potential(x, t: float, sched: ScheduleConfig):
    """V_FF(x, t) on the fast-forwarded box [0, L(Lambda(t))]."""
    return FastForwardProtocol(schedule=sched).v_ff(x, t)


def _resolve(sched: ScheduleConfig, protocol: Optional[FastForwardProtocol]) -> FastForwardProtocol:
    return protocol if protocol is not None else FastForwardProtocol(schedule=sched)


def eval_ff_solution(md: ModalDecomposition, sched: ScheduleConfig, x, t: float,
                     decay_model: DecayModel = DecayModel.LITERAL,
                     protocol: Optional[FastForwardProtocol] = None):
    """u_FF = exp(lambda theta) * sum_n C_n D_n(t) sin(n pi x / L(Lambda(t)))."""
    protocol = _resolve(sched, protocol)
    L = wall_position(sched, t, Clock.FAST_FORWARD)
    x = check_inside(x, L)
    s = decay_clock(sched, t, Clock.FAST_FORWARD, decay_model)
    values = protocol.regularization_factor(np.atleast_1d(x), L, t) * series(md, x, L, s)
    return float(values[0]) if np.ndim(x) == 0 else values


def eval_ff_gradient(md: ModalDecomposition, sched: ScheduleConfig, x, t: float,
                     decay_model: DecayModel = DecayModel.LITERAL,
                     protocol: Optional[FastForwardProtocol] = None) -> np.ndarray:
    """d_x u_FF by the product rule, including the lambda * d_x theta term."""
    protocol = _resolve(sched, protocol)
    L = wall_position(sched, t, Clock.FAST_FORWARD)
    x = np.atleast_1d(check_inside(x, L))
    s = decay_clock(sched, t, Clock.FAST_FORWARD, decay_model)
    factor = protocol.regularization_factor(x, L, t)
    lam = protocol.exponent_prefactor(t)
    return factor * (lam * protocol.dtheta_dx(x, L) * series(md, x, L, s)
                     + series_gradient(md, x, L, s))


def eval_ff_curvature(md: ModalDecomposition, sched: ScheduleConfig, x, t: float,
                      decay_model: DecayModel = DecayModel.LITERAL,
                      protocol: Optional[FastForwardProtocol] = None) -> np.ndarray:
    """d_xx u_FF; theta_xx = 1/L."""
    protocol = _resolve(sched, protocol)
    L = wall_position(sched, t, Clock.FAST_FORWARD)
    x = np.atleast_1d(check_inside(x, L))
    s = decay_clock(sched, t, Clock.FAST_FORWARD, decay_model)
    factor = protocol.regularization_factor(x, L, t)
    lam = protocol.exponent_prefactor(t)
    slope = lam * protocol.dtheta_dx(x, L)
    S = series(md, x, L, s)
    return factor * ((lam / L + slope * slope) * S + 2.0 * slope * series_gradient(md, x, L, s)
                     + series_curvature(md, x, L, s))


def eval_regularized_standard(md: ModalDecomposition, sched: ScheduleConfig, x, t: float,
                              decay_model: DecayModel = DecayModel.LITERAL,
                              protocol: Optional[FastForwardProtocol] = None):
    """Standard solution carrying the regularization factor, on the wall L0 + eps*t."""
    protocol = _resolve(sched, protocol)
    L = wall_position(sched, t, Clock.STANDARD)
    standard = np.atleast_1d(eval_standard_adiabatic(md, sched, x, t, decay_model))
    values = protocol.regularization_factor(np.atleast_1d(x), L, t, Clock.STANDARD) * standard
    return float(values[0]) if np.ndim(x) == 0 else values
