"""Crank-Nicolson integrator for the heat equation on a moving box.

The physical domain [0, L(t)] is mapped onto xi = x / L in [0, 1]. For
w(xi, t) = u(xi L, t) the fast-forwarded equation becomes

    dw/dt = (kappa^2 / L^2) w_xixi + xi (Ldot / L) w_xi + V_FF(xi L, t) w,

which is advanced with the trapezoidal rule, coefficients frozen at the half
step, and a banded tridiagonal solve per step.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
import scipy.linalg

from src.core.exceptions import FFHeatError, NumericalBlowupError, StepSizeError
from src.core.fastforward import FastForwardProtocol, eval_ff_solution
from src.core.models import Clock, GridField, ModalDecomposition, ScheduleConfig, ScheduleShape
from src.core.schedule import wall_position, wall_velocity
from src.core.spectral import eval_standard_adiabatic

logger = logging.getLogger(__name__)

Forcing = Callable[[np.ndarray, float, float], np.ndarray]


@dataclass(frozen=True)
class PDECoefficients:
    """Coefficients of the mapped equation at one instant."""
    diffusion: float
    advection: Callable[[np.ndarray], np.ndarray]
    reaction: Callable[[np.ndarray], np.ndarray]
    wall_rate: float  # Ldot / L, the slope of the advection coefficient in xi


def transform_pde_coefficients(sched: ScheduleConfig, t: float, kappa: float,
                               protocol: Optional[FastForwardProtocol] = None) -> PDECoefficients:
    """Mapped-coordinate coefficients; without a protocol the standard system is used."""
    clock = Clock.FAST_FORWARD if protocol is not None else Clock.STANDARD
    L = wall_position(sched, t, clock)
    rate = wall_velocity(sched, t, clock) / L

    def advection(xi):
        return rate * np.asarray(xi, dtype=float)

    if protocol is None:
        def reaction(xi):
            return np.zeros_like(np.asarray(xi, dtype=float))
    else:
        def reaction(xi):
            return np.asarray(protocol.v_ff(np.asarray(xi, dtype=float) * L, t), dtype=float)

    return PDECoefficients(diffusion=kappa ** 2 / L ** 2, advection=advection,
                           reaction=reaction, wall_rate=rate)


class MovingBoxIntegrator:
    """Advances grid fields of the standard or fast-forwarded system."""

    def __init__(self, sched: ScheduleConfig, kappa: float,
                 protocol: Optional[FastForwardProtocol] = None,
                 forcing: Optional[Forcing] = None):
        """``forcing(xi, t, dt)`` is a source term held constant over the step [t, t + dt]."""
        self.sched = sched
        self.kappa = kappa
        self.protocol = protocol
        self.forcing = forcing
        self.clock = Clock.FAST_FORWARD if protocol is not None else Clock.STANDARD

    def wall(self, t: float) -> float:
        return wall_position(self.sched, t, self.clock)

    def initial_field(self, md: ModalDecomposition, M: int) -> GridField:
        """Series initial condition sampled on the xi-grid."""
        L = self.wall(0.0)
        x = np.linspace(0.0, 1.0, M + 1) * L
        if self.protocol is not None:
            values = eval_ff_solution(md, self.sched, x, 0.0, protocol=self.protocol)
        else:
            values = eval_standard_adiabatic(md, self.sched, x, 0.0)
        values = np.array(values, dtype=float)
        values[0] = values[-1] = 0.0
        return GridField(values=values, L=L, t=0.0)

    def peclet_number(self, M: int, t_end: float) -> float:
        """Worst-case cell Peclet number |xi Ldot/L| h / (2 D) over [0, t_end]."""
        times = np.linspace(0.0, t_end, 257)
        if self.clock is Clock.FAST_FORWARD and self.sched.shape is ScheduleShape.COSINE:
            times = np.append(times, min(0.5 * self.sched.T_FF, t_end))
        h = 1.0 / M
        worst = 0.0
        for t in times:
            L = self.wall(float(t))
            velocity = wall_velocity(self.sched, float(t), self.clock)
            worst = max(worst, abs(velocity) * L * h / (2.0 * self.kappa ** 2))
        return worst

    def step(self, state: GridField, dt: float, step_index: int = 0) -> GridField:
        """One Crank-Nicolson step from state.t to state.t + dt."""
        if not dt > 0:
            raise StepSizeError("time step must be positive", dt=dt, step=step_index)
        M = state.M
        h = 1.0 / M
        xi = np.linspace(0.0, 1.0, M + 1)[1:-1]
        coeffs = transform_pde_coefficients(self.sched, state.t + 0.5 * dt, self.kappa, self.protocol)

        diffusive = coeffs.diffusion / (h * h)
        drift = coeffs.advection(xi) / (2.0 * h)
        lower = diffusive - drift
        upper = diffusive + drift
        diag = -2.0 * diffusive + coeffs.reaction(xi)

        half = 0.5 * dt
        w = state.values
        rhs = w[1:-1] + half * (lower * w[:-2] + diag * w[1:-1] + upper * w[2:])
        if self.forcing is not None:
            rhs = rhs + dt * np.asarray(self.forcing(xi, state.t, dt), dtype=float)

        ab = np.zeros((3, M - 1))
        ab[0, 1:] = -half * upper[:-1]
        ab[1, :] = 1.0 - half * diag
        ab[2, :-1] = -half * lower[1:]
        off = half * (np.abs(lower) + np.abs(upper))
        if np.any(np.abs(ab[1]) < off):
            raise StepSizeError("implicit matrix is not diagonally dominant; reduce dt",
                                dt=dt, step=step_index)
        try:
            interior = scipy.linalg.solve_banded((1, 1), ab, rhs)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise StepSizeError(f"tridiagonal solve failed: {e}", dt=dt, step=step_index) from e

        if not np.all(np.isfinite(interior)):
            raise NumericalBlowupError("non-finite values in grid field", step=step_index)
        values = np.zeros(M + 1)
        values[1:-1] = interior
        t_new = state.t + dt
        return GridField(values=values, L=self.wall(t_new), t=t_new)

    def run(self, initial: GridField, steps: int, sample_times: Sequence[float],
            t_end: Optional[float] = None) -> List[GridField]:
        """Integrate with ``steps`` uniform steps over [0, t_end], landing on every sample time.

        The trajectory holds the initial field followed by one snapshot per
        requested positive sample time.
        """
        trajectory = [initial]
        if steps == 0:
            return trajectory
        targets = sorted({float(t) for t in sample_times if t > initial.t})
        if t_end is None:
            t_end = targets[-1] if targets else initial.t
        if t_end <= initial.t:
            return trajectory
        pe = self.peclet_number(initial.M, t_end)
        if pe >= 1.0:
            logger.warning(f"Cell Peclet number {pe:.3g} ≥ 1; centred advection may oscillate")

        grid = np.linspace(initial.t, t_end, steps + 1)
        times = np.union1d(grid, np.asarray(targets, dtype=float))
        times = times[times <= t_end]
        wanted = set(targets)
        logger.debug(f"Integrating {self.clock.value} system: {len(times) - 1} steps, M={initial.M}")

        state = initial
        for index, t_next in enumerate(times[1:], start=1):
            try:
                state = self.step(state, float(t_next) - state.t, step_index=index)
            except FFHeatError as e:
                e.context.setdefault("t", state.t)
                raise
            # pin the clock to the grid time so snapshots land on requested values
            state.t = float(t_next)
            state.L = self.wall(state.t)
            if float(t_next) in wanted:
                trajectory.append(state)
        return trajectory


def step(state: GridField, dt: float, sched: ScheduleConfig, kappa: float,
         protocol: Optional[FastForwardProtocol] = None) -> GridField:
    """Advance one step; see MovingBoxIntegrator.step."""
    return MovingBoxIntegrator(sched, kappa, protocol).step(state, dt)


def run(md: ModalDecomposition, sched: ScheduleConfig, protocol: Optional[FastForwardProtocol],
        M: int, steps: int, sample_times: Sequence[float], t_end: Optional[float] = None) -> List[GridField]:
    """Project the initial profile onto the xi-grid and integrate."""
    integrator = MovingBoxIntegrator(sched, md.kappa, protocol)
    initial = integrator.initial_field(md, M)
    return integrator.run(initial, steps, sample_times, t_end)
