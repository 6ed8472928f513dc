"""Reported quantities: temperature profiles, heat flux, widths and field comparisons."""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import DomainError, UndefinedWidthError, UsageError
from .fastforward import FastForwardProtocol, eval_ff_curvature, eval_ff_gradient, eval_ff_solution
from .models import (Clock, DecayModel, ErrorReport, FieldSamples, FluxField, FluxSource,
                     GridField, ModalDecomposition, ScheduleConfig)
from .quadrature import composite_rule
from .schedule import wall_position, wall_velocity
from .spectral import decay_clock, eval_standard_adiabatic, series_curvature, series_gradient


@dataclass(frozen=True)
class SeriesField:
    """Analytic series solution of the standard or fast-forwarded system."""
    md: ModalDecomposition
    schedule: ScheduleConfig
    clock: Clock = Clock.STANDARD
    decay_model: DecayModel = DecayModel.LITERAL
    protocol: Optional[FastForwardProtocol] = field(default=None)

    @property
    def source(self) -> FluxSource:
        if self.clock is Clock.FAST_FORWARD:
            return FluxSource.SERIES_FF
        return FluxSource.SERIES_STANDARD

    @property
    def kappa(self) -> float:
        return self.md.kappa

    def wall(self, t: float) -> float:
        return wall_position(self.schedule, t, self.clock)

    def values(self, x, t: float) -> np.ndarray:
        if self.clock is Clock.FAST_FORWARD:
            return np.atleast_1d(eval_ff_solution(self.md, self.schedule, x, t,
                                                  self.decay_model, self.protocol))
        return np.atleast_1d(eval_standard_adiabatic(self.md, self.schedule, x, t, self.decay_model))

    def gradient(self, x, t: float) -> np.ndarray:
        if self.clock is Clock.FAST_FORWARD:
            return eval_ff_gradient(self.md, self.schedule, x, t, self.decay_model, self.protocol)
        L = self.wall(t)
        s = decay_clock(self.schedule, t, Clock.STANDARD, self.decay_model)
        return series_gradient(self.md, np.atleast_1d(x), L, s)

    def curvature(self, x, t: float) -> np.ndarray:
        if self.clock is Clock.FAST_FORWARD:
            return eval_ff_curvature(self.md, self.schedule, x, t, self.decay_model, self.protocol)
        L = self.wall(t)
        s = decay_clock(self.schedule, t, Clock.STANDARD, self.decay_model)
        return series_curvature(self.md, np.atleast_1d(x), L, s)

    def potential(self, x, t: float) -> np.ndarray:
        """Reaction coefficient of the equation this field is meant to solve."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.clock is Clock.FAST_FORWARD:
            protocol = self.protocol or FastForwardProtocol(schedule=self.schedule)
            return np.asarray(protocol.v_ff(x, t), dtype=float)
        return np.zeros_like(x)


def series_defect(evaluator: SeriesField, xi, t: float, delta: float) -> np.ndarray:
    """Residual du/dt - kappa^2 d_xx u - V u of a series field at x = xi L(t).

    The time derivative is taken at fixed xi with a fourth-order stencil of
    half-width 2*delta and converted to fixed x with the wall velocity, so
    t - 2*delta must stay non-negative.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if t - 2.0 * delta < 0:
        raise DomainError("defect stencil reaches before t = 0", t=t, delta=delta)

    def at(tp: float) -> np.ndarray:
        return evaluator.values(xi * evaluator.wall(tp), tp)

    dw_dt = (at(t - 2.0 * delta) - 8.0 * at(t - delta)
             + 8.0 * at(t + delta) - at(t + 2.0 * delta)) / (12.0 * delta)
    L = evaluator.wall(t)
    x = xi * L
    du_dt = dw_dt - xi * wall_velocity(evaluator.schedule, t, evaluator.clock) * evaluator.gradient(x, t)
    return (du_dt - evaluator.kappa ** 2 * evaluator.curvature(x, t)
            - evaluator.potential(x, t) * evaluator.values(x, t))


def heat_flux(evaluator: SeriesField, x, t: float) -> FluxField:
    """Fourier-law flux J = -kappa^2 du/dx of a series field, differentiated term by term."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size == 0:
        raise DomainError("heat flux needs a non-empty x-grid", t=t)
    J = -(evaluator.kappa ** 2) * evaluator.gradient(x, t)
    return FluxField(positions=x, flux_values=J, t=t, source=evaluator.source)


def finite_difference_gradient(values: np.ndarray, spacing: float) -> np.ndarray:
    """Fourth-order derivative on a uniform grid: centred inside, one-sided at the walls."""
    f = np.asarray(values, dtype=float)
    if f.size < 5:
        raise DomainError("finite differences need at least 5 nodes", n=f.size)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / 12.0
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / 12.0
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / 12.0
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / 12.0
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / 12.0
    return d / spacing


def grid_heat_flux(field_: GridField, kappa: float) -> FluxField:
    """Flux of a grid field at its own nodes."""
    dx = field_.L / field_.M
    J = -(kappa ** 2) * finite_difference_gradient(field_.values, dx)
    return FluxField(positions=field_.positions, flux_values=J, t=field_.t, source=FluxSource.GRID)


def profile_width(evaluator: SeriesField, t: float, points: int = 4096) -> float:
    """Root of the second central moment of u(., t) over the current box, u clipped at 0."""
    L = evaluator.wall(t)
    nodes, weights = composite_rule(0.0, L, points)
    u = np.clip(evaluator.values(nodes, t), 0.0, None)
    mass = float(np.dot(weights, u))
    if not mass > 0:
        raise UndefinedWidthError("field has no positive mass", t=t)
    mean = float(np.dot(weights, nodes * u)) / mass
    variance = float(np.dot(weights, (nodes - mean) ** 2 * u)) / mass
    return math.sqrt(max(variance, 0.0))


def compare_fields(a: FieldSamples, b: FieldSamples) -> ErrorReport:
    """L2, Linf and relative L2 (relative to b) norms of a - b on a shared uniform grid."""
    if a.positions.shape != b.positions.shape or not np.array_equal(a.positions, b.positions):
        raise UsageError("fields are sampled on different grids",
                         n_a=a.positions.size, n_b=b.positions.size)
    n = a.positions.size
    spacing = float((a.positions[-1] - a.positions[0]) / (n - 1)) if n > 1 else 1.0
    diff = a.values - b.values
    l2 = math.sqrt(spacing * float(np.sum(diff * diff)))
    ref = math.sqrt(spacing * float(np.sum(b.values * b.values)))
    if ref > 0:
        relative = l2 / ref
    else:
        relative = 0.0 if l2 == 0 else math.inf
    linf = float(np.max(np.abs(diff))) if n else 0.0
    metadata = {"a": dict(a.metadata), "b": dict(b.metadata)}
    return ErrorReport(l2=l2, linf=linf, relative_l2=relative, n_points=n,
                       spacing=spacing, metadata=metadata)


def _flux_table(fluxes: Sequence[FluxField]) -> np.ndarray:
    if not fluxes:
        raise DomainError("no flux samples")
    positions = fluxes[0].positions
    for flux in fluxes[1:]:
        if not np.array_equal(flux.positions, positions):
            raise UsageError("flux samples use different station grids", t=flux.t)
    return np.vstack([flux.flux_values for flux in fluxes])


def count_flux_sign_changes(fluxes: Sequence[FluxField], rel_tol: float = 1e-8) -> int:
    """Sign changes in time of J at each fixed station, summed over positions.

    Samples with |J| below rel_tol * max|J| carry no sign and are skipped.
    """
    table = _flux_table(fluxes)
    scale = float(np.max(np.abs(table)))
    if scale == 0:
        return 0
    signs = np.where(np.abs(table) > rel_tol * scale, np.sign(table), 0.0)
    count = 0
    for column in signs.T:
        nonzero = column[column != 0]
        count += int(np.count_nonzero(nonzero[1:] != nonzero[:-1]))
    return count


def flux_localization(fluxes: Sequence[FluxField]) -> float:
    """Position carrying the largest time-summed |J|.

    Samples may live on different grids (a growing box); each is read on the
    widest grid, with J = 0 beyond its own wall.
    """
    if not fluxes:
        raise DomainError("no flux samples")
    widest = max(fluxes, key=lambda flux: flux.positions[-1]).positions
    total = np.zeros(widest.size)
    for flux in fluxes:
        if np.array_equal(flux.positions, widest):
            total += np.abs(flux.flux_values)
        else:
            total += np.interp(widest, flux.positions, np.abs(flux.flux_values), left=0.0, right=0.0)
    return float(widest[int(np.argmax(total))])
