"""Experiment runner: evaluates the configured solvers and writes CSV datasets plus a manifest."""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
import pandas as pd
from jinja2 import Environment, FileSystemLoader
from scipy.interpolate import CubicSpline

from src import __version__
from src.core.config import NUMERICS_DEFAULTS, resolve_output_dir
from src.core.exceptions import ConfigError, FFHeatError
from src.core.fastforward import FastForwardProtocol
from src.core.models import (Clock, DecayModel, FieldSamples, FluxField, FluxSource,
                             GaussianProfile, GridField, ModalDecomposition, RunConfig)
from src.core.observables import (SeriesField, compare_fields, count_flux_sign_changes,
                                  flux_localization, grid_heat_flux, heat_flux, profile_width,
                                  series_defect)
from src.core.schedule import wall_position
from src.core.spectral import project_profile
from src.services.integrator import MovingBoxIntegrator

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"
MANIFEST_NAME = "manifest.txt"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _fmt(value: float) -> str:
    return repr(float(value))


@dataclass
class ExperimentResult:
    """Outcome of one run_experiment call."""
    exit_code: int
    output_dir: Path
    files: List[str] = field(default_factory=list)
    results: Dict[str, str] = field(default_factory=dict)
    error: Optional[FFHeatError] = None


class ExperimentRunner:
    """Runs every configured (mode, solver) combination for one RunConfig."""

    def __init__(self, config: RunConfig, output_dir: Optional[Path] = None,
                 explicit_keys: Optional[Set[str]] = None, assumed_keys: Optional[Set[str]] = None,
                 source: str = "<config>"):
        self.config = config.resolved()
        self.output_dir = Path(output_dir) if output_dir is not None else \
            resolve_output_dir(config_value=self.config.output.output_dir)
        self.explicit_keys = set(explicit_keys or ())
        self.assumed_keys = set(assumed_keys or ())
        self.source = source
        self.files: List[str] = []
        self.results: Dict[str, str] = {}
        self.tail_bound: Optional[float] = None
        self.protocol: Optional[FastForwardProtocol] = None

    # --- sampling grids -------------------------------------------------

    @property
    def T_FF(self) -> float:
        return self.config.schedule.T_FF

    def sample_times(self) -> np.ndarray:
        return np.asarray(sorted(set(self.config.output.sample_times)), dtype=float)

    def flux_times(self) -> np.ndarray:
        return np.linspace(0.0, self.T_FF, self.config.output.flux_times)

    def stations(self) -> np.ndarray:
        """Fixed flux station positions over the initial box, inside every later box."""
        return np.linspace(0.0, self.config.schedule.L0, self.config.output.x_resolution)

    def x_grid(self, clock: Clock, t: float) -> np.ndarray:
        L = wall_position(self.config.schedule, t, clock)
        return np.linspace(0.0, L, self.config.output.x_resolution)

    # --- solvers ---------------------------------------------------------

    def project(self) -> ModalDecomposition:
        cfg = self.config
        profile = GaussianProfile(x0=cfg.profile.x0, sigma=cfg.profile.sigma,
                                  domain_length=cfg.schedule.L0)
        md = project_profile(profile, cfg.schedule.L0, cfg.numerics.n_max, cfg.numerics.quad_points,
                             kappa=cfg.physics.kappa, tail_tol=cfg.numerics.tail_tol)
        self.tail_bound = md.tail_bound
        logger.info(f"Projected profile onto {md.n_max} modes, tail bound {md.tail_bound:.3e}")
        return md

    def series_field(self, md: ModalDecomposition, clock: Clock,
                     decay_model: Optional[DecayModel] = None) -> SeriesField:
        return SeriesField(md=md, schedule=self.config.schedule, clock=clock,
                           decay_model=decay_model or self.config.numerics.decay_model,
                           protocol=self.protocol if clock is Clock.FAST_FORWARD else None)

    def integrator(self, clock: Clock) -> MovingBoxIntegrator:
        protocol = self.protocol if clock is Clock.FAST_FORWARD else None
        return MovingBoxIntegrator(self.config.schedule, self.config.physics.kappa, protocol)

    def grid_run(self, md: ModalDecomposition, clock: Clock, M: int, dt: float,
                 times: np.ndarray) -> Dict[float, GridField]:
        """Integrate to T_FF and return snapshots keyed by time."""
        integrator = self.integrator(clock)
        initial = integrator.initial_field(md, M)
        steps = max(1, int(round(self.T_FF / dt)))
        targets = sorted({float(t) for t in times if t > 0})
        trajectory = integrator.run(initial, steps, targets, t_end=self.T_FF)
        snapshots = {0.0: initial}
        snapshots.update(zip(targets, trajectory[1:]))
        return snapshots

    # --- datasets --------------------------------------------------------

    def _write_csv(self, name: str, columns: Tuple[str, str, str], rows: List[np.ndarray]) -> None:
        data = np.vstack(rows) if rows else np.empty((0, 3))
        df = pd.DataFrame(data, columns=list(columns))
        df = df.sort_values(by=[columns[0], columns[1]], kind="mergesort").reset_index(drop=True)
        path = self.output_dir / name
        df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
        self.files.append(name)
        logger.info(f"Wrote {len(df)} rows to {path}")

    @staticmethod
    def _rows(t: float, x: np.ndarray, values: np.ndarray) -> np.ndarray:
        return np.column_stack([np.full(x.size, t), x, values])

    def _series_outputs(self, md: ModalDecomposition, clock: Clock) -> List[FluxField]:
        evaluator = self.series_field(md, clock)
        rows = []
        for t in self.sample_times():
            x = self.x_grid(clock, t)
            rows.append(self._rows(t, x, evaluator.values(x, t)))
        self._write_csv(f"profile_{clock.value}_series.csv", ("t", "x", "u"), rows)

        fluxes = [heat_flux(evaluator, self.x_grid(clock, t), float(t)) for t in self.flux_times()]
        self._write_csv(f"flux_{clock.value}_series.csv", ("t", "x", "J"),
                        [self._rows(f.t, f.positions, f.flux_values) for f in fluxes])
        at_stations = [heat_flux(evaluator, self.stations(), float(t)) for t in self.flux_times()]

        widths = [profile_width(evaluator, float(t), NUMERICS_DEFAULTS["width_points"])
                  for t in self.sample_times()]
        for t, width in zip(self.sample_times(), widths):
            self.results[f"{clock.value}.series.width@{_fmt(t)}"] = _fmt(width)
        self._flux_summary(clock, "series", fluxes, at_stations)
        return fluxes

    def _grid_outputs(self, clock: Clock, snapshots: Dict[float, GridField]) -> List[FluxField]:
        kappa = self.config.physics.kappa
        rows = []
        for t in self.sample_times():
            snap = snapshots[float(t)]
            x = self.x_grid(clock, t)
            spline = CubicSpline(snap.positions, snap.values)
            rows.append(self._rows(t, x, spline(np.clip(x, 0.0, snap.L))))
        self._write_csv(f"profile_{clock.value}_grid.csv", ("t", "x", "u"), rows)

        fluxes, at_stations = [], []
        stations = self.stations()
        for t in self.flux_times():
            raw = grid_heat_flux(snapshots[float(t)], kappa)
            spline = CubicSpline(raw.positions, raw.flux_values)
            x = self.x_grid(clock, t)
            fluxes.append(FluxField(positions=x, flux_values=spline(np.clip(x, 0.0, raw.positions[-1])),
                                    t=float(t), source=FluxSource.GRID))
            at_stations.append(FluxField(positions=stations, flux_values=spline(stations),
                                         t=float(t), source=FluxSource.GRID))
        self._write_csv(f"flux_{clock.value}_grid.csv", ("t", "x", "J"),
                        [self._rows(f.t, f.positions, f.flux_values) for f in fluxes])
        self._flux_summary(clock, "grid", fluxes, at_stations)
        return fluxes

    def _flux_summary(self, clock: Clock, solver: str, fluxes: List[FluxField],
                      at_stations: List[FluxField]) -> None:
        """Localization over the whole current box; sign changes at the fixed stations."""
        prefix = f"{clock.value}.{solver}"
        self.results[f"{prefix}.flux_sign_changes"] = str(count_flux_sign_changes(at_stations))
        self.results[f"{prefix}.flux_localization"] = _fmt(flux_localization(fluxes))

    # --- series vs grid gate --------------------------------------------

    def discretization_estimate(self, md: ModalDecomposition, clock: Clock,
                                fine: GridField) -> float:
        """Relative L2 gap between the grid run and a (M/2, 2dt) run on shared nodes at T_FF."""
        numerics = self.config.numerics
        if numerics.M < 32 or numerics.M % 2:
            raise ConfigError("numerics.M must be even and ≥ 32 for the half-resolution estimate",
                              key="numerics.M", M=numerics.M)
        coarse = self.grid_run(md, clock, numerics.M // 2, 2.0 * numerics.dt, np.array([self.T_FF]))
        coarse_end = coarse[float(self.T_FF)]
        shared = fine.positions[::2]
        report = compare_fields(FieldSamples(shared, coarse_end.values),
                                FieldSamples(shared, fine.values[::2]))
        return report.relative_l2

    def decay_model_discrepancy(self, md: ModalDecomposition, clock: Clock) -> float:
        x = self.x_grid(clock, self.T_FF)
        literal = self.series_field(md, clock, DecayModel.LITERAL).values(x, self.T_FF)
        integrated = self.series_field(md, clock, DecayModel.INTEGRATED).values(x, self.T_FF)
        return compare_fields(FieldSamples(x, integrated), FieldSamples(x, literal)).relative_l2

    def model_discrepancy(self, md: ModalDecomposition, clock: Clock) -> float:
        """Relative L2 size at T_FF of the grid response to the series field's own PDE defect.

        The series field u_s satisfies du_s/dt = kappa^2 d_xx u_s + V u_s + R with
        a defect R that is nonzero whenever the series is not an exact solution.
        The exact solution then differs from u_s by e with
        de/dt = kappa^2 d_xx e + V e - R and e(0) = 0; e is integrated here
        with the same scheme as the grid run.
        """
        numerics = self.config.numerics
        evaluator = self.series_field(md, clock)
        delta_max = 1e-5 * self.T_FF

        def forcing(xi: np.ndarray, t: float, dt: float) -> np.ndarray:
            return -series_defect(evaluator, xi, t + 0.5 * dt, min(delta_max, 0.125 * dt))

        protocol = self.protocol if clock is Clock.FAST_FORWARD else None
        integrator = MovingBoxIntegrator(self.config.schedule, self.config.physics.kappa,
                                         protocol, forcing=forcing)
        zero = GridField(values=np.zeros(numerics.M + 1), L=integrator.wall(0.0), t=0.0)
        steps = max(1, int(round(self.T_FF / numerics.dt)))
        response = integrator.run(zero, steps, [self.T_FF], t_end=self.T_FF)[-1]
        series = evaluator.values(response.positions, self.T_FF)
        return compare_fields(FieldSamples(response.positions, series + response.values),
                              FieldSamples(response.positions, series)).relative_l2

    def gate(self, md: ModalDecomposition, clock: Clock, fine: GridField) -> None:
        series = self.series_field(md, clock).values(fine.positions, self.T_FF)
        report = compare_fields(FieldSamples(fine.positions, fine.values, {"solver": "grid"}),
                                FieldSamples(fine.positions, series, {"solver": "series"}))
        estimate = self.discretization_estimate(md, clock, fine)
        decay = self.decay_model_discrepancy(md, clock)
        model = self.model_discrepancy(md, clock)
        budget = estimate + decay + model + (self.tail_bound or 0.0)
        passed = report.relative_l2 <= budget
        prefix = f"{clock.value}.gate"
        self.results.update({
            f"{prefix}.l2": _fmt(report.l2),
            f"{prefix}.linf": _fmt(report.linf),
            f"{prefix}.relative_l2": _fmt(report.relative_l2),
            f"{prefix}.discretization_estimate": _fmt(estimate),
            f"{prefix}.decay_model_discrepancy": _fmt(decay),
            f"{prefix}.model_discrepancy": _fmt(model),
            f"{prefix}.budget": _fmt(budget),
            f"{prefix}.result": "pass" if passed else "fail",
        })
        log = logger.info if passed else logger.warning
        log(f"Series-vs-grid gate ({clock.value}): relative L2 {report.relative_l2:.3e} "
            f"vs budget {budget:.3e} -> {'pass' if passed else 'fail'}")

    # --- driver ----------------------------------------------------------

    def execute(self) -> None:
        numerics = self.config.numerics
        if Clock.FAST_FORWARD in self.config.modes:
            self.protocol = FastForwardProtocol(schedule=self.config.schedule,
                                                basis=numerics.basis_normalization,
                                                theta_exponent=numerics.theta_exponent)
        md = self.project()
        for clock in self.config.modes:
            if "series" in self.config.solvers:
                logger.info(f"Running {clock.value} system with the series solver")
                self._series_outputs(md, clock)
            else:
                self.results[f"{clock.value}.decay_model_discrepancy"] = \
                    _fmt(self.decay_model_discrepancy(md, clock))
            if "grid" in self.config.solvers:
                logger.info(f"Running {clock.value} system with the grid solver")
                times = np.union1d(self.sample_times(), self.flux_times())
                snapshots = self.grid_run(md, clock, numerics.M, numerics.dt, times)
                self._grid_outputs(clock, snapshots)
                if "series" in self.config.solvers:
                    self.gate(md, clock, snapshots[float(self.T_FF)])

    def run(self) -> ExperimentResult:
        """Execute and always write the manifest; never raises FFHeatError."""
        started = time.perf_counter()
        error: Optional[FFHeatError] = None
        exit_code = EXIT_OK
        self.output_dir.mkdir(parents=True, exist_ok=True)
        try:
            self.execute()
        except ConfigError as e:
            error, exit_code = e, EXIT_CONFIG
        except FFHeatError as e:
            error, exit_code = e, EXIT_NUMERICAL
        if error is not None:
            logger.error(f"Experiment aborted: {error}")
        self.write_manifest(exit_code, error, time.perf_counter() - started)
        return ExperimentResult(exit_code=exit_code, output_dir=self.output_dir,
                                files=list(self.files), results=dict(self.results), error=error)

    def write_manifest(self, exit_code: int, error: Optional[FFHeatError], duration: float) -> Path:
        env = Environment(loader=FileSystemLoader(str(TEMPLATES_DIR)), trim_blocks=True,
                          lstrip_blocks=True, keep_trailing_newline=True)
        template = env.get_template("manifest.txt.j2")
        error_info = None
        if error is not None:
            error_info = {"type": type(error).__name__, "message": error.message,
                          "context": error.context}
        text = template.render(
            version=__version__,
            source=self.source,
            status="ok" if exit_code == EXIT_OK else "failed",
            exit_code=exit_code,
            duration=f"{duration:.3f}",
            error=error_info,
            config=self.config.to_flat_dict(),
            explicit=self.explicit_keys,
            assumed=self.assumed_keys,
            tail_bound=_fmt(self.tail_bound) if self.tail_bound is not None else "n/a",
            results=self.results,
            files=self.files,
        )
        path = self.output_dir / MANIFEST_NAME
        path.write_text(text, encoding="utf-8", newline="\n")
        logger.info(f"Wrote manifest to {path}")
        return path


def run_experiment(config: RunConfig, output_dir: Optional[Path] = None,
                   explicit_keys: Optional[Set[str]] = None,
                   assumed_keys: Optional[Set[str]] = None, source: str = "<config>") -> ExperimentResult:
    """Run one experiment; the exit code is 0 on success, 1 for config errors, 2 otherwise."""
    runner = ExperimentRunner(config, output_dir, explicit_keys, assumed_keys, source)
    return runner.run()
