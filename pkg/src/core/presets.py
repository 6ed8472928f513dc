"""Experiment presets reproducing the temperature-profile and heat-flux figures.

Every preset uses kappa=0.5, L0=10, epsilon=0.04, alpha_bar=100. The standard
duration and the Gaussian center and width are not given with the figures;
the values below are assumptions and are labelled as such in the manifest.
"""

from typing import Dict

FIGURE_PARAMETERS = {
    "physics.kappa": "0.5",
    "schedule.L0": "10",
    "schedule.epsilon": "0.04",
    "schedule.alpha_bar": "100",
    "schedule.shape": "cosine",
}

PRESET_ASSUMPTIONS = {
    "schedule.T_standard": "100",
    "profile.x0": "5",
    "profile.sigma": "1",
}

PRESETS: Dict[str, Dict[str, str]] = {
    "fig1": {
        **FIGURE_PARAMETERS,
        **PRESET_ASSUMPTIONS,
        "output.sample_times": "0,0.25,0.5,0.75,1",
    },
    "fig2": {
        **FIGURE_PARAMETERS,
        **PRESET_ASSUMPTIONS,
        "output.sample_times": "0,0.5,1",
        "output.flux_times": "101",
    },
    "fig3": {
        **FIGURE_PARAMETERS,
        **PRESET_ASSUMPTIONS,
        "output.sample_times": "0,1",
        "output.flux_times": "201",
        "output.x_resolution": "401",
    },
}


def preset_text(name: str) -> str:
    """Render a preset in config-file syntax."""
    lines = [f"# preset {name}"]
    lines.extend(f"{key}={value}" for key, value in PRESETS[name].items())
    return "\n".join(lines) + "\n"
