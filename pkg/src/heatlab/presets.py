"""Named experiment presets: every study reported by this package can be
reproduced from here (or from the command line via --preset) with no free
parameters left to choose."""

from __future__ import annotations

from .errors import ConfigError
from .experiments import EXPERIMENTS, ExperimentOutcome

# preset name -> (experiment name, fixed overrides)
PRESETS: dict[str, tuple[str, dict]] = {
    "comparison-suite": ("comparison-suite", {}),
    "positivity": ("positivity", {}),
    "nonuniqueness-a": ("nonuniqueness-a", {}),
    "uniqueness-trivial-a": ("uniqueness-trivial-a", {}),
    "threshold-scan": ("threshold-scan", {}),
    "extinction": ("extinction", {}),
    "crossval": ("crossval", {}),
    "uniqueness-probe-a": ("uniqueness-probe", {"case": "super-linear-flux"}),
    "uniqueness-probe-b": ("uniqueness-probe", {"case": "sub-linear-flux-positive-data"}),
}

# oracle name -> experiment name
ORACLES: dict[str, str] = {
    "heat": "heat-oracle",
    "absorption": "absorption-oracle",
}


def available_presets() -> list[str]:
    return sorted(PRESETS)


def run_preset(name: str) -> ExperimentOutcome:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; options: {available_presets()}")
    experiment, overrides = PRESETS[name]
    return EXPERIMENTS[experiment](**overrides)


def run_oracle(name: str) -> ExperimentOutcome:
    if name not in ORACLES:
        raise ConfigError(f"unknown oracle {name!r}; options: {sorted(ORACLES)}")
    return EXPERIMENTS[ORACLES[name]]()
