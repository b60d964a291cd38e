"""Agent-based retail department simulator."""

import json

from . import _core
from ._core import (
    ConfigError,
    MalformedCsv,
    ModelBug,
    TooFewGroups,
    __version__,
    anova,
    corrected_alpha,
    f_upper_tail,
    format_p,
    preset_names,
    studentized_range_cdf,
    studentized_range_quantile,
    tukey,
)


def _dump(config):
    return "" if config is None else json.dumps(config)


def default_config(department="ATV"):
    """Default scenario as a dict ("ATV" or "WW")."""
    return json.loads(_core.default_config_json(department))


def normalize_config(config):
    """Validate a (possibly partial) scenario and fill in defaults."""
    return json.loads(_core.normalize_config_json(_dump(config)))


def config_digest(config=None):
    return _core.config_digest(_dump(config))


def simulate(config=None, rep=0, level=0.0):
    """One replication; returns the outcome row as a dict."""
    return json.loads(_core.simulate_json(_dump(config), rep, level))


def experiment(name, config=None, reps=None, jobs=1):
    """Preset sweep; returns {"rows", "dependent_vars", "report"}."""
    return json.loads(_core.experiment_json(name, _dump(config), reps, jobs))


def analyse(csv_text, dependent_vars, family_alpha=0.05, family_size=None):
    """ANOVA and Tukey report text for a results CSV."""
    return _core.analyse_csv(csv_text, list(dependent_vars), family_alpha, family_size)


__all__ = [
    "ConfigError",
    "MalformedCsv",
    "ModelBug",
    "TooFewGroups",
    "__version__",
    "analyse",
    "anova",
    "config_digest",
    "corrected_alpha",
    "default_config",
    "experiment",
    "f_upper_tail",
    "format_p",
    "normalize_config",
    "preset_names",
    "simulate",
    "studentized_range_cdf",
    "studentized_range_quantile",
    "tukey",
]
