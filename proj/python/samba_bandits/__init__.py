"""SAMBA multi-armed bandits: algorithm, baselines, harness and theory checks."""

import json

from ._samba import (
    BanditInstance,
    ConfigError,
    RngStream,
    Schedule,
    __version__,
    alpha_threshold,
    embedded_bound_fixed,
    estimate_drift,
    gamma_from_l,
    lambert_w,
    leading_arm,
    run_config,
    run_config_csv,
    samba_select,
    samba_update,
    snapshot_grid,
    verify_json,
)


def verify(suite, seed=0, scale=1.0, jobs=1):
    """Run a verification suite and return its report as a dict."""
    return json.loads(verify_json(suite, seed, scale, jobs))


def run(config, seed=None, jobs=1):
    """Run a config given as a dict or JSON string; returns {name: rows}."""
    text = config if isinstance(config, str) else json.dumps(config)
    return run_config(text, seed, jobs)


__all__ = [
    "BanditInstance",
    "ConfigError",
    "RngStream",
    "Schedule",
    "alpha_threshold",
    "embedded_bound_fixed",
    "estimate_drift",
    "gamma_from_l",
    "lambert_w",
    "leading_arm",
    "run",
    "run_config",
    "run_config_csv",
    "samba_select",
    "samba_update",
    "snapshot_grid",
    "verify",
    "verify_json",
]
