"""Scenario configuration: defaults, validation, selector registry, TOML files."""

from __future__ import annotations

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigInvalid
from .fields import cutoff_eta0
from .grid import HalfBoxGrid
from .params import HardyParams, make_params

SCENARIOS = (
    "verify-identity",
    "trace",
    "c-beta",
    "b-n",
    "hardy",
    "solve",
    "eps-sweep",
    "dual",
    "extract-k",
    "lambda-omega",
    "poisson-g",
    "blowup",
)

RHS_SELECTORS = ("zero", "one", "bump", "log-divergent")
BOUNDARY_SELECTORS = ("zero", "one", "bump", "lambda-trace", "omega-mass-divergent")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    N: int = 2
    beta: float = 0.0
    a: float = 0.45
    n_list: tuple[int, ...] = (16, 32, 64)
    levels: int = 12
    resolution: int = 64
    eps_list: tuple[float, ...] = tuple(4.0 ** (-j) for j in range(1, 7))
    rhs: str = "one"
    boundary: str = "zero"
    out: str | None = None
    seed: int = 0
    r0: float | None = None

    def params(self) -> HardyParams:
        return make_params(self.N, self.beta)


def validate_config(cfg: ScenarioConfig) -> ScenarioConfig:
    if cfg.scenario not in SCENARIOS:
        raise ConfigInvalid(
            f"unknown scenario {cfg.scenario!r}; choose one of {', '.join(SCENARIOS)}"
        )
    if cfg.N not in (2, 3):
        raise ConfigInvalid("N must be 2 or 3 for grid scenarios")
    beta0 = -0.25 * cfg.N * cfg.N
    if cfg.beta < beta0:
        raise ConfigInvalid(
            f"beta={cfg.beta} violates beta >= -N^2/4 = {beta0}: "
            "the characteristic exponents tau(tau+N) = beta would be complex"
        )
    if cfg.rhs not in RHS_SELECTORS:
        raise ConfigInvalid(
            f"unknown rhs selector {cfg.rhs!r}; built-ins: {', '.join(RHS_SELECTORS)}"
        )
    if cfg.boundary not in BOUNDARY_SELECTORS:
        raise ConfigInvalid(
            f"unknown boundary selector {cfg.boundary!r}; built-ins: "
            f"{', '.join(BOUNDARY_SELECTORS)}"
        )
    if not (0.0 < cfg.a < 1.0 / np.sqrt(cfg.N)):
        raise ConfigInvalid(f"halfwidth a must lie in (0, 1/sqrt(N)), got {cfg.a}")
    if any(n < 4 or n % 2 for n in cfg.n_list):
        raise ConfigInvalid("grid sizes must be even and >= 4")
    if any(e <= 0 for e in cfg.eps_list) or any(
        b >= a for a, b in zip(cfg.eps_list, cfg.eps_list[1:])
    ):
        raise ConfigInvalid("epsilon list must be positive and strictly decreasing")
    return cfg


def rhs_selector(name: str, p: HardyParams, grid: HalfBoxGrid):
    """Vectorized interior source for a built-in selector name."""
    if name == "zero":
        return lambda x: np.zeros(x.shape[0])
    if name == "one":
        return lambda x: np.ones(x.shape[0])
    if name == "bump":
        scale = 4.0 / grid.a

        def f(x):
            r = np.sqrt(np.sum(x * x, axis=1))
            return cutoff_eta0(scale * r)

        return f
    if name == "log-divergent":
        from .experiments import log_divergent_source

        return log_divergent_source(p)
    raise ConfigInvalid(f"unknown rhs selector {name!r}; built-ins: {', '.join(RHS_SELECTORS)}")


def boundary_selector(name: str, p: HardyParams, grid: HalfBoxGrid):
    """Vectorized boundary data for a built-in selector name.

    Selectors are functions of the boundary point; they are sampled on the
    discrete boundary, so unbounded profiles are capped at the half-cell
    radius around the origin node.
    """
    if name == "zero":
        return lambda x: np.zeros(x.shape[0])
    if name == "one":
        return lambda x: np.ones(x.shape[0])
    if name == "bump":
        scale = 8.0 / grid.a

        def g(x):
            rp = np.sqrt(np.sum(x[:, :-1] ** 2, axis=1))
            return np.where(x[:, -1] == 0.0, cutoff_eta0(scale * rp), 0.0)

        return g
    if name == "lambda-trace":
        from .fields import lambda_fund_values

        def g(x):
            out = np.zeros(x.shape[0])
            side = x[:, -1] > 0.0
            if np.any(side):
                out[side] = lambda_fund_values(p, x[side])
            return out

        return g
    if name == "omega-mass-divergent":
        # |x'|^{1-N} on the flat part: finite tau-weighted boundary mass for
        # beta > 0 but logarithmically divergent unweighted mass near 0
        cap = 0.5 * grid.h
        scale = 8.0 / grid.a

        def g(x):
            rp = np.sqrt(np.sum(x[:, :-1] ** 2, axis=1))
            rp = np.maximum(rp, cap)
            prof = rp ** (1.0 - grid.N) * cutoff_eta0(scale * rp)
            return np.where(x[:, -1] == 0.0, prof, 0.0)

        return g
    raise ConfigInvalid(
        f"unknown boundary selector {name!r}; built-ins: {', '.join(BOUNDARY_SELECTORS)}"
    )


def _coerce(cfg_dict: dict) -> ScenarioConfig:
    known = {
        "scenario", "N", "beta", "a", "n_list", "levels", "resolution",
        "eps_list", "rhs", "boundary", "out", "seed", "r0",
    }
    unknown = set(cfg_dict) - known
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
    if "scenario" not in cfg_dict:
        raise ConfigInvalid("every scenario table needs a 'scenario' key")
    if "n_list" in cfg_dict:
        cfg_dict["n_list"] = tuple(int(v) for v in cfg_dict["n_list"])
    if "eps_list" in cfg_dict:
        cfg_dict["eps_list"] = tuple(float(v) for v in cfg_dict["eps_list"])
    return validate_config(ScenarioConfig(**cfg_dict))


def parse_config_file(path) -> list[ScenarioConfig]:
    """Parse a TOML experiment file: one [[scenario]] table per run."""
    path = Path(path)
    if not path.exists():
        raise ConfigInvalid(f"config file not found: {path}")
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigInvalid(f"malformed config file {path}: {exc}") from exc
    tables = data.get("scenario")
    if not tables:
        raise ConfigInvalid("config file must contain at least one [[scenario]] table")
    return [_coerce(dict(tbl)) for tbl in tables]


def config_from_flags(args) -> ScenarioConfig:
    """Build a validated config from parsed CLI flags (flags override defaults)."""
    fields = {"scenario": args.scenario}
    for key in ("N", "beta", "a", "levels", "resolution", "rhs", "boundary", "out", "seed", "r0"):
        val = getattr(args, key, None)
        if val is not None:
            fields[key] = val
    if getattr(args, "n", None):
        fields["n_list"] = tuple(int(v) for v in args.n)
    if getattr(args, "eps", None):
        fields["eps_list"] = tuple(float(v) for v in args.eps)
    return _coerce(fields)
