"""Shared domain types: coupling parameters, solution records, grids, fields."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, OutOfScopeRegimeError

FAMILIES = ("I", "II", "III")

#: JSON key order for a serialized solution record.
RECORD_KEYS = ("family", "g_a", "g_m", "g_am", "alpha", "epsilon",
               "mu", "beta", "A", "B", "D", "delta", "residual_max")


@dataclass(frozen=True)
class CouplingParams:
    """Interaction strengths, interconversion strength and detuning.

    epsilon may be None for families II/III, where the detuning is an output
    of the consistency solve rather than an input.  alpha = 0 is allowed at
    construction (the decoupled dynamics limit); nonzero alpha is a per-family
    requirement enforced by validate_params.
    """

    g_a: float
    g_m: float
    g_am: float
    alpha: float
    epsilon: float | None = None

    def with_epsilon(self, epsilon: float) -> "CouplingParams":
        return replace(self, epsilon=epsilon)


def validate_params(params: CouplingParams, family: str) -> list[str]:
    """Return the list of violated admissibility constraints for a family.

    Empty list means admissible.  Never raises: the caller decides whether a
    violation is fatal, so a CLI can report every problem at once.
    """
    if family not in FAMILIES:
        raise ConfigurationError(f"unknown family {family!r}; expected one of {FAMILIES}")
    bad = []
    if params.alpha == 0.0:
        bad.append("alpha must be nonzero: every family couples the two fields")
    if family == "I":
        if params.g_a == params.g_m:
            bad.append("family I is degenerate when g_a equals g_m")
        if params.epsilon is not None and params.epsilon >= 0:
            bad.append("family I requires epsilon < 0")
    elif family == "II":
        if params.g_a >= 0:
            bad.append("family II requires g_a < 0")
        if params.g_m <= 0:
            bad.append("family II requires g_m > 0")
        if params.epsilon is not None and params.epsilon >= 0:
            bad.append("family II requires epsilon < 0")
    else:
        if params.g_m >= 0:
            bad.append("family III requires g_m < 0")
        if params.g_am >= 0:
            bad.append("family III requires g_am < 0")
        if params.epsilon is not None and params.epsilon == 0:
            bad.append("family III requires nonzero epsilon")
    return bad


def delta_from_B(B: float) -> float:
    """Displacement parameter of the superposed form: B = sinh^2(delta)."""
    if not B > 0:
        raise OutOfScopeRegimeError(
            f"B = {B} is outside the supported B > 0 regime")
    return math.asinh(math.sqrt(B))


@dataclass(frozen=True)
class SolutionRecord:
    """One fully determined analytic solution.

    The record carries its coupling set so it can be serialized standalone.
    Consistency of (mu, beta, epsilon, ...) with the family relations is the
    solvers' job; perturbed records are legal inputs for residual probes.
    """

    family: str
    params: CouplingParams
    A: float
    B: float
    D: float
    beta: float
    mu: float
    residual_max: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.family!r}")
        if not self.B > 0:
            raise OutOfScopeRegimeError(
                f"B = {self.B} is outside the supported B > 0 regime")
        if self.params.epsilon is None:
            raise ConfigurationError("a solution record needs a concrete epsilon")

    @property
    def epsilon(self) -> float:
        return self.params.epsilon

    @property
    def delta(self) -> float:
        return delta_from_B(self.B)

    def to_dict(self) -> dict:
        p = self.params
        vals = {"family": self.family, "g_a": p.g_a, "g_m": p.g_m,
                "g_am": p.g_am, "alpha": p.alpha, "epsilon": p.epsilon,
                "mu": self.mu, "beta": self.beta, "A": self.A, "B": self.B,
                "D": self.D, "delta": self.delta,
                "residual_max": self.residual_max}
        return {k: vals[k] for k in RECORD_KEYS}

    def to_json(self) -> str:
        # float repr carries 17 significant digits, above the 15 required
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "SolutionRecord":
        params = CouplingParams(g_a=d["g_a"], g_m=d["g_m"], g_am=d["g_am"],
                                alpha=d["alpha"], epsilon=d["epsilon"])
        return cls(family=d["family"], params=params, A=d["A"], B=d["B"],
                   D=d["D"], beta=d["beta"], mu=d["mu"],
                   residual_max=d.get("residual_max", 0.0))

    @classmethod
    def from_json(cls, text: str) -> "SolutionRecord":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [x_min, x_max).

    Spectral operations additionally require n to be a power of two; that is
    enforced where transforms happen, so finite-difference fallbacks can use
    arbitrary n >= 8.
    """

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 8:
            raise ConfigurationError(f"grid needs n >= 8, got {self.n}")
        if not self.x_max > self.x_min:
            raise ConfigurationError("grid needs x_max > x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def is_power_of_two(self) -> bool:
        return self.n & (self.n - 1) == 0

    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    def k(self) -> np.ndarray:
        """Spectral wavenumbers matching numpy's FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)


def require_power_of_two(grid: Grid, context: str) -> None:
    if not grid.is_power_of_two:
        raise ConfigurationError(
            f"{context} needs a power-of-two grid, got n = {grid.n}")


@dataclass
class FieldPair:
    """Complex atomic/molecular field samples sharing one grid."""

    grid: Grid
    psi_a: np.ndarray
    psi_m: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.psi_a = np.asarray(self.psi_a, dtype=complex)
        self.psi_m = np.asarray(self.psi_m, dtype=complex)
        if self.psi_a.shape != (self.grid.n,) or self.psi_m.shape != (self.grid.n,):
            raise ConfigurationError("field arrays must match the grid length")
        if not (np.all(np.isfinite(self.psi_a)) and np.all(np.isfinite(self.psi_m))):
            raise ConfigurationError("field arrays must be finite")

    def copy(self) -> "FieldPair":
        return FieldPair(self.grid, self.psi_a.copy(), self.psi_m.copy(), self.t)


@dataclass(frozen=True)
class Diagnostics:
    """Per-sample conserved quantities and amplitude drift norms."""

    t: float
    N: float
    N_a: float
    N_m: float
    E: float
    drift_a: float = 0.0
    drift_m: float = 0.0
