"""Consistency systems that pin down the free parameters of each family.

Family I collapses to closed form.  Families II and III reduce to two scalar
conditions in (mu, epsilon), solved here by a damped Newton iteration and then
expanded back to the full parameter set; every original relation is re-checked
before a record is returned.

Sign branches follow the printed constraint tables, which are oriented for
alpha > 0.  For alpha < 0 the mirror map psi_m -> -psi_m gives the equivalent
solution, so solve with |alpha| and flip D if the other branch is wanted.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .core import CouplingParams, SolutionRecord, validate_params
from .errors import (ConfigurationError, ConvergenceError,
                     InconsistentRootError, NoDropletError, NoRootFoundError,
                     OutOfScopeRegimeError, OutOfScopeRootError,
                     SingularParameterError)

SQRT2 = math.sqrt(2.0)

DEFAULT_TOL = 1e-9

#: default Newton seed-scan boxes, (mu, epsilon) ranges in units of alpha^2
SCAN_BOX_II = ((-10.0, -0.01), (-10.0, -0.01))
SCAN_BOX_III = ((-100.0, -0.01), (-200.0, 200.0))

#: agreement required between alternative closed forms of B at a root
B_AGREEMENT = 1e-8


def default_tol() -> float:
    """Residual tolerance: AMBEC_TOL env var if set, else 1e-9.

    An explicit tol argument anywhere overrides both.
    """
    raw = os.environ.get("AMBEC_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise ConfigurationError(f"AMBEC_TOL={raw!r} is not a number") from None


@dataclass(frozen=True)
class GammaIntermediates:
    """Intermediates expressing D through B: D = Gamma*B + C (C = 0 for II)."""

    Gamma: float
    C: float


def gamma_intermediates(family: str, params: CouplingParams, mu: float,
                        epsilon: float, *, strict: bool = True) -> GammaIntermediates:
    """Compute the family II/III elimination intermediates.

    strict=True raises on a (near-)singular denominator; strict=False lets
    infinities flow so residual probes stay total.
    """
    al, ga, gam = params.alpha, params.g_a, params.g_am
    if family == "II":
        terms = (2.0 * gam * epsilon, -3.0 * ga * epsilon, 3.0 * al * al)
    elif family == "III":
        terms = (2.0 * gam * epsilon, -ga * epsilon, al * al)
    else:
        raise ConfigurationError("family I has no elimination intermediates")
    den = math.fsum(terms)
    scale = sum(abs(t) for t in terms)
    if strict and (scale == 0.0 or abs(den) < 1e-12 * scale):
        raise SingularParameterError(
            f"family {family} denominator {den:.3e} is singular at "
            f"epsilon={epsilon!r}")
    if den == 0.0:
        return GammaIntermediates(math.inf, math.inf if family == "III" else 0.0)
    if family == "II":
        return GammaIntermediates(SQRT2 * (epsilon + 6.0 * mu) * al / den, 0.0)
    return GammaIntermediates(SQRT2 * (epsilon - 2.0 * mu) * al / den,
                              SQRT2 * epsilon * al / den)


def _sum_and_scale(*terms):
    """Signed sum of the terms and the sum of their magnitudes."""
    s = terms[0]
    m = np.abs(terms[0])
    for t in terms[1:]:
        s = s + t
        m = m + np.abs(t)
    return s, m


def _parts_family_II(params: CouplingParams, mu, epsilon):
    """Raw family II conditions and their term-magnitude scales."""
    al, ga, gm, gam = params.alpha, params.g_a, params.g_m, params.g_am
    mu = np.asarray(mu, dtype=float)
    epsilon = np.asarray(epsilon, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        den = 2.0 * gam * epsilon - 3.0 * ga * epsilon + 3.0 * al * al
        G = SQRT2 * (epsilon + 6.0 * mu) * al / den
        f1, s1 = _sum_and_scale(SQRT2 * gm * al * G * G,
                                (al * al - ga * epsilon) * G,
                                -SQRT2 * al * (6.0 * mu - epsilon))
        f2, s2 = _sum_and_scale(gam * al * G * G,
                                SQRT2 * (4.0 * al * al - 3.0 * ga * epsilon) * G,
                                -24.0 * mu * al)
    return f1, f2, s1, s2


def _parts_family_III(params: CouplingParams, mu, epsilon):
    """Raw family III conditions (B eliminated) and their scales."""
    al, ga, gm, gam = params.alpha, params.g_a, params.g_m, params.g_am
    mu = np.asarray(mu, dtype=float)
    epsilon = np.asarray(epsilon, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        den = 2.0 * gam * epsilon - ga * epsilon + al * al
        G = SQRT2 * (epsilon - 2.0 * mu) * al / den
        C = SQRT2 * epsilon * al / den
        dB = (al * al - ga * epsilon) * G - 4.0 * SQRT2 * mu * al
        B = (3.0 * SQRT2 * mu * al + (ga * epsilon - al * al) * C) / dB
        two = 2.0 * mu - epsilon
        f1, s1 = _sum_and_scale(B * B * (gm * G * G - two),
                                B * (2.0 * gm * G * C - 5.0 * mu + 2.0 * epsilon),
                                gm * C * C - (3.0 * mu - epsilon))
        f2, s2 = _sum_and_scale(
            B * B * (gam * al * G * G + 8.0 * mu * al + SQRT2 * ga * epsilon * G),
            B * (2.0 * gam * al * G * C + SQRT2 * ga * epsilon * (G + C) + 8.0 * mu * al),
            gam * al * C * C + SQRT2 * ga * epsilon * C)
    return f1, f2, s1, s2


def conditions_family_II(params: CouplingParams, mu, epsilon):
    """The two cast family II conditions over 1 + term magnitudes.

    Both vanish exactly at a consistent (mu, epsilon); the normalization
    keeps values O(1) so one tolerance fits every parameter scale.
    Accepts scalars or arrays.
    """
    f1, f2, s1, s2 = _parts_family_II(params, mu, epsilon)
    return f1 / (1.0 + s1), f2 / (1.0 + s2)


def conditions_family_III(params: CouplingParams, mu, epsilon):
    """The two quadratic-in-B family III conditions, normalized as in II."""
    f1, f2, s1, s2 = _parts_family_III(params, mu, epsilon)
    return f1 / (1.0 + s1), f2 / (1.0 + s2)


def _newton2(parts, v0, max_iter: int = 100, tol: float = 1e-12,
             max_halvings: int = 30, leash: float = 1e3) -> np.ndarray:
    """Damped 2-D Newton with a central finite-difference Jacobian.

    parts(v) returns (raw residual pair, magnitude scale pair).  Steps and
    the line search use the raw residuals under fixed row weights from the
    seed, so the merit keeps its polynomial growth away from roots instead
    of flattening out; convergence is judged on |raw|/(1 + scale) < tol,
    which is parameter-scale-free.  When no damping level improves the
    merit, the smallest in-bounds step is taken anyway, which lets the
    iteration creep across the narrow non-monotone ridges these systems
    have; a stagnation counter and a leash on |v| bound that behavior.
    A few extra polishing steps after convergence push the root to machine
    precision.
    """
    def combine(v):
        r = parts(v)
        return np.array(r[:2], dtype=float), np.array(r[2:], dtype=float)

    v = np.array(v0, dtype=float)
    limit = leash * max(1.0, float(np.max(np.abs(v))))
    raw, scale = combine(v)
    weights = np.where(np.isfinite(scale), 1.0 / (1.0 + scale), 1.0)

    def merit(r):
        x = weights * r
        if not np.all(np.isfinite(x)):
            return math.inf
        return float(np.max(np.abs(x)))

    def converged(r, s):
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(s))):
            return False
        return float(np.max(np.abs(r) / (1.0 + s))) < tol

    polish_left = 3
    best = merit(raw)
    since_best = 0
    for _ in range(max_iter):
        at_root = converged(raw, scale)
        if at_root:
            if polish_left == 0:
                return v
            polish_left -= 1
        elif since_best > 12:
            raise ConvergenceError(
                f"Newton stagnated at residual {merit(raw):.3e}")
        J = np.empty((2, 2))
        for j in range(2):
            h = 1e-7 * max(1.0, abs(v[j]))
            e = np.zeros(2)
            e[j] = h
            hi, _ = combine(v + e)
            lo, _ = combine(v - e)
            J[:, j] = weights * (hi - lo) / (2.0 * h)
        if not np.all(np.isfinite(J)):
            if at_root:
                return v
            raise ConvergenceError(
                f"non-finite Jacobian at (mu, epsilon) = {tuple(v)}")
        try:
            step = np.linalg.solve(J, weights * raw)
        except np.linalg.LinAlgError:
            if at_root:
                return v
            raise ConvergenceError(
                f"singular Jacobian at (mu, epsilon) = {tuple(v)}") from None
        base = merit(raw)
        lam = 1.0
        taken = None
        fallback = None
        for _ in range(max_halvings):
            trial = v - lam * step
            if float(np.max(np.abs(trial))) <= limit:
                t_raw, t_scale = combine(trial)
                if np.all(np.isfinite(t_raw)):
                    fallback = (trial, t_raw, t_scale)
                    if merit(t_raw) < base:
                        taken = fallback
                        break
            lam *= 0.5
        if taken is None:
            if at_root:
                return v
            if fallback is None:
                raise ConvergenceError(
                    f"Newton left the search region at residual {base:.3e}")
            taken = fallback
        v, raw, scale = taken
        m = merit(raw)
        if m < 0.9 * best:
            best = m
            since_best = 0
        else:
            since_best += 1
    if converged(raw, scale):
        return v
    raise ConvergenceError(
        f"no convergence in {max_iter} iterations; last residual {merit(raw):.3e}")


def _safe_div(num: float, den: float) -> float:
    if den == 0.0:
        return math.inf if num != 0.0 else math.nan
    return num / den


def _equations(record: SolutionRecord, params: CouplingParams) -> dict:
    """Every keyed relation of the record's family as (residual, scale).

    Residual is LHS - RHS of the printed relation; scale is the sum of term
    magnitudes, for normalization.  Relations that state two facts carry a
    'b' suffix on the second part.  Total: never raises, returns inf/nan
    residuals where an expression is singular.
    """
    ga, gm, gam, al = params.g_a, params.g_m, params.g_am, params.alpha
    eps = params.epsilon if params.epsilon is not None else record.epsilon
    mu, beta, A, B, D = record.mu, record.beta, record.A, record.B, record.D
    b2 = beta * beta
    A2, D2 = A * A, D * D

    def eq(*terms):
        return math.fsum(terms), math.fsum(abs(t) for t in terms)

    if record.family == "I":
        den8 = 2.0 * al * al / (9.0 * b2) - ga - gam
        return {
            "A1": eq(mu, 2.0 * b2),
            "A2": eq(SQRT2 * al * D, 3.0 * (1.0 + 2.0 * B) * b2),
            "A3": eq(ga * A2, gam * D2, -4.0 * B * (B + 1.0) * b2),
            "A4": eq(eps, 3.0 * b2),
            "A4b": eq(D2, -A2),
            "A5": eq((gam + gm) * A2, -2.0 * B * (1.0 + B) * b2),
            "A6": eq((ga - gm) * A2, -2.0 * B * (B + 1.0) * b2),
            "A7": eq(eps, -1.5 * mu),
            "A8": eq(A2, -_safe_div(b2, den8)),
            "A9": eq(gm, -(ga - gam) / 2.0),
        }

    inter = gamma_intermediates(record.family, params, mu, eps, strict=False)
    G, C = inter.Gamma, inter.C
    two = 2.0 * mu - eps
    if record.family == "II":
        d15 = (al * al - ga * eps) * G - 4.0 * SQRT2 * mu * al
        d16 = two - gm * G * G
        d17 = gam * al * G * G + SQRT2 * ga * eps * G + 8.0 * mu * al
        return {
            "A10": eq(two * D, D * b2, -al * A2 / SQRT2),
            "A11": eq(gam * A2, -two * B, 0.5 * (3.0 + 4.0 * B) * b2),
            "A12": eq(gm * D2, -two * B * B, -0.5 * B * b2),
            "A13": eq(mu, 0.5 * b2),
            "A13b": eq(ga * A2, SQRT2 * al * D, (1.0 + 4.0 * B) * b2),
            "A14": eq(gam * D2, -B * ga * A2, -4.0 * B * (B + 1.0) * b2),
            "A15": eq(B, -_safe_div(SQRT2 * mu * al, d15)),
            "A16": eq(B, -_safe_div(mu, d16)),
            "A17": eq(B, _safe_div(8.0 * mu * al, d17)),
        }

    d23 = (al * al - ga * eps) * G - 4.0 * SQRT2 * mu * al
    return {
        "A18": eq(two * D, D * b2, -al * A2 / SQRT2),
        "A19": eq(gam * A2, -two * (B + 1.0), 0.5 * (1.0 + 4.0 * B) * b2),
        "A20": eq(gm * D2, -two * (B + 1.0) ** 2, 0.5 * (B + 1.0) * b2),
        "A21": eq(mu, 0.5 * b2),
        "A21b": eq(ga * A2, SQRT2 * al * D, (3.0 + 4.0 * B) * b2),
        "A22": eq(gam * D2, -(1.0 + B) * ga * A2, -4.0 * B * (B + 1.0) * b2),
        "A23": eq(B, -_safe_div(3.0 * SQRT2 * mu * al + (ga * eps - al * al) * C, d23)),
        "A24": eq(B * B * (gm * G * G - two),
                  B * (2.0 * gm * G * C - 5.0 * mu + 2.0 * eps),
                  gm * C * C - (3.0 * mu - eps)),
        "A25": eq(B * B * (gam * al * G * G + 8.0 * mu * al + SQRT2 * ga * eps * G),
                  B * (2.0 * gam * al * G * C + SQRT2 * ga * eps * (G + C) + 8.0 * mu * al),
                  gam * al * C * C + SQRT2 * ga * eps * C),
    }


def check_consistency(record: SolutionRecord,
                      params: CouplingParams | None = None) -> dict:
    """Signed residual (LHS - RHS) of every relation of the record's family.

    params defaults to the record's own couplings; pass different ones to
    probe a record against them.  Never raises; singular expressions show up
    as inf/nan residuals.
    """
    if params is None:
        params = record.params
    return {k: r for k, (r, _) in _equations(record, params).items()}


def normalized_residuals(record: SolutionRecord,
                         params: CouplingParams | None = None) -> dict:
    """|residual| / (1 + term magnitudes) per relation: scale-free residuals."""
    if params is None:
        params = record.params
    return {k: abs(r) / (1.0 + s) for k, (r, s) in _equations(record, params).items()}


def _verified(record: SolutionRecord, tol: float) -> SolutionRecord:
    """Gate a candidate record on its normalized residuals; stamp the raw max."""
    eqs = _equations(record, record.params)
    worst_key = max(eqs, key=lambda k: abs(eqs[k][0]) / (1.0 + eqs[k][1]))
    worst = abs(eqs[worst_key][0]) / (1.0 + eqs[worst_key][1])
    if not worst < tol:
        raise InconsistentRootError(
            f"converged root fails relation {worst_key}: normalized residual "
            f"{worst:.3e} exceeds tolerance {tol:g}")
    raw_max = max(abs(r) for r, _ in eqs.values())
    return replace(record, residual_max=raw_max)


def solve_family_I(g_a: float, g_am: float, alpha: float, beta: float,
                   *, tol: float | None = None) -> SolutionRecord:
    """Closed-form family I solve; g_m and epsilon are outputs.

    mu = -2 beta^2, epsilon = -3 beta^2, A^2 = D^2 with D opposite in sign
    to alpha, and g_m = (g_a - g_am)/2.
    """
    if alpha == 0.0:
        raise ConfigurationError("family I needs alpha != 0")
    if not beta > 0.0:
        raise ConfigurationError(f"beta must be positive, got {beta}")
    if g_a + g_am == 0.0:
        raise SingularParameterError(
            "g_a + g_am = 0 makes the critical chemical potential singular")
    tol = default_tol() if tol is None else tol
    b2 = beta * beta
    mu = -2.0 * b2
    eps = -3.0 * b2
    den = 2.0 * alpha * alpha / (9.0 * b2) - g_a - g_am
    if den <= 0.0:
        beta_max = abs(alpha) * math.sqrt(2.0 / (9.0 * (g_a + g_am)))
        raise NoDropletError(
            f"mu = {mu:g} lies at or below the critical value; "
            f"admissible beta range is (0, {beta_max:.6g})")
    A = beta / math.sqrt(den)
    D = -math.copysign(A, alpha)
    B = 0.5 * (SQRT2 * abs(alpha) * A / (3.0 * b2) - 1.0)
    if B <= 0.0:
        raise OutOfScopeRegimeError(
            f"profile parameter B = {B:g} <= 0; family I needs g_a + g_am > 0")
    g_m = 0.5 * (g_a - g_am)
    params = CouplingParams(g_a=g_a, g_m=g_m, g_am=g_am, alpha=alpha, epsilon=eps)
    record = SolutionRecord("I", params, A=A, B=B, D=D, beta=beta, mu=mu)
    res = check_consistency(record)
    for key in ("A3", "A5"):
        if not abs(res[key]) < 1e-10:
            raise InconsistentRootError(
                f"closed form failed its own relation {key}: {res[key]:.3e}")
    return _verified(record, tol)


def _check_B_agreement(primary: float, alternates: dict) -> None:
    for label, other in alternates.items():
        if not abs(primary - other) <= B_AGREEMENT * max(1.0, abs(primary)):
            raise InconsistentRootError(
                f"B = {primary!r} disagrees with the {label} expression "
                f"({other!r}) beyond {B_AGREEMENT:g}")


def solve_family_II(params: CouplingParams, seed, *,
                    tol: float | None = None) -> SolutionRecord:
    """Newton-solve the family II conditions from a (mu, epsilon) seed.

    Any epsilon already on params is ignored; the solver determines it.
    """
    tol = default_tol() if tol is None else tol
    bad = validate_params(replace(params, epsilon=None), "II")
    if bad:
        raise ConfigurationError("; ".join(bad))
    mu_g, eps_g = float(seed[0]), float(seed[1])
    if not (mu_g < 0.0 and eps_g < 0.0):
        raise ConfigurationError(
            f"family II seeds need mu < 0 and epsilon < 0, got {(mu_g, eps_g)}")

    mu, eps = map(float, _newton2(
        lambda v: _parts_family_II(params, v[0], v[1]), (mu_g, eps_g)))
    if not (mu < 0.0 and eps < 0.0):
        raise OutOfScopeRootError(
            f"root (mu, epsilon) = {(mu, eps)} violates mu < 0, epsilon < 0")
    al, ga, gm, gam = params.alpha, params.g_a, params.g_m, params.g_am
    G = gamma_intermediates("II", params, mu, eps).Gamma
    d15 = (al * al - ga * eps) * G - 4.0 * SQRT2 * mu * al
    d16 = (2.0 * mu - eps) - gm * G * G
    d17 = gam * al * G * G + SQRT2 * ga * eps * G + 8.0 * mu * al
    if 0.0 in (d15, d16, d17):
        raise SingularParameterError("singular B denominator at the root")
    B = SQRT2 * mu * al / d15
    _check_B_agreement(B, {"A16-form": mu / d16, "A17-form": -8.0 * mu * al / d17})
    if not B > 0.0:
        raise OutOfScopeRootError(f"root gives B = {B:g} <= 0")
    D = G * B
    if not D > 0.0:
        raise OutOfScopeRootError(f"root gives D = {D:g}; family II needs D > 0")
    A2 = -SQRT2 * eps * D / al
    if not A2 > 0.0:
        raise OutOfScopeRootError(f"root gives A^2 = {A2:g} <= 0")
    record = SolutionRecord("II", params.with_epsilon(eps), A=math.sqrt(A2),
                            B=B, D=D, beta=math.sqrt(-2.0 * mu), mu=mu)
    return _verified(record, tol)


def solve_family_III(params: CouplingParams, seed, *,
                     tol: float | None = None) -> SolutionRecord:
    """Newton-solve the family III conditions from a (mu, epsilon) seed.

    epsilon may converge to either sign; D takes the opposite sign.
    """
    tol = default_tol() if tol is None else tol
    bad = validate_params(replace(params, epsilon=None), "III")
    if bad:
        raise ConfigurationError("; ".join(bad))
    mu_g, eps_g = float(seed[0]), float(seed[1])
    if not mu_g < 0.0:
        raise ConfigurationError(f"family III seeds need mu < 0, got {mu_g}")

    mu, eps = map(float, _newton2(
        lambda v: _parts_family_III(params, v[0], v[1]), (mu_g, eps_g)))
    if not mu < 0.0:
        raise OutOfScopeRootError(f"root gives mu = {mu:g} >= 0")
    if eps == 0.0:
        raise OutOfScopeRootError("root gives epsilon = 0; family III needs "
                                  "mu, epsilon, alpha all nonzero")
    al, ga, gm, gam = params.alpha, params.g_a, params.g_m, params.g_am
    inter = gamma_intermediates("III", params, mu, eps)
    G, C = inter.Gamma, inter.C
    d23 = (al * al - ga * eps) * G - 4.0 * SQRT2 * mu * al
    if d23 == 0.0:
        raise SingularParameterError("singular B denominator at the root")
    B = (3.0 * SQRT2 * mu * al + (ga * eps - al * al) * C) / d23
    if not B > 0.0:
        raise OutOfScopeRootError(f"root gives B = {B:g} <= 0")
    two = 2.0 * mu - eps
    quads = {
        "first-quadratic": (gm * G * G - two,
                            2.0 * gm * G * C - 5.0 * mu + 2.0 * eps,
                            gm * C * C - (3.0 * mu - eps)),
        "second-quadratic": (gam * al * G * G + 8.0 * mu * al + SQRT2 * ga * eps * G,
                             2.0 * gam * al * G * C + SQRT2 * ga * eps * (G + C) + 8.0 * mu * al,
                             gam * al * C * C + SQRT2 * ga * eps * C),
    }
    _check_B_agreement(B, {label: _nearest_real_root(coefs, B, label)
                           for label, coefs in quads.items()})
    D = G * B + C
    if not eps * D < 0.0:
        raise OutOfScopeRootError(
            f"root gives epsilon = {eps:g}, D = {D:g}; they must have opposite signs")
    A2 = -SQRT2 * eps * D / al
    if not A2 > 0.0:
        raise OutOfScopeRootError(f"root gives A^2 = {A2:g} <= 0")
    record = SolutionRecord("III", params.with_epsilon(eps), A=math.sqrt(A2),
                            B=B, D=D, beta=math.sqrt(-2.0 * mu), mu=mu)
    return _verified(record, tol)


def _nearest_real_root(coefs, target: float, label: str) -> float:
    a, b, c = coefs
    if a == 0.0:
        if b == 0.0:
            raise InconsistentRootError(f"{label} degenerates to a constant")
        return -c / b
    roots = np.roots([a, b, c])
    real = [r.real for r in roots
            if abs(r.imag) <= 1e-8 * max(1.0, abs(r))]
    if not real:
        raise InconsistentRootError(f"{label} has no real root near B = {target!r}")
    return min(real, key=lambda r: abs(r - target))


def _refine_seed(cond, params: CouplingParams, mu_c: float, eps_c: float,
                 d_mu: float, d_eps: float, levels: int = 3, m: int = 9):
    """Zoom toward the joint zero of both conditions inside a scan cell.

    Each level re-grids an m-by-m window around the current best point and
    shrinks the window 4x, because the Newton basins of the steepest roots
    are narrower than a coarse scan cell.
    """
    for _ in range(levels):
        mus = np.linspace(mu_c - d_mu, mu_c + d_mu, m)
        epss = np.linspace(eps_c - d_eps, eps_c + d_eps, m)
        M, E = np.meshgrid(mus, epss, indexing="ij")
        f1, f2 = cond(params, M, E)
        score = np.abs(f1) + np.abs(f2)
        score = np.where(np.isfinite(score), score, np.inf)
        i, j = np.unravel_index(int(np.argmin(score)), score.shape)
        mu_c, eps_c = float(mus[i]), float(epss[j])
        d_mu /= 0.5 * (m - 1)
        d_eps /= 0.5 * (m - 1)
    return mu_c, eps_c


def grid_scan_seed(params: CouplingParams, family: str, mu_range, eps_range,
                   n: int = 200, refine_levels: int = 3) -> list:
    """Lattice-scan the two conditions for sign-change cells.

    Returns (mu, epsilon) seeds ordered by how small the conditions already
    are (best first), for feeding the Newton solvers.  Each seed is the
    zoom-refined interior minimum of its cell, not the bare cell center.
    """
    if family == "I":
        raise ConfigurationError("family I is closed form; it takes no scan")
    if family == "II":
        cond = conditions_family_II
    elif family == "III":
        cond = conditions_family_III
    else:
        raise ConfigurationError(f"unknown family {family!r}")
    bad = validate_params(replace(params, epsilon=None), family)
    if bad:
        raise ConfigurationError("; ".join(bad))
    mu_lo, mu_hi = float(mu_range[0]), float(mu_range[1])
    eps_lo, eps_hi = float(eps_range[0]), float(eps_range[1])
    if not (mu_lo < mu_hi and eps_lo < eps_hi):
        raise ConfigurationError("scan ranges must be increasing (lo, hi) pairs")
    if mu_hi >= 0.0:
        raise ConfigurationError("mu scan range must stay negative")
    if family == "II" and eps_hi >= 0.0:
        raise ConfigurationError("family II epsilon scan range must stay negative")
    if n < 2:
        raise ConfigurationError("scan needs n >= 2")
    mus = np.linspace(mu_lo, mu_hi, n)
    epss = np.linspace(eps_lo, eps_hi, n)
    M, E = np.meshgrid(mus, epss, indexing="ij")
    f1, f2 = cond(params, M, E)
    finite = np.isfinite(f1) & np.isfinite(f2)

    def cell_corners(F):
        return np.stack([F[:-1, :-1], F[1:, :-1], F[:-1, 1:], F[1:, 1:]])

    c1, c2, ok = cell_corners(f1), cell_corners(f2), cell_corners(finite)
    usable = ok.all(axis=0)
    with np.errstate(invalid="ignore"):
        flips = ((c1.min(axis=0) < 0.0) & (c1.max(axis=0) > 0.0)
                 & (c2.min(axis=0) < 0.0) & (c2.max(axis=0) > 0.0))
    cells = usable & flips
    score = (np.abs(c1) + np.abs(c2)).min(axis=0)
    ii, jj = np.nonzero(cells)
    if ii.size == 0:
        raise NoRootFoundError(
            f"no sign-change cells for family {family} in "
            f"mu {(mu_lo, mu_hi)}, epsilon {(eps_lo, eps_hi)}")
    order = np.argsort(score[ii, jj], kind="stable")
    d_mu = 0.5 * (mus[1] - mus[0])
    d_eps = 0.5 * (epss[1] - epss[0])
    seeds = []
    for i, j in zip(ii[order], jj[order]):
        mu_c = 0.5 * (mus[i] + mus[i + 1])
        eps_c = 0.5 * (epss[j] + epss[j + 1])
        if refine_levels > 0:
            mu_c, eps_c = _refine_seed(cond, params, mu_c, eps_c,
                                       d_mu, d_eps, levels=refine_levels)
        seeds.append((mu_c, eps_c))
    return seeds


def default_scan_ranges(family: str, alpha: float):
    """Scan boxes scaled by alpha^2, matching the parameter scaling law."""
    box = {"II": SCAN_BOX_II, "III": SCAN_BOX_III}.get(family)
    if box is None:
        raise ConfigurationError(f"no default scan ranges for family {family!r}")
    a2 = alpha * alpha
    (mu_lo, mu_hi), (eps_lo, eps_hi) = box
    return (mu_lo * a2, mu_hi * a2), (eps_lo * a2, eps_hi * a2)


def solve_from_scan(family: str, params: CouplingParams, mu_range=None,
                    eps_range=None, n: int = 200,
                    tol: float | None = None) -> SolutionRecord:
    """Scan for seeds, then try Newton from each candidate until one passes."""
    if family not in ("II", "III"):
        raise ConfigurationError("scan-solve applies to families II and III")
    if mu_range is None or eps_range is None:
        d_mu, d_eps = default_scan_ranges(family, params.alpha)
        mu_range = d_mu if mu_range is None else mu_range
        eps_range = d_eps if eps_range is None else eps_range
    seeds = grid_scan_seed(params, family, mu_range, eps_range, n)
    solve = solve_family_II if family == "II" else solve_family_III
    failures = []
    for mu_g, eps_g in seeds:
        if not (mu_g < 0.0 and (family == "III" or eps_g < 0.0)):
            continue
        try:
            return solve(params, (mu_g, eps_g), tol=tol)
        except (ConvergenceError, OutOfScopeRootError, InconsistentRootError,
                SingularParameterError) as exc:
            failures.append(str(exc))
    detail = failures[-1] if failures else "every seed violated sign preconditions"
    raise NoRootFoundError(
        f"all {len(seeds)} scan candidates failed; last failure: {detail}")
