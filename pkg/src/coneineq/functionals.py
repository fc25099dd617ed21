"""Test-function families with analytic gradients, weighted norms, and
ratio/deficit evaluators for every inequality handled by the constant
pipeline: the interpolation inequalities (both regimes), the p-log-Sobolev
inequality, the L^1 support inequality, and the isoperimetric inequality.

Families are immutable and duck-typed: anything exposing ``value(x)``,
``gradient(x)`` and ``support_radius`` works with the evaluators.  Shifted
families use a shift x0 from the lineality space of the cone (the
intersection of the closed cone with its negation), for which translation
leaves both the cone and any homogeneous weight invariant along the shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import (Mode, faber_krahn_constant, isoperimetric_constant,
                        log_sobolev_constant)
from .geometry import ball_cone_weight_mass, cone_integral, omega_SE
from .specfun import gamma_fn


# ---------------------------------------------------------------------------
# Shift admissibility
# ---------------------------------------------------------------------------

def x0_admissible(cone, x0, tol=1e-12):
    """True when x0 lies in the lineality space of the cone (closure of the
    cone intersected with its negation): zero on every constrained
    coordinate for orthant cones, orthogonal to every normal for halfspace
    cones."""
    x0 = np.asarray(x0, dtype=float)
    if cone.orthant_mask is not None:
        return all(abs(x0[i]) <= tol
                   for i, m in enumerate(cone.orthant_mask) if m)
    return all(abs(float(np.dot(a, x0))) <= tol for a in cone.halfspaces)


def _require_x0(cone, x0):
    x0 = np.asarray(x0, dtype=float)
    if not x0_admissible(cone, x0):
        raise ValueError("shift x0 must lie in the lineality space of the "
                         "cone")
    return x0


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PowerExtremal:
    """A (lam + |x+x0|^{p'})^{1/(1-alpha)} with alpha > 1 (decaying)."""

    A: float
    lam: float
    x0: tuple
    alpha: float
    pprime: float

    support_radius = None

    def _core(self, x):
        z = np.asarray(x, dtype=float) + np.asarray(self.x0)
        r = np.linalg.norm(z, axis=-1)
        return z, r, self.lam + r ** self.pprime

    def value(self, x):
        _, _, core = self._core(x)
        return self.A * core ** (1.0 / (1.0 - self.alpha))

    def gradient(self, x):
        z, r, core = self._core(x)
        e = 1.0 / (1.0 - self.alpha)
        coef = self.A * e * core ** (e - 1.0) * self.pprime \
            * r ** (self.pprime - 2.0)
        return coef[..., None] * z


@dataclass(frozen=True, eq=False)
class CompactExtremal:
    """A (lam - (1-alpha)|x+x0|^{p'})_+^{1/(1-alpha)} with alpha < 1
    (compactly supported)."""

    A: float
    lam: float
    x0: tuple
    alpha: float
    pprime: float

    @property
    def support_ball_radius(self):
        """Radius of the support ball around -x0."""
        return (self.lam / (1.0 - self.alpha)) ** (1.0 / self.pprime)

    @property
    def support_radius(self):
        return self.support_ball_radius \
            + float(np.linalg.norm(self.x0))

    def _core(self, x):
        z = np.asarray(x, dtype=float) + np.asarray(self.x0)
        r = np.linalg.norm(z, axis=-1)
        return z, r, np.clip(self.lam - (1.0 - self.alpha) * r ** self.pprime,
                             0.0, None)

    def value(self, x):
        _, _, core = self._core(x)
        return self.A * core ** (1.0 / (1.0 - self.alpha))

    def gradient(self, x):
        z, r, core = self._core(x)
        e = 1.0 / (1.0 - self.alpha)
        out = np.zeros_like(z)
        pos = core > 0
        coef = np.zeros_like(core)
        coef[pos] = (-self.A * e * core[pos] ** (e - 1.0)
                     * (1.0 - self.alpha) * self.pprime
                     * r[pos] ** (self.pprime - 2.0))
        return coef[..., None] * z


@dataclass(frozen=True, eq=False)
class Gaussian:
    """The normalized Gaussian-type extremal of the p-log-Sobolev
    inequality: lam^{(n+tau)/(p p')} (Gamma((n+tau)/p'+1) ball_mass)^{-1/p}
    exp(-lam |x+x0|^{p'}/p); its L^p(omega) norm is exactly 1."""

    lam: float
    x0: tuple
    p: float
    pprime: float
    ntau: float
    ball_mass: float

    support_radius = None

    @property
    def _norm(self):
        return (self.lam ** (self.ntau / (self.p * self.pprime))
                * (gamma_fn(self.ntau / self.pprime + 1.0)
                   * self.ball_mass) ** (-1.0 / self.p))

    def value(self, x):
        z = np.asarray(x, dtype=float) + np.asarray(self.x0)
        r = np.linalg.norm(z, axis=-1)
        return self._norm * np.exp(-self.lam * r ** self.pprime / self.p)

    def gradient(self, x):
        z = np.asarray(x, dtype=float) + np.asarray(self.x0)
        r = np.linalg.norm(z, axis=-1)
        coef = (self.value(x) * (-self.lam * self.pprime / self.p)
                * r ** (self.pprime - 2.0))
        return coef[..., None] * z


@dataclass(frozen=True, eq=False)
class Bump:
    """Radial C^1 profile (1 - (|x-center|/radius)^2)_+^k with k >= 2."""

    center: tuple
    radius: float
    power: float

    def __post_init__(self):
        if self.power < 2:
            raise ValueError("bump power must be >= 2 for C^1 regularity")

    @property
    def support_radius(self):
        return float(np.linalg.norm(self.center)) + self.radius

    def _core(self, x):
        z = np.asarray(x, dtype=float) - np.asarray(self.center)
        return z, np.clip(1.0 - np.sum(z * z, axis=-1) / self.radius ** 2,
                          0.0, None)

    def value(self, x):
        _, core = self._core(x)
        return core ** self.power

    def gradient(self, x):
        z, core = self._core(x)
        coef = np.zeros_like(core)
        pos = core > 0
        coef[pos] = (-2.0 * self.power / self.radius ** 2
                     * core[pos] ** (self.power - 1.0))
        return coef[..., None] * z


@dataclass(frozen=True, eq=False)
class Perturbed:
    """base + eps * perturbation (both duck-typed families)."""

    base: object
    eps: float
    perturbation: object

    @property
    def support_radius(self):
        a = self.base.support_radius
        b = self.perturbation.support_radius
        if a is None or (self.eps != 0.0 and b is None):
            return None
        return a if self.eps == 0.0 else max(a, b)

    def value(self, x):
        out = self.base.value(x)
        if self.eps != 0.0:
            out = out + self.eps * self.perturbation.value(x)
        return out

    def gradient(self, x):
        out = self.base.gradient(x)
        if self.eps != 0.0:
            out = out + self.eps * self.perturbation.gradient(x)
        return out


@dataclass(frozen=True, eq=False)
class IndicatorBall:
    """Characteristic function of B(center, radius); no gradient."""

    center: tuple
    radius: float

    @property
    def support_radius(self):
        return float(np.linalg.norm(self.center)) + self.radius

    def value(self, x):
        z = np.asarray(x, dtype=float) - np.asarray(self.center)
        return (np.sum(z * z, axis=-1) <= self.radius ** 2).astype(float)

    def gradient(self, x):
        raise ValueError("indicator functions have no pointwise gradient")


class Rescaled:
    """lam^{(n+tau1)/(alpha p)} u(lam x): preserves the base-norm integral
    int |u|^{alpha p} w1."""

    def __init__(self, base, lam, prefactor_exponent):
        self.base = base
        self.lam = float(lam)
        self._pref = self.lam ** prefactor_exponent

    @property
    def support_radius(self):
        sr = self.base.support_radius
        return None if sr is None else sr / self.lam

    def value(self, x):
        return self._pref * self.base.value(self.lam * np.asarray(x))

    def gradient(self, x):
        return self._pref * self.lam \
            * self.base.gradient(self.lam * np.asarray(x))


def rescale(u, lam, params, tau1):
    """The norm-preserving rescaling u -> lam^{(n+tau1)/(alpha p)} u(lam x)."""
    if lam <= 0:
        raise ValueError("rescaling parameter must be positive")
    if lam == 1.0:
        return u
    expo = (params.n + tau1) / (params.alpha * params.p)
    return Rescaled(u, lam, expo)


# ---------------------------------------------------------------------------
# Norms and reports
# ---------------------------------------------------------------------------

@dataclass
class RatioReport:
    lhs: float
    rhs: float
    ratio: float
    constant: float
    diagnostics: list = field(default_factory=list)

    def to_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio,
                "constant": self.constant,
                "converged": all(d.converged for d in self.diagnostics)}


def _integral(f, weight, cone, grid, support_radius, diagnostics):
    val, diag = cone_integral(f, weight, cone, grid,
                              support_radius=support_radius, full_output=True)
    diagnostics.append(diag)
    return val


def weighted_Lq(u, q, weight, cone, grid, diagnostics=None):
    """(int |u|^q omega)^{1/q}."""
    if q <= 0:
        raise ValueError("q must be positive")
    diags = [] if diagnostics is None else diagnostics
    val = _integral(lambda x: np.abs(u.value(x)) ** q, weight, cone, grid,
                    u.support_radius, diags)
    return val ** (1.0 / q)


def weighted_grad_Lp(u, weight, cone, grid, params, diagnostics=None):
    """(int |grad u|^p omega)^{1/p} using the family's analytic gradient."""
    diags = [] if diagnostics is None else diagnostics
    p = params.p
    val = _integral(
        lambda x: np.linalg.norm(u.gradient(x), axis=-1) ** p,
        weight, cone, grid, u.support_radius, diags)
    return val ** (1.0 / p)


def gn_ratio(u, w1, w2, w3, bundle, params, cone, grid, constant=None):
    """LHS/RHS of the interpolation inequality at u; the RHS includes the
    constant (the bundle's sharp constant unless overridden).  A ratio of 1
    within tolerance certifies equality; <= 1 certifies the inequality at u.
    """
    if constant is None:
        constant = bundle.sharp_constant
    if constant is None:
        raise ValueError("no constant available; pass one explicitly")
    a, p, g = params.alpha, params.p, params.gamma
    th = bundle.theta
    diags = []
    sr = u.support_radius
    I_base = _integral(lambda x: np.abs(u.value(x)) ** (a * p),
                       w1, cone, grid, sr, diags)
    I_grad = _integral(lambda x: np.linalg.norm(u.gradient(x), axis=-1) ** p,
                       w2, cone, grid, sr, diags)
    I_gam = _integral(lambda x: np.abs(u.value(x)) ** (a * p * g),
                      w3, cone, grid, sr, diags)
    if params.mode is Mode.GAMMA_LT_1:
        lhs = I_base ** (1.0 / (a * p))
        rhs = constant * I_grad ** (th / p) \
            * I_gam ** ((1.0 - th) / (a * p * g))
    elif params.mode is Mode.GAMMA_GT_1:
        lhs = I_gam ** (1.0 / (a * p * g))
        rhs = constant * I_grad ** (th / p) \
            * I_base ** ((1.0 - th) / (a * p))
    else:
        raise ValueError("use log_sobolev_deficit in the limit mode")
    return RatioReport(lhs=lhs, rhs=rhs, ratio=lhs / rhs, constant=constant,
                       diagnostics=diags)


def log_sobolev_deficit(u, weight, params, cone, grid):
    """RHS - LHS of the p-log-Sobolev inequality

        int |u|^p log|u|^p omega <= ((n+tau)/p) log(L int |grad u|^p omega)

    after normalizing u to int |u|^p omega = 1; nonnegative when the
    inequality holds, zero at the Gaussian extremals."""
    p = params.p
    tau = weight.degree
    nt = params.n + tau
    bm = ball_cone_weight_mass(weight, cone, grid)
    const = log_sobolev_constant(params.n, p, tau, bm)
    diags = []
    sr = u.support_radius
    Ip = _integral(lambda x: np.abs(u.value(x)) ** p, weight, cone, grid,
                   sr, diags)

    def entropy_integrand(x):
        v = np.abs(u.value(x)) ** p
        out = np.zeros_like(v)
        pos = v > 0
        out[pos] = v[pos] * np.log(v[pos])
        return out

    ent_raw = _integral(entropy_integrand, weight, cone, grid, sr, diags)
    grad_raw = _integral(
        lambda x: np.linalg.norm(u.gradient(x), axis=-1) ** p,
        weight, cone, grid, sr, diags)
    entropy = ent_raw / Ip - math.log(Ip)
    grad = grad_raw / Ip
    return (nt / p) * math.log(const * grad) - entropy


def _support_mass(u, weight, cone, grid, diagnostics):
    """Weight mass of the support of u.  When the support is a ball around a
    lineality-space shift the mass is analytic (translation invariance);
    otherwise it is computed by quadrature of the indicator."""
    r_ball = getattr(u, "support_ball_radius", None)
    if r_ball is not None:
        bm = ball_cone_weight_mass(weight, cone, grid)
        return bm * r_ball ** (cone.n + weight.degree)
    sr = u.support_radius
    if sr is None:
        raise ValueError("support inequality requires compact support")
    return _integral(lambda x: (u.value(x) > 0).astype(float),
                     weight, cone, grid, sr, diagnostics)


def faber_krahn_ratio(u, weight, params, cone, grid):
    """LHS/RHS of int |u| omega <= C_inf (int |grad u|^p omega)^{1/p}
    (mass of supp u)^{1/(n+tau)+1/p'} for compactly supported u."""
    if u.support_radius is None:
        raise ValueError("support inequality requires compact support")
    p, pp = params.p, params.pprime
    tau = weight.degree
    nt = params.n + tau
    bm = ball_cone_weight_mass(weight, cone, grid)
    const = faber_krahn_constant(params.n, p, tau, bm)
    diags = []
    lhs = _integral(lambda x: np.abs(u.value(x)), weight, cone, grid,
                    u.support_radius, diags)
    grad = _integral(lambda x: np.linalg.norm(u.gradient(x), axis=-1) ** p,
                     weight, cone, grid, u.support_radius, diags)
    mass = _support_mass(u, weight, cone, grid, diags)
    rhs = const * grad ** (1.0 / p) * mass ** (1.0 / nt + 1.0 / pp)
    return RatioReport(lhs=lhs, rhs=rhs, ratio=lhs / rhs, constant=const,
                       diagnostics=diags)


def isoperimetric_ratio(center, radius, weight, cone, grid):
    """LHS/RHS of the weighted isoperimetric inequality for the ball
    B(center, radius): (1/C_inf~) mass^{1-1/(n+tau)} <= perimeter.

    The center must be zero or lie in the lineality space of the cone, in
    which case both the mass and the weighted perimeter coincide with those
    of the centered ball (homogeneity plus translation invariance), giving
    analytic values mass = ball_mass r^{n+tau} and perimeter =
    r^{n+tau-1} omega_SE."""
    center = _require_x0(cone, center)
    if radius <= 0:
        raise ValueError("radius must be positive")
    tau = weight.degree
    nt = cone.n + tau
    w_se = omega_SE(weight, cone, grid)
    bm = w_se / nt
    const = isoperimetric_constant(cone.n, tau, bm)
    mass = bm * radius ** nt
    perimeter = w_se * radius ** (nt - 1.0)
    lhs = mass ** (1.0 - 1.0 / nt) / const
    return RatioReport(lhs=lhs, rhs=perimeter, ratio=lhs / perimeter,
                       constant=const, diagnostics=[])


# ---------------------------------------------------------------------------
# Rigidity probe
# ---------------------------------------------------------------------------

def rigidity_deficit_probe(w1, w2, w3, bundle, params, cone, grid,
                           search_budget=40, constant=None):
    """Best interpolation ratio found within the decaying extremal family
    (optimizing the profile scale; the amplitude cancels in the ratio and
    the lineality space of the reference cones is trivial).

    For equal weights the family attains ratio 1; for unequal weights the
    observed gap 1 - max_ratio > 0 is numerical evidence that equality is
    not attained, consistent with the rigidity of sharp constants.  No claim
    of proof is made."""
    if params.mode is not Mode.GAMMA_LT_1:
        raise ValueError("the probe is defined for the gamma < 1 regime")
    x0 = tuple([0.0] * cone.n)

    def ratio_at(log_lam):
        u = PowerExtremal(A=1.0, lam=math.exp(log_lam), x0=x0,
                          alpha=params.alpha, pprime=params.pprime)
        return gn_ratio(u, w1, w2, w3, bundle, params, cone, grid,
                        constant=constant).ratio

    best = ratio_at(0.0)
    if search_budget > 0:
        res = minimize_scalar(lambda t: -ratio_at(t), bounds=(-4.0, 4.0),
                              method="bounded",
                              options={"maxiter": search_budget,
                                       "xatol": 1e-6})
        best = max(best, -res.fun)
    return best
