"""Certification of the pointwise weight condition and the concavity
equivalences that feed the weighted inequality constants.

The central object is the three-weight pointwise condition ("condition (C)"
in the reports): for constants K and C0 > 0,

    (1/(1-g) - n) * ((w2(y)/w2(x))^{1/p} (w1(y)/w1(x))^{1/p'-g})^{1/(1-n(1-g))}
        <= (1/(1-g) + K) * w3(x) / (w1^{1/p'}(x) w2^{1/p}(x))
           + C0 * ((1/p) grad w2(x)/w2(x) + (1/p') grad w1(x)/w1(x)) . y

for all x, y in the cone.  The module certifies it by dense sampling (the
condition is only checked at sampled pairs, so a pass certifies "holds at
every sampled pair", i.e. the almost-everywhere variant cannot be
distinguished from the everywhere one), provides the closed-form admissible
(C0, K) for monomial triplets, and implements the trace-determinant
inequality and the p-mean / differential concavity equivalences used both as
sufficient conditions and as internal cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import Weight, sphere_cone_quadrature


_REL_TOL = 1e-9


# ---------------------------------------------------------------------------
# p-means
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PMeanSpec:
    """Generalized-mean exponent (math.inf / -math.inf allowed) and the
    interpolation parameter s in [0, 1]."""

    exponent: float
    s: float

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise ValueError("interpolation parameter s must lie in [0, 1]")


def p_mean(a, b, spec):
    """The generalized s-weighted p-mean of nonnegative a, b.

    Conventions: geometric mean at exponent 0, min at -inf, max at +inf, and
    value 0 whenever ab = 0 with exponent in {0, +-inf} or exponent < 0.
    """
    if a < 0 or b < 0:
        raise ValueError("p_mean arguments must be nonnegative")
    pbar, s = spec.exponent, spec.s
    if pbar == math.inf:
        return 0.0 if a * b == 0.0 else max(a, b)
    if pbar == -math.inf:
        return min(a, b)
    if pbar == 0.0:
        if a * b == 0.0:
            return 0.0
        return a ** (1.0 - s) * b ** s
    if pbar < 0.0 and a * b == 0.0:
        return 0.0
    return ((1.0 - s) * a ** pbar + s * b ** pbar) ** (1.0 / pbar)


# ---------------------------------------------------------------------------
# Trace-determinant inequality
# ---------------------------------------------------------------------------

def check_tr_det(gamma, C, A):
    """Slack (RHS - LHS) of the trace-determinant inequality

        (1/(1-g)) C^{1-n(1-g)} det(A)^{1-g} <= (1/(1-g) - n) C + tr(A)

    for symmetric positive definite A and g >= 1 - 1/n, g != 1.  The slack is
    nonnegative and vanishes exactly when A = C * I.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or not np.allclose(A, A.T, atol=1e-12):
        raise ValueError("A must be a symmetric square matrix")
    try:
        np.linalg.cholesky(A + 1e-12 * np.eye(n))
    except np.linalg.LinAlgError:
        raise ValueError("A must be positive definite") from None
    if gamma == 1.0 or gamma < 1.0 - 1.0 / n:
        raise ValueError("gamma must satisfy gamma >= 1 - 1/n, gamma != 1")
    if C <= 0:
        raise ValueError("C must be positive")
    one_mg = 1.0 - gamma
    det = float(np.linalg.det(A))
    lhs = (1.0 / one_mg) * C ** (1.0 - n * one_mg) * det ** one_mg
    rhs = (1.0 / one_mg - n) * C + float(np.trace(A))
    return rhs - lhs


# ---------------------------------------------------------------------------
# Closed-form admissible constants for monomial triplets (gamma < 1)
# ---------------------------------------------------------------------------

def monomial_condition_constants(params, taus, alphas):
    """Admissible (C0, K) for the monomial triplet built from per-coordinate
    exponents: w1 = prod x_i^{tau_i}, w2 = prod x_i^{alpha_i}, and
    w3 = prod x_i^{delta_i} with delta_i = tau_i/p' + alpha_i/p.

    Returns (C0, K, deltas, betas) where beta_i = alpha_i/p + tau_i(1/p'-g).
    The construction requires gamma < 1, nonnegative exponents, beta_i >= 0
    for every i, and sum(beta) <= 1 - n(1-gamma); C0 uses the convention
    0^0 = 1.  C0 is an admissible constant for the condition, with no claim
    of being the least one.
    """
    g, p, pp = params.gamma, params.p, params.pprime
    if g >= 1.0:
        raise ValueError("monomial construction requires gamma < 1")
    taus = np.asarray(taus, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    n = len(taus)
    if len(alphas) != n:
        raise ValueError("taus and alphas must have equal length")
    if np.any(taus < 0) or np.any(alphas < 0):
        raise ValueError("monomial exponents must be nonnegative")
    betas = alphas / p + taus * (1.0 / pp - g)
    deltas = taus / pp + alphas / p
    denom = 1.0 - n * (1.0 - g)
    for i, b in enumerate(betas):
        if b < -1e-15:
            raise ValueError(
                f"constraint beta_{i + 1} >= 0 fails: beta_{i + 1} = {b}")
    if betas.sum() > denom + 1e-15:
        raise ValueError(
            "constraint sum(beta_i) <= 1 - n(1-gamma) fails: "
            f"{betas.sum()} > {denom}")
    log_c0 = 0.0
    for b, d in zip(betas, deltas):
        if b > 0.0:  # 0^0 = 1 branch: zero beta contributes factor 1
            log_c0 += (b / denom) * math.log(b / ((1.0 - g) * d))
    c0 = math.exp(log_c0)
    tau, alpha = float(taus.sum()), float(alphas.sum())
    K = -1.0 / (1.0 - g) + c0 * (
        -n - tau + (1.0 / (1.0 - g)) * (1.0 + (tau - alpha) / p))
    return c0, K, deltas, betas


# ---------------------------------------------------------------------------
# Sampling machinery
# ---------------------------------------------------------------------------

def _sample_directions(cone, count, rng, margin=1e-3):
    """Uniform directions on S^{n-1} inside the cone, kept a fixed angular
    margin away from the boundary to avoid degenerate weight evaluations."""
    out = []
    need = count
    attempts = 0
    while need > 0:
        attempts += 1
        if attempts > 1000:
            raise RuntimeError("direction sampling failed to fill the cone")
        z = rng.standard_normal((max(4 * need, 64), cone.n))
        d = z / np.linalg.norm(z, axis=-1, keepdims=True)
        d = d[cone.contains(d, margin=margin)]
        out.append(d[:need])
        need -= len(d[:need])
    return np.concatenate(out, axis=0)


def _sample_pairs(cone, samples, rng_seed):
    """(x, y) pairs: interior directions times log-uniform radii in
    [1e-2, 1e2]."""
    rng = np.random.default_rng(rng_seed)
    dx = _sample_directions(cone, samples, rng)
    dy = _sample_directions(cone, samples, rng)
    rx = 10.0 ** rng.uniform(-2.0, 2.0, samples)
    ry = 10.0 ** rng.uniform(-2.0, 2.0, samples)
    return dx * rx[:, None], dy * ry[:, None]


# ---------------------------------------------------------------------------
# Condition (C)
# ---------------------------------------------------------------------------

@dataclass
class ConditionCReport:
    min_slack: float
    argmin_x: np.ndarray
    argmin_y: np.ndarray
    samples: int
    C0: float
    K: float
    tolerance: float
    verdict: bool
    note: str = ("sampled certificate: the condition was verified at the "
                 "sampled pairs only; an almost-everywhere exception set "
                 "cannot be distinguished from full validity")

    def to_dict(self):
        return {
            "min_slack": self.min_slack,
            "argmin_x": list(map(float, self.argmin_x)),
            "argmin_y": list(map(float, self.argmin_y)),
            "samples": self.samples,
            "C0": self.C0,
            "K": self.K,
            "tolerance": self.tolerance,
            "verdict": "pass" if self.verdict else "fail",
            "note": self.note,
        }


def condition_c_sides(w1, w2, w3, C0, K, params, x, y):
    """Vectorized LHS and RHS of the pointwise condition at pair arrays
    x, y of shape (..., n)."""
    g, p, pp = params.gamma, params.p, params.pprime
    n = x.shape[-1]
    w1x, w1y = w1.value(x), w1.value(y)
    w2x, w2y = w2.value(x), w2.value(y)
    expo = 1.0 / (1.0 - n * (1.0 - g))
    ratio = (w2y / w2x) ** (1.0 / p) * (w1y / w1x) ** (1.0 / pp - g)
    lhs = (1.0 / (1.0 - g) - n) * ratio ** expo
    grad = (w2.gradient(x) / (p * w2x[..., None])
            + w1.gradient(x) / (pp * w1x[..., None]))
    rhs = ((1.0 / (1.0 - g) + K) * w3.value(x)
           / (w1x ** (1.0 / pp) * w2x ** (1.0 / p))
           + C0 * np.sum(grad * y, axis=-1))
    return lhs, rhs


def check_condition_C(w1, w2, w3, C0, K, params, cone, samples=10000,
                      rng_seed=0):
    """Sampled certification of the three-weight pointwise condition.

    Pairs (x, y) use interior directions and log-uniform radii spanning four
    decades.  Pass verdict: min slack >= -1e-9 * (1 + |LHS|) at the argmin.
    """
    if params.gamma == 1.0:
        raise ValueError("gamma = 1 is not handled by the pointwise check")
    if C0 <= 0:
        raise ValueError("C0 must be positive")
    x, y = _sample_pairs(cone, samples, rng_seed)
    lhs, rhs = condition_c_sides(w1, w2, w3, C0, K, params, x, y)
    if not (np.all(np.isfinite(lhs)) and np.all(np.isfinite(rhs))):
        bad = int(np.argmax(~(np.isfinite(lhs) & np.isfinite(rhs))))
        raise ValueError(
            f"condition evaluation failed at x={x[bad]}, y={y[bad]}")
    slack = rhs - lhs
    i = int(np.argmin(slack))
    tol = _REL_TOL * (1.0 + abs(float(lhs[i])))
    return ConditionCReport(
        min_slack=float(slack[i]), argmin_x=x[i], argmin_y=y[i],
        samples=samples, C0=float(C0), K=float(K), tolerance=tol,
        verdict=bool(slack[i] >= -tol))


# ---------------------------------------------------------------------------
# Homogeneity constraints on the degrees
# ---------------------------------------------------------------------------

def check_homogeneity_constraints(params, tau1, tau2, tau3):
    """Necessary degree constraints for the weighted inequalities; returns a
    dict of per-constraint booleans plus an overall verdict."""
    g, p, pp = params.gamma, params.p, params.pprime
    if g == 1.0:
        raise ValueError("gamma must differ from 1")
    combo = tau2 / p + tau1 * (1.0 / pp - g)
    base = tau2 / p + tau1 / pp
    out = {}
    if g < 1.0:
        out["combo_nonnegative"] = combo >= -1e-12
        out["combo_upper_bound"] = combo <= 1.0 - params.n * (1.0 - g) + 1e-12
        out["base_degree_nonnegative"] = base >= -1e-12
    else:
        out["combo_nonpositive"] = combo <= 1e-12
        out["tau3_identity"] = abs(tau3 - base) <= 1e-12 * (1.0 + abs(tau3))
    out["all_pass"] = all(v for k, v in out.items())
    return out


# ---------------------------------------------------------------------------
# Concavity checks (differential vs. segment forms)
# ---------------------------------------------------------------------------

@dataclass
class ConcavityReport:
    verdict: bool
    differential_min_slack: Optional[float]
    segment_min_slack: float
    extra_min_slack: Optional[float] = None
    samples: int = 0


_SEGMENT_S = (0.01, 0.25, 0.5, 0.75, 0.99)


def _segment_pbar_slacks(weight, pbar, x, y):
    """Min over interior s of w((1-s)x+sy) - p_mean(w(x), w(y)).  The
    near-endpoint s values make the test first-order sensitive, matching
    the differential characterization."""
    wx, wy = weight.value(x), weight.value(y)
    slacks = []
    for s in _SEGMENT_S:
        mid = weight.value((1.0 - s) * x + s * y)
        means = np.array([p_mean(a, b, PMeanSpec(pbar, s))
                          for a, b in zip(wx, wy)])
        slacks.append(mid - means)
    return np.min(np.stack(slacks), axis=0), wx, wy


def check_p_concavity(weight, gamma, cone, samples=2000, rng_seed=0):
    """Two independent checks of (1-g)/(1-n(1-g))-concavity of the weight:
    the differential inequality

        (1/(1-g) - n) (w(y)/w(x))^{(1-g)/(1-n(1-g))}
            <= 1/(1-g) - (n + tau) + grad w(x).y / w(x)

    and the segment generalized-mean test.  The two verdicts must agree (this
    is the equivalence the module certifies); disagreement raises.
    """
    n, tau = cone.n, weight.degree
    if gamma == 1.0 or gamma < 1.0 - 1.0 / (n + tau) - 1e-12:
        raise ValueError("gamma must satisfy gamma >= 1 - 1/(n+tau), != 1")
    pbar = (1.0 - gamma) / (1.0 - n * (1.0 - gamma))
    x, y = _sample_pairs(cone, samples, rng_seed)
    wx, wy = weight.value(x), weight.value(y)
    with np.errstate(over="ignore", invalid="ignore"):
        lhs = (1.0 / (1.0 - gamma) - n) * (wy / wx) ** pbar
        rhs = (1.0 / (1.0 - gamma) - (n + tau)
               + np.sum(weight.gradient(x) * y, axis=-1) / wx)
        d_slack = rhs - lhs
        s_slack, wx, wy = _segment_pbar_slacks(weight, pbar, x, y)
    # pairs whose evaluation overflows carry no information; both tests
    # must be restricted to the same finite subset to stay comparable
    finite = (np.isfinite(d_slack) & np.isfinite(s_slack)
              & np.isfinite(lhs) & np.isfinite(wx + wy))
    if np.count_nonzero(finite) < max(100, samples // 2):
        raise RuntimeError("too many sample pairs overflow the weight; "
                           "cannot certify concavity")
    d_slack, s_slack, lhs = d_slack[finite], s_slack[finite], lhs[finite]
    wx, wy = wx[finite], wy[finite]
    d_ok = bool(np.all(d_slack >= -_REL_TOL * (1.0 + np.abs(lhs))))
    s_ok = bool(np.all(s_slack >= -_REL_TOL * (1.0 + wx + wy)))
    if d_ok != s_ok:
        raise RuntimeError(
            "internal consistency failure: differential and segment "
            f"concavity tests disagree (differential={d_ok}, segment={s_ok})")
    return ConcavityReport(verdict=d_ok,
                           differential_min_slack=float(np.min(d_slack)),
                           segment_min_slack=float(np.min(s_slack)),
                           samples=samples)


def check_log_concavity(weight, cone, samples=2000, rng_seed=0):
    """Three equivalent log-concavity checks for a homogeneous weight of
    degree tau >= 0: the differential inequality
    log(w(y)/w(x)) <= -tau + grad w(x).y / w(x), segment log-concavity, and
    (when tau > 0) 1/tau-concavity by the segment generalized-mean test.
    All verdicts must agree."""
    tau = weight.degree
    if tau < 0:
        raise ValueError("log-concavity check requires degree tau >= 0")
    x, y = _sample_pairs(cone, samples, rng_seed)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        wx, wy = weight.value(x), weight.value(y)
        log_ratio = np.log(wy / wx)
        d_slack = (-tau + np.sum(weight.gradient(x) * y, axis=-1) / wx
                   - log_ratio)
        s_slack, _, _ = _segment_pbar_slacks(weight, 0.0, x, y)
        t_slack = None
        if tau > 0:
            t_slack, _, _ = _segment_pbar_slacks(weight, 1.0 / tau, x, y)
    finite = (np.isfinite(d_slack) & np.isfinite(s_slack)
              & np.isfinite(log_ratio) & np.isfinite(wx + wy))
    if t_slack is not None:
        finite &= np.isfinite(t_slack)
    if np.count_nonzero(finite) < max(100, samples // 2):
        raise RuntimeError("too many sample pairs overflow the weight; "
                           "cannot certify log-concavity")
    d_slack, s_slack = d_slack[finite], s_slack[finite]
    log_ratio, wx, wy = log_ratio[finite], wx[finite], wy[finite]
    d_ok = bool(np.all(d_slack >= -_REL_TOL * (1.0 + np.abs(log_ratio))))
    s_ok = bool(np.all(s_slack >= -_REL_TOL * (1.0 + wx + wy)))
    extra = None
    verdicts = [d_ok, s_ok]
    if t_slack is not None:
        t_slack = t_slack[finite]
        t_ok = bool(np.all(t_slack >= -_REL_TOL * (1.0 + wx + wy)))
        extra = float(np.min(t_slack))
        verdicts.append(t_ok)
    if len(set(verdicts)) > 1:
        raise RuntimeError(
            "internal consistency failure: log-concavity tests disagree "
            f"(differential={d_ok}, segment={s_ok}, power={verdicts[2:]})"
        )
    return ConcavityReport(verdict=d_ok,
                           differential_min_slack=float(np.min(d_slack)),
                           segment_min_slack=float(np.min(s_slack)),
                           extra_min_slack=extra, samples=samples)


# ---------------------------------------------------------------------------
# gamma > 1 sufficient conditions via spherical infima
# ---------------------------------------------------------------------------

@dataclass
class InfimaReport:
    inf_ratio: float
    inf_gradient: float
    verdict: bool
    nodes: int


def check_gamma_gt1_inf_conditions(w1, w2, w3, params, cone,
                                   grid_resolution=32, threshold=1e-12):
    """For gamma > max(1, tau3/tau1) with tau3 = tau2/p + tau1/p', the
    condition holds for some (K, C0) provided two infima over the unit-sphere
    section of the cone are strictly positive:

        inf (w1(x)/w3(x)) * (w2^{1/p}(y) w1^{1/p'-gamma}(y)
             / (w2^{n(1-g)/p}(x) w1^{(1-n/p)(1-g)}(x)))^{1/(1-n(1-g))}
        inf grad(w2^{1/p} w1^{1/p'})(x) . y / w3(x).

    Both are estimated on the product of the interior spherical grid with
    itself."""
    g, p, pp = params.gamma, params.p, params.pprime
    tau1, tau2, tau3 = w1.degree, w2.degree, w3.degree
    if tau1 <= 0:
        raise ValueError("tau1 must be positive (the bound gamma > tau3/tau1)")
    if abs(tau3 - (tau2 / p + tau1 / pp)) > 1e-12 * (1.0 + abs(tau3)):
        raise ValueError("tau3 must equal tau2/p + tau1/p'")
    if g <= max(1.0, tau3 / tau1):
        raise ValueError("gamma must exceed max(1, tau3/tau1)")
    grid = sphere_cone_quadrature(cone, grid_resolution)
    X = grid.nodes
    n = cone.n
    w1x, w2x, w3x = w1.value(X), w2.value(X), w3.value(X)
    w1y, w2y = w1x, w2x
    expo = 1.0 / (1.0 - n * (1.0 - g))
    num = (w2y ** (1.0 / p) * w1y ** (1.0 / pp - g))[None, :]
    den = (w2x ** (n * (1.0 - g) / p)
           * w1x ** ((1.0 - n / p) * (1.0 - g)))[:, None]
    ratio = (w1x / w3x)[:, None] * (num / den) ** expo
    base = w2x ** (1.0 / p) * w1x ** (1.0 / pp)
    grad = base[:, None] * (w2.gradient(X) / (p * w2x[:, None])
                            + w1.gradient(X) / (pp * w1x[:, None]))
    grad_term = (grad @ X.T) / w3x[:, None]
    inf1, inf2 = float(np.min(ratio)), float(np.min(grad_term))
    return InfimaReport(inf_ratio=inf1, inf_gradient=inf2,
                        verdict=bool(inf1 > threshold and inf2 > threshold),
                        nodes=len(X))


# ---------------------------------------------------------------------------
# Four-part sufficient condition (any gamma != 1, gamma >= 1 - 1/n)
# ---------------------------------------------------------------------------

@dataclass
class SufficientConditionsReport:
    concavity_pass: bool
    degree_inequality_pass: bool
    pointwise_domination_pass: bool
    gradient_sign_pass: bool
    verdict: bool
    C0: float
    K: float


def _composite_weight(w1, w2, p, pp, gamma):
    """The weight w2^{1/p} w1^{1/p'-gamma} with its analytic gradient."""
    e2, e1 = 1.0 / p, 1.0 / pp - gamma
    deg = e2 * w2.degree + e1 * w1.degree

    def value(x):
        return w2.value(x) ** e2 * w1.value(x) ** e1

    def gradient(x):
        v = value(x)
        return v[..., None] * (e2 * w2.gradient(x) / w2.value(x)[..., None]
                               + e1 * w1.gradient(x) / w1.value(x)[..., None])

    return Weight(degree=deg, value=value, gradient=gradient, kind="callback")


def check_example3_sufficient(w1, w2, w3, params, cone, samples=2000,
                              rng_seed=0):
    """Checks the four sufficient conditions under which the pointwise
    condition holds with C0 = 1 and K = -n - tau1/p - tau2(1/p' - gamma):

    (i) w2^{1/p} w1^{1/p'-gamma} is (1-g)/(1-n(1-g))-concave;
    (ii) when gamma > 1: 1 > (1-g)(n + tau1/p + tau2(1/p'-gamma));
    (iii) w3 >= w2^{1/p} w1^{1/p'} pointwise;
    (iv) grad w1(x).y >= 0 for all sampled pairs.
    """
    g, p, pp, n = params.gamma, params.p, params.pprime, params.n
    if g == 1.0 or g < 1.0 - 1.0 / n:
        raise ValueError("gamma must satisfy gamma >= 1 - 1/n, gamma != 1")
    comp = _composite_weight(w1, w2, p, pp, g)
    try:
        rep = check_p_concavity(comp, g, cone, samples=samples,
                                rng_seed=rng_seed)
        concavity = rep.verdict
    except RuntimeError:
        concavity = False
    degree_ineq = True
    if g > 1.0:
        degree_ineq = 1.0 > (1.0 - g) * (n + w1.degree / p
                                         + w2.degree * (1.0 / pp - g))
    x, y = _sample_pairs(cone, samples, rng_seed + 1)
    dom = w3.value(x) - w2.value(x) ** (1.0 / p) * w1.value(x) ** (1.0 / pp)
    dom_pass = bool(np.min(dom) >= -_REL_TOL * (1.0 + np.max(w3.value(x))))
    grad_dot = np.sum(w1.gradient(x) * y, axis=-1)
    grad_pass = bool(np.min(grad_dot) >= -_REL_TOL)
    K = -n - w1.degree / p - w2.degree * (1.0 / pp - g)
    verdict = concavity and degree_ineq and dom_pass and grad_pass
    return SufficientConditionsReport(
        concavity_pass=concavity, degree_inequality_pass=degree_ineq,
        pointwise_domination_pass=dom_pass, gradient_sign_pass=grad_pass,
        verdict=verdict, C0=1.0, K=K)
