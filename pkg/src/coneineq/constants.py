"""The constant pipeline for the weighted interpolation inequalities on
cones: derived parameters, the L/M/theta algebra, the generic constants built
from an admissible (K, C0) pair, the sharp equal-weight constants, the
profile functional whose infimum enters the generic constant, and the
closed-form optimizers for the two auxiliary parameters mu and lambda.

Everything is evaluated in log space and exponentiated once; powers with a
possibly-zero base and zero exponent take the explicit 0^0 = 1 branch.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .geometry import Weight, cone_integral
from .specfun import log_beta, log_gamma


class Mode(enum.Enum):
    GAMMA_LT_1 = "gamma_lt_1"
    GAMMA_GT_1 = "gamma_gt_1"
    LOG_SOBOLEV_LIMIT = "log_sobolev_limit"


@dataclass(frozen=True)
class Params:
    """Core parameters (n, p, gamma) with the derived quantities
    alpha = 1/(p(gamma-1)+1) and p' = p/(p-1)."""

    n: int
    p: float
    gamma: float
    alpha: float
    pprime: float
    mode: Mode


def derive_params(n, p, gamma):
    """Validate (n, p, gamma) and build the derived parameters; the mode is
    inferred from gamma (below 1, above 1, or the log-Sobolev limit at 1)."""
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    if p <= 1:
        raise ValueError("p > 1 is required")
    denom = p * (gamma - 1.0) + 1.0
    if denom <= 0:
        raise ValueError("p(gamma-1) + 1 must be positive")
    pprime = p / (p - 1.0)
    alpha = 1.0 / denom
    if gamma == 1.0:
        mode = Mode.LOG_SOBOLEV_LIMIT
    elif gamma < 1.0:
        bound = max(1.0 - 1.0 / n, 1.0 / pprime)
        if gamma <= bound:
            raise ValueError(
                f"gamma must exceed max(1-1/n, 1/p') = {bound} when gamma < 1")
        mode = Mode.GAMMA_LT_1
    else:
        mode = Mode.GAMMA_GT_1
    assert abs(alpha * denom - 1.0) <= 1e-15
    assert abs(1.0 / p + 1.0 / pprime - 1.0) <= 1e-15
    return Params(n=int(n), p=float(p), gamma=float(gamma),
                  alpha=alpha, pprime=pprime, mode=mode)


def compute_LM(params, tau1, tau2, tau3):
    """The two scaling exponents of the rescaling optimization:
    L = -(n+tau1) gamma + n + tau3 and M = p + (n+tau1)/alpha - (n+tau2).
    With equal degrees tau these reduce to L = (1-gamma)(n+tau) and
    M = p(1 + (gamma-1)(n+tau))."""
    for t in (tau1, tau2, tau3):
        if t <= -params.n:
            raise ValueError("each degree must exceed -n")
    L = -(params.n + tau1) * params.gamma + params.n + tau3
    M = params.p + (params.n + tau1) / params.alpha - (params.n + tau2)
    return L, M


def theta(params, L, M):
    """The interpolation exponent: L/(alpha gamma M + L) in (0, 1] below
    gamma = 1 (equal to 1 exactly when M = 0) and -L/(alpha gamma M) in
    (0, 1) above."""
    a, g = params.alpha, params.gamma
    if params.mode is Mode.GAMMA_LT_1:
        if L <= 0 or M < 0:
            raise ValueError("gamma < 1 requires L > 0 and M >= 0")
        denom = a * g * M + L
        assert denom > 0
        return L / denom
    if params.mode is Mode.GAMMA_GT_1:
        if L >= 0 or M <= 0:
            raise ValueError("gamma > 1 requires L < 0 and M > 0")
        t = -L / (a * g * M)
        if not 0.0 < t < 1.0:
            raise ValueError("theta must lie in (0, 1); got "
                             f"{t} from L={L}, M={M}")
        return t
    raise ValueError("theta is undefined in the log-Sobolev limit")


def _xlogy(e, b):
    """e * log(b) with the 0^0 = 1 convention (zero contribution when the
    exponent vanishes, regardless of the base)."""
    if e == 0.0:
        return 0.0
    if b <= 0.0:
        raise ValueError(f"nonpositive base {b} with nonzero exponent {e}")
    return e * math.log(b)


def c_klmc0(params, K, L, M, C0):
    """The generic prefactor built from an admissible pair (K, C0):

      gamma < 1:  (1/(1-g)+K)^{M/p} C0^{L-(1-g)n(M/p+L)} (g a)^L (1-g)^{M/p+L}
                  (M+pL)^{M/p+L} / (M^{M/p} L^L)
      gamma > 1:  (1/(g-1)-K)^{-M/p} C0^{-L+(1-g)n(M/p+L)} (g a)^{-L}
                  (g-1)^{-M/p-L} M^{M/p} (-L)^L / (M+pL)^{M/p+L)}

    with 0^0 = 1 (covering M = 0 and 1/(1-g)+K = 0 simultaneously)."""
    g, a, p, n = params.gamma, params.alpha, params.p, params.n
    if C0 <= 0:
        raise ValueError("C0 must be positive")
    if params.mode is Mode.GAMMA_LT_1:
        if L <= 0 or M < 0:
            raise ValueError("gamma < 1 requires L > 0 and M >= 0")
        K2 = 1.0 / (1.0 - g) + K
        if K2 < 0:
            raise ValueError("1/(1-gamma) + K must be nonnegative")
        if M + p * L <= 0:
            raise ValueError("M + pL must be positive")
        log_val = (_xlogy(M / p, K2)
                   + _xlogy(L - (1.0 - g) * n * (M / p + L), C0)
                   + _xlogy(L, g * a)
                   + _xlogy(M / p + L, 1.0 - g)
                   + _xlogy(M / p + L, M + p * L)
                   - _xlogy(M / p, M)
                   - _xlogy(L, L))
        return math.exp(log_val)
    if params.mode is Mode.GAMMA_GT_1:
        if L >= 0 or M <= 0:
            raise ValueError("gamma > 1 requires L < 0 and M > 0")
        K2 = 1.0 / (g - 1.0) - K
        if K2 <= 0:
            raise ValueError("1/(gamma-1) - K must be positive")
        if M + p * L <= 0:
            raise ValueError("M + pL must be positive")
        log_val = (_xlogy(-M / p, K2)
                   + _xlogy(-L + (1.0 - g) * n * (M / p + L), C0)
                   + _xlogy(-L, g * a)
                   + _xlogy(-M / p - L, g - 1.0)
                   + _xlogy(M / p, M)
                   + _xlogy(L, -L)
                   - _xlogy(M / p + L, M + p * L))
        return math.exp(log_val)
    raise ValueError("no generic prefactor in the log-Sobolev limit")


# ---------------------------------------------------------------------------
# Sharp equal-weight constants
# ---------------------------------------------------------------------------

def sharp_gn_constant(params, tau, ball_mass):
    """The sharp equal-weight interpolation constant on a cone with weight
    degree tau and unit-ball weight mass ``ball_mass``, via its closed form
    in terms of the Euler Beta function.  Requires 1 < p < n + tau and
    gamma >= 1 - 1/(n+tau), gamma != 1."""
    n, p, pp, a, g = params.n, params.p, params.pprime, params.alpha, \
        params.gamma
    nt = n + tau
    if not 1.0 < p < nt:
        raise ValueError("1 < p < n + tau is required")
    if g == 1.0 or g < 1.0 - 1.0 / nt - 1e-15:
        raise ValueError("gamma >= 1 - 1/(n+tau) with gamma != 1 is required")
    if ball_mass <= 0:
        raise ValueError("ball_mass must be positive")
    aa = a * (p - 1.0) + 1.0
    if params.mode is Mode.GAMMA_LT_1:
        th = nt * (1.0 - g) / (a * g * (p - tau - n) + nt)
        r = aa / (a - 1.0)
        log_val = (th * math.log((a - 1.0) / pp)
                   + (th / p + th / nt) * math.log(pp / nt)
                   + (1.0 / (a * p)) * math.log(r - nt / pp)
                   + (th / p - 1.0 / (a * p)) * math.log(r)
                   - (th / nt) * (math.log(ball_mass)
                                  + log_beta(r - nt / pp, nt / pp)))
        return math.exp(log_val)
    th = nt * (g - 1.0) / (a * g * (p - tau - n) + g * nt)
    r = aa / (1.0 - a)
    log_val = (th * math.log((1.0 - a) / pp)
               + (th / p + th / nt) * math.log(pp / nt)
               + (th / p - 1.0 / aa) * math.log(r + nt / pp)
               + (1.0 / aa) * math.log(r)
               - (th / nt) * (math.log(ball_mass)
                              + log_beta(r, nt / pp)))
    return math.exp(log_val)


def log_sobolev_constant(n, p, tau, ball_mass):
    """Sharp constant of the weighted p-log-Sobolev inequality:
    (p/(n+tau)) ((p-1)/e)^{p-1} (Gamma((n+tau)/p' + 1) ball_mass)^{-p/(n+tau)}.
    """
    nt = n + tau
    if p <= 1.0 or nt <= 0.0:
        raise ValueError("p > 1 and n + tau > 0 are required")
    if tau < 0:
        raise ValueError("tau >= 0 is required")
    pp = p / (p - 1.0)
    log_val = (math.log(p / nt) + (p - 1.0) * (math.log(p - 1.0) - 1.0)
               - (p / nt) * (log_gamma(nt / pp + 1.0) + math.log(ball_mass)))
    return math.exp(log_val)


def faber_krahn_constant(n, p, tau, ball_mass):
    """Sharp constant of the weighted L^1 support inequality:
    ball_mass^{-1/(n+tau)} (n+tau)^{-1/p} (p'+n+tau)^{-1/p'}."""
    nt = n + tau
    if not 1.0 < p < nt:
        raise ValueError("1 < p < n + tau is required")
    pp = p / (p - 1.0)
    return (ball_mass ** (-1.0 / nt) * nt ** (-1.0 / p)
            * (pp + nt) ** (-1.0 / pp))


def isoperimetric_constant(n, tau, ball_mass):
    """Sharp constant of the weighted isoperimetric inequality on the cone:
    ball_mass^{-1/(n+tau)} / (n+tau)."""
    if tau < 0:
        raise ValueError("tau >= 0 is required")
    return ball_mass ** (-1.0 / (n + tau)) / (n + tau)


def faber_krahn_p_limit(n, tau, ball_mass,
                        probes=(1.01, 1.003, 1.002, 1.001)):
    """Extrapolated p -> 1 limit of the support-inequality constant.

    log C_p has a t*log(t) singularity in t = 1/p' near t = 0, so a naive
    evaluation at small p-1 carries an O(t log t) error; fitting
    {t log t, t, t^2, 1} at a few probe values and reading the intercept
    removes it.  The limit equals the isoperimetric constant."""
    pts = []
    for p in probes:
        t = 1.0 / (p / (p - 1.0))
        pts.append((t, math.log(faber_krahn_constant(n, p, tau, ball_mass))))
    A = np.array([[t * math.log(t), t, t * t, 1.0] for t, _ in pts])
    b = np.array([v for _, v in pts])
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    return math.exp(coef[3])


# ---------------------------------------------------------------------------
# The profile functional and its family-restricted infimum
# ---------------------------------------------------------------------------

def g_functional(G, w1, w2, params, L, M, cone, grid):
    """The normalized functional whose infimum over admissible profiles
    enters the generic constant:

        (int G |y|^{p'} w1)^{L/p'} / (int G^gamma w1^{1/p'} w2^{1/p})^{M/p+L}

    below gamma = 1 and the reciprocal arrangement above.  G is normalized
    internally to int G w1 = 1, so the value is invariant under positive
    scaling of G."""
    g, p, pp = params.gamma, params.p, params.pprime
    sr = getattr(G, "support_radius", None)
    mixed = _mixed_weight(w1, w2, 1.0 / pp, 1.0 / p)
    I1 = cone_integral(lambda x: G.value(x), w1, cone, grid,
                       support_radius=sr)
    I2 = cone_integral(
        lambda x: G.value(x) * np.linalg.norm(x, axis=-1) ** pp,
        w1, cone, grid, support_radius=sr)
    I3 = cone_integral(lambda x: G.value(x) ** g, mixed, cone, grid,
                       support_radius=sr)
    if min(I1, I2, I3) <= 0 or not all(map(math.isfinite, (I1, I2, I3))):
        raise ValueError("profile integrals must be positive and finite")
    I2n, I3n = I2 / I1, I3 / I1 ** g
    log_val = (L / pp) * math.log(I2n) - (M / p + L) * math.log(I3n)
    if params.mode is Mode.GAMMA_GT_1:
        log_val = -log_val
    return math.exp(log_val)


def _mixed_weight(w1, w2, e1, e2):
    deg = e1 * w1.degree + e2 * w2.degree

    def value(x):
        return w1.value(x) ** e1 * w2.value(x) ** e2

    def gradient(x):
        v = value(x)
        return v[..., None] * (e1 * w1.gradient(x) / w1.value(x)[..., None]
                               + e2 * w2.gradient(x) / w2.value(x)[..., None])

    return Weight(degree=deg, value=value, gradient=gradient, kind="callback")


class _RadialProfile:
    """(lam + c |x|^{p'})^{q} (decaying, q < 0) or the compactly supported
    (lam - c |x|^{p'})_+^{q} (q > 0), used by the profile search."""

    def __init__(self, lam, c, q, pp, compact):
        self.lam, self.c, self.q, self.pp, self.compact = lam, c, q, pp, \
            compact
        self.support_radius = ((lam / c) ** (1.0 / pp)) if compact else None

    def value(self, x):
        r = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
        if self.compact:
            core = np.clip(self.lam - self.c * r ** self.pp, 0.0, None)
            out = np.zeros_like(core)
            pos = core > 0
            out[pos] = core[pos] ** self.q
            return out
        return (self.lam + self.c * r ** self.pp) ** self.q


def g_profile_search(w1, w2, params, L, M, cone, grid, maxiter=80):
    """Nelder-Mead minimization of :func:`g_functional` over the 2-parameter
    radial profile family (lam +/- c|x|^{p'})^{+-alpha p/(1-alpha)}.

    Returns (value, (lam, c)).  This is a family-restricted minimum, not the
    full infimum (which is over an infinite-dimensional class)."""
    a, pp = params.alpha, params.pprime
    compact = params.mode is Mode.GAMMA_GT_1
    q = a * params.p / (1.0 - a)  # negative when gamma < 1 (alpha > 1)

    def objective(z):
        lam, c = math.exp(z[0]), math.exp(z[1])
        try:
            return math.log(g_functional(
                _RadialProfile(lam, c, q, pp, compact), w1, w2, params,
                L, M, cone, grid))
        except (ValueError, OverflowError):
            return math.inf

    res = minimize(objective, x0=np.zeros(2), method="Nelder-Mead",
                   options={"maxiter": maxiter, "xatol": 1e-8,
                            "fatol": 1e-12})
    lam, c = math.exp(res.x[0]), math.exp(res.x[1])
    return math.exp(res.fun), (lam, c)


# ---------------------------------------------------------------------------
# Closed-form optimizers
# ---------------------------------------------------------------------------

def mu_optimal(params, C0, L, M, intG_gamma, intG_moment):
    """The optimal auxiliary parameter mu, given the two profile integrals
    int G^gamma w1^{1/p'} w2^{1/p} and int G |y|^{p'} w1 of a normalized
    profile (int G w1 = 1):

        mu = [C0^{-1+(1-g)n} / ((1-g) g a) * L/(M+pL) * ratio]^{1/p'}

    below gamma = 1, with (1-g) replaced by -(g-1) above."""
    g, a, p, pp, n = params.gamma, params.alpha, params.p, params.pprime, \
        params.n
    if intG_gamma <= 0 or intG_moment <= 0:
        raise ValueError("profile integrals must be positive")
    ratio = intG_gamma / intG_moment
    if M + p * L == 0:
        raise ValueError("M + pL must be nonzero")
    if params.mode is Mode.GAMMA_LT_1:
        inner = (C0 ** (-1.0 + (1.0 - g) * n) / ((1.0 - g) * g * a)
                 * L / (M + p * L) * ratio)
    elif params.mode is Mode.GAMMA_GT_1:
        inner = (-C0 ** (-1.0 + (1.0 - g) * n) / ((g - 1.0) * g * a)
                 * L / (M + p * L) * ratio)
    else:
        raise ValueError("mu is undefined in the log-Sobolev limit")
    if inner <= 0:
        raise ValueError("the optimal mu is undefined for these signs")
    return inner ** (1.0 / pp)


def lambda_optimal(K2, K3, L, M, norm_grad, norm_gamma, norm_base):
    """The rescaling parameter minimizing
    phi(lam) = K2 lam^{-L} A + K3 lam^{M} B:

        lam = [K2/K3 * L/M * norm_gamma / (norm_grad * norm_base)]^{1/(L+M)}

    where norm_gamma, norm_grad, norm_base are the three norm powers of the
    function being rescaled."""
    if K2 <= 0 or K3 <= 0:
        raise ValueError("K2 and K3 must be positive")
    if L <= 0 or M <= 0:
        raise ValueError("L and M must be positive")
    if min(norm_grad, norm_gamma, norm_base) <= 0:
        raise ValueError("norms must be positive")
    return ((K2 / K3) * (L / M) * norm_gamma
            / (norm_grad * norm_base)) ** (1.0 / (L + M))


# ---------------------------------------------------------------------------
# The K-sub-record and the constant assembled from it
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KSubRecord:
    K1: float
    K2: float
    K3: float


def kappa_constants(params, C0, K, mu, intG_gamma, intG_moment):
    """The three intermediate constants of the optimization chain, for a
    normalized profile G (int G w1 = 1) and auxiliary parameter mu > 0.
    Below gamma = 1:

        K1 = C0^{(1-g)n}/(1-g) * intG_gamma
             - C0 g (p-1) mu^{p'} / (p(g-1)+1) * intG_moment
        K2 = 1/(1-g) + K,   K3 = C0 g / (mu^p (p(g-1)+1))

    and above gamma = 1 the first is the sum with a plus sign and
    K2 = 1/(g-1) - K."""
    g, p, pp = params.gamma, params.p, params.pprime
    denom = p * (g - 1.0) + 1.0
    if mu <= 0:
        raise ValueError("mu must be positive")
    K3 = C0 * g / (mu ** p * denom)
    if params.mode is Mode.GAMMA_LT_1:
        K1 = (C0 ** ((1.0 - g) * params.n) / (1.0 - g) * intG_gamma
              - C0 * g * (p - 1.0) * mu ** pp / denom * intG_moment)
        K2 = 1.0 / (1.0 - g) + K
    elif params.mode is Mode.GAMMA_GT_1:
        K1 = (C0 ** ((1.0 - g) * params.n) / (g - 1.0) * intG_gamma
              + C0 * g * (p - 1.0) * mu ** pp / denom * intG_moment)
        K2 = 1.0 / (g - 1.0) - K
    else:
        raise ValueError("undefined in the log-Sobolev limit")
    return KSubRecord(K1=K1, K2=K2, K3=K3)


def gn_constant_from_k(params, ks, L, M):
    """Assemble the interpolation constant from the K-sub-record.

    gamma < 1 with K2 > 0 and M > 0:
      (K1^{-1} K2^{M/(L+M)} K3^{L/(L+M)} [(M/L)^{L/(L+M)} + (L/M)^{M/(L+M)}])
        ^{1/(p(a g M/(L+M) + L/(L+M)))};
    K2 = 0 or M = 0 reduces to the two-norm form (K1^{-1} K3)^{1/p};
    gamma > 1:
      (K1 K2^{-M/(M+L)} K3^{-L/(M+L)} (-L/M)^{L/(M+L)} M/(M+L))
        ^{(M+L)/(a p g M)}.
    """
    a, g, p = params.alpha, params.gamma, params.p
    K1, K2, K3 = ks.K1, ks.K2, ks.K3
    if K1 <= 0:
        raise ValueError("K1 must be positive (take mu small enough)")
    if params.mode is Mode.GAMMA_LT_1:
        if K2 == 0.0 or M == 0.0:
            if K2 == 0.0 and M != 0.0:
                raise ValueError("K2 = 0 forces M = 0")
            return (K3 / K1) ** (1.0 / p)
        w = 1.0 / (L + M)
        log_inner = (-math.log(K1) + (M * w) * math.log(K2)
                     + (L * w) * math.log(K3)
                     + math.log((M / L) ** (L * w) + (L / M) ** (M * w)))
        return math.exp(log_inner / (p * (a * g * M * w + L * w)))
    if params.mode is Mode.GAMMA_GT_1:
        w = 1.0 / (M + L)
        log_inner = (math.log(K1) - (M * w) * math.log(K2)
                     - (L * w) * math.log(K3)
                     + (L * w) * math.log(-L / M) + math.log(M * w))
        return math.exp(log_inner * (M + L) / (a * p * g * M))
    raise ValueError("undefined in the log-Sobolev limit")


# ---------------------------------------------------------------------------
# Equal-weight closed-form profile integrals (normalized)
# ---------------------------------------------------------------------------

def equal_weight_profile_integrals(params, tau, omega_se):
    """Closed-form integrals (intG_gamma, intG_moment) of the normalized
    optimal radial profile for a single weight of degree tau with spherical
    mass omega_se, feeding :func:`mu_optimal` and :func:`kappa_constants`.

    gamma < 1 uses G = (lam + (alpha-1)|x|^{p'})^{alpha p/(1-alpha)};
    gamma > 1 uses G = (lam - (1-alpha)|x|^{p'})_+^{alpha p/(1-alpha)};
    lam is solved from the normalization int G w = 1.
    """
    a, g, p, pp, n = params.alpha, params.gamma, params.p, params.pprime, \
        params.n
    b = (n + tau) / pp
    if params.mode is Mode.GAMMA_LT_1:
        q1 = a * p / (a - 1.0)
        c = a - 1.0
        # D(q, s) = value of the decaying radial integral at lam = 1
        def D(q, s):
            bs = (s + n + tau) / pp
            return math.exp(-bs * math.log(c) - math.log(pp)
                            + log_beta(q - bs, bs)) * omega_se
        D1 = D(q1, 0.0)
        lam = D1 ** (1.0 / (q1 - b))
        intG_gamma = lam ** (-g * q1 + b) * D(g * q1, 0.0)
        intG_moment = lam ** (-q1 + b + 1.0) * D(q1, pp)
        return intG_gamma, intG_moment
    if params.mode is Mode.GAMMA_GT_1:
        q1 = a * p / (1.0 - a)
        c = 1.0 - a
        def D(q, s):
            bs = (s + n + tau) / pp
            return math.exp(-bs * math.log(c) - math.log(pp)
                            + log_beta(q + 1.0, bs)) * omega_se
        D1 = D(q1, 0.0)
        lam = D1 ** (-1.0 / (q1 + b))
        intG_gamma = lam ** (g * q1 + b) * D(g * q1, 0.0)
        intG_moment = lam ** (q1 + b + 1.0) * D(q1, pp)
        return intG_gamma, intG_moment
    raise ValueError("undefined in the log-Sobolev limit")


# ---------------------------------------------------------------------------
# Bundle
# ---------------------------------------------------------------------------

@dataclass
class ConstantsBundle:
    L: float
    M: float
    theta: Optional[float]
    K: float
    C0: float
    c_klmc0: Optional[float]
    sharp_constant: Optional[float]
    mu_opt: Optional[float]
    k_sub: Optional[KSubRecord]
    provenance: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "L": self.L, "M": self.M, "theta": self.theta,
            "K": self.K, "C0": self.C0, "c_klmc0": self.c_klmc0,
            "sharp_constant": self.sharp_constant, "mu_opt": self.mu_opt,
        }
        if self.k_sub is not None:
            out["k_sub"] = {"K1": self.k_sub.K1, "K2": self.k_sub.K2,
                            "K3": self.k_sub.K3}
        else:
            out["k_sub"] = None
        out["provenance"] = dict(self.provenance)
        return out


def constants_bundle(params, tau1, tau2, tau3, C0=1.0, K=None,
                     ball_mass=None, omega_se=None):
    """Assemble the full bundle of constants for a weight triple described
    by its degrees.  With equal degrees and a supplied ball mass the sharp
    closed-form constant and the optimal mu are filled in; otherwise only
    the degree-derived quantities are."""
    n = params.n
    equal = (tau1 == tau2 == tau3)
    tau = tau1
    if K is None:
        if not equal:
            raise ValueError("K must be supplied for unequal degrees")
        K = -float(n) - tau
    L, M = compute_LM(params, tau1, tau2, tau3)
    th = theta(params, L, M)
    c_pref = c_klmc0(params, K, L, M, C0)
    prov = {
        "L": "degree combination -(n+tau1)*gamma + n + tau3",
        "M": "degree combination p + (n+tau1)/alpha - (n+tau2)",
        "theta": "interpolation exponent from (L, M)",
        "c_klmc0": "closed form from the admissible pair (K, C0)",
    }
    sharp = None
    mu = None
    ks = None
    if equal and ball_mass is not None and 1.0 < params.p < n + tau:
        sharp = sharp_gn_constant(params, tau, ball_mass)
        prov["sharp_constant"] = "equal-weight closed form (Beta function)"
        if omega_se is None:
            omega_se = (n + tau) * ball_mass
        ig, im = equal_weight_profile_integrals(params, tau, omega_se)
        mu = mu_optimal(params, C0, L, M, ig, im)
        prov["mu_opt"] = "closed-form optimum at the optimal radial profile"
        ks = kappa_constants(params, C0, K, mu, ig, im)
        prov["k_sub"] = "intermediate constants at the optimal profile"
    return ConstantsBundle(L=L, M=M, theta=th, K=float(K), C0=float(C0),
                           c_klmc0=c_pref, sharp_constant=sharp, mu_opt=mu,
                           k_sub=ks, provenance=prov)
