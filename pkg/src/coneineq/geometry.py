"""Cones, homogeneous weights, and quadrature over cone-restricted spheres,
balls, and full cones, including the closed-form radial integrals used by the
sharp constants.

Every integral over a cone E of a function against a homogeneous weight of
degree tau decomposes as (spherical part over S^{n-1} cap E) x (radial part
against r^{n+tau-1}).  The spherical part is a fixed quadrature grid; the
radial part is a composite Gauss-Legendre rule with geometric panel grading
toward the endpoints (handling fractional-power behaviour at 0 and at compact
support boundaries) and dyadic refinement for error control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import ndtri
from scipy.stats import qmc

from .specfun import log_beta, log_gamma


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    """An open convex cone in R^n.

    Exactly one representation is set: ``orthant_mask`` (per-coordinate flag:
    True means that coordinate is constrained to be positive) or
    ``halfspaces`` (tuple of unit inward normals a, each enforcing a.x > 0).
    The all-False mask represents E = R^n.
    """

    n: int
    orthant_mask: Optional[tuple] = None
    halfspaces: Optional[tuple] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("cone dimension must be >= 2")
        if (self.orthant_mask is None) == (self.halfspaces is None):
            raise ValueError("exactly one of orthant_mask / halfspaces must be given")
        if self.orthant_mask is not None and len(self.orthant_mask) != self.n:
            raise ValueError("orthant_mask length must equal n")
        if self.halfspaces is not None:
            for a in self.halfspaces:
                if len(a) != self.n:
                    raise ValueError("halfspace normal length must equal n")
                if abs(np.linalg.norm(a) - 1.0) > 1e-9:
                    raise ValueError("halfspace normals must be unit vectors")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def full(n):
        """E = R^n (all-False orthant mask)."""
        return Cone(n, orthant_mask=tuple([False] * n))

    @staticmethod
    def orthant(mask):
        return Cone(len(mask), orthant_mask=tuple(bool(m) for m in mask))

    @staticmethod
    def quadrant():
        """The positive quadrant in R^2."""
        return Cone(2, orthant_mask=(True, True))

    @staticmethod
    def from_halfspaces(normals):
        normals = tuple(tuple(float(c) for c in a) for a in normals)
        return Cone(len(normals[0]), halfspaces=normals)

    # -- membership --------------------------------------------------------

    def contains(self, x, margin=0.0):
        """Vectorized membership test; x has shape (..., n).

        ``margin > 0`` demands strict interiority: every active constraint
        must exceed margin * |x|.
        """
        x = np.asarray(x, dtype=float)
        scale = margin * np.linalg.norm(x, axis=-1) if margin else 0.0
        ok = np.ones(x.shape[:-1], dtype=bool)
        if self.orthant_mask is not None:
            for i, m in enumerate(self.orthant_mask):
                if m:
                    ok &= x[..., i] > scale
        else:
            for a in self.halfspaces:
                ok &= x @ np.asarray(a) > scale
        return ok

    @property
    def is_full_space(self):
        return self.orthant_mask is not None and not any(self.orthant_mask)


# ---------------------------------------------------------------------------
# Homogeneous weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """A homogeneous weight on a cone: positive value, analytic gradient,
    degree of homogeneity tau > -n.  ``value`` and ``gradient`` accept point
    arrays of shape (..., n) and return shapes (...) and (..., n).
    """

    degree: float
    value: Callable
    gradient: Callable
    kind: str = "callback"
    exponents: Optional[tuple] = None

    def __call__(self, x):
        return self.value(x)


def monomial_weight(exponents):
    """omega(x) = x_1^{a_1} ... x_n^{a_n} with a_i >= 0.

    Negative exponents are rejected here; weights of negative degree must be
    supplied through the callback kind with the caller responsible for
    integrability near the boundary.
    """
    exps = tuple(float(a) for a in exponents)
    if any(a < 0 for a in exps):
        raise ValueError("monomial exponents must be nonnegative")
    exps_arr = np.array(exps)
    tau = float(exps_arr.sum())

    def value(x):
        x = np.asarray(x, dtype=float)
        out = np.ones(x.shape[:-1])
        for i, a in enumerate(exps):
            if a != 0.0:
                out = out * x[..., i] ** a
        return out

    def gradient(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for i, a in enumerate(exps):
            if a == 0.0:
                continue
            g = np.full(x.shape[:-1], a)
            for j, b in enumerate(exps):
                e = b - 1.0 if j == i else b
                if e != 0.0:
                    g = g * x[..., j] ** e
            out[..., i] = g
        return out

    return Weight(degree=tau, value=value, gradient=gradient,
                  kind="monomial", exponents=exps)


def constant_weight(n):
    """omega == 1 (degree 0) on R^n or any cone in R^n."""
    return monomial_weight([0.0] * n)


# ---------------------------------------------------------------------------
# Spherical quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Spherical nodes (unit vectors strictly inside the cone) with positive
    weights summing to the surface measure of S^{n-1} cap E, plus the radial
    rule descriptors used by :func:`cone_integral`.
    """

    cone: Cone
    nodes: np.ndarray
    weights: np.ndarray
    resolution: int
    method: str
    radial_order: int = 12
    radial_depth: int = 8

    @property
    def total_weight(self):
        return float(np.sum(self.weights))


def _wrap_pi(a):
    """Wrap an angle into (-pi, pi]."""
    a = math.fmod(a, 2 * math.pi)
    if a <= -math.pi:
        a += 2 * math.pi
    elif a > math.pi:
        a -= 2 * math.pi
    return a


def _angular_interval(constraint_angles):
    """Intersect the arcs {theta : cos(theta - phi) > 0} for the given phis.

    Returns (reference_angle, lo, hi) with the admissible set
    {reference + t : t in (lo, hi)}; empty intersections raise.
    """
    phi0 = constraint_angles[0]
    lo, hi = -math.pi / 2, math.pi / 2
    for phi in constraint_angles[1:]:
        d = _wrap_pi(phi - phi0)
        lo = max(lo, d - math.pi / 2)
        hi = min(hi, d + math.pi / 2)
    if hi <= lo:
        raise ValueError("cone constraints have empty angular intersection")
    return phi0, lo, hi


def _gl_on_interval(lo, hi, m):
    x, w = leggauss(m)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def _circle_constraints(cone):
    """Inward-normal angles of the active constraints of a 2-D cone."""
    angles = []
    if cone.orthant_mask is not None:
        for i, m in enumerate(cone.orthant_mask):
            if m:
                angles.append(0.0 if i == 0 else math.pi / 2)
    else:
        for a in cone.halfspaces:
            angles.append(math.atan2(a[1], a[0]))
    return angles


def sphere_cone_quadrature(cone, resolution):
    """Quadrature grid on S^{n-1} cap E.

    n = 2: Gauss-Legendre on the cone's angular interval (uniform midpoint
    rule on the full circle, which is spectrally accurate by periodicity).
    n = 3: tensor Gauss-Legendre in (cos(polar), azimuth) with parameter
    ranges restricted for orthant masks; halfspace cones reject nodes of the
    full-sphere grid.  n >= 4: Halton rejection sampling with equal weights.
    """
    n = cone.n
    if resolution < 4:
        raise ValueError("resolution must be >= 4")

    if n == 2:
        angles = _circle_constraints(cone)
        if not angles:
            k = np.arange(resolution)
            theta = 2 * math.pi * (k + 0.5) / resolution
            w = np.full(resolution, 2 * math.pi / resolution)
            method = "midpoint-circle"
        else:
            phi0, lo, hi = _angular_interval(angles)
            t, w = _gl_on_interval(lo, hi, resolution)
            theta = phi0 + t
            method = "gauss-arc"
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return QuadratureGrid(cone, nodes, w, resolution, method)

    if n == 3:
        m = min(resolution, 32)
        if cone.orthant_mask is not None:
            mask = cone.orthant_mask
            # Gauss-Legendre in the polar angle itself: restricted weights
            # are trigonometric polynomials of (theta, phi), so the rule is
            # spectrally accurate (the cos(theta) substitution is not, its
            # integrands having sqrt singularities at the poles).
            th_lo, th_hi = (0.0, math.pi / 2) if mask[2] else (0.0, math.pi)
            xy_angles = []
            if mask[0]:
                xy_angles.append(0.0)
            if mask[1]:
                xy_angles.append(math.pi / 2)
            th, wth = _gl_on_interval(th_lo, th_hi, m)
            if xy_angles:
                phi0, lo, hi = _angular_interval(xy_angles)
                t, wphi = _gl_on_interval(lo, hi, m)
                phi = phi0 + t
            else:
                k = np.arange(m)
                phi = 2 * math.pi * (k + 0.5) / m
                wphi = np.full(m, 2 * math.pi / m)
            tt, pp = np.meshgrid(th, phi, indexing="ij")
            ww = (np.outer(wth, wphi) * np.sin(tt)).ravel()
            s = np.sin(tt)
            nodes = np.stack(
                [s * np.cos(pp), s * np.sin(pp), np.cos(tt)], axis=-1
            ).reshape(-1, 3)
            return QuadratureGrid(cone, nodes, ww, resolution, "tensor-gl")
        # halfspace cone: full-sphere tensor grid with node rejection
        full = sphere_cone_quadrature(Cone.full(3), resolution)
        keep = cone.contains(full.nodes, margin=1e-12)
        return QuadratureGrid(cone, full.nodes[keep], full.weights[keep],
                              resolution, "tensor-gl-rejection")

    # n >= 4: quasi-random rejection sampling, equal weights
    total = resolution * resolution
    sampler = qmc.Halton(d=n, scramble=False)
    pts = sampler.random(total + 1)[1:]  # drop the origin point
    z = ndtri(np.clip(pts, 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(z, axis=-1)
    dirs = z / norms[:, None]
    area = 2 * math.pi ** (n / 2) / math.exp(log_gamma(n / 2))
    keep = cone.contains(dirs, margin=1e-9)
    nodes = dirs[keep]
    if nodes.size == 0:
        raise ValueError("rejection sampling found no nodes inside the cone")
    w = np.full(len(nodes), area / total)
    return QuadratureGrid(cone, nodes, w, resolution, "halton-rejection")


def omega_SE(weight, cone, grid):
    """Quadrature estimate of the weight's integral over S^{n-1} cap E."""
    return float(np.sum(grid.weights * weight.value(grid.nodes)))


def ball_cone_weight_mass(weight, cone, grid):
    """Integral of the weight over the unit ball intersected with the cone,
    via the identity (sphere integral) = (n + tau) * (ball integral)."""
    ntau = cone.n + weight.degree
    if ntau <= 0:
        raise ValueError("n + tau must be positive")
    return omega_SE(weight, cone, grid) / ntau


# ---------------------------------------------------------------------------
# Radial rules and the full cone integral
# ---------------------------------------------------------------------------

def _graded_breaks(depth):
    """Panel breakpoints on (0, 1), geometrically graded toward both ends."""
    left = [2.0 ** (-k) for k in range(depth, 0, -1)]
    right = [1.0 - 2.0 ** (-k) for k in range(2, depth + 1)]
    return np.array([0.0] + left + right + [1.0])


def _composite_gl(breaks, order):
    x, w = leggauss(order)
    lo = breaks[:-1][:, None]
    hi = breaks[1:][:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def _refine(breaks):
    mid = 0.5 * (breaks[:-1] + breaks[1:])
    out = np.empty(2 * len(breaks) - 1)
    out[0::2] = breaks
    out[1::2] = mid
    return out


def _radial_nodes(support_radius, breaks, order):
    """Radial nodes/weights on (0, support_radius) or, when unbounded, on
    (0, inf) through the substitution r = t / (1 - t)."""
    t, wt = _composite_gl(breaks, order)
    if support_radius is None:
        r = t / (1.0 - t)
        w = wt / (1.0 - t) ** 2
    else:
        r = support_radius * t
        w = support_radius * wt
    return r, w


@dataclass
class QuadratureDiagnostics:
    converged: bool
    refinements: int
    last_change: float
    value: float


def cone_integral(integrand, weight, cone, grid, support_radius=None,
                  rtol=1e-9, max_refinements=3, full_output=False):
    """Integral of ``integrand(x) * weight(x)`` over the cone.

    The integrand is evaluated on the product of the grid's spherical nodes
    and an adaptive radial rule; by homogeneity the weight contributes
    omega(sigma) * r^tau, so the radial factor is r^{n+tau-1}.  The radial
    rule is refined dyadically until two successive refinements agree to
    ``rtol`` (relative); disagreement after ``max_refinements`` is reported
    through the diagnostics record when ``full_output`` is requested.
    """
    ang = grid.weights * weight.value(grid.nodes)
    power = cone.n + weight.degree - 1.0

    def evaluate(breaks):
        r, wr = _radial_nodes(support_radius, breaks, grid.radial_order)
        pts = r[:, None, None] * grid.nodes[None, :, :]
        vals = integrand(pts)
        radial_w = wr * r ** power
        return float(radial_w @ (vals @ ang))

    breaks = _graded_breaks(grid.radial_depth)
    value = evaluate(breaks)
    converged = False
    change = math.inf
    refinements = 0
    for refinements in range(1, max_refinements + 1):
        breaks = _refine(breaks)
        new = evaluate(breaks)
        change = abs(new - value)
        value = new
        if change <= rtol * (abs(new) + 1e-300):
            converged = True
            break
    diag = QuadratureDiagnostics(converged=converged, refinements=refinements,
                                 last_change=change, value=value)
    if full_output:
        return value, diag
    return value


# ---------------------------------------------------------------------------
# Closed-form radial integrals
# ---------------------------------------------------------------------------

def _grid_or_default(weight, cone, grid):
    if grid is None:
        grid = sphere_cone_quadrature(cone, 64)
    return omega_SE(weight, cone, grid)


def beta_radial_integral(lam, c, q, s, params, weight, cone, grid=None):
    """Closed form of the cone integral of (lam + c|y|^{p'})^{-q} |y|^s omega:

        lam^{-q} (lam/c)^{b} (1/p') B(q - b, b) omega_SE,   b = (s+n+tau)/p'.

    Requires q > b > 0 (integrability at infinity and at the origin).
    """
    if lam <= 0 or c <= 0:
        raise ValueError("lam and c must be positive")
    pp = params.pprime
    b = (s + cone.n + weight.degree) / pp
    if b <= 0:
        raise ValueError("s + n + tau must be positive")
    if q <= b:
        raise ValueError(f"divergent integral: q={q} <= (s+n+tau)/p'={b}")
    w_se = _grid_or_default(weight, cone, grid)
    log_val = (-q + b) * math.log(lam) - b * math.log(c) \
        - math.log(pp) + log_beta(q - b, b)
    return math.exp(log_val) * w_se


def gaussian_radial_integral(lam, s, params, weight, cone, grid=None):
    """Closed form of the cone integral of exp(-lam |x|^{p'}) |x|^s omega:

        (1/p') omega_SE lam^{-(n+tau+s)/p'} Gamma((s+n+tau)/p').
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    pp = params.pprime
    b = (s + cone.n + weight.degree) / pp
    if b <= 0:
        raise ValueError("s + n + tau must be positive")
    w_se = _grid_or_default(weight, cone, grid)
    log_val = -b * math.log(lam) - math.log(pp) + log_gamma(b)
    return math.exp(log_val) * w_se


def compact_radial_integral(lam, alpha, q, s, params, weight, cone, grid=None):
    """Closed form of the cone integral of
    (lam - (1-alpha)|y|^{p'})_+^q |y|^s omega:

        lam^q (lam/(1-alpha))^{b} (1/p') B(q + 1, b) omega_SE,
        b = (s+n+tau)/p',

    valid for q > -1, b > 0 and alpha < 1 (compact-support regime).
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if alpha >= 1:
        raise ValueError("alpha must be < 1 for compact support")
    if q <= -1:
        raise ValueError("q must exceed -1")
    pp = params.pprime
    b = (s + cone.n + weight.degree) / pp
    if b <= 0:
        raise ValueError("s + n + tau must be positive")
    w_se = _grid_or_default(weight, cone, grid)
    log_val = (q + b) * math.log(lam) - b * math.log(1.0 - alpha) \
        - math.log(pp) + log_beta(q + 1.0, b)
    return math.exp(log_val) * w_se
