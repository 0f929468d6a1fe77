"""Distributional form of the first order expansion: integrals of
m(z, t) against smooth bumps compared with

    -k Phi0 - (1/2k) int phi dchi,    k = sqrt(-z).
"""

from typing import List, NamedTuple

import numpy as np
from scipy.integrate import quad
from simber import Logger

from weylscope.asymptotics import Ray
from weylscope.exceptions import ArgumentError, MeasureDomainError
from weylscope.fundamental import SpectralParameter, as_spectral
from weylscope.measure import SignedMeasure, stieltjes_integrate
from weylscope.quadrature import composite_rule, merge_breaks, refine
from weylscope.utility import parallel_map
from weylscope.weyl import m_shifted

logger = Logger("distributional")

# Panel width away from breakpoints
BASE_WIDTH = 0.05
# Boundary layer left of a breakpoint, in units of 1/Re(k)
LAYER_DEPTH = 30.0


class TestFunction:
    """phi(t) = height exp(1 - 1/(1 - u^2)), u = (t - center)/width, on
    [center - width, center + width] and 0 elsewhere.
    """

    __test__ = False

    def __init__(self, center: float, width: float, height: float = 1.0):
        self.center = float(center)
        self.width = float(width)
        self.height = float(height)
        self.lo = self.center - self.width
        self.hi = self.center + self.width
        self.Phi0, _ = quad(self, self.lo, self.hi, epsabs=1e-15, epsrel=1e-13, limit=200)

    def __repr__(self):
        return "bump(center={}, width={}, height={})".format(
            self.center, self.width, self.height)

    def _u(self, t):
        return (np.asarray(t, dtype=float) - self.center) / self.width

    def __call__(self, t):
        u = self._u(t)
        inside = np.abs(u) < 1
        safe = np.where(inside, u, 0.0)
        values = np.where(inside, self.height * np.exp(1 - 1 / (1 - safe ** 2)), 0.0)
        return values if values.ndim else float(values)

    def derivative(self, t):
        u = self._u(t)
        inside = np.abs(u) < 1
        safe = np.where(inside, u, 0.0)
        slope = -2 * safe / (1 - safe ** 2) ** 2 / self.width
        values = np.where(inside, self(t) * slope, 0.0)
        return values if values.ndim else float(values)

    def __add__(self, other) -> "TestFunctionSum":
        return TestFunctionSum([self]) + other


class TestFunctionSum:
    """Sum of bumps; center and width describe the hull of the supports."""

    __test__ = False

    def __init__(self, terms):
        self.terms = tuple(terms)
        self.lo = min(term.lo for term in self.terms)
        self.hi = max(term.hi for term in self.terms)
        self.center = 0.5 * (self.lo + self.hi)
        self.width = 0.5 * (self.hi - self.lo)
        self.Phi0 = sum(term.Phi0 for term in self.terms)

    def __repr__(self):
        return " + ".join(repr(term) for term in self.terms)

    def __add__(self, other) -> "TestFunctionSum":
        more = other.terms if isinstance(other, TestFunctionSum) else (other,)
        return TestFunctionSum(self.terms + tuple(more))

    def __call__(self, t):
        return sum(term(t) for term in self.terms)

    def derivative(self, t):
        return sum(term.derivative(t) for term in self.terms)


def bump(center: float, width: float, height: float = 1.0,
         domain_end: float = np.inf) -> TestFunction:
    """Bump supported on [center - width, center + width] inside (0, domain_end)."""
    if not width > 0:
        raise ArgumentError("width", width, "a positive half width")
    if not (center - width > 0 and center + width < domain_end):
        raise MeasureDomainError((center - width, center + width), domain_end)
    return TestFunction(center, width, height)


def _panel_edges(m: SignedMeasure, phi: TestFunction, k: complex) -> np.ndarray:
    """Panels on supp(phi) split at atoms and density breakpoints, with
    a layer of width 1/(2 Re k) panels left of each of them.
    """
    breaks = m.breakpoints(phi.lo, phi.hi)
    step = 1.0 / (2.0 * k.real)
    depth = int(np.ceil(LAYER_DEPTH / k.real / step))
    layers = [p - step * np.arange(1, depth + 1) for p in breaks]
    layers = [layer[layer > phi.lo] for layer in layers]

    anchors = merge_breaks([phi.lo, phi.hi], breaks, *layers)
    segments = [refine(a, b, BASE_WIDTH) for a, b in zip(anchors[:-1], anchors[1:])]
    return np.concatenate([segments[0]] + [segment[1:] for segment in segments[1:]])


def clip_truncation(m: SignedMeasure, phi: TestFunction, x0: float) -> float:
    """x0, pulled in so that t + x0 stays inside the domain on supp(phi)."""
    if m.domain_end < np.inf:
        x0 = min(x0, 0.999 * (m.domain_end - phi.hi))
    return x0


def default_truncation(m: SignedMeasure, phi: TestFunction) -> float:
    """x0 with t + x0 past the support of chi for every t in supp(phi)."""
    return clip_truncation(m, phi, max(1.0, m.support_end - phi.lo))


def _shifted_localized(task) -> complex:
    m, t, z, x0, tol = task
    z = as_spectral(z)
    return m_shifted(m, t, z, x0, tol).value + z.k


def lhs_integral(m: SignedMeasure, phi: TestFunction, z, quad_points: int = 16,
                 x0: float = None, tol: float = 1e-12, jobs: int = 1) -> complex:
    """int m(z, t) phi(t) dt as -k Phi0 + int (m(z, t) + k) phi(t) dt.

    Nodes never sit on an atom; m(z, t) jumps there.
    """
    z = as_spectral(z)
    if not z.z.imag > 0:
        raise ArgumentError("z", z.z, "Im(z) > 0")
    if x0 is None:
        x0 = default_truncation(m, phi)

    nodes, weights = composite_rule(_panel_edges(m, phi, z.k), quad_points)
    values = phi(nodes)
    live = values != 0
    tasks = [(m, t, z.z, x0, tol) for t in nodes[live]]
    localized = np.array(parallel_map(_shifted_localized, tasks, jobs), dtype=complex)
    logger.debug("lhs at z={} used {} inner estimates".format(z.z, len(tasks)))

    return complex(-z.k * phi.Phi0 + np.sum(weights[live] * values[live] * localized))


def rhs_prediction(m: SignedMeasure, phi: TestFunction, z) -> complex:
    """-k Phi0 - (1/2k) int phi dchi."""
    k = as_spectral(z).k
    lo, hi = max(0.0, phi.lo), min(phi.hi, m.domain_end)
    moment = stieltjes_integrate(m, phi, lo, hi, panel_width=0.01) if lo < hi else 0j
    return complex(-k * phi.Phi0 - moment / (2 * k))


class DistributionalRow(NamedTuple):
    R: float
    theta: float
    lhs: complex
    rhs: complex
    residual: float
    scaled_residual: float
    phi_center: float
    phi_width: float


def distributional_residual_sweep(m: SignedMeasure, phi: TestFunction, ray: Ray,
                                  quad_points: int = 16, tol: float = 1e-12,
                                  jobs: int = 1, x0: float = None) -> List[DistributionalRow]:
    """|lhs - rhs| and sqrt(|z|) times it for every point of the ray.

    x0 is the truncation of the shifted problems, default_truncation when
    not given.
    """
    rows = []
    for radius in sorted(ray.radii):
        z = SpectralParameter.from_ray(radius, ray.theta)
        lhs = lhs_integral(m, phi, z, quad_points, x0=x0, tol=tol, jobs=jobs)
        rhs = rhs_prediction(m, phi, z)
        residual = abs(lhs - rhs)
        rows.append(DistributionalRow(radius, ray.theta, lhs, rhs, residual,
                                      np.sqrt(radius) * residual,
                                      phi.center, phi.width))
    return rows


class WindowCheck(NamedTuple):
    """int_[s-eps, s] phi(t) exp(2k(t - s)) dt against phi(s)/(2k)."""
    direct: complex
    predicted: complex

    @property
    def residual(self) -> float:
        return abs(self.direct - self.predicted)


def window_estimate(phi: TestFunction, s: float, z, eps: float,
                    order: int = 16) -> WindowCheck:
    """Integration by parts estimate of the window integral left of s;
    the residual is O(1/|z|) for smooth phi.
    """
    if not eps > 0:
        raise ArgumentError("eps", eps, "a positive window")
    k = as_spectral(z).k
    edges = refine(s - eps, s, min(eps, 1.0 / (4 * abs(k))))
    nodes, weights = composite_rule(edges, order)
    direct = np.sum(weights * phi(nodes) * np.exp(2 * k * (nodes - s)))
    return WindowCheck(complex(direct), complex(phi(s) / (2 * k)))
