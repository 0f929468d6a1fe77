"""High energy expansions of c, s and m, and residual sweeps
against computed truth along rays z = R exp(i theta).
"""

from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from simber import Logger

from weylscope.exceptions import ArgumentError, MeasureDomainError
from weylscope.fundamental import SpectralParameter, as_spectral, solve_fundamental
from weylscope.measure import (
    SignedMeasure, atom_at, cdf, exponential_moment, stieltjes_integrate,
    total_variation
)
from weylscope.quadrature import composite_rule, merge_breaks, refine
from weylscope.utility import parallel_map
from weylscope.weyl import exact_m_compact, m_truncated

logger = Logger("asymptotics")


class Ray(NamedTuple):
    """Points z = R exp(i theta) for the radii in `radii`, ascending."""
    theta: float
    radii: Tuple[float, ...]

    @classmethod
    def from_range(cls, theta: float, r_min: float, r_max: float,
                   points_per_decade: int = 4) -> "Ray":
        """Logarithmically spaced radii from r_min to r_max, both included."""
        if not 0 < theta < np.pi:
            raise ArgumentError("theta", theta, "a value in (0, pi)")
        if not 0 < r_min < r_max:
            raise ArgumentError("R range", (r_min, r_max), "0 < R_min < R_max")
        if points_per_decade < 1:
            raise ArgumentError("points_per_decade", points_per_decade, ">= 1")

        decades = np.log10(r_max / r_min)
        count = max(2, int(np.ceil(decades * points_per_decade - 1e-9)) + 1)
        radii = np.logspace(np.log10(r_min), np.log10(r_max), count)
        radii[0], radii[-1] = r_min, r_max
        return cls(float(theta), tuple(float(r) for r in radii))

    def points(self) -> List[SpectralParameter]:
        return [SpectralParameter.from_ray(r, self.theta) for r in self.radii]


class AsymptoticExpansion(NamedTuple):
    z: SpectralParameter
    x0: float
    leading: complex
    I1: complex
    second_order: complex
    E_limits: Tuple[float, float, float, float]

    @property
    def first_order(self) -> complex:
        return self.leading - self.I1


def first_order_m(m: SignedMeasure, z, x0: float, a: float = 0.0) -> complex:
    """-k - int_[a,x0) exp(-2k(y - a)) dchi(y).

    With a > 0 this is the prediction for the problem started at a.
    """
    k = as_spectral(z).k
    if not 0 < x0 < m.domain_end:
        raise MeasureDomainError(x0, m.domain_end)
    if not 0 <= a < x0:
        raise ArgumentError("a", a, "a left endpoint in [0, {})".format(x0))
    return complex(-k - exponential_moment(m, -2 * k, a, x0, shift=a))


def second_order_correction(m: SignedMeasure, z, x0: float) -> complex:
    """-(1/2k) int_[0,x0) (1 - exp(-2k(x0 - y))) J(y) dchi(y)
    with J(y) = int_[0,y) exp(-2kr) dchi(r).
    """
    k = as_spectral(z).k
    if m.is_zero:
        return 0j

    def integrand(y):
        inner = exponential_moment(m, -2 * k, 0.0, np.asarray(y, dtype=float))
        return (1 - np.exp(-2 * k * (x0 - np.asarray(y)))) * inner

    width = min(0.05, 1.0 / abs(k))
    return complex(-stieltjes_integrate(m, integrand, 0.0, x0, panel_width=width) / (2 * k))


def second_order_m(m: SignedMeasure, z, x0: float) -> complex:
    return first_order_m(m, z, x0) + second_order_correction(m, z, x0)


def _integrate_cdf(m: SignedMeasure, x: float, offset: float, order: int = 16) -> float:
    """int_(0,x) (chi(y) + offset) dchi(y), the atom at 0 left out."""
    positions, weights = m.atoms_in(0.0, x)
    total = sum(w * (cdf(m, p) + offset) for p, w in zip(positions, weights) if p > 0)

    for piece in m.density:
        lo, hi = piece.start, min(piece.end, x)
        if lo >= hi:
            continue
        # chi is smooth between atoms
        cuts = merge_breaks([lo, hi], positions[(positions > lo) & (positions < hi)])
        for left, right in zip(cuts[:-1], cuts[1:]):
            nodes, quad_weights = composite_rule(refine(left, right, 0.05), order)
            below = cdf(m, left) + atom_at(m, left)
            values = below + np.array([piece.integral(left, y) for y in nodes])
            total += float(np.sum(quad_weights * piece(nodes) * (values + offset)))
    return float(total)


def error_limits(m: SignedMeasure, x: float) -> Tuple[float, float, float, float]:
    """Limits of E_1 .. E_4 as Im(z) grows.

    E_1, E_2 tend to (1/8) int_(0,x) (chi(y) + chi({0})) dchi(y) and
    E_3, E_4 to the same with chi({0}) subtracted.
    """
    origin = atom_at(m, 0.0)
    plus = _integrate_cdf(m, x, origin) / 8
    minus = _integrate_cdf(m, x, -origin) / 8
    return plus, plus, minus, minus


def _expansion_terms(m: SignedMeasure, k: complex, x: float):
    decay = np.exp(-2 * k * x)
    cosh, sinh = (1 + decay) / 2, (1 - decay) / 2
    near = exponential_moment(m, -2 * k, 0.0, x)
    far = exponential_moment(m, 2 * k, 0.0, x, shift=x)
    return cosh, sinh, cdf(m, x), near, far


def lemma_expansions(m: SignedMeasure, z, x: float, normalized: bool = False,
                     limits: Optional[Sequence[float]] = None):
    """Expansions of (c, c', s, s') at x with E_j replaced by `limits`
    (their limit constants by default).

    normalized=True returns every value multiplied by exp(-k x).
    """
    z = as_spectral(z)
    k, zz = z.k, z.z
    e1, e2, e3, e4 = error_limits(m, x) if limits is None else limits
    cosh, sinh, chi, near, far = _expansion_terms(m, k, x)

    values = (
        cosh + sinh * chi / (2 * k) + (near - far) / (4 * k) - e1 / zz,
        k * sinh + cosh * chi / 2 + (near + far) / 4 + e2 / k,
        sinh / k - cosh * chi / (2 * zz) + (near + far) / (4 * zz) + e3 / k ** 3,
        cosh + sinh * chi / (2 * k) - (near - far) / (4 * k) - e4 / zz,
    )
    scale = 1.0 if normalized else np.exp(k * x)
    return tuple(complex(scale * v) for v in values)


def extract_error_function(m: SignedMeasure, z, x: float, which: int,
                           tol: float = 1e-12) -> complex:
    """E_which(z, x) recovered from the computed fundamental system.

    The expansion without its error term is compared with the solution,
    both scaled by exp(-k x).
    """
    if which not in (1, 2, 3, 4):
        raise ArgumentError("which", which, "one of 1, 2, 3, 4")
    z = as_spectral(z)
    k, zz = z.k, z.z
    fs = solve_fundamental(m, z, x, tol)
    g_c, d_c, g_s, d_s = fs.values[-1]
    solved = (g_c, k * d_c, g_s, k * d_s)
    bare = lemma_expansions(m, z, x, normalized=True, limits=(0, 0, 0, 0))

    if which == 1:
        return complex(zz * (bare[0] - solved[0]))
    if which == 2:
        return complex(k * (solved[1] - bare[1]))
    if which == 3:
        return complex(k ** 3 * (solved[2] - bare[2]))
    return complex(zz * (bare[3] - solved[3]))


def error_constant(m: SignedMeasure, z, x: float, tol: float = 1e-12) -> float:
    """max_j |E_j(z, x)| / |chi|([0, x)), the empirical constant C of
    |E_j| <= C |chi|([0, x)).
    """
    budget = float(total_variation(m, x))
    if budget == 0:
        return 0.0
    return max(abs(extract_error_function(m, z, x, j, tol)) for j in (1, 2, 3, 4)) / budget


def theorem_bracket(m: SignedMeasure, z, x0: float) -> complex:
    """-k - I1 - (E1 + E2 - E3 - E4)/k + (chi(x0) I1 - I1^2)/(2k)
    with the E_j at their limits.
    """
    k = as_spectral(z).k
    i1 = exponential_moment(m, -2 * k, 0.0, x0)
    e1, e2, e3, e4 = error_limits(m, x0)
    return complex(-k - i1 - (e1 + e2 - e3 - e4) / k
                   + (cdf(m, x0) * i1 - i1 ** 2) / (2 * k))


def expand(m: SignedMeasure, z, x0: float) -> AsymptoticExpansion:
    z = as_spectral(z)
    i1 = exponential_moment(m, -2 * z.k, 0.0, x0)
    return AsymptoticExpansion(z, x0, -z.k, complex(i1),
                               second_order_m(m, z, x0), error_limits(m, x0))


def truth_m(m: SignedMeasure, z, x0: float, tol: float = 1e-12) -> Tuple[complex, float]:
    """Reference m(z) and its error band.

    Atomic half-line measures are exact by backward propagation; anything
    else goes through the truncated quotient at x0.
    """
    z = as_spectral(z)
    if m.is_atomic and m.domain_end == np.inf:
        return exact_m_compact(m, z), 0.0
    estimate = m_truncated(solve_fundamental(m, z, x0, tol), x0)
    return estimate.value, estimate.error_radius


class SweepRow(NamedTuple):
    R: float
    theta: float
    m_truth: complex
    m_asym: complex
    residual: float
    scaled_residual: float
    truth_error: float
    inconclusive: bool
    m_second: complex
    residual_bracket: float


def _sweep_point(task) -> SweepRow:
    m, x0, radius, theta, tol = task
    z = SpectralParameter.from_ray(radius, theta)
    truth, band = truth_m(m, z, x0, tol)
    predicted = first_order_m(m, z, x0)
    residual = abs(truth - predicted)
    return SweepRow(
        R=radius, theta=theta, m_truth=truth, m_asym=predicted,
        residual=residual, scaled_residual=np.sqrt(radius) * residual,
        truth_error=band, inconclusive=band > residual,
        m_second=second_order_m(m, z, x0),
        residual_bracket=abs(truth - theorem_bracket(m, z, x0)),
    )


def residual_sweep(m: SignedMeasure, x0: float, ray: Ray, tol: float = 1e-12,
                   jobs: int = 1) -> List[SweepRow]:
    """|m_truth - first_order_m| and sqrt(|z|) times it for every point of
    the ray, sorted by R.

    Points where the truth band exceeds the residual are flagged
    inconclusive rather than failed.
    """
    tasks = [(m, x0, radius, ray.theta, tol) for radius in sorted(ray.radii)]
    rows = parallel_map(_sweep_point, tasks, jobs)
    flagged = sum(row.inconclusive for row in rows)
    if flagged:
        logger.warning("{} of {} sweep points are inconclusive".format(flagged, len(rows)))
    return rows


def is_eventually_decreasing(values: Sequence[float], start: int = 0,
                             noise_floor: float = 0.0) -> bool:
    """Whether values[start:] never increase, values under noise_floor
    counting as decreasing.
    """
    tail = list(values)[start:]
    return all(later <= earlier or later <= noise_floor
               for earlier, later in zip(tail, tail[1:]))
