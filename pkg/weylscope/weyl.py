"""Weyl disks and estimates of the Weyl function m(z)."""

from typing import NamedTuple, Optional, Sequence

import numpy as np
from simber import Logger

from weylscope.exceptions import (
    ArgumentError, DegenerateDiskError, MeasureDomainError, PoleError,
    UnsupportedMeasureError
)
from weylscope.fundamental import (
    FundamentalSystem, SpectralParameter, as_spectral, solve_fundamental
)
from weylscope.measure import SignedMeasure, shift_restrict

logger = Logger("weyl")


class WeylDisk(NamedTuple):
    """Disk of m-values compatible with a real boundary condition at x0.

    log_radius stays finite when radius underflows.
    """
    z: SpectralParameter
    x0: float
    center: complex
    radius: float
    log_radius: float

    def _floor(self) -> float:
        # roundoff in the center dominates once the radius underflows it
        return 1e-12 * max(1.0, abs(self.center))

    def contains(self, value: complex, slack: float = 1e-8) -> bool:
        return abs(value - self.center) <= self.radius * (1 + slack) + self._floor()

    def encloses(self, inner: "WeylDisk", slack: float = 1e-8) -> bool:
        """Whether `inner` lies inside this disk."""
        return (abs(inner.center - self.center) + inner.radius
                <= self.radius * (1 + slack) + self._floor())


class MEstimate(NamedTuple):
    """m(z) lies within error_radius of value."""
    value: complex
    error_radius: float
    x0: float
    z: SpectralParameter


def _require_upper(z: SpectralParameter):
    if not z.z.imag > 0:
        raise ArgumentError("z", z.z, "Im(z) > 0")


def weyl_disk(fs: FundamentalSystem, x0: float) -> WeylDisk:
    """Center -W(c, s*)/W(s, s*) and radius 1/|W(s, s*)| at x0.

    Both Wronskians carry the common factor exp(2 Re(k) x0), which is
    divided out before anything is formed.
    """
    if not x0 > 0:
        raise ArgumentError("x0", x0, "a positive grid point")
    index = fs.index_of(x0)
    k = fs.k
    g_c, d_c, g_s, d_s = fs.values[index]

    overlap = np.conj(k) * g_s * np.conj(d_s)
    if overlap.imag == 0:
        raise DegenerateDiskError(fs.z.z, x0)

    cross = np.conj(k) * g_c * np.conj(d_s) - k * d_c * np.conj(g_s)
    center = -cross / (2j * overlap.imag)
    log_radius = -2 * k.real * x0 - np.log(2 * abs(overlap.imag))
    return WeylDisk(fs.z, x0, complex(center), float(np.exp(log_radius)),
                    float(log_radius))


def m_truncated(fs: FundamentalSystem, x0: float) -> MEstimate:
    """Truncated quotient -k (1 + k^-1 int c~ dchi) / (1 + k^-1 int s~ dchi).

    The true m(z) is within twice the Weyl radius at x0.
    """
    _require_upper(fs.z)
    disk = weyl_disk(fs, x0)
    k = fs.k
    moment_c, moment_s = fs.moments[fs.index_of(x0)]
    # s~ = k G_s, so k^-1 int s~ dchi is the stored G_s moment
    denominator = 1 + moment_s
    if denominator == 0:
        raise DegenerateDiskError(fs.z.z, x0)
    value = -k * (1 + moment_c / k) / denominator
    return MEstimate(complex(value), 2 * disk.radius, x0, fs.z)


def m_truncated_raw(fs: FundamentalSystem, x0: float) -> complex:
    """-(k c + c') / (s' + k s) from the raw values; overflows for large Im(z)."""
    index = fs.index_of(x0)
    k = fs.k
    c, c_prime = fs.pair("c", index)
    s, s_prime = fs.pair("s", index)
    return complex(-(c * k + c_prime) / (s_prime + k * s))


def exact_m_compact(m: SignedMeasure, z, L: Optional[float] = None) -> complex:
    """Half-line m(z) for a purely atomic measure of compact support.

    Beyond the last atom the L^2 solution is exp(-kx), so the ratio
    u'/u = -k is carried backwards through free stretches and jumps down
    to 0. The result is the left derivative ratio at 0.
    """
    if not m.is_atomic:
        raise UnsupportedMeasureError("exact_m_compact")
    z = as_spectral(z)
    _require_upper(z)
    last = m.support_end
    if L is None:
        L = last + 1.0
    elif m.atoms and not L > last:
        raise ArgumentError("L", L, "a point beyond the last atom ({})".format(last))

    k = z.k
    ratio = -k
    position = L
    # right to left, ending with a free step down to the origin
    for atom, weight in reversed([(0.0, 0.0)] + list(m.atoms)):
        decay = np.exp(-2 * k * (position - atom))
        plus, minus = (1 + decay) / 2, (1 - decay) / 2
        denominator = plus - ratio * minus / k
        if denominator == 0:
            raise PoleError(z.z)
        ratio = (-k * minus + ratio * plus) / denominator
        ratio -= weight
        position = atom
    return complex(ratio)


def m_shifted(m: SignedMeasure, t: float, z, x0: float,
              tol: float = 1e-12) -> MEstimate:
    """Estimate of m(z, t), the Weyl function of the problem on (t, b)
    with a Dirichlet condition at t.
    """
    z = as_spectral(z)
    if not (0 <= t and t + x0 < m.domain_end):
        raise MeasureDomainError(t + x0, m.domain_end)
    shifted = shift_restrict(m, t)
    if shifted.is_atomic and shifted.domain_end == np.inf:
        return MEstimate(exact_m_compact(shifted, z), 0.0, x0, z)
    fs = solve_fundamental(shifted, z, x0, tol)
    return m_truncated(fs, x0)


def radius_decay_rate(fs: FundamentalSystem, x0_list: Sequence[float]) -> float:
    """Least squares slope of log r(z, x0) over x0_list (all grid points)."""
    x0_list = np.asarray(x0_list, dtype=float)
    logs = [weyl_disk(fs, x0).log_radius for x0 in x0_list]
    slope, _ = np.polyfit(x0_list, logs, 1)
    logger.debug("log r slope {:.6f} against -2Re(k) = {:.6f}".format(
        slope, -2 * fs.k.real))
    return float(slope)
