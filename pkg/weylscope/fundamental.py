"""Fundamental system c(z, x), s(z, x) of -u'' + chi u = z u.

The solver works in the variables normalized by exp(-k x), k = sqrt(-z),
so nothing overflows however large Im(z) gets:

    G = exp(-k x) f(x),    D = exp(-k x) f'(x) / k

The interval [0, x_max] is cut into panels at atoms, density breakpoints
and requested checkpoints, then refined so that |k| h <= 1/4 and, on
density pieces, max|q| h^2 <= 0.1. On each panel the Volterra equation,
with the atom at the left end as its exact Stieltjes term, is solved by
Picard iteration at Gauss-Legendre nodes; panels are composed by matching
value and derivative.

Derivatives are left-continuous throughout: the value stored at an atom
is f'(p-), f'(p+) = f'(p-) + chi({p}) f(p).
"""

from typing import NamedTuple, Sequence, Tuple

import numpy as np
from scipy.integrate import simpson
from simber import Logger

from weylscope.exceptions import (
    ArgumentError, IterationLimitError, MeasureDomainError,
    UnsupportedMeasureError, GridPointError
)
from weylscope.measure import SignedMeasure, total_variation
from weylscope.quadrature import (
    gauss_legendre, interpolation_matrix, merge_breaks, refine
)

logger = Logger("fundamental")

MAX_SPACING = 0.05
MAX_ITERATIONS = 200
PANEL_ORDER = 12
CONTRACTION = 0.1


class SpectralParameter:
    """Complex energy z together with k = sqrt(-z) on the standard branch
    (cut along (-inf, 0), Re(k) >= 0).
    """

    def __init__(self, z):
        self.z = complex(z)
        if self.z.imag == 0 and self.z.real >= 0:
            raise ArgumentError("z", z, "Im(z) != 0 or z real negative")
        self.k = complex(np.sqrt(-self.z))

    @classmethod
    def from_ray(cls, radius: float, theta: float) -> "SpectralParameter":
        return cls(radius * np.exp(1j * theta))

    def conjugate(self) -> "SpectralParameter":
        return SpectralParameter(self.z.conjugate())

    def __repr__(self):
        return "SpectralParameter(z={})".format(self.z)


def as_spectral(z) -> SpectralParameter:
    return z if isinstance(z, SpectralParameter) else SpectralParameter(z)


class NormalizedSolutions(NamedTuple):
    """c~ = exp(-kx) c and s~ = k exp(-kx) s on the solver grid."""
    grid: np.ndarray
    c_tilde: np.ndarray
    s_tilde: np.ndarray


class FundamentalSystem:
    """Values of c, c', s, s' on a grid for one z.

    Stored normalized (see module doc); the raw values are rebuilt on
    access and may overflow for large Re(k) x, which is why the Weyl and
    asymptotic code only reads the normalized arrays.
    """

    def __init__(self, measure: SignedMeasure, z: SpectralParameter, grid,
                 values, moments, residual: float, iterations: int):
        self.measure = measure
        self.z = z
        self.grid = grid
        # columns: G_c, D_c, G_s, D_s
        self.values = values
        # columns: int_[0,x) G_c dchi, int_[0,x) G_s dchi
        self.moments = moments
        self.residual = residual
        self.iterations = iterations

    @property
    def k(self) -> complex:
        return self.z.k

    def _scale(self):
        return np.exp(self.k * self.grid)

    @property
    def c(self):
        return self._scale() * self.values[:, 0]

    @property
    def c_prime(self):
        return self.k * self._scale() * self.values[:, 1]

    @property
    def s(self):
        return self._scale() * self.values[:, 2]

    @property
    def s_prime(self):
        return self.k * self._scale() * self.values[:, 3]

    def normalized(self) -> NormalizedSolutions:
        return NormalizedSolutions(self.grid, self.values[:, 0].copy(),
                                   self.k * self.values[:, 2])

    def index_of(self, x0: float) -> int:
        index = int(np.argmin(np.abs(self.grid - x0)))
        if abs(self.grid[index] - x0) > 1e-12 * max(1.0, abs(x0)):
            raise GridPointError(x0)
        return index

    def pair(self, which: str, index: int) -> Tuple[complex, complex]:
        """(value, left derivative) of `c` or `s` at a grid index."""
        column = {"c": 0, "s": 2}[which]
        scale = np.exp(self.k * self.grid[index])
        return (scale * self.values[index, column],
                self.k * scale * self.values[index, column + 1])

    def right_derivative(self, index: int) -> Tuple[complex, complex]:
        """(c'(x+), s'(x+)) from the jump condition."""
        x = self.grid[index]
        weight = dict(self.measure.atoms).get(x, 0.0)
        c_value, c_left = self.pair("c", index)
        s_value, s_left = self.pair("s", index)
        return c_left + weight * c_value, s_left + weight * s_value

    def wronskian_defect(self) -> np.ndarray:
        """|W_x(c, s) - 1| along the grid, evaluated as
        k exp(2kx) (G_c D_s - D_c G_s) - 1.
        """
        scaled = self.values[:, 0] * self.values[:, 3] - self.values[:, 1] * self.values[:, 2]
        return np.abs(self.k * np.exp(2 * self.k * self.grid) * scaled - 1.0)

    def to_rows(self):
        """Rows of the CSV dump: x and real/imag parts of c, c', s, s'."""
        columns = (self.c, self.c_prime, self.s, self.s_prime)
        for index, x in enumerate(self.grid):
            row = [x]
            for column in columns:
                row.extend((column[index].real, column[index].imag))
            yield row


class _PanelKernel:
    """Quadrature data of the local Volterra operator on a panel of width h.

    Row i < n integrates up to the i-th Gauss node, row n up to the panel
    end; every row has its own Gauss rule on [0, tau_i] and reads the
    iterate through Legendre interpolation.
    """

    def __init__(self, k: complex, h: float, order: int):
        nodes, weights = gauss_legendre(order)
        upper = np.append((nodes + 1.0) / 2.0, 1.0)
        relative = upper[:, None] * (nodes[None, :] + 1.0) / 2.0
        self.order = order
        self.h = h
        self.node_offsets = h * (nodes + 1.0) / 2.0
        self.node_weights = h * weights / 2.0
        self.offsets = h * relative
        self.weights = h * upper[:, None] * weights[None, :] / 2.0
        self.interpolation = interpolation_matrix(order, 2.0 * relative - 1.0)

        decay = np.exp(-2.0 * k * (h * upper[:, None] - self.offsets))
        self.kernel_value = (1.0 - decay) / (2.0 * k)
        self.kernel_derivative = (1.0 + decay) / (2.0 * k)

        end_decay = np.exp(-2.0 * k * np.append(self.node_offsets, h))
        self.plus = (1.0 + end_decay) / 2.0
        self.minus = (1.0 - end_decay) / 2.0


def _peak_density(m: SignedMeasure, a: float, b: float) -> float:
    piece = _piece_on(m, a, b)
    if piece is None:
        return 0.0
    return float(np.max(np.abs(piece(np.linspace(a, b, 33)))))


def _build_grid(m: SignedMeasure, k: complex, x_max: float,
                checkpoints: Sequence[float]) -> np.ndarray:
    spacing = min(MAX_SPACING, 1.0 / (4.0 * abs(k)))
    extra = [c for c in checkpoints if 0 < c < x_max]
    anchors = merge_breaks([0.0, x_max], m.breakpoints(0.0, x_max), extra)
    segments = []
    for a, b in zip(anchors[:-1], anchors[1:]):
        # Picard contracts by about max|q| h^2 / 2 on a panel
        peak = _peak_density(m, a, b)
        width = spacing if peak == 0 else min(spacing, np.sqrt(CONTRACTION / peak))
        segments.append(refine(a, b, width))
    grid = np.concatenate([segments[0]] + [segment[1:] for segment in segments[1:]])
    return grid


def _piece_on(m: SignedMeasure, a: float, b: float):
    middle = 0.5 * (a + b)
    for piece in m.density:
        if piece.start <= middle < piece.end:
            return piece
    return None


def solve_fundamental(m: SignedMeasure, z, x_max: float, tol: float = 1e-12,
                      checkpoints: Sequence[float] = (),
                      max_iterations: int = MAX_ITERATIONS,
                      order: int = PANEL_ORDER) -> FundamentalSystem:
    """Solve the integral equations for c, s and their derivatives on [0, x_max].

    Every entry of `checkpoints` inside (0, x_max) becomes a grid point.
    Raises IterationLimitError when a panel does not converge within
    max_iterations Picard steps.
    """
    if not tol > 0:
        raise ArgumentError("tol", tol, "a positive tolerance")
    if not (0 < x_max < m.domain_end):
        raise MeasureDomainError(x_max, m.domain_end)

    z = as_spectral(z)
    k = z.k
    grid = _build_grid(m, k, x_max, checkpoints)
    weight_at = dict(m.atoms)
    logger.debug("Solving on {} panels for z={}".format(len(grid) - 1, z.z))

    values = np.empty((len(grid), 4), dtype=complex)
    moments = np.zeros((len(grid), 2), dtype=complex)
    # rows G, D; columns c, s
    state = np.array([[1.0, 0.0], [0.0, 1.0 / k]], dtype=complex)
    values[0] = state.T.ravel()

    kernels = {}
    worst = 0.0
    total_iterations = 0
    for index, (a, b) in enumerate(zip(grid[:-1], grid[1:])):
        h = b - a
        kernel = kernels.get(h)
        if kernel is None:
            kernel = kernels.setdefault(h, _PanelKernel(k, h, order))

        weight = weight_at.get(a, 0.0)
        value = state[0]
        derivative = state[1] + weight * value / k
        moment = weight * value

        free_value = np.outer(kernel.plus, value) + np.outer(kernel.minus, derivative)
        free_derivative = np.outer(kernel.minus, value) + np.outer(kernel.plus, derivative)

        piece = _piece_on(m, a, b)
        if piece is None:
            new_value, new_derivative = free_value[-1], free_derivative[-1]
        else:
            density = piece(a + kernel.offsets)
            value_operator = np.einsum("il,ilj->ij", kernel.weights * kernel.kernel_value * density,
                                       kernel.interpolation)
            derivative_row = np.einsum("l,lj->j",
                                       kernel.weights[-1] * kernel.kernel_derivative[-1] * density[-1],
                                       kernel.interpolation[-1])

            iterate = free_value[:-1]
            for step in range(1, max_iterations + 1):
                updated = free_value[:-1] + value_operator[:-1] @ iterate
                change = float(np.max(np.abs(updated - iterate)))
                iterate = updated
                if change < tol * max(1.0, float(np.max(np.abs(iterate)))):
                    break
            else:
                raise IterationLimitError(max_iterations, change, "[{}, {})".format(a, b))
            total_iterations += step
            worst = max(worst, change)

            new_value = free_value[-1] + value_operator[-1] @ iterate
            new_derivative = free_derivative[-1] + derivative_row @ iterate
            moment = moment + (kernel.node_weights * piece(a + kernel.node_offsets)) @ iterate

        state = np.array([new_value, new_derivative])
        values[index + 1] = state.T.ravel()
        moments[index + 1] = moments[index] + moment

    budget = float(total_variation(m, x_max))
    logger.debug("Picard residual {:.3e} (allowed tol * exp({:.3e})) after {} iterations".format(
        worst, budget / abs(k), total_iterations))
    return FundamentalSystem(m, z, grid, values, moments, worst, total_iterations)


def transfer_matrix_oracle(m: SignedMeasure, z, x: float, normalized: bool = False):
    """(c, c', s, s') at x for a purely atomic measure by transfer matrices.

    Free propagators alternate with jump matrices [[1, 0], [w, 1]] for the
    atoms in [0, x); the derivative returned is the left limit at x. With
    normalized=True every value is multiplied by exp(-k x).
    """
    if not m.is_atomic:
        raise UnsupportedMeasureError("transfer_matrix_oracle")
    if not (0 <= x < m.domain_end):
        raise MeasureDomainError(x, m.domain_end)

    k = as_spectral(z).k
    # columns c, s; rows f, f'; scaled by exp(-k * position)
    state = np.eye(2, dtype=complex)
    position = 0.0
    positions, weights = m.atoms_in(0.0, x)
    for atom, weight in list(zip(positions, weights)) + [(x, 0.0)]:
        decay = np.exp(-2.0 * k * (atom - position))
        free = 0.5 * np.array([[1.0 + decay, (1.0 - decay) / k],
                               [k * (1.0 - decay), 1.0 + decay]])
        state = free @ state
        if weight:
            state = np.array([[1.0, 0.0], [weight, 1.0]]) @ state
        position = atom

    scale = 1.0 if normalized else np.exp(k * x)
    return (complex(scale * state[0, 0]), complex(scale * state[1, 0]),
            complex(scale * state[0, 1]), complex(scale * state[1, 1]))


def wronskian(f_pair, g_pair) -> complex:
    """W(f, g) = f g' - f' g for (value, left derivative) pairs at one x."""
    return f_pair[0] * g_pair[1] - f_pair[1] * g_pair[0]


class LagrangeCheck(NamedTuple):
    """Both sides of (z1 - z2) int_[c,d) u1 u2 dx = W_d(u1, u2) - W_c(u1, u2)."""
    lhs: complex
    rhs: complex

    @property
    def defect(self) -> float:
        return abs(self.lhs - self.rhs)


def lagrange_identity(m: SignedMeasure, z1, z2, c: float, d: float,
                      samples: int = 2001, tol: float = 1e-12) -> LagrangeCheck:
    """Evaluate the Lagrange identity for u1 = c(z1, .) and u2 = s(z2, .)."""
    points = np.linspace(c, d, samples)
    first = solve_fundamental(m, z1, d, tol, checkpoints=points)
    second = solve_fundamental(m, z2, d, tol, checkpoints=points)

    lo, hi = first.index_of(c), first.index_of(d)
    x = first.grid[lo:hi + 1]
    product = first.c[lo:hi + 1] * second.s[lo:hi + 1]
    lhs = (as_spectral(z1).z - as_spectral(z2).z) * simpson(product, x=x)
    rhs = (wronskian(first.pair("c", hi), second.pair("s", hi))
           - wronskian(first.pair("c", lo), second.pair("s", lo)))
    return LagrangeCheck(complex(lhs), complex(rhs))
