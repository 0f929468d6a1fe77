"""Locally finite signed measures on [0, b) and the Lebesgue-Stieltjes
integrals the solvers need.

A measure is a finite list of atoms plus a piecewise polynomial density.
Intervals are half-open everywhere: [lo, hi) counts an atom at lo and
ignores one at hi. The distribution function follows the same rule,
chi(x) = chi([0, x)) with chi(0) = 0.
"""

import json
import re
from math import inf, isfinite
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from simber import Logger

from weylscope.exceptions import (
    MeasureDomainError, MeasureFormatError, EvaluationError, ArgumentError
)
from weylscope.quadrature import map_rule, refine, composite_rule

logger = Logger("measure")

# Below this |lambda| the closed form antiderivative loses digits to
# cancellation, so exponential moments fall back to quadrature.
_CLOSED_FORM_MIN_RATE = 1.0
_FALLBACK_ORDER = 32
MAX_DEGREE = 3


class DensityPiece:
    """Polynomial density on [start, end).

    The coefficients are in powers of the local variable (y - start),
    lowest degree first, which keeps them well scaled far from 0.
    """

    def __init__(self, start: float, end: float, coeffs: Sequence[float]):
        self.start = float(start)
        self.end = float(end)
        self.coeffs = tuple(float(c) for c in coeffs)
        self.polynomial = Polynomial(self.coeffs)

    def __repr__(self):
        return "DensityPiece({}, {}, {})".format(self.start, self.end, self.coeffs)

    def __call__(self, y):
        return self.polynomial(np.asarray(y, dtype=float) - self.start)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def recentered(self, new_start: float, new_end: float,
                   offset: float = 0.0) -> "DensityPiece":
        """Same density restricted to [new_start, new_end) of the original
        axis, then moved left by `offset`.
        """
        shift = Polynomial([new_start - self.start, 1.0])
        coeffs = self.polynomial(shift).coef
        return DensityPiece(new_start - offset, new_end - offset, coeffs)

    def integral(self, lo: float, hi: float) -> float:
        """Plain integral of the density over [lo, hi] (inside the piece)."""
        anti = self.polynomial.integ()
        return float(anti(hi - self.start) - anti(lo - self.start))

    def abs_integral(self, lo: float, hi: float) -> float:
        """Integral of |density| over [lo, hi], split at the real roots."""
        a, b = lo - self.start, hi - self.start
        cuts = [a, b]
        if self.polynomial.degree() > 0:
            for root in self.polynomial.roots():
                if abs(root.imag) < 1e-12 and a < root.real < b:
                    cuts.append(root.real)
        cuts.sort()
        anti = self.polynomial.integ()
        return float(sum(abs(anti(right) - anti(left))
                         for left, right in zip(cuts[:-1], cuts[1:])))

    def exponential_moment(self, rate: complex, lo: float, hi,
                           shift: float = 0.0):
        """Integral of exp(rate * (y - shift)) * density(y) over [lo, hi].

        `hi` may be an array; entries are clipped to [lo, end]. The caller
        keeps Re(rate * (y - shift)) <= 0 on the interval.
        """
        hi = np.clip(np.asarray(hi, dtype=float), lo, None)
        if abs(rate) >= _CLOSED_FORM_MIN_RATE:
            return self._closed_form(rate, lo, hi, shift)
        return self._quadrature(rate, lo, hi, shift)

    def _closed_form(self, rate, lo, hi, shift):
        derivatives = [self.polynomial]
        for _ in range(MAX_DEGREE):
            derivatives.append(derivatives[-1].deriv())

        def antiderivative(y):
            local = y - self.start
            total = 0j
            for order, poly in enumerate(derivatives):
                total = total + (-1) ** order * poly(local) / rate ** (order + 1)
            return np.exp(rate * (y - shift)) * total

        return antiderivative(hi) - antiderivative(lo)

    def _quadrature(self, rate, lo, hi, shift):
        hi_flat = np.atleast_1d(hi)
        result = np.empty(hi_flat.shape, dtype=complex)
        for index, upper in enumerate(hi_flat):
            nodes, weights = map_rule(_FALLBACK_ORDER, lo, upper)
            result[index] = np.sum(weights * self(nodes) * np.exp(rate * (nodes - shift)))
        return result.reshape(np.shape(hi)) if np.ndim(hi) else result[0]


class TotalVariationBudget(NamedTuple):
    """|chi|([0, x0)): the only quantity the error constants depend on."""
    value: float

    def __float__(self):
        return float(self.value)


class SignedMeasure:
    """Immutable signed measure: atoms plus piecewise polynomial density.

    atoms:      (position, weight) pairs, strictly increasing positions
    density:    DensityPiece list, sorted and non-overlapping
    domain_end: b, may be math.inf
    """

    def __init__(self, atoms: Sequence[Tuple[float, float]] = (),
                 density: Sequence[DensityPiece] = (), domain_end: float = inf):
        self.domain_end = float(domain_end)
        if not self.domain_end > 0:
            raise ArgumentError("domain_end", domain_end, "a positive number or inf")

        atoms = tuple((float(p), float(w)) for p, w in atoms)
        previous = -inf
        for position, weight in atoms:
            if not (0 <= position < self.domain_end):
                raise MeasureDomainError(position, self.domain_end)
            if position <= previous:
                raise ArgumentError("atom position", position, "strictly increasing positions")
            if weight == 0 or not isfinite(weight):
                raise ArgumentError("atom weight", weight, "a finite nonzero weight")
            previous = position

        pieces = []
        previous_end = 0.0
        for piece in density:
            if len(piece.coeffs) > MAX_DEGREE + 1:
                raise ArgumentError("density degree", len(piece.coeffs) - 1,
                                    "at most {}".format(MAX_DEGREE))
            if not (0 <= piece.start < piece.end <= self.domain_end) or not isfinite(piece.end):
                raise MeasureDomainError((piece.start, piece.end), self.domain_end)
            if piece.start < previous_end:
                raise ArgumentError("density piece", (piece.start, piece.end),
                                    "sorted, non-overlapping pieces")
            previous_end = piece.end
            if not piece.is_zero():
                pieces.append(piece)

        self.atoms = atoms
        self.density = tuple(pieces)
        self.positions = np.array([p for p, _ in atoms], dtype=float)
        self.weights = np.array([w for _, w in atoms], dtype=float)

    def __repr__(self):
        return "SignedMeasure(atoms={}, density={}, domain_end={})".format(
            list(self.atoms), list(self.density), self.domain_end)

    @property
    def is_atomic(self) -> bool:
        return not self.density

    @property
    def is_zero(self) -> bool:
        return not self.atoms and not self.density

    @property
    def support_end(self) -> float:
        """Smallest L with supp(chi) inside [0, L]."""
        ends = [p for p, _ in self.atoms[-1:]] + [piece.end for piece in self.density[-1:]]
        return max(ends, default=0.0)

    def density_at(self, y):
        """Density value at y (array friendly), 0 outside the pieces."""
        y = np.asarray(y, dtype=float)
        values = np.zeros(y.shape)
        for piece in self.density:
            inside = (y >= piece.start) & (y < piece.end)
            values = np.where(inside, piece(y), values)
        return values

    def atoms_in(self, lo: float, hi: float):
        """Positions and weights of the atoms in [lo, hi)."""
        mask = (self.positions >= lo) & (self.positions < hi)
        return self.positions[mask], self.weights[mask]

    def breakpoints(self, lo: float, hi: float) -> np.ndarray:
        """Atom positions and density breakpoints strictly inside (lo, hi)."""
        points = list(self.positions)
        for piece in self.density:
            points.extend((piece.start, piece.end))
        points = np.unique(np.array(points, dtype=float))
        return points[(points > lo) & (points < hi)]

    def __add__(self, other: "SignedMeasure") -> "SignedMeasure":
        weights = {}
        for position, weight in self.atoms + other.atoms:
            weights[position] = weights.get(position, 0.0) + weight
        atoms = [(p, w) for p, w in sorted(weights.items()) if w != 0]

        cuts = sorted({c for piece in self.density + other.density
                       for c in (piece.start, piece.end)})
        pieces = []
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            coeffs = np.zeros(MAX_DEGREE + 1)
            for piece in self.density + other.density:
                if piece.start <= lo and hi <= piece.end:
                    local = piece.recentered(lo, hi).coeffs
                    coeffs[:len(local)] += local
            if np.any(coeffs):
                pieces.append(DensityPiece(lo, hi, coeffs))
        return SignedMeasure(atoms, pieces, min(self.domain_end, other.domain_end))

    def to_dict(self) -> dict:
        return {
            "atoms": [[p, w] for p, w in self.atoms],
            "density": [{"from": piece.start, "to": piece.end, "coeffs": list(piece.coeffs)}
                        for piece in self.density],
            "domain_end": "inf" if self.domain_end == inf else self.domain_end,
        }


def _check_point(m: SignedMeasure, x: float) -> None:
    if not (0 <= x < m.domain_end):
        raise MeasureDomainError(x, m.domain_end)


def cdf(m: SignedMeasure, x: float) -> float:
    """chi(x) = chi([0, x)), with chi(0) = 0."""
    _check_point(m, x)
    total = float(np.sum(m.weights[m.positions < x]))
    for piece in m.density:
        if piece.start < x:
            total += piece.integral(piece.start, min(piece.end, x))
    return total


def atom_at(m: SignedMeasure, x: float) -> float:
    """chi({x}), 0 when there is no atom at x."""
    _check_point(m, x)
    index = np.searchsorted(m.positions, x)
    if index < len(m.positions) and m.positions[index] == x:
        return float(m.weights[index])
    return 0.0


def total_variation(m: SignedMeasure, x0: float) -> TotalVariationBudget:
    """|chi|([0, x0)) as sum of |weights| plus the integral of |density|."""
    if not (0 < x0 <= m.domain_end):
        raise MeasureDomainError(x0, m.domain_end)
    total = float(np.sum(np.abs(m.weights[m.positions < x0])))
    for piece in m.density:
        if piece.start < x0:
            total += piece.abs_integral(piece.start, min(piece.end, x0))
    return TotalVariationBudget(total)


def stieltjes_integrate(m: SignedMeasure, f: Callable, lo: float, hi: float,
                        panel_width: float = 0.05, order: int = 16) -> complex:
    """Integral of f over [lo, hi) against chi.

    Atoms contribute w * f(p); the density part is integrated with a
    composite Gauss-Legendre rule on panels no wider than panel_width.
    f must accept numpy arrays.
    """
    if not (0 <= lo < hi <= m.domain_end):
        raise MeasureDomainError((lo, hi), m.domain_end)

    positions, weights = m.atoms_in(lo, hi)
    total = 0j
    if positions.size:
        values = np.asarray(f(positions), dtype=complex)
        if not np.all(np.isfinite(values)):
            raise EvaluationError("atoms of [{}, {})".format(lo, hi))
        total += np.sum(weights * values)

    for piece in m.density:
        left, right = max(lo, piece.start), min(hi, piece.end)
        if left >= right:
            continue
        nodes, quad_weights = composite_rule(refine(left, right, panel_width), order)
        values = np.asarray(f(nodes), dtype=complex)
        if not np.all(np.isfinite(values)):
            raise EvaluationError("[{}, {})".format(left, right))
        total += np.sum(quad_weights * piece(nodes) * values)

    return complex(total)


def exponential_moment(m: SignedMeasure, rate: complex, lo: float, hi,
                       shift: float = 0.0):
    """Integral of exp(rate * (y - shift)) over [lo, hi) against chi, exact.

    Atoms are summed, density pieces use the closed form antiderivative of
    exponential times polynomial. `hi` may be an array of upper limits.
    """
    hi_array = np.asarray(hi, dtype=float)
    positions, weights = m.atoms_in(lo, float(np.max(hi_array)))
    inside = positions[None, :] < hi_array.reshape(-1, 1)
    terms = weights * np.exp(rate * (positions - shift))
    total = np.sum(np.where(inside, terms, 0), axis=1).astype(complex)

    for piece in m.density:
        left = max(lo, piece.start)
        if left >= piece.end:
            continue
        upper = np.minimum(hi_array.reshape(-1), piece.end)
        active = upper > left
        if np.any(active):
            total[active] += np.atleast_1d(
                piece.exponential_moment(rate, left, upper[active], shift))

    return complex(total[0]) if hi_array.ndim == 0 else total.reshape(hi_array.shape)


def shift_restrict(m: SignedMeasure, t: float) -> SignedMeasure:
    """chi_t(B) = chi(t + B) on [0, b - t); an atom at t lands on 0."""
    if not (0 <= t < m.domain_end):
        raise MeasureDomainError(t, m.domain_end)

    atoms = [(p - t, w) for p, w in m.atoms if p >= t]
    pieces = []
    for piece in m.density:
        if piece.end <= t:
            continue
        if piece.start >= t:
            pieces.append(DensityPiece(piece.start - t, piece.end - t, piece.coeffs))
        else:
            pieces.append(piece.recentered(t, piece.end, offset=t))
    return SignedMeasure(atoms, pieces, m.domain_end - t)


# ---------------------------------------------------------------- loading


def _element_lines(text: str, key: str) -> List[int]:
    """Line numbers (1-based) where each element of the top level array
    stored under `key` starts.
    """
    found = re.search(r'"{}"\s*:\s*\['.format(re.escape(key)), text)
    if found is None:
        return []
    lines = []
    depth = 0
    in_string = False
    expecting = True
    position = found.end()
    while position < len(text):
        char = text[position]
        if in_string:
            if char == "\\":
                position += 1
            elif char == '"':
                in_string = False
        elif char == '"':
            in_string = True
            if depth == 0 and expecting:
                lines.append(text.count("\n", 0, position) + 1)
                expecting = False
        elif char in "[{":
            if depth == 0 and expecting:
                lines.append(text.count("\n", 0, position) + 1)
                expecting = False
            depth += 1
        elif char in "]}":
            if depth == 0:
                break
            depth -= 1
        elif char == "," and depth == 0:
            expecting = True
        elif depth == 0 and expecting and not char.isspace():
            lines.append(text.count("\n", 0, position) + 1)
            expecting = False
        position += 1
    return lines


def _key_line(text: str, key: str) -> int:
    found = re.search(r'"{}"'.format(re.escape(key)), text)
    return text.count("\n", 0, found.start()) + 1 if found else 1


def _is_number(value) -> bool:
    return (isinstance(value, (int, float)) and not isinstance(value, bool)
            and isfinite(value))


def _list_under(data: dict, key: str, text: str, source: str) -> list:
    value = data.get(key, [])
    if not isinstance(value, list):
        raise MeasureFormatError(source, _key_line(text, key), "`{}` must be a list".format(key))
    return value


def _parse_domain_end(value, line, source):
    if value in ("inf", "Infinity", None):
        return inf
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise MeasureFormatError(source, line, "domain_end must be a number or \"inf\"")
    if not value > 0:
        raise MeasureFormatError(source, line, "domain_end must be positive")
    return value


def parse_measure(text: str, source: str = "<string>") -> SignedMeasure:
    """Build a measure from its JSON description.

    {"atoms": [[pos, weight], ...],
     "density": [{"from": a, "to": b, "coeffs": [c0, c1, c2, c3]}, ...],
     "domain_end": b | "inf"}
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise MeasureFormatError(source, error.lineno, error.msg)
    if not isinstance(data, dict):
        raise MeasureFormatError(source, 1, "top level value must be an object")

    unknown = set(data) - {"atoms", "density", "domain_end"}
    if unknown:
        key = sorted(unknown)[0]
        raise MeasureFormatError(source, _key_line(text, key), "unknown key `{}`".format(key))

    domain_end = _parse_domain_end(data.get("domain_end", "inf"),
                                   _key_line(text, "domain_end"), source)

    atom_lines = _element_lines(text, "atoms")
    atoms = []
    previous = -inf
    for index, entry in enumerate(_list_under(data, "atoms", text, source)):
        line = atom_lines[index] if index < len(atom_lines) else _key_line(text, "atoms")
        if (not isinstance(entry, list) or len(entry) != 2
                or not all(_is_number(v) for v in entry)):
            raise MeasureFormatError(source, line,
                                     "atom must be [position, weight] with finite numbers")
        position, weight = float(entry[0]), float(entry[1])
        if not (0 <= position < domain_end):
            raise MeasureFormatError(source, line,
                                     "atom position {} outside [0, {})".format(position, domain_end))
        if position <= previous:
            raise MeasureFormatError(source, line,
                                     "atom positions must be strictly increasing")
        if weight == 0:
            raise MeasureFormatError(source, line, "atom weight must be nonzero")
        previous = position
        atoms.append((position, weight))

    piece_lines = _element_lines(text, "density")
    pieces = []
    previous_end = 0.0
    for index, entry in enumerate(_list_under(data, "density", text, source)):
        line = piece_lines[index] if index < len(piece_lines) else _key_line(text, "density")
        if not isinstance(entry, dict) or not {"from", "to", "coeffs"} <= set(entry):
            raise MeasureFormatError(source, line,
                                     "density piece needs `from`, `to` and `coeffs`")
        coeffs = entry["coeffs"]
        if (not isinstance(coeffs, list) or not 1 <= len(coeffs) <= MAX_DEGREE + 1
                or not all(_is_number(c) for c in coeffs)):
            raise MeasureFormatError(source, line,
                                     "coeffs must hold 1 to {} finite numbers".format(MAX_DEGREE + 1))
        if not (_is_number(entry["from"]) and _is_number(entry["to"])):
            raise MeasureFormatError(source, line, "`from` and `to` must be finite numbers")
        start, end = float(entry["from"]), float(entry["to"])
        if not (previous_end <= start < end <= domain_end):
            raise MeasureFormatError(source, line,
                                     "density piece [{}, {}) overlaps or leaves the domain".format(start, end))
        previous_end = end
        pieces.append(DensityPiece(start, end, coeffs))

    measure = SignedMeasure(atoms, pieces, domain_end)
    logger.debug("Loaded {} atoms and {} density pieces from {}".format(
        len(measure.atoms), len(measure.density), source))
    return measure


def load_measure(path: str) -> SignedMeasure:
    """Read and parse a measure description file."""
    with open(path, "r") as stream:
        return parse_measure(stream.read(), source=str(path))
