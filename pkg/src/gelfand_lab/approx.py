"""Seminorms on boxes, Bernstein approximation, Wirtinger derivatives.

The sup-seminorm of a transform over a box is bracketed from below by a grid
maximum and from above by coefficient bounding.  Both sides are exact for
polynomial subjects: grid points are rational characters, and the upper bound
multiplies coefficient 1-norms by per-generator modulus bounds in Fraction
arithmetic, which makes subadditivity and submultiplicativity of the reported
upper bounds theorems rather than floating point accidents.

Bernstein approximation returns an exact polynomial (node values are embedded
into rational coefficients) together with an error estimate measured against
a numerically stable evaluator; high-degree expanded coefficients are huge
and alternating, so the expanded form is never used for numeric evaluation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from . import algebra, spectrum
from .algebra import MODE_STAR, StarPoly, StarPresentation
from .errors import AlgebraError, UnsupportedError
from .scalars import ComplexRational
from .spectrum import CompactBox, coefficient_bound, gelfand_eval


# ---------------------------------------------------------------------------
# seminorms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeminormEstimate:
    """Bracketing of a sup-seminorm: grid lower bound, certified upper bound.

    For exact subjects the fields lower_sq (the exact squared grid maximum)
    and upper_exact (the exact certified bound) back the floats.
    """

    lower: float
    upper: float
    resolution: int
    exact: bool
    lower_sq: Fraction | None = None
    upper_exact: Fraction | None = None


@dataclass(frozen=True)
class TargetFunction:
    """A numeric target for approximation, defined on a box.

    ``fn`` takes a point as a tuple of floats.  ``exact_fn``, when present,
    evaluates the same function on rational points in exact arithmetic, which
    lets Bernstein coefficients stay exactly representable.  ``slack`` is the
    declared modulus bound used to certify an upper seminorm estimate from a
    grid maximum; zero means the grid maximum is reported as-is.
    """

    name: str
    dim: int
    fn: Callable[[tuple[float, ...]], Union[float, complex]]
    exact_fn: Callable[[tuple[Fraction, ...]], Union[Fraction, ComplexRational]] | None = None
    slack: float = 0.0


def catalog_target(name: str, dim: int = 1) -> TargetFunction:
    """Built-in targets: "square", "abs-shift", "exp" (all univariate)."""
    if dim != 1:
        raise UnsupportedError("catalog targets are univariate; build a "
                               "TargetFunction directly for higher dimension")
    if name == "square":
        return TargetFunction("square", 1, lambda t: t[0] * t[0],
                              exact_fn=lambda t: t[0] * t[0])
    if name == "abs-shift":
        return TargetFunction("abs-shift", 1, lambda t: abs(t[0] - 0.5),
                              exact_fn=lambda t: abs(t[0] - Fraction(1, 2)))
    if name == "exp":
        return TargetFunction("exp", 1, lambda t: math.exp(t[0]))
    raise UnsupportedError(f"unknown catalog target {name!r}")


def tabulated_target(values: Sequence[float], name: str = "tabulated",
                     slack: float = 0.0) -> TargetFunction:
    """Piecewise-linear interpolant of uniformly spaced samples on [0, 1]."""
    if len(values) < 2:
        raise AlgebraError("tabulated target needs at least two samples")
    ys = [float(v) for v in values]

    def fn(t: tuple[float, ...]) -> float:
        x = min(max(t[0], 0.0), 1.0) * (len(ys) - 1)
        k = min(int(x), len(ys) - 2)
        frac = x - k
        return ys[k] * (1.0 - frac) + ys[k + 1] * frac

    return TargetFunction(name, 1, fn, slack=slack)


def seminorm_on_box(subject: Union[StarPoly, TargetFunction], box: CompactBox,
                    resolution: int = 33) -> SeminormEstimate:
    """Bracket sup over the box of |subject|.

    Polynomial subjects are evaluated exactly on the rational grid; the upper
    bound comes from coefficient bounding and the exact invariant
    lower <= upper is re-verified before rounding to floats.  Function
    subjects get a float grid maximum and an upper bound scaled by the
    declared slack.
    """
    if resolution < 2:
        raise AlgebraError("seminorm needs a grid resolution of at least 2")
    if isinstance(subject, StarPoly):
        max_sq = Fraction(0)
        for p in box.grid_points(resolution):
            value = gelfand_eval(subject, p)
            assert isinstance(value, ComplexRational)
            max_sq = max(max_sq, value.abs2())
        upper_exact = coefficient_bound(subject, box)
        if max_sq > upper_exact * upper_exact:
            raise AssertionError("grid maximum exceeded its certified bound")
        lower = math.sqrt(max_sq)
        upper = float(upper_exact)
        if lower > upper:  # float rounding at an exactly attained bound
            lower = upper
        return SeminormEstimate(lower, upper, resolution, True,
                                lower_sq=max_sq, upper_exact=upper_exact)
    if subject.dim != box.dimension():
        raise AlgebraError("target dimension does not match the box")
    axes = [np.linspace(float(lo), float(hi), resolution)
            for lo, hi in box.intervals]
    best = 0.0
    for point in itertools.product(*axes):
        best = max(best, abs(subject.fn(tuple(point))))
    return SeminormEstimate(best, best * (1.0 + subject.slack), resolution, False)


# ---------------------------------------------------------------------------
# Bernstein approximation
# ---------------------------------------------------------------------------

def _coordinate_presentation(dim: int) -> StarPresentation:
    names = ["t"] if dim == 1 else [f"t{i + 1}" for i in range(dim)]
    return StarPresentation.assemble(
        "cube", MODE_STAR, names, tuple(range(dim)), [])


def _basis_matrix(n: int, points: np.ndarray) -> np.ndarray:
    """Rows: Bernstein basis values (b_{n,0}(t), ..., b_{n,n}(t)).

    Direct products of nonnegative factors; no cancellation, so this stays
    accurate where the expanded monomial form would be hopeless.
    """
    ks = np.arange(n + 1)
    combs = np.array([float(math.comb(n, k)) for k in ks])
    t = points.reshape(-1, 1)
    with np.errstate(invalid="ignore"):
        left = np.where(ks == 0, 1.0, t ** ks)
        right = np.where(ks == n, 1.0, (1.0 - t) ** (n - ks))
    return combs * left * right


class BernsteinResult:
    """Exact Bernstein polynomial plus a stable evaluator and error report.

    The polynomial lives on normalized coordinates over [0, 1]^d; when the
    approximation box is not the unit cube the target is sampled through the
    affine map onto it.
    """

    def __init__(self, poly: StarPoly, degree: int,
                 values: dict[tuple[int, ...], complex],
                 error: SeminormEstimate) -> None:
        self.poly = poly
        self.degree = degree
        self.pres = poly.pres
        self._values = values
        self.error = error

    def evaluate(self, point: Sequence[float]) -> complex:
        """Stable evaluation at a point of the unit cube."""
        n = self.degree
        dim = len(self.pres.generators)
        if len(point) != dim:
            raise AlgebraError(f"expected {dim} coordinates")
        bases = [_basis_matrix(n, np.array([float(t)]))[0] for t in point]
        total = 0j
        for key, val in self._values.items():
            w = 1.0
            for axis, k in enumerate(key):
                w *= bases[axis][k]
            total += val * w
        return total


def bernstein_approx(f: TargetFunction, n: int,
                     intervals: Sequence[tuple[Fraction, Fraction]] | None = None,
                     error_resolution: int | None = None) -> BernsteinResult:
    """Degree-n tensor Bernstein approximation of f on a box.

    Returns the exact expanded polynomial in normalized [0, 1]^d coordinates
    (one self-adjoint generator per axis), interpolating f at the corners,
    together with a grid error estimate of |f - result| computed with the
    stable evaluator.
    """
    if n < 1:
        raise AlgebraError("Bernstein degree must be at least 1")
    dim = f.dim
    if not 1 <= dim <= 3:
        raise UnsupportedError("Bernstein approximation supports 1 to 3 axes")
    if intervals is None:
        box_iv = [(Fraction(0), Fraction(1))] * dim
    else:
        box_iv = [(Fraction(lo), Fraction(hi)) for lo, hi in intervals]
        if len(box_iv) != dim:
            raise AlgebraError("interval count does not match target dimension")

    # node values, exactly when the target supports it
    exact_vals: dict[tuple[int, ...], ComplexRational] = {}
    for key in itertools.product(range(n + 1), repeat=dim):
        node01 = tuple(Fraction(k, n) for k in key)
        mapped = tuple(lo + (hi - lo) * t for (lo, hi), t in zip(box_iv, node01))
        if f.exact_fn is not None:
            raw = f.exact_fn(mapped)
            value = raw if isinstance(raw, ComplexRational) else ComplexRational(raw)
        else:
            raw_num = f.fn(tuple(float(x) for x in mapped))
            c = complex(raw_num)
            value = ComplexRational(Fraction(c.real), Fraction(c.imag))
        exact_vals[key] = value

    # expand into the monomial basis, one axis at a time, exactly
    expand = [[0] * (n + 1) for _ in range(n + 1)]
    for k in range(n + 1):
        lead = math.comb(n, k)
        for m in range(k, n + 1):
            expand[k][m] = lead * math.comb(n - k, m - k) * (-1 if (m - k) % 2 else 1)
    tensor: dict[tuple[int, ...], ComplexRational] = dict(exact_vals)
    for axis in range(dim):
        contracted: dict[tuple[int, ...], ComplexRational] = {}
        for key, val in tensor.items():
            if val.is_zero():
                continue
            k = key[axis]
            for m in range(k, n + 1):
                e = expand[k][m]
                if e:
                    new_key = key[:axis] + (m,) + key[axis + 1:]
                    acc = contracted.get(new_key)
                    contracted[new_key] = val * e if acc is None else acc + val * e
        tensor = contracted
    pres = _coordinate_presentation(dim)
    poly = pres.poly({k: v for k, v in tensor.items() if not v.is_zero()})

    # error of |f - B| on a grid, via the stable evaluator
    float_vals = {k: complex(v) for k, v in exact_vals.items()}
    if error_resolution is None:
        error_resolution = {1: 10001, 2: 101, 3: 23}[dim]
    axes01 = [np.linspace(0.0, 1.0, error_resolution) for _ in range(dim)]
    basis_per_axis = [_basis_matrix(n, ax) for ax in axes01]
    tensor_f = np.zeros((n + 1,) * dim, dtype=complex)
    for key, val in float_vals.items():
        tensor_f[key] = val
    spec_map = {1: "pi,i->p", 2: "pi,qj,ij->pq", 3: "pi,qj,rk,ijk->pqr"}
    approx_vals = np.einsum(spec_map[dim], *basis_per_axis, tensor_f)
    best = 0.0
    for idx in itertools.product(*(range(error_resolution) for _ in range(dim))):
        mapped = tuple(float(lo) + (float(hi) - float(lo)) * axes01[axis][i]
                       for axis, ((lo, hi), i) in enumerate(zip(box_iv, idx)))
        err = abs(complex(f.fn(mapped)) - approx_vals[idx])
        best = max(best, err)
    error = SeminormEstimate(best, best * (1.0 + f.slack), error_resolution, False)
    return BernsteinResult(poly, n, float_vals, error)


def density_witness(f: TargetFunction, epsilon: float,
                    max_degree: int = 256,
                    error_resolution: int | None = None) -> BernsteinResult | None:
    """Search doubling degrees for a Bernstein approximant within epsilon."""
    n = 4
    while n <= max_degree:
        result = bernstein_approx(f, n, error_resolution=error_resolution)
        if result.error.lower < epsilon:
            return result
        n *= 2
    return None


# ---------------------------------------------------------------------------
# Wirtinger derivative
# ---------------------------------------------------------------------------

def _resolve_pair(pres: StarPresentation, pair: Union[int, str, None]) -> tuple[int, int]:
    if not pres.is_star:
        raise AlgebraError("Wirtinger derivatives need a *-presentation")
    if pair is None:
        reps = [i for i in range(len(pres.generators))
                if pres.adjoint[i] not in (None, i) and pres.adjoint[i] > i]
        if len(reps) != 1:
            raise AlgebraError("presentation does not have a unique free pair; "
                               "name the generator explicitly")
        idx = reps[0]
    else:
        idx = pair if isinstance(pair, int) else pres.generator_index(pair)
    partner = pres.adjoint[idx]
    if partner is None or partner == idx:
        raise AlgebraError("Wirtinger derivative needs a free generator with a "
                           "distinct adjoint partner")
    if partner < idx:
        idx, partner = partner, idx
    for rel in pres.relations:
        for mono, _ in rel:
            if mono[idx] or mono[partner]:
                raise UnsupportedError(
                    "Wirtinger derivative is only defined when no relation "
                    "touches the chosen pair")
    return idx, partner


def wirtinger_dzbar(a: StarPoly, pair: Union[int, str, None] = None) -> StarPoly:
    """Formal derivative with respect to the adjoint partner of a free pair.

    On monomials z^p adj(z)^q the derivative is q z^p adj(z)^(q-1); the kernel
    consists exactly of the elements with no adjoint dependence, i.e. the
    image of the extension from the one-generator algebra.
    """
    _, partner = _resolve_pair(a.pres, pair)
    table: dict = {}
    for mono, coeff in a.terms:
        q = mono[partner]
        if q == 0:
            continue
        lowered = tuple(e - 1 if i == partner else e for i, e in enumerate(mono))
        table[lowered] = table.get(lowered, ComplexRational(0)) + coeff * q
    return a.pres.poly(table)


def is_holomorphic_image(a: StarPoly, pair: Union[int, str, None] = None) -> bool:
    """True when the adjoint-direction derivative vanishes identically."""
    return wirtinger_dzbar(a, pair).is_zero()
