"""States and the GNS construction on presented *-algebras.

A state is a unital positive expectation functional.  Three kinds are
supported: atomic (finite convex combinations of characters, exact when the
weights and support are rational), quadrature (a box with a density,
integrated by tensor Gauss-Legendre rules), and analytic (a moment rule such
as the standard Gaussian, which is densely defined rather than supported on
a compact box, but still assigns every polynomial an exact expectation).

The GNS model is built degree by degree: the Gram matrix of the pairing
E(adj(a) * b) on irreducible monomials up to the chosen degree, its null
space (the zero-length directions that the quotient removes), and an
orthonormal basis of the complement.  On exact states everything up to the
final normalization square roots is rational arithmetic, so null vectors
like x^2 - 1 come out exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from . import algebra, spectrum
from .algebra import Monomial, StarPoly, StarPresentation, raw_involute, raw_mul
from .errors import AlgebraError, GnsError, StateError
from .scalars import ONE, ComplexRational
from .spectrum import Character, CompactBox, axis_layout, gelfand_eval

Value = Union[ComplexRational, complex]

PSD_TOLERANCE = 1e-10
NULL_THRESHOLD = 1e-9


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class State:
    kind: str  # atomic | quadrature | analytic
    pres: StarPresentation
    exact: bool
    densely_defined: bool
    support_box: CompactBox | None
    atoms: tuple[tuple[Character, Fraction], ...] | None = None
    nodes: tuple[Character, ...] | None = None
    weights: tuple[float, ...] | None = None
    density_name: str | None = None
    order: int | None = None
    generator: str | None = None
    moment_fn: Callable[[Monomial], ComplexRational] | None = None

    def expect(self, a: StarPoly) -> Value:
        return expect(self, a)


def _axis_coordinates(char: Character) -> list[Fraction]:
    coords: list[Fraction] = []
    for gi, role in axis_layout(char.pres):
        v = char.values[gi]
        if isinstance(v, ComplexRational):
            re, im = v.re, v.im
        else:
            re, im = Fraction(v.real), Fraction(v.imag)
        if role == "val":
            coords.append(re)
        elif role == "re":
            coords.append(re)
        else:
            coords.append(im)
    return coords


def _bounding_box(pres: StarPresentation,
                  chars: Sequence[Character]) -> CompactBox | None:
    if pres.relations:
        return None  # boxes are only available over relation-free presentations
    coords = [_axis_coordinates(c) for c in chars]
    intervals = [(min(col), max(col)) for col in zip(*coords)]
    return CompactBox.from_intervals(pres, intervals)


def atomic_state(pres: StarPresentation,
                 atoms: Sequence[tuple[Union[Character, Mapping[str, Value]],
                                       Union[Fraction, int]]],
                 rescale: bool = False) -> State:
    """A convex combination of point evaluations with rational weights."""
    if not pres.is_star:
        raise StateError("states are defined on *-presentations")
    if not atoms:
        raise StateError("atomic state needs at least one support point")
    resolved: list[tuple[Character, Fraction]] = []
    for point, weight in atoms:
        w = Fraction(weight)
        if w <= 0:
            raise StateError("atomic weights must be positive")
        char = point if isinstance(point, Character) \
            else spectrum.validate_character(pres, point)
        if char.pres != pres:
            raise StateError("support point lives over the wrong presentation")
        resolved.append((char, w))
    total = sum(w for _, w in resolved)
    if total != 1:
        if not rescale:
            raise StateError(f"atomic weights sum to {total}, not 1 "
                             f"(pass rescale=True to normalize)")
        resolved = [(c, w / total) for c, w in resolved]
    exact = all(c.exact for c, _ in resolved)
    box = _bounding_box(pres, [c for c, _ in resolved])
    return State("atomic", pres, exact, False, box, atoms=tuple(resolved))


def _uniform_density(box: CompactBox) -> Callable[[tuple[float, ...]], float]:
    inv_vol = 1.0 / float(box.volume())
    return lambda _point: inv_vol


def quadrature_state(pres: StarPresentation, box: CompactBox,
                     density: Union[str, Callable[[tuple[float, ...]], float]],
                     order: int, rescale: bool = False) -> State:
    """Integration against a density on a box, by tensor Gauss-Legendre.

    The density must be normalized: node weights times density values must
    sum to 1 within 1e-12 (the rule integrates polynomials of degree up to
    2*order - 1 exactly, so for polynomial densities this is a real check,
    not a float formality).
    """
    if not pres.is_star:
        raise StateError("states are defined on *-presentations")
    if box.pres != pres:
        raise StateError("quadrature box lives over the wrong presentation")
    if order < 1:
        raise StateError("quadrature order must be at least 1")
    name: str | None = None
    if isinstance(density, str):
        name = density
        if density != "uniform":
            raise StateError(f"unknown density {density!r}; the catalog has "
                             f"'uniform', or pass a callable")
        density_fn = _uniform_density(box)
    else:
        density_fn = density
    base_nodes, base_weights = np.polynomial.legendre.leggauss(order)
    per_axis: list[list[tuple[float, float]]] = []
    for lo, hi in box.intervals:
        mid = (float(lo) + float(hi)) / 2.0
        half = (float(hi) - float(lo)) / 2.0
        per_axis.append([(mid + half * t, half * w)
                         for t, w in zip(base_nodes, base_weights)])
    nodes: list[Character] = []
    weights: list[float] = []
    stack: list[tuple[tuple[float, ...], float]] = [((), 1.0)]
    for axis in per_axis:
        stack = [(pt + (x,), w * wx) for pt, w in stack for x, wx in axis]
    for point, w in stack:
        w *= float(density_fn(point))
        nodes.append(spectrum.character_from_axes(pres, point, exact=False))
        weights.append(w)
    total = sum(weights)
    if abs(total - 1.0) > 1e-12:
        if not rescale:
            raise StateError(f"quadrature weights sum to {total!r}, not 1; "
                             f"normalize the density or pass rescale=True")
        weights = [w / total for w in weights]
    return State("quadrature", pres, False, False, box,
                 nodes=tuple(nodes), weights=tuple(weights),
                 density_name=name, order=order)


def gaussian_state(pres: StarPresentation, generator: str | None = None) -> State:
    """Standard Gaussian moments on one self-adjoint generator.

    Densely defined: there is no compact support box, but every polynomial
    still has an exact expectation through the even-moment recurrence
    m_k = (k - 1) m_{k-2}, m_0 = 1, m_1 = 0.
    """
    if not pres.is_star:
        raise StateError("states are defined on *-presentations")
    if generator is None:
        selfadj = [i for i in range(len(pres.generators))
                   if pres.adjoint[i] == i]
        if len(selfadj) != 1:
            raise StateError("name the generator: the presentation does not "
                             "have a unique self-adjoint generator")
        idx = selfadj[0]
    else:
        idx = pres.generator_index(generator)
        if pres.adjoint[idx] != idx:
            raise StateError(f"generator {generator!r} is not self-adjoint")
    moments = [Fraction(1), Fraction(0)]

    def moment(mono: Monomial) -> ComplexRational:
        for i, e in enumerate(mono):
            if e and i != idx:
                raise StateError(
                    f"moment rule has no value for generator "
                    f"{pres.generators[i]!r}; the Gaussian rule covers only "
                    f"{pres.generators[idx]!r}")
        k = mono[idx]
        while len(moments) <= k:
            j = len(moments)
            moments.append((j - 1) * moments[j - 2])
        return ComplexRational(moments[k])

    return State("analytic", pres, True, True, None,
                 density_name="gaussian", generator=pres.generators[idx],
                 moment_fn=moment)


def expect(state: State, a: StarPoly) -> Value:
    """The expectation E(a); exact for atomic-rational and analytic states."""
    if a.pres != state.pres:
        raise StateError("element lives over the wrong presentation")
    if state.kind == "atomic":
        assert state.atoms is not None
        if state.exact:
            total: Value = ComplexRational(0)
            for char, w in state.atoms:
                total = total + gelfand_eval(a, char) * w
            return total
        acc = 0j
        for char, w in state.atoms:
            acc += complex(gelfand_eval(a, char)) * float(w)
        return acc
    if state.kind == "quadrature":
        assert state.nodes is not None and state.weights is not None
        acc = 0j
        for char, w in zip(state.nodes, state.weights):
            acc += w * complex(gelfand_eval(a, char))
        return acc
    assert state.moment_fn is not None
    total = ComplexRational(0)
    for mono, coeff in a.terms:
        total = total + coeff * state.moment_fn(mono)
    return total


# ---------------------------------------------------------------------------
# GNS model
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GnsModel:
    """Gram data of a state on monomials up to a degree, plus (after
    :func:`gns_basis`) the null space and an orthonormal residual basis.

    Coefficient vectors are indexed by ``basis`` (irreducible monomials in
    ascending graded-lex order).  Exact models keep the Gram matrix and null
    vectors in rational arithmetic; orthonormal coefficients are floats in
    either case because normalization divides by square roots.
    """

    state: State
    degree: int
    basis: tuple[Monomial, ...]
    gram: object  # tuple of tuples of ComplexRational, or complex ndarray
    exact: bool
    null_space: tuple[tuple, ...] | None = None
    orthonormal: tuple[tuple[complex, ...], ...] | None = None

    @property
    def pres(self) -> StarPresentation:
        return self.state.pres

    def basis_poly(self, index: int) -> StarPoly:
        return self.pres.poly({self.basis[index]: ONE})

    def gram_entry(self, i: int, j: int) -> Value:
        if self.exact:
            return self.gram[i][j]
        return complex(self.gram[i, j])

    def rank(self) -> int:
        if self.orthonormal is None:
            raise GnsError("rank is available after gns_basis")
        return len(self.orthonormal)

    def null_polys(self) -> list[StarPoly]:
        if self.null_space is None:
            raise GnsError("null space is available after gns_basis")
        if not self.exact:
            raise GnsError("null vectors of a floating model are coefficient "
                           "vectors, not exact polynomials")
        out = []
        for vec in self.null_space:
            table = {m: c for m, c in zip(self.basis, vec) if not c.is_zero()}
            out.append(self.pres.poly(table))
        return out


def gram_matrix(state: State, degree: int) -> GnsModel:
    """Gram matrix of E(adj(a) b) on irreducible monomials up to ``degree``."""
    if degree < 0:
        raise GnsError("degree must be nonnegative")
    pres = state.pres
    basis = tuple(pres.monomials_up_to(degree))
    adjoint = list(pres.adjoint)
    n = len(basis)
    entries: list[list[Value]] = []
    for mi in basis:
        inv = raw_involute(adjoint, {mi: ONE})
        row: list[Value] = []
        for mj in basis:
            product = pres.poly(raw_mul(inv, {mj: ONE}))
            row.append(expect(state, product))
        entries.append(row)
    if state.exact:
        gram = tuple(tuple(row) for row in entries)
        for i in range(n):
            for j in range(n):
                if gram[i][j] != gram[j][i].conjugate():
                    raise GnsError("Gram matrix is not Hermitian")
        return GnsModel(state, degree, basis, gram, True)
    arr = np.array([[complex(v) for v in row] for row in entries], dtype=complex)
    scale = max(1.0, float(np.max(np.abs(arr)))) if n else 1.0
    if n and float(np.max(np.abs(arr - arr.conj().T))) > PSD_TOLERANCE * scale:
        raise GnsError("Gram matrix is not Hermitian within tolerance")
    arr = (arr + arr.conj().T) / 2.0
    if n:
        eigs = np.linalg.eigvalsh(arr)
        if eigs[0] < -PSD_TOLERANCE * max(1.0, float(eigs[-1])):
            raise GnsError(f"Gram matrix is not positive semidefinite: "
                           f"eigenvalue {eigs[0]!r}")
    return GnsModel(state, degree, basis, arr, False)


def _gns_exact(model: GnsModel) -> GnsModel:
    basis = model.basis
    n = len(basis)
    gram = model.gram

    def dot(u: list[ComplexRational], gv: list[ComplexRational]) -> ComplexRational:
        return sum((u[i].conjugate() * gv[i] for i in range(n)
                    if not u[i].is_zero()), ComplexRational(0))

    ortho: list[tuple[list[ComplexRational], list[ComplexRational], Fraction]] = []
    null: list[tuple[ComplexRational, ...]] = []
    for j in range(n):
        v = [ComplexRational(1) if i == j else ComplexRational(0) for i in range(n)]
        gv = [gram[i][j] for i in range(n)]
        for u, gu, n2 in ortho:
            c = dot(u, gv) / n2
            if not c.is_zero():
                v = [vi - c * ui for vi, ui in zip(v, u)]
                gv = [gvi - c * gui for gvi, gui in zip(gv, gu)]
        norm2 = dot(v, gv)
        if not norm2.is_real():
            raise GnsError("Gram pairing produced a non-real squared length")
        if norm2.re < 0:
            raise GnsError("Gram matrix is not positive semidefinite: "
                           f"squared length {norm2.re} at basis slot {j}")
        if norm2.re == 0:
            null.append(tuple(v))
        else:
            ortho.append((v, gv, norm2.re))
    orthonormal = tuple(
        tuple(complex(c) / float(n2) ** 0.5 for c in v) for v, _, n2 in ortho)
    return replace(model, null_space=tuple(null), orthonormal=orthonormal)


def _gns_float(model: GnsModel) -> GnsModel:
    gram = model.gram
    n = len(model.basis)
    scale = max(1.0, float(np.max(np.linalg.eigvalsh(gram)))) if n else 1.0
    ortho: list[tuple[np.ndarray, np.ndarray, float]] = []
    null: list[tuple[complex, ...]] = []
    for j in range(n):
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        gv = gram[:, j].copy()
        for u, gu, n2 in ortho:
            c = complex(np.vdot(u, gv)) / n2
            if c:
                v -= c * u
                gv -= c * gu
        norm2 = complex(np.vdot(v, gv)).real
        if norm2 < -PSD_TOLERANCE * scale:
            raise GnsError("Gram matrix is not positive semidefinite: "
                           f"squared length {norm2!r} at basis slot {j}")
        if norm2 <= NULL_THRESHOLD * scale:
            lead = v[j]
            null.append(tuple(v / lead))
        else:
            ortho.append((v, gv, norm2))
    orthonormal = tuple(tuple(u / norm2 ** 0.5) for u, _, norm2 in ortho)
    return replace(model, null_space=tuple(null), orthonormal=orthonormal)


def gns_basis(model: GnsModel) -> GnsModel:
    """Split the monomial basis into null directions and an orthonormal rest.

    Gram-Schmidt runs in ascending graded-lex order, so each vector is the
    corresponding monomial minus its projection onto everything earlier; a
    vector of squared length zero is a null direction and keeps unit leading
    coefficient (e.g. the two-point state at +-1 yields x^2 - 1 on the nose).
    Exact models detect zero exactly; floating models use a relative
    threshold against the largest eigenvalue.
    """
    if model.null_space is not None:
        return model
    return _gns_exact(model) if model.exact else _gns_float(model)


def multiplication_operator(model: GnsModel, generator: Union[int, str]) -> np.ndarray:
    """Matrix of multiplication by a generator on the orthonormal basis.

    Entry (i, j) is E(adj(b_i) g b_j).  Products of top-degree basis vectors
    with the generator leave the truncation degree, so the last row and
    column see moments beyond 2 * degree: the matrix is the compression of
    the true operator onto the model space, and its final row/column carries
    that truncation leakage rather than hiding it.
    """
    completed = gns_basis(model)
    pres = completed.pres
    gen_poly = pres.gen(generator)
    basis = completed.basis
    n = len(basis)
    adjoint = list(pres.adjoint)
    pairing = np.zeros((n, n), dtype=complex)
    g_table = gen_poly.as_table()
    for k, mk in enumerate(basis):
        g_mk = raw_mul(g_table, {mk: ONE})
        for l, ml in enumerate(basis):
            inv = raw_involute(adjoint, {ml: ONE})
            product = pres.poly(raw_mul(inv, g_mk))
            pairing[l, k] = complex(expect(completed.state, product))
    b = np.array(completed.orthonormal, dtype=complex).T  # columns are basis vectors
    return b.conj().T @ pairing @ b
