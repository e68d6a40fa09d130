"""Characters, evaluation, and spectrum-side checks.

A character is a unital homomorphism to the complex numbers, stored as one
value per generator (adjoint partners get their own redundant slot, which
keeps evaluation uniform).  Values are either all exact complex rationals or
all machine complex numbers; the ``exact`` flag records which.

Compact pieces of the spectrum are concrete here: axis-aligned boxes in the
real coordinates of characters (one axis per self-adjoint generator, a
real/imaginary pair per free generator), and finite sample sets.  Boxes are
only available over relation-free presentations, where every box point
really is a character.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from . import algebra
from .algebra import Monomial, Morphism, StarPoly, StarPresentation
from .errors import AlgebraError, CharacterError, UnsupportedError
from .scalars import ComplexRational

Value = Union[ComplexRational, complex]

FLOAT_TOLERANCE = 1e-12
UNBOUNDED_THRESHOLD = 1e9


def _conj(v: Value) -> Value:
    if isinstance(v, ComplexRational):
        return v.conjugate()
    return v.conjugate()


def _abs(v: Value) -> float:
    if isinstance(v, ComplexRational):
        return float(v.abs2()) ** 0.5
    return abs(v)


def _is_zero(v: Value, tolerance: float) -> bool:
    if isinstance(v, ComplexRational):
        return v.is_zero()
    return abs(v) <= tolerance


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    """A validated point of the spectrum."""

    pres: StarPresentation
    values: tuple[Value, ...]
    exact: bool

    def value(self, which: Union[int, str]) -> Value:
        idx = which if isinstance(which, int) else self.pres.generator_index(which)
        return self.values[idx]

    def as_assignment(self) -> dict[str, Value]:
        return dict(zip(self.pres.generators, self.values))


def _eval_terms(terms, values: Sequence[Value], exact: bool) -> Value:
    if exact:
        total: Value = ComplexRational(0)
        for mono, coeff in terms:
            acc = coeff
            for i, e in enumerate(mono):
                if e:
                    acc = acc * (values[i] ** e)
            total = total + acc
        return total
    total_f = 0j
    for mono, coeff in terms:
        acc_f = complex(coeff)
        for i, e in enumerate(mono):
            if e:
                acc_f *= values[i] ** e
        total_f += acc_f
    return total_f


def validate_character(pres: StarPresentation, assignment: Mapping[str, Value],
                       tolerance: float = FLOAT_TOLERANCE) -> Character:
    """Check coverage, adjoint compatibility, and every relation.

    A missing value for one half of a free pair is filled with the
    conjugate of the given half before checking.  Exact assignments are
    checked exactly; floating assignments within ``tolerance``.  Raises
    :class:`CharacterError` with the violated constraint kind: coverage,
    reality, conjugacy, or relation.
    """
    unknown = [k for k in assignment if k not in pres.generators]
    if unknown:
        raise CharacterError(f"unknown generator {unknown[0]!r} in assignment",
                             "coverage")
    assignment = dict(assignment)
    if pres.is_star:
        # the involution forces the partner value; giving it is optional
        for i, g in enumerate(pres.generators):
            j = pres.partner(i)
            pg = pres.generators[j]
            if j != i and g in assignment and pg not in assignment:
                assignment[pg] = _conj(assignment[g])
    missing = [g for g in pres.generators if g not in assignment]
    if missing:
        raise CharacterError(f"no value for generator {missing[0]!r}", "coverage")

    exact = all(isinstance(v, (int, Fraction, ComplexRational))
                for v in assignment.values())
    values: list[Value] = []
    for g in pres.generators:
        v = assignment[g]
        if exact:
            values.append(ComplexRational.coerce(v) if not isinstance(v, ComplexRational) else v)
        else:
            values.append(complex(v))

    if pres.is_star:
        for i, g in enumerate(pres.generators):
            j = pres.partner(i)
            if j == i:
                bad = (not values[i].is_real()) if exact \
                    else abs(values[i].imag) > tolerance
                if bad:
                    raise CharacterError(
                        f"self-adjoint generator {g!r} must take a real value",
                        "reality")
            elif j > i:
                expected = _conj(values[i])
                bad = (values[j] != expected) if exact \
                    else abs(values[j] - expected) > tolerance
                if bad:
                    raise CharacterError(
                        f"value of {pres.generators[j]!r} must be the "
                        f"conjugate of the value of {g!r}", "conjugacy")

    for k, rel in enumerate(pres.relations):
        out = _eval_terms(rel, values, exact)
        if not _is_zero(out, tolerance):
            raise CharacterError(f"relation {k} is violated by the assignment",
                                 "relation")
    return Character(pres, tuple(values), exact)


def gelfand_eval(a: StarPoly, p: Character) -> Value:
    """Evaluate the transform of ``a`` at the character ``p``.

    Exact when the character is exact (coefficients always are).
    """
    if a.pres != p.pres:
        raise AlgebraError("element and character live over different presentations")
    return _eval_terms(a.terms, p.values, p.exact)


def separating_generator(p: Character, q: Character) -> str | None:
    """A generator whose transform separates two distinct characters."""
    if p.pres != q.pres:
        raise AlgebraError("characters live over different presentations")
    for g, vp, vq in zip(p.pres.generators, p.values, q.values):
        if isinstance(vp, ComplexRational) and isinstance(vq, ComplexRational):
            if vp != vq:
                return g
        elif complex(vp) != complex(vq):
            return g
    return None


# ---------------------------------------------------------------------------
# functorial maps on characters
# ---------------------------------------------------------------------------

def pushforward(f: Morphism, p: Character) -> Character:
    """Precompose a character with a morphism: the contravariant action on
    spectra.  For *-presentations the morphism must be *-compatible, or the
    result could fail the conjugacy constraints."""
    if p.pres != f.target:
        raise AlgebraError("character does not live on the morphism target")
    if f.source.is_star and f.target.is_star:
        ok, witness = algebra.is_star_hom(f)
        if not ok:
            raise AlgebraError(
                f"pushforward needs a *-morphism; involution fails at "
                f"generator {witness!r}")
    assignment = {g: gelfand_eval(img, p)
                  for g, img in zip(f.source.generators, f.images)}
    return validate_character(f.source, assignment)


def naturality_inclusion(p: Character) -> Character:
    """View a character of a *-presentation as a character of its underlying
    algebra (the spectra inclusion; same values, fewer constraints)."""
    if not p.pres.is_star:
        raise AlgebraError("naturality inclusion starts from a *-presentation")
    under = algebra.underlying(p.pres)
    assignment = dict(zip(under.generators, p.values))
    return validate_character(under, assignment)


def extend_character_free(pres: StarPresentation, p: Character) -> Character:
    """Extend a character of an algebra-mode presentation to its free
    *-algebra by sending each new partner to the conjugate value."""
    if pres.is_star:
        raise AlgebraError("extension starts from an algebra-mode presentation")
    if p.pres != pres:
        raise AlgebraError("character does not live on the given presentation")
    fa = algebra.free_star(pres)
    assignment: dict[str, Value] = {}
    for i, g in enumerate(pres.generators):
        assignment[fa.generators[2 * i]] = p.values[i]
        assignment[fa.generators[2 * i + 1]] = _conj(p.values[i])
    return validate_character(fa, assignment)


def restrict_character_free(pres: StarPresentation, q: Character) -> Character:
    """Inverse of :func:`extend_character_free`: forget the partner values."""
    if pres.is_star:
        raise AlgebraError("restriction lands on an algebra-mode presentation")
    fa = algebra.free_star(pres)
    if q.pres != fa:
        raise AlgebraError("character does not live on the free *-algebra")
    assignment = {g: q.values[2 * i] for i, g in enumerate(pres.generators)}
    return validate_character(pres, assignment)


# ---------------------------------------------------------------------------
# compact pieces of the spectrum
# ---------------------------------------------------------------------------

def axis_layout(pres: StarPresentation) -> list[tuple[int, str]]:
    """Real coordinates of a character: (generator index, role) per axis.

    Role "val" is the value of a self-adjoint generator; "re"/"im" split the
    value of a free or unpaired generator.  Adjoint partners contribute no
    axes; their values are determined by conjugation.
    """
    axes: list[tuple[int, str]] = []
    for i in range(len(pres.generators)):
        a = pres.adjoint[i]
        if a is None:
            axes.extend([(i, "re"), (i, "im")])
        elif a == i:
            axes.append((i, "val"))
        elif a > i:
            axes.extend([(i, "re"), (i, "im")])
    return axes


def character_from_axes(pres: StarPresentation,
                        point: Sequence[Fraction | float],
                        exact: bool = True) -> Character:
    axes = axis_layout(pres)
    if len(point) != len(axes):
        raise AlgebraError(f"expected {len(axes)} coordinates, got {len(point)}")
    parts: dict[int, dict[str, Fraction | float]] = {}
    for (gi, role), v in zip(axes, point):
        parts.setdefault(gi, {})[role] = v
    values: list[Value] = [None] * len(pres.generators)  # type: ignore[list-item]
    for gi, comp in parts.items():
        if "val" in comp:
            v: Value = ComplexRational(comp["val"]) if exact \
                else complex(float(comp["val"]), 0.0)
        else:
            v = ComplexRational(comp["re"], comp["im"]) if exact \
                else complex(float(comp["re"]), float(comp["im"]))
        values[gi] = v
        a = pres.adjoint[gi]
        if a is not None and a != gi:
            values[a] = _conj(v)
    return Character(pres, tuple(values), exact)


@dataclass(frozen=True)
class CompactBox:
    """An axis-aligned box of characters over a relation-free presentation."""

    pres: StarPresentation
    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        if self.pres.relations:
            raise UnsupportedError(
                "boxes need a relation-free presentation: with relations, "
                "box points are not all characters")
        if len(self.intervals) != len(axis_layout(self.pres)):
            raise AlgebraError("interval count does not match the axis layout")
        for lo, hi in self.intervals:
            if lo > hi:
                raise AlgebraError("interval bounds out of order")

    @classmethod
    def from_intervals(cls, pres: StarPresentation,
                       intervals: Sequence[tuple[Fraction, Fraction]]) -> "CompactBox":
        return cls(pres, tuple((Fraction(lo), Fraction(hi))
                               for lo, hi in intervals))

    @classmethod
    def for_generators(cls, pres: StarPresentation,
                       by_gen: Mapping[str, Sequence[tuple[Fraction, Fraction]]],
                       ) -> "CompactBox":
        axes = axis_layout(pres)
        needed: dict[int, int] = {}
        for gi, _ in axes:
            needed[gi] = needed.get(gi, 0) + 1
        intervals: list[tuple[Fraction, Fraction]] = []
        used: set[str] = set()
        for gi, role in axes:
            name = pres.generators[gi]
            if name not in by_gen:
                raise AlgebraError(f"no box bounds for generator {name!r}")
            given = by_gen[name]
            if len(given) != needed[gi]:
                raise AlgebraError(
                    f"generator {name!r} needs {needed[gi]} interval(s), "
                    f"got {len(given)}")
            used.add(name)
            intervals.append(given[0] if role in ("val", "re") else given[1])
        extra = set(by_gen) - used
        if extra:
            raise AlgebraError(
                f"box bounds given for non-axis generator {sorted(extra)[0]!r}")
        return cls.from_intervals(pres, intervals)

    def dimension(self) -> int:
        return len(self.intervals)

    def volume(self) -> Fraction:
        v = Fraction(1)
        for lo, hi in self.intervals:
            v *= hi - lo
        return v

    def grid_points(self, resolution: int) -> list[Character]:
        """Uniform grid including endpoints, as exact characters."""
        if resolution < 2:
            raise AlgebraError("grid resolution must be at least 2")
        axes_values: list[list[Fraction]] = []
        for lo, hi in self.intervals:
            step = (hi - lo) / (resolution - 1)
            axes_values.append([lo + k * step for k in range(resolution)])
        return [character_from_axes(self.pres, point)
                for point in itertools.product(*axes_values)]

    def modulus_bound(self, gen_index: int) -> Fraction:
        """An exact bound for |value of generator| over the box."""
        axes = axis_layout(self.pres)
        a = self.pres.adjoint[gen_index]
        if a is not None and a < gen_index:
            gen_index = a  # partner shares its representative's bound
        bound = Fraction(0)
        for (gi, role), (lo, hi) in zip(axes, self.intervals):
            if gi == gen_index:
                bound += max(abs(lo), abs(hi))
        return bound


def coefficient_bound(a: StarPoly, box: CompactBox) -> Fraction:
    """Certified upper bound for sup |transform of a| over the box.

    Sum of coefficient 1-norms times per-generator modulus bounds.  All
    arithmetic is exact, which keeps the bound subadditive and
    submultiplicative on the nose.
    """
    if a.pres != box.pres:
        raise AlgebraError("element and box live over different presentations")
    gen_bounds = [box.modulus_bound(i) for i in range(len(a.pres.generators))]
    total = Fraction(0)
    for mono, coeff in a.terms:
        piece = coeff.one_norm()
        for i, e in enumerate(mono):
            if e:
                piece *= gen_bounds[i] ** e
        total += piece
    return total


@dataclass(frozen=True)
class SampleSet:
    """A finite set of characters standing in for a compact piece."""

    characters: tuple[Character, ...]
    label: str = "samples"

    def __post_init__(self) -> None:
        if not self.characters:
            raise AlgebraError("sample set is empty")
        pres = self.characters[0].pres
        if any(c.pres != pres for c in self.characters):
            raise AlgebraError("sample set mixes presentations")

    @property
    def pres(self) -> StarPresentation:
        return self.characters[0].pres


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

class BoxSampler:
    """Uniform draws from a box.  The seed is replayed on every call, so two
    calls with the same count return the same characters; callers that want
    fresh draws make a new sampler."""

    def __init__(self, box: CompactBox, seed: int, exact: bool = True,
                 denominator: int = 1024) -> None:
        self.box = box
        self.seed = seed
        self.exact = exact
        self.denominator = denominator

    def sample(self, count: int) -> list[Character]:
        rng = random.Random(self.seed)
        out: list[Character] = []
        for _ in range(count):
            point: list[Fraction | float] = []
            for lo, hi in self.box.intervals:
                if self.exact:
                    t = Fraction(rng.randint(0, self.denominator), self.denominator)
                    point.append(lo + t * (hi - lo))
                else:
                    point.append(rng.uniform(float(lo), float(hi)))
            out.append(character_from_axes(self.box.pres, point, exact=self.exact))
        return out


class GridSampler:
    """Draws from the valid characters among a finite candidate list.

    Useful over presentations with relations, where valid characters are
    scarce: candidates failing validation are dropped up front.
    """

    def __init__(self, pres: StarPresentation,
                 candidates: Sequence[Mapping[str, Value]], seed: int,
                 tolerance: float = FLOAT_TOLERANCE) -> None:
        self.pres = pres
        self.seed = seed
        valid: list[Character] = []
        for cand in candidates:
            try:
                valid.append(validate_character(pres, cand, tolerance))
            except CharacterError:
                continue
        if not valid:
            raise CharacterError("no candidate in the grid is a valid character",
                                 "relation")
        self.valid = tuple(valid)

    def sample(self, count: int) -> list[Character]:
        rng = random.Random(self.seed)
        return [self.valid[rng.randrange(len(self.valid))] for _ in range(count)]


# ---------------------------------------------------------------------------
# compactness and radical checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompactnessReport:
    subject_kind: str  # "box" | "samples"
    certified: bool
    verdict: str
    bounds: tuple[tuple[str, float], ...]
    unbounded_witnesses: tuple[str, ...]


def relative_compactness_check(subject: Union[CompactBox, SampleSet],
                               witnesses: Sequence[StarPoly],
                               threshold: float = UNBOUNDED_THRESHOLD,
                               ) -> CompactnessReport:
    """Boundedness of witness transforms over the subject.

    Boxes get certified bounds from coefficient bounding.  Sample sets only
    get observed maxima: exceeding the threshold flags the subject as not
    relatively compact at the sampled resolution, while staying below it is
    evidence, not proof.
    """
    from .parsing import format_poly
    if isinstance(subject, CompactBox):
        bounds = tuple((format_poly(w), float(coefficient_bound(w, subject)))
                       for w in witnesses)
        return CompactnessReport(
            "box", True,
            "relatively compact: certified bounds on every witness",
            bounds, ())
    observed: list[tuple[str, float]] = []
    exceeded: list[str] = []
    for w in witnesses:
        top = max(_abs(gelfand_eval(w, p)) for p in subject.characters)
        name = format_poly(w)
        observed.append((name, top))
        if top > threshold:
            exceeded.append(name)
    if exceeded:
        verdict = "not relatively compact (at sampled resolution)"
    else:
        verdict = "no witness exceeded the threshold at sampled resolution"
    return CompactnessReport("samples", False, verdict, tuple(observed),
                             tuple(exceeded))


def is_nilpotent(a: StarPoly, bound: int = 16) -> tuple[bool, int | None]:
    """Search for the least n <= bound with a**n == 0 in normal form.

    The certificate is exact: normal forms are canonical, so a**n == 0 is a
    proof of nilpotency, and its failure up to the bound is a proof that no
    exponent that small works.
    """
    power = a.pres.one()
    for n in range(1, bound + 1):
        power = power * a
        if power.is_zero():
            return True, n
    return False, None


@dataclass(frozen=True)
class RadicalReport:
    vanishes: bool
    samples: int
    max_abs: float
    witness: Character | None
    nilpotent: bool
    exponent: int | None


def radical_vanishing_check(a: StarPoly, sampler: Union[BoxSampler, GridSampler],
                            count: int = 10000,
                            tolerance: float = FLOAT_TOLERANCE,
                            nilpotent_bound: int = 16) -> RadicalReport:
    """Sampled test of transform vanishing, the radical's spectral shadow.

    One-sided: a character where the transform does not vanish certifies
    non-membership in the radical; vanishing on every sample is consistent
    with membership but proves nothing.  A nilpotency certificate, when the
    bounded search finds one, is exact.
    """
    chars = sampler.sample(count)
    max_abs = 0.0
    witness: Character | None = None
    for p in chars:
        v = gelfand_eval(a, p)
        mag = _abs(v)
        max_abs = max(max_abs, mag)
        if witness is None and not _is_zero(v, tolerance):
            witness = p
    nilpotent, exponent = is_nilpotent(a, nilpotent_bound)
    return RadicalReport(witness is None, len(chars), max_abs, witness,
                         nilpotent, exponent)
