"""Finitely presented commutative algebras and *-algebras over exact scalars.

A presentation lists generators (with optional adjoint pairing), plus
polynomial relations oriented into rewrite rules by their graded-lex leading
monomials.  Elements are kept in normal form: no stored monomial is divisible
by the leading monomial of any relation.  All coefficient arithmetic is exact
(:class:`~gelfand_lab.scalars.ComplexRational`), so equality of elements is
decidable and every algebraic law can be tested without tolerances.

Generator pairing encodes the involution: a self-adjoint generator is its own
partner, a free generator has a distinct partner (rendered ``adj(name)``), and
in plain algebra mode generators carry no pairing at all, which is exactly
what the underlying functor forgets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    AlgebraError,
    MorphismError,
    PresentationError,
    RewriteBudgetError,
)
from .scalars import ONE, ZERO, ComplexRational, ScalarLike

Monomial = tuple[int, ...]
Terms = tuple[tuple[Monomial, ComplexRational], ...]
RawTable = dict[Monomial, ComplexRational]

MODE_ALGEBRA = "algebra"
MODE_STAR = "star-algebra"

DEFAULT_REWRITE_BUDGET = 10**6


# ---------------------------------------------------------------------------
# monomial helpers (graded-lex order throughout)
# ---------------------------------------------------------------------------

def mono_degree(m: Monomial) -> int:
    return sum(m)


def grlex_key(m: Monomial) -> tuple[int, Monomial]:
    return (sum(m), m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when a divides b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def mono_quotient(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# raw coefficient tables: dict arithmetic with no rewriting
# ---------------------------------------------------------------------------

def raw_add_into(acc: RawTable, terms: Iterable[tuple[Monomial, ComplexRational]],
                 scale: ComplexRational = ONE) -> None:
    for mono, coeff in terms:
        c = acc.get(mono, ZERO) + coeff * scale
        if c.is_zero():
            acc.pop(mono, None)
        else:
            acc[mono] = c


def raw_mul(a: Mapping[Monomial, ComplexRational],
            b: Mapping[Monomial, ComplexRational]) -> RawTable:
    out: RawTable = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            c = out.get(m, ZERO) + ca * cb
            if c.is_zero():
                out.pop(m, None)
            else:
                out[m] = c
    return out


def raw_involute(adjoint: Sequence[int], a: Mapping[Monomial, ComplexRational]) -> RawTable:
    """Conjugate coefficients and swap each exponent onto the partner slot."""
    out: RawTable = {}
    for mono, coeff in a.items():
        swapped = [0] * len(mono)
        for i, e in enumerate(mono):
            swapped[adjoint[i]] += e
        key = tuple(swapped)
        c = out.get(key, ZERO) + coeff.conjugate()
        if c.is_zero():
            out.pop(key, None)
        else:
            out[key] = c
    return out


def sort_terms(table: Mapping[Monomial, ComplexRational]) -> Terms:
    return tuple(sorted(
        ((m, c) for m, c in table.items() if not c.is_zero()),
        key=lambda item: grlex_key(item[0]),
        reverse=True,
    ))


# ---------------------------------------------------------------------------
# rewriting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteRule:
    """One oriented relation: lead coefficient * lead monomial + tail = 0."""

    lead: Monomial
    coeff: ComplexRational
    tail: Terms
    index: int  # position in the presentation's relation list


@dataclass(frozen=True)
class RewriteStep:
    """A recorded reduction: the reduced element changed by
    factor * x^shift * relation[rule_index]."""

    rule_index: int
    shift: Monomial
    factor: ComplexRational


def normalize_table(rules: Sequence[RewriteRule], raw: Mapping[Monomial, ComplexRational],
                    budget: int = DEFAULT_REWRITE_BUDGET,
                    record: bool = False) -> tuple[Terms, list[RewriteStep]]:
    """Reduce a raw table to normal form under the oriented rules.

    Each step eliminates the graded-lex largest reducible monomial, so the
    loop terminates; the budget only guards against pathologically large
    intermediate expansions.  With ``record=True`` the returned steps express
    the difference between input and output as an explicit combination of
    shifted relations, which tests replay to certify soundness.
    """
    table: RawTable = {m: c for m, c in raw.items() if not c.is_zero()}
    steps: list[RewriteStep] = []
    if not rules:
        return sort_terms(table), steps
    count = 0
    while True:
        target: tuple[Monomial, RewriteRule] | None = None
        for mono in sorted(table, key=grlex_key, reverse=True):
            rule = next((r for r in rules if mono_divides(r.lead, mono)), None)
            if rule is not None:
                target = (mono, rule)
                break
        if target is None:
            break
        count += 1
        if count > budget:
            raise RewriteBudgetError(
                f"normalization exceeded {budget} rewrite steps "
                f"(last rule index {target[1].index})")
        mono, rule = target
        coeff = table.pop(mono)
        shift = mono_quotient(mono, rule.lead)
        factor = coeff / rule.coeff
        for tm, tc in rule.tail:
            key = mono_mul(tm, shift)
            c = table.get(key, ZERO) - tc * factor
            if c.is_zero():
                table.pop(key, None)
            else:
                table[key] = c
        if record:
            steps.append(RewriteStep(rule.index, shift, factor))
    return sort_terms(table), steps


def verify_rewrite_trace(pres: "StarPresentation",
                         raw: Mapping[Monomial, ComplexRational],
                         normal: Union["StarPoly", Terms],
                         steps: Sequence[RewriteStep]) -> bool:
    """Check raw - normal == sum(factor * x^shift * relation) exactly.

    The reconstruction uses raw table arithmetic only, so it does not trust
    the rewrite engine it is auditing.  ``normal`` may be the element or the
    bare term tuple that normalize_table returned.
    """
    terms = normal.terms if isinstance(normal, StarPoly) else tuple(normal)
    acc: RawTable = dict((m, c) for m, c in raw.items() if not c.is_zero())
    raw_add_into(acc, terms, scale=ComplexRational(-1))
    for step in steps:
        relation = pres.relations[step.rule_index]
        shifted = tuple((mono_mul(m, step.shift), c) for m, c in relation)
        raw_add_into(acc, shifted, scale=-step.factor)
    return not acc


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

class StarPresentation:
    """A named list of generators with adjoint pairing and oriented relations.

    Structural equality (and hashing) ignores the display names: two
    presentations are equal when they have the same mode, the same pairing
    pattern, and the same relation tables.  This matches the intended
    semantics, where the underlying algebra of the one-free-pair *-algebra
    is literally a free commutative algebra on two generators, whatever the
    second generator happens to be called.
    """

    __slots__ = ("name", "mode", "generators", "adjoint", "relations",
                 "_rules", "_key", "budget")

    def __init__(self, name: str, mode: str, generators: tuple[str, ...],
                 adjoint: tuple[int | None, ...], relations: tuple[Terms, ...],
                 rules: tuple[RewriteRule, ...], budget: int) -> None:
        # use assemble(); this constructor performs no validation
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "adjoint", adjoint)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "_rules", rules)
        object.__setattr__(self, "budget", budget)
        object.__setattr__(self, "_key", (mode, adjoint, relations))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("StarPresentation is immutable")

    @classmethod
    def assemble(cls, name: str, mode: str, generators: Sequence[str],
                 adjoint: Sequence[int | None],
                 relation_tables: Sequence[Mapping[Monomial, ComplexRational]],
                 cp_degree_bound: int | None = None,
                 budget: int = DEFAULT_REWRITE_BUDGET) -> "StarPresentation":
        generators = tuple(generators)
        adjoint = tuple(adjoint)
        if mode not in (MODE_ALGEBRA, MODE_STAR):
            raise PresentationError(f"unknown mode {mode!r}")
        if len(set(generators)) != len(generators):
            raise PresentationError("duplicate generator name")
        for g in generators:
            if not g:
                raise PresentationError("empty generator name")
        if len(adjoint) != len(generators):
            raise PresentationError("adjoint table length mismatch")
        n = len(generators)
        if mode == MODE_ALGEBRA:
            if any(a is not None for a in adjoint):
                raise PresentationError("algebra mode admits no adjoint pairing")
        else:
            for i, a in enumerate(adjoint):
                if a is None or not (0 <= a < n) or adjoint[a] != i:
                    raise PresentationError(
                        f"adjoint pairing is not an involution at generator "
                        f"{generators[i]!r}")

        canonical: list[Terms] = []
        for table in relation_tables:
            for mono in table:
                if len(mono) != n or any(e < 0 for e in mono):
                    raise PresentationError("relation monomial has wrong shape")
            terms = sort_terms(table)
            if terms:
                canonical.append(terms)
        relations = tuple(canonical)
        rules = tuple(
            RewriteRule(lead=t[0][0], coeff=t[0][1], tail=t[1:], index=i)
            for i, t in enumerate(relations)
        )
        pres = cls(name, mode, generators, adjoint, relations, rules, budget)

        # confluence first: on a non-confluent system the closure check below
        # would blame the involution for what is really an unresolved overlap
        pres._check_confluence(cp_degree_bound)
        if mode == MODE_STAR:
            for i, rel in enumerate(relations):
                image = raw_involute(adjoint, dict(rel))
                reduced, _ = normalize_table(rules, image, budget)
                if reduced:
                    raise PresentationError(
                        f"relation {i} is not matched under the involution; "
                        f"add its adjoint as a relation")
        return pres

    def _check_confluence(self, cp_degree_bound: int | None) -> None:
        rules = self._rules
        if len(rules) < 2:
            return
        if cp_degree_bound is None:
            cp_degree_bound = 2 * max(
                (max(mono_degree(m) for m, _ in rel) for rel in self.relations),
                default=0,
            )
        for i in range(len(rules)):
            for j in range(i + 1, len(rules)):
                ri, rj = rules[i], rules[j]
                lcm = mono_lcm(ri.lead, rj.lead)
                if lcm == mono_mul(ri.lead, rj.lead):
                    continue  # coprime leads: the pair resolves trivially
                if mono_degree(lcm) > cp_degree_bound:
                    continue
                s_poly: RawTable = {}
                shift_i = mono_quotient(lcm, ri.lead)
                shift_j = mono_quotient(lcm, rj.lead)
                rel_i = ((ri.lead, ri.coeff),) + ri.tail
                rel_j = ((rj.lead, rj.coeff),) + rj.tail
                raw_add_into(s_poly, ((mono_mul(m, shift_i), c) for m, c in rel_i),
                             scale=ONE / ri.coeff)
                raw_add_into(s_poly, ((mono_mul(m, shift_j), c) for m, c in rel_j),
                             scale=-(ONE / rj.coeff))
                reduced, _ = normalize_table(rules, s_poly, self.budget)
                if reduced:
                    raise PresentationError(
                        f"relations {i} and {j} are not confluent up to "
                        f"degree {cp_degree_bound}: unresolved overlap at "
                        f"{lcm}")

    # ---- structural identity ----

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StarPresentation):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    # ---- queries ----

    @property
    def is_star(self) -> bool:
        return self.mode == MODE_STAR

    def generator_index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def partner(self, index: int) -> int:
        a = self.adjoint[index]
        if a is None:
            raise AlgebraError(
                "generator has no adjoint partner in algebra mode")
        return a

    def generator_kind(self, index: int) -> str:
        a = self.adjoint[index]
        if a is None:
            return "plain"
        return "selfadjoint" if a == index else "free"

    def rules(self) -> tuple[RewriteRule, ...]:
        return self._rules

    # ---- element constructors ----

    def poly(self, table: Mapping[Monomial, ComplexRational]) -> "StarPoly":
        terms, _ = normalize_table(self._rules, table, self.budget)
        return StarPoly(self, terms)

    def zero(self) -> "StarPoly":
        return StarPoly(self, ())

    def scalar(self, value: ScalarLike) -> "StarPoly":
        c = ComplexRational.coerce(value)
        if c.is_zero():
            return self.zero()
        unit = (0,) * len(self.generators)
        return self.poly({unit: c})

    def one(self) -> "StarPoly":
        return self.scalar(1)

    def gen(self, which: Union[int, str]) -> "StarPoly":
        idx = which if isinstance(which, int) else self.generator_index(which)
        mono = tuple(1 if i == idx else 0 for i in range(len(self.generators)))
        return self.poly({mono: ONE})

    def monomials_up_to(self, degree: int) -> list[Monomial]:
        """All rule-irreducible monomials of total degree <= degree,
        ascending graded-lex."""
        n = len(self.generators)
        out: list[Monomial] = []

        def emit(prefix: list[int], pos: int, remaining: int) -> None:
            if pos == n:
                mono = tuple(prefix)
                if not any(mono_divides(r.lead, mono) for r in self._rules):
                    out.append(mono)
                return
            for e in range(remaining + 1):
                prefix.append(e)
                emit(prefix, pos + 1, remaining - e)
                prefix.pop()

        emit([], 0, degree)
        out.sort(key=grlex_key)
        return out

    def describe(self) -> dict:
        """Plain-data summary used by the command line reports."""
        from .parsing import format_terms  # local import to avoid a cycle
        gens = []
        for i, g in enumerate(self.generators):
            entry: dict = {"name": g, "kind": self.generator_kind(i)}
            if self.adjoint[i] is not None and self.adjoint[i] != i:
                entry["partner"] = self.generators[self.adjoint[i]]
            gens.append(entry)
        return {
            "name": self.name,
            "mode": self.mode,
            "generators": gens,
            "relations": [format_terms(self, rel) for rel in self.relations],
        }

    def __repr__(self) -> str:
        return (f"StarPresentation({self.name!r}, {self.mode}, "
                f"generators={list(self.generators)}, "
                f"relations={len(self.relations)})")


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class StarPoly:
    """An element of a presented algebra, stored in normal form.

    ``terms`` is a tuple of (monomial, coefficient) pairs sorted in
    descending graded-lex order; no monomial is reducible and no coefficient
    is zero.  Instances are immutable and hashable.
    """

    __slots__ = ("pres", "terms")

    def __init__(self, pres: StarPresentation, terms: Terms) -> None:
        object.__setattr__(self, "pres", pres)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("StarPoly is immutable")

    # ---- queries ----

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero element."""
        if not self.terms:
            return -1
        return mono_degree(self.terms[0][0])

    def coeff(self, mono: Monomial) -> ComplexRational:
        for m, c in self.terms:
            if m == mono:
                return c
        return ZERO

    def constant_term(self) -> ComplexRational:
        return self.coeff((0,) * len(self.pres.generators))

    def as_table(self) -> RawTable:
        return dict(self.terms)

    def _require_same(self, other: "StarPoly") -> None:
        if self.pres != other.pres:
            raise AlgebraError("operands live over different presentations")

    # ---- arithmetic ----

    def __add__(self, other: Union["StarPoly", ScalarLike]) -> "StarPoly":
        if not isinstance(other, StarPoly):
            other = self.pres.scalar(other)
        self._require_same(other)
        acc = self.as_table()
        raw_add_into(acc, other.terms)
        return self.pres.poly(acc)

    __radd__ = __add__

    def __neg__(self) -> "StarPoly":
        return StarPoly(self.pres, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: Union["StarPoly", ScalarLike]) -> "StarPoly":
        if not isinstance(other, StarPoly):
            other = self.pres.scalar(other)
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> "StarPoly":
        return self.pres.scalar(other) - self

    def __mul__(self, other: Union["StarPoly", ScalarLike]) -> "StarPoly":
        if not isinstance(other, StarPoly):
            c = ComplexRational.coerce(other)
            if c.is_zero():
                return self.pres.zero()
            return StarPoly(self.pres, tuple((m, k * c) for m, k in self.terms))
        self._require_same(other)
        return self.pres.poly(raw_mul(self.as_table(), other.as_table()))

    def __rmul__(self, other: ScalarLike) -> "StarPoly":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "StarPoly":
        if not isinstance(n, int) or n < 0:
            raise AlgebraError("polynomial exponent must be a nonnegative integer")
        result = self.pres.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def involute(self) -> "StarPoly":
        """The image under the involution; rejects algebra-mode elements."""
        if not self.pres.is_star:
            raise AlgebraError("underlying algebra carries no involution")
        adjoint = [a for a in self.pres.adjoint]
        return self.pres.poly(raw_involute(adjoint, self.as_table()))

    # ---- identity ----

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, ComplexRational)):
            return self == self.pres.scalar(other)
        if not isinstance(other, StarPoly):
            return NotImplemented
        return self.pres == other.pres and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.pres, self.terms))

    def __str__(self) -> str:
        from .parsing import format_poly
        return format_poly(self)

    def __repr__(self) -> str:
        return f"<StarPoly {self}>"


def involute(a: StarPoly) -> StarPoly:
    return a.involute()


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

class Morphism:
    """A homomorphism defined by generator images, validated on relations."""

    __slots__ = ("source", "target", "images", "star")

    def __init__(self, source: StarPresentation, target: StarPresentation,
                 images: tuple[StarPoly, ...], star: bool) -> None:
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "star", star)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Morphism is immutable")

    @classmethod
    def create(cls, source: StarPresentation, target: StarPresentation,
               images: Union[Mapping[str, StarPoly], Sequence[StarPoly]],
               star: bool = False) -> "Morphism":
        if isinstance(images, Mapping):
            missing = [g for g in source.generators if g not in images]
            if missing:
                raise MorphismError(f"no image for generator {missing[0]!r}")
            extra = [k for k in images if k not in source.generators]
            if extra:
                raise MorphismError(f"image given for unknown generator {extra[0]!r}")
            ordered = tuple(images[g] for g in source.generators)
        else:
            ordered = tuple(images)
            if len(ordered) != len(source.generators):
                raise MorphismError(
                    f"expected {len(source.generators)} images, got {len(ordered)}")
        for img in ordered:
            if img.pres != target:
                raise MorphismError("generator image lives over the wrong presentation")
        morphism = cls(source, target, ordered, star)
        for k, rel in enumerate(source.relations):
            value = morphism._apply_table(dict(rel))
            if not value.is_zero():
                raise MorphismError(
                    f"generator assignment does not kill relation {k}")
        if star:
            ok, witness = is_star_hom(morphism)
            if not ok:
                raise MorphismError(
                    f"assignment is not *-compatible at generator {witness!r}")
        return morphism

    def image(self, which: Union[int, str]) -> StarPoly:
        idx = which if isinstance(which, int) else self.source.generator_index(which)
        return self.images[idx]

    def _apply_table(self, table: Mapping[Monomial, ComplexRational]) -> StarPoly:
        total = self.target.zero()
        for mono, coeff in table.items():
            factor = self.target.one()
            for i, e in enumerate(mono):
                if e:
                    factor = factor * (self.images[i] ** e)
            total = total + factor * coeff
        return total

    def apply(self, a: StarPoly) -> StarPoly:
        if a.pres != self.source:
            raise AlgebraError("element does not live over the morphism source")
        return self._apply_table(a.as_table())

    def __call__(self, a: StarPoly) -> StarPoly:
        return self.apply(a)

    def __repr__(self) -> str:
        kind = "*-morphism" if self.star else "morphism"
        return (f"<{kind} {self.source.name} -> {self.target.name} on "
                f"{len(self.images)} generators>")


def identity_morphism(pres: StarPresentation) -> Morphism:
    images = tuple(pres.gen(i) for i in range(len(pres.generators)))
    return Morphism(pres, pres, images, star=pres.is_star)


def compose(outer: Morphism, inner: Morphism) -> Morphism:
    """outer after inner."""
    if inner.target != outer.source:
        raise MorphismError("composition mismatch: inner target != outer source")
    images = tuple(outer.apply(img) for img in inner.images)
    return Morphism(inner.source, outer.target, images,
                    star=inner.star and outer.star)


def is_star_hom(f: Morphism) -> tuple[bool, str | None]:
    """Check f(adj(g)) == adj(f(g)) on every generator.

    Returns (True, None) or (False, offending generator name).  Checking the
    generators suffices: both sides are anti-linear over conjugation and
    multiplicative, so agreement on generators extends to all elements.
    """
    if not (f.source.is_star and f.target.is_star):
        raise AlgebraError("*-compatibility needs involutions on both sides")
    for i, g in enumerate(f.source.generators):
        j = f.source.partner(i)
        if f.images[j] != f.images[i].involute():
            return False, g
    return True, None


# ---------------------------------------------------------------------------
# the free / underlying functor pair
# ---------------------------------------------------------------------------

def _lift_table(table: Terms, positions: Sequence[int], width: int) -> RawTable:
    out: RawTable = {}
    for mono, coeff in table:
        lifted = [0] * width
        for i, e in enumerate(mono):
            lifted[positions[i]] = e
        out[tuple(lifted)] = coeff
    return out


def free_star(pres: StarPresentation) -> StarPresentation:
    """Left adjoint on objects: double the generators and close the relations.

    Every generator g of the input gains a fresh partner adj(g); every
    relation is imported verbatim on the original generators and accompanied
    by its involuted copy, the minimal choice making the result a *-algebra
    presentation.
    """
    if pres.is_star:
        raise AlgebraError("free functor applies to algebra-mode presentations")
    n = len(pres.generators)
    names: list[str] = []
    adjoint: list[int | None] = []
    for i, g in enumerate(pres.generators):
        names.extend([g, f"adj({g})"])
        adjoint.extend([2 * i + 1, 2 * i])
    positions = [2 * i for i in range(n)]
    tables: list[RawTable] = []
    seen: set[Terms] = set()
    for rel in pres.relations:
        lifted = _lift_table(rel, positions, 2 * n)
        mirrored = raw_involute(adjoint, lifted)
        for table in (lifted, mirrored):
            key = sort_terms(table)
            if key not in seen:
                seen.add(key)
                tables.append(table)
    return StarPresentation.assemble(
        f"free({pres.name})", MODE_STAR, names, adjoint, tables,
        budget=pres.budget)


def underlying(pres: StarPresentation) -> StarPresentation:
    """Right adjoint on objects: erase the adjoint pairing, keep everything
    else verbatim."""
    if not pres.is_star:
        raise AlgebraError("underlying functor applies to *-algebra presentations")
    return StarPresentation.assemble(
        f"underlying({pres.name})", MODE_ALGEBRA, pres.generators,
        (None,) * len(pres.generators),
        [dict(rel) for rel in pres.relations],
        budget=pres.budget)


def reinterpret(a: StarPoly, pres: StarPresentation) -> StarPoly:
    """Carry a coefficient table to a presentation with the same generator
    slots (used to move elements along the identity on generators between a
    *-presentation and its underlying presentation)."""
    if len(pres.generators) != len(a.pres.generators):
        raise AlgebraError("presentations have different generator counts")
    return pres.poly(a.as_table())


def underlying_morphism(f: Morphism) -> Morphism:
    """Apply the underlying functor to a *-morphism."""
    if not (f.source.is_star and f.target.is_star):
        raise AlgebraError("underlying functor acts on *-morphisms")
    src = underlying(f.source)
    tgt = underlying(f.target)
    images = tuple(reinterpret(img, tgt) for img in f.images)
    return Morphism(src, tgt, images, star=False)


def extend_hom(f: Morphism, target: StarPresentation) -> Morphism:
    """The universal extension across the free functor.

    Given an algebra morphism f from A into the underlying algebra of a
    *-presentation B, produce the unique *-morphism from free_star(A) to B
    that restricts to f on the original generators.  The partner images are
    forced: adj(g) must go to the involute of f(g), so there is nothing to
    choose.
    """
    if f.source.is_star:
        raise MorphismError("extension source must be an algebra-mode presentation")
    if not target.is_star:
        raise MorphismError("extension target must be a *-presentation")
    if f.target != underlying(target):
        raise MorphismError(
            "morphism target is not the underlying algebra of the extension target")
    fa = free_star(f.source)
    images: list[StarPoly] = []
    for img in f.images:
        moved = reinterpret(img, target)
        images.append(moved)
        images.append(moved.involute())
    return Morphism.create(fa, target, images, star=True)


def restrict_hom(g: Morphism, source: StarPresentation) -> Morphism:
    """Restrict a *-morphism out of free_star(source) back along the unit:
    keep the images of the original generators, viewed in the underlying
    algebra of the target."""
    if g.source != free_star(source):
        raise MorphismError("morphism source is not the free *-algebra on the "
                            "given presentation")
    tgt = underlying(g.target)
    images = tuple(reinterpret(g.images[2 * i], tgt)
                   for i in range(len(source.generators)))
    return Morphism(source, tgt, images, star=False)
