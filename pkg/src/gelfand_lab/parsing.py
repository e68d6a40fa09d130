"""Concrete syntax: presentations, polynomials, characters, boxes, states.

One tokenizer and one recursive-descent parser cover every textual input the
package accepts.  Diagnostics carry 1-based line:column positions.  The
polynomial formatter emits a canonical spelling (descending graded-lex terms,
explicit coefficients, parenthesized complex literals) chosen so that
``parse_poly(format_poly(p)) == p`` holds exactly for every element.

Grammar sketch::

    presentation := "algebra" IDENT ";" { genDecl | relDecl }
    genDecl      := "generator" IDENT { "," IDENT } ":" ("selfadjoint" | "free") ";"
    relDecl      := "relation" polyExpr ";"
    polyExpr     := [ "+" | "-" ] term { ("+" | "-") term }
    term         := factor { "*" factor }
    factor       := atom [ "^" NAT ]
    atom         := IDENT | "adj" "(" polyExpr ")" | complexLit | "(" polyExpr ")"
    complexLit   := "(" RAT [ ("+" | "-") RAT "i" ] ")" | RAT
    RAT          := [ "-" ] NAT [ "/" NAT ]

Comments run from ``#`` to end of line.  Whether the presentation is a plain
algebra or a *-algebra is a parse-time flag, not part of the text; the header
keyword is always ``algebra``.  Floating point literals are rejected inside
polynomials and relations but accepted in character values, box bounds, and
state weights, where numeric data is expected.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Mapping, Sequence, Union

from . import algebra, spectrum, states
from .algebra import (
    MODE_ALGEBRA,
    MODE_STAR,
    Monomial,
    RawTable,
    StarPoly,
    StarPresentation,
    raw_mul,
)
from .errors import ParseError
from .scalars import ONE, ComplexRational

Value = Union[ComplexRational, complex]

_PUNCT = set(";,:^*+-()={}[]/")


# ── tokens ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Token:
    kind: str  # ident | nat | float | string | punct | arrow | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(Token("arrow", "->", line, start_col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise ParseError("unterminated string literal", line, start_col)
            tokens.append(Token("string", text[i + 1:j], line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_float = False
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            word = text[i:j]
            tokens.append(Token("float" if is_float else "nat", word, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# ── generator scopes ─────────────────────────────────────────────────────

class _GenScope:
    """Name resolution context for polynomial parsing.

    Relations are parsed before the presentation object exists, so the scope
    carries just the pieces the expression grammar needs: the generator
    names, the adjoint pairing, and whether an involution is available.
    """

    def __init__(self, names: Sequence[str], adjoint: Sequence[int | None],
                 star: bool) -> None:
        self.names = list(names)
        self.index = {g: i for i, g in enumerate(names)}
        self.adjoint = list(adjoint)
        self.star = star
        self.width = len(self.names)

    @classmethod
    def of(cls, pres: StarPresentation) -> "_GenScope":
        return cls(pres.generators, pres.adjoint, pres.is_star)

    def unit(self) -> Monomial:
        return (0,) * self.width

    def gen_table(self, idx: int) -> RawTable:
        mono = tuple(1 if i == idx else 0 for i in range(self.width))
        return {mono: ONE}


# ── parser ───────────────────────────────────────────────────────────────

class Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    # token access

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def at_word(self, word: str) -> bool:
        return self.at("ident", word)

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            tok = self.peek()
            want = text if text is not None else kind
            got = tok.text if tok.kind != "eof" else "end of input"
            self.error(f"expected {want!r}, found {got!r}", tok)
        return self.advance()

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.advance()
        return None

    def error(self, message: str, tok: Token | None = None) -> None:
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect_done(self) -> None:
        if not self.at("eof"):
            self.error(f"unexpected trailing input {self.peek().text!r}")

    # ── presentations ────────────────────────────────────────────────

    def presentation(self, mode: str) -> StarPresentation:
        if mode not in (MODE_ALGEBRA, MODE_STAR):
            raise ParseError(f"unknown presentation mode {mode!r}")
        self.expect("ident", "algebra")
        name = self.expect("ident").text
        self.expect("punct", ";")

        declared: list[tuple[str, str, Token]] = []
        relation_spans: list[tuple[int, int]] = []
        while not self.at("eof"):
            if self.at_word("generator"):
                self.advance()
                group: list[Token] = [self.expect("ident")]
                while self.accept("punct", ","):
                    group.append(self.expect("ident"))
                self.expect("punct", ":")
                kind_tok = self.expect("ident")
                if kind_tok.text not in ("selfadjoint", "free"):
                    self.error("generator kind must be 'selfadjoint' or 'free'",
                               kind_tok)
                if kind_tok.text == "selfadjoint" and mode == MODE_ALGEBRA:
                    self.error("'selfadjoint' needs star-algebra mode; a plain "
                               "algebra has no involution", kind_tok)
                self.expect("punct", ";")
                for tok in group:
                    declared.append((tok.text, kind_tok.text, tok))
            elif self.at_word("relation"):
                self.advance()
                start = self.pos
                while not self.at("punct", ";") and not self.at("eof"):
                    self.advance()
                if self.at("eof"):
                    self.error("relation is missing its terminating ';'")
                relation_spans.append((start, self.pos))
                self.advance()
            else:
                self.error("expected 'generator' or 'relation'")

        names: list[str] = []
        adjoint: list[int | None] = []
        seen: set[str] = set()
        for gname, kind, tok in declared:
            if gname in seen:
                self.error(f"generator {gname!r} declared twice", tok)
            if gname == "adj":
                self.error("'adj' is reserved for the involution", tok)
            seen.add(gname)
            if mode == MODE_ALGEBRA:
                names.append(gname)
                adjoint.append(None)
            elif kind == "selfadjoint":
                names.append(gname)
                adjoint.append(len(names) - 1)
            else:
                partner = f"adj({gname})"
                base = len(names)
                names.extend([gname, partner])
                adjoint.extend([base + 1, base])

        scope = _GenScope(names, adjoint, mode == MODE_STAR)
        tables: list[RawTable] = []
        for start, end in relation_spans:
            sub = Parser(self.tokens[start:end] + [self.tokens[-1]])
            table = sub.poly(scope, allow_float=False)
            sub.expect_done()
            tables.append(table)

        return StarPresentation.assemble(name, mode, names, adjoint, tables)

    # ── polynomial expressions ───────────────────────────────────────

    def poly(self, scope: _GenScope, allow_float: bool = False) -> RawTable:
        negate = False
        if self.accept("punct", "-"):
            negate = True
        else:
            self.accept("punct", "+")
        table = self.term(scope)
        if negate:
            table = {m: -c for m, c in table.items()}
        while self.at("punct", "+") or self.at("punct", "-"):
            op = self.advance().text
            rhs = self.term(scope)
            for mono, coeff in rhs.items():
                delta = coeff if op == "+" else -coeff
                c = table.get(mono, ComplexRational(0)) + delta
                if c.is_zero():
                    table.pop(mono, None)
                else:
                    table[mono] = c
        return table

    def term(self, scope: _GenScope) -> RawTable:
        table = self.factor(scope)
        while self.accept("punct", "*"):
            table = raw_mul(table, self.factor(scope))
        return table

    def factor(self, scope: _GenScope) -> RawTable:
        base = self.atom(scope)
        if self.accept("punct", "^"):
            tok = self.expect("nat")
            exponent = int(tok.text)
            result: RawTable = {scope.unit(): ONE}
            while exponent:
                if exponent & 1:
                    result = raw_mul(result, base)
                base = raw_mul(base, base)
                exponent >>= 1
            return result
        return base

    def atom(self, scope: _GenScope) -> RawTable:
        tok = self.peek()
        if tok.kind == "ident":
            if tok.text == "adj" and self.peek(1).kind == "punct" \
                    and self.peek(1).text == "(":
                return self._adj_atom(scope)
            self.advance()
            idx = scope.index.get(tok.text)
            if idx is None:
                self.error(f"unknown generator {tok.text!r}", tok)
            return scope.gen_table(idx)
        if tok.kind == "nat":
            value = self._rational(signed=False)
            return {scope.unit(): ComplexRational(value)}
        if tok.kind == "float":
            self.error("floating point literals are not allowed in "
                       "polynomial input", tok)
        if tok.kind == "punct" and tok.text == "(":
            lit = self._try_complex_literal(allow_float=False)
            if lit is not None:
                value, _ = lit
                if not isinstance(value, ComplexRational):
                    self.error("floating point literals are not allowed in "
                               "polynomial input", tok)
                return {scope.unit(): value} if not value.is_zero() else {}
            self.advance()
            table = self.poly(scope)
            self.expect("punct", ")")
            return table
        self.error(f"unexpected token {tok.text!r} in polynomial", tok)
        raise AssertionError  # unreachable

    def _adj_atom(self, scope: _GenScope) -> RawTable:
        # A literal generator called adj(...)? Auto-named adjoint partners
        # (and doubly wrapped names from iterated functor application) must
        # resolve to themselves so the formatter round-trips.
        save = self.pos
        depth = 0
        probe = self.pos
        while self.tokens[probe].kind == "ident" and self.tokens[probe].text == "adj" \
                and self.tokens[probe + 1].kind == "punct" \
                and self.tokens[probe + 1].text == "(":
            depth += 1
            probe += 2
        if depth and self.tokens[probe].kind == "ident":
            base = self.tokens[probe].text
            closing = all(
                self.tokens[probe + 1 + k].kind == "punct"
                and self.tokens[probe + 1 + k].text == ")"
                for k in range(depth)
            )
            if closing:
                literal = "adj(" * depth + base + ")" * depth
                idx = scope.index.get(literal)
                if idx is not None:
                    self.pos = probe + 1 + depth
                    return scope.gen_table(idx)
        self.pos = save
        adj_tok = self.advance()  # 'adj'
        self.expect("punct", "(")
        inner = self.poly(scope)
        self.expect("punct", ")")
        if not scope.star:
            self.error("adj(...) needs an involution; this is a plain "
                       "algebra presentation", adj_tok)
        return algebra.raw_involute(scope.adjoint, inner)

    # ── numeric literals ─────────────────────────────────────────────

    def _rational(self, signed: bool) -> Fraction:
        sign = 1
        if signed:
            if self.accept("punct", "-"):
                sign = -1
            else:
                self.accept("punct", "+")
        tok = self.expect("nat")
        value = Fraction(int(tok.text))
        if self.accept("punct", "/"):
            den_tok = self.expect("nat")
            den = int(den_tok.text)
            if den == 0:
                self.error("zero denominator", den_tok)
            value /= den
        return sign * value

    def _number(self, signed: bool, allow_float: bool) -> tuple[Fraction, bool]:
        """Returns (value as exact Fraction, literal-was-exact flag).

        Decimal floats convert exactly (2.5 -> 5/2), but they mark the
        surrounding datum as floating point.
        """
        sign = 1
        if signed:
            if self.accept("punct", "-"):
                sign = -1
            else:
                self.accept("punct", "+")
        tok = self.peek()
        if tok.kind == "float":
            if not allow_float:
                self.error("floating point literal not allowed here", tok)
            self.advance()
            try:
                value = Fraction(Decimal(tok.text))
            except InvalidOperation:
                self.error(f"bad numeric literal {tok.text!r}", tok)
            return sign * value, False
        return sign * self._rational(signed=False), True

    def _try_complex_literal(self, allow_float: bool) -> tuple[Value, bool] | None:
        """Attempt "(" num [("+"|"-") num "i"] ")" with backtracking."""
        if not self.at("punct", "("):
            return None
        save = self.pos
        try:
            self.advance()
            re, re_exact = self._number(signed=True, allow_float=allow_float)
            im = Fraction(0)
            im_exact = True
            if self.at("punct", "+") or self.at("punct", "-"):
                sign = -1 if self.advance().text == "-" else 1
                mag, im_exact = self._number(signed=False, allow_float=allow_float)
                im = sign * mag
                self.expect("ident", "i")
            self.expect("punct", ")")
        except ParseError:
            self.pos = save
            return None
        exact = re_exact and im_exact
        value: Value = ComplexRational(re, im)
        if not exact:
            value = complex(value)
        return value, exact

    def scalar_value(self) -> tuple[Value, bool]:
        """A standalone numeric value: rational, decimal float, or complex
        literal.  Used for character values and atomic state support points."""
        lit = self._try_complex_literal(allow_float=True)
        if lit is not None:
            return lit
        value, exact = self._number(signed=True, allow_float=True)
        if exact:
            return ComplexRational(value), True
        return complex(float(value), 0.0), False

    # ── characters ───────────────────────────────────────────────────

    def _value_key(self, pres: StarPresentation) -> str:
        tok = self.expect("ident")
        name = tok.text
        if name == "adj":
            self.expect("punct", "(")
            inner = self.expect("ident").text
            self.expect("punct", ")")
            name = f"adj({inner})"
        if name not in pres.generators:
            self.error(f"unknown generator {name!r}", tok)
        return name

    def assignment_entries(self, pres: StarPresentation,
                           closing: str | None) -> tuple[dict[str, Value], bool]:
        values: dict[str, Value] = {}
        exact = True
        while True:
            if closing is not None and self.at("punct", closing):
                break
            if closing is None and self.at("eof"):
                break
            key = self._value_key(pres)
            if key in values:
                self.error(f"generator {key!r} assigned twice")
            self.expect("punct", "=")
            value, value_exact = self.scalar_value()
            values[key] = value
            exact = exact and value_exact
            if not (self.accept("punct", ";") or self.accept("punct", ",")):
                break
        if not values:
            self.error("empty assignment")
        return values, exact

    def character(self, pres: StarPresentation, tolerance: float) -> spectrum.Character:
        self.accept("ident", "char")
        if self.accept("punct", "{"):
            values, exact = self.assignment_entries(pres, closing="}")
            self.expect("punct", "}")
        else:
            values, exact = self.assignment_entries(pres, closing=None)
        # validate_character fills missing partner values itself
        if not exact:
            values = {k: complex(v) if isinstance(v, ComplexRational) else v
                      for k, v in values.items()}
        return spectrum.validate_character(pres, values, tolerance=tolerance)

    # ── boxes ────────────────────────────────────────────────────────

    def interval(self) -> tuple[Fraction, Fraction]:
        self.expect("punct", "[")
        lo, _ = self._number(signed=True, allow_float=True)
        self.expect("punct", ",")
        hi, _ = self._number(signed=True, allow_float=True)
        tok = self.expect("punct", "]")
        if lo > hi:
            self.error("interval bounds out of order", tok)
        return lo, hi

    def box(self, pres: StarPresentation) -> spectrum.CompactBox:
        self.accept("ident", "box")
        braced = bool(self.accept("punct", "{"))
        by_gen: dict[str, list[tuple[Fraction, Fraction]]] = {}
        while True:
            if braced and self.at("punct", "}"):
                break
            if not braced and self.at("eof"):
                break
            tok = self.peek()
            name = self._value_key(pres)
            if name in by_gen:
                self.error(f"box bounds for {name!r} given twice", tok)
            self.expect("punct", "=")
            intervals = [self.interval()]
            while self.at_word("x") and self.peek(1).kind == "punct" \
                    and self.peek(1).text == "[":
                self.advance()
                intervals.append(self.interval())
            by_gen[name] = intervals
            if not self.accept("punct", ";"):
                break
        if braced:
            self.expect("punct", "}")
        return spectrum.CompactBox.for_generators(pres, by_gen)

    # ── states ───────────────────────────────────────────────────────

    def state(self, pres: StarPresentation) -> states.State:
        self.accept("ident", "state")
        tok = self.expect("ident")
        kind = tok.text
        if kind == "atomic":
            self.expect("punct", "{")
            atoms: list[tuple[dict[str, Value], Fraction]] = []
            while not self.at("punct", "}"):
                self.expect("punct", "(")
                values, _ = self.assignment_entries(pres, closing=")")
                self.expect("punct", ")")
                self.expect("punct", ":")
                weight = self._rational(signed=True)
                atoms.append((values, weight))
                if not self.accept("punct", ";"):
                    break
            self.expect("punct", "}")
            return states.atomic_state(pres, atoms)
        if kind == "gaussian":
            generator: str | None = None
            if self.accept("punct", "("):
                generator = self.expect("ident").text
                self.expect("punct", ")")
            return states.gaussian_state(pres, generator)
        if kind == "density":
            density = self.expect("string").text
            self.expect("ident", "on")
            intervals = [self.interval()]
            while self.at_word("x") and self.peek(1).kind == "punct" \
                    and self.peek(1).text == "[":
                self.advance()
                intervals.append(self.interval())
            self.expect("ident", "order")
            order = int(self.expect("nat").text)
            box = spectrum.CompactBox.from_intervals(pres, intervals)
            return states.quadrature_state(pres, box, density, order)
        self.error(f"unknown state kind {kind!r}; expected atomic, gaussian, "
                   f"or density", tok)
        raise AssertionError  # unreachable

    # ── morphisms ────────────────────────────────────────────────────

    def morphism(self, source: StarPresentation,
                 target: StarPresentation) -> algebra.Morphism:
        scope = _GenScope.of(target)
        images: dict[str, StarPoly] = {}
        while not self.at("eof"):
            tok = self.expect("ident")
            name = tok.text
            if name == "adj":
                self.expect("punct", "(")
                inner = self.expect("ident").text
                self.expect("punct", ")")
                name = f"adj({inner})"
            if name not in source.generators:
                self.error(f"unknown source generator {name!r}", tok)
            if name in images:
                self.error(f"image of {name!r} given twice", tok)
            self.expect("arrow")
            table = self.poly(scope)
            images[name] = target.poly(table)
            if not self.accept("punct", ";"):
                break
        star = source.is_star and target.is_star
        if star:
            # partner images may be omitted; the involution forces them
            for i, g in enumerate(source.generators):
                j = source.partner(i)
                pg = source.generators[j]
                if g in images and pg not in images:
                    images[pg] = images[g].involute()
        return algebra.Morphism.create(source, target, images, star=star)


# ── public entry points ──────────────────────────────────────────────────

def parse_presentation(text: str, mode: str = MODE_STAR) -> StarPresentation:
    mode = {"star": MODE_STAR}.get(mode, mode)  # short alias
    parser = Parser(tokenize(text))
    pres = parser.presentation(mode)
    parser.expect_done()
    return pres


def parse_poly(text: str, pres: StarPresentation) -> StarPoly:
    parser = Parser(tokenize(text))
    table = parser.poly(_GenScope.of(pres), allow_float=False)
    parser.expect_done()
    return pres.poly(table)


def parse_character(text: str, pres: StarPresentation,
                    tolerance: float = 1e-12) -> spectrum.Character:
    parser = Parser(tokenize(text))
    char = parser.character(pres, tolerance)
    parser.expect_done()
    return char


def parse_box(text: str, pres: StarPresentation) -> spectrum.CompactBox:
    parser = Parser(tokenize(text))
    box = parser.box(pres)
    parser.expect_done()
    return box


def parse_state(text: str, pres: StarPresentation) -> states.State:
    parser = Parser(tokenize(text))
    if parser.at("ident", "gaussian") and parser.peek(1).kind == "eof":
        parser.advance()
        return states.gaussian_state(pres, None)
    result = parser.state(pres)
    parser.expect_done()
    return result


def parse_morphism(text: str, source: StarPresentation,
                   target: StarPresentation) -> algebra.Morphism:
    parser = Parser(tokenize(text))
    morphism = parser.morphism(source, target)
    parser.expect_done()
    return morphism


# ── formatting ───────────────────────────────────────────────────────────

def format_monomial(pres: StarPresentation, mono: Monomial) -> str:
    parts = []
    for name, e in zip(pres.generators, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_terms(pres: StarPresentation, terms) -> str:
    if not terms:
        return "0"
    unit = (0,) * len(pres.generators)
    rendered: list[str] = []
    for position, (mono, coeff) in enumerate(terms):
        if mono == unit:
            if coeff.is_real():
                negative = coeff.re < 0
                body = str(abs(coeff.re))
            else:
                negative = False
                body = coeff.literal()
        else:
            monomial = format_monomial(pres, mono)
            if coeff.is_real():
                negative = coeff.re < 0
                mag = abs(coeff.re)
                body = monomial if mag == 1 else f"{mag}*{monomial}"
            else:
                negative = False
                body = f"{coeff.literal()}*{monomial}"
        if position == 0:
            rendered.append(f"-{body}" if negative else body)
        else:
            rendered.append(f" - {body}" if negative else f" + {body}")
    return "".join(rendered)


def format_poly(p: StarPoly) -> str:
    return format_terms(p.pres, p.terms)


def format_value(value: Value) -> str:
    if isinstance(value, ComplexRational):
        return value.literal()
    if value.imag == 0:
        return repr(value.real)
    sign = "+" if value.imag >= 0 else "-"
    return f"({value.real!r}{sign}{abs(value.imag)!r}i)"


def format_character(char: spectrum.Character) -> str:
    parts = [f"{g} = {format_value(v)}"
             for g, v in zip(char.pres.generators, char.values)]
    return "char { " + " ; ".join(parts) + " }"
