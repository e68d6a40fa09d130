from fractions import Fraction
from random import Random

import pytest

import gelfand_lab as gl
from gelfand_lab import (ComplexRational, Morphism, StarPresentation,
                         verify_rewrite_trace)
from gelfand_lab.algebra import (DEFAULT_REWRITE_BUDGET, normalize_table,
                                 raw_involute, raw_mul)
from gelfand_lab.errors import (AlgebraError, MorphismError,
                                PresentationError, RewriteBudgetError)

from helpers import (circle, disk, line, nil, plain, rand_morphism, rand_poly,
                     rand_scalar)


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

def test_assemble_validation():
    with pytest.raises(PresentationError):
        StarPresentation.assemble("A", "ring", ("x",), (None,), ())
    with pytest.raises(PresentationError):
        StarPresentation.assemble("A", "algebra", ("x", "x"), (None, None), ())
    with pytest.raises(PresentationError):
        StarPresentation.assemble("A", "algebra", ("",), (None,), ())
    # a free pair is fine; a broken pairing is not
    StarPresentation.assemble("A", "star-algebra", ("a", "b"), (1, 0), ())
    with pytest.raises(PresentationError):
        StarPresentation.assemble("A", "star-algebra", ("a", "b"), (1, 1), ())
    with pytest.raises(PresentationError):
        StarPresentation.assemble("A", "star-algebra", ("a",), (None,), ())


def test_star_closure_rejected():
    # z^2 = 0 alone is not a *-closed relation set over a free pair
    with pytest.raises(PresentationError, match="adjoint"):
        gl.parse_presentation(
            "algebra A ; generator z : free ; relation z^2 ;")
    # adding the mirrored relation fixes it
    pres = gl.parse_presentation(
        "algebra A ; generator z : free ; relation z^2 ; "
        "relation adj(z)^2 ;")
    assert len(pres.relations) == 2


def test_confluence_rejected():
    with pytest.raises(PresentationError, match="confluen"):
        gl.parse_presentation(
            "algebra A ; generator x : selfadjoint ; "
            "relation x^2 - 1 ; relation x^2 - 2 ;")
    with pytest.raises(PresentationError, match="confluen"):
        gl.parse_presentation(
            "algebra A ; generator x, y : free ; "
            "relation x*y - 1 ; relation x^2 ;", mode="algebra")


def test_confluent_coprime_leads_accepted():
    pres = gl.parse_presentation(
        "algebra T ; generator x, y : selfadjoint ; "
        "relation x^2 - 1 ; relation y^2 - 1 ;")
    p = gl.parse_poly("(x*y)^2", pres)
    assert p == pres.one()


def test_name_blind_structural_equality():
    a = gl.parse_presentation("algebra A ; generator z : free ;")
    b = gl.parse_presentation("algebra B ; generator w : free ;")
    assert a == b
    assert hash(a) == hash(b)
    assert a != line()
    assert line() != nil()


def test_monomials_up_to():
    assert nil().monomials_up_to(4) == [(0,), (1,)]
    assert line().monomials_up_to(3) == [(0,), (1,), (2,), (3,)]
    d = disk().monomials_up_to(2)
    assert d[0] == (0, 0)
    assert len(d) == 6
    assert d == sorted(d, key=lambda m: (sum(m), m))


# ---------------------------------------------------------------------------
# normalization and traces
# ---------------------------------------------------------------------------

def test_normalization_examples():
    pres = nil()
    assert gl.parse_poly("x^2", pres).is_zero()
    assert gl.parse_poly("x^3 + x^2 + x", pres) == gl.parse_poly("x", pres)
    c = circle()
    assert gl.parse_poly("z*adj(z)", c) == c.one()
    assert gl.parse_poly("z^2*adj(z)", c) == gl.parse_poly("z", c)


def test_rewrite_budget():
    pres = StarPresentation.assemble(
        "Tiny", "star-algebra", ("x",), (0,),
        [{(2,): ComplexRational(1), (1,): ComplexRational(-1)}],
        budget=3)
    with pytest.raises(RewriteBudgetError):
        pres.poly({(50,): ComplexRational(1)})


def test_rewrite_trace_replays():
    rng = Random(11)
    for pres in (nil(), circle()):
        rules = pres.rules()
        for _ in range(40):
            raw = {}
            for _ in range(rng.randint(1, 5)):
                mono = tuple(rng.randint(0, 4)
                             for _ in pres.generators)
                raw[mono] = rand_scalar(rng)
            normal, steps = normalize_table(rules, dict(raw),
                                            DEFAULT_REWRITE_BUDGET,
                                            record=True)
            assert verify_rewrite_trace(pres, raw, normal, steps)


# ---------------------------------------------------------------------------
# ring and involution laws
# ---------------------------------------------------------------------------

def test_ring_laws_random():
    rng = Random(23)
    for pres in (line(), disk(), nil()):
        one = pres.one()
        zero = pres.zero()
        for _ in range(60):
            a = rand_poly(pres, rng)
            b = rand_poly(pres, rng)
            c = rand_poly(pres, rng)
            lam = rand_scalar(rng)
            assert a + b == b + a
            assert (a + b) + c == a + (b + c)
            assert a + zero == a
            assert a - a == zero
            assert a * one == a
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert (a * lam) * b == (a * b) * lam


def test_involution_laws_random():
    rng = Random(29)
    for pres in (line(), disk(), nil(), circle()):
        for _ in range(60):
            a = rand_poly(pres, rng)
            b = rand_poly(pres, rng)
            lam = rand_scalar(rng)
            assert a.involute().involute() == a
            assert (a * b).involute() == a.involute() * b.involute()
            assert (a + b).involute() == a.involute() + b.involute()
            assert (a * lam).involute() == a.involute() * lam.conjugate()


def test_involute_rejected_in_algebra_mode():
    p = plain()
    with pytest.raises(AlgebraError):
        p.gen("x").involute()


def test_poly_basics():
    pres = line()
    x = pres.gen("x")
    assert (x - x).is_zero()
    assert pres.zero().degree() == -1
    assert (x * x + x).degree() == 2
    assert (x + 1).constant_term() == ComplexRational(1)
    assert x.coeff((1,)) == ComplexRational(1)
    assert x ** 3 == x * x * x
    assert x + Fraction(1, 2) == x + ComplexRational(Fraction(1, 2))
    with pytest.raises(AlgebraError):
        x + disk().gen("z")


# ---------------------------------------------------------------------------
# the free / underlying adjunction
# ---------------------------------------------------------------------------

def test_free_star_structure():
    f = gl.free_star(plain())
    assert f.is_star
    assert f.generators == ("x", "adj(x)")
    assert f.adjoint == (1, 0)
    assert f == disk()  # structural equality, names aside


def test_free_doubles_and_underlying_preserves():
    for text, n in (("algebra P ; generator x : free ;", 1),
                    ("algebra P ; generator x, y : free ;", 2),
                    ("algebra P ; generator x, y, w : free ;", 3)):
        p = plain(text)
        f = gl.free_star(p)
        assert len(f.generators) == 2 * n
        u = gl.underlying(f)
        assert len(u.generators) == 2 * n
        assert all(a is None for a in u.adjoint)


def test_underlying_matches_plain_pair():
    u = gl.underlying(disk())
    two = plain("algebra P ; generator z, w : free ;")
    assert u == two


def test_free_star_lifts_relations():
    p = gl.parse_presentation("algebra P ; generator x : free ; "
                              "relation x^2 ;", mode="algebra")
    f = gl.free_star(p)
    assert len(f.relations) == 2  # x^2 and its mirror adj(x)^2
    x = f.gen("x")
    ax = f.gen("adj(x)")
    assert (x * x).is_zero()
    assert (ax * ax).is_zero()


def test_reinterpret_round_trip():
    rng = Random(31)
    star = disk()
    under = gl.underlying(star)
    for _ in range(30):
        a = rand_poly(star, rng)
        b = gl.reinterpret(a, under)
        assert b.pres == under
        assert gl.reinterpret(b, star) == a


def test_extend_hom_round_trip_and_uniqueness():
    rng = Random(37)
    source = plain("algebra P ; generator x, y : free ;")
    target = disk()
    under = gl.underlying(target)
    for _ in range(25):
        f = rand_morphism(source, under, rng)
        lifted = gl.extend_hom(f, target)
        assert lifted.source == gl.free_star(source)
        assert lifted.target == target
        ok, _ = gl.is_star_hom(lifted)
        assert ok
        back = gl.restrict_hom(lifted, source)
        assert all(p == q for p, q in zip(back.images, f.images))
        # the lift is determined on partner generators by the involution
        free_src = gl.free_star(source)
        for i, g in enumerate(free_src.generators):
            j = free_src.partner(i)
            assert lifted.image(j) == lifted.image(i).involute()


def test_extend_hom_requires_underlying_target():
    f = rand_morphism(plain(), line(), Random(1))
    with pytest.raises(MorphismError):
        gl.extend_hom(f, disk())  # target's underlying has two generators


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

def test_morphism_must_kill_relations():
    src = nil()
    with pytest.raises(MorphismError, match="relation"):
        Morphism.create(src, line(), {"x": line().gen("x")}, star=True)
    ok = Morphism.create(src, nil(), {"x": nil().gen("x")}, star=True)
    assert ok.image(0) == nil().gen("x")


def test_morphism_star_validation():
    d = disk()
    z, az = d.gen("z"), d.gen("adj(z)")
    with pytest.raises(MorphismError, match="compatible"):
        Morphism.create(d, d, {"z": z, "adj(z)": z}, star=True)
    f = Morphism.create(d, d, {"z": z, "adj(z)": z}, star=False)
    ok, witness = gl.is_star_hom(f)
    assert not ok and witness == "z"
    g = Morphism.create(d, d, {"z": az, "adj(z)": z}, star=True)
    assert gl.is_star_hom(g) == (True, None)


def test_morphism_apply_and_compose():
    rng = Random(41)
    d = disk()
    f = rand_morphism(d, d, rng)
    g = rand_morphism(d, d, rng)
    h = gl.compose(g, f)
    for _ in range(20):
        a = rand_poly(d, rng, max_degree=3)
        assert h(a) == g(f(a))
        assert f(a.involute()) == f(a).involute()
    ident = gl.identity_morphism(d)
    assert gl.compose(ident, f)(d.gen("z")) == f(d.gen("z"))
    with pytest.raises(AlgebraError):
        f(line().gen("x"))


def test_underlying_morphism():
    rng = Random(43)
    f = rand_morphism(disk(), disk(), rng)
    uf = gl.underlying_morphism(f)
    assert not uf.source.is_star
    a = rand_poly(disk(), rng)
    assert uf(gl.reinterpret(a, uf.source)) == gl.reinterpret(f(a), uf.target)
