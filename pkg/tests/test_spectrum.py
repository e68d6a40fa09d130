from fractions import Fraction
from random import Random

import pytest

import gelfand_lab as gl
from gelfand_lab import (BoxSampler, Character, CompactBox, ComplexRational,
                         GridSampler, SampleSet)
from gelfand_lab.errors import (AlgebraError, CharacterError,
                                UnsupportedError)

from helpers import (circle, disk, line, nil, plain, rand_character,
                     rand_morphism, rand_poly)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_validation_violations():
    with pytest.raises(CharacterError) as exc:
        gl.validate_character(line(), {})
    assert exc.value.violation == "coverage"
    with pytest.raises(CharacterError) as exc:
        gl.validate_character(line(), {"x": ComplexRational(1),
                                       "y": ComplexRational(1)})
    assert exc.value.violation == "coverage"
    with pytest.raises(CharacterError) as exc:
        gl.validate_character(line(), {"x": ComplexRational(0, 1)})
    assert exc.value.violation == "reality"
    d = disk()
    with pytest.raises(CharacterError) as exc:
        gl.validate_character(d, {"z": ComplexRational(1, 1),
                                  "adj(z)": ComplexRational(1, 1)})
    assert exc.value.violation == "conjugacy"
    with pytest.raises(CharacterError) as exc:
        gl.validate_character(nil(), {"x": ComplexRational(2)})
    assert exc.value.violation == "relation"
    # the only character of the nilpotent line is x = 0
    c = gl.validate_character(nil(), {"x": ComplexRational(0)})
    assert c.exact


def test_validation_float_tolerance():
    c = gl.validate_character(line(), {"x": complex(2.0, 1e-14)})
    assert not c.exact
    with pytest.raises(CharacterError):
        gl.validate_character(line(), {"x": complex(2.0, 1e-6)})
    # circle: |z| = 1 within tolerance only
    ok = gl.validate_character(circle(), {"z": complex(0.6, 0.8),
                                          "adj(z)": complex(0.6, -0.8)})
    assert not ok.exact
    with pytest.raises(CharacterError):
        gl.validate_character(circle(), {"z": complex(0.6, 0.9),
                                         "adj(z)": complex(0.6, -0.9)})


def test_algebra_mode_characters_are_unconstrained():
    p = plain()
    c = gl.validate_character(p, {"x": ComplexRational(0, 5)})
    assert c.value("x") == ComplexRational(0, 5)


def test_validation_fills_missing_partner():
    c = gl.validate_character(disk(), {"z": ComplexRational(1, 2)})
    assert c.value("adj(z)") == ComplexRational(1, -2)
    assert c.exact
    # float side, filled partner keeps the float flavor
    f = gl.validate_character(disk(), {"adj(z)": complex(0.5, -0.25)})
    assert f.value("z") == complex(0.5, 0.25)
    assert not f.exact
    # a wrong explicit partner is still rejected
    with pytest.raises(CharacterError, match="conjugate"):
        gl.validate_character(disk(), {"z": ComplexRational(1, 2),
                                       "adj(z)": ComplexRational(1, 2)})


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def test_eval_matches_direct_substitution():
    rng = Random(5)
    d = disk()
    for _ in range(50):
        a = rand_poly(d, rng)
        p = rand_character(d, rng)
        z = complex(p.value("z"))
        got = complex(gl.gelfand_eval(a, p))
        want = sum(complex(c) * z ** m[0] * z.conjugate() ** m[1]
                   for m, c in a.terms)
        assert abs(got - want) < 1e-6 * max(1.0, abs(want))


def test_transform_is_star_homomorphism():
    rng = Random(9)
    d = disk()
    for _ in range(100):
        a, b = rand_poly(d, rng), rand_poly(d, rng)
        p = rand_character(d, rng)
        ea, eb = gl.gelfand_eval(a, p), gl.gelfand_eval(b, p)
        assert gl.gelfand_eval(a * b, p) == ea * eb
        assert gl.gelfand_eval(a + b, p) == ea + eb
        assert gl.gelfand_eval(a.involute(), p) == ea.conjugate()
    assert gl.gelfand_eval(d.one(), rand_character(d, rng)) == ComplexRational(1)


def test_separating_generator():
    d = disk()
    p = gl.validate_character(d, {"z": ComplexRational(1),
                                  "adj(z)": ComplexRational(1)})
    q = gl.validate_character(d, {"z": ComplexRational(2),
                                  "adj(z)": ComplexRational(2)})
    assert gl.separating_generator(p, q) == "z"
    assert gl.separating_generator(p, p) is None


# ---------------------------------------------------------------------------
# pushforward, naturality, correspondence
# ---------------------------------------------------------------------------

def test_pushforward_contravariance():
    rng = Random(13)
    d = disk()
    for _ in range(100):
        f = rand_morphism(d, d, rng)
        g = rand_morphism(d, d, rng)
        p = rand_character(d, rng)
        left = gl.pushforward(gl.compose(g, f), p)
        right = gl.pushforward(f, gl.pushforward(g, p))
        assert left.values == right.values


def test_pushforward_requires_star_morphism():
    d = disk()
    z = d.gen("z")
    f = gl.Morphism.create(d, d, {"z": z, "adj(z)": z}, star=False)
    p = rand_character(d, Random(3))
    with pytest.raises(AlgebraError, match="star|\\*-"):
        gl.pushforward(f, p)


def test_naturality_square():
    rng = Random(17)
    d = disk()
    under = gl.underlying(d)
    for _ in range(100):
        f = rand_morphism(d, d, rng)
        p = rand_character(d, rng)
        top = gl.naturality_inclusion(gl.pushforward(f, p))
        uf = gl.underlying_morphism(f)
        bottom = gl.pushforward(uf, gl.naturality_inclusion(p))
        assert top.pres == under and bottom.pres == under
        assert top.values == bottom.values


def test_free_correspondence_bijection():
    rng = Random(19)
    algebra_pres = plain("algebra P ; generator u, v : free ;")
    free = gl.free_star(algebra_pres)
    for _ in range(100):
        p = rand_character(algebra_pres, rng)
        q = gl.extend_character_free(algebra_pres, p)
        assert q.pres == free
        # partner slots carry conjugates
        for i in range(len(free.generators)):
            j = free.partner(i)
            assert q.values[j] == q.values[i].conjugate()
        back = gl.restrict_character_free(algebra_pres, q)
        assert back.values == p.values
        # and the other way around
        q2 = rand_character(free, rng)
        p2 = gl.restrict_character_free(algebra_pres, q2)
        assert gl.extend_character_free(algebra_pres, p2).values == q2.values


# ---------------------------------------------------------------------------
# boxes, samplers, compactness
# ---------------------------------------------------------------------------

def test_box_basics():
    b = CompactBox.from_intervals(line(), [(Fraction(0), Fraction(2))])
    assert b.dimension() == 1
    assert b.volume() == 2
    pts = b.grid_points(5)
    assert len(pts) == 5
    assert [p.value("x") for p in pts] == [0, Fraction(1, 2), 1,
                                           Fraction(3, 2), 2]
    assert b.modulus_bound(0) == 2


def test_box_rejects_relations():
    with pytest.raises(UnsupportedError, match="relation"):
        CompactBox.from_intervals(nil(), [(Fraction(0), Fraction(1))])


def test_box_complex_axes_and_modulus():
    d = disk()
    b = gl.parse_box("z = [-1, 2] x [0, 1]", d)
    assert b.dimension() == 2
    # bound covers |re| + |im| over the rectangle
    assert b.modulus_bound(0) == 3
    assert b.modulus_bound(1) == 3  # partner delegates
    grid = b.grid_points(3)
    assert len(grid) == 9
    assert all(p.values[1] == p.values[0].conjugate() for p in grid)


def test_coefficient_bound_known_value():
    p = line()
    a = gl.parse_poly("2*x^2 - x + 1", p)
    box = gl.parse_box("x = [-1, 1]", p)
    assert gl.coefficient_bound(a, box) == 4


def test_box_sampler_reproducible_and_valid():
    d = disk()
    box = gl.parse_box("z = [-1, 1] x [-1, 1]", d)
    s1 = BoxSampler(box, seed=42)
    s2 = BoxSampler(box, seed=42)
    a = s1.sample(20)
    b = s2.sample(20)
    assert [c.values for c in a] == [c.values for c in b]
    assert all(c.exact for c in a)
    # replay semantics: a longer draw starts with the same prefix
    longer = BoxSampler(box, seed=42).sample(40)
    assert [c.values for c in longer[:20]] == [c.values for c in a]


def test_grid_sampler_filters_candidates():
    candidates = [{"x": ComplexRational(Fraction(k, 10))}
                  for k in range(-10, 11)]
    s = GridSampler(nil(), candidates, seed=7)
    chars = s.sample(100)
    assert len(chars) == 100
    assert all(c.value("x") == 0 for c in chars)
    with pytest.raises(CharacterError, match="candidate"):
        GridSampler(nil(), [{"x": ComplexRational(1)}], seed=7)


def test_compactness_certified_box():
    p = line()
    box = gl.parse_box("x = [-2, 2]", p)
    a = gl.parse_poly("x^2 + 1", p)
    report = gl.relative_compactness_check(box, [a])
    assert report.certified
    assert report.subject_kind == "box"
    assert report.unbounded_witnesses == ()
    assert dict(report.bounds)[gl.format_poly(a)] == 5.0


def test_compactness_sampled_threshold():
    p = line()
    chars = [gl.validate_character(p, {"x": ComplexRational(k)})
             for k in range(1, 101)]
    subject = SampleSet(tuple(chars), label="integers 1..100")
    a = p.gen("x")
    default = gl.relative_compactness_check(subject, [a])
    assert not default.certified
    assert default.unbounded_witnesses == ()
    tight = gl.relative_compactness_check(subject, [a], threshold=50)
    assert gl.format_poly(a) in tight.unbounded_witnesses
    assert "not relatively compact" in tight.verdict


# ---------------------------------------------------------------------------
# nilpotency and the radical
# ---------------------------------------------------------------------------

def test_is_nilpotent():
    n = nil()
    assert gl.is_nilpotent(n.gen("x")) == (True, 2)
    assert gl.is_nilpotent(n.zero()) == (True, 1)
    assert gl.is_nilpotent(line().gen("x")) == (False, None)
    # x + x^2 over x^3 = 0
    cube = gl.parse_presentation(
        "algebra C ; generator x : selfadjoint ; relation x^3 ;")
    a = gl.parse_poly("x + x^2", cube)
    assert gl.is_nilpotent(a) == (True, 3)


def test_radical_vanishing_on_nil():
    candidates = [{"x": ComplexRational(Fraction(k, 7))}
                  for k in range(-7, 8)]
    sampler = GridSampler(nil(), candidates, seed=3)
    report = gl.radical_vanishing_check(nil().gen("x"), sampler, count=500)
    assert report.vanishes
    assert report.nilpotent and report.exponent == 2
    assert report.max_abs == 0.0
    assert report.witness is None


def test_radical_witness_on_line():
    box = gl.parse_box("x = [-1, 1]", line())
    sampler = BoxSampler(box, seed=11)
    report = gl.radical_vanishing_check(line().gen("x"), sampler, count=200)
    assert not report.vanishes
    assert report.witness is not None
    assert not report.nilpotent
    assert report.max_abs > 0
