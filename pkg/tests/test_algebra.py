import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from corpus import random_function, random_poly
from gradedcontact.algebra import (
    MIXED,
    Chart,
    ChartError,
    Poly,
    UnknownGenerator,
    degree_of,
    euler_apply,
    laurent_inverse,
    mono_mul,
    normalize,
)

C = Chart([("x", 0), ("p", 1), ("q", 1), ("theta", 1), ("w", 2)])
x, p, q, theta, w = C.gens("x", "p", "q", "theta", "w")


def test_chart_interleaves_differentials():
    names = [g.name for g in C.generators]
    assert names[:4] == ["x", "dx", "p", "dp"]
    assert C.generators[C.gen_index("dp")].parity == 0
    assert C.generators[C.gen_index("dx")].parity == 1


def test_chart_rejects_bad_declarations():
    with pytest.raises(ChartError):
        Chart([("x", 0), ("x", 1)])
    with pytest.raises(ChartError):
        Chart([("x", -1)])
    with pytest.raises(ChartError):
        Chart([("x", 1)], exponential=("u", "x"))
    with pytest.raises(ChartError):
        Chart([("x", 0)], exponential=("u", "t"))
    with pytest.raises(UnknownGenerator):
        C.gen("nope")


def test_normalize_examples():
    assert normalize(C, ["theta", "theta"])[0] == 0
    sign, m = normalize(C, ["q", "p"])
    assert sign == -1 and Poly(C, {m: 1}) == p * q
    sign, m = normalize(C, ["p", "x"])
    assert sign == 1 and Poly(C, {m: 1}) == x * p


def test_normalize_idempotent():
    rng = random.Random(0)
    for _ in range(50):
        f = random_poly(rng, C, rng.randint(0, 2), rng.randint(0, 4))
        for m in f.terms:
            word = []
            for i, e in enumerate(m):
                word += [C.generators[i].name] * e
            assert normalize(C, word) == (1, m)


def test_normalize_unknown_generator():
    with pytest.raises(UnknownGenerator):
        normalize(C, ["x", "zz"])


def test_mul_examples():
    assert p * q + q * p == C.zero()
    assert (1 + theta) * (1 - theta) == C.one()
    assert (x * p) * (x * q) == x * x * p * q
    assert theta * theta == C.zero()
    assert w * w == Poly(C, {C.generator_monomial(C.gen_index("w"), 2): 1})


def test_mul_rejects_other_chart():
    D = Chart([("x", 0)])
    with pytest.raises(ChartError):
        x * D.gen("x")


def test_odd_square_vanishes_in_mono_mul():
    m = C.generator_monomial(C.gen_index("p"))
    assert mono_mul(C, m, m)[0] == 0


def test_degree_examples():
    D = Chart([("x", 0), ("p", 1), ("theta", 1)])
    xx, pp, tt = D.gens("x", "p", "theta")
    assert degree_of(xx * pp * tt) == 2
    assert degree_of(1 + pp) == MIXED
    assert degree_of(D.zero()) == 0
    assert (xx * pp * tt).bidegree() == (0, 2)
    assert (D.gen("dp") * tt).bidegree() == (1, 2)


def test_euler_examples():
    D = Chart([("x", 0), ("p", 1), ("theta", 1)])
    xx, pp, tt = D.gens("x", "p", "theta")
    assert euler_apply(xx * pp * tt) == 2 * xx * pp * tt
    assert euler_apply(xx * xx + 3) == D.zero()
    assert euler_apply(pp + pp * tt) == pp + 2 * pp * tt


def test_laurent_exponential():
    E = Chart([("x", 0), ("t", 0)], exponential=("u", "t"))
    u = E.gen("u")
    inv = laurent_inverse(u)
    assert u * inv == E.one()
    assert laurent_inverse(3 * u * u) * (3 * u * u) == E.one()
    assert (u ** -2) * u * u == E.one()
    with pytest.raises(ValueError):
        laurent_inverse(u + 1)
    with pytest.raises(ValueError):
        laurent_inverse(E.gen("x"))


def test_map_generators_is_a_morphism():
    D = Chart([("a", 1), ("b", 1)])
    images = {g.name: D.zero() for g in C.generators}
    images.update(p=D.gen("a"), q=D.gen("b"))
    f = p * q + 2 * p
    assert f.map_generators(D, images) == D.gen("a") * D.gen("b") + 2 * D.gen("a")
    with pytest.raises(ChartError):
        p.map_generators(D, {"p": D.gen("a") * D.gen("b")})


def test_to_string_and_evaluate():
    f = Fraction(1, 2) * x * x - p * q + 3
    assert f.to_string() == "3 + 1/2*x^2 - p*q"
    D = Chart([("x", 0), ("y", 0)])
    assert (D.gen("x") * D.gen("y") + 1).evaluate({"x": 2, "y": Fraction(1, 3)}) == Fraction(5, 3)


def test_zero_has_no_terms():
    f = x * p - x * p
    assert f.terms == {} and not f and f.is_zero()


@st.composite
def homogeneous(draw):
    seed = draw(st.integers(0, 10**6))
    deg = draw(st.integers(0, 4))
    return random_function(random.Random(seed), C, deg, max_terms=3)


@settings(max_examples=60, deadline=None)
@given(homogeneous(), homogeneous(), homogeneous())
def test_associative_and_graded_commutative(f, g, h):
    assert (f * g) * h == f * (g * h)
    kf, kg = f.degree(), g.degree()
    assert f * g == (-1) ** ((kf * kg) % 2) * (g * f)


@settings(max_examples=60, deadline=None)
@given(homogeneous(), homogeneous())
def test_euler_is_a_derivation(f, g):
    assert euler_apply(f * g) == euler_apply(f) * g + f * euler_apply(g)


@settings(max_examples=40, deadline=None)
@given(homogeneous(), homogeneous())
def test_degree_additive(f, g):
    if f * g:
        assert degree_of(f * g) == degree_of(f) + degree_of(g)
