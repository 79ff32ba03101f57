import itertools
import random

import pytest

from corpus import random_function, skew_tensor, so3_structure
from gradedcontact.calculus import coordinate_field
from gradedcontact.contact import CONTACT, check_contact, master_check
from gradedcontact.models import (
    CourantJacobiData,
    FrameAlgebroid,
    build_cj_contact,
    check_courant_jacobi,
    standard_cj,
    wade_bracket,
)

HYPERBOLIC = [[0, 1], [1, 0]]


def master_residual(D):
    M = build_cj_contact(D)
    return master_check(M.contact, M.S)


def test_data_validation():
    with pytest.raises(ValueError):
        CourantJacobiData([[1, 2], [0, 1]])
    with pytest.raises(ValueError):
        CourantJacobiData([[1, 1], [1, 1]])


def test_abelian_point_case():
    D = CourantJacobiData(HYPERBOLIC)
    assert check_courant_jacobi(D).ok
    assert master_residual(D).is_zero()


def test_so3_point_case():
    g, T = so3_structure()
    D = CourantJacobiData(g, T=T)
    assert D.is_canonical()
    assert check_courant_jacobi(D).ok
    assert master_residual(D).is_zero()


def test_distinguished_vector_violates_axiom_3():
    # raw T = 0 with b != 0 is not determined by its skew part
    D = CourantJacobiData(HYPERBOLIC, b=[1, 0])
    chk = check_courant_jacobi(D)
    assert not chk.ok
    assert chk.residuals[3]
    assert not D.is_canonical()


def test_distinguished_vector_canonical():
    zero = skew_tensor(2, {})
    D = CourantJacobiData.from_skew(HYPERBOLIC, zero, b=[1, 0])
    assert check_courant_jacobi(D).ok and master_residual(D).is_zero()
    g, T = so3_structure()
    D = CourantJacobiData.from_skew(g, T, b=[1, 0, 0])
    assert not check_courant_jacobi(D).ok
    assert not master_residual(D).is_zero()


def test_symmetric_part_is_invisible_to_S():
    g, T = so3_structure()
    D = CourantJacobiData(g, T=T)
    T2 = [[[c for c in row] for row in plane] for plane in T]
    T2[0][0][1] = 1
    D2 = CourantJacobiData(g, T=T2)
    assert not check_courant_jacobi(D2).ok
    assert build_cj_contact(D2).S == build_cj_contact(D).S


def test_cj_chart_and_reeb():
    g, T = so3_structure()
    M = build_cj_contact(CourantJacobiData(g, T=T))
    assert M.n == 2 and M.S.degree() == 3
    assert check_contact(M.contact) == CONTACT
    assert M.contact.reeb == coordinate_field(M.chart, "theta").scale(2)


def test_point_case_equivalence_corpus():
    rng = random.Random(1)
    for _ in range(40):
        r = rng.choice([1, 2, 3])
        if r == 2 and rng.random() < 0.5:
            g = HYPERBOLIC
        else:
            g = [[rng.choice([1, -1, 2]) if i == j else 0 for j in range(r)] for i in range(r)]
        vals = {t: rng.choice([0, 1, -1]) for t in itertools.combinations(range(r), 3)}
        b = [rng.choice([0, 0, 1, -1]) for _ in range(r)]
        D = CourantJacobiData.from_skew(g, skew_tensor(r, vals), b=b)
        assert check_courant_jacobi(D).ok == master_residual(D).is_zero()


def test_standard_bracket_regression_values():
    W = standard_cj(1)
    x = W.base.gen("x1")
    assert wade_bracket(W.section(X=[1]), W.section(xi=[1])).is_zero()
    out = wade_bracket(W.section(f=x, g=x * x), W.section(f=1 + x, g=x))
    assert out == W.section(xi=[3 * x + 2 * x * x], g=x * x)


def random_section(rng, W):
    B = W.base

    def rf():
        return random_function(rng, B, 0, 2)

    return W.section([rf() for _ in range(W.dim)], rf(), [rf() for _ in range(W.dim)], rf())


def test_standard_axiom_3_random():
    rng = random.Random(9)
    for d in (1, 2):
        W = standard_cj(d)
        for _ in range(5):
            s = random_section(rng, W)
            assert W.axiom_residuals([s], [])[3] == []


def test_standard_frame_data():
    for d in (1, 2):
        W = standard_cj(d)
        D = W.frame_data()
        assert D.is_canonical()
        assert check_courant_jacobi(D).ok
        assert master_residual(D).is_zero()


def test_frame_bracket_matches_standard():
    rng = random.Random(3)
    W = standard_cj(1)
    F = FrameAlgebroid(W.frame_data())

    def to_frame(s):
        comps = list(s.X) + [s.f] + list(s.xi) + [s.g]
        return {k: v for k, v in enumerate(comps) if v}

    for _ in range(5):
        s1, s2 = random_section(rng, W), random_section(rng, W)
        assert to_frame(W.bracket(s1, s2)) == F.bracket(to_frame(s1), to_frame(s2))


def test_anchor_perturbation_on_r1():
    W = standard_cj(1)
    D0 = W.frame_data()
    x = D0.base.gen("x1")
    a = [row[:] for row in D0.a]
    a[2][0] = a[2][0] + x
    D = CourantJacobiData.from_skew(D0.g, D0.skew_part(), a, D0.b, D0.names)
    assert not check_courant_jacobi(D).ok
    assert not master_residual(D).is_zero()
