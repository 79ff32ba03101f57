import random

import pytest

from corpus import contact_r3, darboux_n1, darboux_n2, random_function
from gradedcontact.algebra import Chart, InhomogeneousError
from gradedcontact.calculus import Derivation, commutator, contract, coordinate_field, d, lie
from gradedcontact.contact import (
    CONTACT,
    DEGENERATE,
    ContactChart,
    NotContact,
    cartan_bracket,
    check_contact,
    constant_kernel,
    flat,
    hamiltonian_vf,
    jacobi_bracket,
    jacobi_bracket_via_fields,
    master_check,
)
from gradedcontact.models import JacobiPair, base_chart, build_jacobi_contact

K1, K2, K3 = darboux_n1(), darboux_n2(), contact_r3()


def sign(k):
    return -1 if k % 2 else 1


def test_flat_examples():
    assert flat(K1.reeb, K1) == K1.alpha
    assert flat(Derivation(K1.chart), K1) == K1.chart.zero()
    assert flat(coordinate_field(K1.chart, "theta"), K1) == K1.alpha


def test_check_contact_examples():
    assert check_contact(K1) == CONTACT
    assert check_contact(K2) == CONTACT
    assert check_contact(K3) == CONTACT
    C = Chart([("x", 0), ("p", 1), ("theta", 1)])
    degenerate = ContactChart(C, C.gen("dtheta"))
    assert check_contact(degenerate) == DEGENERATE
    assert constant_kernel(degenerate)
    with pytest.raises(NotContact):
        degenerate.reeb


def test_reeb_examples():
    assert K1.reeb == coordinate_field(K1.chart, "theta")
    assert K2.reeb == coordinate_field(K2.chart, "theta").scale(2)
    assert K3.reeb == coordinate_field(K3.chart, "z")
    for K in (K1, K2, K3):
        assert contract(K.reeb, K.alpha) == K.chart.one()
        assert contract(K.reeb, K.dalpha).is_zero()
        assert K.reeb.degree == -K.n


def test_one_gives_reeb():
    for K in (K1, K2, K3):
        assert hamiltonian_vf(K, K.chart.one()) == K.reeb


def back_substitute(K, f):
    X = hamiltonian_vf(K, f)
    k, n = f.degree(), K.n
    assert contract(X, K.alpha) == f
    expected = K.reeb(f) * K.alpha * sign(n * (k - 1)) - d(f) * sign(k - n)
    assert contract(X, K.dalpha) == expected
    if f:
        assert X.degree == k - n
    return X


def test_hamiltonian_examples():
    back_substitute(K1, K1.chart.gen("x"))
    back_substitute(K3, K3.chart.gen("x"))


def test_jacobi_bracket_examples():
    x = K1.chart.gen("x")
    assert jacobi_bracket(K1, x, x).is_zero()
    rng = random.Random(4)
    for K in (K1, K2, K3):
        one = K.chart.one()
        for _ in range(5):
            g = random_function(rng, K.chart, rng.randint(0, 3))
            assert jacobi_bracket(K, one, g) == K.reeb(g) - sign(K.n) * K.reeb(one) * g
            assert jacobi_bracket(K, one, g) == K.reeb(g)


def test_cartan_bracket_examples():
    rng = random.Random(8)
    for K in (K1, K2, K3):
        one = K.chart.one()
        for _ in range(5):
            f = random_function(rng, K.chart, rng.randint(0, 3))
            g = random_function(rng, K.chart, rng.randint(0, 3))
            assert cartan_bracket(K, one, g) == K.reeb(g)
            assert cartan_bracket(K, f, one).is_zero()
            diff = cartan_bracket(K, f, g) - jacobi_bracket(K, f, g)
            assert diff == K.reeb(f) * g * sign(K.n * (f.degree() + 1))


def test_brackets_reject_mixed():
    x, p = K1.chart.gens("x", "p")
    with pytest.raises(InhomogeneousError):
        jacobi_bracket(K1, x + p, x)
    with pytest.raises(InhomogeneousError):
        hamiltonian_vf(K1, x + p)


def test_bracket_properties():
    rng = random.Random(3)
    for K in (K1, K2, K3):
        n = K.n
        for _ in range(12):
            f = random_function(rng, K.chart, rng.randint(0, 3))
            g = random_function(rng, K.chart, rng.randint(0, 3))
            h = random_function(rng, K.chart, rng.randint(0, 2))
            Xf, Xg = hamiltonian_vf(K, f), hamiltonian_vf(K, g)
            J = jacobi_bracket(K, f, g)
            assert J == jacobi_bracket_via_fields(K, f, g)
            assert hamiltonian_vf(K, J) == commutator(Xf, Xg)
            assert lie(Xf, K.alpha) == sign(n * (f.degree() - 1)) * K.reeb(f) * K.alpha
            # right Leibniz rule for the Cartan bracket
            lhs = cartan_bracket(K, f, g * h)
            rhs = cartan_bracket(K, f, g) * h + sign((f.degree() - n) * g.degree()) * g * cartan_bracket(K, f, h)
            assert lhs == rhs


def test_ungraded_leibniz_anomaly():
    # {f, gh}_J = {f, g}_J h + g {f, h}_J + R(f) g h
    rng = random.Random(11)
    for _ in range(15):
        f, g, h = (random_function(rng, K3.chart, 0, max_terms=3) for _ in range(3))
        lhs = jacobi_bracket(K3, f, g * h)
        rhs = jacobi_bracket(K3, f, g) * h + g * jacobi_bracket(K3, f, h) + K3.reeb(f) * g * h
        assert lhs == rhs


def test_ungraded_classical_formulas():
    x, y, z = K3.chart.gens("x", "y", "z")
    assert hamiltonian_vf(K3, K3.chart.one()) == coordinate_field(K3.chart, "z")
    # X_f(g) - R(f) g with all degrees zero
    for f, g in ((x, y), (y * z, x), (z, x * y)):
        assert jacobi_bracket(K3, f, g) == hamiltonian_vf(K3, f)(g) - K3.reeb(f) * g


def test_master_examples():
    assert master_check(K1, K1.chart.zero()).is_zero()
    B = base_chart(["x1", "x2"])
    one, zero, x1 = B.one(), B.zero(), B.gen("x1")
    constant = build_jacobi_contact(JacobiPair([[zero, one], [-one, zero]], [zero, zero]))
    assert master_check(constant.contact, constant.S).is_zero()
    broken = build_jacobi_contact(JacobiPair([[zero, one], [-one, zero]], [x1, zero]))
    assert not master_check(broken.contact, broken.S).is_zero()


def test_master_rejects_wrong_degree():
    with pytest.raises(InhomogeneousError):
        master_check(K1, K1.chart.gen("x"))
