"""Seeded random graded objects shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from gradedcontact.algebra import COORDINATE, DIFFERENTIAL, Chart, Poly
from gradedcontact.calculus import Derivation


@lru_cache(maxsize=None)
def monomials(chart: Chart, form_degree: int, degree: int, max_weightless: int = 2):
    """All monomials of bidegree (form_degree, degree).

    Generators of internal degree 0 (degree-0 coordinates) are capped at
    ``max_weightless`` factors in total; ``u`` is never used.
    """
    gens = [
        (i, g) for i, g in enumerate(chart.generators) if g.kind in (COORDINATE, DIFFERENTIAL)
    ]
    out = []

    def rec(k, p, l, w, acc):
        if k == len(gens):
            if p == 0 and l == 0:
                m = [0] * chart.size
                for i, e in acc:
                    m[i] = e
                out.append(tuple(m))
            return
        i, g = gens[k]
        fd, deg = g.form_degree, g.degree
        emax = 1 if g.parity else 99
        e = 0
        while e <= emax:
            if e * fd > p or e * deg > l:
                break
            if deg == 0 and fd == 0 and e > max_weightless - w:
                break
            rec(k + 1, p - e * fd, l - e * deg, w + (e if deg == 0 and fd == 0 else 0),
                acc + ([(i, e)] if e else []))
            if fd == 0 and deg == 0 and e >= max_weightless:
                break
            e += 1

    rec(0, form_degree, degree, 0, [])
    return tuple(out)


def rand_coeff(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))


def random_poly(rng, chart, form_degree, degree, max_terms=3, max_weightless=2) -> Poly:
    monos = monomials(chart, form_degree, degree, max_weightless)
    if not monos:
        return chart.zero()
    picks = rng.sample(monos, min(len(monos), rng.randint(1, max_terms)))
    return Poly(chart, {m: rand_coeff(rng) for m in picks})


def random_function(rng, chart, degree, max_terms=3, max_weightless=2) -> Poly:
    return random_poly(rng, chart, 0, degree, max_terms, max_weightless)


def random_field(rng, chart, degree, max_terms=2, density=0.7) -> Derivation:
    action = {}
    for name, zdeg in chart.coordinates:
        if rng.random() < density:
            val = random_function(rng, chart, degree + zdeg, max_terms)
            if val:
                action[name] = val
    return Derivation(chart, action)


# named charts ---------------------------------------------------------------


def darboux_n1():
    """``alpha = p dx + d theta`` with degrees (0, 1, 1)."""
    from gradedcontact.contact import ContactChart

    C = Chart([("x", 0), ("p", 1), ("theta", 1)], n=1)
    p, dx, dth = C.gens("p", "dx", "dtheta")
    return ContactChart(C, p * dx + dth)


def darboux_n2():
    """``alpha = p dx + (v dw + w dv)/2 + d theta / 2`` (hyperbolic pairing)."""
    from gradedcontact.contact import ContactChart

    C = Chart([("x", 0), ("v", 1), ("w", 1), ("p", 2), ("theta", 2)], n=2)
    v, w, p, dx, dv, dw, dth = C.gens("v", "w", "p", "dx", "dv", "dw", "dtheta")
    half = Fraction(1, 2)
    return ContactChart(C, p * dx + (v * dw + w * dv) * half + dth * half)


def contact_r3():
    """Ungraded ``alpha = dz - y dx`` on R^3."""
    from gradedcontact.contact import ContactChart

    C = Chart([("x", 0), ("y", 0), ("z", 0)])
    y, dx, dz = C.gens("y", "dx", "dz")
    return ContactChart(C, dz - y * dx)


def random_homogeneous_pair(rng, K, max_degree=3):
    f = random_function(rng, K.chart, rng.randint(0, max_degree))
    g = random_function(rng, K.chart, rng.randint(0, max_degree))
    return f, g


def random_jacobi_pair(rng, d):
    from gradedcontact.models import JacobiPair, base_chart, default_names

    B = base_chart(default_names(d))
    L = [[B.zero()] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            c = random_function(rng, B, 0, max_terms=2) if rng.random() < 0.8 else B.zero()
            L[i][j] = c
            L[j][i] = -c
    E = [random_function(rng, B, 0, max_terms=2) if rng.random() < 0.6 else B.zero() for _ in range(d)]
    return JacobiPair(L, E)


def contact_r3_jacobi_pair():
    """``E = d_z``, ``Lambda = (d_x + y d_z) ^ d_y`` from ``alpha = dz - y dx``."""
    from gradedcontact.models import JacobiPair, base_chart

    B = base_chart(["x", "y", "z"])
    y = B.gen("y")
    z0, one = B.zero(), B.one()
    return JacobiPair([[z0, one, z0], [-one, z0, -y], [z0, y, z0]], [z0, z0, one], ["x", "y", "z"])


def skew_tensor(r, entries):
    """Totally antisymmetric r x r x r array from values on increasing triples."""
    A = [[[0] * r for _ in range(r)] for _ in range(r)]
    for (i, j, k), v in entries.items():
        for (a, b, c), s in (
            ((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
            ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1),
        ):
            A[a][b][c] = s * v
    return A


def so3_structure():
    """Identity pairing and ``T = epsilon`` on R^3."""
    eps = {(0, 1, 2): 1}
    return [[1, 0, 0], [0, 1, 0], [0, 0, 1]], skew_tensor(3, eps)
