"""Contact charts: flat map, Reeb field, contact Hamiltonians and brackets.

The same code handles ordinary contact manifolds (all coordinates of degree
0, ``n = 0``) and graded contact N-manifolds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import sympy

from .algebra import MIXED, Chart, InhomogeneousError, Poly
from .calculus import Derivation, commutator, contract, coordinate_field, d, is_homological

CONTACT = "contact"
DEGENERATE = "degenerate"
INDETERMINATE = "indeterminate"


class NoPolynomialSolution(ArithmeticError):
    """The flat system has no polynomial solution within the degree bound."""


class NotContact(ValueError):
    pass


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def one_form_coefficients(beta: Poly) -> dict[int, Poly]:
    """Left coefficients ``c_b`` with ``beta = sum_b c_b dz_b``, keyed by coordinate index."""
    chart = beta.chart
    out: dict[int, dict] = {}
    for m, c in beta.terms.items():
        diffs = [i for i in chart.differential_of.values() if m[i]]
        if len(diffs) != 1 or m[diffs[0]] != 1:
            raise ValueError("not a 1-form")
        k = diffs[0]
        later = sum(m[i] * chart.parities[i] for i in range(k + 1, chart.size)) % 2
        sign = -1 if (later and chart.parities[k]) else 1
        rest = list(m)
        rest[k] = 0
        base = chart.generators[k].base
        bucket = out.setdefault(base, {})
        bucket[tuple(rest)] = bucket.get(tuple(rest), 0) + sign * c
    return {b: Poly(chart, t) for b, t in out.items() if Poly(chart, t)}


def one_form(chart: Chart, coeffs: Mapping[int, Poly]) -> Poly:
    total = chart.zero()
    for b, c in coeffs.items():
        dz = Poly(chart, {chart.generator_monomial(chart.differential_of[b]): 1})
        total = total + c * dz
    return total


def _rational_matrix(rows):
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in r] for r in rows])


def _to_fraction(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


class LinearSystem:
    """``sum_a X^a M[a][b] = target_b`` with graded polynomial entries.

    ``M`` splits as a rational constant part ``M0`` plus a remainder ``N``;
    for invertible ``M0`` the solution is the fixed point of
    ``X <- (target - X N) M0^{-1}``.
    """

    def __init__(self, chart: Chart, rows: Mapping[int, Mapping[int, Poly]], indices):
        self.chart = chart
        self.indices = list(indices)
        self.rows = {a: dict(rows.get(a, {})) for a in self.indices}
        pos = {b: j for j, b in enumerate(self.indices)}
        size = len(self.indices)
        m0 = [[Fraction(0)] * size for _ in range(size)]
        self.N: dict[int, dict[int, Poly]] = {}
        unit = chart.unit_monomial()
        for a, row in self.rows.items():
            for b, entry in row.items():
                c = entry.terms.get(unit, Fraction(0))
                m0[pos[a]][pos[b]] = c
                rest = Poly(chart, {m: v for m, v in entry.terms.items() if m != unit})
                if rest:
                    self.N.setdefault(a, {})[b] = rest
        self.M0 = _rational_matrix(m0)
        self.invertible = size == 0 or self.M0.det() != 0
        self.M0inv = None
        if self.invertible and size:
            inv = self.M0.inv()
            self.M0inv = {
                (self.indices[i], self.indices[j]): _to_fraction(inv[i, j])
                for i in range(size)
                for j in range(size)
                if inv[i, j] != 0
            }

    def residual(self, X: Mapping[int, Poly], target: Mapping[int, Poly]) -> dict[int, Poly]:
        chart = self.chart
        res = {b: target.get(b, chart.zero()) for b in self.indices}
        for a, xa in X.items():
            for b, entry in self.rows[a].items():
                res[b] = res[b] - xa * entry
        return {b: r for b, r in res.items() if r}

    def solve(self, target: Mapping[int, Poly], max_iter: int = 64, extra_degree: int = 4):
        if not self.invertible:
            raise NotContact("constant part of the flat matrix is singular")
        chart = self.chart
        bound = max((t.total_exponent() for t in target.values()), default=0)
        bound += sum(1 for i in chart.coordinate_indices if chart.degrees[i] > 0) + extra_degree
        X: dict[int, Poly] = {}
        for _ in range(max_iter):
            rhs = {b: target.get(b, chart.zero()) for b in self.indices}
            for a, row in self.N.items():
                xa = X.get(a)
                if xa is None:
                    continue
                for b, entry in row.items():
                    rhs[b] = rhs[b] - xa * entry
            new: dict[int, Poly] = {}
            for (b, a), c in self.M0inv.items():
                if rhs[b]:
                    new[a] = new.get(a, chart.zero()) + rhs[b] * c
            new = {a: v for a, v in new.items() if v}
            if new == X:
                if self.residual(X, target):
                    break
                return X
            if any(v.total_exponent() > bound for v in new.values()):
                raise NoPolynomialSolution(f"iterate exceeded polynomial degree bound {bound}")
            X = new
        raise NoPolynomialSolution("flat system did not converge to a polynomial solution")


class ContactChart:
    """A chart with a contact form ``alpha`` of bidegree ``(1, n)``."""

    def __init__(self, chart: Chart, alpha: Poly):
        if alpha.chart != chart:
            raise ValueError("contact form lives on a different chart")
        bideg = alpha.bidegree()
        if bideg == MIXED or bideg[0] != 1 or not alpha:
            raise InhomogeneousError("contact form must be a nonzero homogeneous 1-form")
        self.chart = chart
        self.alpha = alpha
        self.n = bideg[1]
        self.dalpha = d(alpha)
        self.coordinates = chart.coordinate_indices
        rows = {}
        for a in self.coordinates:
            rows[a] = one_form_coefficients(self._flat_coordinate(a))
        self.flat_rows = rows
        self.system = LinearSystem(chart, rows, self.coordinates)
        self._reeb = None
        if self.system.invertible:
            try:
                self._reeb = self._solve_field(alpha)
            except NoPolynomialSolution:
                self._reeb = None

    def _flat_coordinate(self, a: int) -> Poly:
        return flat(coordinate_field(self.chart, self.chart.generators[a].name), self)

    def _solve_field(self, target: Poly) -> Derivation:
        X = self.system.solve(one_form_coefficients(target))
        return Derivation(self.chart, {self.chart.generators[a].name: v for a, v in X.items()})

    def solve_flat(self, target: Poly) -> Derivation:
        """The vector field ``X`` with ``flat(X) = target``."""
        X = self._solve_field(target)
        if flat(X, self) != target:
            raise NoPolynomialSolution("back-substitution failed")
        return X

    @property
    def reeb(self) -> Derivation:
        if self._reeb is None:
            if not self.system.invertible:
                raise NotContact("chart is not contact")
            raise NoPolynomialSolution("Reeb field has no polynomial solution")
        return self._reeb

    def __repr__(self):
        return f"ContactChart(n={self.n}, alpha={self.alpha})"


def flat(X: Derivation, C: ContactChart) -> Poly:
    """``(i_X alpha) alpha + i_X d alpha``."""
    return contract(X, C.alpha) * C.alpha + contract(X, C.dalpha)


def check_contact(C: ContactChart) -> str:
    if C.system.invertible:
        try:
            C.reeb
            chart = C.chart
            for b in C.coordinates:
                target = Poly(chart, {chart.generator_monomial(chart.differential_of[b]): 1})
                C.solve_flat(target)
        except NoPolynomialSolution:
            return INDETERMINATE
        return CONTACT
    if constant_kernel(C):
        return DEGENERATE
    return INDETERMINATE


def constant_kernel(C: ContactChart) -> list[Derivation]:
    """Basis of constant-coefficient vector fields killed by ``flat``."""
    chart = C.chart
    keys = sorted(
        {(b, m) for row in C.flat_rows.values() for b, e in row.items() for m in e.terms}
    )
    cols = list(C.coordinates)
    mat = sympy.Matrix(
        [
            [
                sympy.Rational(str(C.flat_rows[a].get(b, chart.zero()).coefficient(m)))
                for a in cols
            ]
            for b, m in keys
        ]
    ) if keys else sympy.zeros(0, len(cols))
    basis = mat.nullspace() if keys else [sympy.eye(len(cols))[:, j] for j in range(len(cols))]
    out = []
    for vec in basis:
        action = {
            chart.generators[a].name: chart.const(_to_fraction(vec[j]))
            for j, a in enumerate(cols)
            if vec[j] != 0
        }
        out.append(Derivation(chart, action))
    return out


def reeb(C: ContactChart) -> Derivation:
    return C.reeb


def _hamiltonian_target(C: ContactChart, f: Poly) -> Poly:
    k = f.degree()
    if k == MIXED:
        raise InhomogeneousError("Hamiltonian must be homogeneous")
    n = C.n
    Rf = C.reeb(f)
    return (f + Rf * _sign(n * (k - 1))) * C.alpha - d(f) * _sign(k - n)


def hamiltonian_vf(C: ContactChart, f: Poly) -> Derivation:
    """Contact Hamiltonian vector field ``X_f`` (degree ``|f| - n``)."""
    if not f:
        return Derivation(C.chart)
    return C.solve_flat(_hamiltonian_target(C, f))


def jacobi_bracket(C: ContactChart, f: Poly, g: Poly) -> Poly:
    """``X_f(g) - (-1)^{n(|f|+1)} R(f) g``."""
    if not f:
        return C.chart.zero()
    k = f.degree()
    if k == MIXED or g.degree() == MIXED:
        raise InhomogeneousError("bracket arguments must be homogeneous")
    Xf = hamiltonian_vf(C, f)
    return Xf(g) - C.reeb(f) * g * _sign(C.n * (k + 1))


def jacobi_bracket_via_fields(C: ContactChart, f: Poly, g: Poly) -> Poly:
    """``i_{[X_f, X_g]} alpha``."""
    return contract(commutator(hamiltonian_vf(C, f), hamiltonian_vf(C, g)), C.alpha)


def cartan_bracket(C: ContactChart, f: Poly, g: Poly) -> Poly:
    if not f:
        return C.chart.zero()
    if g.degree() == MIXED:
        raise InhomogeneousError("bracket arguments must be homogeneous")
    return hamiltonian_vf(C, f)(g)


class MasterEquationMismatch(AssertionError):
    """The residual and the homological test of ``X_S`` disagree."""


def master_check(C: ContactChart, S: Poly) -> Poly:
    """Residual ``{S, S}_J``; zero exactly when ``X_S`` is homological."""
    if S and S.degree() != C.n + 1:
        raise InhomogeneousError(f"S must be homogeneous of degree {C.n + 1}")
    residual = jacobi_bracket(C, S, S)
    XS = hamiltonian_vf(C, S)
    homological = XS.is_zero() or is_homological(XS)
    if homological != residual.is_zero():
        raise MasterEquationMismatch("{S,S}_J and [X_S, X_S] disagree")
    return residual
