"""Symplectization ``M x R`` with ``omega = d(e^t alpha)``.

``e^t`` is the formal Laurent generator ``u`` of the extended chart, so every
object stays polynomial.  Poisson brackets computed here give an independent
route to the Jacobi bracket of the contact chart.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import MIXED, Chart, InhomogeneousError, Poly, laurent_inverse
from .calculus import Derivation, contract, coordinate_field, d, euler_field, lie
from .contact import ContactChart, LinearSystem, one_form_coefficients


def _fresh(chart: Chart, base: str) -> str:
    name = base
    while name in chart.index or "d" + name in chart.index:
        name += "_"
    return name


class Symplectization:
    def __init__(self, contact: ContactChart):
        self.contact = contact
        src = contact.chart
        self.t_name = _fresh(src, "t")
        self.u_name = _fresh(src, "u")
        self.chart = Chart(
            src.coordinates + [(self.t_name, 0)],
            exponential=(self.u_name, self.t_name),
            n=contact.n,
        )
        self.n = contact.n
        self.u = self.chart.gen(self.u_name)
        self.alpha = self.embed(contact.alpha)
        self.omega = d(self.u * self.alpha)
        self.Z = coordinate_field(self.chart, self.t_name)
        # omega = u * omega0; the flat system is solved against omega0
        self.omega0 = self.chart.gen("d" + self.t_name) * self.alpha + d(self.alpha)
        rows = {
            a: one_form_coefficients(
                contract(coordinate_field(self.chart, self.chart.generators[a].name), self.omega0)
            )
            for a in self.chart.coordinate_indices
        }
        self.system = LinearSystem(self.chart, rows, self.chart.coordinate_indices)
        if d(self.omega):
            raise ArithmeticError("omega is not closed")
        if lie(self.Z, self.omega) != self.omega:
            raise ArithmeticError("omega is not homogeneous")

    def embed(self, f: Poly) -> Poly:
        return f.map_generators(self.chart, {})

    def embed_field(self, X: Derivation) -> Derivation:
        return X.extend_to(self.chart)

    def restrict_zero_section(self, beta: Poly) -> Poly:
        """Pull back along ``t = 0`` (``u -> 1``, ``dt -> 0``)."""
        src = self.contact.chart
        images = {
            self.u_name: src.one(),
            self.t_name: src.zero(),
            "d" + self.t_name: src.zero(),
        }
        return beta.map_generators(src, images)

    def lift_function(self, f: Poly) -> Poly:
        return self.u * self.embed(f)

    def hamiltonian(self, ftilde: Poly) -> Derivation:
        """Solve ``d f~ = (-1)^{|f|-n-1} i_X omega``."""
        k = ftilde.degree()
        if k == MIXED:
            raise InhomogeneousError("Hamiltonian must be homogeneous")
        if not ftilde:
            return Derivation(self.chart)
        sign = -1 if (k - self.n - 1) % 2 else 1
        target = d(ftilde) * sign
        # i_X omega = u i_X omega0, so divide the target by u termwise
        target = _divide_by_u(target, self.u)
        X = self.system.solve(one_form_coefficients(target))
        field = Derivation(self.chart, {self.chart.generators[a].name: v for a, v in X.items()})
        if contract(field, self.omega) != d(ftilde) * sign:
            raise ArithmeticError("back-substitution failed")
        return field

    def poisson_bracket(self, ftilde: Poly, gtilde: Poly) -> Poly:
        return self.hamiltonian(ftilde)(gtilde)

    def liouville_form(self) -> Poly:
        """``lambda = (1/n) i_eps omega`` (requires ``n > 0``)."""
        if self.n == 0:
            raise ValueError("lambda needs a positive contact degree")
        return contract(euler_field(self.chart), self.omega) * Fraction(1, self.n)

    def lifted_hamiltonian_formula(self, f: Poly, Xf: Derivation) -> Derivation:
        """``X_f - (-1)^{n(|f|-1)} R(f) d/dt`` on the extended chart."""
        k = f.degree()
        sign = -1 if (self.n * (k - 1)) % 2 else 1
        Rf = self.embed(self.contact.reeb(f))
        return self.embed_field(Xf) - self.Z.left_mul(Rf * sign)


def _divide_by_u(beta: Poly, u: Poly) -> Poly:
    chart = beta.chart
    i = chart.exp_index
    out = {}
    for m, c in beta.terms.items():
        m2 = list(m)
        m2[i] -= 1
        out[tuple(m2)] = c
    return Poly(chart, out)


def symplectize(C: ContactChart) -> Symplectization:
    return Symplectization(C)


def lift_function(Sy: Symplectization, f: Poly) -> Poly:
    return Sy.lift_function(f)


def sympl_hamiltonian(Sy: Symplectization, ftilde: Poly) -> Derivation:
    return Sy.hamiltonian(ftilde)


def poisson_bracket(Sy: Symplectization, ftilde: Poly, gtilde: Poly) -> Poly:
    return Sy.poisson_bracket(ftilde, gtilde)


__all__ = [
    "Symplectization",
    "symplectize",
    "lift_function",
    "sympl_hamiltonian",
    "poisson_bracket",
    "laurent_inverse",
]
