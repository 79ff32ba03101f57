"""Degree-1 (Jacobi) and degree-2 (Courant-Jacobi) target data.

Each model builds a Darboux contact chart together with its degree ``n+1``
Hamiltonian ``S`` and carries an independent structural check: the Schouten
bracket conditions for Jacobi pairs and the four algebroid axioms for
Courant-Jacobi data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import sympy

from .algebra import Chart, Poly
from .calculus import coordinate_field
from .contact import ContactChart
from .schouten import Multivector, schouten, wedge


def base_chart(names: Sequence[str]) -> Chart:
    return Chart([(nm, 0) for nm in names])


def default_names(d: int) -> list[str]:
    return [f"x{i + 1}" for i in range(d)]


def to_sympy(f: Poly, symbols: Sequence[sympy.Symbol]) -> sympy.Expr:
    expr = sympy.Integer(0)
    names = [g.name for g in f.chart.generators]
    lookup = {s.name: s for s in symbols}
    for m, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for i, e in enumerate(m):
            if e:
                term *= lookup[names[i]] ** e
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, chart: Chart, symbols: Sequence[sympy.Symbol]) -> Poly:
    expr = sympy.expand(expr)
    if expr == 0:
        return chart.zero()
    sp = sympy.Poly(expr, *symbols)
    idx = [chart.gen_index(s.name) for s in symbols]
    terms = {}
    for exps, c in sp.terms():
        m = [0] * chart.size
        for i, e in zip(idx, exps):
            m[i] = e
        c = sympy.Rational(c)
        terms[tuple(m)] = Fraction(int(c.p), int(c.q))
    return Poly(chart, terms)


@dataclass
class ContactModel:
    """A contact chart, its Hamiltonian ``S`` and names for the sigma-model fields."""

    contact: ContactChart
    S: Poly
    fields: dict[str, str]
    source: object = None

    @property
    def n(self) -> int:
        return self.contact.n

    @property
    def chart(self) -> Chart:
        return self.contact.chart

    def __iter__(self):
        return iter((self.contact, self.S))


# ---------------------------------------------------------------------------
# Jacobi pairs


@dataclass
class JacobiPair:
    """Bivector ``Lambda`` (antisymmetric matrix) and vector field ``E`` on R^d."""

    Lambda: list[list[Poly]]
    E: list[Poly]
    names: list[str] = field(default_factory=list)

    def __post_init__(self):
        d = len(self.E)
        if not self.names:
            self.names = default_names(d)
        if len(self.Lambda) != d or any(len(r) != d for r in self.Lambda):
            raise ValueError("Lambda must be a d x d matrix")
        for i in range(d):
            for j in range(d):
                if self.Lambda[i][j] != -self.Lambda[j][i]:
                    raise ValueError(f"Lambda is not antisymmetric at ({i + 1}, {j + 1})")

    @property
    def dim(self) -> int:
        return len(self.E)

    @property
    def symbols(self):
        return tuple(sympy.Symbol(nm) for nm in self.names)

    def multivectors(self) -> tuple[Multivector, Multivector]:
        syms = self.symbols
        L = Multivector.bivector(syms, [[to_sympy(c, syms) for c in row] for row in self.Lambda])
        E = Multivector.vector(syms, [to_sympy(c, syms) for c in self.E])
        return L, E


@dataclass
class JacobiCheck:
    ok: bool
    lambda_residual: Multivector  # [L, L] - 2 E ^ L
    e_residual: Multivector  # [L, E]


def check_jacobi(J: JacobiPair) -> JacobiCheck:
    L, E = J.multivectors()
    r1 = schouten(L, L) - wedge(E, L).scale(2)
    r2 = schouten(L, E)
    return JacobiCheck(r1.is_zero() and r2.is_zero(), r1, r2)


def jacobi_fn_bracket(J: JacobiPair, f, g):
    """``Lambda(df, dg) + f E(g) - E(f) g`` on sympy expressions."""
    syms = J.symbols
    L, E = J.multivectors()
    from .schouten import evaluate_on

    Ef = evaluate_on(E, [f])
    Eg = evaluate_on(E, [g])
    return sympy.expand(evaluate_on(L, [f, g]) + f * Eg - Ef * g)


def jacobi_chart(names: Sequence[str], theta: str = "theta") -> Chart:
    coords = [(nm, 0) for nm in names] + [(f"p{i + 1}", 1) for i in range(len(names))]
    return Chart(coords + [(theta, 1)], n=1)


def build_jacobi_contact(J: JacobiPair) -> ContactModel:
    """Degree-1 chart ``T*[1]M x R[1]`` with ``S = (1/2) L^{ij} p_i p_j - E^i p_i theta``."""
    d = J.dim
    chart = jacobi_chart(J.names)
    ps = [chart.gen(f"p{i + 1}") for i in range(d)]
    dxs = [chart.gen("d" + nm) for nm in J.names]
    theta = chart.gen("theta")
    alpha = sum((ps[i] * dxs[i] for i in range(d)), chart.gen("dtheta"))
    S = chart.zero()
    for i in range(d):
        for j in range(d):
            S = S + lift_base(J.Lambda[i][j], chart) * ps[i] * ps[j] * Fraction(1, 2)
        S = S - lift_base(J.E[i], chart) * ps[i] * theta
    fields = {nm: f"X{i + 1}" for i, nm in enumerate(J.names)}
    fields.update({f"p{i + 1}": f"eta{i + 1}" for i in range(d)})
    fields["theta"] = "Theta"
    return ContactModel(ContactChart(chart, alpha), S, fields, J)


def lift_base(f: Poly, chart: Chart) -> Poly:
    return f.map_generators(chart, {})


def encode_multivector(P: Multivector, chart: Chart, names: Sequence[str]) -> Poly:
    """``c d_{i1}^...^d_{ik} -> c p_{i1} ... p_{ik}`` on the degree-1 chart."""
    syms = P.symbols
    total = chart.zero()
    for idx, c in P.terms.items():
        term = from_sympy(c, chart, syms)
        for i in idx:
            term = term * chart.gen(f"p{i + 1}")
        total = total + term
    return total


def jacobi_master_prediction(J: JacobiPair, chart: Chart) -> Poly:
    """Encoding of ``[L, L] - 2 E L + 2 [E, L] theta`` computed by the Schouten oracle."""
    L, E = J.multivectors()
    cubic = schouten(L, L) - wedge(E, L).scale(2)
    quad = schouten(E, L).scale(2)
    return encode_multivector(cubic, chart, J.names) + encode_multivector(
        quad, chart, J.names
    ) * chart.gen("theta")


# ---------------------------------------------------------------------------
# Courant-Jacobi data


def _as_poly(c, chart: Chart) -> Poly:
    if isinstance(c, Poly):
        if c.chart != chart:
            return c.map_generators(chart, {})
        return c
    return chart.const(Fraction(c))


def _rational_inverse(g: list[list[Fraction]]) -> list[list[Fraction]]:
    m = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in g])
    if m.det() == 0:
        raise ValueError("pairing g is degenerate")
    inv = m.inv()
    return [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(m.cols)] for i in range(m.rows)]


class CourantJacobiData:
    """Frame data ``(g, a, b, T)`` of a Courant-Jacobi algebroid on R^d.

    ``g`` is a constant symmetric invertible r x r matrix, ``a[alpha][i]`` and
    ``b[alpha]`` give the anchor ``rho(v_alpha) = a^i_alpha d_i + b_alpha`` and
    ``T[alpha][beta][gamma] = <[[v_alpha, v_beta]], v_gamma>`` is the full
    (not necessarily skew) bracket array.  Coefficients may be numbers or
    polynomials on the base chart.
    """

    def __init__(self, g, a=None, b=None, T=None, names: Sequence[str] | None = None):
        self.g = [[Fraction(c) for c in row] for row in g]
        r = len(self.g)
        if any(len(row) != r for row in self.g):
            raise ValueError("g must be square")
        for i in range(r):
            for j in range(r):
                if self.g[i][j] != self.g[j][i]:
                    raise ValueError("g must be symmetric")
        self.ginv = _rational_inverse(self.g) if r else []
        if names is None:
            d = len(a[0]) if a and a[0] else 0
            names = default_names(d)
        self.names = list(names)
        self.base = base_chart(self.names)
        B = self.base
        d = len(self.names)
        self.a = [[_as_poly(a[al][i], B) if a else B.zero() for i in range(d)] for al in range(r)]
        self.b = [_as_poly(b[al], B) if b else B.zero() for al in range(r)]
        self.T = [
            [[_as_poly(T[x][y][z], B) if T else B.zero() for z in range(r)] for y in range(r)]
            for x in range(r)
        ]

    @property
    def rank(self) -> int:
        return len(self.g)

    @property
    def dim(self) -> int:
        return len(self.names)

    @classmethod
    def from_skew(cls, g, A, a=None, b=None, names=None) -> "CourantJacobiData":
        """Data whose bracket array is ``A`` plus the part forced by ``g`` and ``b``.

        Axioms (3) and (4) fix ``T_{abc} + T_{bac} = g_{ab} b_c`` and
        ``T_{abc} + T_{acb} = b_a g_{bc}``; the unique solution with totally
        skew part ``A`` is ``A + (g_{ab} b_c + g_{bc} b_a - g_{ac} b_b) / 2``.
        """
        proto = cls(g, a, b, None, names)
        B = proto.base
        r = proto.rank
        half = Fraction(1, 2)
        T = [[[None] * r for _ in range(r)] for _ in range(r)]
        for x, y, z in product(range(r), repeat=3):
            bx, by, bz = proto.b[x], proto.b[y], proto.b[z]
            g = proto.g
            T[x][y][z] = _as_poly(A[x][y][z], B) + (bz * g[x][y] + bx * g[y][z] - by * g[x][z]) * half
        proto.T = T
        return proto

    def skew_part(self) -> list:
        """Totally antisymmetric part of ``T`` (the only part ``S`` can see)."""
        r = self.rank
        out = [[[None] * r for _ in range(r)] for _ in range(r)]
        perms = [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1), ((1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1)]
        for idx in product(range(r), repeat=3):
            acc = self.base.zero()
            for p, s in perms:
                j = tuple(idx[k] for k in p)
                acc = acc + self.T[j[0]][j[1]][j[2]] * s
            out[idx[0]][idx[1]][idx[2]] = acc * Fraction(1, 6)
        return out

    def is_canonical(self) -> bool:
        """Whether ``T`` equals ``from_skew`` of its own skew part."""
        ref = CourantJacobiData.from_skew(self.g, self.skew_part(), self.a, self.b, self.names)
        return ref.T == self.T


class FrameAlgebroid:
    """Bracket, pairing and anchor on sections ``sum e^alpha v_alpha`` built from frame data."""

    def __init__(self, D: CourantJacobiData):
        self.D = D
        self.B = D.base
        self.partials = [coordinate_field(self.B, nm) for nm in D.names]

    def zero(self) -> dict:
        return {}

    def frame(self, al: int) -> dict:
        return {al: self.B.one()}

    def _clean(self, e: dict) -> dict:
        return {k: v for k, v in e.items() if v}

    def add(self, *es: dict) -> dict:
        out: dict = {}
        for e in es:
            for k, v in e.items():
                out[k] = out.get(k, self.B.zero()) + v
        return self._clean(out)

    def scale(self, f: Poly, e: dict) -> dict:
        return self._clean({k: f * v for k, v in e.items()})

    def sub(self, e1: dict, e2: dict) -> dict:
        return self.add(e1, self.scale(self.B.const(-1), e2))

    def pairing(self, e1: dict, e2: dict) -> Poly:
        g = self.D.g
        total = self.B.zero()
        for x, f in e1.items():
            for y, h in e2.items():
                if g[x][y]:
                    total = total + f * h * g[x][y]
        return total

    def symbol(self, e: dict, f: Poly) -> Poly:
        total = self.B.zero()
        for al, c in e.items():
            for i, ai in enumerate(self.D.a[al]):
                if ai:
                    total = total + c * ai * self.partials[i](f)
        return total

    def anchor(self, e: dict, f: Poly) -> Poly:
        total = self.symbol(e, f)
        for al, c in e.items():
            total = total + c * self.D.b[al] * f
        return total

    def _dual(self, values: Sequence[Poly]) -> dict:
        ginv = self.D.ginv
        r = self.D.rank
        return self._clean(
            {x: sum((values[y] * ginv[x][y] for y in range(r) if ginv[x][y]), self.B.zero()) for x in range(r)}
        )

    def D_op(self, f: Poly) -> dict:
        """``<D f, e> = rho(e)(f)``."""
        return self._dual([self.anchor(self.frame(y), f) for y in range(self.D.rank)])

    def D_symbol(self, f: Poly) -> dict:
        return self._dual([self.symbol(self.frame(y), f) for y in range(self.D.rank)])

    def frame_bracket(self, x: int, y: int) -> dict:
        return self._dual(self.D.T[x][y])

    def bracket(self, e1: dict, e2: dict) -> dict:
        """Extension of the frame bracket by the two Leibniz rules.

        ``[[f v_a, h v_b]] = f h [[v_a, v_b]] + f rho^(v_a)(h) v_b - h rho^(v_b)(f) v_a
        + h g_ab D^f`` where ``D^`` uses the symbol of the anchor.
        """
        parts = []
        g = self.D.g
        for x, f in e1.items():
            for y, h in e2.items():
                parts.append(self.scale(f * h, self.frame_bracket(x, y)))
                parts.append({y: f * self.symbol(self.frame(x), h)})
                parts.append({x: -(h * self.symbol(self.frame(y), f))})
                if g[x][y]:
                    parts.append(self.scale(h * g[x][y], self.D_symbol(f)))
        return self.add(*parts)


@dataclass
class CourantJacobiCheck:
    ok: bool
    residuals: dict  # axiom number -> list of (label, residual) for nonzero instances

    def failing_axioms(self) -> list[int]:
        return sorted(k for k, v in self.residuals.items() if v)


def _function_probes(B: Chart, max_degree: int = 2) -> list[Poly]:
    xs = [B.gen(g.name) for g in B.generators if g.kind == "coordinate"]
    probes = [B.one()]
    for k in range(1, max_degree + 1):
        for combo in product(range(len(xs)), repeat=k):
            if list(combo) == sorted(combo):
                m = B.one()
                for i in combo:
                    m = m * xs[i]
                probes.append(m)
    return probes


def _residual(value) -> object:
    if isinstance(value, dict):
        return value or None
    return value if value else None


def check_courant_jacobi(D: CourantJacobiData) -> CourantJacobiCheck:
    """Evaluate the four axioms on frame sections and monomial function probes.

    Axiom (1) is also checked with a monomial multiple of a frame section in
    the last slot, which detects anchors that fail to intertwine brackets.
    """
    F = FrameAlgebroid(D)
    r = D.rank
    frames = [F.frame(x) for x in range(r)]
    probes = _function_probes(D.base)
    res: dict[int, list] = {1: [], 2: [], 3: [], 4: []}

    def record(ax, label, value):
        v = _residual(value)
        if v is not None:
            res[ax].append((label, v))

    for x, y, z in product(range(r), repeat=3):
        e1, e2 = frames[x], frames[y]
        for f in probes:
            e3 = F.scale(f, frames[z])
            lhs = F.bracket(e1, F.bracket(e2, e3))
            rhs = F.add(F.bracket(F.bracket(e1, e2), e3), F.bracket(e2, F.bracket(e1, e3)))
            record(1, (x, y, z, f.to_string()), F.sub(lhs, rhs))
        lhs = F.anchor(e1, F.pairing(e2, frames[z]))
        rhs = F.pairing(F.bracket(e1, e2), frames[z]) + F.pairing(e2, F.bracket(e1, frames[z]))
        record(4, (x, y, z), lhs - rhs)
    for x, y in product(range(r), repeat=2):
        for f in probes:
            lhs = F.bracket(frames[x], F.scale(f, frames[y]))
            rhs = F.add(F.scale(f, F.bracket(frames[x], frames[y])), F.scale(F.symbol(frames[x], f), frames[y]))
            record(2, (x, y, f.to_string()), F.sub(lhs, rhs))
    half = D.base.const(Fraction(1, 2))
    for x in range(r):
        for y in range(x, r):
            e = F.add(frames[x], frames[y]) if x != y else frames[x]
            lhs = F.bracket(e, e)
            rhs = F.scale(half, F.D_op(F.pairing(e, e)))
            record(3, (x, y), F.sub(lhs, rhs))
    ok = not any(res.values())
    return CourantJacobiCheck(ok, res)


def cj_chart(names: Sequence[str], rank: int, theta: str = "theta") -> Chart:
    d = len(names)
    coords = [(nm, 0) for nm in names]
    coords += [(f"v{al + 1}", 1) for al in range(rank)]
    coords += [(f"p{i + 1}", 2) for i in range(d)]
    return Chart(coords + [(theta, 2)], n=2)


def build_cj_contact(D: CourantJacobiData) -> ContactModel:
    """Degree-2 chart with ``alpha = p_i dx^i + (1/2) g v dv + (1/2) d theta`` and
    ``S = a^i_a v^a p_i - (1/2) b_a v^a theta - (1/6) T_abc v^a v^b v^c``.

    The Reeb field is ``2 d/dtheta``, so the derived anchor of ``c v^a theta``
    is ``-2 c``; the factor ``-1/2`` makes ``b`` the function part of the anchor.
    """
    chart = cj_chart(D.names, D.rank)
    d, r = D.dim, D.rank
    half = Fraction(1, 2)
    vs = [chart.gen(f"v{al + 1}") for al in range(r)]
    dvs = [chart.gen(f"dv{al + 1}") for al in range(r)]
    ps = [chart.gen(f"p{i + 1}") for i in range(d)]
    alpha = chart.gen("dtheta") * half
    for i, nm in enumerate(D.names):
        alpha = alpha + ps[i] * chart.gen("d" + nm)
    for x in range(r):
        for y in range(r):
            if D.g[x][y]:
                alpha = alpha + vs[x] * dvs[y] * (D.g[x][y] * half)
    theta = chart.gen("theta")
    S = chart.zero()
    for x in range(r):
        for i in range(d):
            if D.a[x][i]:
                S = S + lift_base(D.a[x][i], chart) * vs[x] * ps[i]
        if D.b[x]:
            S = S + lift_base(D.b[x], chart) * vs[x] * theta * Fraction(-1, 2)
    sixth = Fraction(-1, 6)
    for x, y, z in product(range(r), repeat=3):
        if D.T[x][y][z]:
            S = S + lift_base(D.T[x][y][z], chart) * vs[x] * vs[y] * vs[z] * sixth
    fields = {nm: f"X{i + 1}" for i, nm in enumerate(D.names)}
    fields.update({f"v{al + 1}": f"eta{al + 1}" for al in range(r)})
    fields.update({f"p{i + 1}": f"P{i + 1}" for i in range(d)})
    fields["theta"] = "Theta"
    return ContactModel(ContactChart(chart, alpha), S, fields, D)


# ---------------------------------------------------------------------------
# The standard Courant-Jacobi algebroid (TM x R) + (T*M x R)


@dataclass
class SectionCJ:
    """``(X, f, xi, g)``: vector field, function, one-form, function on R^d.

    ``X`` and ``xi`` are component lists; everything lives on one base chart.
    """

    X: list
    f: Poly
    xi: list
    g: Poly

    @classmethod
    def zero(cls, base: Chart) -> "SectionCJ":
        d = sum(1 for _ in base.coordinate_indices)
        return cls([base.zero()] * d, base.zero(), [base.zero()] * d, base.zero())

    def __add__(self, other: "SectionCJ") -> "SectionCJ":
        return SectionCJ(
            [a + b for a, b in zip(self.X, other.X)],
            self.f + other.f,
            [a + b for a, b in zip(self.xi, other.xi)],
            self.g + other.g,
        )

    def __sub__(self, other: "SectionCJ") -> "SectionCJ":
        return self + other.scale(-1)

    def scale(self, c) -> "SectionCJ":
        return SectionCJ([c * a for a in self.X], self.f * c, [c * a for a in self.xi], self.g * c)

    def is_zero(self) -> bool:
        return not (any(self.X) or self.f or any(self.xi) or self.g)

    def __eq__(self, other):
        return isinstance(other, SectionCJ) and (self - other).is_zero()

    def __repr__(self):
        def s(p):
            return p.to_string() if p else "0"

        return f"SectionCJ(X=[{', '.join(map(s, self.X))}], f={s(self.f)}, xi=[{', '.join(map(s, self.xi))}], g={s(self.g)})"


class StandardCJ:
    """Pairing, anchor and bracket of the standard algebroid on a base chart."""

    def __init__(self, base: Chart):
        self.base = base
        self.names = [base.generators[i].name for i in base.coordinate_indices]
        self.partials = [coordinate_field(base, nm) for nm in self.names]

    @property
    def dim(self) -> int:
        return len(self.names)

    def section(self, X=None, f=0, xi=None, g=0) -> SectionCJ:
        B = self.base
        d = self.dim
        X = [_as_poly(c, B) for c in (X or [0] * d)]
        xi = [_as_poly(c, B) for c in (xi or [0] * d)]
        return SectionCJ(X, _as_poly(f, B), xi, _as_poly(g, B))

    def vf(self, X: Sequence[Poly]):
        from .calculus import Derivation

        return Derivation(self.base, {nm: c for nm, c in zip(self.names, X)})

    def form(self, xi: Sequence[Poly]) -> Poly:
        B = self.base
        return sum((c * B.gen("d" + nm) for nm, c in zip(self.names, xi)), B.zero())

    def components(self, beta: Poly) -> list:
        from .contact import one_form_coefficients

        coeffs = one_form_coefficients(beta) if beta else {}
        return [coeffs.get(i, self.base.zero()) for i in self.base.coordinate_indices]

    def pairing(self, s1: SectionCJ, s2: SectionCJ) -> Poly:
        total = s1.f * s2.g + s2.f * s1.g
        for i in range(self.dim):
            total = total + s1.X[i] * s2.xi[i] + s2.X[i] * s1.xi[i]
        return total

    def symbol(self, s: SectionCJ, h: Poly) -> Poly:
        return self.vf(s.X)(h)

    def anchor(self, s: SectionCJ, h: Poly) -> Poly:
        return self.symbol(s, h) + s.f * h

    def D_op(self, h: Poly) -> SectionCJ:
        """``<D h, e> = rho(e)(h)``, i.e. ``D h = (0, 0, dh, h)``."""
        from .calculus import d as ext_d

        return SectionCJ([self.base.zero()] * self.dim, self.base.zero(), self.components(ext_d(h)), h)

    def bracket(self, s1: SectionCJ, s2: SectionCJ) -> SectionCJ:
        from .calculus import commutator, contract, d as ext_d, lie

        X1, X2 = self.vf(s1.X), self.vf(s2.X)
        xi1, xi2 = self.form(s1.xi), self.form(s2.xi)
        X3 = commutator(X1, X2)
        f3 = X1(s2.f) - X2(s1.f)
        xi3 = (
            lie(X1, xi2)
            - contract(X2, ext_d(xi1))
            + s1.f * xi2
            - s2.f * xi1
            + s2.f * ext_d(s1.g)
            + s2.g * ext_d(s1.f)
        )
        g3 = X1(s2.g) - X2(s1.g) + contract(X2, xi1) + s1.f * s2.g
        return SectionCJ([X3.value(nm) for nm in self.names], f3, self.components(xi3), g3)

    def axiom_residuals(self, sections: Sequence[SectionCJ], functions: Sequence[Poly]) -> dict:
        """Nonzero residuals of the four axioms over the given sections and functions."""
        res: dict[int, list] = {1: [], 2: [], 3: [], 4: []}
        br, pr = self.bracket, self.pairing
        for i, e in enumerate(sections):
            r3 = br(e, e) - self.D_op(pr(e, e)).scale(Fraction(1, 2))
            if not r3.is_zero():
                res[3].append((i, r3))
            for j, e1 in enumerate(sections):
                for h in functions:
                    r2 = br(e, e1.scale(h)) - (br(e, e1).scale(h) + e1.scale(self.symbol(e, h)))
                    if not r2.is_zero():
                        res[2].append((i, j, h.to_string(), r2))
                for k, e2 in enumerate(sections):
                    r1 = br(e, br(e1, e2)) - (br(br(e, e1), e2) + br(e1, br(e, e2)))
                    if not r1.is_zero():
                        res[1].append((i, j, k, r1))
                    r4 = self.anchor(e, pr(e1, e2)) - pr(br(e, e1), e2) - pr(e1, br(e, e2))
                    if r4:
                        res[4].append((i, j, k, r4))
        return res

    def frame(self) -> list[SectionCJ]:
        d = self.dim
        out = []
        for i in range(d):
            X = [0] * d
            X[i] = 1
            out.append(self.section(X=X))
        out.append(self.section(f=1))
        for i in range(d):
            xi = [0] * d
            xi[i] = 1
            out.append(self.section(xi=xi))
        out.append(self.section(g=1))
        return out

    def frame_data(self) -> CourantJacobiData:
        """The same algebroid as ``(g, a, b, T)`` in the frame ``(d_i, 1, dx^i, 1)``."""
        fr = self.frame()
        r = len(fr)
        g = [[self.pairing(fr[x], fr[y]).constant_term() for y in range(r)] for x in range(r)]
        a = [[fr[x].X[i] for i in range(self.dim)] for x in range(r)]
        b = [fr[x].f for x in range(r)]
        T = [[[self.pairing(self.bracket(fr[x], fr[y]), fr[z]) for z in range(r)] for y in range(r)] for x in range(r)]
        return CourantJacobiData(g, a, b, T, self.names)


def wade_bracket(s1: SectionCJ, s2: SectionCJ) -> SectionCJ:
    return StandardCJ(s1.f.chart).bracket(s1, s2)


def standard_cj(d: int) -> StandardCJ:
    return StandardCJ(base_chart(default_names(d)))


# ---------------------------------------------------------------------------
# action integrands

AKSZ = "aksz"
BPV = "bpv"


class UnsupportedDegree(ValueError):
    pass


def default_field_name(name: str) -> str:
    if name == "theta":
        return "Theta"
    return name[:1].upper() + name[1:]


def field_chart(model: ContactModel) -> tuple[Chart, dict[str, str]]:
    """Chart of sigma-model fields: one generator per target coordinate, its
    degree being the form degree on the worldvolume.

    Odd fields come first, then even fields of positive degree, then the
    degree-0 fields, so monomials print as ``eta1*dX1`` or ``P1*dX1``.
    """
    src = model.chart
    names = {}
    for i in src.coordinate_indices:
        nm = src.generators[i].name
        names[nm] = model.fields.get(nm) or default_field_name(nm)
    coords = [(nm, src.generators[src.gen_index(nm)].degree) for nm in names]
    groups = (
        [c for c in coords if c[1] % 2],
        [c for c in coords if c[1] and not c[1] % 2],
        [c for c in coords if not c[1]],
    )
    ordered = [(names[nm], k) for grp in groups for nm, k in grp]
    return Chart(ordered), names


def pullback(model: ContactModel, beta: Poly, target: Chart | None = None) -> Poly:
    """``z -> Z``, ``dz -> dZ`` into the field chart."""
    if target is None:
        target, names = field_chart(model)
    else:
        names = {nm: model.fields.get(nm) or default_field_name(nm) for nm, _ in model.chart.coordinates}
    images = {}
    for z, Z in names.items():
        images[z] = target.gen(Z)
        images["d" + z] = target.gen("d" + Z)
    return beta.map_generators(target, images)


class ActionIntegrand:
    """A top-degree expression in the fields, kept as a polynomial on the field chart."""

    def __init__(self, poly: Poly, n: int, variant: str):
        self.poly = poly
        self.n = n
        self.variant = variant
        chart = poly.chart
        for m in poly.terms:
            total = chart.monomial_degree(m) + chart.monomial_form_degree(m)
            if total != n + 1:
                raise ValueError(f"term of total form degree {total} in a {n + 1}-dimensional integrand")

    @property
    def chart(self) -> Chart:
        return self.poly.chart

    @property
    def dimension(self) -> int:
        return self.n + 1

    def terms(self) -> list[tuple[Fraction, list[tuple[str, int]]]]:
        out = []
        gens = self.chart.generators
        for m, c in self.poly.sorted_terms():
            out.append((c, [(gens[i].name, e) for i, e in enumerate(m) if e]))
        return out

    def __sub__(self, other: "ActionIntegrand") -> Poly:
        return self.poly - other.poly

    def __eq__(self, other):
        return isinstance(other, ActionIntegrand) and self.poly == other.poly

    def to_string(self) -> str:
        return self.poly.to_string()

    __str__ = to_string

    def __repr__(self):
        return f"ActionIntegrand({self.variant}, {self.to_string()})"


def emit_action(model: ContactModel, variant: str = AKSZ) -> ActionIntegrand:
    """``phi*alpha + (-1)^{n+1} phi*S`` (AKSZ) or the same with ``alpha`` replaced by
    the zero-section pullback of the Liouville form of the symplectization (BPV)."""
    from .symplectization import Symplectization

    n = model.n
    if n not in (1, 2):
        raise UnsupportedDegree(f"actions are emitted for contact degree 1 or 2, not {n}")
    variant = variant.lower()
    if variant == AKSZ:
        kinetic = model.contact.alpha
    elif variant == BPV:
        Sy = Symplectization(model.contact)
        kinetic = Sy.restrict_zero_section(Sy.liouville_form())
    else:
        raise ValueError(f"unknown action variant {variant!r}")
    target, _ = field_chart(model)
    sign = -1 if (n + 1) % 2 else 1
    poly = pullback(model, kinetic, target) + pullback(model, model.S, target) * sign
    return ActionIntegrand(poly, n, variant)
