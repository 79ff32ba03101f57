"""Exact graded-commutative polynomials over the rationals.

A :class:`Chart` lists graded coordinates; every coordinate ``z`` is followed
by its differential ``dz`` so that functions and differential forms live in
one algebra.  Commutation is governed by the parity of the total degree
(form degree + internal degree).  Monomials are exponent tuples in chart
order; odd generators have exponent 0 or 1.  The optional formal exponential
``u = e^t`` is an even degree-0 generator with Laurent exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

MIXED = "mixed"

COORDINATE = "coordinate"
DIFFERENTIAL = "differential"
EXPONENTIAL = "exponential"

Monomial = tuple
Scalar = Union[int, Fraction]


class ChartError(ValueError):
    """Invalid chart declaration or operands living on different charts."""


class UnknownGenerator(ChartError, KeyError):
    pass


class InhomogeneousError(ValueError):
    """A homogeneous element was required."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    kind: str
    base: int | None = None  # coordinate index, for differentials

    @property
    def form_degree(self) -> int:
        return 1 if self.kind == DIFFERENTIAL else 0

    @property
    def parity(self) -> int:
        return (self.degree + self.form_degree) % 2


class Chart:
    """Ordered graded coordinates with their differentials.

    ``coordinates`` is a sequence of ``(name, degree)`` pairs.  If
    ``exponential`` is given as ``(u_name, t_name)`` the chart also carries
    ``u = e^t``; ``t`` must be one of the degree-0 coordinates and ``u`` is
    placed right after ``dt``.
    """

    def __init__(
        self,
        coordinates: Sequence[tuple[str, int]],
        exponential: tuple[str, str] | None = None,
        n: int | None = None,
    ):
        gens: list[Generator] = []
        seen: set[str] = set()
        self.n = n
        self.exp_index: int | None = None
        self.time_index: int | None = None
        u_name, t_name = exponential if exponential else (None, None)
        if exponential and t_name not in {c[0] for c in coordinates}:
            raise ChartError(f"exponential generator needs coordinate {t_name!r}")
        for name, degree in coordinates:
            degree = int(degree)
            if degree < 0:
                raise ChartError(f"coordinate {name!r} has negative degree {degree}")
            dname = "d" + name
            for nm in (name, dname):
                if nm in seen:
                    raise ChartError(f"duplicate generator name {nm!r}")
                seen.add(nm)
            gens.append(Generator(name, degree, COORDINATE))
            gens.append(Generator(dname, degree, DIFFERENTIAL, len(gens) - 1))
            if name == t_name:
                if degree != 0:
                    raise ChartError("the exponential must pair with a degree-0 coordinate")
                self.time_index = len(gens) - 2
                if u_name in seen:
                    raise ChartError(f"duplicate generator name {u_name!r}")
                seen.add(u_name)
                gens.append(Generator(u_name, 0, EXPONENTIAL))
                self.exp_index = len(gens) - 1
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.index = {g.name: i for i, g in enumerate(gens)}
        self.size = len(gens)
        self.parities = tuple(g.parity for g in gens)
        self.degrees = tuple(g.degree for g in gens)
        self.form_degrees = tuple(g.form_degree for g in gens)
        self.odd = tuple(i for i, p in enumerate(self.parities) if p)
        self.coordinate_indices = tuple(i for i, g in enumerate(gens) if g.kind == COORDINATE)
        self.differential_of = {g.base: i for i, g in enumerate(gens) if g.kind == DIFFERENTIAL}
        self._key = (tuple((n_, int(d)) for n_, d in coordinates), exponential)

    def __eq__(self, other):
        return isinstance(other, Chart) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Chart({list(self._key[0])!r})"

    @property
    def coordinates(self) -> list[tuple[str, int]]:
        return list(self._key[0])

    def gen_index(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def unit_monomial(self) -> Monomial:
        return (0,) * self.size

    def generator_monomial(self, i: int, power: int = 1) -> Monomial:
        m = [0] * self.size
        m[i] = power
        return tuple(m)

    # polynomial constructors
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self.unit_monomial(): Fraction(1)})

    def const(self, c: Scalar) -> "Poly":
        return Poly(self, {self.unit_monomial(): Fraction(c)})

    def gen(self, name: str) -> "Poly":
        return Poly(self, {self.generator_monomial(self.gen_index(name)): Fraction(1)})

    def gens(self, *names: str) -> list["Poly"]:
        return [self.gen(nm) for nm in names]

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees) if e)

    def monomial_form_degree(self, m: Monomial) -> int:
        return sum(e for e, f in zip(m, self.form_degrees) if f and e)

    def monomial_parity(self, m: Monomial) -> int:
        return sum(m[i] for i in self.odd) % 2


def mono_mul(chart: Chart, a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    """Product of two normal-ordered monomials as ``(sign, monomial)``.

    ``sign`` is 0 when an odd generator would appear twice.
    """
    swaps = 0
    later_odd_in_a = 0
    for i in reversed(chart.odd):
        if b[i]:
            if a[i]:
                return 0, ()
            swaps += later_odd_in_a
        if a[i]:
            later_odd_in_a += 1
    return (-1 if swaps & 1 else 1), tuple(x + y for x, y in zip(a, b))


def normalize(chart: Chart, word: Iterable[str]) -> tuple[int, Monomial]:
    """Sort a raw word of generator names into chart order with its Koszul sign."""
    sign, mono = 1, chart.unit_monomial()
    for name in word:
        s, mono = mono_mul(chart, mono, chart.generator_monomial(chart.gen_index(name)))
        if s == 0:
            return 0, ()
        sign *= s
    return sign, mono


def _coerce(chart: Chart, other) -> "Poly":
    if isinstance(other, Poly):
        if other.chart is not chart and other.chart != chart:
            raise ChartError("operands live on different charts")
        return other
    if isinstance(other, (int, Fraction)):
        return chart.const(other)
    return NotImplemented


class Poly:
    """Immutable sparse polynomial in the graded generators of a chart."""

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[Monomial, Scalar]):
        self.chart = chart
        self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}
        self._hash = None

    # arithmetic
    def __add__(self, other):
        other = _coerce(self.chart, other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Poly(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.chart, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(self.chart, other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.chart, {m: c * other for m, c in self.terms.items()})
        other = _coerce(self.chart, other)
        if other is NotImplemented:
            return other
        chart = self.chart
        terms: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                s, m = mono_mul(chart, ma, mb)
                if s:
                    v = terms.get(m, 0) + s * ca * cb
                    if v:
                        terms[m] = v
                    else:
                        del terms[m]
        return Poly(chart, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return laurent_inverse(self) ** -k
        result = self.chart.one()
        for _ in range(k):
            result = result * self
        return result

    # comparison
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.chart.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # gradings
    def degree(self):
        """Internal degree, :data:`MIXED` if inhomogeneous; 0 for the zero polynomial."""
        degs = {self.chart.monomial_degree(m) for m in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            return MIXED
        return degs.pop()

    def form_degree(self):
        degs = {self.chart.monomial_form_degree(m) for m in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            return MIXED
        return degs.pop()

    def bidegree(self):
        """``(form degree, internal degree)``, or :data:`MIXED`."""
        pairs = {
            (self.chart.monomial_form_degree(m), self.chart.monomial_degree(m)) for m in self.terms
        }
        if not pairs:
            return (0, 0)
        if len(pairs) > 1:
            return MIXED
        return pairs.pop()

    def parity(self):
        pars = {self.chart.monomial_parity(m) for m in self.terms}
        if not pars:
            return 0
        if len(pars) > 1:
            return MIXED
        return pars.pop()

    def homogeneous_parts(self) -> dict[int, "Poly"]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.chart.monomial_degree(m), {})[m] = c
        return {k: Poly(self.chart, v) for k, v in parts.items()}

    def total_exponent(self) -> int:
        """Largest number of generator factors in a monomial (polynomial degree)."""
        return max((sum(abs(e) for e in m) for m in self.terms), default=0)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.chart.unit_monomial(), Fraction(0))

    def is_function(self) -> bool:
        return all(self.chart.monomial_form_degree(m) == 0 for m in self.terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def map_generators(self, target: Chart, images: Mapping[str, "Poly"]) -> "Poly":
        """Apply the algebra morphism sending generator ``name`` to ``images[name]``.

        Generators missing from ``images`` are sent to the generator of the same
        name on ``target``.  Images must match the parity of their source.
        """
        chart = self.chart
        imgs = []
        for g in chart.generators:
            img = images[g.name] if g.name in images else target.gen(g.name)
            if img.chart != target:
                raise ChartError(f"image of {g.name!r} lives on a different chart")
            if img and img.parity() != g.parity:
                raise ChartError(f"image of {g.name!r} has the wrong parity")
            imgs.append(img)
        result = target.zero()
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                if e < 0:
                    if imgs[i] != target.one():
                        raise ChartError("negative powers only map to 1")
                    continue
                for _ in range(e):
                    term = term * imgs[i]
                if not term:
                    break
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, Scalar]):
        """Evaluate a polynomial in commuting (even) generators at rational values."""
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    name = self.chart.generators[i].name
                    if self.chart.parities[i]:
                        raise ValueError(f"cannot evaluate odd generator {name!r}")
                    v *= Fraction(values[name]) ** e
            total += v
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _order_key(mc[0]))

    def __repr__(self):
        return self.to_string()

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(m):
                if e == 0:
                    continue
                name = self.chart.generators[i].name
                factors.append(name if e == 1 else f"{name}^{e}" if e > 0 else f"{name}^({e})")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            out.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]


def _order_key(m: Monomial):
    return (sum(abs(e) for e in m), tuple(-e for e in m))


def degree_of(f: Poly):
    return f.degree()


def euler_apply(f: Poly) -> Poly:
    """Scale each monomial by its internal degree."""
    chart = f.chart
    return Poly(chart, {m: c * chart.monomial_degree(m) for m, c in f.terms.items()})


def laurent_inverse(f: Poly) -> Poly:
    """Inverse of ``c * u^k`` for the exponential generator ``u``."""
    chart = f.chart
    if len(f.terms) != 1 or chart.exp_index is None:
        raise ValueError("only monomials c*u^k are invertible")
    (m, c), = f.terms.items()
    if any(e for i, e in enumerate(m) if i != chart.exp_index):
        raise ValueError("only monomials c*u^k are invertible")
    return Poly(chart, {chart.generator_monomial(chart.exp_index, -m[chart.exp_index]): 1 / c})
