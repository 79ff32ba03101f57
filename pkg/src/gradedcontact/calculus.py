"""Graded vector fields and the Cartan calculus on bigraded forms.

Every operator here is a graded derivation of the whole algebra of a chart
(functions and forms together) of a fixed total parity, determined by its
values on generators:

* ``d``:    ``z -> dz``, ``dz -> 0``, ``u -> u dt``              (parity 1)
* ``i_X``:  ``z -> 0``,  ``dz -> X(z)``                          (parity |X|-1)
* ``L_X``:  ``z -> X(z)``, ``dz -> (-1)^|X| d X(z)``             (parity |X|)

With these generator values the six graded commutation relations hold; the
test suite uses them as the oracle for the sign conventions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from .algebra import (
    COORDINATE,
    DIFFERENTIAL,
    EXPONENTIAL,
    MIXED,
    Chart,
    ChartError,
    InhomogeneousError,
    Monomial,
    Poly,
    mono_mul,
)


def _mul_mono_poly(chart: Chart, left: Monomial, p: Poly, right: Monomial) -> dict:
    out: dict = {}
    for m, c in p.terms.items():
        s1, m1 = mono_mul(chart, left, m)
        if not s1:
            continue
        s2, m2 = mono_mul(chart, m1, right)
        if not s2:
            continue
        v = out.get(m2, 0) + s1 * s2 * c
        if v:
            out[m2] = v
        else:
            del out[m2]
    return out


def apply_derivation(
    f: Poly,
    parity: int,
    image: Callable[[int], Poly],
    cache: dict | None = None,
) -> Poly:
    """Extend generator values ``image(i)`` to ``f`` by the graded Leibniz rule."""
    chart = f.chart
    total: dict = {}
    for mono, coeff in f.terms.items():
        part = cache.get(mono) if cache is not None else None
        if part is None:
            part = _apply_monomial(chart, mono, parity, image)
            if cache is not None:
                cache[mono] = part
        for m, c in part.items():
            v = total.get(m, 0) + coeff * c
            if v:
                total[m] = v
            else:
                del total[m]
    return Poly(chart, total)


def _apply_monomial(chart: Chart, mono: Monomial, parity: int, image) -> dict:
    out: dict = {}
    prefix_parity = 0
    size = chart.size
    for i in range(size):
        e = mono[i]
        if not e:
            continue
        img = image(i)
        if img:
            left = list(mono[:i]) + [e - 1] + [0] * (size - i - 1)
            right = [0] * (i + 1) + list(mono[i + 1:])
            sign = -1 if (parity and prefix_parity) else 1
            for m, c in _mul_mono_poly(chart, tuple(left), img, tuple(right)).items():
                v = out.get(m, 0) + sign * e * c
                if v:
                    out[m] = v
                else:
                    del out[m]
        prefix_parity ^= (e * chart.parities[i]) & 1
    return out


# ---------------------------------------------------------------------------
# exterior derivative


_D_CACHE: dict = {}


def d(beta: Poly) -> Poly:
    """De Rham differential; ``d(u) = u dt`` for the formal exponential."""
    chart = beta.chart
    images = _D_CACHE.get(chart)
    if images is None:
        images = []
        for i, g in enumerate(chart.generators):
            if g.kind == COORDINATE:
                images.append(Poly(chart, {chart.generator_monomial(chart.differential_of[i]): 1}))
            elif g.kind == EXPONENTIAL:
                dt = chart.differential_of[chart.time_index]
                m = [0] * chart.size
                m[i] = 1
                m[dt] = 1
                images.append(Poly(chart, {tuple(m): 1}))
            else:
                images.append(chart.zero())
        _D_CACHE[chart] = images
    return apply_derivation(beta, 1, images.__getitem__)


# ---------------------------------------------------------------------------
# vector fields


class Derivation:
    """Graded vector field stored by its values on the coordinates.

    ``action`` maps coordinate names to function polynomials.  On a chart with
    an exponential generator ``u = e^t`` the value on ``u`` is ``u * X(t)``.
    """

    def __init__(self, chart: Chart, action: Mapping[str, Poly] | None = None):
        self.chart = chart
        vals: dict[int, Poly] = {}
        for name, val in (action or {}).items():
            i = chart.gen_index(name)
            if chart.generators[i].kind != COORDINATE:
                raise ChartError(f"{name!r} is not a coordinate")
            if isinstance(val, (int, Fraction)):
                val = chart.const(val)
            if val.chart != chart:
                raise ChartError("value lives on a different chart")
            if not val.is_function():
                raise ValueError(f"value on {name!r} is not a function")
            if val:
                vals[i] = val
        self.values = vals
        self._cache: dict = {}
        self._degree = self._compute_degree()

    def _compute_degree(self):
        degs = set()
        for i, val in self.values.items():
            vd = val.degree()
            if vd == MIXED:
                return MIXED
            degs.add(vd - self.chart.degrees[i])
        if not degs:
            return 0
        if len(degs) > 1:
            return MIXED
        return degs.pop()

    @property
    def degree(self):
        return self._degree

    def is_zero(self) -> bool:
        return not self.values

    def value(self, name_or_index) -> Poly:
        i = name_or_index if isinstance(name_or_index, int) else self.chart.gen_index(name_or_index)
        g = self.chart.generators[i]
        if g.kind == EXPONENTIAL:
            t = self.values.get(self.chart.time_index)
            if t is None:
                return self.chart.zero()
            return Poly(self.chart, {self.chart.generator_monomial(i): 1}) * t
        return self.values.get(i, self.chart.zero())

    def require_homogeneous(self) -> int:
        if self._degree == MIXED:
            raise InhomogeneousError("vector field is not homogeneous")
        return self._degree

    def homogeneous_components(self) -> list["Derivation"]:
        if self._degree != MIXED:
            return [self]
        parts: dict[int, dict] = {}
        for i, val in self.values.items():
            name = self.chart.generators[i].name
            for deg, piece in val.homogeneous_parts().items():
                parts.setdefault(deg - self.chart.degrees[i], {})[name] = piece
        return [Derivation(self.chart, act) for _, act in sorted(parts.items())]

    def __call__(self, f: Poly) -> Poly:
        """Apply to a function (or, equivalently, take the Lie derivative of a form)."""
        if f.chart != self.chart:
            raise ChartError("operand lives on a different chart")
        return sum((lie(X, f) for X in self.homogeneous_components()), self.chart.zero())

    # linear structure
    def __add__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        names = {self.chart.generators[i].name for i in set(self.values) | set(other.values)}
        return Derivation(self.chart, {nm: self.value(nm) + other.value(nm) for nm in names})

    def __neg__(self) -> "Derivation":
        return self.scale(-1)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-other)

    def scale(self, c) -> "Derivation":
        return self.left_mul(self.chart.const(c))

    def left_mul(self, f: Poly) -> "Derivation":
        """The vector field ``f X`` (coefficient on the left)."""
        return Derivation(
            self.chart, {self.chart.generators[i].name: f * v for i, v in self.values.items()}
        )

    def _check(self, other):
        if other.chart != self.chart:
            raise ChartError("vector fields live on different charts")

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.chart == other.chart and self.values == other.values

    def __hash__(self):
        return hash(tuple(sorted((i, hash(v)) for i, v in self.values.items())))

    def __repr__(self):
        if not self.values:
            return "0"
        parts = [f"({v})*∂/∂{self.chart.generators[i].name}" for i, v in sorted(self.values.items())]
        return " + ".join(parts)

    def extend_to(self, chart: Chart) -> "Derivation":
        """Same coordinate values on a larger chart (zero on the new coordinates)."""
        return Derivation(
            chart,
            {
                self.chart.generators[i].name: v.map_generators(chart, {})
                for i, v in self.values.items()
            },
        )


def coordinate_field(chart: Chart, name: str) -> Derivation:
    """The coordinate vector field ``∂/∂name``."""
    return Derivation(chart, {name: chart.one()})


def euler_field(chart: Chart) -> Derivation:
    return Derivation(
        chart,
        {g.name: chart.gen(g.name) * g.degree for g in chart.generators if g.kind == COORDINATE},
    )


def commutator(X: Derivation, Y: Derivation) -> Derivation:
    """Graded commutator ``[X, Y] = XY - (-1)^{|X||Y|} YX``."""
    X._check(Y)
    kx, ky = X.require_homogeneous(), Y.require_homogeneous()
    sign = -1 if (kx * ky) % 2 else 1
    chart = X.chart
    action = {}
    for i in chart.coordinate_indices:
        val = X(Y.value(i)) - Y(X.value(i)) * sign
        if val:
            action[chart.generators[i].name] = val
    return Derivation(chart, action)


def is_homological(Q: Derivation) -> bool:
    if Q.degree != 1:
        return False
    return commutator(Q, Q).is_zero()


# ---------------------------------------------------------------------------
# contraction and Lie derivative


def contract(X: Derivation, beta: Poly) -> Poly:
    """Interior product ``i_X``; tensorial in ``X`` with left coefficients."""
    chart = X.chart
    if beta.chart != chart:
        raise ChartError("operand lives on a different chart")
    total = chart.zero()
    for Xh in X.homogeneous_components():
        k = Xh.require_homogeneous()
        images = [chart.zero()] * chart.size
        for i, val in Xh.values.items():
            images[chart.differential_of[i]] = val
        total = total + apply_derivation(beta, (k - 1) % 2, images.__getitem__)
    return total


def lie(X: Derivation, beta: Poly) -> Poly:
    """Lie derivative ``L_X`` (equal to ``i_X d + (-1)^{|X|} d i_X``)."""
    chart = X.chart
    if beta.chart != chart:
        raise ChartError("operand lives on a different chart")
    k = X.require_homogeneous()
    sign = -1 if k % 2 else 1
    images = [None] * chart.size
    for i, g in enumerate(chart.generators):
        if g.kind == DIFFERENTIAL:
            images[i] = d(X.value(g.base)) * sign
        else:
            images[i] = X.value(i)
    return apply_derivation(beta, k % 2, images.__getitem__, X._cache)


def lie_via_cartan(X: Derivation, beta: Poly) -> Poly:
    k = X.require_homogeneous()
    sign = -1 if k % 2 else 1
    return contract(X, d(beta)) + d(contract(X, beta)) * sign
