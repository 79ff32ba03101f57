"""Exact evaluation of action integrands on closed simplicial complexes.

Fields are rational cochains.  A k-simplex is stored as a tuple of vertex
labels listed in the complex's vertex order; that order fixes both the
coboundary signs and the Alexander-Whitney cup product

    (a u b)(v0 .. v_{p+q}) = a(v0 .. vp) * b(vp .. v_{p+q}).

Degree-0 factors of a term (the coordinate fields and the structure
functions of the target) are sampled at the first vertex of each top cell.
Top cells carry an orientation sign so that the sum of a coboundary over all
of them vanishes.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterable, Mapping, Sequence

from .algebra import Poly

Simplex = tuple


class LatticeError(ValueError):
    pass


def _det(rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * _det(minor)
    return total


class SimplicialComplex:
    """Closed oriented simplicial complex.

    ``top`` maps each top simplex (ordered by ``order``) to its orientation
    sign.  Lower simplices are all faces of top simplices.
    """

    def __init__(self, order: Sequence, top: Mapping[Simplex, int]):
        self.order = list(order)
        self.rank = {v: i for i, v in enumerate(self.order)}
        if len(self.rank) != len(self.order):
            raise LatticeError("vertex order lists a vertex twice")
        self.top = {}
        for s, sign in top.items():
            key = self.key(s)
            if key in self.top:
                raise LatticeError(f"top simplex {key} listed twice")
            self.top[key] = 1 if sign > 0 else -1
        dims = {len(s) - 1 for s in self.top}
        if len(dims) != 1:
            raise LatticeError("top simplices have different dimensions")
        self.dim = dims.pop()
        cells: list[set] = [set() for _ in range(self.dim + 1)]
        for s in self.top:
            for k in range(self.dim + 1):
                for face in combinations(s, k + 1):
                    cells[k].add(face)
        self.cells = [sorted(c, key=lambda f: [self.rank[v] for v in f]) for c in cells]
        self._check_closed()

    def key(self, vertices: Iterable) -> Simplex:
        vs = tuple(sorted(vertices, key=self.rank.__getitem__))
        if len(set(vs)) != len(vs):
            raise LatticeError(f"degenerate simplex {vs}")
        return vs

    def _check_closed(self):
        """Every codimension-1 face is shared by two top cells with opposite induced orientation."""
        if self.dim == 0:
            return
        count: dict = {}
        for s, sign in self.top.items():
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                count[face] = count.get(face, 0) + sign * (-1) ** i
        bad = [f for f, c in count.items() if c]
        if bad:
            raise LatticeError(f"complex is not closed and oriented near face {bad[0]}")

    def relabel(self, mapping: Mapping) -> "SimplicialComplex":
        """Rename vertices; the vertex order (and hence every cup product) is transported."""
        return SimplicialComplex(
            [mapping[v] for v in self.order],
            {tuple(mapping[v] for v in s): sign for s, sign in self.top.items()},
        )

    def __repr__(self):
        counts = ", ".join(str(len(c)) for c in self.cells)
        return f"SimplicialComplex(dim={self.dim}, cells=[{counts}])"


def _oriented(positions: dict, rank, cell: Sequence) -> tuple[Simplex, int]:
    vs = sorted(cell, key=rank)
    p0 = positions[vs[0]]
    rows = [[a - b for a, b in zip(positions[v], p0)] for v in vs[1:]]
    det = _det(rows)
    if det == 0:
        raise LatticeError("flat simplex")
    return tuple(vs), 1 if det > 0 else -1


def torus_grid(*sizes: int) -> SimplicialComplex:
    """Triangulated torus ``(Z/N1) x ... x (Z/Nk)`` for k = 2 or 3.

    Each unit square (cube) is cut along its main diagonal into 2 triangles
    (6 Kuhn tetrahedra); every side must be at least 3 so that no simplex
    wraps onto itself.
    """
    k = len(sizes)
    if k not in (2, 3):
        raise LatticeError("torus grids are 2- or 3-dimensional")
    if any(s < 3 for s in sizes):
        raise LatticeError("every side of a torus grid must be at least 3")

    def label(p):
        idx = 0
        for c, s in zip(p, sizes):
            idx = idx * s + c % s
        return idx

    top = {}
    for base in product(*(range(s) for s in sizes)):
        for perm in permutations(range(k)):
            pts = [tuple(base)]
            cur = list(base)
            for axis in perm:
                cur[axis] += 1
                pts.append(tuple(cur))
            positions = {label(p): p for p in pts}
            s, sign = _oriented(positions, lambda v: v, list(positions))
            top[s] = sign
    order = list(range(_prod(sizes)))
    return SimplicialComplex(order, top)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


# ---------------------------------------------------------------------------
# cochains


class Cochain:
    """Values on the k-simplices of a complex (missing simplices are zero)."""

    def __init__(self, complex: SimplicialComplex, degree: int, values: Mapping | None = None):
        if not 0 <= degree <= complex.dim:
            raise LatticeError(f"no {degree}-cochains on a {complex.dim}-dimensional complex")
        self.complex = complex
        self.degree = degree
        self.values = {}
        for s, v in (values or {}).items():
            key = complex.key(s)
            if len(key) != degree + 1:
                raise LatticeError(f"simplex {key} does not have degree {degree}")
            if v:
                self.values[key] = v

    def __call__(self, s: Simplex):
        return self.values.get(s, 0)

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree:
            raise LatticeError("cochain degrees differ")
        vals = dict(self.values)
        for s, v in other.values.items():
            vals[s] = vals.get(s, 0) + v
        return Cochain(self.complex, self.degree, vals)

    def scale(self, c) -> "Cochain":
        return Cochain(self.complex, self.degree, {s: c * v for s, v in self.values.items()})

    def map_values(self, f) -> "Cochain":
        return Cochain(self.complex, self.degree, {s: f(v) for s, v in self.values.items()})

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and (self + other.scale(-1)).is_zero()

    def relabel(self, mapping: Mapping, complex: SimplicialComplex) -> "Cochain":
        return Cochain(complex, self.degree, {tuple(mapping[v] for v in s): val for s, val in self.values.items()})

    def __repr__(self):
        return f"Cochain(degree={self.degree}, {len(self.values)} nonzero values)"


def discrete_d(c: Cochain) -> Cochain:
    """Simplicial coboundary ``(dc)(v0..v_{k+1}) = sum_i (-1)^i c(v0..^vi..v_{k+1})``."""
    K = c.complex
    if c.degree >= K.dim:
        raise LatticeError("coboundary of a top-degree cochain")
    out = {}
    for s in K.cells[c.degree + 1]:
        total = 0
        for i in range(len(s)):
            v = c.values.get(s[:i] + s[i + 1:])
            if v:
                total = total + v if i % 2 == 0 else total - v
        if total:
            out[s] = total
    return Cochain(K, c.degree + 1, out)


def integrate(c: Cochain):
    K = c.complex
    if c.degree != K.dim:
        raise LatticeError("only top-degree cochains can be integrated")
    total = 0
    for s, sign in K.top.items():
        v = c.values.get(s)
        if v:
            total = total + v if sign > 0 else total - v
    return total


# ---------------------------------------------------------------------------
# dual numbers for exact first derivatives


class Dual:
    """``a + b eps`` with ``eps^2 = 0``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a
        self.b = b

    def _lift(self, other):
        return other if isinstance(other, Dual) else Dual(other)

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        o = self._lift(other)
        return self.a == o.a and self.b == o.b

    def __repr__(self):
        return f"Dual({self.a}, {self.b})"


# ---------------------------------------------------------------------------
# integrands


class FieldConfig:
    """One cochain per field symbol."""

    def __init__(self, complex: SimplicialComplex, cochains: Mapping[str, Cochain]):
        self.complex = complex
        self.cochains = dict(cochains)

    def __getitem__(self, name: str) -> Cochain:
        return self.cochains[name]

    def names(self):
        return list(self.cochains)

    def combine(self, direction: "FieldConfig", mix) -> "FieldConfig":
        """Pointwise ``mix(value, direction value)`` on every field."""
        out = {}
        for name, c in self.cochains.items():
            dc = direction.cochains.get(name)
            if dc is not None and dc.degree != c.degree:
                raise LatticeError(f"direction for {name} has degree {dc.degree}, expected {c.degree}")
            keys = set(c.values) | set(dc.values if dc else ())
            out[name] = Cochain(
                c.complex, c.degree, {s: mix(c(s), dc(s) if dc else 0) for s in keys}
            )
        extra = set(direction.cochains) - set(self.cochains)
        if extra:
            raise LatticeError(f"direction perturbs unknown fields {sorted(extra)}")
        return FieldConfig(self.complex, out)

    def relabel(self, mapping: Mapping, complex: SimplicialComplex) -> "FieldConfig":
        return FieldConfig(complex, {n: c.relabel(mapping, complex) for n, c in self.cochains.items()})


class _CompiledTerm:
    __slots__ = ("coeff", "scalars", "factors")

    def __init__(self, coeff, scalars, factors):
        self.coeff = coeff
        self.scalars = scalars  # [(field name, power)]
        self.factors = factors  # [(field name, differentiated, degree)] in product order


def compile_integrand(poly: Poly) -> list[_CompiledTerm]:
    chart = poly.chart
    gens = chart.generators
    out = []
    for m, c in poly.sorted_terms():
        scalars, factors = [], []
        for i, e in enumerate(m):
            if not e:
                continue
            g = gens[i]
            differentiated = g.form_degree == 1
            name = gens[g.base].name if differentiated else g.name
            deg = g.degree + g.form_degree
            if deg == 0:
                scalars.append((name, e))
            else:
                factors.extend([(name, differentiated, deg)] * e)
        out.append(_CompiledTerm(c, scalars, factors))
    return out


def field_degrees(poly: Poly) -> dict[str, int]:
    chart = poly.chart
    return {g.name: g.degree for g in chart.generators if g.form_degree == 0}


def evaluate_integrand(complex: SimplicialComplex, poly: Poly, fields: FieldConfig):
    """Sum over oriented top cells of the cup-product value of ``poly``."""
    degrees = field_degrees(poly)
    terms = compile_integrand(poly)
    for t in terms:
        if sum(f[2] for f in t.factors) != complex.dim:
            raise LatticeError(f"integrand of degree {sum(f[2] for f in t.factors)} on a {complex.dim}-complex")
    needed = {(n, dflag) for t in terms for n, dflag, _ in t.factors} | {(n, False) for t in terms for n, _ in t.scalars}
    data = {}
    for name, dflag in needed:
        if name not in fields.cochains:
            raise LatticeError(f"no values for field {name}")
        c = fields[name]
        if c.degree != degrees[name]:
            raise LatticeError(f"field {name} has degree {c.degree}, expected {degrees[name]}")
        data[(name, dflag)] = discrete_d(c).values if dflag else c.values
    total = 0
    for s, sign in complex.top.items():
        cell = 0
        for t in terms:
            value = t.coeff
            for name, e in t.scalars:
                x = data[(name, False)].get(s[:1], 0)
                for _ in range(e):
                    value = value * x
                if not value:
                    break
            if not value:
                continue
            pos = 0
            for name, dflag, deg in t.factors:
                x = data[(name, dflag)].get(s[pos:pos + deg + 1], 0)
                if not x:
                    value = 0
                    break
                value = value * x
                pos += deg
            if value:
                cell = cell + value
        if cell:
            total = total + cell if sign > 0 else total - cell
    return total


def eval_action(complex: SimplicialComplex, model, variant: str, fields: FieldConfig):
    from .models import emit_action

    integrand = emit_action(model, variant)
    if integrand.dimension != complex.dim:
        raise LatticeError(
            f"{variant} integrand is {integrand.dimension}-dimensional, complex is {complex.dim}-dimensional"
        )
    return evaluate_integrand(complex, integrand.poly, fields)


def eom_residual(complex: SimplicialComplex, model, fields: FieldConfig, direction: FieldConfig, variant: str = "aksz"):
    """Exact directional derivative ``d/ds S(fields + s direction)`` at ``s = 0``."""
    dual = fields.combine(direction, lambda a, b: Dual(a, b))
    value = eval_action(complex, model, variant, dual)
    return value.b if isinstance(value, Dual) else Fraction(0)


def random_rational(rng: random.Random, size: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, max_den))


def random_fields(
    complex: SimplicialComplex,
    degrees: Mapping[str, int],
    rng: random.Random,
    density: float = 1.0,
    size: int = 5,
    max_den: int = 4,
) -> FieldConfig:
    out = {}
    for name in sorted(degrees):
        k = degrees[name]
        vals = {}
        for s in complex.cells[k]:
            if rng.random() < density:
                vals[s] = random_rational(rng, size, max_den)
        out[name] = Cochain(complex, k, vals)
    return FieldConfig(complex, out)


def zero_fields(complex: SimplicialComplex, degrees: Mapping[str, int]) -> FieldConfig:
    return FieldConfig(complex, {n: Cochain(complex, k) for n, k in degrees.items()})
