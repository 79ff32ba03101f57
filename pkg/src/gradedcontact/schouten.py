"""Multivector fields on R^d with sympy coefficients and their Schouten bracket.

This is deliberately independent of the graded engine: multivectors are
sums of ``coeff * d_{i1} ^ ... ^ d_{ik}`` over sorted index tuples and the
bracket is the bilinear extension of the Lie bracket of vector fields over
wedge products.

Sign convention: for decomposable arguments

    [X1^...^Xk, Y1^...^Yl] = sum_{i,j} (-1)^{i+j} [Xi, Yj] ^ X1..^Xi..^Xk ^ Y1..^Yj..^Yl

and ``[X1^...^Xk, f] = sum_i (-1)^{k-i} Xi(f) X1..^Xi..^Xk``, and the
result is negated.  With this overall sign the bracket agrees with the
degree -1 Poisson bracket of ``T*[1]M`` (``d_i <-> p_i``) in every degree, a
Jacobi pair satisfies ``[L, L] = 2 E ^ L`` and ``[L, E] = 0``, and on two
vector fields it returns ``-[X, Y]``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Mapping, Sequence

import sympy


def _perm_sign(seq: Sequence[int]) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
            elif seq[i] == seq[j]:
                return 0
    return sign


class Multivector:
    """A k-vector field: mapping sorted index tuple -> sympy coefficient."""

    def __init__(self, symbols: Sequence[sympy.Symbol], terms: Mapping[tuple, object] | None = None):
        self.symbols = tuple(symbols)
        clean = {}
        for idx, c in (terms or {}).items():
            c = sympy.expand(c)
            if c != 0:
                sign = _perm_sign(idx)
                if sign == 0:
                    continue
                key = tuple(sorted(idx))
                clean[key] = sympy.expand(clean.get(key, 0) + sign * c)
                if clean[key] == 0:
                    del clean[key]
        self.terms = clean

    @classmethod
    def function(cls, symbols, f) -> "Multivector":
        return cls(symbols, {(): f})

    @classmethod
    def vector(cls, symbols, comps: Sequence) -> "Multivector":
        return cls(symbols, {(i,): c for i, c in enumerate(comps)})

    @classmethod
    def bivector(cls, symbols, matrix) -> "Multivector":
        """``(1/2) L^{ij} d_i ^ d_j`` from an antisymmetric matrix."""
        d = len(symbols)
        return cls(symbols, {(i, j): matrix[i][j] for i in range(d) for j in range(i + 1, d)})

    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Multivector") -> "Multivector":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return Multivector(self.symbols, terms)

    def __neg__(self):
        return Multivector(self.symbols, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Multivector":
        return Multivector(self.symbols, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Multivector) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"({c})" + "".join(f"*d{self.symbols[i]}" for i in k) for k, c in sorted(self.terms.items())
        )

    def coefficient(self, idx: tuple):
        return self.terms.get(tuple(idx), sympy.Integer(0))


def wedge(P: Multivector, Q: Multivector) -> Multivector:
    terms: dict = {}
    for a, ca in P.terms.items():
        for b, cb in Q.terms.items():
            idx = a + b
            sign = _perm_sign(idx)
            if sign:
                key = tuple(sorted(idx))
                terms[key] = terms.get(key, 0) + sign * ca * cb
    return Multivector(P.symbols, terms)


# vector fields as coefficient tuples ---------------------------------------


def _vf_apply(symbols, X: tuple, f):
    return sum(X[i] * sympy.diff(f, symbols[i]) for i in range(len(symbols)))


def _vf_bracket(symbols, X: tuple, Y: tuple) -> tuple:
    return tuple(
        sympy.expand(_vf_apply(symbols, X, Y[j]) - _vf_apply(symbols, Y, X[j]))
        for j in range(len(symbols))
    )


def _decompose(symbols, idx: tuple, coeff) -> list[tuple]:
    """``coeff d_{i1} ^ d_{i2} ^ ...`` as a list of vector fields (coeff on the first)."""
    d = len(symbols)
    out = []
    for pos, i in enumerate(idx):
        comps = [sympy.Integer(0)] * d
        comps[i] = coeff if pos == 0 else sympy.Integer(1)
        out.append(tuple(comps))
    return out


def _wedge_fields(symbols, fields: list[tuple], scalar=1) -> Multivector:
    result = Multivector.function(symbols, scalar)
    for X in fields:
        result = wedge(result, Multivector.vector(symbols, X))
    return result


def _bracket_decomposable(symbols, Xs: list[tuple], Ys: list[tuple]) -> Multivector:
    total = Multivector(symbols)
    for i, Xi in enumerate(Xs, start=1):
        for j, Yj in enumerate(Ys, start=1):
            rest = [X for a, X in enumerate(Xs, start=1) if a != i] + [
                Y for b, Y in enumerate(Ys, start=1) if b != j
            ]
            term = _wedge_fields(symbols, [_vf_bracket(symbols, Xi, Yj)] + rest)
            total = total + term.scale((-1) ** (i + j))
    return total


def _bracket_with_function(symbols, Xs: list[tuple], f) -> Multivector:
    k = len(Xs)
    total = Multivector(symbols)
    for i, Xi in enumerate(Xs, start=1):
        rest = [X for a, X in enumerate(Xs, start=1) if a != i]
        total = total + _wedge_fields(symbols, rest, _vf_apply(symbols, Xi, f)).scale((-1) ** (k - i))
    return total


def _marle(P: Multivector, Q: Multivector) -> Multivector:
    symbols = P.symbols
    total = Multivector(symbols)
    for a, ca in P.terms.items():
        for b, cb in Q.terms.items():
            if not a and not b:
                continue
            if a and b:
                part = _bracket_decomposable(
                    symbols, _decompose(symbols, a, ca), _decompose(symbols, b, cb)
                )
            elif a:
                part = _bracket_with_function(symbols, _decompose(symbols, a, ca), cb)
            else:
                # [f, Q] = -(-1)^{(0-1)(q-1)} [Q, f]
                q = len(b)
                part = _bracket_with_function(symbols, _decompose(symbols, b, cb), ca).scale(
                    -((-1) ** (q - 1))
                )
            total = total + part
    return total


def schouten(P: Multivector, Q: Multivector) -> Multivector:
    """Schouten bracket of multivector fields (see module docstring for signs)."""
    return -_marle(P, Q)


def evaluate_on(P: Multivector, fs: Sequence) -> object:
    """``P(df_1, ..., df_k)`` for a homogeneous k-vector."""
    symbols = P.symbols
    k = len(fs)
    total = sympy.Integer(0)
    grads = [[sympy.diff(f, s) for s in symbols] for f in fs]
    for idx, c in P.terms.items():
        if len(idx) != k:
            continue
        det = sympy.Matrix([[grads[r][i] for i in idx] for r in range(k)]).det() if k else 1
        total += c * det
    return sympy.expand(total)


def all_index_tuples(d: int, k: int):
    return combinations(range(d), k)
