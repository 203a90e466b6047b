"""Exact rational linear algebra on lists of ``Fraction``.

Matrices are plain lists of rows.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]
Matrix = list[list[Fraction]]


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``.

    Floats are rejected: every quantity in this package is exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational literal")
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vec(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def format_rational(x: Fraction) -> str:
    """Canonical ``"p/q"`` rendering (``"p"`` when the denominator is 1)."""
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def bilinear(form: Sequence[Sequence], u: Sequence, v: Sequence) -> Fraction:
    return sum(
        (u[i] * form[i][j] * v[j] for i in range(len(u)) for j in range(len(v))),
        Fraction(0),
    )


def _echelon(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(map(to_fraction, r)) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_echelon([list(r) for r in rows])[1])


def det(rows: Sequence[Sequence]) -> Fraction:
    m = [list(map(to_fraction, r)) for r in rows]
    n = len(m)
    if n == 0:
        return Fraction(1)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result *= p
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def solve(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Unique solution of the square system ``a x = b``, or None if singular."""
    n = len(a)
    aug = [list(map(to_fraction, row)) + [to_fraction(bi)] for row, bi in zip(a, b)]
    red, pivots = _echelon(aug)
    if pivots != list(range(n)):
        return None
    return tuple(red[i][n] for i in range(n))


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """A basis of ``{x : rows x = 0}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = _echelon([list(r) for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][f]
        basis.append(tuple(x))
    return basis


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (-1 for no points)."""
    if not points:
        return -1
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def leading_minors(form: Sequence[Sequence]) -> list[Fraction]:
    return [det([row[:k] for row in form[:k]]) for k in range(1, len(form) + 1)]


def is_negative_definite(form: Sequence[Sequence]) -> bool:
    # Sylvester: (-1)^k * (k-th leading minor) > 0.
    return all(((-1) ** k) * m > 0 for k, m in enumerate(leading_minors(form), start=1))


def charpoly(form: Sequence[Sequence]) -> list[Fraction]:
    """Coefficients ``c_0..c_n`` (highest degree first) of ``det(xI - M)``.

    Faddeev-LeVerrier recursion, exact over the rationals.
    """
    a = [list(map(to_fraction, r)) for r in form]
    n = len(a)
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        prev_c = coeffs[-1]
        m = [
            [
                sum((a[i][t] * m[t][j] for t in range(n)), Fraction(0))
                + (prev_c if i == j else 0)
                for j in range(n)
            ]
            for i in range(n)
        ]
        am = [[sum((a[i][t] * m[t][j] for t in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        trace = sum((am[i][i] for i in range(n)), Fraction(0))
        coeffs.append(-trace / k)
    return coeffs


def _sign_changes(coeffs: Sequence[Fraction]) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def inertia(form: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric matrix.

    The characteristic polynomial of a real symmetric matrix has only real
    roots, so Descartes' rule of signs is exact here.
    """
    c = charpoly(form)
    n = len(c) - 1
    zero = 0
    while zero < n and c[n - zero] == 0:
        zero += 1
    trimmed = c[: n + 1 - zero]
    pos = _sign_changes(trimmed)
    deg = len(trimmed) - 1
    neg = _sign_changes([coef * (-1) ** (deg - i) for i, coef in enumerate(trimmed)])
    return pos, neg, zero


def show(v: Sequence) -> str:
    """Human-readable vector for messages: ``(1, -1/2)``."""
    return "(" + ", ".join(format_rational(x) for x in v) + ")"
