"""Arbitrary-precision numerical substrate: scalars, dense polynomials,
small dense linear algebra, and polynomial root finding.

All scalars are mpmath ``mpf`` values evaluated at the current working
precision (default 256 mantissa bits, see :func:`set_precision`).  Every
object here is immutable after construction and every operation is a pure
function of its inputs.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import mpmath
from mpmath import mp, mpf, mpc

DEFAULT_PRECISION_BITS = 256

# Real-root snapping threshold for poly_roots at default precision.
ROOT_SNAP_TOL = mpf("1e-20")


class NumKernelError(Exception):
    pass


class DegenerateDivisor(NumKernelError):
    """Division by the zero polynomial."""


class DegenerateInput(NumKernelError):
    """Operation applied to a degenerate argument (e.g. zero polynomial)."""


class SingularSystem(NumKernelError):
    """Linear system with a pivot below the singularity threshold."""


class EigenFailure(NumKernelError):
    """Jacobi eigenvalue sweeps failed to converge."""


def set_precision(bits: int = DEFAULT_PRECISION_BITS) -> None:
    """Set the working precision (mantissa bits) for all computations."""
    if bits < 53:
        raise ValueError("working precision below double makes no sense here")
    mp.prec = bits


def precision_digits() -> int:
    """Decimal digits carried by the current working precision."""
    return int(math.floor(mp.prec * math.log10(2)))


def tol(frac: int) -> mpf:
    """Tolerance 10^-(precision_digits/frac), the convention used throughout."""
    return mpf(10) ** -(precision_digits() // frac)


set_precision()


def _to_mpf(x) -> mpf:
    if isinstance(x, str):
        return mpf(x)
    return mpf(x)


class Poly:
    """Dense real polynomial with ascending-order coefficients.

    The zero polynomial is represented by an empty coefficient tuple and has
    degree -1 (sentinel).  Exact zeros in the leading position are stripped
    on construction; numerically tiny leading coefficients are only removed
    by an explicit :meth:`trim`.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_to_mpf(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Sequence) -> "Poly":
        p = cls.one()
        for r in roots:
            p = p * cls((-_to_mpf(r), 1))
        return p

    # -- basic queries ------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> mpf:
        if not self.coeffs:
            return mpf(0)
        return self.coeffs[-1]

    def is_monic(self, rel_tol=None) -> bool:
        if self.is_zero():
            return False
        if rel_tol is None:
            return self.leading == 1
        return abs(self.leading - 1) <= _to_mpf(rel_tol)

    def coeff(self, k: int) -> mpf:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return mpf(0)

    def max_abs_coeff(self) -> mpf:
        if not self.coeffs:
            return mpf(0)
        return max(abs(c) for c in self.coeffs)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _to_mpf(other)
            return Poly(tuple(c * a for a in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        out = [mpf(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise DegenerateDivisor("division by the zero polynomial")
        if self.degree < other.degree:
            return Poly.zero(), self
        rem = list(self.coeffs)
        dn = other.degree
        lead = other.coeffs[-1]
        quot = [mpf(0)] * (self.degree - dn + 1)
        for k in range(len(quot) - 1, -1, -1):
            q = rem[k + dn] / lead
            quot[k] = q
            for j in range(dn + 1):
                rem[k + j] -= q * other.coeffs[j]
        return Poly(quot), Poly(rem[:dn])

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __pow__(self, exp: int) -> "Poly":
        if exp < 0:
            raise ValueError("negative polynomial powers are not defined")
        out = Poly.one()
        base = self
        for _ in range(exp):
            out = out * base
        return out

    def deriv(self, k: int = 1) -> "Poly":
        p = self
        for _ in range(k):
            p = Poly(tuple(i * c for i, c in enumerate(p.coeffs) if i > 0))
        return p

    def __call__(self, x):
        # Horner's scheme; accepts mpf or mpc arguments.
        acc = mpf(0) if not isinstance(x, mpc) else mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly((mpf(0),) * k + self.coeffs)

    def trim(self, rel_eps) -> "Poly":
        """Drop leading coefficients smaller than rel_eps * max|coeff|."""
        if self.is_zero():
            return self
        cut = _to_mpf(rel_eps) * self.max_abs_coeff()
        cs = list(self.coeffs)
        while cs and abs(cs[-1]) <= cut:
            cs.pop()
        return Poly(cs)

    def __repr__(self) -> str:
        return f"Poly({[mpmath.nstr(c, 12) for c in self.coeffs]})"


def taylor_poly(f: Poly, y, k: int) -> Poly:
    """Taylor polynomial of degree <= k of f centered at y, in powers of x."""
    if k < 0:
        raise ValueError("Taylor order must be nonnegative")
    y = _to_mpf(y)
    base = Poly((-y, 1))
    out = Poly.zero()
    fact = mpf(1)
    power = Poly.one()
    g = f
    for nu in range(k + 1):
        if nu > 0:
            fact *= nu
            power = power * base
            g = g.deriv()
        out = out + power * (g(y) / fact)
    return out


class SymMatrix:
    """Dense symmetric matrix with a single physical store per entry pair."""

    __slots__ = ("order", "_data")

    def __init__(self, order: int, entries=None):
        if order <= 0:
            raise ValueError("order must be positive")
        self.order = order
        # Row-major upper triangle (i <= j).
        self._data = [mpf(0)] * (order * (order + 1) // 2)
        if entries is not None:
            for i in range(order):
                for j in range(i, order):
                    self.set(i, j, entries[i][j])

    def _idx(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return i * self.order - i * (i - 1) // 2 + (j - i)

    def get(self, i: int, j: int) -> mpf:
        return self._data[self._idx(i, j)]

    def set(self, i: int, j: int, v) -> None:
        self._data[self._idx(i, j)] = _to_mpf(v)

    def dense(self):
        return [[self.get(i, j) for j in range(self.order)] for i in range(self.order)]

    def frobenius(self) -> mpf:
        s = mpf(0)
        for i in range(self.order):
            for j in range(self.order):
                s += self.get(i, j) ** 2
        return mpmath.sqrt(s)

    def submatrix(self, keep: Sequence[int]) -> "SymMatrix":
        out = SymMatrix(len(keep))
        for a, i in enumerate(keep):
            for b, j in enumerate(keep):
                if a <= b:
                    out.set(a, b, self.get(i, j))
        return out


def sym_eigen(M: SymMatrix, max_sweeps: int = 64) -> list:
    """Eigenvalues of a symmetric matrix via cyclic two-sided Jacobi rotations.

    Returns the eigenvalues sorted ascending.  The off-diagonal residual
    after the sweeps is below 10^-(precision_digits/2) * ||M||_F.
    """
    n = M.order
    a = M.dense()
    if n == 1:
        return [a[0][0]]
    thresh = tol(2) * max(M.frobenius(), mpf(1))

    def offdiag():
        s = mpf(0)
        for i in range(n):
            for j in range(i + 1, n):
                s += a[i][j] ** 2
        return mpmath.sqrt(2 * s)

    for _ in range(max_sweeps):
        if offdiag() <= thresh:
            break
        for p in range(n):
            for q in range(p + 1, n):
                if a[p][q] == 0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2 * a[p][q])
                t = mpmath.sign(theta) / (abs(theta) + mpmath.sqrt(theta**2 + 1))
                if theta == 0:
                    t = mpf(1)
                c = 1 / mpmath.sqrt(t**2 + 1)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
    else:
        if offdiag() > thresh:
            raise EigenFailure("Jacobi sweeps did not converge")
    return sorted(a[i][i] for i in range(n))


def solve_dense(A: Sequence[Sequence], b: Sequence) -> list:
    """Solve A x = b by Gaussian elimination with partial pivoting."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("dimension mismatch")
    M = [[_to_mpf(v) for v in row] + [_to_mpf(b[i])] for i, row in enumerate(A)]
    scale = max((abs(v) for row in M for v in row), default=mpf(0))
    pivot_floor = tol(2) * max(scale, mpf(1))
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        if abs(M[piv][col]) <= pivot_floor:
            raise SingularSystem(f"pivot below threshold at column {col}")
        M[col], M[piv] = M[piv], M[col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            if f == 0:
                continue
            for c in range(col, n + 1):
                M[r][c] -= f * M[col][c]
    x = [mpf(0)] * n
    for r in range(n - 1, -1, -1):
        acc = M[r][n]
        for c in range(r + 1, n):
            acc -= M[r][c] * x[c]
        x[r] = acc / M[r][r]
    return x


def cholesky_pd(M: SymMatrix) -> bool:
    """True iff M admits a Cholesky factorization with strictly positive pivots."""
    n = M.order
    a = M.dense()
    L = [[mpf(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = a[i][j]
            for k in range(j):
                s -= L[i][k] * L[j][k]
            if i == j:
                if s <= 0:
                    return False
                L[i][i] = mpmath.sqrt(s)
            else:
                L[i][j] = s / L[j][j]
    return True


def poly_roots(p: Poly, snap_tol=None) -> list:
    """All roots of p as (re, im) pairs, sorted by real part then imaginary.

    Roots come from mpmath's arbitrary-precision solver and are polished by
    a few Newton steps at working precision.  Near-real roots are snapped to
    the real axis when |im| < snap_tol * (1 + |re|).
    """
    if p.is_zero():
        raise DegenerateInput("zero polynomial has no well-defined roots")
    if p.degree < 1:
        return []
    if snap_tol is None:
        snap_tol = ROOT_SNAP_TOL
    coeffs_desc = list(reversed(p.coeffs))
    roots = mpmath.polyroots(coeffs_desc, maxsteps=200, extraprec=mp.prec // 2)
    dp = p.deriv()
    polished = []
    for r in roots:
        z = mpc(r)
        for _ in range(3):
            d = dp(z)
            if d == 0:
                break
            step = p(z) / d
            z = z - step
            if abs(step) <= mpf(2) ** (-mp.prec) * (1 + abs(z)):
                break
        polished.append(z)
    out = []
    for z in polished:
        re, im = mpf(z.real), mpf(z.imag)
        if abs(im) < _to_mpf(snap_tol) * (1 + abs(re)):
            im = mpf(0)
        out.append((re, im))
    out.sort(key=lambda t: (t[0], t[1]))
    return out
