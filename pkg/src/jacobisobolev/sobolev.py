"""Discrete Jacobi-Sobolev inner products and the construction of their
monic orthogonal polynomials S_n.

The inner product is the Jacobi one plus point masses lambda_{j,k} on k-th
derivatives at locations c_j outside (-1, 1).  S_n is obtained from the
monic Jacobi P_n by solving the d* x d* linear system for the derivative
vector of S_n at the mass points and subtracting the corresponding
combination of derivative Christoffel-Darboux kernels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import mpmath
from mpmath import mpf

from .jacobi import JacobiCache, JacobiParams, build_jacobi
from .numkernel import Poly, SymMatrix, cholesky_pd, poly_roots, solve_dense, taylor_poly, tol

# Below this separation the closed Christoffel-Darboux form of the kernel
# is numerically unsafe and the direct sum is used instead.
CD_SEPARATION = mpf("1e-8")


class SobolevError(Exception):
    pass


class InvalidMassPoint(SobolevError):
    pass


class NotApplicable(SobolevError):
    pass


class InternalContradiction(SobolevError):
    """The kernel linear system was singular, which the theory rules out."""


@dataclass(frozen=True)
class MassPoint:
    """Location c with derivative-order masses [(k, lambda_{k})], |c| >= 1.

    Zero-mass terms are dropped on construction, so the stored terms are
    exactly the active set at this location.
    """

    c: mpf
    terms: tuple

    def __init__(self, c, terms):
        object.__setattr__(self, "c", mpf(c))
        cleaned = []
        for k, lam in terms:
            lam = mpf(lam)
            if lam < 0:
                raise InvalidMassPoint("masses must be nonnegative")
            if lam > 0:
                cleaned.append((int(k), lam))
        cleaned.sort()
        if abs(self.c) < 1:
            raise InvalidMassPoint("mass points must lie outside (-1, 1)")
        if not cleaned:
            raise InvalidMassPoint("a mass point needs at least one positive mass")
        orders = [k for k, _ in cleaned]
        if len(set(orders)) != len(orders):
            raise InvalidMassPoint("duplicate derivative orders at one location")
        object.__setattr__(self, "terms", tuple(cleaned))

    @property
    def max_order(self) -> int:
        return self.terms[-1][0]


@dataclass(frozen=True)
class SobolevProduct:
    """Jacobi parameters plus the discrete mass-point data."""

    jacobi: JacobiParams
    points: tuple

    def __init__(self, jacobi: JacobiParams, points):
        object.__setattr__(self, "jacobi", jacobi)
        pts = sorted(points, key=lambda p: p.c)
        cs = [p.c for p in pts]
        if len(set(cs)) != len(cs):
            raise InvalidMassPoint("mass-point locations must be distinct")
        object.__setattr__(self, "points", tuple(pts))

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def d(self) -> int:
        return sum(p.max_order + 1 for p in self.points)

    @property
    def active_pairs(self) -> list:
        """Canonical I+ ordering: points by ascending c, orders ascending.

        Entries are (point_index, k, lambda).
        """
        out = []
        for j, p in enumerate(self.points):
            for k, lam in p.terms:
                out.append((j, k, lam))
        return out

    @property
    def d_star(self) -> int:
        return len(self.active_pairs)

    def rho(self) -> Poly:
        out = Poly.one()
        for p in self.points:
            out = out * Poly((-p.c, 1)) ** (p.max_order + 1)
        return out

    def rho_n_points(self) -> Poly:
        return Poly.from_roots([p.c for p in self.points])

    def rho_excess(self) -> Poly:
        """rho / rho_N: each location with multiplicity d_j."""
        out = Poly.one()
        for p in self.points:
            out = out * Poly((-p.c, 1)) ** p.max_order
        return out

    def rho_jk(self, j: int, k: int) -> Poly:
        """rho with the factor at c_j reduced by k+1 powers."""
        out = Poly.one()
        for i, p in enumerate(self.points):
            mult = p.max_order + 1 - (k + 1 if i == j else 0)
            if mult < 0:
                raise ValueError("derivative order exceeds d_j")
            out = out * Poly((-p.c, 1)) ** mult
        return out


def inner_mu(f: Poly, g: Poly, cache: JacobiCache) -> mpf:
    """Jacobi inner product of two polynomials, via Jacobi-basis expansion.

    Exact at working precision: expand f*g in the monic Jacobi basis and
    keep only the P_0 component, whose integral is h_0.
    """
    h = f * g
    if h.is_zero():
        return mpf(0)
    cache.extend(h.degree)
    for m in range(h.degree, 0, -1):
        c = h.coeff(m)
        if c != 0:
            h = h - c * cache.poly(m)
    return h.coeff(0) * cache.norm(0)


def inner_sobolev(f: Poly, g: Poly, product: SobolevProduct, cache: JacobiCache) -> mpf:
    """The full discrete Sobolev inner product."""
    acc = inner_mu(f, g, cache)
    for j, k, lam in product.active_pairs:
        c = product.points[j].c
        acc += lam * f.deriv(k)(c) * g.deriv(k)(c)
    return acc


def kernel_dk(cache: JacobiCache, n: int, ell: int, k: int, x, y) -> mpf:
    """Derivative kernel K_{n-1}^{(ell,k)}(x, y) by direct summation."""
    x, y = mpf(x), mpf(y)
    acc = mpf(0)
    for nu in range(n):
        p = cache.poly(nu)
        acc += p.deriv(ell)(x) * p.deriv(k)(y) / cache.norm(nu)
    return acc


def kernel_dk_closed(cache: JacobiCache, n: int, k: int, x, y) -> mpf:
    """Closed Christoffel-Darboux form of K_{n-1}^{(0,k)}; needs x far from y."""
    x, y = mpf(x), mpf(y)
    if abs(x - y) <= CD_SEPARATION:
        raise ValueError("closed kernel form is unstable near the diagonal")
    pn, pm = cache.poly(n), cache.poly(n - 1)
    qn = taylor_poly(pn, y, k)
    qm = taylor_poly(pm, y, k)
    num = mpmath.factorial(k) * (qm(x) * pn(x) - qn(x) * pm(x))
    return num / (cache.norm(n - 1) * (x - y) ** (k + 1))


def kernel_poly_dk(cache: JacobiCache, n: int, k: int, y) -> Poly:
    """K_{n-1}^{(0,k)}(x, y) as a polynomial in x."""
    y = mpf(y)
    out = Poly.zero()
    for nu in range(n):
        p = cache.poly(nu)
        out = out + (p.deriv(k)(y) / cache.norm(nu)) * p
    return out


@dataclass
class SobolevFamily:
    """S_0..S_n with derivative vectors at the mass points and the
    connection-formula numerators (A2, B2) over the denominator rho."""

    product: SobolevProduct
    jacobi_cache: JacobiCache
    sob_polys: list = field(default_factory=list)
    deriv_vectors: list = field(default_factory=list)
    conn_numerators: list = field(default_factory=list)

    @property
    def top(self) -> int:
        return len(self.sob_polys) - 1

    def poly(self, m: int) -> Poly:
        self.extend(m)
        return self.sob_polys[m]

    def deriv_vector(self, m: int) -> list:
        self.extend(m)
        return self.deriv_vectors[m]

    def sobolev_norm_sq(self, m: int) -> mpf:
        s = self.poly(m)
        return inner_sobolev(s, s, self.product, self.jacobi_cache)

    def extend(self, n: int) -> None:
        while self.top < n:
            self._build_next()

    def _build_next(self) -> None:
        m = self.top + 1
        cache = self.jacobi_cache
        product = self.product
        pairs = product.active_pairs
        dstar = len(pairs)
        pm = cache.poly(m)

        if m == 0 or dstar == 0:
            sm = pm
            sder = [pm.deriv(k)(product.points[j].c) for j, k, _ in pairs]
            self.sob_polys.append(sm)
            self.deriv_vectors.append(sder)
            self.conn_numerators.append(self._connection_numerators(m, sder))
            return

        # Kernel matrix K_{m-1}(C, C) over the active pairs.
        kmat = [
            [
                kernel_dk(cache, m, ki, kj, product.points[ji].c, product.points[jj].c)
                for jj, kj, _ in pairs
            ]
            for ji, ki, _ in pairs
        ]
        # Positive-definiteness of L^{-1} + K backs nonsingularity of I + K L.
        if m >= product.d:
            shifted = SymMatrix(dstar)
            for i in range(dstar):
                for j in range(i, dstar):
                    v = (kmat[i][j] + kmat[j][i]) / 2
                    if i == j:
                        v += 1 / pairs[i][2]
                    shifted.set(i, j, v)
            if not cholesky_pd(shifted):
                raise InternalContradiction(
                    f"L^-1 + K_{m - 1}(C,C) failed the positive-definiteness check"
                )

        A = [
            [kmat[i][j] * pairs[j][2] + (1 if i == j else 0) for j in range(dstar)]
            for i in range(dstar)
        ]
        rhs = [pm.deriv(k)(product.points[j].c) for j, k, _ in pairs]
        try:
            sder = solve_dense(A, rhs)
        except Exception as exc:  # theoretically impossible for valid products
            raise InternalContradiction(str(exc)) from exc

        sm = pm
        for (j, k, lam), sval in zip(pairs, sder):
            sm = sm - (lam * sval) * kernel_poly_dk(cache, m, k, product.points[j].c)

        # Consistency: the solved derivative vector equals direct evaluation.
        check_tol = tol(3) * max(mpf(1), max(abs(v) for v in sder))
        for (j, k, _), sval in zip(pairs, sder):
            direct = sm.deriv(k)(product.points[j].c)
            if abs(direct - sval) > check_tol:
                raise InternalContradiction(
                    f"derivative vector mismatch at pair ({j},{k}): {direct} vs {sval}"
                )

        self.sob_polys.append(sm)
        self.deriv_vectors.append(sder)
        self.conn_numerators.append(self._connection_numerators(m, sder))

    def _connection_numerators(self, m: int, sder: list):
        """(A2, B2): numerators over rho of the connection coefficients
        F_{1,m}, G_{1,m} with S_m = F_{1,m} P_m + G_{1,m} P_{m-1}."""
        product, cache = self.product, self.jacobi_cache
        rho = product.rho()
        if m == 0:
            return rho, Poly.zero()
        a2 = rho
        b2 = Poly.zero()
        hm1 = cache.norm(m - 1)
        for (j, k, lam), sval in zip(product.active_pairs, sder):
            c = product.points[j].c
            coef = mpmath.factorial(k) * lam * sval / hm1
            rjk = product.rho_jk(j, k)
            a2 = a2 - coef * (taylor_poly(cache.poly(m - 1), c, k) * rjk)
            b2 = b2 + coef * (taylor_poly(cache.poly(m), c, k) * rjk)
        return a2, b2


def build_family(product: SobolevProduct, n: int) -> SobolevFamily:
    """Construct the Sobolev family S_0..S_n for the given product."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    max_k = max((k for _, k, _ in product.active_pairs), default=0)
    cache = build_jacobi(product.jacobi, n + max_k + 2)
    fam = SobolevFamily(product, cache)
    fam.extend(n)
    return fam


def is_sequentially_ordered(product: SobolevProduct):
    """Decide whether the product is sequentially ordered w.r.t. (-1, 1).

    Returns (flag, ordering); ordering is the witness list of (c, k) pairs
    when the flag is true, else None.  Repeated locations are rejected: two
    active pairs at one point always violate the hull condition as the
    second occurrence sits on the hull generated by the first.
    """
    pairs = [(product.points[j].c, k) for j, k, _ in product.active_pairs]
    by_order = sorted(pairs, key=lambda t: t[1])

    def admissible(seq) -> bool:
        lo, hi = mpf(-1), mpf(1)
        seen = set()
        for c, _ in seq:
            if lo < c < hi or c in seen:
                return False
            seen.add(c)
            lo, hi = min(lo, c), max(hi, c)
        return True

    orders = [k for _, k in by_order]
    if orders != sorted(orders):
        return False, None
    # Orders must stay nondecreasing; permute only within equal-order blocks.
    for perm in permutations(range(len(by_order))):
        seq = [by_order[i] for i in perm]
        if [k for _, k in seq] != orders:
            continue
        if admissible(seq):
            return True, seq
    return False, None


def quasi_orthogonality_check(family: SobolevFamily, n: int) -> mpf:
    """Max |<S_n, rho_hat * x^i>_mu| over 0 <= i <= n - d - 1."""
    product = family.product
    d = product.d
    if n <= d:
        raise NotApplicable(f"quasi-orthogonality needs n > d (= {d})")
    rho_hat = Poly.one()
    for p in product.points:
        if p.c <= -1:
            rho_hat = rho_hat * Poly((-p.c, 1)) ** (p.max_order + 1)
        else:
            rho_hat = rho_hat * Poly((p.c, -1)) ** (p.max_order + 1)
    sn = family.poly(n)
    worst = mpf(0)
    for i in range(n - d):
        val = abs(inner_mu(sn, rho_hat * Poly.x() ** i, family.jacobi_cache))
        worst = max(worst, val)
    return worst


@dataclass
class ZeroReport:
    roots: list  # (re, im) pairs, sorted
    real_roots: list
    count_inside: int
    sign_changes_inside: int
    near_mass_points: list  # (c_j, closest real root) per mass point


def zeros_of(family: SobolevFamily, n: int) -> ZeroReport:
    """Zeros of S_n with the interval counts used by the zero-location lemmas."""
    if n < 1:
        raise ValueError("need n >= 1")
    sn = family.poly(n)
    roots = poly_roots(sn)
    real_roots = sorted(re for re, im in roots if im == 0)
    inside = [r for r in real_roots if -1 < r < 1]

    # Sign alternation of S_n at midpoints between consecutive interior roots.
    changes = 0
    if inside:
        grid = [mpf(-1)] + inside + [mpf(1)]
        probes = [(a + b) / 2 for a, b in zip(grid, grid[1:])]
        signs = [mpmath.sign(sn(p)) for p in probes if sn(p) != 0]
        changes = sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 * s1 < 0)

    near = []
    for p in family.product.points:
        if real_roots:
            near.append((p.c, min(real_roots, key=lambda r: abs(r - p.c))))
        else:
            near.append((p.c, None))
    return ZeroReport(roots, real_roots, len(inside), changes, near)
