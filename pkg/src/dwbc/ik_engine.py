"""Determinant formulas and the boundary-correlation polynomial family.

The inhomogeneous partition function is the Izergin-Korepin determinant

    Z_N = prod a(l_a,n_k) b(l_a,n_k) / (prod d(l_b,l_a) prod d(n_j,n_k))
          * det[ phi(l_a, n_k) ],      phi = c / (a b),

with a(l,n) = sin(l-n+eta), b(l,n) = sin(l-n-eta), c = sin 2eta and
d(l,l') = sin(l-l').  In the homogeneous limit it becomes a Hankel
determinant of derivatives of phi(l); those derivatives are generated
exactly through the cotangent recurrence (each one is an integer
polynomial in cot(l-eta) and cot(l+eta)), because finite differences
lose every digit well before the 2N-2 orders the formula needs.

The same module owns the generating-polynomial family h_M(z) of the
one-point boundary correlation and its multivariate extension
h_{N,s}(z_1..z_s), a symmetric polynomial of degree N-1 per variable
defined by a Vandermonde-divided determinant.  Two forms are provided:
evaluation at pairwise distinct points (plain determinant) and an exact
polynomial form in which the Vandermonde is divided out symbolically by
divided differences, needed wherever arguments collide (residues at
z = 1 substitute coincident rational functions for the points).

Also here, being determinant-algebra of the same kind: the
doubly-antisymmetrized kernel W_s(x; y) and its polynomial numerator
P_s, which tie the antisymmetrization identity machinery to Z_s.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DegeneratePoints, NearDegenerate, Singular
from .exact_core import (
    ExactPoly,
    MultiPoly,
    as_fraction,
    complete_homogeneous,
    poly_det,
)
from .lattice_oracle import WeightMatrix, WeightTriple, boundary_generating_poly

DEGENERACY_TOL = 1e-8


# ---------------------------------------------------------------------------
# trigonometric parametrization
# ---------------------------------------------------------------------------

def a_fn(l, n, eta):
    return cmath.sin(l - n + eta)


def b_fn(l, n, eta):
    return cmath.sin(l - n - eta)


def d_fn(x, y):
    return cmath.sin(x - y)


def e_fn(x, y, eta):
    return cmath.sin(x - y + 2 * eta)


@dataclass(frozen=True)
class TrigParams:
    """Spectral parameters of the inhomogeneous model.

    lambdas attach to vertical lines (right to left), nus to horizontal
    lines (top to bottom); eta is the coupling.  Each set must be
    pairwise distinct or the determinant prefactors are 0/0; the
    coordinate-wavefunction limit legitimately takes all lambdas equal,
    which `allow_coincident_lambdas` admits (nu's stay constrained).
    """

    lambdas: tuple
    nus: tuple
    eta: complex

    def __init__(self, lambdas, nus, eta, allow_coincident_lambdas=False):
        object.__setattr__(self, "lambdas", tuple(lambdas))
        object.__setattr__(self, "nus", tuple(nus))
        object.__setattr__(self, "eta", eta)
        sets = [("nu", self.nus)]
        if not allow_coincident_lambdas:
            sets.append(("lambda", self.lambdas))
        for name, vals in sets:
            for i in range(len(vals)):
                for j in range(i + 1, len(vals)):
                    if abs(d_fn(vals[i], vals[j])) <= DEGENERACY_TOL:
                        raise NearDegenerate(
                            f"{name}[{i}] and {name}[{j}] collide within "
                            f"{DEGENERACY_TOL}")

    @property
    def n(self):
        return len(self.lambdas)

    def weight_matrix(self) -> WeightMatrix:
        """Numeric vertex weights a_{alpha k} = a(l_alpha, nu_k) etc."""
        a = [[a_fn(l, v, self.eta) for v in self.nus] for l in self.lambdas]
        b = [[b_fn(l, v, self.eta) for v in self.nus] for l in self.lambdas]
        return WeightMatrix(a, b, cmath.sin(2 * self.eta))


def homogeneous_abc(lam, eta):
    """Weights of the homogeneous model (nu = 0): a = sin(lam+eta),
    b = sin(lam-eta), c = sin 2eta."""
    return (cmath.sin(lam + eta), cmath.sin(lam - eta), cmath.sin(2 * eta))


class NumericTriple:
    """Homogeneous complex weights with the lattice_oracle interface."""

    def __init__(self, a, b, c):
        self.a, self.b, self.c = complex(a), complex(b), complex(c)

    def delta(self):
        return (self.a**2 + self.b**2 - self.c**2) / (2 * self.a * self.b)

    def t(self):
        return self.b / self.a

    def weight(self, alpha, k, kind):
        return getattr(self, kind)

    @staticmethod
    def zero():
        return 0j


# ---------------------------------------------------------------------------
# Izergin-Korepin determinants
# ---------------------------------------------------------------------------

def ik_determinant(p: TrigParams) -> complex:
    """Z_N of the inhomogeneous model via the determinant formula."""
    N, eta = p.n, p.eta
    pref = 1 + 0j
    for l in p.lambdas:
        for v in p.nus:
            pref *= a_fn(l, v, eta) * b_fn(l, v, eta)
    den = 1 + 0j
    for i in range(N):
        for j in range(i + 1, N):
            den *= d_fn(p.lambdas[j], p.lambdas[i]) * d_fn(p.nus[i], p.nus[j])
    c = cmath.sin(2 * eta)
    m = np.array(
        [[c / (a_fn(l, v, eta) * b_fn(l, v, eta)) for v in p.nus]
         for l in p.lambdas],
        dtype=complex,
    )
    return pref / den * complex(np.linalg.det(m))


@lru_cache(maxsize=None)
def _phi_cot_polys(nmax: int):
    """Integer polynomials q_n with d^n/dl^n cot(l+const) = q_n(cot).

    q_0(x) = x and differentiation acts on monomials as
    D x^k = -k (x^(k-1) + x^(k+1)), since (cot)' = -(1 + cot^2).
    """
    polys = [ExactPoly([0, 1])]
    for _ in range(nmax):
        prev = polys[-1]
        nxt = ExactPoly([0])
        for k, cf in enumerate(prev.coeffs):
            if cf == 0 or k == 0:
                continue
            nxt = nxt + ExactPoly([0] * (k - 1) + [-k * cf, 0, -k * cf])
        polys.append(nxt)
    return polys


def phi_derivatives(lam, eta, nmax: int):
    """[d^n phi / d lam^n for n = 0..nmax] with phi = sin2eta /
    (sin(lam-eta) sin(lam+eta)) = cot(lam-eta) - cot(lam+eta)."""
    su, sv = cmath.sin(lam - eta), cmath.sin(lam + eta)
    if min(abs(su), abs(sv)) <= DEGENERACY_TOL:
        raise Singular("lam = +/- eta (mod pi): phi undefined")
    u = cmath.cos(lam - eta) / su
    v = cmath.cos(lam + eta) / sv
    polys = _phi_cot_polys(nmax)
    return [complex(q.eval(u)) - complex(q.eval(v)) for q in polys[: nmax + 1]]


def ik_homogeneous(N: int, lam, eta) -> complex:
    """Homogeneous Z_N via the Hankel determinant of phi-derivatives."""
    a, b, _ = homogeneous_abc(lam, eta)
    cs = phi_derivatives(lam, eta, 2 * N - 2)
    m = np.array([[cs[i + k] for k in range(N)] for i in range(N)], dtype=complex)
    pref = (a * b) ** (N * N)
    for n in range(1, N):
        pref /= math.factorial(n) ** 2
    return pref * complex(np.linalg.det(m))


# ---------------------------------------------------------------------------
# boundary generating polynomials h_M and their multivariate extension
# ---------------------------------------------------------------------------

class BoundaryGenFamily:
    """Cache of h_M(z) for M = 1..N at fixed homogeneous weights.

    Exact (ExactPoly) for a WeightTriple, complex coefficient lists for
    NumericTriple; h_M(1) = 1 holds in both regimes.
    """

    def __init__(self, w):
        self.w = w
        self.exact = isinstance(w, WeightTriple)
        self._h = {}
        self._hns_cache = {}

    def h(self, M: int):
        if M not in self._h:
            hm = boundary_generating_poly(M, self.w)
            self._h[M] = hm if self.exact else list(hm)
        return self._h[M]

    def h_coeffs(self, M: int):
        hm = self.h(M)
        return list(hm.coeffs) if self.exact else list(hm)

    def htilde_coeffs(self, M: int):
        """z^(M-1) h_M(1/z): the coefficient list reversed."""
        cs = self.h_coeffs(M)
        cs = cs + [Fraction(0) if self.exact else 0j] * (M - len(cs))
        return cs[::-1]

    # -- evaluation form ----------------------------------------------

    def hns_value(self, N: int, s: int, points, tilde=False):
        """h_{N,s}(z_1..z_s) at pairwise distinct points."""
        pts = list(points)
        if len(pts) != s:
            raise ValueError("need s evaluation points")
        if s == 0:
            return Fraction(1) if self.exact else 1 + 0j
        for i in range(s):
            for j in range(i + 1, s):
                if pts[i] == pts[j] or (
                    not self.exact and abs(pts[i] - pts[j]) <= DEGENERACY_TOL
                ):
                    raise DegeneratePoints(
                        "coincident points: use the polynomial form")
        rows = []
        for i in range(1, s + 1):
            cs = self._row_coeffs(N, s, i, tilde)
            rows.append([_horner(cs, z) for z in pts])
        det = poly_det(rows)
        van = 1
        for j in range(s):
            for k in range(j + 1, s):
                van = van * (pts[k] - pts[j])
        return det / van

    # -- exact polynomial form -----------------------------------------

    def hns_poly(self, N: int, s: int, tilde=False) -> MultiPoly:
        """h_{N,s} as a symmetric MultiPoly (degree N-1 per variable).

        The Vandermonde is divided out by divided differences: the
        column of samples g_i(z_j) turns into g_i[z_1..z_j], and the
        divided difference of a monomial z^m over j nodes is the
        complete homogeneous polynomial of degree m-j+1.
        """
        key = (N, s, tilde)
        cache = self._hns_cache
        if key not in cache:
            if s == 0:
                cache[key] = MultiPoly.constant(0, Fraction(1))
            else:
                mat = []
                for i in range(1, s + 1):
                    cs = self._row_coeffs(N, s, i, tilde)
                    row = []
                    for j in range(1, s + 1):
                        entry = MultiPoly(s)
                        for m, cf in enumerate(cs):
                            if cf == 0:
                                continue
                            entry = entry + cf * complete_homogeneous(
                                s, j, m - j + 1)
                        row.append(entry)
                    mat.append(row)
                cache[key] = poly_det(mat)
        return cache[key]

    def _row_coeffs(self, N, s, i, tilde):
        """Coefficients of g_i(z) = z^(s-i) (z-1)^(i-1) h_{N-s+i}(z)."""
        base = (self.htilde_coeffs(N - s + i) if tilde
                else self.h_coeffs(N - s + i))
        poly = [Fraction(0)] * (s - i) + list(base)  # z^(s-i) shift
        out = poly
        for _ in range(i - 1):  # multiply by (z - 1)
            out = [-out[0]] + [out[k - 1] - out[k] for k in range(1, len(out))] \
                  + [out[-1]]
        return out


def _horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def family(w) -> BoundaryGenFamily:
    """Memoized family for hashable (exact) weights."""
    return BoundaryGenFamily(w)


def build_hNs(N: int, s: int, w: WeightTriple, points):
    """Evaluate h_{N,s} at pairwise distinct exact points."""
    return family(w).hns_value(N, s, [as_fraction(p) for p in points])


def build_hNs_poly(N: int, s: int, w: WeightTriple) -> MultiPoly:
    return family(w).hns_poly(N, s)


# ---------------------------------------------------------------------------
# partially inhomogeneous partition function
# ---------------------------------------------------------------------------

def gamma_change(xi, lam, eta):
    """gamma(xi) = [a(lam,0)/b(lam,0)] * [b(lam+xi,0)/a(lam+xi,0)]."""
    return (a_fn(lam, 0, eta) / b_fn(lam, 0, eta)) \
        * (b_fn(lam + xi, 0, eta) / a_fn(lam + xi, 0, eta))


def partially_inhomogeneous_Z(lambdas, lam0, eta) -> complex:
    """Z_N(l_1..l_N; 0..0) from the homogeneous Z and h_{N,N} evaluated
    at gamma(l_j - lam0)."""
    N = len(lambdas)
    a0, b0, c0 = homogeneous_abc(lam0, eta)
    fam = family_numeric(NumericTriple(a0, b0, c0))
    z_hom = ik_homogeneous(N, lam0, eta)
    pref = 1 + 0j
    for l in lambdas:
        pref *= (a_fn(l, 0, eta) / a0) ** (N - 1)
    pts = [gamma_change(l - lam0, lam0, eta) for l in lambdas]
    try:
        h = fam.hns_value(N, N, pts)
    except DegeneratePoints:
        h = fam.hns_poly(N, N).eval(pts)
    return z_hom * pref * h


_numeric_families = {}


def family_numeric(w: NumericTriple) -> BoundaryGenFamily:
    key = (w.a, w.b, w.c)
    if key not in _numeric_families:
        _numeric_families[key] = BoundaryGenFamily(w)
    return _numeric_families[key]


# ---------------------------------------------------------------------------
# the antisymmetrization kernel W_s and its polynomial numerator P_s
# ---------------------------------------------------------------------------

def psi_kernel(x, y, delta):
    """psi(x,y) = 1 / ((1 - x y)(x + y - 2*Delta*x*y))."""
    return 1 / ((1 - x * y) * (x + y - 2 * delta * x * y))


def cantini_W_value(xs, ys, delta):
    """W_s(x_1..x_s; y_1..y_s) straight from its definition:
    prod (x_j + y_k - 2D x_j y_k) / (Vand_x Vand_y) * det[psi(x_j,y_k)].

    Requires pairwise distinct xs and ys.
    """
    s = len(xs)
    pref = 1
    for x in xs:
        for y in ys:
            pref = pref * (x + y - 2 * delta * x * y)
    van = 1
    for j in range(s):
        for k in range(j + 1, s):
            van = van * (xs[k] - xs[j]) * (ys[k] - ys[j])
    mat = [[psi_kernel(x, y, delta) for y in ys] for x in xs]
    return pref * poly_det(mat) / van


@lru_cache(maxsize=None)
def cantini_P_poly(s: int, delta: Fraction) -> MultiPoly:
    """P_s(x_1..x_s; y_1..y_s) = W_s * prod (1 - x_j y_k), exactly.

    Built as det[g_k(x_j)] / (Vand_x Vand_VY) with polynomial entries
    g_k(x) = prod_{k' != k} (1 - x y_k')(x + y_k' - 2D x y_k'): the
    Vandermonde in x is divided out by divided differences, the one in y
    by exact synthetic division.  Variables: 0..s-1 the x's, s..2s-1 the
    y's.  Degree s-1 in every variable.
    """
    delta = as_fraction(delta)
    nv = 2 * s
    ys = [MultiPoly.variable(nv, s + k) for k in range(s)]

    # g_k as univariate in x with MultiPoly-in-y coefficients
    def g_coeffs(k):
        coeffs = [MultiPoly.constant(nv, Fraction(1))]  # poly in x, ascending
        for kp in range(s):
            if kp == k:
                continue
            # (1 - x y_kp): [1, -y_kp]
            coeffs = _polymul_x(coeffs, [MultiPoly.constant(nv, Fraction(1)),
                                         -ys[kp]])
            # (x + y_kp - 2D x y_kp): [y_kp, 1 - 2D y_kp]
            coeffs = _polymul_x(
                coeffs,
                [ys[kp], MultiPoly.constant(nv, Fraction(1))
                 - 2 * delta * ys[kp]])
        return coeffs

    mat = []
    for j in range(1, s + 1):          # row j: divided difference x_1..x_j
        row = []
        for k in range(s):             # column k: function g_k
            cs = g_coeffs(k)
            entry = MultiPoly(nv)
            for m, cf in enumerate(cs):
                if cf.is_zero():
                    continue
                entry = entry + cf * complete_homogeneous(nv, j, m - j + 1)
            row.append(entry)
        mat.append(row)
    det = poly_det(mat)
    for j in range(s):
        for k in range(j + 1, s):
            det = det.divexact_linear(s + k, s + j)
    return det


def _polymul_x(a, b):
    """Multiply two polynomials in x given as MultiPoly coefficient lists."""
    nv = a[0].nvars
    out = [MultiPoly(nv) for _ in range(len(a) + len(b) - 1)]
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return out
