"""Hankel-moment orthogonal polynomials and truncated Taylor calculus.

The homogeneous determinant of phi-derivatives is the Gram (Hankel)
determinant of a moment sequence c_n = d^n phi / d lam^n, so it defines
a family of monic orthogonal polynomials P_n with norms h_n.  The
scaled polynomials

    K_n(x) = n! phi^(n+1) / h_n * P_n(x)

act as differential operators K_n(d/d eps) on functions of

    omega(eps)  = (1/t) sin(eps)/sin(eps - 2 eta),
    omegat(eps) =  t    sin(eps)/sin(eps + 2 eta),

and every boundary-correlation quantity becomes such a pairing
evaluated at eps = 0.  The key identity converts the pairing into a
contour integral around the origin weighted by h_N(z):

    K_{N-1}(d_eps) f(omega(eps))|_0
        = [z^(N-1)] (z - 1)^(N-1) h_N(z) f(z),

which is verified here directly, together with the orthogonal
polynomial representations of psi_bot, psi_top and the emptiness
formation probability.

The measure mu(x) behind the moments is never constructed: everything
below needs only the c_n, which keeps the module valid in every weight
regime.  All arithmetic is truncated multivariate Taylor calculus over
complex doubles (the exact engine covers the rational side; tolerances
here are sized for doubles).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import DegenerateHankel, TruncationInsufficient
from .exact_core import COMPLEXES, build_tower
from .ik_engine import NumericTriple, homogeneous_abc, phi_derivatives
from .lattice_oracle import RowConfig, enumerate_Z
from .efp_reps import EfpQuery


# ---------------------------------------------------------------------------
# moments and the orthogonal family
# ---------------------------------------------------------------------------

@dataclass
class MomentTable:
    """c_n = d^n phi/d lam^n for n = 0..2N-2 at fixed (lam, eta)."""

    lam: float
    eta: float
    moments: list

    @classmethod
    def build(cls, N, lam, eta):
        return cls(lam, eta, phi_derivatives(lam, eta, 2 * N - 2))


class OrthoFamily:
    """Monic orthogonal polynomials P_0..P_{N-1}, norms, and K_n."""

    def __init__(self, N, lam, eta, table: MomentTable):
        self.N = N
        self.lam = lam
        self.eta = eta
        self.moments = table.moments
        self.phi = table.moments[0]
        self.P = []       # monic coefficient lists, ascending
        self.norms = []
        c = table.moments
        for n in range(N):
            if n == 0:
                p = [1.0 + 0j]
            else:
                m = np.array([[c[i + k] for k in range(n)] for i in range(n)],
                             dtype=complex)
                rhs = np.array([-c[n + i] for i in range(n)], dtype=complex)
                try:
                    sol = np.linalg.solve(m, rhs)
                except np.linalg.LinAlgError as exc:
                    raise DegenerateHankel(str(exc)) from exc
                if not np.all(np.isfinite(sol)):
                    raise DegenerateHankel(f"singular Hankel minor at n={n}")
                p = list(sol) + [1.0 + 0j]
            h = sum(p[m2] * c[m2 + n] for m2 in range(n + 1))
            if abs(h) < 1e-13:
                raise DegenerateHankel(f"vanishing norm h_{n}")
            self.P.append(p)
            self.norms.append(h)

    def K_coeffs(self, n):
        """Coefficients of K_n(x) = n! phi^(n+1)/h_n P_n(x), ascending."""
        scale = math.factorial(n) * self.phi ** (n + 1) / self.norms[n]
        return [scale * c for c in self.P[n]]

    def hankel_det(self, n):
        """Leading principal Hankel determinant of order n."""
        if n == 0:
            return 1.0 + 0j
        c = self.moments
        m = np.array([[c[i + k] for k in range(n)] for i in range(n)],
                     dtype=complex)
        return complex(np.linalg.det(m))


def build_ortho_family(N, lam, eta) -> OrthoFamily:
    return OrthoFamily(N, lam, eta, MomentTable.build(N, lam, eta))


def bordered_hankel_det(fam: OrthoFamily, xs):
    """The N x N determinant bordering the Hankel block with powers of
    the points xs; equals h_0...h_{N-s-1} det[P_{N-s+i-1}(x_j)]."""
    N, s = fam.N, len(xs)
    c = fam.moments
    m = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for k in range(N - s):
            m[i, k] = c[i + k]
        for j, x in enumerate(xs):
            m[i, N - s + j] = x ** i
    return complex(np.linalg.det(m))


# ---------------------------------------------------------------------------
# Taylor calculus
# ---------------------------------------------------------------------------

def taylor_tower(nvars, order):
    """Complex Taylor tower in eps_0..eps_{nvars-1}, each to `order`."""
    specs = [(f"e{j}", order + 1) for j in range(nvars)]
    return build_tower(specs, base=COMPLEXES)


def sin_taylor(eps, shift, order):
    """Taylor of sin(eps + shift) around eps = 0 on the tower."""
    ring = eps.ring
    c, s = cmath.cos(shift), cmath.sin(shift)
    acc = ring.const(s)
    term = eps
    for k in range(1, order + 1):
        coef = c if k % 2 == 1 else s
        sign = -1 if (k % 4) in (2, 3) else 1
        acc = acc + (sign * coef / math.factorial(k)) * term
        term = term * eps
    return acc


def omega_taylor(eps, lam, eta, order):
    """omega(eps) = [sin(lam+eta)/sin(lam-eta)] sin(eps)/sin(eps-2eta)."""
    pref = cmath.sin(lam + eta) / cmath.sin(lam - eta)
    return pref * sin_taylor(eps, 0.0, order) / sin_taylor(eps, -2 * eta, order)


def omegat_taylor(eps, lam, eta, order):
    """omegat(eps) = [sin(lam-eta)/sin(lam+eta)] sin(eps)/sin(eps+2eta)."""
    pref = cmath.sin(lam - eta) / cmath.sin(lam + eta)
    return pref * sin_taylor(eps, 0.0, order) / sin_taylor(eps, 2 * eta, order)


def taylor_coefficients(elem, nvars, order):
    """Dense tensor of Taylor coefficients {multi-index: complex}."""
    out = {}

    def rec(e, prefix):
        if len(prefix) == nvars:
            out[tuple(prefix)] = e
            return
        for m in range(order + 1):
            c = e.coefficient(m)
            rec(c, prefix + [m])

    rec(elem, [])
    return out


def apply_K_determinant(rows, tensor, nvars, order):
    """det[K_{rows[i]}(d_{eps_j})] applied to a Taylor tensor at 0.

    `rows` lists the K-indices; the determinant is expanded by
    permutations (Leibniz), each term a product of univariate pairings
    K_n(d) f = sum_m kappa_m m! [eps^m] f.
    """
    s = nvars
    fact = [math.factorial(m) for m in range(order + 1)]
    total = 0j
    for sigma in permutations(range(s)):
        sign = _perm_sign(sigma)
        kap = [rows[sigma[j]] for j in range(s)]
        term = 0j
        for m, c in tensor.items():
            if c == 0:
                continue
            w = c
            for j in range(s):
                kj = kap[j]
                w = w * (kj[m[j]] * fact[m[j]] if m[j] < len(kj) else 0)
                if w == 0:
                    break
            term += w
        total += sign * term
    return total


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# the key identity
# ---------------------------------------------------------------------------

def verify_claim(N, lam, eta, f_coeffs) -> float:
    """Relative residual of the pairing-to-contour identity for a
    polynomial f (ascending complex coefficients).

    LHS: K_{N-1}(d_eps) f(omega(eps)) at eps = 0.
    RHS: [z^(N-1)] (z-1)^(N-1) h_N(z) f(z) with h_N from the oracle.
    """
    fam = build_ortho_family(N, lam, eta)
    order = N - 1
    ring, atoms = taylor_tower(1, order)
    om = omega_taylor(atoms["e0"], lam, eta, order)
    fe = _poly_at(f_coeffs, om, ring)
    tensor = taylor_coefficients(fe, 1, order)
    lhs = apply_K_determinant([fam.K_coeffs(N - 1)], tensor, 1, order)

    h_n = _h_poly_numeric(N, lam, eta)
    zpow = _convolve(_binom_poly(N - 1), h_n)
    zpow = _convolve(zpow, list(f_coeffs))
    rhs = zpow[N - 1] if N - 1 < len(zpow) else 0j
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def _h_poly_numeric(N, lam, eta):
    from .lattice_oracle import boundary_generating_poly
    a, b, c = homogeneous_abc(lam, eta)
    return list(boundary_generating_poly(N, NumericTriple(a, b, c)))


def _binom_poly(n):
    """(z - 1)^n ascending."""
    out = [0j] * (n + 1)
    for k in range(n + 1):
        out[k] = complex(math.comb(n, k) * (-1) ** (n - k))
    return out


def _convolve(a, b):
    out = [0j] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_at(coeffs, x, ring):
    acc = ring.const(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * x + ring.const(c)
    return acc


# ---------------------------------------------------------------------------
# orthogonal-polynomial representations
# ---------------------------------------------------------------------------

def boundary_correlation_ortho(N, r, lam, eta) -> complex:
    """H_N^(r) = K_{N-1}(d_eps) omega^(N-r)/(omega-1)^(N-1) |_0."""
    fam = build_ortho_family(N, lam, eta)
    order = N - 1
    ring, atoms = taylor_tower(1, order)
    om = omega_taylor(atoms["e0"], lam, eta, order)
    f = om ** (N - r) / (om - 1) ** (N - 1)
    tensor = taylor_coefficients(f, 1, order)
    return apply_K_determinant([fam.K_coeffs(N - 1)], tensor, 1, order)


def _det_pairing(N, s, lam, eta, build_f, order=None, first_row=None):
    """Common engine: det[K_{first_row+i}(d_{eps_j})] f(eps_1..eps_s)|_0."""
    fam = build_ortho_family(N, lam, eta)
    order = N - 1 if order is None else order
    first_row = N - s if first_row is None else first_row
    ring, atoms = taylor_tower(s, order)
    eps = [atoms[f"e{j}"] for j in range(s)]
    oms = [omega_taylor(e, lam, eta, order) for e in eps]
    omts = [omegat_taylor(e, lam, eta, order) for e in eps]
    f = build_f(ring, oms, omts)
    tensor = taylor_coefficients(f, s, order)
    rows = [fam.K_coeffs(first_row + i) for i in range(s)]
    return apply_K_determinant(rows, tensor, s, order)


def efp_ortho(q: EfpQuery, lam, eta, check_truncation=True) -> complex:
    """Emptiness formation probability via the K-determinant pairing."""
    N, r, s = q.N, q.r, q.s

    def build_f(ring, oms, omts):
        f = ring.const(1)
        for j in range(s):
            f = f * oms[j] ** (N - r) / (oms[j] - 1) ** N
        for j in range(s):
            for k in range(j + 1, s):
                f = f * (1 - omts[j]) * (oms[k] - 1) / (omts[j] * oms[k] - 1)
        return f

    val = (-1) ** s * _det_pairing(N, s, lam, eta, build_f)
    if check_truncation:
        again = (-1) ** s * _det_pairing(N, s, lam, eta, build_f,
                                         order=N + 1)
        if abs(val - again) > 1e-8 * max(1.0, abs(val)):
            raise TruncationInsufficient(f"{val} vs {again} at higher order")
    return val


def psi_bot_ortho(cfg: RowConfig, lam, eta) -> complex:
    """Bottom component via the K-determinant pairing (valid in every
    regime; no reference to the measure)."""
    N, s, rs = cfg.n, cfg.s, cfg.positions
    a, b, c = homogeneous_abc(lam, eta)

    def build_f(ring, oms, omts):
        f = ring.const(1)
        for j in range(s):
            f = f * oms[j] ** (N - rs[j] - s + (j + 1)) \
                * omts[j] ** (s - (j + 1)) / (oms[j] - 1) ** (N - s)
        for j in range(s):
            for k in range(j + 1, s):
                f = f / (omts[j] * oms[k] - 1)
        return f

    z_n = enumerate_Z(N, NumericTriple(a, b, c))
    pref = z_n / (a ** (s * (2 * N - s + 1) // 2)
                  * b ** (s * (s - 3) // 2) * c ** s)
    for r in rs:
        pref *= (a / b) ** r
    return pref * _det_pairing(N, s, lam, eta, build_f)


def psi_top_ortho(cfg: RowConfig, lam, eta) -> complex:
    """Top component via the crossing-dual pairing in the complementary
    positions (rows K_s..K_{N-1})."""
    N, s = cfg.n, cfg.s
    rbar = cfg.complement().positions
    ns = N - s
    a, b, c = homogeneous_abc(lam, eta)

    def build_f(ring, oms, omts):
        f = ring.const(1)
        for j in range(ns):
            f = f * omts[j] ** (N - rbar[j]) / (1 - omts[j]) ** s \
                * (oms[j] / omts[j]) ** (ns - (j + 1))
        for j in range(ns):
            for k in range(j + 1, ns):
                f = f / (1 - omts[k] * oms[j])
        return f

    z_n = enumerate_Z(N, NumericTriple(a, b, c))
    pref = z_n / (a ** (ns * (ns - 3) // 2)
                  * b ** (ns * (N + s + 1) // 2) * c ** ns)
    for r in rbar:
        pref *= (b / a) ** r
    return pref * _det_pairing(N, ns, lam, eta, build_f, first_row=s)
