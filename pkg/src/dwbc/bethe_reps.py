"""Closed-form representations of the sublattice partition functions.

psi_top (N x s) and psi_bot (N x (N-s)) each come in several
constructively different forms:

* nested-exclusion multiple sums over alpha_1 <= r_1, ..., alpha_s <=
  r_s with alpha_j distinct, for the fully inhomogeneous model (numeric:
  the summands involve sines of free spectral parameters);

* the coordinate-wavefunction permutation sum (numeric, fully
  inhomogeneous variant; the equal-lambdas special case is the classic
  s-particle wavefunction);

* multiple-integral representations for the homogeneous model,
  evaluated exactly as iterated residues at z = 0 or z = 1 over the
  rational weight data (t = b/a, Delta, the h_{N,s} polynomials).

Every route is checked against the lattice oracle and against the
others; the exact routes agree with the oracle bit-for-bit.

The multiple sums are generated by depth-first index generation with an
exclusion set, literally following the alpha_j not-in {alpha_1..a_{j-1}}
structure.  Sum representations run in numeric mode only and integral
representations in exact mode only; the oracle links the two regimes.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

import numpy as np

from .errors import NearDegenerate, PoleCollision
from .exact_core import residue_drive
from .ik_engine import (
    TrigParams,
    a_fn,
    b_fn,
    d_fn,
    e_fn,
    family,
    ik_determinant,
)
from .lattice_oracle import RowConfig, WeightTriple, enumerate_Z

SEPARATION_TOL = 1e-8


# ---------------------------------------------------------------------------
# shared pieces
# ---------------------------------------------------------------------------

def _nested_exclusion(rs):
    """All index tuples with alpha_j in 1..r_j and alpha_j distinct."""
    out = []
    s = len(rs)

    def rec(j, chosen):
        if j == s:
            out.append(tuple(chosen))
            return
        for alpha in range(1, rs[j] + 1):
            if alpha not in chosen:
                chosen.append(alpha)
                rec(j + 1, chosen)
                chosen.pop()

    rec(0, [])
    return out


def _chi(alpha, beta):
    """0 if alpha < beta else 1 (ordering indicator in the sign factor)."""
    return 0 if alpha < beta else 1


def _phi_matrix(p: TrigParams):
    c = cmath.sin(2 * p.eta)
    return np.array(
        [[c / (a_fn(l, v, p.eta) * b_fn(l, v, p.eta)) for v in p.nus]
         for l in p.lambdas],
        dtype=complex,
    )


def _minor_det(m, drop_rows, cols):
    keep = [i for i in range(m.shape[0]) if (i + 1) not in drop_rows]
    sub = m[np.ix_(keep, [k - 1 for k in cols])]
    if sub.size == 0:
        return 1 + 0j
    return complex(np.linalg.det(sub))


def _check_separation(p: TrigParams):
    for i in range(p.n):
        for j in range(i + 1, p.n):
            if abs(d_fn(p.lambdas[i], p.lambdas[j])) <= SEPARATION_TOL:
                raise NearDegenerate("lambda separation below tolerance")


def _pole_guard(w: WeightTriple):
    t, delta = w.t(), w.delta()
    if t * t - 2 * delta * t + 1 == 0:
        raise PoleCollision("t^2 - 2*Delta*t + 1 = 0 (equals c^2/a^2)")
    return t, delta


# ---------------------------------------------------------------------------
# multiple-sum representations (inhomogeneous, numeric)
# ---------------------------------------------------------------------------

def psi_bot_sum(cfg: RowConfig, p: TrigParams) -> complex:
    """Bottom component as an s-fold nested-exclusion sum over minors of
    the phi-matrix (A-operators commuted to the right)."""
    _check_separation(p)
    N, s, rs = cfg.n, cfg.s, cfg.positions
    lam, nu, eta = p.lambdas, p.nus, p.eta
    pref = 1 + 0j
    for l in lam:
        for k in range(s, N):
            pref *= a_fn(l, nu[k], eta) * b_fn(l, nu[k], eta)
    for i in range(N):
        for j in range(i + 1, N):
            pref /= d_fn(lam[j], lam[i])
    for i in range(s, N):
        for j in range(i + 1, N):
            pref /= d_fn(nu[i], nu[j])
    m = _phi_matrix(p)

    def v_r(r, l):
        out = 1 + 0j
        for alpha in range(r + 1, N + 1):
            out *= d_fn(lam[alpha - 1], l)
        for alpha in range(1, r):
            out *= e_fn(lam[alpha - 1], l, eta)
        for k in range(s, N):
            out /= b_fn(l, nu[k], eta)
        return out

    total = 0j
    for alphas in _nested_exclusion(rs):
        sign = (-1) ** (sum(a - 1 for a in alphas)
                        - sum(_chi(alphas[k], alphas[j])
                              for j in range(s) for k in range(j + 1, s)))
        term = complex(sign)
        for j, a in enumerate(alphas):
            term *= v_r(rs[j], lam[a - 1])
        for j in range(s):
            for k in range(j + 1, s):
                term /= e_fn(lam[alphas[j] - 1], lam[alphas[k] - 1], eta)
        term *= _minor_det(m, set(alphas), range(s + 1, N + 1))
        total += term
    return pref * total


def psi_top_sum(cfg: RowConfig, p: TrigParams) -> complex:
    """Top component as an s-fold sum with an inner s x s partition
    function (B-operators commuted through the D's)."""
    _check_separation(p)
    N, s, rs = cfg.n, cfg.s, cfg.positions
    lam, nu, eta = p.lambdas, p.nus, p.eta
    c = cmath.sin(2 * eta)
    total = 0j
    for alphas in _nested_exclusion(rs):
        term = 1 + 0j
        inset = set(alphas)
        for beta in range(1, N + 1):
            if beta in inset:
                continue
            for k in range(s):
                term *= a_fn(lam[beta - 1], nu[k], eta)
        # g/f at coinciding first arguments reduces to c / e
        for j, a in enumerate(alphas):
            term *= c / e_fn(lam[a - 1], lam[rs[j] - 1], eta)
        for j in range(s):
            aj = alphas[j]
            excl = set(alphas[: j + 1])
            for beta in range(1, rs[j] + 1):
                if beta in excl:
                    continue
                term *= e_fn(lam[aj - 1], lam[beta - 1], eta) \
                    / d_fn(lam[aj - 1], lam[beta - 1])
        term *= ik_determinant(
            TrigParams([lam[a - 1] for a in alphas], nu[:s], eta))
        total += term
    return total


def psi_top_dual_sum(cfg: RowConfig, p: TrigParams) -> complex:
    """Top component through the complementary down-arrow positions
    (D-operators commuted through the B's; the crossing-dual of
    psi_bot_sum)."""
    _check_separation(p)
    N, s = cfg.n, cfg.s
    rbar = cfg.complement().positions
    lam, nu, eta = p.lambdas, p.nus, p.eta
    pref = 1 + 0j
    for l in lam:
        for k in range(s):
            pref *= a_fn(l, nu[k], eta) * b_fn(l, nu[k], eta)
    for i in range(N):
        for j in range(i + 1, N):
            pref /= d_fn(lam[j], lam[i])
    for i in range(s):
        for j in range(i + 1, s):
            pref /= d_fn(nu[i], nu[j])
    m = _phi_matrix(p)

    def v_tilde(rb, l):
        out = 1 + 0j
        for alpha in range(rb + 1, N + 1):
            out *= d_fn(l, lam[alpha - 1])
        for alpha in range(1, rb):
            out *= e_fn(l, lam[alpha - 1], eta)
        for k in range(s):
            out /= a_fn(l, nu[k], eta)
        return out

    ns = N - s
    total = 0j
    for alphas in _nested_exclusion(rbar):
        sign = (-1) ** (sum(N - a for a in alphas)
                        - sum(_chi(alphas[j], alphas[k])
                              for j in range(ns) for k in range(j + 1, ns)))
        term = complex(sign)
        for j, a in enumerate(alphas):
            term *= v_tilde(rbar[j], lam[a - 1])
        for j in range(ns):
            for k in range(j + 1, ns):
                term /= e_fn(lam[alphas[k] - 1], lam[alphas[j] - 1], eta)
        term *= _minor_det(m, set(alphas), range(1, s + 1))
        total += term
    return pref * total


def psi_top_coordinate(cfg: RowConfig, p: TrigParams) -> complex:
    """Fully inhomogeneous coordinate-wavefunction permutation sum.

    Needs only nu-separation (the lambda differences never appear in a
    denominator), so it covers the equal-lambdas wavefunction limit.
    """
    for i in range(cfg.s):
        for j in range(i + 1, cfg.s):
            if abs(d_fn(p.nus[i], p.nus[j])) <= SEPARATION_TOL:
                raise NearDegenerate("nu separation below tolerance")
    N, s, rs = cfg.n, cfg.s, cfg.positions
    lam, nu, eta = p.lambdas, p.nus, p.eta
    c = cmath.sin(2 * eta)
    pref = c ** s
    for beta in range(N):
        for k in range(s):
            pref *= a_fn(lam[beta], nu[k], eta)
    for j in range(s):
        for k in range(j + 1, s):
            pref /= d_fn(nu[j], nu[k])
    total = 0j
    from itertools import permutations
    for perm in permutations(range(s)):
        sign = _perm_sign(perm)
        term = complex(sign)
        for j in range(s):
            vk = nu[perm[j]]
            for beta in range(rs[j] - 1):
                term *= b_fn(lam[beta], vk, eta) / a_fn(lam[beta], vk, eta)
            term /= a_fn(lam[rs[j] - 1], vk, eta)
        for j in range(s):
            for k in range(j + 1, s):
                term *= e_fn(nu[perm[j]], nu[perm[k]], eta)
        total += term
    return pref * total


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# multiple-integral representations (homogeneous, exact)
# ---------------------------------------------------------------------------

def psi_bot_mir(cfg: RowConfig, w: WeightTriple) -> Fraction:
    """Bottom component as an s-fold residue at z = 0:

    Z_N prod_j t^(j-r_j) / (a^(s(N-1)) c^s) *
    oint prod z_j^(-r_j) prod_{j<k} (z_k - z_j)/(t^2 z_j z_k - 2Dt z_j + 1)
         * h_{N,s}(z)
    """
    N, s, rs = cfg.n, cfg.s, cfg.positions
    if s == 0:
        return enumerate_Z(N, w)
    t, delta = _pole_guard(w)
    fam = family(w)
    hpoly = fam.hns_poly(N, s)
    pref = enumerate_Z(N, w) / (w.a ** (s * (N - 1)) * w.c ** s)
    for j in range(1, s + 1):
        pref *= t ** (j - rs[j - 1])

    def build(vs, ring):
        zs = [vs[f"z{j}"] for j in range(s)]
        f = ring.const(1)
        for j in range(s):
            f = f * zs[j] ** (-rs[j])
        for j in range(s):
            for k in range(j + 1, s):
                f = f * (zs[k] - zs[j]) \
                    / (t * t * zs[j] * zs[k] - 2 * delta * t * zs[j] + 1)
        return f * hpoly.eval(zs)

    specs = [(f"z{j}", Fraction(0), rs[j]) for j in range(s)]
    return pref * residue_drive(specs, build)


def psi_top_mir_coordinate(cfg: RowConfig, w: WeightTriple) -> Fraction:
    """Top component from the coordinate wavefunction, as an s-fold
    residue at w = 1 with pole order s per variable."""
    N, s, rs = cfg.n, cfg.s, cfg.positions
    if s == 0:
        return Fraction(1)
    t, delta = _pole_guard(w)
    pref = w.c ** s * w.a ** (s * (N - 1))
    for j in range(1, s + 1):
        pref *= t ** (rs[j - 1] - j)

    def build(vs, ring):
        ws = [vs[f"w{j}"] for j in range(s)]
        f = ring.const(1)
        for j in range(s):
            f = f * ws[j] ** (rs[j] - 1) * (ws[j] - 1) ** (-s)
        for j in range(s):
            for k in range(j + 1, s):
                f = f * (ws[j] - ws[k]) \
                    * (t * t * ws[j] * ws[k] - 2 * delta * t * ws[j] + 1)
        return f

    specs = [(f"w{j}", Fraction(1), s) for j in range(s)]
    return pref * residue_drive(specs, build)


def psi_top_mir_new(cfg: RowConfig, w: WeightTriple) -> Fraction:
    """Top component as an s-fold residue at w = 1 whose integrand
    carries h_{s,s}; the QISM route that depends on the up-arrow
    positions directly:

    Z_s a^(s(N-s)) prod_j t^(j-r_j) *
    oint prod_j (t^2 w_j - 2Dt + 1)^(r_j - 1) / (w_j - 1)^(r_j)
         prod_{j<k} (w_k - w_j)/(t^2 w_j w_k - 2Dt w_j + 1) * h_{s,s}(w)
    """
    N, s, rs = cfg.n, cfg.s, cfg.positions
    if s == 0:
        return Fraction(1)
    t, delta = _pole_guard(w)
    fam = family(w)
    hpoly = fam.hns_poly(s, s)
    pref = enumerate_Z(s, w) * w.a ** (s * (N - s))
    for j in range(1, s + 1):
        pref *= t ** (j - rs[j - 1])

    def build(vs, ring):
        ws = [vs[f"w{j}"] for j in range(s)]
        f = ring.const(1)
        for j in range(s):
            f = f * (t * t * ws[j] - 2 * delta * t + 1) ** (rs[j] - 1) \
                * (ws[j] - 1) ** (-rs[j])
        for j in range(s):
            for k in range(j + 1, s):
                f = f * (ws[k] - ws[j]) \
                    / (t * t * ws[j] * ws[k] - 2 * delta * t * ws[j] + 1)
        return f * hpoly.eval(ws)

    specs = [(f"w{j}", Fraction(1), rs[j]) for j in range(s)]
    return pref * residue_drive(specs, build)


def psi_top_mir_dual(cfg: RowConfig, w: WeightTriple) -> Fraction:
    """Top component as an (N-s)-fold residue at z = 0 in the
    complementary (down-arrow) positions, built on the a<->b reversed
    polynomials htilde."""
    N, s = cfg.n, cfg.s
    rbar = cfg.complement().positions
    ns = N - s
    if ns == 0:
        return enumerate_Z(N, w)
    t, delta = _pole_guard(w)
    fam = family(w)
    hpoly = fam.hns_poly(N, ns, tilde=True)
    pref = enumerate_Z(N, w) / (w.b ** (ns * (N - 1)) * w.c ** ns)
    for j in range(1, ns + 1):
        pref *= t ** (rbar[j - 1] - j)

    def build(vs, ring):
        zs = [vs[f"z{j}"] for j in range(ns)]
        f = ring.const(1)
        for j in range(ns):
            f = f * zs[j] ** (-rbar[j])
        for j in range(ns):
            for k in range(j + 1, ns):
                f = f * (t * t * (zs[k] - zs[j])) \
                    / (zs[j] * zs[k] - 2 * delta * t * zs[j] + t * t)
        return f * hpoly.eval(zs)

    specs = [(f"z{j}", Fraction(0), rbar[j]) for j in range(ns)]
    return pref * residue_drive(specs, build)


def psi_bot_mir_dual(cfg: RowConfig, w: WeightTriple) -> Fraction:
    """Bottom component as an (N-s)-fold residue at w = 1 in the
    complementary positions (crossing image of psi_top_mir_new).

    The prefactor carries Z_{N-s}: this route is the a<->b crossing
    image of psi_top_mir_new at s' = N-s, so the small determinant is
    the one of the (N-s) x (N-s) lattice.  Edge convention: s = N is
    the empty bottom lattice (psi_bot = 1).
    """
    N, s = cfg.n, cfg.s
    rbar = cfg.complement().positions
    ns = N - s
    if ns == 0:
        return Fraction(1)
    t, delta = _pole_guard(w)
    fam = family(w)
    hpoly = fam.hns_poly(ns, ns, tilde=True)
    pref = enumerate_Z(ns, w) * w.b ** (s * (N - s))
    for j in range(1, ns + 1):
        pref *= t ** (j - rbar[j - 1])

    def build(vs, ring):
        ws = [vs[f"w{j}"] for j in range(ns)]
        f = ring.const(1)
        for j in range(ns):
            f = f * (ws[j] - 2 * delta * t + t * t) ** (rbar[j] - 1) \
                * (ws[j] - 1) ** (-rbar[j])
        for j in range(ns):
            for k in range(j + 1, ns):
                f = f * (ws[k] - ws[j]) \
                    / (ws[j] * ws[k] - 2 * delta * t * ws[j] + t * t)
        return f * hpoly.eval(ws)

    specs = [(f"w{j}", Fraction(1), rbar[j]) for j in range(ns)]
    return pref * residue_drive(specs, build)


def psi_dual_mirs(cfg: RowConfig, w: WeightTriple):
    """(psi_top, psi_bot) through the complement-position dual routes."""
    return psi_top_mir_dual(cfg, w), psi_bot_mir_dual(cfg, w)
