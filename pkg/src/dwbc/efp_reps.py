"""Emptiness formation probability through every route in four flavors.

F_N^(r,s) is the probability that the top-left (N-r) x s rectangle is
frozen.  Routes:

* summation of row configuration probabilities, either over the s
  up-arrow positions confined to 1..r (row s) or with positions 1..s
  frozen on row r (row r, the n = r-s remaining arrows free);

* two s-fold residue representations at z = 0 (one plain, one with a
  symmetric integrand obtained through the one-set antisymmetrization
  identity, carrying h_{s,s} of composed arguments);

* the n-fold residue representation at z = 1, where n = r - s is the
  distance from the antidiagonal;

* a first-class *trace* that evaluates every intermediate expression of
  the two derivations (double-contour forms, geometric multisum, the
  double antisymmetrization, the contour flip from z = 0 onto the 1/w
  poles, and the final symmetric-function integration) and asserts the
  whole chain is constant, raising ChainBreak at the first mismatch.

Everything here is exact: weights are rationals and every contour
integral is an iterated residue evaluated over Laurent towers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    ChainBreak,
    InvalidRegion,
    OrderExceeded,
    PrecisionLoss,
    ZeroDenominator,
)
from .exact_core import (
    INF,
    MultiPoly,
    Series,
    build_tower,
    geom_inverse,
    iterated_residue,
    residue_drive,
)
from .bethe_reps import _pole_guard
from .ik_engine import cantini_P_poly, family
from .lattice_oracle import (
    RowConfig,
    WeightTriple,
    enumerate_Z,
    row_config_probability,
)


@dataclass(frozen=True)
class EfpQuery:
    """Region of an EFP evaluation: 1 <= s <= r <= N, n = r - s."""

    N: int
    r: int
    s: int

    def __post_init__(self):
        if not (1 <= self.s <= self.r <= self.N):
            raise InvalidRegion(
                f"need 1 <= s <= r <= N, got r={self.r}, s={self.s}, N={self.N}")

    @property
    def n(self) -> int:
        return self.r - self.s


def u_of_z(z, t, delta):
    """u(z) = -(z - 1)/((t^2 - 2*Delta*t) z + 1), the composed argument
    feeding h_{s,s} in the symmetric s-fold representation."""
    return -(z - 1) / ((t * t - 2 * delta * t) * z + 1)


def w_of_z_at_one(z, t, delta):
    """(t^2 z - 2*Delta*t + 1)/(t^2 (z - 1)): argument of h_{s+n,n} in
    the n-fold representation (simple pole at z = 1)."""
    return (t * t * z - 2 * delta * t + 1) / (t * t * (z - 1))


# ---------------------------------------------------------------------------
# summation routes
# ---------------------------------------------------------------------------

def efp_by_summation(q: EfpQuery, w: WeightTriple, route="efp") -> Fraction:
    """Sum row configuration probabilities per the two definitions."""
    N, r, s, n = q.N, q.r, q.s, q.n
    if route == "efp":
        cfgs = (RowConfig(N, pos) for pos in combinations(range(1, r + 1), s))
    elif route == "efpn":
        frozen = tuple(range(1, s + 1))
        cfgs = (RowConfig(N, frozen + extra)
                for extra in combinations(range(s + 1, N + 1), n))
    else:
        raise ValueError(f"unknown route {route!r}")
    total = Fraction(0)
    for cfg in cfgs:
        total += row_config_probability(cfg, w)
    return total


# ---------------------------------------------------------------------------
# s-fold representations (residues at z = 0)
# ---------------------------------------------------------------------------

def efp_mir_s(q: EfpQuery, w: WeightTriple, variant="efpMIR2") -> Fraction:
    """s-fold residue representation at z = 0.

    variant 'efpMIR1': non-symmetric integrand with triangular powers;
    variant 'efpMIR2': symmetric integrand with the 1/s! prefactor and
    the extra h_{s,s}(u(z)) factor.  Their equality is the one-set
    antisymmetrization identity in action.
    """
    N, r, s = q.N, q.r, q.s
    t, delta = _pole_guard(w)
    fam = family(w)
    h_ns = fam.hns_poly(N, s)
    tt = t * t - 2 * delta * t

    if variant == "efpMIR1":
        pref = Fraction(-1) ** s

        def build(vs, ring):
            zs = [vs[f"z{j}"] for j in range(s)]
            f = ring.const(1)
            for j in range(s):
                f = f * (tt * zs[j] + 1) ** (s - 1 - j) \
                    * zs[j] ** (-r) * (zs[j] - 1) ** (-(s - j))
            for j in range(s):
                for k in range(j + 1, s):
                    f = f * (zs[j] - zs[k]) \
                        / (t * t * zs[j] * zs[k] - 2 * delta * t * zs[j] + 1)
            return f * h_ns.eval(zs)

    elif variant == "efpMIR2":
        pref = Fraction(-1) ** s * enumerate_Z(s, w) \
            / (_factorial(s) * w.a ** (s * (s - 1)) * w.c ** s)
        h_ss = fam.hns_poly(s, s)

        def build(vs, ring):
            zs = [vs[f"z{j}"] for j in range(s)]
            f = ring.const(1)
            for j in range(s):
                f = f * (tt * zs[j] + 1) ** (s - 1) \
                    * zs[j] ** (-r) * (zs[j] - 1) ** (-s)
            for j in range(s):
                for k in range(s):
                    if j != k:
                        f = f * (zs[k] - zs[j]) \
                            / (t * t * zs[j] * zs[k] - 2 * delta * t * zs[j] + 1)
            us = [u_of_z(z, t, delta) for z in zs]
            return f * h_ns.eval(zs) * h_ss.eval(us)

    else:
        raise ValueError(f"unknown variant {variant!r}")

    specs = [(f"z{j}", Fraction(0), r) for j in range(s)]
    return pref * residue_drive(specs, build)


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# ---------------------------------------------------------------------------
# n-fold representation (residues at z = 1)
# ---------------------------------------------------------------------------

def efp_mir_n(q: EfpQuery, w: WeightTriple) -> Fraction:
    """n-fold residue representation at z = 1 (n = r - s):

    Z_{s+n} Z_{N-s} a^(2s(N-s-n)) t^(n(n-1)) / (n! Z_N c^n a^(n(n-1))) *
    oint prod 1/(z_j - 1) prod_{j!=k} (z_j-z_k)/(t^2 z_j z_k - 2Dt z_j + 1)
         h_{N-s,n}(z) h_{s+n,n}((t^2 z - 2Dt + 1)/(t^2 (z-1)))

    For n = 0 the integral is empty and F = Z_s Z_{N-s} a^(2s(N-s))/Z_N.
    Pole order per variable is s + n: the composed h argument carries
    s+n-1 and the explicit factor one more.
    """
    N, s, n = q.N, q.s, q.n
    t, delta = _pole_guard(w)
    pref = (enumerate_Z(s + n, w) * enumerate_Z(N - s, w)
            * w.a ** (2 * s * (N - s - n)) * t ** (n * (n - 1))
            / (_factorial(n) * enumerate_Z(N, w)
               * w.c ** n * w.a ** (n * (n - 1))))
    if n == 0:
        return pref
    fam = family(w)
    h_bot = fam.hns_poly(N - s, n)
    h_top = fam.hns_poly(s + n, n)

    def build(vs, ring):
        zs = [vs[f"z{j}"] for j in range(n)]
        f = ring.const(1)
        for j in range(n):
            f = f / (zs[j] - 1)
        for j in range(n):
            for k in range(n):
                if j != k:
                    f = f * (zs[j] - zs[k]) \
                        / (t * t * zs[j] * zs[k] - 2 * delta * t * zs[j] + 1)
        ws = [w_of_z_at_one(z, t, delta) for z in zs]
        return f * h_bot.eval(zs) * h_top.eval(ws)

    specs = [(f"z{j}", Fraction(1), s + n) for j in range(n)]
    return pref * residue_drive(specs, build)


# ---------------------------------------------------------------------------
# derivation-chain trace
# ---------------------------------------------------------------------------

def psi_top_mir_origin(cfg: RowConfig, w: WeightTriple) -> Fraction:
    """The top component with the w = 1 contours of the direct QISM
    route mapped onto the origin (the form whose first s integrations
    are simple poles when r_j = j):

    Z_S a^(S(N-S)) oint prod 1/(w_j^(r_j) (1 - t w_j))
        prod_{j<k} (w_k - w_j)/(w_j w_k - 2D w_j + 1)
        h_{S,S}(((2Dt-1)w - t)/(t(tw - 1)))          with S = len(cfg).
    """
    N, S, rs = cfg.n, cfg.s, cfg.positions
    if S == 0:
        return Fraction(1)
    t, delta = _pole_guard(w)
    fam = family(w)
    h_ss = fam.hns_poly(S, S)

    def build(vs, ring):
        ws = [vs[f"w{j}"] for j in range(S)]
        f = ring.const(1)
        for j in range(S):
            f = f / (ws[j] ** rs[j] * (1 - t * ws[j]))
        for j in range(S):
            for k in range(j + 1, S):
                f = f * (ws[k] - ws[j]) \
                    / (ws[j] * ws[k] - 2 * delta * ws[j] + 1)
        args = [((2 * delta * t - 1) * x - t) / (t * (t * x - 1)) for x in ws]
        return f * h_ss.eval(args)

    pref = enumerate_Z(S, w) * w.a ** (S * (N - S))
    specs = [(f"w{j}", Fraction(0), rs[j]) for j in range(S)]
    return pref * residue_drive(specs, build)


def _psi_top_frozen_mir(N, s, ls, w, fam, warg):
    """n-fold origin form of psi_top(1..s, s+l_1..s+l_n)."""
    n = len(ls)
    t, delta = _pole_guard(w)
    h_top = fam.hns_poly(s + n, n)
    pref = enumerate_Z(s + n, w) * w.a ** ((s + n) * (N - s - n))
    if n == 0:
        return pref * (Fraction(1) if s == 0 else h_top.eval([]))

    def build(vs, ring):
        ws = [vs[f"w{j}"] for j in range(n)]
        f = ring.const(1)
        for j in range(n):
            f = f / (ws[j] ** ls[j] * (1 - t * ws[j]))
        for j in range(n):
            for k in range(j + 1, n):
                f = f * (ws[k] - ws[j]) \
                    / (ws[j] * ws[k] - 2 * delta * ws[j] + 1)
        return f * h_top.eval([warg(x) for x in ws])

    specs = [(f"w{j}", Fraction(0), ls[j]) for j in range(n)]
    return pref * residue_drive(specs, build)


def _psi_bot_frozen_mir(N, s, ls, w, fam):
    """n-fold origin form of psi_bot(1..s, s+l_1..s+l_n)."""
    n = len(ls)
    t, delta = _pole_guard(w)
    h_bot_scaled = _scaled_poly(fam.hns_poly(N - s, n), 1 / t)
    pref = enumerate_Z(N - s, w) * w.a ** (s * (N - s)) \
        / (w.c ** n * w.a ** (n * (N - 1)))
    if n == 0:
        return pref

    def build(vs, ring):
        zs = [vs[f"z{j}"] for j in range(n)]
        f = ring.const(1)
        for j in range(n):
            f = f * zs[j] ** (-ls[j])
        for j in range(n):
            for k in range(j + 1, n):
                f = f * (zs[k] - zs[j]) \
                    / (zs[j] * zs[k] - 2 * delta * zs[j] + 1)
        return f * h_bot_scaled.eval(zs)

    specs = [(f"z{j}", Fraction(0), ls[j]) for j in range(n)]
    return pref * residue_drive(specs, build)


def _psi_top_oracle(cfg, w):
    from .lattice_oracle import psi_top
    return psi_top(cfg, w)


def _psi_bot_oracle(cfg, w):
    from .lattice_oracle import psi_bot
    return psi_bot(cfg, w)


def _scaled_poly(poly: MultiPoly, scale: Fraction) -> MultiPoly:
    """p(scale * z_1, ..., scale * z_m) as a new MultiPoly."""
    out = MultiPoly(poly.nvars)
    for e, c in poly.terms.items():
        out.terms[e] = c * scale ** sum(e)
    return out


def _trace_sfold_chain(q, w, record):
    """The s-fold derivation chain: efp summation -> double-contour form ->
    extended multisum -> double antisymmetrization -> y-integration ->
    the two s-fold forms."""
    N, r, s = q.N, q.r, q.s
    t, delta = _pole_guard(w)
    fam = family(w)
    h_ns_scaled = _scaled_poly(fam.hns_poly(N, s), 1 / t)  # h_{N,s}(x/t)
    P = cantini_P_poly(s, delta)
    inv_t = 1 / t

    # shared x/y integrand pieces -------------------------------------
    def cross_xy(xs, ys, f):
        for j in range(s):
            for k in range(j + 1, s):
                f = f * (ys[k] - ys[j]) \
                    * (ys[j] * ys[k] - 2 * delta * ys[k] + 1) \
                    * (xs[k] - xs[j]) \
                    / (xs[j] * xs[k] - 2 * delta * xs[j] + 1)
        return f

    specs = ([(f"x{j}", Fraction(0), r) for j in range(s)]
             + [(f"y{j}", inv_t, s) for j in range(s)])

    def build_double(vs, ring):
        xs = [vs[f"x{j}"] for j in range(s)]
        ys = [vs[f"y{j}"] for j in range(s)]
        f = ring.const(1)
        for j in range(s):
            f = f / (ys[j] ** (s - 1) * (t * ys[j] - 1) ** s)
        f = cross_xy(xs, ys, f)
        f = f * h_ns_scaled.eval(xs)
        msum = ring.const(0)
        for pos in combinations(range(1, r + 1), s):
            term = ring.const(1)
            for j in range(s):
                term = term * (xs[j] * ys[j]) ** (-pos[j])
            msum = msum + term
        return f * msum

    record("double-contour", residue_drive(specs, build_double))

    def build_double2(vs, ring):
        xs = [vs[f"x{j}"] for j in range(s)]
        ys = [vs[f"y{j}"] for j in range(s)]
        f = ring.const(1)
        for j in range(s):
            f = f / ((t * ys[j] - 1) ** s * ys[j] ** (r + j)
                     * xs[j] ** (r - s + j + 1))
        for j in range(s):
            prodxy = ring.const(1)
            for l in range(j + 1):
                prodxy = prodxy * xs[l] * ys[l]
            f = f * geom_inverse(prodxy, ring)
        f = cross_xy(xs, ys, f)
        return f * h_ns_scaled.eval(xs)

    record("double-contour-extended", residue_drive(specs, build_double2))

    def build_double3(vs, ring):
        xs = [vs[f"x{j}"] for j in range(s)]
        ys = [vs[f"y{j}"] for j in range(s)]
        f = ring.const(1)
        for j in range(s):
            f = f / (xs[j] ** r * (t * ys[j] - 1) ** s * ys[j] ** (r + s - 1))
        for j in range(s):
            for k in range(j + 1, s):
                f = f * (xs[k] - xs[j]) ** 2 * (ys[k] - ys[j]) ** 2
        for j in range(s):
            for k in range(s):
                if j != k:
                    f = f / (xs[j] * xs[k] - 2 * delta * xs[j] + 1)
        # W_s(x; y) = P_s(x; y) / prod (1 - x_j y_k)
        f = f * P.eval(xs + ys)
        for j in range(s):
            for k in range(s):
                f = f / (1 - xs[j] * ys[k])
        return f * h_ns_scaled.eval(xs)

    record("double-contour-symmetrized",
           Fraction(1, _factorial(s) ** 2) * residue_drive(specs, build_double3))

    def build_recovered(vs, ring):
        xs = [vs[f"x{j}"] for j in range(s)]
        f = ring.const(1)
        for j in range(s):
            f = f / xs[j] ** r
        for j in range(s):
            for k in range(s):
                if j != k:
                    f = f * (xs[j] - xs[k]) \
                        / (xs[j] * xs[k] - 2 * delta * xs[j] + 1)
        # W_s(x; 1/t..1/t) through P_s (the det/Vandermonde form would
        # need distinct second arguments)
        f = f * P.eval(xs + [ring.const(inv_t)] * s)
        for j in range(s):
            f = f / (1 - xs[j] * inv_t) ** s
        return f * h_ns_scaled.eval(xs)

    xspecs = [(f"x{j}", Fraction(0), r) for j in range(s)]
    record("sfold-recovered",
           t ** (s * (r - 1)) / Fraction(_factorial(s))
           * residue_drive(xspecs, build_recovered))

    record("sfold-symmetric", efp_mir_s(q, w, "efpMIR2"))
    record("sfold-plain", efp_mir_s(q, w, "efpMIR1"))


def _trace_nfold_chain(q, w, record):
    """The n-fold derivation chain: efpn summation -> n-fold top/bottom pieces
    -> extended multisum -> double antisymmetrization -> contour flip
    onto the 1/w poles -> symmetric integration -> the n-fold form."""
    N, r, s, n = q.N, q.r, q.s, q.n
    t, delta = _pole_guard(w)
    fam = family(w)
    z_n = enumerate_Z(N, w)
    pref = (enumerate_Z(s + n, w) * enumerate_Z(N - s, w)
            * w.a ** (2 * s * (N - s - n))
            / (z_n * w.c ** n * w.a ** (n * (n - 1))))

    if n == 0:
        record("nfold-final", efp_mir_n(q, w))
        return

    h_top = fam.hns_poly(s + n, n)          # h_{s+n,n}
    h_bot_scaled = _scaled_poly(fam.hns_poly(N - s, n), 1 / t)

    def warg(wj):
        return ((2 * delta * t - 1) * wj - t) / (t * (t * wj - 1))

    # psi-level sub-checks: the (s+n)-fold origin form and the n-fold
    # forms left after integrating out the frozen positions 1..s
    for extra in combinations(range(s + 1, N + 1), n):
        cfg = RowConfig(N, tuple(range(1, s + 1)) + extra)
        ls = [p - s for p in extra]
        got = psi_top_mir_origin(cfg, w)
        want = _psi_top_oracle(cfg, w)
        if got != want:
            raise ChainBreak(f"top-origin-form{cfg.positions}", got, want)
        got = _psi_top_frozen_mir(N, s, ls, w, fam, warg)
        if got != want:
            raise ChainBreak(f"top-frozen-form{cfg.positions}", got, want)
        got = _psi_bot_frozen_mir(N, s, ls, w, fam)
        want = _psi_bot_oracle(cfg, w)
        if got != want:
            raise ChainBreak(f"bottom-frozen-form{cfg.positions}", got, want)

    # extended multisum, 2n-fold residues at the origin ----------------
    specs = ([(f"w{j}", Fraction(0), N - s) for j in range(n)]
             + [(f"z{j}", Fraction(0), N - s) for j in range(n)])

    def cross_wz(ws, zs, f, ordered):
        rng = ((j, k) for j in range(n) for k in range(n)
               if (j != k if ordered else k > j))
        for j, k in rng:
            f = f * (ws[k] - ws[j]) * (zs[k] - zs[j]) \
                / ((ws[j] * ws[k] - 2 * delta * ws[j] + 1)
                   * (zs[j] * zs[k] - 2 * delta * zs[j] + 1))
        return f

    def build_extended(vs, ring):
        ws = [vs[f"w{j}"] for j in range(n)]
        zs = [vs[f"z{j}"] for j in range(n)]
        f = ring.const(1)
        for j in range(n):
            f = f / ((1 - t * ws[j]) * (ws[j] * zs[j]) ** (N - s - n + j + 1))
        for j in range(n):
            prodwz = ring.const(1)
            for l in range(j + 1):
                prodwz = prodwz * ws[l] * zs[l]
            f = f * geom_inverse(prodwz, ring)
        f = cross_wz(ws, zs, f, ordered=False)
        return f * h_top.eval([warg(x) for x in ws]) * h_bot_scaled.eval(zs)

    record("nfold-extended", pref * residue_drive(specs, build_extended))

    # double antisymmetrization with P_n -------------------------------
    def build_symmetrized(vs, ring):
        ws = [vs[f"w{j}"] for j in range(n)]
        zs = [vs[f"z{j}"] for j in range(n)]
        f = ring.const(1)
        for j in range(n):
            f = f / ((1 - t * ws[j]) * (ws[j] * zs[j]) ** (N - s))
        f = cross_wz(ws, zs, f, ordered=True)
        f = f * cantini_P_poly(n, delta).eval(ws + zs)
        for j in range(n):
            for k in range(n):
                f = f / (1 - ws[j] * zs[k])
        return f * h_top.eval([warg(x) for x in ws]) * h_bot_scaled.eval(zs)

    record("nfold-symmetrized",
           pref / _factorial(n) ** 2 * residue_drive(specs, build_symmetrized))

    # z-contours flipped onto the poles at 1/w_l -----------------------
    record("nfold-flipped", pref / _factorial(n) ** 2 * _flipped_contour_value(q, w))

    # after the symmetric-function integration -------------------------
    def build_integrated(vs, ring):
        ws = [vs[f"w{j}"] for j in range(n)]
        f = ring.const(1)
        for j in range(n):
            f = f * ws[j] ** (n - 2) / (1 - t * ws[j])
        for j in range(n):
            for k in range(n):
                if j != k:
                    f = f * (ws[k] - ws[j]) \
                        / (ws[j] * ws[k] - 2 * delta * ws[j] + 1) ** 2
        f = f * cantini_P_poly(n, delta).eval(ws + [1 / x for x in ws])
        # h_bot_scaled(z) = h_{N-s,n}(z/t), so 1/w_j feeds h at 1/(t w_j)
        return f * h_top.eval([warg(x) for x in ws]) \
            * h_bot_scaled.eval([1 / x for x in ws])

    wspecs = [(f"w{j}", Fraction(0), (N - s) + n + 1) for j in range(n)]
    record("nfold-integrated",
           pref / _factorial(n) * residue_drive(wspecs, build_integrated))

    record("nfold-final", efp_mir_n(q, w))


def _flipped_contour_value(q, w) -> Fraction:
    """The 2n-fold integral of the symmetrized integrand with the
    z-contours wrapped around the poles z = 1/w_l.

    Iterated simple-pole extraction: each z picks one of the factors
    (1 - w_l z)^(-1); picking an l twice dies on the (z_k - z_j)
    numerator zero.  The outward deformation from C_0 induces clockwise
    orientation around the 1/w poles, hence a factor (-1) per variable.
    The leftover w-dependence is an iterated residue at w = 0 on a
    Laurent tower whose nesting order resolves the (w_l - w_j) poles of
    individual terms (they cancel in the sum).
    """
    N, s, n = q.N, q.s, q.n
    t, delta = _pole_guard(w)
    fam = family(w)
    h_top = fam.hns_poly(s + n, n)
    h_bot_scaled = _scaled_poly(fam.hns_poly(N - s, n), 1 / t)

    prec = (N - s) + n + 3
    for _ in range(4):
        ring, atoms = build_tower([(f"w{j}", prec) for j in range(n)])
        ws = [atoms[f"w{j}"] for j in range(n)]

        def warg(wj):
            return ((2 * delta * t - 1) * wj - t) / (t * (t * wj - 1))

        # w-only prefactor of the integrand
        base = ring.const(1)
        for j in range(n):
            base = base / ((1 - t * ws[j]) * ws[j] ** (N - s))
        for j in range(n):
            for k in range(n):
                if j != k:
                    base = base * (ws[k] - ws[j]) \
                        / (ws[j] * ws[k] - 2 * delta * ws[j] + 1)
        base = base * h_top.eval([warg(x) for x in ws])

        # z-dependent factors: polynomial atoms over the w-ring plus the
        # pole-carrying linear factors (1 - w_l z_k)
        factors = []
        for j in range(n):
            factors.append(("lin", j, ring.const(1), 0, -(N - s), False))
            # ("lin", var, coef, const, exp, pole_candidate): coef*z+const
        for j in range(n):
            for k in range(n):
                if j != k:
                    p = MultiPoly(n)
                    ej = [0] * n; ej[j] = 1
                    ek = [0] * n; ek[k] = 1
                    p.terms[tuple(ek)] = ring.const(1)
                    p.terms[tuple(ej)] = ring.const(-1)
                    factors.append(("poly", p, 1))        # z_k - z_j
                    q2 = MultiPoly(n)
                    e2 = [0] * n; e2[j] = 1; e2[k] = 1
                    q2.terms[tuple(e2)] = ring.const(1)
                    q2.terms[tuple(ej)] = ring.const(-2 * delta)
                    q2.terms[(0,) * n] = ring.const(1)
                    factors.append(("poly", q2, -1))      # z_j z_k - 2D z_j + 1
        pz = cantini_P_poly(n, delta)
        pn = pz
        for j in range(n):                                # bind the w slots
            pn = pn.substitute(0, ws[j])
        factors.append(("poly", _lift_poly(pn, ring), 1))
        for j in range(n):
            for k in range(n):
                factors.append(("lin", k, -ws[j], 1, -1, True))  # 1 - w_j z_k
        factors.append(("poly", _lift_poly(h_bot_scaled, ring), 1))

        try:
            total = _iterated_simple_poles(factors, ring, n)
            val = iterated_residue(base * total)
            return Fraction(-1) ** n * val
        except PrecisionLoss:
            prec *= 2
    raise OrderExceeded("flipped-contour evaluation did not stabilize")


def _lift_poly(p: MultiPoly, ring) -> MultiPoly:
    out = MultiPoly(p.nvars)
    for e, c in p.terms.items():
        out.terms[e] = ring.const(c) if not isinstance(c, Series) else c
    return out


def _iterated_simple_poles(factors, ring, nvars):
    """Sum of iterated residues over the marked simple-pole factors.

    Factors: ("poly", MultiPoly-over-ring, exp),
    ("lin", var, coef, const, exp, candidate) for (coef*z_var + const)^exp,
    or ("ring", value, exp) once fully substituted.  Variables are
    consumed in descending index order (MultiPoly.substitute keeps lower
    indices stable); only candidate=True linear factors carry enclosed
    poles.  Returns a ring element.
    """
    if nvars == 0:
        out = ring.const(1)
        for f in factors:
            if f[0] == "ring":
                val = f[1]
            elif f[0] == "poly":
                val = f[1].eval([])
            else:
                raise ZeroDenominator("unsubstituted linear factor survived")
            out = out * (_ring_pow(val, f[2]) if f[2] >= 0
                         else _ring_pow(_ring_inv(val), -f[2]))
        return out

    k = nvars - 1
    total = None
    for idx, f in enumerate(factors):
        if f[0] != "lin" or f[1] != k or not f[5]:
            continue
        _, _, coef, const, exp, _ = f
        if exp != -1:
            raise OrderExceeded("pole candidates must be simple")
        coef_inv = _ring_inv(coef)
        pole = -(const * coef_inv)
        rest = []
        dead = False
        for j2, g in enumerate(factors):
            if j2 == idx:
                continue
            if g[0] == "lin" and g[1] == k:
                val = g[2] * pole + g[3]
                if _ring_zero(val):
                    if g[4] > 0:
                        dead = True
                        break
                    raise ZeroDenominator("coincident poles in z-extraction")
                rest.append(("ring", val, g[4]))
            elif g[0] == "poly":
                p2 = g[1].substitute(k, pole)
                if p2.nvars == 0:
                    val = p2.eval([])
                    if _ring_zero(val):
                        if g[2] > 0:
                            dead = True
                            break
                        raise ZeroDenominator("vanishing substituted factor")
                    rest.append(("ring", val, g[2]))
                elif p2.is_zero():
                    if g[2] > 0:
                        dead = True
                        break
                    raise ZeroDenominator("vanishing substituted factor")
                else:
                    rest.append(("poly", p2, g[2]))
            else:
                rest.append(g)
        if dead:
            continue
        term = coef_inv * _iterated_simple_poles(rest, ring, k)
        total = term if total is None else total + term
    return ring.const(0) if total is None else total


def _ring_zero(v):
    if isinstance(v, Series):
        return not v.coeffs and v.err == INF
    return v == 0


def _ring_pow(v, e):
    out = 1
    for _ in range(e):
        out = out * v
    return out


def _ring_inv(v):
    if isinstance(v, Series):
        return v.inverse()
    return 1 / v


def efp_double_contour_trace(q: EfpQuery, w: WeightTriple,
                             max_double_s: int = 3):
    """Evaluate both derivation chains exactly, step by step.

    Returns the ordered list of (step, value); raises ChainBreak at the
    first step whose value differs from the running one.  The 2s-fold
    double-contour steps are evaluated only for s <= max_double_s (the
    dense tower in 2s variables grows too fast beyond that); all other
    steps always run.
    """
    steps = []
    expected = [None]

    def record(name, value):
        steps.append((name, value))
        if expected[0] is None:
            expected[0] = value
        elif value != expected[0]:
            raise ChainBreak(name, value, expected[0])

    record("efp-sum", efp_by_summation(q, w, "efp"))
    record("efpn-sum", efp_by_summation(q, w, "efpn"))
    if q.s <= max_double_s:
        _trace_sfold_chain(q, w, record)
    else:
        record("sfold-symmetric", efp_mir_s(q, w, "efpMIR2"))
        record("sfold-plain", efp_mir_s(q, w, "efpMIR1"))
    _trace_nfold_chain(q, w, record)
    return steps
