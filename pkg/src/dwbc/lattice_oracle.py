"""Ground truth for every observable, straight from the model's definition.

Two independent backends:

* an *enumeration* backend that walks every arrow configuration of the
  N x N domain-wall lattice (configuration counts grow like the
  alternating sign matrix numbers, so this is capped at small N), and

* a *transfer* backend that builds the vertical-line monodromy operators
  A, B, D as sparse maps on the 2^N space of row states and multiplies
  them out, which is fast enough for N up to ~14 and directly yields the
  top/bottom sublattice partition functions psi_top / psi_bot.

Both run on exact rational weights (a, b, c) or on complex inhomogeneous
weight grids a[alpha][k] = sin(l_alpha - nu_k + eta) etc., and they must
agree bit-exactly in the exact regime; the rest of the package is tested
against them.

Conventions: vertical lines are counted alpha = 1..N from the *right*,
horizontal lines k = 1..N from the top.  Row s is the set of N vertical
edges between horizontal lines s and s+1; it carries exactly s up
arrows, at positions 1 <= r_1 < ... < r_s <= N (again from the right).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InvalidRegion, SizeLimit
from .exact_core import ExactPoly, as_fraction

ENUM_MAX_N = 6
TRANSFER_MAX_N = 14


def _max_n(kind: str) -> int:
    env = os.environ.get("DWBC_MAX_N")
    if env:
        return int(env)
    return ENUM_MAX_N if kind == "enum" else TRANSFER_MAX_N


def _check_size(N: int, kind: str):
    cap = _max_n(kind)
    if not 1 <= N <= cap:
        raise SizeLimit(f"N={N} outside 1..{cap} for the {kind} backend "
                        f"(override with DWBC_MAX_N)")


# ---------------------------------------------------------------------------
# weights and row configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightTriple:
    """Exact positive Boltzmann weights of the homogeneous model."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        object.__setattr__(self, "c", as_fraction(self.c))
        if not (self.a > 0 and self.b > 0 and self.c > 0):
            raise ValueError("weights must be strictly positive")

    def delta(self) -> Fraction:
        return (self.a**2 + self.b**2 - self.c**2) / (2 * self.a * self.b)

    def t(self) -> Fraction:
        return self.b / self.a

    def weight(self, alpha, k, kind):
        return getattr(self, kind)

    zero = staticmethod(lambda: Fraction(0))


ICE_POINT = WeightTriple(1, 1, 1)


class WeightMatrix:
    """Site-dependent weights a[alpha][k], b[alpha][k] and constant c.

    Indices are 1-based (alpha = vertical line from the right, k =
    horizontal line from the top), matching the lattice conventions.
    """

    def __init__(self, a_grid, b_grid, c):
        self.a_grid = [list(row) for row in a_grid]
        self.b_grid = [list(row) for row in b_grid]
        self.c = c
        self.n = len(self.a_grid)

    def weight(self, alpha, k, kind):
        if kind == "c":
            return self.c
        grid = self.a_grid if kind == "a" else self.b_grid
        return grid[alpha - 1][k - 1]

    @staticmethod
    def zero():
        return 0j


@dataclass(frozen=True)
class RowConfig:
    """Strictly increasing up-arrow positions on a row.

    `n` is the lattice size, `positions` the tuple r_1 < ... < r_s
    (possibly empty: the 0th row carries no up arrows).
    """

    n: int
    positions: tuple

    def __init__(self, n, positions):
        positions = tuple(int(p) for p in positions)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "positions", positions)
        if any(p2 <= p1 for p1, p2 in zip(positions, positions[1:])):
            raise InvalidRegion("positions must be strictly increasing")
        if positions and not (1 <= positions[0] and positions[-1] <= n):
            raise InvalidRegion(f"positions must lie in 1..{n}")

    @property
    def s(self) -> int:
        return len(self.positions)

    def complement(self) -> "RowConfig":
        """Positions of the n - s down arrows, increasing."""
        taken = set(self.positions)
        return RowConfig(self.n, tuple(p for p in range(1, self.n + 1)
                                       if p not in taken))

    def bitmask(self) -> int:
        """Bit alpha-1 set iff the edge at position alpha points up."""
        m = 0
        for p in self.positions:
            m |= 1 << (p - 1)
        return m


def all_row_configs(N: int, s: int):
    return [RowConfig(N, c) for c in combinations(range(1, N + 1), s)]


# ---------------------------------------------------------------------------
# enumeration backend
# ---------------------------------------------------------------------------
#
# Vertex types by (left, right, top, bottom) arrow directions, with R/L
# the direction of the arrow on a horizontal edge and U/D on a vertical
# edge:  a: (R,R,U,U), (L,L,D,D);  b: (R,R,D,D), (L,L,U,U);
#        c: (R,L,U,D), (L,R,D,U).
# Any other local pattern violates the ice rule and is pruned.

def _row_transitions(N, w, k, state_above):
    """All (state_below, weight) continuations of one horizontal line.

    `state_above` is the bitmask of up arrows on the vertical edges just
    above line k; the walk goes left to right across columns p = 1..N
    (column p is vertical line alpha = N - p + 1), carrying the
    horizontal arrow direction.  Boundary: enter pointing L, exit R.
    """
    out = []

    def step(p, h_right, state_below, weight):
        # h_right == True means the arrow on the edge to the LEFT of
        # column p+1 points right
        if p == N:
            if h_right:
                out.append((state_below, weight))
            return
        alpha = N - p
        up_above = (state_above >> (alpha - 1)) & 1
        if h_right and up_above:
            # a: (R,R,U,U) or c: (R,L,U,D)
            step(p + 1, True, state_below | (1 << (alpha - 1)),
                 weight * w.weight(alpha, k, "a"))
            step(p + 1, False, state_below,
                 weight * w.weight(alpha, k, "c"))
        elif h_right and not up_above:
            # b: (R,R,D,D)
            step(p + 1, True, state_below, weight * w.weight(alpha, k, "b"))
        elif not h_right and up_above:
            # b: (L,L,U,U)
            step(p + 1, False, state_below | (1 << (alpha - 1)),
                 weight * w.weight(alpha, k, "b"))
        else:
            # a: (L,L,D,D) or c: (L,R,D,U)
            step(p + 1, False, state_below, weight * w.weight(alpha, k, "a"))
            step(p + 1, True, state_below | (1 << (alpha - 1)),
                 weight * w.weight(alpha, k, "c"))

    one = w.weight(1, 1, "a") ** 0  # 1 in the weight's arithmetic type
    step(0, False, 0, one)
    return out


def region_state_weights(N, w, k_first, k_last, top_state):
    """True enumeration of rows k_first..k_last from a fixed top cut.

    Walks every arrow configuration of the strip (no state merging) and
    buckets the total weight by the resulting bottom-cut state.
    """
    out = {}

    def rec(k, state, weight):
        if k > k_last:
            if state in out:
                out[state] = out[state] + weight
            else:
                out[state] = weight
            return
        for st2, wt2 in _row_transitions(N, w, k, state):
            rec(k + 1, st2, weight * wt2)

    rec(k_first, top_state, _one_like(w))
    return out


def enumerate_region(N, w, k_first, k_last, top_state, bottom_state):
    """Weighted configuration sum of rows k_first..k_last with fixed
    vertical-edge states at the top and bottom cuts."""
    if k_first > k_last:
        return _one_like(w) if top_state == bottom_state else w.zero()
    dist = region_state_weights(N, w, k_first, k_last, top_state)
    return dist.get(bottom_state, w.zero())


def enumerate_Z(N, w, method="auto"):
    """Partition function Z_N, exact when the weights are exact.

    method: 'enum' walks every configuration of the lattice one by one,
    'transfer' multiplies the vertical-line monodromy B operators
    between the boundary states, 'auto' picks transfer for exact
    homogeneous weights and enumeration otherwise.  Z_0 = 1 (empty
    lattice).
    """
    if N == 0:
        return _one_like(w)
    if method == "auto":
        method = "transfer" if isinstance(w, WeightTriple) else "enum"
    if method == "enum":
        _check_size(N, "enum")
        all_up = (1 << N) - 1
        return enumerate_region(N, w, 1, N, 0, all_up)
    if method == "transfer":
        _check_size(N, "transfer")
        return _transfer_bracket(N, w, range(1, N + 1), range(1, N + 1), "B", "B")
    raise ValueError(f"unknown method {method!r}")


def row_state_weights(N, w, s):
    """Unnormalized row-s marginal: {bitmask: sum of config weights}.

    Pure enumeration: every complete lattice configuration contributes
    its weight to the bucket of its row-s edge state; value/Z is the row
    configuration probability.
    """
    _check_size(N, "enum")
    all_up = (1 << N) - 1
    out = {}

    def rec(k, state, weight, marked):
        if k == s:
            marked = state
        if k == N:
            if state == all_up:
                if marked in out:
                    out[marked] = out[marked] + weight
                else:
                    out[marked] = weight
            return
        for st2, wt2 in _row_transitions(N, w, k + 1, state):
            rec(k + 1, st2, weight * wt2, marked)

    rec(0, 0, _one_like(w), 0)
    return out


# ---------------------------------------------------------------------------
# transfer backend (vertical-line QISM operators)
# ---------------------------------------------------------------------------
#
# The monodromy matrix of vertical line alpha over quantum sites
# k0..k1 is T = L_{alpha,k1} ... L_{alpha,k0} with
#   L = [[a/b diag, c sigma^-], [c sigma^+, b/a diag]]
# as a 2x2 matrix in the auxiliary (vertical) space; entry T[i][j] with
# i = exit state at the bottom of the line, j = entry state at the top
# (0 = up, 1 = down).  A = T[0][0], B = T[0][1], D = T[1][1].

def _apply_L(w, alpha, k, site_bit, W_up, W_dn):
    """One L-operator on the auxiliary pair of quantum-space vectors."""
    a = w.weight(alpha, k, "a")
    b = w.weight(alpha, k, "b")
    c = w.weight(alpha, k, "c")
    size = len(W_up)
    bit = 1 << site_bit
    nu = [None] * size
    nd = [None] * size
    for m in range(size):
        up = m & bit
        # diagonal parts
        u = (a if up else b) * W_up[m]
        d = (b if up else a) * W_dn[m]
        # c sigma^- : needs site down in target, reads site-up source
        if not up:
            u = u + c * W_dn[m | bit]
        else:
            d = d + c * W_up[m & ~bit]
        nu[m] = u
        nd[m] = d
    return nu, nd


def _apply_entry(w, alpha, sites, entry, v):
    """Apply monodromy entry T[i][j] of vertical line alpha to vector v.

    `sites` is the ordered list of quantum lines k (the L product runs
    right to left, so the first site acts first); `entry` is (i, j).
    """
    i, j = entry
    zero = [w.zero() * 0 if False else w.zero() for _ in v]
    W_up = list(v) if j == 0 else list(zero)
    W_dn = list(v) if j == 1 else list(zero)
    for site_bit, k in enumerate(sites):
        W_up, W_dn = _apply_L(w, alpha, k, site_bit, W_up, W_dn)
    return W_up if i == 0 else W_dn


_ENTRY = {"A": (0, 0), "B": (0, 1), "C": (1, 0), "D": (1, 1)}


def _transfer_bracket(N, w, sites, marked, marked_op, default_op):
    """<all-down| (ordered operator product) |all-up> on `sites`.

    Vertical line alpha carries `marked_op` if alpha is in `marked` and
    `default_op` otherwise; lines apply in order alpha = 1..N, rightmost
    first, the order in which the operator string acts on the right
    boundary state.
    """
    sites = list(sites)
    size = 1 << len(sites)
    v = [w.zero()] * size
    v[size - 1] = _one_like(w)  # |all-up>
    marked = set(marked)
    for alpha in range(1, N + 1):
        op = marked_op if alpha in marked else default_op
        v = _apply_entry(w, alpha, sites, _ENTRY[op], v)
    return v[0]  # <all-down|


def psi_top(cfg: RowConfig, w, method="transfer"):
    """Partition function of the N x s top sublattice with up arrows of
    `cfg` on its lower cut (D...B(r_s)...B(r_1)...D product on the top
    quantum space).  The 0-row sublattice has psi_top = 1."""
    N, s = cfg.n, cfg.s
    if s == 0:
        return _one_like(w)
    if method == "transfer":
        _check_size(N, "transfer")
        return _transfer_bracket(N, w, range(1, s + 1), cfg.positions, "B", "D")
    _check_size(N, "enum")
    return enumerate_region(N, w, 1, s, 0, cfg.bitmask())


def psi_bot(cfg: RowConfig, w, method="transfer"):
    """Partition function of the N x (N-s) bottom sublattice with the
    arrows of `cfg` on its upper cut (B...A(r_s)...A(r_1)...B product on
    the bottom quantum space).  For s = N it is 1; for s = 0 it is Z_N."""
    N, s = cfg.n, cfg.s
    if s == N:
        return _one_like(w)
    if method == "transfer":
        _check_size(N, "transfer")
        return _transfer_bracket(N, w, range(s + 1, N + 1), cfg.positions, "A", "B")
    _check_size(N, "enum")
    all_up = (1 << N) - 1
    return enumerate_region(N, w, s + 1, N, cfg.bitmask(), all_up)


def _one_like(w):
    return w.weight(1, 1, "a") ** 0


# ---------------------------------------------------------------------------
# correlation functions
# ---------------------------------------------------------------------------

def row_config_probability(cfg: RowConfig, w, method="transfer"):
    """H_N^(r_1..r_s) = psi_top * psi_bot / Z_N."""
    N = cfg.n
    z = enumerate_Z(N, w, "transfer" if method == "transfer" else "enum")
    return psi_top(cfg, w, method) * psi_bot(cfg, w, method) / z


def efp_oracle(N, r, s, w, route="efp", method="transfer"):
    """Emptiness formation probability F_N^(r,s) by direct summation.

    route 'efp' sums H over configurations confined to 1..r on row s;
    route 'efpn' freezes positions 1..s on row r = s+n and sums over the
    remaining n up arrows.  The two must agree exactly.
    """
    if not (1 <= s <= r <= N):
        raise InvalidRegion(f"need 1 <= s <= r <= N, got r={r}, s={s}, N={N}")
    z = enumerate_Z(N, w, "transfer" if method == "transfer" else "enum")
    total = None
    if route == "efp":
        for pos in combinations(range(1, r + 1), s):
            cfg = RowConfig(N, pos)
            term = psi_top(cfg, w, method) * psi_bot(cfg, w, method)
            total = term if total is None else total + term
    elif route == "efpn":
        n = r - s
        frozen = tuple(range(1, s + 1))
        for extra in combinations(range(s + 1, N + 1), n):
            cfg = RowConfig(N, frozen + extra)
            term = psi_top(cfg, w, method) * psi_bot(cfg, w, method)
            total = term if total is None else total + term
    else:
        raise ValueError(f"unknown route {route!r}")
    return total / z


def polarization_oracle(N, r, s, w, method="transfer"):
    """Probability G_N^(r,s) of an up arrow at position r on row s."""
    if not (1 <= r <= N and 1 <= s <= N):
        raise InvalidRegion(f"need 1 <= r, s <= N, got r={r}, s={s}, N={N}")
    z = enumerate_Z(N, w, "transfer" if method == "transfer" else "enum")
    total = None
    for pos in combinations(range(1, N + 1), s):
        if r not in pos:
            continue
        cfg = RowConfig(N, pos)
        term = psi_top(cfg, w, method) * psi_bot(cfg, w, method)
        total = term if total is None else total + term
    return (total if total is not None else w.zero()) / z


def boundary_generating_poly(N, w, method="transfer") -> ExactPoly:
    """h_N(z) = sum_r H_N^(r) z^(r-1), the generating polynomial of the
    first-row one-point boundary correlation.

    Normalization (asserted exactly in the tests): h_N(1) = 1 and
    h_N(0) = a^(2(N-1)) c Z_{N-1} / Z_N -- the value at the origin is
    the single-configuration probability H_N^(1), so it carries the
    1/Z_N that a probability requires.
    """
    z = enumerate_Z(N, w, "transfer" if method == "transfer" else "enum")
    coeffs = []
    for r in range(1, N + 1):
        cfg = RowConfig(N, (r,))
        coeffs.append(psi_top(cfg, w, method) * psi_bot(cfg, w, method) / z)
    if isinstance(w, WeightTriple):
        return ExactPoly(coeffs)
    return coeffs  # numeric mode: plain coefficient list
