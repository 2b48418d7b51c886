"""Exact scalar, polynomial and truncated-Laurent arithmetic, plus
iterated residue extraction.

Every "multiple integral" evaluated in this package is a contour
integral of a rational function around explicit poles, so it equals a
finite iterated residue and can be computed exactly over the rationals:
substitute z = center + eps one variable at a time (innermost contour
first), expand as a truncated Laurent series in eps, and read off the
coefficient of eps^(-1) at each level.

The series engine is a tower of univariate Laurent rings: a series in
the first-integrated variable whose coefficients are series in the
second, and so on, with exact rational leaves.  Each element tracks the
exponent `err` past which its coefficients are unknown (math.inf for
exact polynomials); inverting a unit series introduces a finite window
sized by the ring's `prec`.  Operations propagate `err` honestly, and
extraction past the window raises PrecisionLoss so drivers can retry
with a wider tower.  Nothing is ever rounded.

The nesting order also disambiguates iterated contours around
variable-dependent poles: a factor 1/(w_l - w_j) expands in powers of
w_j/w_l exactly when w_j sits above w_l in the tower, i.e. when the
w_j contour is the smaller (inner) one.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .errors import (
    NonRationalDescriptor,
    OrderExceeded,
    OutOfRange,
    PrecisionLoss,
    ZeroDenominator,
)

INF = math.inf

# default relative tolerance for every approximate (complex double) check
DEFAULT_RTOL = 1e-9


def approx_eq(x, y, rtol=DEFAULT_RTOL):
    """Relative comparison |x - y| <= rtol * max(1, |x|, |y|)."""
    return abs(x - y) <= rtol * max(1.0, abs(x), abs(y))


# ---------------------------------------------------------------------------
# exact scalars
# ---------------------------------------------------------------------------

def as_fraction(v) -> Fraction:
    """Coerce ints, strings like '3/7', and floats (dyadic, hence exact)."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return parse_rational(v)
    return Fraction(v)


def format_rational(q) -> str:
    """Serialize lowest-terms rational as 'p/q', or 'p' when q = 1."""
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


# ---------------------------------------------------------------------------
# dense univariate polynomials over exact rationals
# ---------------------------------------------------------------------------

class ExactPoly:
    """Dense univariate polynomial with Fraction coefficients.

    Coefficients are stored degree-ascending; the zero polynomial has an
    empty coefficient list.  Evaluation accepts anything that supports
    ring arithmetic with Fractions (Fractions, complex, Laurent tower
    elements, multivariate polynomials), so the same h_N(z) object can
    be evaluated at a number or substituted into a series.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    # -- structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, ExactPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __repr__(self):
        return f"ExactPoly({[format_rational(c) for c in self.coeffs]})"

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return ExactPoly([self[k] + other[k] for k in range(n)])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return ExactPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return ExactPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ExactPoly(out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = ExactPoly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @staticmethod
    def _coerce(v):
        if isinstance(v, ExactPoly):
            return v
        return ExactPoly([as_fraction(v)])

    # -- calculus and evaluation ----------------------------------------

    def derivative(self) -> "ExactPoly":
        return ExactPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        """Horner evaluation; x may be any Fraction-compatible ring element."""
        if not self.coeffs:
            return 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    __call__ = eval

    def reversed(self, degree=None) -> "ExactPoly":
        """z^d * p(1/z) for d = max(degree, self.degree)."""
        d = self.degree if degree is None else degree
        return ExactPoly([self[d - k] for k in range(d + 1)])

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        return json.dumps([format_rational(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, s: str) -> "ExactPoly":
        return cls([parse_rational(c) for c in json.loads(s)])


# ---------------------------------------------------------------------------
# Laurent series towers
# ---------------------------------------------------------------------------

class ScalarRing:
    """Leaf ring of a tower: exact rationals or complex doubles."""

    is_series = False

    def __init__(self, cast, name):
        self._cast = cast
        self.name = name

    def const(self, v):
        if isinstance(v, complex) and self._cast is complex:
            return v
        if self._cast is Fraction:
            return as_fraction(v)
        return self._cast(v)

    def zero(self):
        return self._cast(0)

    def __repr__(self):
        return self.name


RATIONALS = ScalarRing(Fraction, "Q")
COMPLEXES = ScalarRing(complex, "C")


def _is_exact_zero(x) -> bool:
    if isinstance(x, Series):
        return not x.coeffs and x.err == INF
    return x == 0


def _definitely_nonzero(x) -> bool:
    """True when x provably differs from zero (not just unknown)."""
    if isinstance(x, Series):
        return any(_definitely_nonzero(c) for c in x.coeffs)
    return x != 0


def _invert(x):
    if isinstance(x, Series):
        return x.inverse()
    if x == 0:
        raise ZeroDenominator("scalar division by zero")
    return 1 / x if not isinstance(x, Fraction) else Fraction(1) / x


class SeriesRing:
    """Univariate truncated Laurent ring over `coeff_ring`.

    `prec` is the relative window (number of tracked coefficients)
    introduced whenever an exact element is inverted.
    """

    is_series = True

    def __init__(self, coeff_ring, var: str, prec: int):
        if prec < 1:
            raise ValueError("prec must be >= 1")
        self.coeff_ring = coeff_ring
        self.var = var
        self.prec = prec

    def const(self, v):
        if isinstance(v, Series) and v.ring is self:
            return v
        c = self.coeff_ring.const(v) if not self.coeff_ring.is_series \
            else self.coeff_ring.const(v)
        return Series(self, 0, [c], INF)

    def lift(self, c):
        """Embed a coefficient-ring element as the constant term."""
        return Series(self, 0, [c], INF)

    def gen(self):
        one = self.coeff_ring.const(1)
        return Series(self, 1, [one], INF)

    def zero(self):
        return Series(self, 0, [], INF)

    def __repr__(self):
        return f"{self.coeff_ring!r}[[{self.var}]]/prec={self.prec}"


class Series:
    """Element of a SeriesRing: sum_i coeffs[i] * x^(lo+i) + O(x^err).

    err == math.inf marks an exact (polynomial) element.  Coefficients
    live in the ring's coefficient ring, which may itself be a
    SeriesRing; the resulting tower implements multivariate Laurent
    expansions with an explicit nesting (= contour ordering).
    """

    __slots__ = ("ring", "lo", "coeffs", "err")

    def __init__(self, ring, lo, coeffs, err):
        # trim coefficients at or past the error horizon
        if err != INF and lo + len(coeffs) > err:
            coeffs = coeffs[: max(0, err - lo)]
        # strip exactly-zero leading/trailing coefficients
        i = 0
        while i < len(coeffs) and _is_exact_zero(coeffs[i]):
            i += 1
        j = len(coeffs)
        while j > i and _is_exact_zero(coeffs[j - 1]):
            j -= 1
        coeffs = coeffs[i:j]
        lo = lo + i
        if not coeffs:
            lo = 0 if err == INF else err
        self.ring = ring
        self.lo = lo
        self.coeffs = coeffs
        self.err = err

    # -- helpers ---------------------------------------------------------

    @property
    def min_exp(self):
        """Lowest exponent that could carry a nonzero coefficient."""
        return self.lo if self.coeffs else self.err

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.err == INF

    def _coerce(self, other):
        if isinstance(other, Series):
            if other.ring is self.ring:
                return other
            raise TypeError("mixed series rings")
        if isinstance(other, (int, Fraction, float, complex)):
            return self.ring.const(other)
        return NotImplemented

    def __repr__(self):
        err = "" if self.err == INF else f" + O({self.ring.var}^{self.err})"
        terms = ", ".join(
            f"{self.ring.var}^{self.lo + i}: {c!r}" for i, c in enumerate(self.coeffs)
        )
        return f"Series({terms or '0'}{err})"

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self - other
        return not d.coeffs

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        err = min(self.err, other.err)
        lo = min(self.min_exp, other.min_exp, err)
        if lo == INF:
            return Series(self.ring, 0, [], INF)
        lo = int(lo)
        hi = lo
        for t in (self, other):
            if t.coeffs:
                hi = max(hi, t.lo + len(t.coeffs))
        hi = min(hi, err) if err != INF else hi
        out = []
        zero = None
        for k in range(lo, hi):
            has_a = self.coeffs and self.lo <= k < self.lo + len(self.coeffs)
            has_b = other.coeffs and other.lo <= k < other.lo + len(other.coeffs)
            if has_a and has_b:
                out.append(self.coeffs[k - self.lo] + other.coeffs[k - other.lo])
            elif has_a:
                out.append(self.coeffs[k - self.lo])
            elif has_b:
                out.append(other.coeffs[k - other.lo])
            else:
                if zero is None:
                    zero = (self.ring.coeff_ring.zero()
                            if self.ring.coeff_ring.is_series
                            else self.ring.coeff_ring.const(0))
                out.append(zero)
        return Series(self.ring, lo, out, err)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.ring, self.lo, [-c for c in self.coeffs], self.err)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        err = min(self.err + other.min_exp, other.err + self.min_exp)
        if not self.coeffs or not other.coeffs:
            return Series(self.ring, 0, [], err)
        lo = self.lo + other.lo
        # monomial fast paths avoid allocating zero rows
        if len(self.coeffs) == 1:
            a = self.coeffs[0]
            n = len(other.coeffs) if err == INF else min(len(other.coeffs), err - lo)
            return Series(self.ring, lo, [a * c for c in other.coeffs[:n]], err)
        if len(other.coeffs) == 1:
            b = other.coeffs[0]
            n = len(self.coeffs) if err == INF else min(len(self.coeffs), err - lo)
            return Series(self.ring, lo, [c * b for c in self.coeffs[:n]], err)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if err != INF:
            n = min(n, err - lo)
        if n <= 0:
            return Series(self.ring, 0, [], err)
        out = [None] * n
        for i, a in enumerate(self.coeffs):
            if _is_exact_zero(a):
                continue
            jmax = min(len(other.coeffs), n - i)
            for j in range(jmax):
                prod = a * other.coeffs[j]
                out[i + j] = prod if out[i + j] is None else out[i + j] + prod
        zero = None
        for i in range(n):
            if out[i] is None:
                if zero is None:
                    zero = (self.ring.coeff_ring.zero()
                            if self.ring.coeff_ring.is_series
                            else self.ring.coeff_ring.const(0))
                out[i] = zero
        return Series(self.ring, lo, out, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ring.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "Series":
        """Multiplicative inverse; exists iff the first tracked
        coefficient is invertible (nonzero leading Laurent coefficient)."""
        if not self.coeffs:
            if self.err == INF:
                raise ZeroDenominator("inverse of the zero series")
            raise PrecisionLoss(
                f"inverse of O({self.ring.var}^{self.err}) with no known terms"
            )
        window = self.err - self.lo
        w = self.ring.prec if window == INF else min(int(window), self.ring.prec)
        c0inv = _invert(self.coeffs[0])
        inv = [c0inv]
        for k in range(1, w):
            acc = None
            kmax = min(k, len(self.coeffs) - 1)
            for i in range(1, kmax + 1):
                term = self.coeffs[i] * inv[k - i]
                acc = term if acc is None else acc + term
            inv.append(-(c0inv * acc) if acc is not None else
                       (self.ring.coeff_ring.const(0) if not self.ring.coeff_ring.is_series
                        else self.ring.coeff_ring.zero()))
        return Series(self.ring, -self.lo, inv, -self.lo + w)

    # -- extraction ---------------------------------------------------------

    def coefficient(self, k: int):
        """Coefficient of x^k, raising PrecisionLoss past the window."""
        if k >= self.err:
            raise PrecisionLoss(
                f"coefficient {self.ring.var}^{k} beyond window O(^{self.err})"
            )
        if self.coeffs and self.lo <= k < self.lo + len(self.coeffs):
            return self.coeffs[k - self.lo]
        if self.ring.coeff_ring.is_series:
            return self.ring.coeff_ring.zero()
        return self.ring.coeff_ring.const(0)

    def residue(self, order_bound=None):
        """Coefficient of x^(-1).

        If `order_bound` is given, a nonzero coefficient below
        x^(-order_bound) raises OrderExceeded (the stated pole order was
        wrong, which in this package means an implementation bug).  A
        below-bound coefficient that is merely *unknown* to be zero
        (an exhausted window after deep cancellations) raises
        PrecisionLoss instead, so drivers retry with a wider tower.
        """
        if order_bound is not None and self.coeffs and self.lo < -order_bound:
            definite = any(_definitely_nonzero(self.coeffs[i])
                           for i in range(min(len(self.coeffs),
                                              -order_bound - self.lo)))
            if not definite:
                raise PrecisionLoss(
                    f"cannot certify pole order bound {order_bound} in "
                    f"{self.ring.var} (window exhausted)")
            raise OrderExceeded(
                f"pole order {-self.lo} in {self.ring.var} exceeds bound {order_bound}"
            )
        return self.coefficient(-1)


def build_tower(varspecs, base=RATIONALS):
    """Build a Laurent tower and its variable atoms.

    varspecs: list of (name, prec) pairs, *first entry = first-integrated
    variable* (outermost data level, innermost/smallest contour).
    Returns (ring, atoms) where atoms[name] is the generator of its
    level lifted into the full tower.
    """
    ring = base
    for name, prec in reversed(varspecs):
        ring = SeriesRing(ring, name, prec)
    atoms = {}
    level = ring
    lifts = []
    for name, _ in varspecs:
        atom = level.gen()
        for outer in reversed(lifts):
            atom = outer.lift(atom)
        atoms[name] = atom
        lifts.append(level)
        level = level.coeff_ring
    return ring, atoms


def iterated_residue(elem, order_bounds=None):
    """Extract the residue level by level down to the leaf ring.

    `order_bounds` optionally gives the pole-order bound per level,
    aligned with the tower from the outside in.
    """
    x = elem
    level = 0
    while isinstance(x, Series):
        bound = None
        if order_bounds is not None and level < len(order_bounds):
            bound = order_bounds[level]
        x = x.residue(bound)
        level += 1
    return x


# ---------------------------------------------------------------------------
# rational-function descriptors
# ---------------------------------------------------------------------------

class RatExpr:
    """Expression tree for multivariate rational functions.

    Nodes are built with ordinary operators from `rf_var` / `rf_const`
    leaves (plus `rf_poly` for a univariate polynomial applied to a
    subexpression).  Only +, -, *, /, integer powers and polynomial
    leaves exist, so every descriptor is rational by construction;
    anything else is rejected up front, which is what rules out
    essential singularities.
    """

    def __add__(self, o):
        return _Node("add", self, _coerce_expr(o))

    def __radd__(self, o):
        return _Node("add", _coerce_expr(o), self)

    def __sub__(self, o):
        return _Node("add", self, _Node("neg", _coerce_expr(o)))

    def __rsub__(self, o):
        return _Node("add", _coerce_expr(o), _Node("neg", self))

    def __neg__(self):
        return _Node("neg", self)

    def __mul__(self, o):
        return _Node("mul", self, _coerce_expr(o))

    def __rmul__(self, o):
        return _Node("mul", _coerce_expr(o), self)

    def __truediv__(self, o):
        return _Node("div", self, _coerce_expr(o))

    def __rtruediv__(self, o):
        return _Node("div", _coerce_expr(o), self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise NonRationalDescriptor("only integer powers are rational")
        return _Node("pow", self, n)


class _Var(RatExpr):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name


class _Const(RatExpr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = as_fraction(value)


class _Poly(RatExpr):
    __slots__ = ("poly", "arg")

    def __init__(self, poly, arg):
        self.poly = poly
        self.arg = arg


class _Node(RatExpr):
    __slots__ = ("op", "args")

    def __init__(self, op, *args):
        self.op = op
        self.args = args


def _coerce_expr(v):
    if isinstance(v, RatExpr):
        return v
    if isinstance(v, (int, Fraction, str)):
        return _Const(v)
    raise NonRationalDescriptor(f"cannot use {type(v).__name__} in a rational descriptor")


def rf_var(name: str) -> RatExpr:
    return _Var(name)


def rf_const(v) -> RatExpr:
    return _Const(v)


def rf_poly(poly: ExactPoly, arg: RatExpr) -> RatExpr:
    return _Poly(poly, _coerce_expr(arg))


def eval_expr(expr, env, ring):
    """Evaluate a descriptor with variables bound to ring elements."""
    if isinstance(expr, _Const):
        return ring.const(expr.value)
    if isinstance(expr, _Var):
        try:
            return env[expr.name]
        except KeyError:
            raise NonRationalDescriptor(f"unbound variable {expr.name!r}") from None
    if isinstance(expr, _Poly):
        return expr.poly.eval(eval_expr(expr.arg, env, ring))
    if isinstance(expr, _Node):
        if expr.op == "neg":
            return -eval_expr(expr.args[0], env, ring)
        if expr.op == "pow":
            return eval_expr(expr.args[0], env, ring) ** expr.args[1]
        a = eval_expr(expr.args[0], env, ring)
        b = eval_expr(expr.args[1], env, ring)
        if expr.op == "add":
            return a + b
        if expr.op == "mul":
            return a * b
        if expr.op == "div":
            return a / b
    raise NonRationalDescriptor(f"not a rational descriptor: {expr!r}")


# ---------------------------------------------------------------------------
# public Laurent record and the expansion/extraction operations
# ---------------------------------------------------------------------------

class ExactLaurent:
    """Finite truncated Laurent expansion with exact coefficients.

    Lowest exponent `lo` and the dense coefficient list for exponents
    lo..hi; the truncation order hi is explicit and arithmetic never
    exceeds it (results carry the tightest valid window).  A
    multiplicative inverse exists iff the coefficient at the lowest
    exponent is nonzero, and shifts `lo` accordingly.
    """

    __slots__ = ("lo", "coeffs")

    def __init__(self, lo, coeffs):
        self.lo = lo
        self.coeffs = [as_fraction(c) for c in coeffs]

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def __eq__(self, other):
        return (self.lo, self.coeffs) == (other.lo, other.coeffs)

    def __repr__(self):
        return f"ExactLaurent(lo={self.lo}, {[format_rational(c) for c in self.coeffs]})"

    # arithmetic rides on the series engine with explicit windows

    def _series(self, ring):
        return Series(ring, self.lo, list(self.coeffs), self.hi + 1)

    @staticmethod
    def _from_series(val, lo, hi):
        if val.err <= hi:
            raise PrecisionLoss(f"window shrank below hi={hi}")
        return ExactLaurent(lo, [val.coefficient(k) for k in range(lo, hi + 1)])

    def _binary(self, other, op):
        ring = SeriesRing(RATIONALS, "x", max(len(self.coeffs),
                                              len(other.coeffs)) + 1)
        val = op(self._series(ring), other._series(ring))
        lo = min(val.min_exp, val.err - 1)
        if lo == INF:
            lo = 0
        return self._from_series(val, int(lo), val.err - 1)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def inverse(self) -> "ExactLaurent":
        if not self.coeffs or self.coeffs[0] == 0:
            raise ZeroDenominator(
                "inverse needs a nonzero coefficient at the lowest exponent")
        ring = SeriesRing(RATIONALS, "x", len(self.coeffs))
        val = self._series(ring).inverse()
        return self._from_series(val, -self.lo, val.err - 1)


def coefficient_of(series: ExactLaurent, k: int) -> Fraction:
    """Coefficient at exponent k of a truncated expansion."""
    if k < series.lo or k > series.hi:
        raise OutOfRange(f"exponent {k} outside [{series.lo}, {series.hi}]")
    return series.coeffs[k - series.lo]


def series_expand(f: RatExpr, center, lo: int, hi: int, var: str = "z") -> ExactLaurent:
    """Laurent-expand a univariate rational descriptor about `center`.

    Exact coefficients for exponents lo..hi.  Raises ZeroDenominator for
    an identically zero denominator, OrderExceeded if f has a pole
    deeper than `lo` at the center.
    """
    if hi < lo:
        raise ValueError("hi < lo")
    center = as_fraction(center)
    prec = hi - lo + 2
    for attempt in range(6):
        ring = SeriesRing(RATIONALS, var, prec)
        eps = ring.gen()
        try:
            val = eval_expr(f, {var: ring.const(center) + eps}, ring)
            if val.coeffs and val.lo < lo:
                raise OrderExceeded(
                    f"expansion has nonzero coefficient at {var}^{val.lo} < {lo}"
                )
            return ExactLaurent(lo, [val.coefficient(k) for k in range(lo, hi + 1)])
        except PrecisionLoss:
            prec *= 2
    raise PrecisionLoss(f"series_expand did not stabilize at prec={prec}")


def joint_residue(f: RatExpr, variables, centers, orders) -> Fraction:
    """Iterated residue of a multivariate rational descriptor.

    `variables`, `centers`, `orders` align; the residue is taken one
    variable at a time, innermost (= last-listed) variable first.  The
    result is independent of the stated order bounds as long as they are
    sufficient; an actual pole order above its bound raises
    OrderExceeded.
    """
    if not (len(variables) == len(centers) == len(orders)):
        raise ValueError("variables/centers/orders must align")
    # last-listed integrates first -> sits at the top of the tower
    names = list(reversed(list(variables)))
    cents = list(reversed([as_fraction(c) for c in centers]))
    bounds = list(reversed(list(orders)))
    precs = [max(2, b + 2) for b in bounds]
    for attempt in range(6):
        ring, atoms = build_tower(list(zip(names, precs)))
        env = {nm: atoms[nm] + cents[i] for i, nm in enumerate(names)}
        try:
            val = eval_expr(f, env, ring)
            return iterated_residue(val, order_bounds=bounds)
        except PrecisionLoss:
            precs = [2 * p for p in precs]
    raise PrecisionLoss(f"joint_residue did not stabilize at precs={precs}")


def geom_inverse(u, ring):
    """(1 - u)^(-1) for an element u of positive top-level valuation,
    via the geometric sum.

    Powers of monomial-like u stay cheap, unlike the generic dense
    series inversion; the omitted tail has top-level exponent at least
    (mmax+1) * valuation, which caps the result's error exponent.
    """
    v = u.min_exp
    if v < 1:
        raise ValueError("geom_inverse needs positive valuation")
    if v == INF:
        return ring.const(1)
    mmax = int(ring.prec // v) + 1
    acc = ring.const(1)
    p = u
    for _ in range(mmax):
        acc = acc + p
        p = p * u
    return Series(ring, acc.lo, acc.coeffs, min(acc.err, (mmax + 1) * v))


def residue_drive(specs, build, base=RATIONALS, max_tries=6):
    """Adaptive iterated-residue evaluation.

    specs: list of (name, center, order_bound), first entry integrated
    first (innermost contour).  `build(vars, ring)` receives the shifted
    variables {name: center + eps_name} and must return the integrand as
    a tower element; the driver extracts the residue at every level,
    widening the tower and retrying if a window runs out.
    """
    precs = [max(2, b + 1) for (_, _, b) in specs]
    bounds = [b for (_, _, b) in specs]
    for _ in range(max_tries):
        ring, atoms = build_tower(
            [(nm, p) for (nm, _, _), p in zip(specs, precs)], base=base)
        shifted = {nm: atoms[nm] + ring.const(c) if c else atoms[nm]
                   for (nm, c, _) in specs}
        try:
            return iterated_residue(build(shifted, ring), order_bounds=bounds)
        except PrecisionLoss:
            precs = [2 * p for p in precs]
    raise PrecisionLoss(f"residue_drive did not stabilize at precs={precs}")


# ---------------------------------------------------------------------------
# sparse multivariate polynomials
# ---------------------------------------------------------------------------

class MultiPoly:
    """Multivariate polynomial as {exponent tuple: coefficient}.

    Coefficients are Fractions (or complex in numeric mode).  Used for
    the Vandermonde-divided determinant polynomials h_{N,s} and P_s,
    which are later *evaluated* on Laurent-tower elements; terms, not
    the representation, carry the cost.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c != 0:
                    self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            c2 = out.get(e, 0) + c
            if c2 == 0:
                out.pop(e, None)
            else:
                out[e] = c2
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            if other == 0:
                return MultiPoly(self.nvars)
            return MultiPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = out.get(e, 0) + c1 * c2
                if c == 0:
                    out.pop(e, None)
                else:
                    out[e] = c
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def _coerce(self, v):
        if isinstance(v, MultiPoly):
            if v.nvars != self.nvars:
                raise ValueError("mixed variable counts")
            return v
        return MultiPoly.constant(self.nvars, as_fraction(v))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, i: int) -> int:
        """Degree in variable i (zero polynomial gives -1)."""
        return max((e[i] for e in self.terms), default=-1)

    def eval(self, args):
        """Evaluate at ring elements (Fractions, complex, Series...)."""
        if len(args) != self.nvars:
            raise ValueError("argument count mismatch")
        maxdeg = [self.degree(i) for i in range(self.nvars)]
        powers = []
        for x, d in zip(args, maxdeg):
            tab = [1]
            for _ in range(max(d, 0)):
                tab.append(tab[-1] * x)
            powers.append(tab)
        acc = None
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = term * powers[i][k]
            acc = term if acc is None else acc + term
        if acc is None:
            return Fraction(0)
        return acc

    def substitute(self, i: int, value):
        """Substitute variable i by a scalar/ring element; the result is
        a MultiPoly in the remaining variables (coefficients may become
        ring elements)."""
        out = {}
        for e, c in self.terms.items():
            enew = e[:i] + e[i + 1:]
            term = c * (value ** e[i]) if e[i] else c
            if enew in out:
                out[enew] = out[enew] + term
            else:
                out[enew] = term
        res = MultiPoly(self.nvars - 1)
        for e, c in out.items():
            if not _is_exact_zero(c) if isinstance(c, Series) else c != 0:
                res.terms[e] = c
        return res

    def divexact_linear(self, i: int, j: int):
        """Exact division by (x_i - x_j); raises if a remainder is left.

        Synthetic division seen as a univariate polynomial in x_i with
        coefficients polynomial in the other variables.
        """
        # collect coefficients of powers of x_i
        by_deg = {}
        for e, c in self.terms.items():
            d = e[i]
            key = e[:i] + (0,) + e[i + 1:]
            by_deg.setdefault(d, {})[key] = c
        if not by_deg:
            return MultiPoly(self.nvars)
        dmax = max(by_deg)
        # p = sum_d c_d(x') x_i^d ; divide by (x_i - x_j):
        # q_{d-1} = c_d + q_d * x_j  (descending), remainder must vanish
        quot = {}
        carry = MultiPoly(self.nvars)
        xj = MultiPoly.variable(self.nvars, j)
        for d in range(dmax, -1, -1):
            cd = MultiPoly(self.nvars, by_deg.get(d, {}))
            carry = cd + carry * xj
            if d > 0:
                for e, c in carry.terms.items():
                    quot[e[:i] + (d - 1,) + e[i + 1:]] = c
        if not carry.is_zero():
            raise ZeroDenominator("division by (x_i - x_j) leaves a remainder")
        return MultiPoly(self.nvars, quot)


def complete_homogeneous(nvars: int, upto_var: int, k: int) -> MultiPoly:
    """Complete homogeneous symmetric polynomial h_k(x_1..x_{upto_var}).

    Embedded in `nvars` variables; h_0 = 1, h_{k<0} = 0.
    """
    if k < 0:
        return MultiPoly(nvars)
    if k == 0 or upto_var == 0:
        if upto_var == 0 and k > 0:
            return MultiPoly(nvars)
        return MultiPoly.constant(nvars, Fraction(1))
    # h_k(x_1..x_m) = sum_i x_m^i h_{k-i}(x_1..x_{m-1})
    xm = MultiPoly.variable(nvars, upto_var - 1)
    out = MultiPoly(nvars)
    xpow = MultiPoly.constant(nvars, Fraction(1))
    for i in range(k + 1):
        out = out + xpow * complete_homogeneous(nvars, upto_var - 1, k - i)
        if i < k:
            xpow = xpow * xm
    return out


def poly_det(matrix):
    """Determinant of a small square matrix over a commutative ring
    (MultiPoly / Series / Fraction entries), by cofactor expansion."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return matrix[0][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * poly_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc
