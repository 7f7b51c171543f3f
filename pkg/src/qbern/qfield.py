"""Scalar backends: exact rational functions of q, and p-adic values of q.

The symbolic backend carries values as normalized ratios of polynomials in
q over the rationals (coprime numerator/denominator, monic denominator), so
identity verification reduces to syntactic equality of canonical forms.
The p-adic backend reuses :mod:`qbern.padic` with a fixed admissible q
(a unit with nu_p(q - 1) >= 1, i.e. |1 - q|_p < 1).

A ``Scalar`` is either a :class:`RationalFunction` or a
:class:`~qbern.padic.PadicNumber`; binary operations require matching
variants and contexts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd, inf, lcm
from typing import Optional, Union

from .errors import (
    DivisionByZero,
    DomainError,
    NonIntegerExponentInSymbolicMode,
)
from .padic import PadicContext, PadicNumber

__all__ = [
    "RationalFunction",
    "QContext",
    "Scalar",
    "q_pow",
    "q_bracket",
    "reflected_bracket",
    "invert_q",
    "scalars_equal",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

# ---------------------------------------------------------------------------
# dense polynomial helpers (ascending coefficients, no trailing zeros)
# ---------------------------------------------------------------------------


def _strip(coeffs):
    i = len(coeffs)
    while i and not coeffs[i - 1]:
        i -= 1
    return tuple(coeffs[:i])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _strip(out)


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _strip(out)


def _pscale(a, c):
    if not c:
        return ()
    return tuple(x * c for x in a)


def _pdivmod(a, b):
    # Polynomial division over Q; b must be nonzero.
    if not b:
        raise DivisionByZero("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [_ZERO] * max(len(a) - db, 0)
    while len(r) > db and r:
        while r and not r[-1]:
            r.pop()
        if len(r) <= db:
            break
        c = r[-1] / lb
        d = len(r) - 1 - db
        q[d] = c
        for i in range(db + 1):
            r[d + i] -= c * b[i]
        r.pop()
    return _strip(q), _strip(r)


def _peval(a, x: Fraction) -> Fraction:
    acc = _ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _to_primitive_int(a):
    # Clear denominators and content; returns a primitive int-coefficient list.
    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_prem(a, b):
    # Pseudo-remainder over Z (Collins); scaling skipped for monic divisors.
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db:
        lr = r[-1]
        d = len(r) - 1 - db
        if lb != 1:
            r = [lb * c for c in r]
        for i in range(db + 1):
            r[d + i] -= lr * b[i]
        while r and not r[-1]:
            r.pop()
        if not r:
            break
    return r


def _int_primitive(a):
    g = 0
    for c in a:
        g = gcd(g, c)
    if g > 1:
        a = [c // g for c in a]
    if a and a[-1] < 0:
        a = [-c for c in a]
    return a


def _pgcd(a, b):
    # Monic gcd over Q via a primitive pseudo-remainder sequence over Z.
    if not a:
        return _pmonic(b)
    if not b:
        return _pmonic(a)
    if len(a) == 1 or len(b) == 1:
        return (_ONE,)
    x = _to_primitive_int(a)
    y = _to_primitive_int(b)
    if len(x) < len(y):
        x, y = y, x
    while len(y) > 1:
        r = _int_prem(x, y)
        if not r:
            x = y
            break
        x, y = y, _int_primitive(r)
    else:
        # remainder sequence bottomed out at a nonzero constant: coprime
        return (_ONE,)
    if len(x) == 1:
        return (_ONE,)
    return _pmonic(tuple(Fraction(c) for c in x))


def _pmonic(a):
    if not a or a[-1] == 1:
        return tuple(a)
    lc = a[-1]
    return tuple(c / lc for c in a)


def _pexquo(a, b):
    q, r = _pdivmod(a, b)
    if r:
        raise ArithmeticError("polynomial division was expected to be exact")
    return q


def _fmt_coeff(c: Fraction) -> str:
    return str(c)


def _fmt_poly(a) -> str:
    if not a:
        return "0"
    parts = []
    for i, c in enumerate(a):
        if not c:
            continue
        if i == 0:
            term = _fmt_coeff(c)
        else:
            mon = "q" if i == 1 else f"q^{i}"
            if c == 1:
                term = mon
            elif c == -1:
                term = f"-{mon}"
            else:
                term = f"{_fmt_coeff(c)}*{mon}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        if term.startswith("-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


# ---------------------------------------------------------------------------
# rational functions of q
# ---------------------------------------------------------------------------


class RationalFunction:
    """A normalized ratio of polynomials in q over Q.

    Canonical form: numerator and denominator coprime, denominator monic.
    Equality of values is tuple equality of the canonical coefficients.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(_ONE,), *, _canonical=False):
        num = tuple(num)
        den = tuple(den)
        if _canonical:
            self.num = num
            self.den = den
            return
        num = _strip(num)
        den = _strip(den)
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not num:
            self.num = ()
            self.den = (_ONE,)
            return
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pexquo(num, g)
            den = _pexquo(den, g)
        lc = den[-1]
        if lc != 1:
            num = tuple(c / lc for c in num)
            den = tuple(c / lc for c in den)
        self.num = tuple(num)
        self.den = tuple(den)

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_fraction(cls, fr) -> "RationalFunction":
        fr = Fraction(fr)
        if not fr:
            return cls((), (_ONE,), _canonical=True)
        return cls((fr,), (_ONE,), _canonical=True)

    @classmethod
    def indeterminate(cls) -> "RationalFunction":
        return cls((_ZERO, _ONE), (_ONE,), _canonical=True)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == (_ONE,)

    def as_fraction(self) -> Fraction:
        if self.den != (_ONE,) or len(self.num) > 1:
            raise DomainError("value is not a rational constant")
        return self.num[0] if self.num else _ZERO

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.from_fraction(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d1 == (_ONE,) and d2 == (_ONE,):
            return RationalFunction(_padd(n1, n2), (_ONE,), _canonical=True)
        g = _pgcd(d1, d2)
        if len(g) == 1:
            num = _padd(_pmul(n1, d2), _pmul(n2, d1))
            den = _pmul(d1, d2)
            if not num:
                return RationalFunction.from_fraction(0)
            return RationalFunction(num, den, _canonical=True)
        d1g = _pexquo(d1, g)
        d2g = _pexquo(d2, g)
        t = _padd(_pmul(n1, d2g), _pmul(n2, d1g))
        if not t:
            return RationalFunction.from_fraction(0)
        h = _pgcd(t, g)
        if len(h) > 1:
            t = _pexquo(t, h)
            den = _pmul(d1g, _pexquo(d2, h))
        else:
            den = _pmul(d1g, d2)
        return RationalFunction(t, den, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(_pneg(self.num), self.den, _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction.from_fraction(0)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        g1 = _pgcd(n1, d2)
        if len(g1) > 1:
            n1 = _pexquo(n1, g1)
            d2 = _pexquo(d2, g1)
        g2 = _pgcd(n2, d1)
        if len(g2) > 1:
            n2 = _pexquo(n2, g2)
            d1 = _pexquo(d1, g2)
        num = _pmul(n1, n2)
        den = _pmul(d1, d2)
        lc = den[-1]
        if lc != 1:
            num = tuple(c / lc for c in num)
            den = tuple(c / lc for c in den)
        return RationalFunction(num, den, _canonical=True)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("reciprocal of zero rational function")
        num, den = self.den, self.num
        lc = den[-1]
        if lc != 1:
            num = tuple(c / lc for c in num)
            den = tuple(c / lc for c in den)
        return RationalFunction(num, den, _canonical=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e == 0:
            return RationalFunction.from_fraction(1)
        base = self.reciprocal() if e < 0 else self
        e = abs(e)
        num, den = base.num, base.den
        rn, rd = num, den
        for _ in range(e - 1):
            rn = _pmul(rn, num)
            rd = _pmul(rd, den)
        # powers of a reduced fraction stay reduced; denominator stays monic
        return RationalFunction(rn, rd, _canonical=True)

    # -- structure --------------------------------------------------------

    def substitute_reciprocal(self) -> "RationalFunction":
        """The rational function q -> f(1/q)."""
        d = max(len(self.num), len(self.den)) - 1
        num = tuple(reversed(self.num + (_ZERO,) * (d + 1 - len(self.num))))
        den = tuple(reversed(self.den + (_ZERO,) * (d + 1 - len(self.den))))
        return RationalFunction(num, den)

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        dv = _peval(self.den, x)
        if dv == 0:
            raise DivisionByZero(f"denominator vanishes at q = {x}")
        return _peval(self.num, x) / dv

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.from_fraction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        """{"num": ["c0", "c1", ...], "den": [...]}, ascending degree."""
        return {
            "num": [str(c) for c in self.num],
            "den": [str(c) for c in self.den],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        num = tuple(Fraction(c) for c in data["num"])
        den = tuple(Fraction(c) for c in data["den"])
        return cls(num, den)

    def render(self) -> str:
        """Single-line canonical rendering "(num)/(den)", ascending terms."""
        return f"({_fmt_poly(self.num)})/({_fmt_poly(self.den)})"

    def __repr__(self):
        return self.render()


Scalar = Union[PadicNumber, RationalFunction]


# ---------------------------------------------------------------------------
# the working context
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QContext:
    """Backend tag plus the value of q.

    Symbolic contexts carry q as a rational function (the indeterminate by
    default; 1/q after inversion).  Padic contexts require q to be a unit
    with nu_p(q - 1) >= 1.
    """

    backend: str
    q: Scalar
    pctx: Optional[PadicContext] = None

    def __post_init__(self):
        if self.backend == "symbolic":
            if not isinstance(self.q, RationalFunction):
                raise DomainError("symbolic context needs a RationalFunction q")
            if self.q == RationalFunction.from_fraction(1) or self.q.is_zero():
                raise DomainError("q must differ from 0 and 1")
        elif self.backend == "padic":
            if self.pctx is None or not isinstance(self.q, PadicNumber):
                raise DomainError("padic context needs a PadicContext and a padic q")
            if self.q.valuation != 0:
                raise DomainError("q must be a p-adic unit")
            if (self.q - 1)._effective_valuation() < 1:
                raise DomainError("q must satisfy nu_p(q - 1) >= 1")
            if (self.q - 1).is_zero():
                raise DomainError("q = 1 is not an admissible padic q")
        else:
            raise DomainError(f"unknown backend {self.backend!r}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def symbolic(cls, q: Optional[RationalFunction] = None) -> "QContext":
        return cls("symbolic", q if q is not None else RationalFunction.indeterminate())

    @classmethod
    def padic(cls, prime: int, precision: int, q="1+p") -> "QContext":
        pctx = PadicContext(prime, precision)
        if isinstance(q, str):
            q = Fraction(1 + prime) if q.strip() == "1+p" else Fraction(q)
        if isinstance(q, (int, Fraction)):
            qval = PadicNumber.from_fraction(Fraction(q), pctx)
        elif isinstance(q, PadicNumber):
            qval = q
        else:
            raise DomainError(f"cannot interpret q specification {q!r}")
        return cls("padic", qval, pctx)

    # -- helpers ------------------------------------------------------------

    @property
    def is_symbolic(self) -> bool:
        return self.backend == "symbolic"

    @property
    def prime(self) -> int:
        if self.pctx is None:
            raise DomainError("symbolic context has no prime")
        return self.pctx.prime

    def one(self) -> Scalar:
        return self.embed(1)

    def zero(self) -> Scalar:
        return self.embed(0)

    def embed(self, value) -> Scalar:
        """Embed an integer or Fraction into the backend."""
        if self.is_symbolic:
            return RationalFunction.from_fraction(value)
        return PadicNumber.from_fraction(Fraction(value), self.pctx)

    @property
    def q_minus_one_valuation(self) -> int:
        """nu_p(q - 1) for padic contexts."""
        if self.is_symbolic:
            raise DomainError("valuation data requires the padic backend")
        return (self.q - 1).valuation


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def _binomial_series_q_pow(x: PadicNumber, ctx: QContext) -> PadicNumber:
    # q^x = sum_k C(x, k) (q-1)^k; term k has valuation >= k*nu(q-1), so the
    # series is truncated at the first k with k*nu(q-1) >= K.
    if x.valuation < 0:
        raise DomainError("p-adic exponents must lie in Z_p")
    e = ctx.q_minus_one_valuation
    k_star = ceil(ctx.pctx.precision / e)
    one = ctx.one()
    acc = one
    binom = one
    qm1_pow = one
    qm1 = ctx.q - 1
    for k in range(1, k_star):
        binom = binom * (x - (k - 1)) / k
        qm1_pow = qm1_pow * qm1
        acc = acc + binom * qm1_pow
    return acc


def q_pow(x, ctx: QContext) -> Scalar:
    """q^x; integer exponents by repeated multiplication, p-adic ones by
    the binomial series in (q - 1)."""
    if isinstance(x, int):
        return ctx.q ** x
    if ctx.is_symbolic:
        raise NonIntegerExponentInSymbolicMode(
            "symbolic backend supports integer exponents only"
        )
    if isinstance(x, Fraction):
        x = PadicNumber.from_fraction(x, ctx.pctx)
    if not isinstance(x, PadicNumber):
        raise DomainError(f"unsupported exponent {x!r}")
    return _binomial_series_q_pow(x, ctx)


def q_bracket(x, ctx: QContext) -> Scalar:
    """[x]_q = (1 - q^x)/(1 - q); equals 1 + q + ... + q^(x-1) for x >= 0."""
    if isinstance(x, int) and 0 <= x <= 256:
        acc = ctx.zero()
        term = ctx.one()
        for _ in range(x):
            acc = acc + term
            term = term * ctx.q
        return acc
    qx = q_pow(x, ctx)
    return (ctx.one() - qx) / (ctx.one() - ctx.q)


def reflected_bracket(x, n: int, ctx: QContext) -> Scalar:
    """[1-x]_{1/q}^n = (1 - [x]_q)^n."""
    if n < 0:
        raise DomainError("power must be nonnegative")
    base = ctx.one() - q_bracket(x, ctx)
    return base ** n


def invert_q(ctx: QContext) -> QContext:
    """The context with q replaced by 1/q (same backend)."""
    if ctx.is_symbolic:
        return QContext("symbolic", ctx.q.reciprocal())
    return QContext("padic", ctx.one() / ctx.q, ctx.pctx)


def scalars_equal(a: Scalar, b: Scalar, ctx: QContext, valuation=None) -> bool:
    """Exact equality (symbolic) or agreement to a valuation (padic).

    With ``valuation=None`` a padic comparison uses the full shared
    certified precision.
    """
    if ctx.is_symbolic:
        return a == b
    t = valuation
    if t is None:
        t = min(a.prec, b.prec)
        if t == inf:
            t = ctx.pctx.precision
    return a.equals_to_precision(b, t)
