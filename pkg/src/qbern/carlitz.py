"""Carlitz q-Bernoulli numbers and polynomials.

The numbers beta_k(q) solve ``q(q*beta + 1)^k - beta_k = delta_{k,1}``
(umbral convention, beta_0 = 1), i.e. for k >= 1

    beta_k = (delta_{k,1} - q * sum_{i<k} C(k,i) q^i beta_i) / (q^{k+1} - 1),

and the unmodified xi_k solve the analogous relation without the leading q,
with divisor ``q^k - 1``.  The xi_k have a pole at q = 1 while the beta_k
degenerate to the ordinary Bernoulli numbers.

Symbolically the recurrence is run on raw numerators over the known common
denominators ``prod_j (q^j - 1)``; only the final, memoized value is
canonicalized.  On the padic backend the table pre-validates the certified
precision of the whole run using nu_p(q^k - 1) = nu_p(q-1) + nu_p(k) (odd p,
q = 1 mod p), so PrecisionExhausted is raised eagerly with the offending
step.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import DomainError, PoleAtOne, PrecisionExhausted
from .padic import int_valuation
from .qfield import (
    QContext,
    RationalFunction,
    Scalar,
    invert_q,
    q_bracket,
    q_pow,
)
from .qfield import _padd, _pmul, _pscale, _strip  # polynomial plumbing

__all__ = [
    "CarlitzTable",
    "classical_bernoulli",
    "eval_at_one",
    "table_for",
]

_ONE = Fraction(1)


def _q_power_minus_one_poly(j: int):
    # q^j - 1 as a dense coefficient tuple
    return _strip([-_ONE] + [Fraction(0)] * (j - 1) + [_ONE])


class _SymbolicRecurrence:
    """Raw-numerator pipeline for one of the two recurrences.

    Entry k is stored as ``num_k / den_k`` with den_k the cumulative product
    of the divisors ``q^{shift+j} - 1`` for j = 1..k; numerators stay in
    Z[q], so no gcd work happens until a value is exported.
    """

    def __init__(self, q: RationalFunction, shift: int, leading_q: bool):
        self.q = q
        self.shift = shift          # divisor exponent is k + shift
        self.leading_q = leading_q  # True for beta (q * (q beta + 1)^k)
        self.values = [RationalFunction.from_fraction(1)]

    def extend_to(self, n: int):
        for k in range(len(self.values), n + 1):
            self.values.append(self._step(k))

    def _step(self, k: int) -> RationalFunction:
        q = self.q
        s = RationalFunction.from_fraction(0)
        qi = RationalFunction.from_fraction(1)
        for i in range(k):
            s = s + comb(k, i) * qi * self.values[i]
            qi = qi * q
        if self.leading_q:
            s = q * s
        num = (1 if k == 1 else 0) - s
        return num / (q ** (k + self.shift) - 1)


class _SymbolicIndeterminateRecurrence(_SymbolicRecurrence):
    """Fast path when q is the indeterminate: integer-polynomial numerators."""

    def __init__(self, shift: int, leading_q: bool):
        super().__init__(RationalFunction.indeterminate(), shift, leading_q)
        self.raw_num = [(_ONE,)]
        self.raw_den = [(_ONE,)]

    def _step(self, k: int) -> RationalFunction:
        # values[i] = raw_num[i] / raw_den[i], raw_den[i] | raw_den[k-1]
        prev_den = self.raw_den[k - 1]
        total = ()
        ratio = (_ONE,)
        # iterate i downward carrying raw_den[k-1]/raw_den[i]
        for i in range(k - 1, -1, -1):
            term = _pscale(_pmul(self.raw_num[i], ratio), Fraction(comb(k, i)))
            term = (Fraction(0),) * i + term  # multiply by q^i
            total = _padd(total, term)
            if i > 0:
                ratio = _pmul(ratio, _q_power_minus_one_poly(i + self.shift))
        if self.leading_q:
            total = (Fraction(0),) + total  # multiply by q
        neg_total = tuple(-c for c in total)
        num = _padd(prev_den, neg_total) if k == 1 else neg_total
        new_den = _pmul(prev_den, _q_power_minus_one_poly(k + self.shift))
        self.raw_num.append(num)
        self.raw_den.append(new_den)
        return RationalFunction(num, new_den)


class CarlitzTable:
    """Memoized beta_k and xi_k values for one context.

    The memo lists grow monotonically and entries are never invalidated;
    recomputation is bit-identical, so concurrent idempotent fills are
    harmless.
    """

    def __init__(self, ctx: QContext):
        self.ctx = ctx
        self._inverse: CarlitzTable | None = None
        if ctx.is_symbolic:
            if ctx.q == RationalFunction.indeterminate():
                self._beta = _SymbolicIndeterminateRecurrence(1, True)
                self._xi = _SymbolicIndeterminateRecurrence(0, False)
            else:
                self._beta = _SymbolicRecurrence(ctx.q, 1, True)
                self._xi = _SymbolicRecurrence(ctx.q, 0, False)
        else:
            self._beta = _PadicRecurrence(ctx, 1, True)
            self._xi = _PadicRecurrence(ctx, 0, False)

    # -- the numbers ------------------------------------------------------

    def beta(self, n: int) -> Scalar:
        if n < 0:
            raise DomainError("index must be nonnegative")
        self._beta.extend_to(n)
        return self._beta.values[n]

    def xi(self, n: int) -> Scalar:
        if n < 0:
            raise DomainError("index must be nonnegative")
        self._xi.extend_to(n)
        return self._xi.values[n]

    # -- the polynomials --------------------------------------------------

    def beta_poly(self, n: int, x) -> Scalar:
        """beta_n(x) = sum_i C(n,i) beta_i q^{ix} [x]_q^{n-i}."""
        if n < 0:
            raise DomainError("index must be nonnegative")
        ctx = self.ctx
        qx = q_pow(x, ctx)
        bx = q_bracket(x, ctx)
        qx_pows = [ctx.one()]
        bx_pows = [ctx.one()]
        for _ in range(n):
            qx_pows.append(qx_pows[-1] * qx)
            bx_pows.append(bx_pows[-1] * bx)
        acc = ctx.zero()
        for i in range(n + 1):
            acc = acc + comb(n, i) * self.beta(i) * qx_pows[i] * bx_pows[n - i]
        return acc

    def beta_inverse_q(self, n: int) -> Scalar:
        """beta_n computed in the q -> 1/q context."""
        return self.inverse_table().beta(n)

    def inverse_table(self) -> "CarlitzTable":
        if self._inverse is None:
            self._inverse = CarlitzTable(invert_q(self.ctx))
        return self._inverse

    # -- precision ledger (padic) ------------------------------------------

    def precision_ledger_bound(self, n: int, which: str = "beta") -> int:
        """Lower bound K - sum_k nu_p(divisor_k) on the certified precision."""
        if self.ctx.is_symbolic:
            raise DomainError("the precision ledger applies to the padic backend")
        shift = 1 if which == "beta" else 0
        p = self.ctx.prime
        e = self.ctx.q_minus_one_valuation
        bound = self.ctx.pctx.precision
        for k in range(1, n + 1):
            bound -= e + int_valuation(k + shift, p)
        return bound


class _PadicRecurrence:
    def __init__(self, ctx: QContext, shift: int, leading_q: bool):
        self.ctx = ctx
        self.shift = shift
        self.leading_q = leading_q
        self.values = [ctx.one()]

    def extend_to(self, n: int):
        if n < len(self.values):
            return
        self._check_precision(n)
        ctx = self.ctx
        q = ctx.q
        for k in range(len(self.values), n + 1):
            s = ctx.zero()
            qi = ctx.one()
            for i in range(k):
                s = s + comb(k, i) * qi * self.values[i]
                qi = qi * q
            if self.leading_q:
                s = q * s
            num = (ctx.one() if k == 1 else ctx.zero()) - s
            self.values.append(num / (q ** (k + self.shift) - ctx.one()))

    def _check_precision(self, n: int):
        # LTE: nu_p(q^m - 1) = nu_p(q-1) + nu_p(m) for odd p, q = 1 mod p.
        p = self.ctx.prime
        e = self.ctx.q_minus_one_valuation
        remaining = self.ctx.pctx.precision
        for k in range(1, n + 1):
            remaining -= e + int_valuation(k + self.shift, p)
            if remaining <= 0:
                raise PrecisionExhausted(
                    f"certified precision vanishes at recurrence step {k} "
                    f"(need more than {self.ctx.pctx.precision} digits to reach index {n})"
                )


# ---------------------------------------------------------------------------
# classical oracle and the q -> 1 degeneration
# ---------------------------------------------------------------------------

_BERNOULLI_CACHE = [Fraction(1)]


def classical_bernoulli(n: int) -> Fraction:
    """Ordinary Bernoulli number B_n (B_1 = -1/2), by the defining recurrence
    sum_{k=0}^{m} C(m+1, k) B_k = 0."""
    if n < 0:
        raise DomainError("index must be nonnegative")
    while len(_BERNOULLI_CACHE) <= n:
        m = len(_BERNOULLI_CACHE)
        s = sum(comb(m + 1, k) * _BERNOULLI_CACHE[k] for k in range(m))
        _BERNOULLI_CACHE.append(-s / (m + 1))
    return _BERNOULLI_CACHE[n]


def eval_at_one(f: RationalFunction) -> Fraction:
    """Substitute q = 1 after canonical cancellation; PoleAtOne if the
    reduced denominator vanishes there."""
    from .qfield import _peval

    if _peval(f.den, _ONE) == 0:
        raise PoleAtOne("reduced denominator vanishes at q = 1")
    return f.evaluate(_ONE)


# per-context memoized tables; recomputation is deterministic so sharing is safe
_TABLES: dict[QContext, CarlitzTable] = {}


def table_for(ctx: QContext) -> CarlitzTable:
    tbl = _TABLES.get(ctx)
    if tbl is None:
        tbl = CarlitzTable(ctx)
        _TABLES[ctx] = tbl
    return tbl
