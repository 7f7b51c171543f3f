"""The p-adic q-integral on Z_p: definitional Riemann sums plus closed forms.

The level-N Riemann sum of f is ``(1/[p^N]_q) sum_{x<p^N} q^x f(x)``; the
measure of a residue class x + p^N Z_p is q^x/[p^N]_q, and the weights sum
to 1 exactly because ``sum_{x<p^N} q^x = [p^N]_q`` (the evaluator divides
by the accumulated weight sum, so this holds on the nose).  The adaptive
controller raises the level until two consecutive sums agree to the target
valuation.

The Riemann evaluator is the ground-truth oracle here: every closed form
below is validated against it by the identities module rather than trusted.
The closed form for the plain bracket power integral is implemented with
the prefactor ``1/(1-q)^(m-1)``: that is the reading forced by its own
degeneration to the q-Bernoulli values (and the one the oracle supports);
the variant with ``1/(q-1)^(m-1)`` fails for even m by the sign (-1)^(m-1).

Summation enumerates q^x incrementally (one multiplication per term) and
may be split into contiguous blocks whose partial sums combine to a
bit-identical result in any order, fixed-precision addition being exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, inf, isinf
from typing import Callable, Optional, Union
from weakref import WeakKeyDictionary

from .carlitz import CarlitzTable, table_for
from .errors import BudgetExceeded, DomainError, MaxLevelExceeded
from .qfield import QContext, Scalar, q_pow

__all__ = [
    "BracketPower",
    "ReflectedPower",
    "BernsteinProduct",
    "Custom",
    "CustomHash",
    "Integrand",
    "MeasureLevel",
    "RiemannResult",
    "default_level_cap",
    "riemann_sum",
    "integrate",
    "closed_bracket_power",
    "closed_reflected_power",
    "closed_one_minus_x_power",
    "bernstein_integral",
    "bernstein_product_integral",
    "bernstein_power_product_integral",
    "integrand_to_json",
    "integrand_from_json",
    "DEFAULT_TERM_BUDGET",
]

DEFAULT_TERM_BUDGET = 2_000_000

# default level caps keep the cost p^N at desk scale (p^N <= ~17000)
_LEVEL_CAPS = {3: 8, 5: 6, 7: 5}


def default_level_cap(p: int) -> int:
    cap = _LEVEL_CAPS.get(p)
    if cap is None:
        cap = 1
        while p ** (cap + 1) <= 17_000:
            cap += 1
    return cap


# ---------------------------------------------------------------------------
# integrands
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BracketPower:
    """x -> [x + offset]_q^power."""

    offset: int
    power: int

    def __post_init__(self):
        if self.power < 0:
            raise DomainError("power must be nonnegative")


@dataclass(frozen=True)
class ReflectedPower:
    """x -> [offset - x]_{1/q}^power."""

    offset: int
    power: int

    def __post_init__(self):
        if self.power < 0:
            raise DomainError("power must be nonnegative")


@dataclass(frozen=True)
class BernsteinProduct:
    """x -> prod_i B_{k_i, n_i}(x, q)^{m_i}; factors are (k, n, m) triples."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(tuple(f) for f in self.factors))
        for k, n, m in self.factors:
            if not 0 <= k <= n:
                raise DomainError(f"need 0 <= k <= n in factor {(k, n, m)}")
            if m < 0:
                raise DomainError(f"power must be nonnegative in factor {(k, n, m)}")


@dataclass(frozen=True)
class Custom:
    """An arbitrary residue-class evaluator x -> Scalar; Riemann-only, no
    convergence guarantee."""

    evaluator: Callable[[int, QContext], Scalar]


@dataclass(frozen=True)
class CustomHash:
    """Deterministic pseudo-random integrand (for exercising failure paths)."""

    seed: int = 1

    def value(self, x: int) -> int:
        return ((x + self.seed) * 2654435761 + 12345) % 2**31


Integrand = Union[BracketPower, ReflectedPower, BernsteinProduct, Custom, CustomHash]


@dataclass(frozen=True)
class MeasureLevel:
    """The level-N partition of Z_p; weight(x) = q^x / [p^N]_q."""

    level: int

    def __post_init__(self):
        if self.level < 1:
            raise DomainError("level must be >= 1")

    def weight(self, x: int, ctx: QContext) -> Scalar:
        p = ctx.prime
        if not 0 <= x < p ** self.level:
            raise DomainError(f"residue {x} outside [0, p^{self.level})")
        from .qfield import q_bracket

        return q_pow(x, ctx) / q_bracket(p ** self.level, ctx)


@dataclass(frozen=True)
class RiemannResult:
    """Adaptive integration outcome: the value, the level reached, and the
    valuation of the last inter-level difference (the convergence
    certificate).  ``history[i]`` is the difference valuation between levels
    i+1 and i+2."""

    value: Scalar
    level: int
    stabilization_valuation: object
    history: tuple = ()

    def to_json(self) -> dict:
        sv = self.stabilization_valuation
        return {
            "value": _scalar_json(self.value),
            "level": self.level,
            "stabilization_valuation": "inf" if isinf(sv) else int(sv),
            "history": ["inf" if isinf(h) else int(h) for h in self.history],
        }


def _scalar_json(value) -> dict:
    return value.to_json()


# ---------------------------------------------------------------------------
# the definitional evaluator
# ---------------------------------------------------------------------------


def _term_evaluator(f: Integrand, ctx: QContext):
    """Build term(x, q^x) -> Scalar with everything x-independent hoisted."""
    one = ctx.one()
    q = ctx.q
    if isinstance(f, BracketPower):
        if f.power == 0:
            return lambda x, qx: one
        qc = q_pow(f.offset, ctx)
        inv = one / (one - q)
        m = f.power
        return lambda x, qx: ((one - qc * qx) * inv) ** m

    if isinstance(f, ReflectedPower):
        # [c - x]_{1/q} = (1 - q^{x-c}) / (1 - 1/q)
        if f.power == 0:
            return lambda x, qx: one
        qmc = q_pow(-f.offset, ctx)
        inv = one / (one - one / q)
        n = f.power
        return lambda x, qx: ((one - qmc * qx) * inv) ** n

    if isinstance(f, BernsteinProduct):
        coeff = 1
        a = 0
        b = 0
        for k, n, m in f.factors:
            coeff *= comb(n, k) ** m
            a += k * m
            b += (n - k) * m
        const = ctx.embed(coeff)
        inv = one / (one - q)
        return lambda x, qx: const * ((one - qx) * inv) ** a * (one - (one - qx) * inv) ** b

    if isinstance(f, Custom):
        ev = f.evaluator
        return lambda x, qx: ev(x, ctx)

    if isinstance(f, CustomHash):
        return lambda x, qx: ctx.embed(f.value(x))

    raise DomainError(f"unknown integrand {f!r}")


def riemann_sum(
    f: Integrand,
    ctx: QContext,
    level: int,
    term_budget: int = DEFAULT_TERM_BUDGET,
    blocks: int = 1,
) -> Scalar:
    """The level-N q-Riemann sum (1/[p^N]_q) sum_{x<p^N} q^x f(x).

    With blocks > 1 the range is split into contiguous blocks whose partial
    sums are combined afterwards; the result is bit-identical to the
    single-block evaluation.
    """
    if ctx.is_symbolic:
        raise DomainError("the Riemann evaluator requires the padic backend")
    if level < 1:
        raise DomainError("level must be >= 1")
    p = ctx.prime
    total = p ** level
    if total > term_budget:
        raise BudgetExceeded(
            f"level {level} needs {total} terms, over the budget of {term_budget}"
        )
    term = _term_evaluator(f, ctx)
    q = ctx.q

    bounds = [total * i // max(blocks, 1) for i in range(max(blocks, 1))] + [total]
    weighted = ctx.zero()
    weights = ctx.zero()
    for lo, hi in zip(bounds, bounds[1:]):
        qx = q_pow(lo, ctx)
        s = ctx.zero()
        w = ctx.zero()
        for x in range(lo, hi):
            s = s + qx * term(x, qx)
            w = w + qx
            qx = qx * q
        weighted = weighted + s
        weights = weights + w
    return weighted / weights


def integrate(
    f: Integrand,
    ctx: QContext,
    target: int,
    level_cap: Optional[int] = None,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> RiemannResult:
    """Raise the level until two consecutive sums agree to the target
    valuation; MaxLevelExceeded (carrying the best result) past the cap."""
    if ctx.is_symbolic:
        raise DomainError("the Riemann evaluator requires the padic backend")
    cap = default_level_cap(ctx.prime) if level_cap is None else level_cap
    if cap < 1:
        raise DomainError("level cap must be >= 1")
    prev = riemann_sum(f, ctx, 1, term_budget)
    history = []
    best = RiemannResult(prev, 1, -inf, ())
    for level in range(2, cap + 1):
        cur = riemann_sum(f, ctx, level, term_budget)
        diff = cur - prev
        stabilized_exactly = diff.is_zero()
        sv = diff.prec if stabilized_exactly else diff.valuation
        history.append(sv)
        if stabilized_exactly:
            # the earlier level already carried the certified value
            best = RiemannResult(prev, level - 1, sv, tuple(history))
        else:
            best = RiemannResult(cur, level, sv, tuple(history))
        if sv >= target:
            return best
        prev = cur
    raise MaxLevelExceeded(
        f"no inter-level agreement at valuation {target} within level cap {cap}; "
        f"best achieved valuation {best.stabilization_valuation}",
        result=best,
    )


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def closed_bracket_power(m: int, x, ctx: QContext, tbl: Optional[CarlitzTable] = None) -> Scalar:
    """Closed form of the integral of [x + y]_q^m over y.

    Equals beta_poly(m, x); exponent 0 returns the exact total measure 1
    rather than going through the formula (which would give -1 there).
    """
    if m < 0:
        raise DomainError("exponent must be nonnegative")
    if m == 0:
        return ctx.one()
    one = ctx.one()
    qx = q_pow(x, ctx)
    acc = ctx.zero()
    ql = one  # q^{lx}
    qp = ctx.q  # q^{l+1}
    for l in range(m + 1):
        term = comb(m, l) * (l + 1) * ql / (one - qp)
        acc = acc + (term if l % 2 == 0 else -term)
        ql = ql * qx
        qp = qp * ctx.q
    return acc / (one - ctx.q) ** (m - 1)


def closed_reflected_power(n: int, x, ctx: QContext, tbl: Optional[CarlitzTable] = None) -> Scalar:
    """Closed form of the integral of [1 - x + y]_{1/q}^n over y under the
    inverted measure: (q^n/(q-1)^(n-1)) sum_l C(n,l)(-1)^l q^{lx} (l+1)/(q^{l+1}-1)."""
    if n < 0:
        raise DomainError("exponent must be nonnegative")
    if n == 0:
        return ctx.one()
    one = ctx.one()
    qx = q_pow(x, ctx)
    acc = ctx.zero()
    ql = one
    qp = ctx.q
    for l in range(n + 1):
        term = comb(n, l) * (l + 1) * ql / (qp - one)
        acc = acc + (term if l % 2 == 0 else -term)
        ql = ql * qx
        qp = qp * ctx.q
    return acc * q_pow(n, ctx) / (ctx.q - one) ** (n - 1)


def closed_one_minus_x_power(n: int, ctx: QContext, tbl: Optional[CarlitzTable] = None) -> Scalar:
    """Closed form of the integral of [1 - x]_{1/q}^n: q^2 beta_{n,1/q} + n + 1 - q."""
    if n <= 1:
        raise DomainError("the closed form requires n > 1")
    tbl = tbl or table_for(ctx)
    return ctx.q ** 2 * tbl.beta_inverse_q(n) + ctx.embed(n + 1) - ctx.q


# -- shared route sums -------------------------------------------------------
#
# Both integral routes for a product integrand reduce to the integral of
# [x]_q^a [1-x]_{1/q}^b:
#   direct    expands [1-x]_{1/q}^b = (1 - [x]_q)^b termwise over beta_{a+l,q},
#   reflected expands [x]_q^a = (1 - [1-x]_{1/q})^a and applies the
#             one-minus-x closed form (needs b > 1 so each exponent is > 1).

_ROUTE_CACHE: "WeakKeyDictionary[CarlitzTable, dict]" = WeakKeyDictionary()


def _route_cache(tbl: CarlitzTable) -> dict:
    cache = _ROUTE_CACHE.get(tbl)
    if cache is None:
        cache = {}
        _ROUTE_CACHE[tbl] = cache
    return cache


def _power_integral_direct(a: int, b: int, tbl: CarlitzTable) -> Scalar:
    cache = _route_cache(tbl)
    key = ("direct", a, b)
    if key not in cache:
        acc = tbl.ctx.zero()
        for l in range(b + 1):
            term = comb(b, l) * tbl.beta(a + l)
            acc = acc + (term if l % 2 == 0 else -term)
        cache[key] = acc
    return cache[key]


def _power_integral_reflected(a: int, b: int, tbl: CarlitzTable) -> Scalar:
    if b <= 1:
        raise DomainError("the reflected route requires the [1-x] exponent > 1")
    cache = _route_cache(tbl)
    key = ("reflected", a, b)
    if key not in cache:
        ctx = tbl.ctx
        q2 = ctx.q ** 2
        acc = ctx.zero()
        for l in range(a + 1):
            inner = ctx.embed(a + b - l + 1) - ctx.q + q2 * tbl.beta_inverse_q(a + b - l)
            term = comb(a, l) * inner
            acc = acc + (term if (a + l) % 2 == 0 else -term)
        cache[key] = acc
    return cache[key]


def bernstein_integral(k: int, n: int, ctx: QContext, route: str = "direct",
                       tbl: Optional[CarlitzTable] = None) -> Scalar:
    """Integral of B_{k,n}(x, q) dmu_q.

    route="direct" sums (-1)^l C(n-k,l) beta_{k+l,q}; route="reflected"
    (valid for n > k + 1) goes through the reflected expansion and
    beta_{n-l,1/q}.
    """
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    tbl = tbl or table_for(ctx)
    if route == "direct":
        return comb(n, k) * _power_integral_direct(k, n - k, tbl)
    if route == "reflected":
        if n <= k + 1:
            raise DomainError("the reflected route requires n > k + 1")
        return comb(n, k) * _power_integral_reflected(k, n - k, tbl)
    raise DomainError(f"unknown route {route!r}")


def _common_k(factors) -> int:
    ks = {f[0] for f in factors}
    if len(ks) != 1:
        raise DomainError(f"factors must share a common lower index, got {sorted(ks)}")
    return ks.pop()


def bernstein_product_integral(factors, ctx: QContext, route: str = "II",
                               tbl: Optional[CarlitzTable] = None) -> Scalar:
    """Integral of prod_i B_{k,n_i}(x, q) dmu_q for (k, n_i) factors with a
    common k.

    Route I (requires k, n_i >= 1 and sum n_i > s*k + 1) expands through
    beta_{.,1/q}; route II (any k, n_i >= 0) expands through beta_{.,q}.
    """
    factors = [tuple(f) for f in factors]
    if not factors:
        raise DomainError("need at least one factor")
    k = _common_k(factors)
    degrees = [f[1] for f in factors]
    s = len(factors)
    if k < 0 or any(n < 0 for n in degrees):
        raise DomainError("indices must be nonnegative")
    tbl = tbl or table_for(ctx)
    coeff = 1
    for n in degrees:
        coeff *= comb(n, k)
    if coeff == 0:
        return ctx.zero()
    total = sum(degrees)
    if route == "II":
        return coeff * _power_integral_direct(s * k, total - s * k, tbl)
    if route == "I":
        if k < 1 or any(n < 1 for n in degrees):
            raise DomainError("route I requires k >= 1 and every degree >= 1")
        if total <= s * k + 1:
            raise DomainError("route I requires sum of degrees > s*k + 1")
        return coeff * _power_integral_reflected(s * k, total - s * k, tbl)
    raise DomainError(f"unknown route {route!r}")


def bernstein_power_product_integral(factors, ctx: QContext, route: str = "II",
                                     tbl: Optional[CarlitzTable] = None) -> Scalar:
    """Integral of prod_i B_{k,n_i}(x, q)^{m_i} dmu_q for (k, n_i, m_i)
    factors with a common k.

    Route I requires sum m_i n_i > k * sum m_i + 1; the index of the
    inverted-q values is read as sum_i n_i m_i - l.  Route II holds for any
    nonnegative indices.
    """
    factors = [tuple(f) for f in factors]
    if not factors:
        raise DomainError("need at least one factor")
    k = _common_k(factors)
    if k < 0 or any(n < 0 or m < 0 for _, n, m in factors):
        raise DomainError("indices must be nonnegative")
    tbl = tbl or table_for(ctx)
    coeff = 1
    for _, n, m in factors:
        coeff *= comb(n, k) ** m
    if coeff == 0:
        return ctx.zero()
    weight = sum(m for _, _, m in factors)
    total = sum(n * m for _, n, m in factors)
    if route == "II":
        return coeff * _power_integral_direct(k * weight, total - k * weight, tbl)
    if route == "I":
        if total <= k * weight + 1:
            raise DomainError("route I requires sum m_i n_i > k * sum m_i + 1")
        return coeff * _power_integral_reflected(k * weight, total - k * weight, tbl)
    raise DomainError(f"unknown route {route!r}")


# ---------------------------------------------------------------------------
# integrand serialization
# ---------------------------------------------------------------------------


def integrand_to_json(f: Integrand) -> dict:
    if isinstance(f, BracketPower):
        return {"type": "bracket_power", "offset": f.offset, "power": f.power}
    if isinstance(f, ReflectedPower):
        return {"type": "reflected_power", "offset": f.offset, "power": f.power}
    if isinstance(f, BernsteinProduct):
        return {"type": "bernstein_product", "factors": [list(t) for t in f.factors]}
    if isinstance(f, CustomHash):
        return {"type": "custom_hash", "seed": f.seed}
    raise DomainError(f"integrand {f!r} has no JSON form")


def integrand_from_json(data: dict) -> Integrand:
    kind = data.get("type")
    if kind == "bracket_power":
        return BracketPower(int(data["offset"]), int(data["power"]))
    if kind == "reflected_power":
        return ReflectedPower(int(data["offset"]), int(data["power"]))
    if kind == "bernstein_product":
        return BernsteinProduct(tuple(tuple(int(v) for v in t) for t in data["factors"]))
    if kind == "custom_hash":
        return CustomHash(int(data.get("seed", 1)))
    raise DomainError(f"unknown integrand type {kind!r}")
