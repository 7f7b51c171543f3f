#!/usr/bin/env python3
"""Measure Riemann-sum convergence against the closed forms.

For each prime and each structured integrand in the verification grid this
prints, per level N up to the default cap:

  * the valuation of S_N - closed_form (agreement with the limit), and
  * the valuation of S_{N+1} - S_N (the stabilization certificate),

plus a summary of the achieved agreement at the cap.  The observed slack
(achieved valuation minus level) is what the test configuration freezes.

Usage: python3 scripts/calibrate_convergence.py [--primes 3 5 7] [--precision 24]
"""

import argparse
import sys
import time

from qbern.carlitz import table_for
from qbern.integral import (
    BracketPower,
    ReflectedPower,
    closed_one_minus_x_power,
    default_level_cap,
    riemann_sum,
)
from qbern.qfield import QContext


def grid():
    for c in (0, 1, 2):
        for m in range(1, 7):
            yield BracketPower(c, m), ("beta_poly", m, c)
    for n in range(2, 7):
        yield ReflectedPower(1, n), ("one_minus_x", n, None)


def closed_value(tag, ctx, tbl):
    kind, a, b = tag
    if kind == "beta_poly":
        return tbl.beta_poly(a, b)
    return closed_one_minus_x_power(a, ctx, tbl)


def valuation_of_diff(a, b):
    d = a - b
    return d.prec if d.is_zero() else d.valuation


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--precision", type=int, default=24)
    args = ap.parse_args(argv)

    for p in args.primes:
        ctx = QContext.padic(p, args.precision, "1+p")
        tbl = table_for(ctx)
        cap = default_level_cap(p)
        print(f"\n=== p={p}, q=1+p, K={args.precision}, level cap {cap} ===")
        t0 = time.monotonic()
        worst_slack = None
        for f, tag in grid():
            closed = closed_value(tag, ctx, tbl)
            sums = [riemann_sum(f, ctx, n) for n in range(1, cap + 1)]
            agree = [valuation_of_diff(s, closed) for s in sums]
            steps = [valuation_of_diff(b, a) for a, b in zip(sums, sums[1:])]
            slack = agree[-1] - cap
            worst_slack = slack if worst_slack is None else min(worst_slack, slack)
            monotone = all(x <= y for x, y in zip(steps, steps[1:]))
            print(
                f"  {f!r:38s} agree@cap={agree[-1]:>3} slack={slack:+d} "
                f"steps={steps} monotone={monotone}"
            )
        print(
            f"  worst slack at cap: {worst_slack:+d} "
            f"(achieved valuation >= cap{worst_slack:+d}); {time.monotonic() - t0:.1f}s"
        )


if __name__ == "__main__":
    sys.exit(main())
