"""Smallest ±1 combinations of zeros and small-k independence scans.

Combinations are encoded as a pair of bit masks ``(pos, neg)``: bit ``i-1``
of ``pos`` (``neg``) set means ``gamma_i`` enters with coefficient +1 (-1).
Search results are reported with the sign that makes the combination's value
positive.

The search is meet-in-the-middle over fixed-point integers: all ``3**h``
signed sums of each half are enumerated, one half is sorted, and the other
half probes for the nearest negated value. Every pair whose fixed-point sum
lies within the accumulated rounding tolerance of the optimum is then
re-evaluated exactly from the stored decimals.
"""

from __future__ import annotations

import decimal
import logging
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Sequence

import numpy as np

from zetaindep import kernels
from zetaindep.errors import PrecisionError
from zetaindep.indep import main_candidate
from zetaindep.lattice import ReductionParams

log = logging.getLogger(__name__)

_INT64_BUDGET = 4 * 10 ** 18


@dataclass(frozen=True)
class CombinationEncoding:
    pos_mask: int
    neg_mask: int

    def __post_init__(self):
        if self.pos_mask < 0 or self.neg_mask < 0:
            raise ValueError("masks must be nonnegative")
        if self.pos_mask & self.neg_mask:
            raise ValueError(f"masks overlap: {self.pos_mask & self.neg_mask:#b}")
        if not (self.pos_mask | self.neg_mask):
            raise ValueError("trivial combination")

    def negated(self) -> "CombinationEncoding":
        return CombinationEncoding(self.neg_mask, self.pos_mask)

    def __str__(self):
        return f"({self.pos_mask},{self.neg_mask})"


def encode(coeffs: Sequence[int]) -> CombinationEncoding:
    pos = neg = 0
    for i, c in enumerate(coeffs):
        if c == 1:
            pos |= 1 << i
        elif c == -1:
            neg |= 1 << i
        elif c != 0:
            raise ValueError(f"coefficient {c} at position {i + 1} is not in {{-1, 0, 1}}")
    return CombinationEncoding(pos, neg)


def decode(enc, n: int) -> list[int]:
    if not isinstance(enc, CombinationEncoding):
        enc = CombinationEncoding(*enc)
    if (enc.pos_mask | enc.neg_mask) >> n:
        raise ValueError(f"encoding {enc} does not fit in {n} bits")
    return [(enc.pos_mask >> i & 1) - (enc.neg_mask >> i & 1) for i in range(n)]


def combination_value(enc: CombinationEncoding, gammas: Sequence[Decimal]) -> Decimal:
    with decimal.localcontext() as ctx:
        ctx.prec = 200
        total = Decimal(0)
        for i, g in enumerate(gammas):
            if enc.pos_mask >> i & 1:
                total += g
            elif enc.neg_mask >> i & 1:
                total -= g
        return +total


@dataclass(frozen=True)
class RelationSearchResult:
    n: int
    min_abs: Decimal
    encoding: CombinationEncoding
    digits_used: int
    runner_up: Decimal | None = None

    @property
    def exact_zero(self) -> bool:
        return self.min_abs == 0


def _half_coeffs(index: int, h: int) -> list[int]:
    out = []
    for _ in range(h):
        index, digit = divmod(index, 3)
        out.append(digit - 1)
    return out


def smallest_combination(zeros, n: int) -> RelationSearchResult:
    """Exact minimum of |sum c_i gamma_i| over nonzero c in {-1, 0, 1}^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    records = list(zeros)[:n]
    if len(records) < n:
        raise ValueError(f"table has {len(records)} zeros, need {n}")
    digits = min(r.gamma_digits for r in records)
    gammas = [r.gamma for r in records]
    rad = Fraction(records[0].radius) if hasattr(records[0], "radius") else Fraction(0)

    total = sum(gammas)
    scale = 0
    while scale < digits and total * 10 ** (scale + 1) < _INT64_BUDGET:
        scale += 1
    ints = np.array([int(g.scaleb(scale).to_integral_value(decimal.ROUND_HALF_EVEN)) for g in gammas],
                    dtype=np.int64)

    h1 = (n + 1) // 2
    h2 = n - h1
    A = kernels.half_sums(np.ascontiguousarray(ints[:h1]))
    B = kernels.half_sums(np.ascontiguousarray(ints[h1:]))
    order = np.argsort(A, kind="stable")
    As = np.ascontiguousarray(A[order])
    zero_a = (3 ** h1 - 1) // 2
    zero_b = (3 ** h2 - 1) // 2
    skip_a = int(np.nonzero(order == zero_a)[0][0])
    best, _, _ = kernels.closest_pair(As, B, skip_a, zero_b)

    # fixed-point rounding (n/2 units) plus stored-decimal uncertainty, on both sides
    rad_units = rad * 10 ** scale
    bound = int(best + n + 4 * n * rad_units + 2)
    ia, jb = kernels.pairs_within(As, B, bound)

    seen = {}
    for i, j in zip(ia.tolist(), jb.tolist()):
        a_idx = int(order[i])
        if a_idx == zero_a and j == zero_b:
            continue
        coeffs = _half_coeffs(a_idx, h1) + _half_coeffs(j, h2)
        enc = encode(coeffs)
        value = combination_value(enc, gammas)
        if value < 0:
            enc, value = enc.negated(), value.copy_negate()
        seen[enc] = value
    ranked = sorted(seen.items(), key=lambda kv: (kv[1], kv[0].pos_mask, kv[0].neg_mask))
    enc, value = ranked[0]
    err = Decimal(n) * Decimal(str(float(rad))) if rad else Decimal(0)
    runner_up = ranked[1][1] if len(ranked) > 1 else None
    if value == 0 and rad == 0:
        log.warning("exact vanishing combination %s among the first %d values", enc, n)
    elif value <= err:
        raise PrecisionError(f"n={n}: smallest combination {value} is not distinguishable from 0 at {digits} digits")
    with decimal.localcontext() as ctx:
        ctx.prec = 200
        gap = None if runner_up is None else runner_up - value
    if gap is not None and gap <= 2 * err:
        raise PrecisionError(
            f"n={n}: two smallest combinations differ by {gap}, below the error {2 * err}; "
            "recompute the zeros with more digits"
        )
    return RelationSearchResult(n, value, enc, digits, runner_up)


def smallest_combination_bruteforce(gammas: Sequence[Decimal]) -> tuple[Decimal, CombinationEncoding]:
    """Exhaustive reference over all 3**n - 1 sign vectors (small n only)."""
    n = len(gammas)
    best = None
    for idx in range(3 ** n):
        coeffs = _half_coeffs(idx, n)
        if not any(coeffs):
            continue
        enc = encode(coeffs)
        value = combination_value(enc, gammas)
        if value < 0:
            continue
        key = (value, enc.pos_mask, enc.neg_mask)
        if best is None or key < best:
            best = key
    return best[0], CombinationEncoding(best[1], best[2])


def m_independence_scan(zeros, n_list: Sequence[int], k: int, delta=Fraction(3, 4), guard: int = 0):
    """Rows ``(n, m, min |b*|^2)``: the first ``n`` values are m-independent by the weak threshold."""
    values = list(zeros)
    params = ReductionParams(Fraction(delta), guard)
    rows = []
    for n in n_list:
        if n > len(values):
            raise ValueError(f"need {n} values, have {len(values)}")
        m, mn, _ = main_candidate(values[:n], k, params, guard)
        rows.append((n, m, mn))
    return rows


def table1_tsv(results: Sequence[RelationSearchResult]) -> str:
    lines = ["n\tvalue\tencoding"]
    for r in results:
        lines.append(f"{r.n}\t{r.min_abs:.6E}\t{r.encoding}")
    return "\n".join(lines) + "\n"


def table2_tsv(rows) -> str:
    lines = ["n\tm"]
    for n, m, _ in rows:
        lines.append(f"{n}\t{m}")
    return "\n".join(lines) + "\n"
