"""Locate, certify and verify zeros of Hardy's Z function.

Zeros are isolated with Gram points: a Gram block between consecutive good
Gram points ``g_a < g_b`` holds exactly ``b - a`` zeros (Rosser's rule, valid
far beyond the heights handled here), so sample points are added inside a
block until that many sign changes appear. Each sign change is then refined
in double precision and finally certified in multiprecision by a sign change
of Z across an interval narrower than ``10**-(digits + guard)``.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal

import mpmath as mp
import numpy as np
from scipy.optimize import brentq

from zetaindep.errors import IsolationError, PrecisionError
from zetaindep.zerolab.table import ZeroRecord, ZeroTable, _mpf, fixed_point
from zetaindep.zerolab.zeta import hardy_z, hardy_z_fast, theta, theta_fast, zeta_em

log = logging.getLogger(__name__)

DEFAULT_GUARD = 10
_MAX_SPLIT_DEPTH = 14


def smooth_count(T) -> float:
    """Smooth zero-counting estimate (T/2pi) log(T/2pi) - T/2pi + 7/8."""
    x = float(T) / (2 * math.pi)
    return x * math.log(x) - x + 7 / 8


def gram_points(j_lo: int, j_hi: int) -> np.ndarray:
    """Gram points g_j (theta(g_j) = j pi) for j_lo <= j <= j_hi, in double precision."""
    js = np.arange(j_lo, j_hi + 1)
    g = np.array([2 * math.pi * math.exp(1 + float(mp.lambertw((8 * j + 1) / (8 * math.e)).real)) for j in js])
    for _ in range(6):
        dth = 0.5 * np.log(g / (2 * math.pi))
        g = g - (theta_fast(g) - js * math.pi) / dth
    return g


def _certified_signs(ts: np.ndarray) -> np.ndarray:
    """Signs of Z at ``ts`` (+1/-1), escalating to multiprecision when needed."""
    vals, radii = hardy_z_fast(ts)
    signs = np.sign(vals).astype(int)
    for i in np.nonzero(np.abs(vals) <= radii)[0]:
        signs[i] = _mp_sign(ts[i])
    return signs


def _mp_sign(t) -> int:
    for digits in (25, 45, 80):
        v, r = hardy_z(mp.mpf(t), digits)
        if abs(v) > r:
            return 1 if v > 0 else -1
    raise IsolationError(f"cannot determine the sign of Z({t}); a zero lies too close to this point")


def _resolve_block(ts, signs, expected):
    ts = list(ts)
    signs = list(signs)
    for _ in range(_MAX_SPLIT_DEPTH):
        changes = [i for i in range(len(ts) - 1) if signs[i] != signs[i + 1]]
        if len(changes) == expected:
            return [(ts[i], ts[i + 1]) for i in changes]
        if len(changes) > expected:
            raise IsolationError(
                f"Gram block [{ts[0]:.6f}, {ts[-1]:.6f}] shows {len(changes)} sign changes, expected {expected}"
            )
        mids = np.array([(ts[i] + ts[i + 1]) / 2 for i in range(len(ts) - 1)])
        msigns = _certified_signs(mids)
        new_t, new_s = [ts[0]], [signs[0]]
        for i in range(len(mids)):
            new_t += [mids[i], ts[i + 1]]
            new_s += [int(msigns[i]), signs[i + 1]]
        ts, signs = new_t, new_s
    raise IsolationError(
        f"could not isolate {expected} zeros in Gram block [{ts[0]:.6f}, {ts[-1]:.6f}]; "
        "missing sign changes (insufficient resolution or a missed zero pair)"
    )


def isolate_zeros(count: int):
    """Brackets ``(a, b)`` with a sign change of Z for the first ``count`` zeros.

    Returns ``(brackets, g_last, j_last)`` where ``g_last = g_{j_last}`` is the
    good Gram point closing the last examined block, so exactly
    ``j_last + 1`` zeros lie below it.
    """
    brackets = []
    chunk = max(64, count // 4)
    j_next = -1
    block_t, block_s = [], []
    block_start = None
    while True:
        gs = gram_points(j_next, j_next + chunk - 1)
        signs = _certified_signs(gs)
        for offset, (g, sg) in enumerate(zip(gs, signs)):
            j = j_next + offset
            good = sg * (-1) ** j > 0
            if block_start is None:
                if not good:
                    raise IsolationError(f"Gram point g_{j} is not good; cannot start the scan")
                block_start = j
                block_t, block_s = [g], [int(sg)]
                continue
            block_t.append(g)
            block_s.append(int(sg))
            if good:
                brackets.extend(_resolve_block(block_t, block_s, j - block_start))
                block_start = j
                block_t, block_s = [g], [int(sg)]
                if len(brackets) >= count:
                    return brackets, float(g), j
        j_next += chunk


def _z_value(x, digits):
    return hardy_z(x, digits)


def refine_zero(a: float, b: float, digits: int, guard: int = DEFAULT_GUARD):
    """Certify the zero in ``[a, b]``; returns ``(x, lo, hi)`` with hi - lo < 10**-(digits+guard)."""
    fz = lambda x: float(hardy_z_fast(x)[0][0])
    x0 = brentq(fz, a, b, xtol=1e-13, rtol=1e-15)
    width = mp.mpf(10) ** (-(digits + guard))
    zdig = digits + guard + 6
    for attempt in range(3):
        with mp.workdps(zdig + 10):
            xa, xb = mp.mpf(x0) - mp.mpf("1e-10"), mp.mpf(x0) + mp.mpf("1e-10")
            fa, fb = _z_value(xa, zdig)[0], _z_value(xb, zdig)[0]
            for _ in range(60):
                if fb == fa:
                    break
                xn = xb - fb * (xb - xa) / (fb - fa)
                step = abs(xn - xb)
                xa, fa = xb, fb
                xb, fb = xn, _z_value(xn, zdig)[0]
                if step < width / 100:
                    break
            lo, hi = xb - width / 4, xb + width / 4
            vl, rl = _z_value(lo, zdig)
            vh, rh = _z_value(hi, zdig)
            if abs(vl) > rl and abs(vh) > rh and (vl > 0) != (vh > 0):
                return +xb, +lo, +hi
            if abs(vl) > rl and abs(vh) > rh:
                # secant did not land within the target width; bisect from the float bracket
                return _bisect(a, b, width, zdig)
        zdig += 10
    raise PrecisionError(f"cannot certify the zero in [{a}, {b}] to {digits} digits")


def _bisect(a, b, width, zdig):
    with mp.workdps(zdig + 10):
        lo, hi = mp.mpf(a), mp.mpf(b)
        slo = _sign_at(lo, zdig)
        while hi - lo >= width / 2:
            mid = (lo + hi) / 2
            sm = _sign_at(mid, zdig)
            if sm == slo:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2, lo, hi


def _sign_at(x, zdig):
    v, r = _z_value(x, zdig)
    if abs(v) <= r:
        raise PrecisionError(f"sign of Z({mp.nstr(x, 20)}) undetermined at {zdig} digits")
    return 1 if v > 0 else -1


def zeta_prime_at(gamma, digits: int):
    """zeta'(1/2 + i gamma) rounded to ``digits`` fractional digits (re, im)."""
    with mp.workdps(digits + 20):
        s = mp.mpc(mp.mpf(1) / 2, mp.mpf(str(gamma)))
        _, _, dv, dr = zeta_em(s, digits + 4, derivative=True)
        if dr > mp.mpf(10) ** (-digits) / 4:
            raise PrecisionError(f"zeta' radius {mp.nstr(dr, 3)} too large for {digits} digits")
        return fixed_point(mp.re(dv), digits), fixed_point(mp.im(dv), digits)


def _make_record(args):
    index, a, b, digits, guard = args
    x, _, _ = refine_zero(a, b, digits, guard)
    with mp.workdps(digits + guard + 20):
        zp = zeta_prime_at(mp.nstr(x, digits + guard + 5), digits)
    return ZeroRecord(index, fixed_point(x, digits), digits, zp)


def compute_zeros(count: int, digits: int, *, guard: int = DEFAULT_GUARD, parallelism: int = 1,
                  progress=None) -> ZeroTable:
    """First ``count`` zeros, each certified to ``digits`` decimal digits.

    Raises :class:`IsolationError` when bracketing fails or the number of
    sign changes below the last Gram point disagrees with the smooth
    zero-counting estimate by more than 1.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if digits < 10:
        raise ValueError("digits must be >= 10")
    brackets, g_last, j_last = isolate_zeros(count)
    found = j_last + 1
    if abs(found - smooth_count(g_last)) > 1:
        raise IsolationError(
            f"{found} zeros below T={g_last:.6f} but the counting estimate gives {smooth_count(g_last):.3f}"
        )
    jobs = [(i + 1, a, b, digits, guard) for i, (a, b) in enumerate(brackets[:count])]
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(_make_record, jobs, chunksize=16))
    else:
        records = []
        for job in jobs:
            records.append(_make_record(job))
            if progress is not None:
                progress(job[0], count)
    return ZeroTable(tuple(records), "computed")


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    records: list[CheckResult] = field(default_factory=list)
    table_checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.records) and all(c.ok for c in self.table_checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.records + self.table_checks if not c.ok]

    def format(self) -> str:
        lines = [f"{'PASS' if c.ok else 'FAIL'} {c.name} {c.detail}".rstrip()
                 for c in self.table_checks + self.records]
        lines.append(f"verdict={'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _sign_check(rec: ZeroRecord, elevated: int) -> CheckResult:
    lo, hi = rec.interval
    digits = rec.gamma_digits + elevated + 4
    for extra in (0, 10):
        vl, rl = hardy_z(_mpf(lo), digits + extra)
        vh, rh = hardy_z(_mpf(hi), digits + extra)
        if abs(vl) > rl and abs(vh) > rh:
            if (vl > 0) != (vh > 0):
                return CheckResult(f"sign[{rec.index}]", True)
            return CheckResult(f"sign[{rec.index}]", False, f"no sign change of Z on [{lo}, {hi}]")
    return CheckResult(f"sign[{rec.index}]", False, "sign of Z at an endpoint is indeterminate")


def verify_zeros(table: ZeroTable, elevated: int = 5) -> VerificationReport:
    """Re-check every record's sign change and the table-level counting invariants."""
    if not table.records:
        raise ValueError("empty table")
    report = VerificationReport()
    for rec in table:
        report.records.append(_sign_check(rec, elevated))

    gammas = [rec.gamma for rec in table]
    mono = all(a < b for a, b in zip(gammas, gammas[1:]))
    report.table_checks.append(CheckResult("monotone", mono, "" if mono else "gamma not strictly increasing"))

    idx = [rec.index for rec in table]
    contiguous = idx == list(range(1, len(idx) + 1))
    report.table_checks.append(CheckResult(
        "indices", contiguous, "" if contiguous else "indices are not 1..count without gaps"))

    last = table.records[-1]
    c = last.index if contiguous else len(table)
    est = smooth_count(last.gamma)
    # at a zero the counting function sits midway through its unit jump
    smooth_ok = contiguous and abs(len(table) - 0.5 - est) <= 1
    report.table_checks.append(CheckResult(
        "count_smooth", smooth_ok, f"count={len(table)} last_index={c} estimate={est:.3f}"))

    report.table_checks.append(_gram_count_check(table))
    return report


def _gram_count_check(table: ZeroTable) -> CheckResult:
    gmax = float(table.records[-1].gamma)
    j = int(math.floor(float(theta(mp.mpf(gmax), 15)[0]) / math.pi))
    while j >= -1:
        g = gram_points(j, j)
        if g[0] <= gmax and _certified_signs(g)[0] * (-1) ** j > 0:
            break
        j -= 1
    below = sum(1 for rec in table if float(rec.gamma) < g[0])
    ok = below == j + 1
    return CheckResult("count_gram", ok, f"zeros below good Gram point g_{j}={g[0]:.6f}: {below}, exact count {j + 1}")
