"""Zeta, Riemann-Siegel theta and Hardy's Z with explicit error radii.

High-precision values come from Euler-Maclaurin summation evaluated in
mpmath arithmetic. Every evaluator returns ``(value, radius)``: the exact
value lies within ``radius`` of ``value``. The radius is the sum of the
Euler-Maclaurin (or Stirling) remainder bound and a rounding allowance that
scales with the number of operations.

A double-precision path (:func:`hardy_z_fast`) is provided for root
isolation; its radius is deliberately pessimistic.
"""

import math
from functools import lru_cache

import mpmath as mp
import numpy as np

from zetaindep import kernels

_LOG10_2PI = math.log10(2 * math.pi)


def _zeta_even_log10(k):
    # log10(2*zeta(2k)); |B_2k|/(2k)! = 2 zeta(2k) / (2 pi)^(2k)
    return math.log10(2.0 * (1.0 + 2.0 ** (1 - 2 * k) + 3.0 ** (-2 * k) * 2))


def _terms_needed(t, sigma, N, target_log10, kmax=4000):
    logN = math.log10(N)
    plog = math.log10(math.hypot(sigma, t))  # sum_{j=0}^{2k-2} log10|s+j| for k=1
    for k in range(1, kmax):
        # bound after k-1 terms uses T_k
        lt = _zeta_even_log10(k) - 2 * k * _LOG10_2PI + plog + (1 - sigma - 2 * k) * logN
        M = k - 1
        factor = math.log10(math.hypot(sigma + 2 * M + 1, t) / (sigma + 2 * M + 1))
        if lt + factor < target_log10:
            return M
        plog += math.log10(math.hypot(sigma + 2 * k - 1, t)) + math.log10(math.hypot(sigma + 2 * k, t))
    return None


@lru_cache(maxsize=4096)
def em_plan(t, sigma, target_log10):
    """Choose (N, M) so the Euler-Maclaurin remainder is below 10**target_log10.

    ``N`` is the number of terms summed directly, ``M`` the number of
    Bernoulli correction terms. Cost is modelled as ``N + 4 M``.
    """
    base = max(math.hypot(sigma, t) / (2 * math.pi), 1.0)
    best = None
    for c in (1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0):
        N = max(int(c * base) + 2, 8)
        M = _terms_needed(t, sigma, N, target_log10)
        if M is None:
            continue
        cost = N + 4 * M
        if best is None or cost < best[0]:
            best = (cost, N, M)
    if best is None:
        raise ValueError(f"no Euler-Maclaurin plan for t={t}, target 1e{target_log10}")
    return best[1], best[2]


@lru_cache(maxsize=64)
def _smallest_prime_factors(n):
    spf = list(range(n + 1))
    for p in range(2, int(n ** 0.5) + 1):
        if spf[p] == p:
            for q in range(p * p, n + 1, p):
                if spf[q] == q:
                    spf[q] = p
    return spf


def _bernoulli_ratios(M):
    # B_2k / (2k)! for k = 1..M+1 at the current precision
    out = []
    fact = mp.mpf(1)
    for k in range(1, M + 2):
        fact *= (2 * k - 1) * (2 * k)
        out.append(mp.bernoulli(2 * k) / fact)
    return out


def zeta_em(s, digits, derivative=False):
    """Euler-Maclaurin zeta(s) (and zeta'(s)) for 0 < Re s < 2, Im s > 0.

    Returns ``(value, radius)`` or, with ``derivative=True``,
    ``(value, radius, dvalue, dradius)``. Radii bound the absolute error and
    target ``10**-digits``.
    """
    sigma_f = float(mp.re(s))
    t_f = float(mp.im(s))
    # the remainder bound grows with |t|, so planning at ceil(|t|) is safe
    N, M = em_plan(math.ceil(abs(t_f)) + 1, sigma_f, -(digits + 2))
    wp = digits + 10 + int(math.log10(N + M + 10)) + int(math.log10(abs(t_f) + 10))
    with mp.workdps(wp):
        s = mp.mpc(s)
        sigma = mp.re(s)
        spf = _smallest_prime_factors(N)
        pows = [None, mp.mpc(1)]
        logs = [None, mp.mpf(0)]
        total = mp.mpc(1)
        dtotal = mp.mpc(0)
        for n in range(2, N):
            p = spf[n]
            if p == n:
                lg = mp.log(n)
                pw = mp.exp(-s * lg)
            else:
                lg = logs[p] + logs[n // p]
                pw = pows[p] * pows[n // p]
            pows.append(pw)
            logs.append(lg)
            total += pw
            if derivative:
                dtotal -= lg * pw
        logN = mp.log(N)
        Ns = mp.exp(-s * logN)
        sm1 = s - 1
        total += N * Ns / sm1 + Ns / 2
        if derivative:
            dtotal += -logN * N * Ns / sm1 - N * Ns / sm1 ** 2 - logN * Ns / 2
        ratios = _bernoulli_ratios(M)
        P = s  # prod_{j=0}^{2k-2} (s+j)
        dP = mp.mpc(1)
        power = Ns / N  # N^(-s-2k+1) for k=1
        invN2 = mp.mpf(1) / (N * N)
        for k in range(1, M + 1):
            term = ratios[k - 1] * P * power
            total += term
            if derivative:
                dtotal += ratios[k - 1] * power * (dP - logN * P)
            q = (s + 2 * k - 1) * (s + 2 * k)
            if derivative:
                dP = dP * q + P * (2 * s + 4 * k - 1)
            P *= q
            power *= invN2
        # remainder: |s+2M+1| / (sigma+2M+1) * |T_{M+1}|
        c_next = abs(ratios[M])
        tail = abs(s + 2 * M + 1) / (sigma + 2 * M + 1) * c_next * abs(P) * N ** (-sigma - 2 * M - 1)
        ops = N + 10 * M + 10
        rounding = ops * mp.mpf(10) ** (-(wp - 2)) * (2 * mp.sqrt(N) + 10)
        radius = tail + rounding
        if not derivative:
            return +total, radius
        # Cauchy estimate on a circle of radius 1/2 around s
        r = mp.mpf(1) / 2
        prod = mp.mpf(1)
        for j in range(2 * M + 1):
            prod *= abs(s + j) + r
        dtail = (abs(s) + 2 * M + 1 + r) / (sigma - r + 2 * M + 1) * c_next * prod
        dtail *= N ** (-sigma + r - 2 * M - 1) / r
        dradius = dtail + rounding * (1 + logN)
        return +total, radius, +dtotal, dradius


def theta(t, digits):
    """Riemann-Siegel theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi, with radius."""
    t_f = float(t)
    wp = digits + 10 + int(math.log10(abs(t_f) + 10))
    with mp.workdps(wp):
        t = mp.mpf(t)
        z = mp.mpc(mp.mpf(1) / 4, t / 2)
        big = 0.4 * (digits + 5) + 5
        shift = 0 if t_f / 2 >= big else int(math.ceil(big))
        correction = mp.mpf(0)
        for j in range(shift):
            correction += mp.arg(z + j)
        w = z + shift
        logw = mp.log(w)
        val = mp.im((w - mp.mpf(1) / 2) * logw - w)
        winv = 1 / w
        winv2 = winv * winv
        wpow = winv  # w^(1-2k)
        eps = mp.mpf(10) ** (-(digits + 3))
        absw = abs(w)
        sec2 = 1 / mp.cos(mp.arg(w) / 2) ** 2
        k = 1
        while True:
            coef = mp.bernoulli(2 * k) / (2 * k * (2 * k - 1))
            val += coef * mp.im(wpow)
            nxt = abs(mp.bernoulli(2 * k + 2)) / ((2 * k + 2) * (2 * k + 1)) / absw ** (2 * k + 1)
            bound = nxt * sec2 ** (k + 1)
            if bound < eps or k > 4 * wp:
                break
            wpow *= winv2
            k += 1
        val -= correction
        val -= t / 2 * mp.log(mp.pi)
        radius = bound + mp.mpf(10) ** (-(wp - 3)) * (k + shift + 10) * (abs(val) + 1)
        return +val, radius


def hardy_z(t, digits):
    """Hardy Z(t) = exp(i theta(t)) zeta(1/2 + it) as ``(value, radius)``."""
    with mp.workdps(digits + 10 + int(math.log10(abs(float(t)) + 10))):
        t = mp.mpf(t)
        th, th_rad = theta(t, digits + 3)
        z, z_rad = zeta_em(mp.mpc(mp.mpf(1) / 2, t), digits + 3)
        val = mp.re(mp.expj(th) * z)
        radius = z_rad + abs(z) * th_rad + mp.mpf(10) ** (-(digits + 6))
        return +val, radius


# --- double precision path ------------------------------------------------

_FAST_M = 16
_FAST_BERN = [float(mp.bernoulli(2 * k) / mp.factorial(2 * k)) for k in range(1, _FAST_M + 2)]


def theta_fast(t):
    """Vectorised theta(t) in double precision (asymptotic series for t >= 50)."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = np.empty_like(t)
    big = t >= 50.0
    tb = t[big]
    out[big] = (tb / 2 * np.log(tb / (2 * np.pi)) - tb / 2 - np.pi / 8 + 1 / (48 * tb)
                + 7 / (5760 * tb ** 3) + 31 / (80640 * tb ** 5) + 127 / (430080 * tb ** 7))
    for i in np.nonzero(~big)[0]:
        out[i] = float(theta(t[i], 18)[0])
    return out


def _fast_nterms(t):
    return np.maximum(np.ceil(0.64 * np.abs(t + 0.5j)).astype(np.int64), 12)


def hardy_z_fast(t):
    """Double-precision Hardy Z on an array of heights: ``(values, radii)``.

    The main Euler-Maclaurin sum runs in the active kernel backend. Radii
    include the remainder bound and a conservative allowance for phase error
    in ``t log n``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    N = _fast_nterms(t)
    total = kernels.zeta_main_sums(np.ascontiguousarray(t), np.ascontiguousarray(N))
    s = 0.5 + 1j * t
    Nf = N.astype(np.float64)
    Ns = np.exp(-s * np.log(Nf))
    total = total + Nf * Ns / (s - 1) + Ns / 2
    P = s.copy()
    power = Ns / Nf
    for k in range(1, _FAST_M + 1):
        total = total + _FAST_BERN[k - 1] * P * power
        P = P * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (Nf * Nf)
    tail = np.abs(s + 2 * _FAST_M + 1) / (0.5 + 2 * _FAST_M + 1) * abs(_FAST_BERN[_FAST_M]) * np.abs(P * power)
    th = theta_fast(t)
    vals = np.real(np.exp(1j * th) * total)
    radii = tail + 2e-15 * (t + 10) * (2 * np.sqrt(Nf) + 10) + 1e-13 * np.abs(total) * (np.abs(th) + 1)
    return vals, radii
