"""Kernel-weighted lower bounds for limsup/liminf M(x) x^(-1/2).

Given zeros certified {N}-independent, the bound is

    sum over selected zeros of 2N/(N+1) * |rho zeta'(rho)|^-1 * f(gamma)

where ``f`` is the Fejer kernel ``1 - |t|/T`` or the Odlyzko-te Riele kernel
``(1 - |t|/T) cos(pi t/T) + sin(pi |t|/T) / pi``, both supported on
``|t| < T``. The limsup is at least the bound and the liminf at most its
negation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import mpmath as mp

WORKING_DPS = 30

KIND_ALIASES = {
    "fejer": "fejer",
    "f": "fejer",
    "f0": "odlyzko_te_riele",
    "odlyzko_te_riele": "odlyzko_te_riele",
}


@dataclass(frozen=True)
class Kernel:
    kind: str
    T: mp.mpf

    def __post_init__(self):
        if self.kind not in KIND_ALIASES:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        object.__setattr__(self, "kind", KIND_ALIASES[self.kind])
        with mp.workdps(WORKING_DPS):
            T = mp.mpf(str(self.T)) if not isinstance(self.T, mp.mpf) else +self.T
        if T <= 0:
            raise ValueError("kernel height T must be positive")
        object.__setattr__(self, "T", T)

    @property
    def short_name(self) -> str:
        return "fejer" if self.kind == "fejer" else "f0"


def kernel_value(kernel: Kernel, t) -> mp.mpf:
    with mp.workdps(WORKING_DPS):
        x = abs(mp.mpf(str(t)) if not isinstance(t, mp.mpf) else t) / kernel.T
        if x >= 1:
            return mp.mpf(0)
        if kernel.kind == "fejer":
            return 1 - x
        return (1 - x) * mp.cospi(x) + mp.sinpi(x) / mp.pi


def height_at(zeros, index: int, epsilon="1e-6") -> mp.mpf:
    """T = gamma_index - epsilon."""
    with mp.workdps(WORKING_DPS):
        return zeros.record(index).gamma_mpf() - mp.mpf(str(epsilon))


def weight(record, kernel: Kernel) -> mp.mpf:
    with mp.workdps(WORKING_DPS):
        return record.residue_mag * kernel_value(kernel, record.gamma_mpf())


def heaviness_sort(zeros, kernel: Kernel) -> list[int]:
    """Cardinal indices by descending |rho zeta'(rho)|^-1 f(gamma); ties keep cardinal order."""
    records = list(zeros)
    for rec in records:
        if rec.gamma_mpf() >= kernel.T:
            raise ValueError(f"zero {rec.index} lies at or above T")
    keyed = [(-weight(rec, kernel), rec.index) for rec in records]
    keyed.sort()
    return [idx for _, idx in keyed]


def zeros_below(zeros, T):
    from zetaindep.zerolab.table import ZeroTable

    return ZeroTable(tuple(r for r in zeros if r.gamma_mpf() < T), zeros.source)


@dataclass(frozen=True)
class Contribution:
    index: int
    weight: mp.mpf
    residue_mag: mp.mpf
    kernel_value: mp.mpf
    term: mp.mpf


@dataclass(frozen=True)
class BoundReport:
    bound: mp.mpf
    contributions: tuple[Contribution, ...]
    n: int
    N_gamma: int | None
    T: mp.mpf
    kernel_kind: str
    params: dict = field(default_factory=dict)

    @property
    def limsup_lower(self):
        return self.bound

    @property
    def liminf_upper(self):
        return -self.bound

    def format(self, with_terms: bool = True) -> str:
        lines = [
            f"bound={mp.nstr(self.bound, WORKING_DPS - 2)}",
            f"limsup_lower={mp.nstr(self.limsup_lower, WORKING_DPS - 2)}",
            f"liminf_upper={mp.nstr(self.liminf_upper, WORKING_DPS - 2)}",
            f"n={self.n}",
            f"N_gamma={'inf' if self.N_gamma is None else self.N_gamma}",
            f"T={mp.nstr(self.T, WORKING_DPS - 2)}",
            f"kernel={self.kernel_kind}",
        ]
        lines += [f"{k}={v}" for k, v in self.params.items()]
        if with_terms:
            lines.append("# index\tweight\tresidue_mag\tkernel\tterm")
            for c in self.contributions:
                lines.append("\t".join([str(c.index)] + [mp.nstr(v, 20) for v in
                                                          (c.weight, c.residue_mag, c.kernel_value, c.term)]))
        return "\n".join(lines) + "\n"


def mertens_bound(zeros, order: Sequence[int], n: int, N: int | None, kernel: Kernel) -> BoundReport:
    """Sum of 2N/(N+1) |r_gamma| f(gamma) over the first ``n`` zeros of ``order``.

    ``N=None`` uses the limiting factor 2.
    """
    if n < 1 or n > len(order):
        raise ValueError(f"n={n} outside 1..{len(order)}")
    if N is not None and N < 1:
        raise ValueError("N must be >= 1 (or None for the limiting factor 2)")
    with mp.workdps(WORKING_DPS):
        factor = mp.mpf(2) if N is None else mp.mpf(2 * N) / (N + 1)
        contributions = []
        total = mp.mpf(0)
        for idx in order[:n]:
            rec = zeros.record(idx)
            if rec.gamma_mpf() >= kernel.T:
                raise ValueError(f"selected zero {idx} (gamma={rec.gamma}) is not below T")
            kv = kernel_value(kernel, rec.gamma_mpf())
            term = factor * rec.residue_mag * kv
            total += term
            contributions.append(Contribution(idx, factor, rec.residue_mag, kv, term))
        return BoundReport(total, tuple(contributions), n, N, kernel.T, kernel.short_name)


@dataclass
class CurveConfig:
    """Sweep settings. A T-index ``j`` means ``T = gamma_j - epsilon``."""

    epsilon: str = "1e-6"
    # vary_n_resort: (n, T-index) pairs
    schedule: list[tuple[int, int]] = field(default_factory=list)
    # vary_T_fixed_order
    n_selected: int = 300
    sort_T_index: int = 2001
    T_indices: list[int] = field(default_factory=list)


def _curve_vary_n(zeros, kinds, config):
    header = ["n", "T_index"] + [f"bound_{Kernel(k, 1).short_name}" for k in kinds]
    rows = []
    for n, tidx in config.schedule:
        T = height_at(zeros, tidx, config.epsilon)
        below = zeros_below(zeros, T)
        row = [n, tidx]
        for kind in kinds:
            kern = Kernel(kind, T)
            order = heaviness_sort(below, kern)
            row.append(mertens_bound(below, order, n, None, kern).bound)
        rows.append(row)
    return header, rows


def _curve_vary_T(zeros, kinds, config):
    T_sort = height_at(zeros, config.sort_T_index, config.epsilon)
    below = zeros_below(zeros, T_sort)
    selected = heaviness_sort(below, Kernel("f0", T_sort))[: config.n_selected]
    with mp.workdps(WORKING_DPS):
        asymptote = sum((2 * zeros.record(i).residue_mag for i in selected), mp.mpf(0))
    header = ["T_index", "T"] + [f"bound_{Kernel(k, 1).short_name}" for k in kinds] + ["asymptote"]
    rows = []
    for tidx in config.T_indices:
        T = height_at(zeros, tidx, config.epsilon)
        row = [tidx, T]
        for kind in kinds:
            kern = Kernel(kind, T)
            with mp.workdps(WORKING_DPS):
                row.append(sum((2 * zeros.record(i).residue_mag * kernel_value(kern, zeros.record(i).gamma_mpf())
                                for i in selected), mp.mpf(0)))
        row.append(asymptote)
        rows.append(row)
    return header, rows


def emit_bound_curve(zeros, mode: str, kinds: Sequence[str], config: CurveConfig):
    """Data series behind the n-sweep (``vary_n_resort``) and T-sweep (``vary_T_fixed_order``) figures.

    Bounds use the limiting factor 2. Returns ``(header, rows)``.
    """
    if mode in ("vary_n_resort", "fig1"):
        return _curve_vary_n(zeros, kinds, config)
    if mode in ("vary_T_fixed_order", "fig2"):
        return _curve_vary_T(zeros, kinds, config)
    raise ValueError(f"unknown curve mode {mode!r}")


def curve_csv(header, rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([mp.nstr(v, 20) if isinstance(v, mp.mpf) else v for v in row])
    return out.getvalue()
