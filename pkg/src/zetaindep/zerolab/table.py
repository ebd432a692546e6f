"""Zero records, zero tables and the tab-separated zero-table file format.

File layout::

    # digits=<d>
    # count=<c>
    # source=<computed|imported>
    index<TAB>gamma<TAB>zeta_prime_re<TAB>zeta_prime_im

Decimals are fixed-point with exactly ``d`` fractional digits. A gamma stored
with ``d`` digits is certified to lie within ``radius_for(d) = 0.6 * 10**-d``
of the stored value (rounding error plus the bisection width).
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
import decimal
from decimal import Decimal
from functools import cached_property
from pathlib import Path
from typing import Iterable

import mpmath as mp

from zetaindep.errors import MalformedInputError

SOURCES = ("computed", "imported")


def radius_for(digits: int) -> Decimal:
    return Decimal((0, (6,), -(digits + 1)))


def fixed_point(value, digits: int) -> Decimal:
    """Round an mpmath/int/str number to a Decimal with exactly ``digits`` fractional digits."""
    with mp.workdps(digits + 30):
        n = int(mp.nint(mp.mpf(value) * mp.mpf(10) ** digits))
    sign = 1 if n < 0 else 0
    return Decimal((sign, tuple(int(c) for c in str(abs(n))), -digits))


def _mpf(d: Decimal):
    """Exact conversion, independent of the ambient mpmath precision."""
    with mp.workdps(len(d.as_tuple().digits) + 5):
        return mp.mpf(str(d))


@dataclass(frozen=True)
class ZeroRecord:
    """One nontrivial zero 1/2 + i*gamma with zeta' at that point."""

    index: int
    gamma: Decimal
    gamma_digits: int
    zeta_prime: tuple[Decimal, Decimal]

    @property
    def radius(self) -> Decimal:
        return radius_for(self.gamma_digits)

    @property
    def interval(self) -> tuple[Decimal, Decimal]:
        with decimal.localcontext() as ctx:
            ctx.prec = len(self.gamma.as_tuple().digits) + 5
            return self.gamma - self.radius, self.gamma + self.radius

    @cached_property
    def residue_mag(self):
        """|1 / (rho zeta'(rho))| with rho = 1/2 + i gamma."""
        with mp.workdps(max(30, self.gamma_digits + 5)):
            g = _mpf(self.gamma)
            zp = mp.mpc(_mpf(self.zeta_prime[0]), _mpf(self.zeta_prime[1]))
            return 1 / (mp.sqrt(mp.mpf(1) / 4 + g * g) * abs(zp))

    def gamma_mpf(self):
        return _mpf(self.gamma)


@dataclass(frozen=True)
class ZeroTable:
    records: tuple[ZeroRecord, ...]
    source: str = "computed"
    _by_index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        object.__setattr__(self, "records", tuple(self.records))
        prev = None
        for rec in self.records:
            if rec.gamma <= 0:
                raise ValueError(f"record {rec.index}: gamma must be positive")
            if prev is not None and rec.gamma <= prev.gamma:
                raise ValueError(f"record {rec.index}: gamma not increasing")
            prev = rec
            self._by_index[rec.index] = rec

    @property
    def count(self) -> int:
        return len(self.records)

    @property
    def digits(self) -> int:
        return min(r.gamma_digits for r in self.records) if self.records else 0

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def record(self, index: int) -> ZeroRecord:
        """Record by cardinal index (1-based)."""
        try:
            return self._by_index[index]
        except KeyError:
            raise KeyError(f"no zero with index {index}") from None

    def head(self, n: int) -> "ZeroTable":
        return ZeroTable(self.records[:n], self.source)


def dumps(table: ZeroTable) -> str:
    d = table.digits
    out = io.StringIO()
    out.write(f"# digits={d}\n# count={table.count}\n# source={table.source}\n")
    for rec in table:
        g = rec.gamma if rec.gamma_digits == d else fixed_point(str(rec.gamma), d)
        re_, im_ = (fixed_point(str(x), d) for x in rec.zeta_prime)
        out.write(f"{rec.index}\t{g:.{d}f}\t{re_:.{d}f}\t{im_:.{d}f}\n")
    return out.getvalue()


def export_zeros(table: ZeroTable, destination) -> None:
    Path(destination).write_text(dumps(table), encoding="utf-8")


_HEADER = re.compile(r"^#\s*(\w+)\s*=\s*(\S+)\s*$")
_DECIMAL = re.compile(r"^-?\d+\.(\d+)$")


def _parse_fixed(text, digits, lineno, what):
    m = _DECIMAL.match(text)
    if not m:
        raise MalformedInputError(f"line {lineno}: {what} {text!r} is not a fixed-point decimal")
    if len(m.group(1)) != digits:
        raise MalformedInputError(
            f"line {lineno}: {what} has {len(m.group(1))} fractional digits, header declares digits={digits}"
        )
    return Decimal(text)


def loads(text: str, recompute_derivatives: bool = False) -> ZeroTable:
    header = {}
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("#"):
            m = _HEADER.match(line)
            if not m:
                raise MalformedInputError(f"line {lineno}: malformed header {line!r}")
            if rows:
                raise MalformedInputError(f"line {lineno}: header after data rows")
            header[m.group(1)] = m.group(2)
            continue
        rows.append((lineno, line.rstrip("\n").split("\t")))
    if "digits" not in header:
        raise MalformedInputError("line 1: missing '# digits=<d>' header")
    try:
        digits = int(header["digits"])
    except ValueError:
        raise MalformedInputError(f"bad digits header {header['digits']!r}") from None
    source = header.get("source", "imported")
    if source not in SOURCES:
        raise MalformedInputError(f"bad source header {source!r}")
    if "count" in header and int(header["count"]) != len(rows):
        raise MalformedInputError(f"header count={header['count']} but file has {len(rows)} rows")

    parsed = []
    prev_gamma = None
    for expected, (lineno, cols) in enumerate(rows, 1):
        if len(cols) not in (2, 4):
            raise MalformedInputError(f"line {lineno}: expected 2 or 4 tab-separated columns, got {len(cols)}")
        try:
            index = int(cols[0])
        except ValueError:
            raise MalformedInputError(f"line {lineno}: bad index {cols[0]!r}") from None
        if index != expected:
            raise MalformedInputError(f"line {lineno}: index {index} out of sequence (expected {expected})")
        gamma = _parse_fixed(cols[1], digits, lineno, "gamma")
        if gamma <= 0 or (prev_gamma is not None and gamma <= prev_gamma):
            raise MalformedInputError(f"line {lineno}: gamma {cols[1]} is not increasing")
        prev_gamma = gamma
        if len(cols) == 4:
            zp = (_parse_fixed(cols[2], digits, lineno, "zeta_prime_re"),
                  _parse_fixed(cols[3], digits, lineno, "zeta_prime_im"))
        elif recompute_derivatives:
            zp = None
        else:
            raise MalformedInputError(f"line {lineno}: no zeta' columns; use recompute_derivatives")
        parsed.append((index, gamma, zp))

    if recompute_derivatives:
        from zetaindep.zerolab.compute import zeta_prime_at

        parsed = [(i, g, zeta_prime_at(g, digits)) for i, g, _ in parsed]
        source = "imported"
    records = [ZeroRecord(i, g, digits, zp) for i, g, zp in parsed]
    return ZeroTable(tuple(records), source)


def import_zeros(source, recompute_derivatives: bool = False) -> ZeroTable:
    return loads(Path(source).read_text(encoding="utf-8"), recompute_derivatives)


def make_table(records: Iterable[ZeroRecord], source: str = "computed") -> ZeroTable:
    return ZeroTable(tuple(records), source)
