"""Exact integer lattices L(K; S), Gram-Schmidt profiles and LLL reduction.

Everything here is exact: basis vectors are Python ints and Gram-Schmidt
data are kept as integer Gram determinants ``d_i`` (so that
``|b_i*|^2 = d_i / d_{i-1}``) or as :class:`fractions.Fraction`. The minimum of
the Gram-Schmidt profile is a true lower bound on the squared length of every
nonzero lattice vector, which is what the independence certificates rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from zetaindep.errors import DegenerateBasisError, MalformedInputError, PrecisionError

Basis = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ReductionParams:
    delta: Fraction = Fraction(3, 4)
    precision_guard: int = 10

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        if not Fraction(1, 4) < self.delta <= 1:
            raise ValueError(f"delta must lie in (1/4, 1], got {self.delta}")
        if self.precision_guard < 0:
            raise ValueError("precision_guard must be >= 0")


@dataclass(frozen=True)
class IntegerLattice:
    basis: Basis
    k: int
    truncated_gammas: tuple[int, ...] = ()

    @property
    def K(self) -> int:
        return 10 ** self.k

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis[0]) if self.basis else 0


@dataclass(frozen=True)
class GramSchmidtProfile:
    norms_sq: tuple[Fraction, ...]
    min_norm_sq: Fraction = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "min_norm_sq", min(self.norms_sq))


def _interval(x) -> tuple[Fraction, Fraction, int | None]:
    """(lo, hi, certified digits) for a gamma given as a zero record or an exact number."""
    if hasattr(x, "interval") and hasattr(x, "gamma_digits"):
        lo, hi = x.interval
        return Fraction(lo), Fraction(hi), x.gamma_digits
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction, Decimal, int or str")
    if isinstance(x, str):
        x = Decimal(x)
    v = Fraction(x)
    return v, v, None


def build_lattice(gammas: Sequence, k: int, guard: int = 0) -> IntegerLattice:
    """Generator basis of L(10**k; gammas).

    Vector i is the unit vector e_i with ``floor(10**k * gamma_i)`` appended.
    ``gammas`` may be zero records (certified intervals) or exact numbers.
    Certified gammas must carry more than ``k + guard`` digits and their
    intervals must determine the floor unambiguously.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    K = 10 ** k
    n = len(gammas)
    truncated = []
    for i, g in enumerate(gammas):
        lo, hi, digits = _interval(g)
        if digits is not None and digits <= k + guard:
            raise PrecisionError(
                f"gamma #{i + 1} is certified to {digits} digits; k={k} with guard {guard} needs more than {k + guard}"
            )
        flo, fhi = math.floor(K * lo), math.floor(K * hi)
        if flo != fhi:
            raise PrecisionError(
                f"gamma #{i + 1}: interval straddles a multiple of 10^-{k}; recompute with more digits"
            )
        truncated.append(flo)
    basis = tuple(tuple([1 if j == i else 0 for j in range(n)] + [truncated[i]]) for i in range(n))
    return IntegerLattice(basis, k, tuple(truncated))


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _gram_determinants(basis):
    """Integral Gram-Schmidt data: (d, lam) with d[0] = 1 and d[i] the i-th Gram determinant."""
    n = len(basis)
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]
    for k in range(n):
        for j in range(k + 1):
            u = _dot(basis[k], basis[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise DegenerateBasisError(f"basis vector {k + 1} is linearly dependent on the previous ones")
                d[k + 1] = u
    return d, lam


def _profile_from_d(d) -> GramSchmidtProfile:
    return GramSchmidtProfile(tuple(Fraction(d[i + 1], d[i]) for i in range(len(d) - 1)))


def gram_schmidt(lattice) -> GramSchmidtProfile:
    """Exact |b_i*|^2 for the basis in its given order."""
    basis = lattice.basis if isinstance(lattice, IntegerLattice) else lattice
    if not basis:
        raise ValueError("empty basis")
    d, _ = _gram_determinants(basis)
    return _profile_from_d(d)


def _lll(basis, delta: Fraction):
    """Integral LLL (all-integer variant); returns (reduced basis, Gram determinants)."""
    b = [list(v) for v in basis]
    n = len(b)
    if n == 0:
        raise ValueError("empty basis")
    p, q = delta.numerator, delta.denominator
    d = [1] + [0] * n  # d[i] for i = 0..n; vectors are 1-indexed in d
    lam = [[0] * n for _ in range(n)]

    def incorporate(k):
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise DegenerateBasisError(f"basis vector {k + 1} is linearly dependent")
                d[k + 1] = u

    def reduce(k, l):
        dl = d[l + 1]
        if 2 * abs(lam[k][l]) > dl:
            r = (2 * lam[k][l] + dl) // (2 * dl)
            bk, bl = b[k], b[l]
            for c in range(len(bk)):
                bk[c] -= r * bl[c]
            lam[k][l] -= r * dl
            lk, ll = lam[k], lam[l]
            for i in range(l):
                lk[i] -= r * ll[i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    incorporate(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            incorporate(k)
        reduce(k, k - 1)
        lm = lam[k][k - 1]
        # Lovasz: swap when |b_k*|^2 < (delta - mu^2) |b_{k-1}*|^2
        if q * d[k + 1] * d[k - 1] < p * d[k] * d[k] - q * lm * lm:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                reduce(k, l)
            k += 1
    return tuple(tuple(v) for v in b), d


def lll_reduce(lattice: IntegerLattice, params: ReductionParams | None = None) -> IntegerLattice:
    """LLL-reduced basis of the same lattice (size-reduced, Lovasz condition with ``params.delta``)."""
    params = params or ReductionParams()
    reduced, _ = _lll(lattice.basis, params.delta)
    return IntegerLattice(reduced, lattice.k, lattice.truncated_gammas)


def reduce_with_profile(lattice: IntegerLattice, params: ReductionParams | None = None):
    """``(reduced lattice, Gram-Schmidt profile of the reduced basis)`` in one pass."""
    params = params or ReductionParams()
    reduced, d = _lll(lattice.basis, params.delta)
    return IntegerLattice(reduced, lattice.k, lattice.truncated_gammas), _profile_from_d(d)


# --- reference checks (plain rational Gram-Schmidt, independent of the integral code) ---

def gso_fractions(basis):
    """Classical Gram-Schmidt over Fractions: returns (b_star, mu)."""
    n = len(basis)
    bstar = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms = []
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            mu[i][j] = _dot(basis[i], bstar[j]) / norms[j]
            v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(_dot(v, v))
    return bstar, mu


def is_size_reduced(basis) -> bool:
    _, mu = gso_fractions(basis)
    return all(abs(mu[i][j]) <= Fraction(1, 2) for i in range(len(basis)) for j in range(i))


def satisfies_lovasz(basis, delta) -> bool:
    bstar, mu = gso_fractions(basis)
    norms = [_dot(v, v) for v in bstar]
    delta = Fraction(delta)
    return all(norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1] for k in range(1, len(basis)))


def hermite_normal_form(basis) -> Basis:
    """Row-style Hermite normal form of an integer matrix with independent rows."""
    rows = [list(r) for r in basis]
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if rows[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[piv] = rows[piv], rows[r]
            done = True
            for i in range(r + 1, m):
                if rows[i][c]:
                    f = rows[i][c] // rows[r][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if any(rows[i][c] for i in range(r, m)):
            if rows[r][c] < 0:
                rows[r] = [-a for a in rows[r]]
            for i in range(r):
                f = rows[i][c] // rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
    return tuple(tuple(row) for row in rows)


# --- dump format ------------------------------------------------------------

def dump_lattice(lattice: IntegerLattice, delta, destination) -> None:
    delta = Fraction(delta)
    lines = [f"# dim={lattice.rank} k={lattice.k} delta={delta.numerator}/{delta.denominator}"]
    lines += [" ".join(str(x) for x in row) for row in lattice.basis]
    Path(destination).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_lattice(source) -> tuple[IntegerLattice, Fraction]:
    text = Path(source).read_text(encoding="utf-8").splitlines()
    if not text or not text[0].startswith("#"):
        raise MalformedInputError(f"{source}: missing '# dim=<n> k=<k> delta=<p/q>' header")
    fields = dict(part.split("=", 1) for part in text[0][1:].split())
    try:
        dim, k, delta = int(fields["dim"]), int(fields["k"]), Fraction(fields["delta"])
    except (KeyError, ValueError) as exc:
        raise MalformedInputError(f"{source}: bad header {text[0]!r}") from exc
    rows = tuple(tuple(int(x) for x in line.split()) for line in text[1:] if line.strip())
    if len(rows) != dim:
        raise MalformedInputError(f"{source}: header says dim={dim} but {len(rows)} rows follow")
    return IntegerLattice(rows, k), delta
