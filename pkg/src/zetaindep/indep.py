"""Independence thresholds and the lattice certificate for {N}-independence.

For ``Gamma'`` (``n`` zeros) inside ``Gamma ∩ [0, T]`` (the first ``m``
zeros), the certificate is the minimum of

* the weak-threshold candidate from the reduced lattice of ``Gamma'``, and
* one strong-threshold candidate per remaining zero ``gamma_t``, from the
  reduced lattice of ``Gamma' ∪ {gamma_t}``.

A candidate is the largest ``N`` whose threshold polynomial does not exceed
the minimum squared Gram-Schmidt norm of the reduced basis.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from zetaindep.errors import InvariantError, MalformedInputError
from zetaindep.lattice import (
    IntegerLattice,
    ReductionParams,
    build_lattice,
    dump_lattice,
    load_lattice,
    reduce_with_profile,
)

log = logging.getLogger(__name__)

WEAK = "weak"
STRONG = "strong"


def weak_threshold(n: int, N: int) -> int:
    """(n^2 + n) N^2 + (2n + 2) N + 2."""
    return (n * n + n) * N * N + (2 * n + 2) * N + 2


def strong_threshold(n: int, N: int) -> int:
    """(n^2 + n) N^2 + 2n N + 2."""
    return (n * n + n) * N * N + 2 * n * N + 2


def variable_threshold(Ns: Sequence[int]) -> int:
    """2 max(N) + 1 + (1 + sum N)^2 + sum N^2, for per-zero bounds N_gamma."""
    if not Ns:
        raise ValueError("Ns must be nonempty")
    if any(N < 0 for N in Ns):
        raise ValueError("all N must be >= 0")
    s = sum(Ns)
    return 2 * max(Ns) + 1 + (1 + s) ** 2 + sum(N * N for N in Ns)


_THRESHOLDS = {WEAK: weak_threshold, STRONG: strong_threshold}


def candidate_N(min_norm_sq, n: int, mode: str = WEAK) -> int:
    """Largest N >= 0 with threshold(n, N) <= min_norm_sq, or 0 if none."""
    if mode not in _THRESHOLDS:
        raise ValueError(f"mode must be 'weak' or 'strong', got {mode!r}")
    B = Fraction(min_norm_sq)
    if B <= 0:
        raise ValueError("min_norm_sq must be positive")
    thr = _THRESHOLDS[mode]
    if thr(n, 0) > B:
        return 0
    a = n * n + n
    b = 2 * n + 2 if mode == WEAK else 2 * n
    # a q N^2 + b q N + (2 q - p) <= 0
    p, q = B.numerator, B.denominator
    disc = (b * q) ** 2 - 4 * a * q * (2 * q - p)
    N = max(0, (-b * q + math.isqrt(disc)) // (2 * a * q))
    while N > 0 and thr(n, N) > B:
        N -= 1
    while thr(n, N + 1) <= B:
        N += 1
    return N


@dataclass
class IndependenceCertificate:
    k: int
    n: int
    m: int
    L: int
    epsilon: str
    ordering: str
    gamma_prime_indices: list[int]
    candidate_main: int
    candidates_t: dict[int, int]
    delta_main: Fraction
    delta_t: Fraction
    min_norm_sq_main: Fraction = None
    min_norm_sq_t: dict[int, Fraction] = field(default_factory=dict)

    @property
    def N_gamma(self) -> int:
        return min([self.candidate_main, *self.candidates_t.values()])

    @property
    def vacuous(self) -> bool:
        """True when some reduced lattice has a Gram-Schmidt minimum below 2 (no certificate)."""
        mins = [self.min_norm_sq_main, *self.min_norm_sq_t.values()]
        return any(v is not None and v < 2 for v in mins)

    def check(self) -> None:
        if len(self.candidates_t) != self.m - self.n:
            raise InvariantError(f"{len(self.candidates_t)} per-t candidates, expected {self.m - self.n}")
        if self.N_gamma < 0:
            raise InvariantError("negative N_gamma")

    def format(self) -> str:
        lines = [
            f"k={self.k}",
            f"n={self.n}",
            f"m={self.m}",
            f"L={self.L}",
            f"epsilon={self.epsilon}",
            f"ordering={self.ordering}",
            f"delta_main={self.delta_main}",
            f"delta_t={self.delta_t}",
            f"gamma_prime_indices={','.join(map(str, self.gamma_prime_indices))}",
            f"min_norm_sq_main={self.min_norm_sq_main}",
            f"candidate_main={self.candidate_main}",
            f"N_gamma={self.N_gamma}",
            f"certified={'no' if self.vacuous or self.N_gamma == 0 else 'yes'}",
            "# t\tcandidate\tmin_norm_sq",
        ]
        for t in sorted(self.candidates_t):
            lines.append(f"{t}\t{self.candidates_t[t]}\t{self.min_norm_sq_t[t]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "IndependenceCertificate":
        head = {}
        rows = {}
        mins = {}
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            if "=" in line and "\t" not in line:
                key, value = line.split("=", 1)
                head[key] = value
            else:
                t, cand, mn = line.split("\t")
                rows[int(t)] = int(cand)
                mins[int(t)] = Fraction(mn)
        try:
            cert = cls(
                k=int(head["k"]), n=int(head["n"]), m=int(head["m"]), L=int(head["L"]),
                epsilon=head["epsilon"], ordering=head["ordering"],
                gamma_prime_indices=[int(x) for x in head["gamma_prime_indices"].split(",") if x],
                candidate_main=int(head["candidate_main"]), candidates_t=rows,
                delta_main=Fraction(head["delta_main"]), delta_t=Fraction(head["delta_t"]),
                min_norm_sq_main=Fraction(head["min_norm_sq_main"]), min_norm_sq_t=mins,
            )
        except (KeyError, ValueError) as exc:
            raise MalformedInputError(f"malformed certificate: {exc}") from exc
        if int(head.get("N_gamma", cert.N_gamma)) != cert.N_gamma:
            raise MalformedInputError("N_gamma does not equal the minimum candidate")
        return cert


def main_candidate(gammas: Sequence, k: int, params: ReductionParams, guard: int = 0):
    """Weak-threshold candidate from the reduced lattice of ``gammas``: (N, min |b*|^2, reduced lattice)."""
    reduced, profile = reduce_with_profile(build_lattice(gammas, k, guard), params)
    return candidate_N(profile.min_norm_sq, len(gammas), WEAK), profile.min_norm_sq, reduced


def _extend_reduced(reduced: IntegerLattice, truncated_t: int) -> IntegerLattice:
    # a basis of L(K; S) padded with a zero coordinate plus the new generator spans L(K; S ∪ {t})
    rows = [row[:-1] + (0, row[-1]) for row in reduced.basis]
    n = reduced.rank
    rows.append(tuple([0] * n + [1, truncated_t]))
    return IntegerLattice(tuple(rows), reduced.k, reduced.truncated_gammas + (truncated_t,))


def _t_candidate(args):
    t, gammas, k, delta, guard, n, warm = args
    params = ReductionParams(delta, guard)
    if warm is not None:
        extra = build_lattice([gammas[-1]], k, guard).truncated_gammas[0]
        lat = _extend_reduced(warm, extra)
    else:
        lat = build_lattice(gammas, k, guard)
    _, profile = reduce_with_profile(lat, params)
    return t, candidate_N(profile.min_norm_sq, n, STRONG), profile.min_norm_sq


def certify(zeros, k: int, n: int, L: int, ordering: str = "cardinal", *,
            delta_main=Fraction(3, 4), delta_t=Fraction(3, 10), epsilon: str = "1e-6",
            guard: int = 10, parallelism: int = 1, resume_dir=None, warm_start: bool = False,
            progress: Callable | None = None) -> IndependenceCertificate:
    """Certificate that the chosen ``n`` zeros are {N}-independent among the first ``L`` zeros.

    ``T = gamma_{L+1} - epsilon``, so ``Gamma ∩ [0, T]`` is the first ``L``
    zeros (``m = L``). ``ordering`` is ``"cardinal"`` or ``"heaviness"``.
    With ``resume_dir`` each per-zero result is stored as it completes and
    reused on a later run with the same parameters.
    """
    from zetaindep.mertens import Kernel, heaviness_sort, height_at
    from zetaindep.zerolab.table import ZeroTable

    if n < 1:
        raise ValueError("n must be >= 1")
    if n > L:
        raise ValueError(f"n={n} exceeds L={L}")
    delta_main, delta_t = Fraction(delta_main), Fraction(delta_t)
    m = L
    if isinstance(zeros, ZeroTable):
        if zeros.count < L + 1:
            raise ValueError(f"need at least L+1={L + 1} zeros, table has {zeros.count}")
        lookup = zeros.record
        window = [r.index for r in zeros.head(L)]
    else:
        # exact synthetic values, indexed from 1
        values = list(zeros)
        if len(values) < L:
            raise ValueError(f"need at least L={L} values, got {len(values)}")
        lookup = lambda i: values[i - 1]  # noqa: E731
        window = list(range(1, L + 1))
    if ordering in ("heaviness", "heavy"):
        if not isinstance(zeros, ZeroTable):
            raise ValueError("heaviness ordering needs a zero table")
        ordering = "heaviness"
        T = height_at(zeros, L + 1, epsilon)
        order = heaviness_sort(zeros.head(L), Kernel("f0", T))
    elif ordering == "cardinal":
        order = window
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    prime_idx = order[:n]
    rest = order[n:]
    prime = [lookup(i) for i in prime_idx]

    state = _ResumeState(resume_dir, dict(k=k, n=n, L=L, ordering=ordering, epsilon=epsilon,
                                          delta_main=str(delta_main), delta_t=str(delta_t),
                                          gamma_prime=prime_idx, guard=guard))
    main = state.load_main()
    if main is None:
        cand_main, min_main, reduced_main = main_candidate(prime, k, ReductionParams(delta_main, guard), guard)
        state.save_main(cand_main, min_main, reduced_main, delta_main)
    else:
        cand_main, min_main, reduced_main = main
    log.info("main lattice: min |b*|^2 = %s, candidate %d", min_main, cand_main)

    done = state.load_t()
    todo = [t for t in rest if t not in done]
    warm = reduced_main if warm_start else None
    jobs = [(t, prime + [lookup(t)], k, delta_t, guard, n, warm) for t in todo]
    results = dict(done)
    if parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for t, cand, mn in pool.map(_t_candidate, jobs):
                results[t] = (cand, mn)
                state.save_t(t, cand, mn)
    else:
        for i, job in enumerate(jobs):
            t, cand, mn = _t_candidate(job)
            results[t] = (cand, mn)
            state.save_t(t, cand, mn)
            if progress is not None:
                progress(i + 1, len(jobs))

    cert = IndependenceCertificate(
        k=k, n=n, m=m, L=L, epsilon=epsilon, ordering=ordering, gamma_prime_indices=prime_idx,
        candidate_main=cand_main, candidates_t={t: results[t][0] for t in rest},
        delta_main=delta_main, delta_t=delta_t, min_norm_sq_main=min_main,
        min_norm_sq_t={t: results[t][1] for t in rest},
    )
    cert.check()
    return cert


class _ResumeState:
    """Per-run scratch directory: parameters, reduced main lattice and finished per-t results."""

    def __init__(self, directory, params: dict):
        self.dir = Path(directory) if directory else None
        if self.dir is None:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        pfile = self.dir / "params.json"
        text = json.dumps(params, sort_keys=True)
        if pfile.exists() and pfile.read_text() != text:
            raise MalformedInputError(f"{pfile}: resume state was written with different parameters")
        pfile.write_text(text)

    def load_main(self):
        if self.dir is None or not (self.dir / "main.txt").exists():
            return None
        cand, mn = (self.dir / "main.txt").read_text().split()
        lat, _ = load_lattice(self.dir / "main_reduced.lat")
        return int(cand), Fraction(mn), lat

    def save_main(self, cand, mn, lat, delta):
        if self.dir is None:
            return
        dump_lattice(lat, delta, self.dir / "main_reduced.lat")
        (self.dir / "main.txt").write_text(f"{cand} {mn}\n")

    def load_t(self) -> dict:
        if self.dir is None or not (self.dir / "t_results.tsv").exists():
            return {}
        out = {}
        for line in (self.dir / "t_results.tsv").read_text().splitlines():
            parts = line.split("\t")
            if len(parts) == 3:  # a torn final line from an interrupted write is ignored
                out[int(parts[0])] = (int(parts[1]), Fraction(parts[2]))
        return out

    def save_t(self, t, cand, mn):
        if self.dir is None:
            return
        with open(self.dir / "t_results.tsv", "a") as fh:
            fh.write(f"{t}\t{cand}\t{mn}\n")
