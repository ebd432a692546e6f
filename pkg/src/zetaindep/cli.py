"""Command-line front end: ``zetaindep <command> ...``.

Exit codes: 0 success, 2 precision failure, 3 malformed input,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import logging
import shutil
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from zetaindep import __version__
from zetaindep.errors import MalformedInputError, PrecisionError, ZetaIndepError

log = logging.getLogger("zetaindep")


# --- configuration ----------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    k: int = 40
    n: int = 13
    L: int = 13
    epsilon: str = "1e-6"
    delta_main: Fraction = Fraction(3, 4)
    delta_t: Fraction = Fraction(3, 10)
    kernel: str = "f0"
    ordering: str = "cardinal"
    zero_file: str = ""
    output_dir: str = "run"
    parallelism: int = 1
    guard: int = 10
    warm_start: bool = False

    def __post_init__(self):
        if self.ordering not in ("cardinal", "heaviness", "heavy"):
            raise MalformedInputError(f"ordering must be cardinal or heavy, got {self.ordering!r}")
        if self.kernel not in ("fejer", "f0"):
            raise MalformedInputError(f"kernel must be fejer or f0, got {self.kernel!r}")

    @classmethod
    def from_mapping(cls, values: dict) -> "RunConfig":
        fields = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in fields:
                raise MalformedInputError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(fields[key].type, key, raw)
        return cls(**kwargs)

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{f.name}={value}")
        return "\n".join(lines) + "\n"

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()


def _coerce(type_name, key, raw):
    if not isinstance(raw, str):
        return raw
    try:
        if type_name in ("int", int):
            return int(raw)
        if type_name in ("Fraction", Fraction):
            return Fraction(raw)
        if type_name in ("bool", bool):
            if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return raw.lower() in ("true", "1", "yes")
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"config key {key}: cannot parse {raw!r}") from exc
    return raw


def read_config(path) -> dict:
    """Flat ``key=value`` file; blank lines and ``#`` comments ignored."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MalformedInputError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


# --- pipeline ---------------------------------------------------------------

class _Stage:
    def __init__(self, name, timings):
        self.name = name
        self.timings = timings

    def __enter__(self):
        log.info("stage %s", self.name)
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.timings[self.name] = time.perf_counter() - self.start
        if isinstance(exc, ZetaIndepError) and not str(exc).startswith("["):
            exc.args = (f"[{self.name}] {exc}",)
        return False


def run_pipeline(config: RunConfig, resume: bool = False) -> dict:
    """Certify, then bound with the certified N_gamma; writes outputs under ``config.output_dir``.

    Returns a dict of output paths. Per-t lattice progress is kept in
    ``<output_dir>/state`` so an interrupted run can continue with ``resume``.
    """
    from zetaindep.indep import certify
    from zetaindep.mertens import Kernel, height_at, mertens_bound
    from zetaindep.zerolab import import_zeros

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    state = out / "state"
    if state.exists() and not resume:
        shutil.rmtree(state)
    timings = {}

    with _Stage("load", timings):
        if not config.zero_file:
            raise MalformedInputError("zero_file is not set")
        zeros = import_zeros(config.zero_file)
    with _Stage("certify", timings):
        cert = certify(zeros, config.k, config.n, config.L, config.ordering,
                       delta_main=config.delta_main, delta_t=config.delta_t, epsilon=config.epsilon,
                       guard=config.guard, parallelism=config.parallelism, resume_dir=state,
                       warm_start=config.warm_start)
        (out / "certificate.txt").write_text(cert.format(), encoding="utf-8")
    with _Stage("bound", timings):
        kernel = Kernel(config.kernel, height_at(zeros, config.L + 1, config.epsilon))
        if cert.N_gamma >= 1:
            text = mertens_bound(zeros, cert.gamma_prime_indices, config.n, cert.N_gamma, kernel).format()
        else:
            text = f"bound=0\ncertified=no\nn={config.n}\nN_gamma=0\nkernel={kernel.short_name}\n"
        (out / "bound.txt").write_text(text, encoding="utf-8")

    manifest = ["tool=zetaindep", f"version={__version__}", config.to_text().rstrip("\n"),
                f"config_sha256={config.digest}", f"zero_file_sha256={_sha256(config.zero_file)}"]
    for name in ("certificate.txt", "bound.txt"):
        manifest.append(f"{name}_sha256={_sha256(out / name)}")
    (out / "manifest.txt").write_text("\n".join(manifest) + "\n", encoding="utf-8")
    (out / "timings.txt").write_text("".join(f"{k}={v:.3f}\n" for k, v in timings.items()), encoding="utf-8")
    return {name: out / name for name in ("certificate.txt", "bound.txt", "manifest.txt", "timings.txt")}


# --- argument helpers -------------------------------------------------------

def _int_list(text: str) -> list[int]:
    """``2..20``, ``2,5,9`` or a mix such as ``2..5,10``."""
    out = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part.strip():
                out.append(int(part))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc
    return out


def _schedule(text: str) -> list[tuple[int, int]]:
    try:
        return [tuple(int(x) for x in item.split(":")) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad schedule {text!r}; expected n:T_index,...") from exc


def _n_gamma(text: str):
    return None if text in ("inf", "infinity") else int(text)


def _write(text: str, dest):
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _progress(label):
    def report(done, total):
        if done == total or done % max(1, total // 20) == 0:
            log.info("%s: %d/%d", label, done, total)
    return report


# --- commands ---------------------------------------------------------------

def cmd_zeros(args) -> int:
    from zetaindep.zerolab import compute_zeros, export_zeros, import_zeros, verify_zeros

    if args.action == "compute":
        table = compute_zeros(args.count, args.digits, guard=args.guard, parallelism=args.parallelism,
                              progress=_progress("zeros"))
        export_zeros(table, args.out)
        return 0
    if args.action == "verify":
        report = verify_zeros(import_zeros(args.input))
        sys.stdout.write(report.format())
        return 0 if report.passed else PrecisionError.exit_code
    table = import_zeros(args.input, recompute_derivatives=args.recompute_derivatives)
    if args.out:
        export_zeros(table, args.out)
    return 0


def cmd_certify(args) -> int:
    from zetaindep.indep import certify
    from zetaindep.zerolab import import_zeros

    cert = certify(import_zeros(args.zeros), args.k, args.n, args.L, args.order,
                   delta_main=args.delta_main, delta_t=args.delta_t, epsilon=args.epsilon, guard=args.guard,
                   parallelism=args.parallelism, resume_dir=args.resume, warm_start=args.warm_start,
                   progress=_progress("per-t lattices"))
    _write(cert.format(), args.out)
    return 0


def cmd_bound(args) -> int:
    from zetaindep.mertens import Kernel, heaviness_sort, height_at, mertens_bound, zeros_below
    from zetaindep.zerolab import import_zeros

    zeros = import_zeros(args.zeros)
    T = height_at(zeros, args.T_index, args.epsilon)
    kernel = Kernel(args.kernel, T)
    below = zeros_below(zeros, T)
    order = heaviness_sort(below, Kernel("f0", T)) if args.order == "heavy" else [r.index for r in below]
    report = mertens_bound(below, order, args.n, args.N_gamma, kernel)
    _write(report.format(with_terms=not args.summary), args.out)
    return 0


def cmd_curve(args) -> int:
    from zetaindep.mertens import CurveConfig, curve_csv, emit_bound_curve
    from zetaindep.zerolab import import_zeros

    config = CurveConfig(epsilon=args.epsilon, schedule=args.schedule or [], n_selected=args.n_selected,
                         sort_T_index=args.sort_T_index, T_indices=args.T_indices or [])
    if args.mode == "fig1" and not config.schedule:
        raise MalformedInputError("fig1 needs --schedule n:T_index,...")
    if args.mode == "fig2" and not config.T_indices:
        raise MalformedInputError("fig2 needs --T-indices")
    header, rows = emit_bound_curve(import_zeros(args.zeros), args.mode, args.kernels.split(","), config)
    _write(curve_csv(header, rows), args.out)
    return 0


def cmd_relations(args) -> int:
    from zetaindep import relations
    from zetaindep.zerolab import compute_zeros, import_zeros

    if args.action == "search":
        ns = list(range(args.min_n, args.max_n + 1))
        if args.zeros:
            zeros = import_zeros(args.zeros)
            results = [relations.smallest_combination(zeros, n) for n in ns]
        else:
            digits = args.digits
            for attempt in range(4):
                zeros = compute_zeros(args.max_n, digits)
                try:
                    results = [relations.smallest_combination(zeros, n) for n in ns]
                    break
                except PrecisionError as exc:
                    if attempt == 3:
                        raise
                    log.warning("%s; retrying at %d digits", exc, 2 * digits)
                    digits *= 2
        for r in results:
            if r.exact_zero:
                log.warning("n=%d: exact vanishing combination %s", r.n, r.encoding)
        _write(relations.table1_tsv(results), args.out)
        return 0
    zeros = import_zeros(args.zeros)
    rows = relations.m_independence_scan(zeros.head(max(args.n_list)), args.n_list, args.k,
                                         args.delta, args.guard)
    _write(relations.table2_tsv(rows), args.out)
    return 0


_PIPELINE_FLAGS = {"k": "k", "n": "n", "L": "L", "epsilon": "epsilon", "delta_main": "delta_main",
                   "delta_t": "delta_t", "kernel": "kernel", "order": "ordering", "zeros": "zero_file",
                   "out_dir": "output_dir", "parallelism": "parallelism", "guard": "guard",
                   "warm_start": "warm_start"}


def cmd_pipeline(args) -> int:
    values = read_config(args.config) if args.config else {}
    for flag, key in _PIPELINE_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            values[key] = value
    paths = run_pipeline(RunConfig.from_mapping(values), resume=args.resume)
    for p in paths.values():
        print(p)
    return 0


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zetaindep", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zeros", help="compute, verify or import zero tables")
    zs = z.add_subparsers(dest="action", required=True)
    zc = zs.add_parser("compute")
    zc.add_argument("--count", type=int, required=True)
    zc.add_argument("--digits", type=int, required=True)
    zc.add_argument("--out", required=True)
    zc.add_argument("--guard", type=int, default=10)
    zc.add_argument("--parallelism", type=int, default=1)
    zv = zs.add_parser("verify")
    zv.add_argument("--in", dest="input", required=True)
    zi = zs.add_parser("import")
    zi.add_argument("--in", dest="input", required=True)
    zi.add_argument("--recompute-derivatives", action="store_true")
    zi.add_argument("--out")
    z.set_defaults(func=cmd_zeros)

    c = sub.add_parser("certify", help="lattice certificate of {N}-independence")
    c.add_argument("--zeros", required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--L", type=int, required=True)
    c.add_argument("--order", choices=["heavy", "cardinal"], default="heavy")
    c.add_argument("--delta-main", type=Fraction, default=Fraction(3, 4))
    c.add_argument("--delta-t", type=Fraction, default=Fraction(3, 10))
    c.add_argument("--epsilon", default="1e-6")
    c.add_argument("--guard", type=int, default=10)
    c.add_argument("--parallelism", type=int, default=1)
    c.add_argument("--resume", metavar="DIR")
    c.add_argument("--warm-start", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_certify)

    b = sub.add_parser("bound", help="Mertens bound from a set of zeros")
    b.add_argument("--zeros", required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--N-gamma", dest="N_gamma", type=_n_gamma, required=True, help="integer or 'inf'")
    b.add_argument("--T-index", dest="T_index", type=int, required=True, help="T = gamma_{T-index} - epsilon")
    b.add_argument("--kernel", choices=["fejer", "f0"], default="f0")
    b.add_argument("--order", choices=["heavy", "cardinal"], default="heavy")
    b.add_argument("--epsilon", default="1e-6")
    b.add_argument("--summary", action="store_true", help="omit the per-zero table")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bound)

    cv = sub.add_parser("curve", help="bound curves (fig1: vary n with re-sorting, fig2: vary T)")
    cv.add_argument("--zeros", required=True)
    cv.add_argument("--mode", choices=["fig1", "fig2"], required=True)
    cv.add_argument("--out", required=True)
    cv.add_argument("--kernels", default="fejer,f0")
    cv.add_argument("--epsilon", default="1e-6")
    cv.add_argument("--schedule", type=_schedule, help="fig1: n:T_index pairs, comma separated")
    cv.add_argument("--n-selected", type=int, default=300)
    cv.add_argument("--sort-T-index", dest="sort_T_index", type=int, default=2001)
    cv.add_argument("--T-indices", dest="T_indices", type=_int_list)
    cv.set_defaults(func=cmd_curve)

    r = sub.add_parser("relations", help="smallest +-1 combinations and m-independence scans")
    rs = r.add_subparsers(dest="action", required=True)
    rse = rs.add_parser("search")
    rse.add_argument("--zeros")
    rse.add_argument("--digits", type=int, default=30, help="digits when computing zeros (no --zeros)")
    rse.add_argument("--min-n", type=int, default=1)
    rse.add_argument("--max-n", type=int, required=True)
    rse.add_argument("--out")
    rm = rs.add_parser("m-indep")
    rm.add_argument("--zeros", required=True)
    rm.add_argument("--k", type=int, required=True)
    rm.add_argument("--n-list", type=_int_list, required=True)
    rm.add_argument("--delta", type=Fraction, default=Fraction(3, 4))
    rm.add_argument("--guard", type=int, default=0)
    rm.add_argument("--out")
    r.set_defaults(func=cmd_relations)

    pl = sub.add_parser("pipeline", help="certify then bound, with a run manifest")
    pl.add_argument("--config")
    pl.add_argument("--resume", action="store_true")
    for flag, kind in [("k", int), ("n", int), ("L", int), ("epsilon", str), ("delta-main", Fraction),
                       ("delta-t", Fraction), ("kernel", str), ("order", str), ("zeros", str),
                       ("out-dir", str), ("parallelism", int), ("guard", int)]:
        pl.add_argument(f"--{flag}", type=kind)
    pl.add_argument("--warm-start", action="store_const", const=True)
    pl.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ZetaIndepError as exc:
        log.error("%s", exc)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return MalformedInputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
