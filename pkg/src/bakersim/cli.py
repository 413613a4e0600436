"""Command-line runner: verification suites and CSV/JSON experiment output.

Exit codes: 0 pass, 1 invariant failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import baker, bases, classical, coarse, identities
from .bitstring import BitString, to_nat
from .linalg import structural_tol, unitarity_defect

SCHEMA_LINE = "# bakersim v1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
SWEEP_FIELDS = ["N", "n", "l", "r", "k", "y", "fidelity", "bound_ratio", "atypical_flag"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    qubits: list = field(default_factory=lambda: [8])
    split: Optional[int] = None
    position_bits: int = 2
    coarse_bits: int = 4
    iterations: list = field(default_factory=lambda: [1])
    k_max: int = 3
    y: str = "alt"
    seed: int = 0
    tol: float = 1e-10
    out: Optional[str] = None
    fmt: str = "csv"
    jobs: int = 1
    random_companion: bool = True
    gaps: list = field(default_factory=lambda: [4, 6, 8, 10])
    ignored: list = field(default_factory=lambda: [4, 6, 8, 10])
    inject_fault: Optional[str] = None

    @property
    def rng(self):
        return np.random.default_rng(self.seed)


def resolve_y(mode, length, rng=None):
    """Bit string for ``--y``: a literal, ``alt`` (0101...) or ``random``."""
    if mode == "alt":
        return BitString(tuple(i % 2 for i in range(length)))
    if mode == "random":
        rng = rng if rng is not None else np.random.default_rng(0)
        return BitString(tuple(int(b) for b in rng.integers(0, 2, length)))
    try:
        y = BitString.parse(mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if len(y) != length:
        raise UsageError(f"--y {mode} has {len(y)} bits, expected {length}")
    return y


def _fmt(x):
    return repr(float(x))


# ---------------------------------------------------------------- output


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit(path, text):
    try:
        handle, close = _open_out(path)
        try:
            handle.write(text)
        finally:
            if close:
                handle.close()
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _csv_text(header, rows, trailer=()):
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    for line in trailer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


# ---------------------------------------------------------------- verify


@dataclass
class SuiteResult:
    name: str
    passed: bool
    measured: float
    limit: float
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} measured={self.measured:.3e}  limit={self.limit:.3e}  {self.detail}"


def _faulty_basis(fault):
    if fault is None:
        return bases.basis_matrix
    if fault != "momentum-phase":
        raise UsageError(f"unknown fault {fault!r}")

    def basis_matrix(qubits, split):
        v = bases.basis_matrix(qubits, split)
        if split == qubits:
            v = v.copy()
            v[:, 1] *= np.exp(0.1j)
        return v

    return basis_matrix


def _suite_bitstring(cfg):
    rng = cfg.rng
    worst = 0
    for _ in range(200):
        a = BitString(tuple(rng.integers(0, 2, rng.integers(0, 12))))
        b = BitString(tuple(rng.integers(0, 2, rng.integers(0, 12))))
        worst = max(worst, abs(to_nat(a + b) - (to_nat(a) * 2 ** len(b) + to_nat(b))))
    return SuiteResult("bitstring concat/value", worst == 0, worst, 0)


def _suite_conjugacy(cfg):
    rng = cfg.rng
    mismatches = 0
    for _ in range(1000):
        s = classical.SymbolicState(
            BitString(tuple(rng.integers(0, 2, rng.integers(0, 16)))),
            BitString(tuple(rng.integers(0, 2, rng.integers(1, 16)))),
        )
        if classical.is_branch_boundary(s):
            continue
        mismatches += classical.to_point(classical.shift(s)) != classical.classical_step(classical.to_point(s))
    return SuiteResult("classical conjugacy", mismatches == 0, mismatches, 0)


def _suite_unitarity(cfg, basis_matrix):
    N = cfg.qubits[0]
    tol = structural_tol(N)
    worst = 0.0
    for n in range(N + 1):
        worst = max(worst, unitarity_defect(basis_matrix(N, n)))
    for n in range(N):
        b = basis_matrix(N, n + 1) @ basis_matrix(N, n).conj().T
        worst = max(worst, unitarity_defect(b))
    return SuiteResult("unitarity V_n and B", worst < tol, worst, tol)


def _suite_closed_form(cfg, basis_matrix):
    N = cfg.qubits[0]
    worst = 0.0
    for n in range(N):
        direct = basis_matrix(N, n).conj().T @ basis_matrix(N, n + 1)
        worst = max(worst, float(np.abs(baker.c_first_table(N, n) - direct).max()))
    return SuiteResult("closed-form equality", worst < cfg.tol, worst, cfg.tol, f"N={N}, all n")


def _suite_delta_law(cfg):
    N = max(cfg.qubits[0], 7)
    N = min(N, 9)
    y = BitString.parse("0011")
    spec = coarse.CoarseGrainSpec.from_sizes(N, 2, y, k_max=2)
    ks = [0, 1, 2]
    got = coarse.delta_law_matrix(spec, ks)
    expected = np.array([[coarse.window_overlap(y, a - b) for b in ks] for a in ks])
    worst = float(np.abs(got - expected).max())
    tol = structural_tol(N)
    return SuiteResult("delta law", worst < tol, worst, tol, f"N={N}, y={y}")


def _suite_decomposition(cfg):
    N = min(max(cfg.qubits[0], 7), 10)
    spec = coarse.CoarseGrainSpec.from_sizes(N, 2, "0110", k=1, k_max=2)
    dev = abs(coarse.fidelity(spec) - coarse.fidelity_dense(spec))
    tol = structural_tol(N)
    return SuiteResult("fidelity decomposition", dev < tol, dev, tol, f"N={N}")


def _suite_identities(cfg):
    rows = identity_table()
    failed = [r for r in rows if not r.passed]
    return SuiteResult("identities", not failed, len(failed), 0, ", ".join(r.name for r in failed))


def verify(cfg: RunConfig):
    if cfg.qubits[0] > 10:
        raise UsageError("verify runs dense checks; need N <= 10")
    if cfg.qubits[0] < 2:
        raise UsageError("verify needs N >= 2")
    basis_matrix = _faulty_basis(cfg.inject_fault)
    suites: list[Callable[[], SuiteResult]] = [
        lambda: _suite_bitstring(cfg),
        lambda: _suite_conjugacy(cfg),
        lambda: _suite_unitarity(cfg, basis_matrix),
        lambda: _suite_closed_form(cfg, basis_matrix),
        lambda: _suite_delta_law(cfg),
        lambda: _suite_decomposition(cfg),
        lambda: _suite_identities(cfg),
    ]
    results = [run() for run in suites]
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    summary = {
        "N": cfg.qubits[0],
        "passed": not failed,
        "first_failure": failed[0].name if failed else None,
        "suites": [r.__dict__ for r in results],
    }
    if cfg.out:
        _emit(cfg.out, json.dumps(summary, indent=2) + "\n")
    if failed:
        print(f"first failing invariant: {failed[0].name}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------- dump-map


def dump_map(cfg: RunConfig):
    N = cfg.qubits[0]
    n = N - 2 if cfg.split is None else cfg.split
    if not 0 <= n <= N - 1 or N < 2:
        raise UsageError(f"need N >= 2 and 0 <= n <= N-1, got N={N}, n={n}")
    if N > 8:
        raise UsageError("dump-map pairs the closed form with the direct table; need N <= 8")
    closed = baker.c_first_table(N, n)
    direct = baker.direct_table(N, n)
    max_dev = float(np.abs(closed - direct).max())
    rows = []
    for j0, j1 in itertools.product(range(1 << N), repeat=2):
        c, d = closed[j1, j0], direct[j1, j0]
        rows.append([
            str(BitString.from_int(j0, N)), str(BitString.from_int(j1, N)),
            _fmt(c.real), _fmt(c.imag), _fmt(d.real), _fmt(d.imag),
        ])
    if cfg.fmt == "json":
        _emit(cfg.out, json.dumps({"N": N, "n": n, "max_dev": max_dev, "rows": rows}) + "\n")
    else:
        header = ["xi0", "xi1", "re", "im", "re_direct", "im_direct"]
        _emit(cfg.out, _csv_text(header, rows, [f"N={N} n={n} max_dev={max_dev!r}"]))
    if cfg.out not in (None, "-"):
        print(f"N={N} n={n} rows={len(rows)} max_dev={max_dev:.3e}")
    return EXIT_OK if max_dev < cfg.tol else EXIT_FAIL


# ---------------------------------------------------------------- fidelity-sweep


def _sweep_point(spec):
    w = coarse.per_state_fidelities(spec)
    rec = coarse.run_point(spec)
    below = int(np.count_nonzero(w < coarse.TYPICAL_THRESHOLD))
    return rec, {"N": spec.qubits, "k": spec.k, "y": str(spec.y), "states": len(w), "below": below}


def sweep_specs(cfg: RunConfig):
    """Grid points in output order: y values, then N, then k."""
    ys = [resolve_y(cfg.y, cfg.coarse_bits, cfg.rng)]
    if cfg.random_companion and cfg.y != "random":
        ys.append(resolve_y("random", cfg.coarse_bits, cfg.rng))
    specs = []
    for y in ys:
        for N in cfg.qubits:
            for k in cfg.iterations:
                r = N - cfg.coarse_bits
                if k >= r:
                    raise UsageError(f"infeasible grid point N={N}, k={k}: need k < r = {r}")
                split = cfg.split if (cfg.split is not None and len(cfg.qubits) == 1) else N - cfg.position_bits
                try:
                    specs.append(coarse.CoarseGrainSpec(N, split, y, k, cfg.k_max))
                except ValueError as exc:
                    raise UsageError(str(exc)) from exc
                if N > coarse.DENSE_LIMIT:
                    raise UsageError(f"fidelity sweep limited to N <= {coarse.DENSE_LIMIT}")
    return specs


def fidelity_sweep(cfg: RunConfig):
    specs = sweep_specs(cfg)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_sweep_point, specs))
    else:
        results = [_sweep_point(s) for s in specs]
    records = [r for r, _ in results]
    if cfg.fmt == "json":
        small = min(cfg.qubits)
        dspec = coarse.CoarseGrainSpec(small, small - cfg.position_bits, specs[0].y, 0, cfg.k_max)
        ks = list(range(min(cfg.k_max, dspec.r - 1) + 1))
        summary = {
            "records": [r.as_dict() for r in records],
            "delta_law": {
                "N": small,
                "y": str(dspec.y),
                "k": ks,
                "matrix": coarse.delta_law_matrix(dspec, ks).tolist() if small <= 10 else None,
                "expected": [[coarse.window_overlap(dspec.y, a - b) for b in ks] for a in ks],
            },
            "census": [c for _, c in results],
        }
        _emit(cfg.out, json.dumps(summary, indent=2) + "\n")
    else:
        rows = [[getattr(r, f) if not isinstance(getattr(r, f), float) else _fmt(getattr(r, f))
                 for f in SWEEP_FIELDS] for r in records]
        _emit(cfg.out, _csv_text(SWEEP_FIELDS, rows))
    return EXIT_OK


# ---------------------------------------------------------------- atypical


def atypical(cfg: RunConfig):
    limit = coarse.catalan_limit()
    rng = cfg.rng
    rows = []
    if len(cfg.gaps) != len(cfg.ignored):
        raise UsageError("--gap and --ignored must have the same number of values")
    for gap, r in zip(cfg.gaps, cfg.ignored):
        if gap < 1 or r < 2:
            raise UsageError(f"need n - r >= 1 and r >= 2, got n-r={gap}, r={r}")
        n = r + gap
        N = n + cfg.position_bits
        if N > 63:
            raise UsageError("labels are limited to 63 bits")
        y = resolve_y(cfg.y, N - r, rng)
        value = coarse.atypical_fidelity(n, r, y)
        rows.append([gap, r, n, N, str(y), _fmt(value), _fmt(limit), _fmt(abs(value - limit))])
    header = ["n_minus_r", "r", "n", "N", "y", "value", "limit", "distance"]
    if cfg.fmt == "json":
        _emit(cfg.out, json.dumps({"limit": limit, "rows": [dict(zip(header, r)) for r in rows]}, indent=2) + "\n")
    else:
        _emit(cfg.out, _csv_text(header, rows))
    return EXIT_OK


# ---------------------------------------------------------------- identities


@dataclass
class IdentityRow:
    name: str
    passed: bool
    measured: float
    limit: float


def identity_table(seed=0):
    rng = np.random.default_rng(seed)
    rows = []

    mism = sum(
        identities.q_pair_sum_closed(L, s) != identities.q_pair_sum_bruteforce(L, s)
        for L in range(1, 13) for s in range(1, (2 << L))
    )
    rows.append(IdentityRow("counting Q(s)+Q(1-s), L<=12", mism == 0, mism, 0))

    worst = 0.0
    for _ in range(1000):
        x = rng.uniform(0, math.pi)
        if abs(math.sin(x)) < 1e-8:
            continue
        lhs, rhs = identities.cos_product_check(x, int(rng.integers(1, 21)))
        worst = max(worst, abs(lhs - rhs))
    rows.append(IdentityRow("cosine product, 1e3 points", worst < 1e-12, worst, 1e-12))

    dev = abs(identities.odd_inverse_square_partial(10) - math.pi ** 2 / 8)
    rows.append(IdentityRow("odd inverse squares, L=10", dev < 2.0 ** -10, dev, 2.0 ** -10))

    ratio = max(identities.odd_harmonic_ratio(L) / (L / 2 ** L) for L in range(2, 21))
    rows.append(IdentityRow("odd harmonic / (L/2^L)", ratio <= 1.0, ratio, 1.0))

    dev = abs(identities.catalan_partial(2000) - 0.915965)
    rows.append(IdentityRow("Catalan partial, T=2000", dev < 1e-6, dev, 1e-6))

    ratios = [(1 - identities.fidelity_lower_bound_sum(L)) * 2 ** L / L for L in range(4, 15)]
    spread = max(ratios)
    rows.append(IdentityRow("lower-bound (1-F)2^L/L", spread < 1.0 and min(ratios) > 0, spread, 1.0))
    return rows


def identities_cmd(cfg: RunConfig):
    rows = identity_table(cfg.seed)
    for r in rows:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<32} measured={r.measured:.3e}  limit={r.limit:.3e}")
    if cfg.out:
        _emit(cfg.out, json.dumps([r.__dict__ for r in rows], indent=2) + "\n")
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


# ---------------------------------------------------------------- parsing


COMMANDS = {
    "verify": verify,
    "dump-map": dump_map,
    "fidelity-sweep": fidelity_sweep,
    "atypical": atypical,
    "identities": identities_cmd,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="bakersim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--y", default="alt", help="bit literal, 'alt' or 'random'")
    common.add_argument("--kmax", dest="k_max", type=int, default=3)
    common.add_argument("--coarse-bits", type=int, default=4, help="l = |y|")
    common.add_argument("--position-bits", type=int, default=2, help="m = N - n")
    common.add_argument("--split", type=int, default=None, help="n (default N-2)")

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--qubits", type=int, nargs=1, default=[6])
    p.add_argument("--inject-fault", choices=["momentum-phase"], default=None, help=argparse.SUPPRESS)

    p = sub.add_parser("dump-map", parents=[common], help="closed-form and direct matrix elements")
    p.add_argument("--qubits", type=int, nargs=1, default=[8])

    p = sub.add_parser("fidelity-sweep", parents=[common], help="coarse-grained fidelity grid")
    p.add_argument("--qubits", type=int, nargs="+", default=[8])
    p.add_argument("--iterations", type=int, nargs="+", default=[1])
    p.add_argument("--no-random-y", dest="random_companion", action="store_false",
                   help="skip the companion rows with a seeded random y")

    p = sub.add_parser("atypical", parents=[common], help="all-zeros state fidelity from the closed form")
    p.add_argument("--gap", dest="gaps", type=int, nargs="+", default=[4, 6, 8, 10], help="values of n - r")
    p.add_argument("--ignored", type=int, nargs="+", default=[4, 6, 8, 10], help="values of r")

    p = sub.add_parser("identities", parents=[common], help="numeric identity checks")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    if cfg.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"bakersim: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
