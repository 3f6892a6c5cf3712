"""Command-line front end: analyze states, sweep random families, and run
the verification suites.  All output is machine-readable; exit codes are
0 = success, 1 = verification failure, 2 = usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import z2
from .inner_products import (
    ALL_KINDS,
    InnerProductKind,
    direct_inner_product,
    real_dot,
    table_inner_product,
    table_kind_as_labels,
)
from .lie_action import triple_columns
from .orbit_matrix import (
    DEFAULT_TOL,
    build_matrix,
    dump_csv,
    exact_nullspace,
    float_nullspace,
    min_orbit_bound,
    rank_exact,
    rank_float,
)
from .states import (
    MultiIndex,
    PureState,
    ZeroStateError,
    load_state,
    make_basis,
    make_cat,
    make_singlet_product,
    make_singlet_product_plus_zero,
    sample_haar_state,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2

FLOAT_CAPACITY_N = 14


class SpecParseError(ValueError):
    pass


_SPEC_PATTERNS = [
    (re.compile(r"^singlet\*(\d+)\+0$"), lambda m: make_singlet_product_plus_zero(int(m.group(1)))),
    (re.compile(r"^singlet\*(\d+)$"), lambda m: make_singlet_product(int(m.group(1)))),
    (re.compile(r"^cat:(\d+)$"), lambda m: make_cat(int(m.group(1)))),
    (re.compile(r"^basis:([01]+)$"), lambda m: make_basis(MultiIndex(tuple(int(b) for b in m.group(1))))),
    (re.compile(r"^random:(\d+):(\d+)$"), lambda m: sample_haar_state(int(m.group(1)), int(m.group(2)))),
    (re.compile(r"^file:(.+)$"), lambda m: load_state(m.group(1))),
]


def parse_state_spec(spec: str) -> PureState:
    """Parse a state spec string into a state.

    Grammar: singlet*<k> | singlet*<k>+0 | cat:<n> | basis:<bits> |
    random:<n>:<seed> | file:<path>.
    """
    for pattern, builder in _SPEC_PATTERNS:
        match = pattern.match(spec)
        if match:
            try:
                return builder(match)
            except (ValueError, OSError) as exc:
                raise SpecParseError(f"bad state spec {spec!r}: {exc}") from exc
    head = spec.split(":")[0].split("*")[0]
    raise SpecParseError(
        f"unrecognized state spec {spec!r} (family {head!r} at position 0); "
        "expected singlet*<k>, singlet*<k>+0, cat:<n>, basis:<bits>, "
        "random:<n>:<seed>, or file:<path>"
    )


def _format_value(value):
    if isinstance(value, bool) or value is None or isinstance(value, int):
        return json.dumps(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = ", ".join(f"{json.dumps(k)}: {_format_value(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)}")


def dumps(value) -> str:
    """JSON with floats printed at 17 significant digits."""
    return _format_value(value)


def default_tolerance() -> float:
    env = os.environ.get("ORBITSCOPE_TOL")
    return float(env) if env else DEFAULT_TOL


@dataclass
class AnalysisReport:
    n: int
    orbit_dimension: int
    rank: int
    matrix_shape: tuple[int, int]
    min_bound: int
    achieves_min: bool
    isotropy_dimension: int
    isotropy_basis: list
    rank_path: str
    tolerance: float | None

    def to_dict(self) -> dict:
        assert self.orbit_dimension == self.rank - 1
        assert self.achieves_min == (self.orbit_dimension == self.min_bound)
        assert self.isotropy_dimension == 3 * self.n + 1 - self.rank
        return {
            "n": self.n,
            "orbit_dimension": self.orbit_dimension,
            "rank": self.rank,
            "matrix_shape": list(self.matrix_shape),
            "min_bound": self.min_bound,
            "achieves_min": self.achieves_min,
            "isotropy_dimension": self.isotropy_dimension,
            "isotropy_basis": self.isotropy_basis,
            "rank_path": self.rank_path,
            "tolerance": self.tolerance,
        }


def analyze_state(
    psi: PureState,
    tol: float,
    force_exact: bool = False,
    dump_matrix: str | None = None,
    include_basis: bool = True,
) -> AnalysisReport:
    matrix = build_matrix(psi)
    if force_exact and not matrix.exact:
        raise ValueError("--exact requires a state with exact amplitudes")
    if matrix.exact:
        rank = rank_exact(matrix)
        kernel = exact_nullspace(matrix) if include_basis else None
        rank_path = "exact"
    else:
        rank = rank_float(matrix, tol)
        kernel = float_nullspace(matrix, tol) if include_basis else None
        rank_path = "float"
    if dump_matrix:
        dump_csv(matrix, dump_matrix)
    basis_out = []
    if kernel is not None:
        for vec in kernel:
            floats = [float(v) for v in vec]
            coords = [floats[3 * k : 3 * k + 3] for k in range(psi.n)]
            basis_out.append({"coords": coords, "theta": floats[3 * psi.n]})
    bound = min_orbit_bound(psi.n)
    return AnalysisReport(
        n=psi.n,
        orbit_dimension=rank - 1,
        rank=rank,
        matrix_shape=matrix.shape,
        min_bound=bound,
        achieves_min=(rank - 1 == bound),
        isotropy_dimension=3 * psi.n + 1 - rank,
        isotropy_basis=basis_out,
        rank_path=rank_path,
        tolerance=None if rank_path == "exact" else tol,
    )


def cmd_analyze(args) -> int:
    try:
        psi = parse_state_spec(args.state)
        report = analyze_state(
            psi, args.tol, force_exact=args.exact, dump_matrix=args.dump_matrix
        )
    except (SpecParseError, ZeroStateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(dumps(report.to_dict()))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.family != "random":
        print(f"error: unknown family {args.family!r}", file=sys.stderr)
        return EXIT_USAGE
    if args.n < 1 or args.samples < 1:
        print("error: need n >= 1 and samples >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.n > FLOAT_CAPACITY_N:
        print(f"error: n={args.n} exceeds capacity {FLOAT_CAPACITY_N}", file=sys.stderr)
        return EXIT_USAGE
    bound = min_orbit_bound(args.n)
    dims = []
    for i in range(args.samples):
        seed = args.seed ^ i
        psi = sample_haar_state(args.n, seed)
        report = analyze_state(psi, args.tol, include_basis=False)
        dims.append(report.orbit_dimension)
        print(
            dumps(
                {
                    "sample": i,
                    "seed": seed,
                    "n": args.n,
                    "orbit_dimension": report.orbit_dimension,
                    "rank": report.rank,
                    "min_bound": bound,
                    "achieves_min": report.achieves_min,
                }
            )
        )
    histogram = {str(d): dims.count(d) for d in sorted(set(dims))}
    violations = sum(1 for d in dims if d < bound)
    print(
        dumps(
            {
                "aggregate": {
                    "min": min(dims),
                    "max": max(dims),
                    "histogram": histogram,
                    "bound_violations": violations,
                }
            }
        )
    )
    return EXIT_OK if violations == 0 else EXIT_VERIFY_FAIL


def _verify_theorem(n_max: int, tol: float):
    """Exact minimum-orbit checks for the singlet families, plus cat states."""
    for n in range(2, n_max + 1, 2):
        psi = make_singlet_product(n // 2)
        dim = rank_exact(build_matrix(psi)) - 1
        yield f"singlet^{n // 2} (n={n}) orbit dim {dim} == {3 * n // 2}", dim == 3 * n // 2
    for n in range(3, n_max + 1, 2):
        psi = make_singlet_product_plus_zero((n - 1) // 2)
        dim = rank_exact(build_matrix(psi)) - 1
        yield f"singlet^{(n - 1) // 2}+|0> (n={n}) orbit dim {dim} == {(3 * n + 1) // 2}", dim == (3 * n + 1) // 2
    for n in range(3, min(n_max, 8) + 1):
        dim = rank_exact(build_matrix(make_cat(n))) - 1
        yield f"cat:{n} orbit dim {dim} > bound {min_orbit_bound(n)}", dim > min_orbit_bound(n)


def _verify_table1(n_max: int, tol: float):
    """Closed forms against direct column inner products on random states."""
    for n in range(1, min(n_max, 5) + 1):
        worst = 0.0
        for sample in range(50):
            psi = sample_haar_state(n, seed=7000 + 100 * n + sample)
            scale = psi.norm() ** 2
            for tag in ALL_KINDS:
                for k in range(1, n + 1):
                    j_range = [None] if tag in ("A", "B", "C") else range(1, n + 1)
                    for j in j_range:
                        kind = InnerProductKind(tag=tag, k=k, j=j)
                        expected = direct_inner_product(psi, *table_kind_as_labels(kind))
                        got = table_inner_product(psi, kind)
                        worst = max(worst, abs(got - expected) / scale)
        yield f"table-vs-direct n={n}, 50 states, worst rel err {worst:.2e}", worst <= 1e-12


def _verify_triples(n_max: int, tol: float):
    for n in range(1, n_max + 1):
        worst = 0.0
        for sample in range(50):
            psi = sample_haar_state(n, seed=9000 + 100 * n + sample)
            scale = psi.norm() ** 2
            for k in range(1, n + 1):
                va, vb, vc = triple_columns(psi, k)
                for u, v in ((va, vb), (va, vc), (vb, vc)):
                    worst = max(worst, abs(real_dot(u, v)) / scale)
        yield f"triple orthogonality n={n}, worst |dot| {worst:.2e}", worst <= 1e-12


def engineered_sign_instance(rng: np.random.Generator, m: int):
    """A coefficient vector with a forced zero sign-sum, plus nothing else
    guaranteed: xi_m = sum eps_i xi_i makes the all-(eps)-signs row vanish."""
    values = [Fraction(int(v)) for v in rng.integers(1, 50, size=m - 1)]
    eps = rng.choice([-1, 1], size=m - 1)
    last = sum(int(e) * v for e, v in zip(eps, values))
    if last == 0:
        values[0] += 1
        last = sum(int(e) * v for e, v in zip(eps, values))
    return values + [last]


def _verify_lemma(n_max: int, tol: float):
    rng = np.random.default_rng(2026)
    count, even_ok, parity_ok = 0, True, True
    for _ in range(500):
        m = int(rng.integers(2, 9))
        xi = engineered_sign_instance(rng, m)
        witness = z2.find_parity_set(xi)
        count += 1
        even_ok &= len(witness.parity_set) % 2 == 0
        rows = z2.zero_rows(xi)
        parities = {
            sum(r[k - 1] for k in witness.parity_set) % 2 for r in rows
        }
        parity_ok &= parities == {witness.parity}
    yield f"sign-kernel lemma: {count}/500 witnesses found", count == 500
    yield "all parity sets even", even_ok
    yield "constant parity over zero rows", parity_ok


_SUITES = {
    "theorem": _verify_theorem,
    "table1": _verify_table1,
    "triples": _verify_triples,
    "lemma": _verify_lemma,
}


def cmd_verify(args) -> int:
    suite = _SUITES.get(args.suite)
    if suite is None:
        print(f"error: unknown suite {args.suite!r}", file=sys.stderr)
        return EXIT_USAGE
    failures = []
    for name, ok in suite(args.n_max, args.tol):
        status = "pass" if ok else "FAIL"
        print(f"{status}  {name}")
        if not ok:
            failures.append(name)
    if failures:
        print(dumps({"suite": args.suite, "failures": failures}))
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitscope",
        description="Local-unitary orbit dimensions for n-qubit pure states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze one state")
    p_analyze.add_argument("--state", required=True, help="state spec string")
    p_analyze.add_argument("--tol", type=float, default=default_tolerance())
    p_analyze.add_argument("--exact", action="store_true", help="require the exact rank path")
    p_analyze.add_argument("--dump-matrix", default=None, metavar="PATH")
    p_analyze.set_defaults(func=cmd_analyze)

    p_sweep = sub.add_parser("sweep", help="sweep a state family")
    p_sweep.add_argument("--family", default="random")
    p_sweep.add_argument("--n", type=int, required=True)
    p_sweep.add_argument("--samples", type=int, required=True)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--tol", type=float, default=default_tolerance())
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", required=True, choices=sorted(_SUITES))
    p_verify.add_argument("--n-max", type=int, default=6)
    p_verify.add_argument("--tol", type=float, default=default_tolerance())
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
