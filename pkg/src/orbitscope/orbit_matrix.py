"""The 2^{n+1} x (3n+1) real matrix whose kernel is the isotropy algebra.

Columns, through the C^N <-> R^{2N} identification, are
(A_1|psi>, B_1|psi>, C_1|psi>, ..., A_n|psi>, B_n|psi>, C_n|psi>, -i|psi>),
so a kernel vector (t_1, r_1, s_1, ..., t_n, r_n, s_n, theta) is exactly an
algebra element and eigenphase with X.|psi> = i theta |psi>.  The rank gives
the orbit dimension: dim O = rank - 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .lie_action import (
    LocalAlgebraElement,
    Su2Coordinates,
    apply_algebra,
    apply_algebra_exact,
    triple_columns,
    triple_columns_exact,
)
from .states import PureState, flip_index

DEFAULT_TOL = 1e-10


class ExactPathError(TypeError):
    """Raised when an exact-only operation meets float entries."""


@dataclass(frozen=True)
class OrbitMatrix:
    """The real matrix M for a state; float or exact-rational entries."""

    n: int
    data: np.ndarray  # shape (2^{n+1}, 3n+1); dtype float64 or object
    exact: bool

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def as_float(self) -> np.ndarray:
        if self.exact:
            return self.data.astype(float)
        return self.data

    def column_labels(self) -> list[str]:
        labels = []
        for k in range(1, self.n + 1):
            labels += [f"t{k}", f"r{k}", f"s{k}"]
        labels.append("theta")
        return labels

    def row_labels(self) -> list[str]:
        labels = []
        for i in range(1 << self.n):
            bits = format(i, f"0{self.n}b")
            labels += [f"{bits}:re", f"{bits}:im"]
        return labels


@dataclass(frozen=True)
class IsotropyElement:
    """An algebra element X with X.|psi> = i theta |psi>."""

    x: LocalAlgebraElement
    theta: float | Fraction


def _realify(vec: np.ndarray) -> np.ndarray:
    """Interleave (Re z_1, Im z_1, Re z_2, Im z_2, ...)."""
    out = np.empty(2 * len(vec))
    out[0::2] = vec.real
    out[1::2] = vec.imag
    return out


def _build_from_columns_float(psi: PureState) -> np.ndarray:
    n = psi.n
    cols = []
    for k in range(1, n + 1):
        for vec in triple_columns(psi, k):
            cols.append(_realify(vec))
    cols.append(_realify(-1j * psi.amps))
    return np.column_stack(cols)


def _build_from_columns_exact(psi: PureState) -> np.ndarray:
    n = psi.n
    dim = 1 << n
    m = np.empty((2 * dim, 3 * n + 1), dtype=object)
    for k in range(1, n + 1):
        for j, vec in enumerate(triple_columns_exact(psi, k)):
            col = 3 * (k - 1) + j
            for i, (re, im) in enumerate(vec):
                m[2 * i, col] = re
                m[2 * i + 1, col] = im
    for i, (a, b) in enumerate(psi.exact):  # -i c_I = b_I - i a_I
        m[2 * i, 3 * n] = b
        m[2 * i + 1, 3 * n] = -a
    return m


def _build_from_equations(psi: PureState) -> np.ndarray:
    """Secondary builder: the real/imaginary isotropy equations, entrywise.

    Row 2i is the real-part equation for multi-index I, row 2i+1 the
    imaginary-part equation, with the theta terms moved to the left side.
    """
    n = psi.n
    dim = 1 << n
    exact = psi.is_exact
    zero = Fraction(0) if exact else 0.0
    m = np.full((2 * dim, 3 * n + 1), zero, dtype=object if exact else float)
    for i in range(dim):
        if exact:
            a_i, b_i = psi.exact[i]
        else:
            a_i, b_i = psi.amps[i].real, psi.amps[i].imag
        for k in range(1, n + 1):
            f = flip_index(i, n, k)
            if exact:
                a_f, b_f = psi.exact[f]
            else:
                a_f, b_f = psi.amps[f].real, psi.amps[f].imag
            sign = 1 - 2 * ((i >> (n - k)) & 1)
            base = 3 * (k - 1)
            m[2 * i, base] = sign * -b_i  # t_k in Re equation
            m[2 * i, base + 1] = sign * a_f  # r_k
            m[2 * i, base + 2] = -b_f  # s_k
            m[2 * i + 1, base] = sign * a_i  # t_k in Im equation
            m[2 * i + 1, base + 1] = sign * b_f  # r_k
            m[2 * i + 1, base + 2] = a_f  # s_k
        m[2 * i, 3 * n] = b_i  # +theta coefficient, Re equation
        m[2 * i + 1, 3 * n] = -a_i
    return m


def build_matrix(psi: PureState) -> OrbitMatrix:
    """Assemble M from the column formulas and cross-check against the
    equation-by-equation builder; the two must agree entrywise."""
    if psi.is_exact:
        primary = _build_from_columns_exact(psi)
        secondary = _build_from_equations(psi)
        if not (primary == secondary).all():
            raise AssertionError("matrix builders disagree on exact entries")
        return OrbitMatrix(n=psi.n, data=primary, exact=True)
    primary = _build_from_columns_float(psi)
    secondary = _build_from_equations(psi).astype(float)
    if not np.array_equal(primary, secondary):
        raise AssertionError("matrix builders disagree on float entries")
    return OrbitMatrix(n=psi.n, data=primary, exact=False)


def numerical_rank(a: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    """Rank via QR with column pivoting; a pivot counts iff its magnitude
    exceeds tol times the largest pivot magnitude."""
    a = np.asarray(a, dtype=float)
    if a.size == 0 or not np.any(a):
        return 0
    r = scipy.linalg.qr(a, mode="r", pivoting=True)[0]
    pivots = np.abs(np.diag(r))
    if pivots.size == 0 or pivots[0] == 0:
        return 0
    return int(np.count_nonzero(pivots > tol * pivots[0]))


def rank_float(m: OrbitMatrix, tol: float = DEFAULT_TOL) -> int:
    return numerical_rank(m.as_float(), tol)


def _exact_gram(m: np.ndarray) -> np.ndarray:
    """M^T M with exact integer/rational arithmetic.

    rank(M^T M) = rank(M) and ker(M^T M) = ker(M) for real M, and the Gram
    matrix is only (3n+1) x (3n+1), which keeps the exact elimination tiny.
    Entries are rescaled to integers first; small integer matrices go through
    int64 matmul, anything else through object-dtype matmul.
    """
    scale = math.lcm(*(v.denominator for v in m.flat))
    ints = np.empty(m.shape, dtype=object)
    for idx, v in np.ndenumerate(m):
        ints[idx] = int(v * scale)
    maxabs = max((abs(int(v)) for v in ints.flat), default=0)
    rows = m.shape[0]
    if maxabs > 0 and rows * maxabs * maxabs < 2**62:
        g = ints.astype(np.int64).T @ ints.astype(np.int64)
        return g.astype(object)
    return ints.T @ ints


def _fraction_rref(a: np.ndarray) -> tuple[int, np.ndarray, list[int]]:
    """Reduced row echelon form over the rationals; returns (rank, rref, pivot cols)."""
    work = [[Fraction(v) for v in row] for row in a]
    nrows, ncols = len(work), len(work[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot_row = next((r for r in range(row, nrows) if work[r][col] != 0), None)
        if pivot_row is None:
            continue
        work[row], work[pivot_row] = work[pivot_row], work[row]
        pv = work[row][col]
        work[row] = [v / pv for v in work[row]]
        for r in range(nrows):
            if r != row and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * p for v, p in zip(work[r], work[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    rref = np.empty((nrows, ncols), dtype=object)
    for i, r in enumerate(work):
        rref[i] = r
    return len(pivots), rref, pivots


def rank_exact(m: OrbitMatrix) -> int:
    """Rank over the rationals, no tolerance involved."""
    if not m.exact:
        raise ExactPathError("rank_exact requires exact rational entries")
    rank, _, _ = _fraction_rref(_exact_gram(m.data))
    return rank


def exact_nullspace(m: OrbitMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of ker M over the rationals, via the RREF of the Gram matrix."""
    if not m.exact:
        raise ExactPathError("exact nullspace requires exact rational entries")
    _, rref, pivots = _fraction_rref(_exact_gram(m.data))
    ncols = rref.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -rref[row][fc]
        basis.append(tuple(v))
    return basis


def float_nullspace(m: OrbitMatrix, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Kernel basis on the float path; dimension pinned to cols - rank_float
    so the reported rank and kernel always agree."""
    a = m.as_float()
    rank = numerical_rank(a, tol)
    nullity = a.shape[1] - rank
    if nullity == 0:
        return []
    _, _, vt = np.linalg.svd(a, full_matrices=True)
    return [vt[i] for i in range(a.shape[1] - nullity, a.shape[1])]


def _unpack_kernel_vector(v, n: int) -> IsotropyElement:
    coords = tuple(
        Su2Coordinates(v[3 * k], v[3 * k + 1], v[3 * k + 2]) for k in range(n)
    )
    return IsotropyElement(x=LocalAlgebraElement(coords), theta=v[3 * n])


def isotropy_basis(
    psi: PureState, tol: float = DEFAULT_TOL
) -> list[IsotropyElement]:
    """Basis of the isotropy Lie algebra, each element with its eigenphase.

    Kernel dimension equals the algebra dimension: theta is determined by X,
    so (X, theta) pairs and algebra elements are in bijection.
    """
    m = build_matrix(psi)
    if m.exact:
        kernel = exact_nullspace(m)
    else:
        kernel = float_nullspace(m, tol)
    return [_unpack_kernel_vector(v, psi.n) for v in kernel]


def verify_isotropy(
    psi: PureState, elem: IsotropyElement, tol: float = DEFAULT_TOL
) -> bool:
    """Check ||X.psi - i theta psi|| <= tol * ||psi|| (exactly, when possible)."""
    if elem.x.n != psi.n:
        raise ValueError("algebra element and state act on different qubit counts")
    if psi.is_exact and elem.x.is_exact and isinstance(elem.theta, Fraction):
        result = apply_algebra_exact(elem.x, psi)
        th = elem.theta
        # i theta c_I = (-theta b_I, theta a_I)
        return all(
            re == -th * b and im == th * a
            for (re, im), (a, b) in zip(result, psi.exact)
        )
    residual = apply_algebra(elem.x, psi) - 1j * float(elem.theta) * psi.amps
    return bool(np.linalg.norm(residual) <= tol * psi.norm())


def min_orbit_bound(n: int) -> int:
    """The minimum orbit dimension: 3n/2 for even n, (3n+1)/2 for odd n."""
    if n < 1:
        raise ValueError("need at least one qubit")
    return (3 * n) // 2 if n % 2 == 0 else (3 * n + 1) // 2


def orbit_dimension(psi: PureState, tol: float = DEFAULT_TOL) -> int:
    """dim O = rank M - 1, via the exact path when the state is exact."""
    m = build_matrix(psi)
    rank = rank_exact(m) if m.exact else rank_float(m, tol)
    return rank - 1


def dump_csv(m: OrbitMatrix, path: str) -> None:
    """Write M as CSV with labeled header row and row labels."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row"] + m.column_labels())
        for label, row in zip(m.row_labels(), m.data):
            writer.writerow([label] + [str(v) for v in row])
