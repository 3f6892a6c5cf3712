"""GF(2) sign-matrix machinery: kernel/ones-preimage witnesses, zero rows of
the diagonal sign-sum matrix, parity sets, and parity-class partitions.

Given reals xi_1..xi_m, the 2^m sign sums sum_i (-1)^{r_i} xi_i are streamed
(the 2^m x 2^m diagonal matrix is never formed).  Stacking the sign patterns
r that sum to zero into a 0/1 matrix L, the corresponding +-1 matrix E kills
xi, so L either has a nontrivial GF(2) kernel or maps some v to the all-ones
vector; the support of v is the parity set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

import numpy as np

from .states import MultiIndex

ENUMERATION_CAP = 24
DEFAULT_ZERO_TOL = 1e-9


class NoWitnessError(ValueError):
    """The +-1 matrix E is injective, so the lemma's hypothesis fails."""


class InternalContradictionError(RuntimeError):
    """Neither witness kind exists; would falsify the kernel lemma."""


class CapacityError(ValueError):
    """More coefficients than the 2^m enumeration cap allows."""


@dataclass(frozen=True)
class Z2Matrix:
    """A 0/1 matrix over GF(2); rows stored as bitmasks (bit j = column j+1)."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 1:
            raise ValueError("need at least one column")
        if any(r >> self.ncols for r in self.rows):
            raise ValueError("row has bits beyond ncols")

    @classmethod
    def from_bit_rows(cls, bit_rows: Sequence[Sequence[int]]) -> "Z2Matrix":
        ncols = len(bit_rows[0])
        masks = []
        for row in bit_rows:
            if len(row) != ncols or any(b not in (0, 1) for b in row):
                raise ValueError("rows must be equal-length 0/1 sequences")
            masks.append(sum(b << j for j, b in enumerate(row)))
        return cls(rows=tuple(masks), ncols=ncols)

    def bit_rows(self) -> list[tuple[int, ...]]:
        return [
            tuple((r >> j) & 1 for j in range(self.ncols)) for r in self.rows
        ]

    def apply(self, v_mask: int) -> tuple[int, ...]:
        """L v over GF(2), for v given as a bitmask."""
        return tuple(bin(r & v_mask).count("1") & 1 for r in self.rows)


@dataclass(frozen=True)
class Z2Witness:
    """Outcome of the sign-matrix lemma for a concrete L."""

    kind: str  # "kernel" or "ones-preimage"
    v: tuple[int, ...]
    parity_set: frozenset[int]  # support of v, 1-based
    parity: int  # 0 for kernel, 1 for ones-preimage

    def __post_init__(self):
        if self.kind not in ("kernel", "ones-preimage"):
            raise ValueError(f"unknown witness kind {self.kind!r}")


def _mask_to_bits(mask: int, m: int) -> tuple[int, ...]:
    return tuple((mask >> j) & 1 for j in range(m))


def _gf2_eliminate(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Row-reduce bitmask rows; returns (reduced pivot rows, pivot columns)."""
    work = list(rows)
    pivots: list[int] = []
    reduced: list[int] = []
    for col in range(ncols):
        pivot = next((i for i, r in enumerate(work) if (r >> col) & 1), None)
        if pivot is None:
            continue
        prow = work.pop(pivot)
        reduced = [r ^ prow if (r >> col) & 1 else r for r in reduced]
        work = [r ^ prow if (r >> col) & 1 else r for r in work]
        reduced.append(prow)
        pivots.append(col)
    # back-substitute to full reduction
    for i in range(len(reduced) - 1, -1, -1):
        for j in range(i):
            if (reduced[j] >> pivots[i]) & 1:
                reduced[j] ^= reduced[i]
    return reduced, pivots


def gf2_kernel_basis(matrix: Z2Matrix) -> list[int]:
    """Basis of ker L over GF(2), one bitmask per free column."""
    reduced, pivots = _gf2_eliminate(list(matrix.rows), matrix.ncols)
    free = [c for c in range(matrix.ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = 1 << fc
        for row, pc in zip(reduced, pivots):
            if (row >> fc) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


def gf2_solve_ones(matrix: Z2Matrix) -> Optional[int]:
    """A v with L v = (1,...,1) over GF(2), or None if inconsistent."""
    ncols = matrix.ncols
    # augment with a constant column at bit ncols
    aug = [r | (1 << ncols) for r in matrix.rows]
    reduced, pivots = _gf2_eliminate(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None  # row (0,...,0 | 1): inconsistent
    v = 0
    for row, pc in zip(reduced, pivots):
        if (row >> ncols) & 1:
            v |= 1 << pc
    return v


def _exact_real_kernel_nontrivial(matrix: Z2Matrix) -> bool:
    """Whether E = ((-1)^{L_jk}) has a nontrivial real kernel (exact rank)."""
    m = matrix.ncols
    # incremental row reduction over Q keeps at most m pivot rows around
    pivot_rows: list[list[Fraction]] = []
    pivot_cols: list[int] = []
    for mask in matrix.rows:
        row = [Fraction(1 - 2 * ((mask >> j) & 1)) for j in range(m)]
        for prow, pc in zip(pivot_rows, pivot_cols):
            if row[pc] != 0:
                factor = row[pc] / prow[pc]
                row = [v - factor * p for v, p in zip(row, prow)]
        lead = next((j for j, v in enumerate(row) if v != 0), None)
        if lead is not None:
            pivot_rows.append(row)
            pivot_cols.append(lead)
            if len(pivot_cols) == m:
                return False
    return True


def solve_sign_kernel(matrix: Z2Matrix) -> Z2Witness:
    """The lemma's witness: a GF(2) kernel vector of L, else a preimage of
    the all-ones vector.  Requires the +-1 matrix E to be singular.

    Determinism: the kernel is tried first, and among kernel basis vectors
    the lexicographically smallest bit pattern (v_1, v_2, ...) wins.
    """
    if not _exact_real_kernel_nontrivial(matrix):
        raise NoWitnessError("the +-1 matrix E has trivial kernel")
    kernel = gf2_kernel_basis(matrix)
    if kernel:
        m = matrix.ncols
        best = min(kernel, key=lambda v: _mask_to_bits(v, m))
        bits = _mask_to_bits(best, m)
        return Z2Witness(
            kind="kernel",
            v=bits,
            parity_set=frozenset(j + 1 for j, b in enumerate(bits) if b),
            parity=0,
        )
    v = gf2_solve_ones(matrix)
    if v is None:
        raise InternalContradictionError(
            "E singular but L has trivial kernel and no ones-preimage"
        )
    bits = _mask_to_bits(v, matrix.ncols)
    return Z2Witness(
        kind="ones-preimage",
        v=bits,
        parity_set=frozenset(j + 1 for j, b in enumerate(bits) if b),
        parity=1,
    )


def _is_exact_vector(xi: Sequence) -> bool:
    return all(isinstance(v, Rational) for v in xi)


def zero_rows(
    xi: Sequence, tol: float = DEFAULT_ZERO_TOL
) -> list[tuple[int, ...]]:
    """All sign patterns r in {0,1}^m with sum_i (-1)^{r_i} xi_i = 0.

    The zero test is exact for rational xi, else |sum| <= tol * ||xi||_1.
    Sums are built by doubling, so only the 2^m diagonal is ever held.
    """
    m = len(xi)
    if m == 0 or all(v == 0 for v in xi):
        raise ValueError("xi must be nonempty and not all zero")
    if m > ENUMERATION_CAP:
        raise CapacityError(f"m={m} exceeds enumeration cap {ENUMERATION_CAP}")
    if _is_exact_vector(xi):
        sums: list = [0]
        for v in xi:
            v = Fraction(v)
            sums = [s + v for s in sums] + [s - v for s in sums]
        hits = [r for r, s in enumerate(sums) if s == 0]
    else:
        sums = np.zeros(1)
        for v in xi:
            v = float(v)
            sums = np.concatenate([sums + v, sums - v])
        bound = tol * float(np.sum(np.abs(np.asarray(xi, dtype=float))))
        hits = list(np.flatnonzero(np.abs(sums) <= bound))
    # bit j-1 of the integer r is the sign bit r_j
    return [_mask_to_bits(int(r), m) for r in hits]


def find_parity_set(xi: Sequence, tol: float = DEFAULT_ZERO_TOL) -> Z2Witness:
    """Stack the zero rows into L and extract the parity set K.

    Postconditions re-checked here, independently of the solver: |K| is even
    and sum_{k in K} r_k mod 2 is the same for every zero row.
    """
    rows = zero_rows(xi, tol)
    if not rows:
        raise ValueError("no zero rows: the diagonal sign matrix is invertible")
    matrix = Z2Matrix.from_bit_rows(rows)
    witness = solve_sign_kernel(matrix)
    support = witness.parity_set
    if len(support) % 2 != 0:
        raise InternalContradictionError("parity set has odd size")
    parities = {sum(r[k - 1] for k in support) % 2 for r in rows}
    if parities != {witness.parity}:
        raise InternalContradictionError(
            f"parity not constant over zero rows: {parities}"
        )
    return witness


def partition_parity_classes(
    n: int, slots: Sequence[int], parity: int
) -> tuple[list[MultiIndex], list[MultiIndex]]:
    """Split all n-bit multi-indices by the parity of their bits in `slots`.

    Returns (P, P') with P the class matching `parity`; both halves have
    exactly 2^{n-1} members.
    """
    slots = sorted(set(slots))
    if not slots:
        raise ValueError("slot subset must be nonempty")
    if slots[0] < 1 or slots[-1] > n:
        raise ValueError(f"slots must lie in 1..{n}")
    in_class: list[MultiIndex] = []
    out_class: list[MultiIndex] = []
    for idx in range(1 << n):
        index = MultiIndex.from_int(idx, n)
        p = sum(index.bits[k - 1] for k in slots) % 2
        (in_class if p == parity else out_class).append(index)
    return in_class, out_class
