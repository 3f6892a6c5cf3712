"""The su(2)^n action on n-qubit state vectors.

Basis convention for su(2), fixed once and used everywhere:

    A = [[i, 0], [0, -i]]   (= i sigma_z)
    B = [[0, 1], [-1, 0]]   (= i sigma_y)
    C = [[0, i], [i, 0]]    (= i sigma_x)

so X = t*A + r*B + s*C = [[i t, u], [-conj(u), -i t]] with u = r + i s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .states import ExactAmp, PureState, flip_index

A_MATRIX = np.array([[1j, 0], [0, -1j]])
B_MATRIX = np.array([[0, 1], [-1, 0]], dtype=complex)
C_MATRIX = np.array([[0, 1j], [1j, 0]])


@dataclass(frozen=True)
class Su2Coordinates:
    """Coordinates (t, r, s) of t*A + r*B + s*C; entries real or Fraction."""

    t: Real
    r: Real
    s: Real

    def matrix(self) -> np.ndarray:
        t, r, s = float(self.t), float(self.r), float(self.s)
        return np.array([[1j * t, r + 1j * s], [-r + 1j * s, -1j * t]])

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in (self.t, self.r, self.s))


@dataclass(frozen=True)
class LocalAlgebraElement:
    """An element (X_1, ..., X_n) of su(2)^n."""

    coords: tuple[Su2Coordinates, ...]

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact for c in self.coords)

    @classmethod
    def from_triples(cls, triples: Sequence[tuple]) -> "LocalAlgebraElement":
        return cls(tuple(Su2Coordinates(*trip) for trip in triples))

    @classmethod
    def single_slot(cls, n: int, k: int, t=0.0, r=0.0, s=0.0) -> "LocalAlgebraElement":
        """X with (t, r, s) in slot k (1-based) and zero elsewhere."""
        zero = type(t)(0)
        coords = [Su2Coordinates(zero, zero, zero)] * n
        coords[k - 1] = Su2Coordinates(t, r, s)
        return cls(tuple(coords))


@dataclass(frozen=True)
class SU2GroupElement:
    """A 2x2 special unitary matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.matrix, dtype=complex)
        if u.shape != (2, 2):
            raise ValueError("SU(2) element must be a 2x2 matrix")
        if not np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12):
            raise ValueError("matrix is not unitary")
        if abs(np.linalg.det(u) - 1) > 1e-12:
            raise ValueError("matrix must have determinant 1")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    @classmethod
    def identity(cls) -> "SU2GroupElement":
        return cls(np.eye(2, dtype=complex))


@dataclass(frozen=True)
class LocalUnitary:
    """An element (g_1, ..., g_n) of SU(2)^n."""

    factors: tuple[SU2GroupElement, ...]

    @property
    def n(self) -> int:
        return len(self.factors)

    @classmethod
    def identity(cls, n: int) -> "LocalUnitary":
        return cls(tuple(SU2GroupElement.identity() for _ in range(n)))

    @classmethod
    def single_slot(cls, n: int, k: int, u: SU2GroupElement) -> "LocalUnitary":
        factors = [SU2GroupElement.identity() for _ in range(n)]
        factors[k - 1] = u
        return cls(tuple(factors))


def su2_exp(coords: Su2Coordinates) -> SU2GroupElement:
    """exp(t*A + r*B + s*C) in closed form: cos(theta) I + sinc(theta) X."""
    t, r, s = float(coords.t), float(coords.r), float(coords.s)
    theta = np.sqrt(t * t + r * r + s * s)
    if theta == 0:
        return SU2GroupElement.identity()
    x = coords.matrix()
    return SU2GroupElement(np.cos(theta) * np.eye(2) + (np.sin(theta) / theta) * x)


def random_su2(rng: np.random.Generator) -> SU2GroupElement:
    """Haar-uniform SU(2) element via a normalized Gaussian quaternion."""
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return SU2GroupElement(
        np.array([[w + 1j * x, y + 1j * z], [-y + 1j * z, w - 1j * x]])
    )


def random_local_unitary(n: int, rng: np.random.Generator) -> LocalUnitary:
    return LocalUnitary(tuple(random_su2(rng) for _ in range(n)))


def apply_algebra(x: LocalAlgebraElement, psi: PureState) -> np.ndarray:
    """Amplitudes of X . |psi>, evaluated termwise on the coefficient array.

    Coefficient at I is  sum_k (-1)^{i_k} [ c_I i t_k + c_{I_k} conj^{i_k}(u_k) ]
    with u_k = r_k + i s_k; cost O(n 2^n), no 2^n x 2^n operator is formed.
    """
    if x.n != psi.n:
        raise ValueError(f"algebra element acts on {x.n} qubits, state has {psi.n}")
    n = psi.n
    c = psi.amps
    idx = np.arange(1 << n)
    out = np.zeros(1 << n, dtype=complex)
    for k in range(1, n + 1):
        ck = x.coords[k - 1]
        t, r, s = float(ck.t), float(ck.r), float(ck.s)
        if t == 0 and r == 0 and s == 0:
            continue
        ik = (idx >> (n - k)) & 1
        sign = 1 - 2 * ik
        u = r + 1j * s
        u_or_conj = np.where(ik == 0, u, np.conj(u))
        out += sign * (1j * t * c + u_or_conj * c[idx ^ (1 << (n - k))])
    return out


def apply_algebra_exact(
    x: LocalAlgebraElement, psi: PureState
) -> tuple[ExactAmp, ...]:
    """Exact-rational version of apply_algebra.

    Multiplication by i is a (re, im) -> (-im, re) swap, so everything stays
    in Fractions.
    """
    if x.n != psi.n:
        raise ValueError(f"algebra element acts on {x.n} qubits, state has {psi.n}")
    if not psi.is_exact or not x.is_exact:
        raise ValueError("exact path requires exact state and exact coordinates")
    n = psi.n
    c = psi.exact
    out = [[Fraction(0), Fraction(0)] for _ in range(1 << n)]
    for i in range(1 << n):
        a_i, b_i = c[i]
        for k in range(1, n + 1):
            ck = x.coords[k - 1]
            ik = (i >> (n - k)) & 1
            sign = 1 - 2 * ik
            af, bf = c[flip_index(i, n, k)]
            # sign * (i t c_I + conj^{ik}(u) c_{I_k}), u = r + i s
            s_eff = -ck.s if ik else ck.s
            re = -ck.t * b_i + ck.r * af - s_eff * bf
            im = ck.t * a_i + ck.r * bf + s_eff * af
            out[i][0] += sign * re
            out[i][1] += sign * im
    return tuple((re, im) for re, im in out)


def triple_columns(
    psi: PureState, k: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The complex column vectors A_k|psi>, B_k|psi>, C_k|psi> of the triple T_k."""
    n = psi.n
    if not 1 <= k <= n:
        raise ValueError(f"slot k={k} out of range 1..{n}")
    c = psi.amps
    idx = np.arange(1 << n)
    ik = (idx >> (n - k)) & 1
    sign = 1 - 2 * ik
    flipped = c[idx ^ (1 << (n - k))]
    vec_a = 1j * sign * c
    vec_b = sign * flipped
    vec_c = 1j * flipped
    return vec_a, vec_b, vec_c


def triple_columns_exact(
    psi: PureState, k: int
) -> tuple[tuple[ExactAmp, ...], tuple[ExactAmp, ...], tuple[ExactAmp, ...]]:
    """Exact-rational triple columns, as (re, im) Fraction pairs."""
    n = psi.n
    if not 1 <= k <= n:
        raise ValueError(f"slot k={k} out of range 1..{n}")
    if not psi.is_exact:
        raise ValueError("exact path requires an exact state")
    vec_a, vec_b, vec_c = [], [], []
    for i in range(1 << n):
        a_i, b_i = psi.exact[i]
        af, bf = psi.exact[flip_index(i, n, k)]
        sign = 1 - 2 * ((i >> (n - k)) & 1)
        vec_a.append((-sign * b_i, sign * a_i))  # i * sign * c_I
        vec_b.append((sign * af, sign * bf))
        vec_c.append((-bf, af))  # i * c_{I_k}
    return tuple(vec_a), tuple(vec_b), tuple(vec_c)


def apply_group(u: LocalUnitary, psi: PureState) -> PureState:
    """The state (g_1 x ... x g_n)|psi>, applied one tensor factor at a time."""
    if u.n != psi.n:
        raise ValueError(f"unitary acts on {u.n} qubits, state has {psi.n}")
    n = psi.n
    tensor = psi.amps.reshape((2,) * n)
    for k in range(n):
        tensor = np.tensordot(u.factors[k].matrix, tensor, axes=([1], [k]))
        tensor = np.moveaxis(tensor, 0, k)
    return PureState(n=n, amps=tensor.reshape(1 << n))
