"""Multi-index bit machinery, n-qubit state vectors, and named state families.

Bit-order contract: for a multi-index I = (i_1, ..., i_n), bit 1 is the most
significant bit of the storage index, so the amplitude of |i_1 i_2 ... i_n>
lives at storage position sum_k i_k * 2**(n-k).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

# An exact complex amplitude is a (real, imag) pair of Fractions.
ExactAmp = tuple[Fraction, Fraction]


class ZeroStateError(ValueError):
    """Raised when an all-zero amplitude vector is supplied."""


@dataclass(frozen=True)
class MultiIndex:
    """An n-tuple of bits labeling a computational basis vector."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) == 0:
            raise ValueError("multi-index must have at least one bit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0 or 1, got {self.bits}")

    @property
    def n(self) -> int:
        return len(self.bits)

    def to_int(self) -> int:
        """Storage index: bit 1 is the most significant bit."""
        v = 0
        for b in self.bits:
            v = (v << 1) | b
        return v

    @classmethod
    def from_int(cls, idx: int, n: int) -> "MultiIndex":
        if not 0 <= idx < (1 << n):
            raise ValueError(f"index {idx} out of range for n={n}")
        return cls(tuple((idx >> (n - k)) & 1 for k in range(1, n + 1)))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def multi_index_complement(index: MultiIndex, k: int) -> MultiIndex:
    """Flip bit k (1-based) of the multi-index."""
    if not 1 <= k <= index.n:
        raise ValueError(f"bit position k={k} out of range 1..{index.n}")
    bits = list(index.bits)
    bits[k - 1] ^= 1
    return MultiIndex(tuple(bits))


def multi_index_double_complement(index: MultiIndex, k: int, l: int) -> MultiIndex:
    """Flip bits k and l (1-based, k < l) of the multi-index."""
    if not 1 <= k < l <= index.n:
        raise ValueError(f"need 1 <= k < l <= n, got k={k}, l={l}, n={index.n}")
    return multi_index_complement(multi_index_complement(index, k), l)


def flip_index(idx: int, n: int, k: int) -> int:
    """Storage index of I_k given the storage index of I."""
    return idx ^ (1 << (n - k))


def _validate_exact(exact: Sequence[ExactAmp]) -> tuple[ExactAmp, ...]:
    out = []
    for re, im in exact:
        if not isinstance(re, Fraction) or not isinstance(im, Fraction):
            raise TypeError("exact amplitudes must be Fraction pairs")
        out.append((re, im))
    return tuple(out)


@dataclass(frozen=True)
class PureState:
    """An unnormalized n-qubit state vector.

    `amps` is always present as a complex float array in storage order.  When
    `exact` is set, it holds the same amplitudes as (Fraction, Fraction)
    pairs and downstream rank computations may use the exact path.
    Normalization is never required: everything computed from a state here is
    invariant under nonzero rescaling.
    """

    n: int
    amps: np.ndarray = field(repr=False)
    exact: Optional[tuple[ExactAmp, ...]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (1 << self.n,):
            raise ValueError(
                f"expected {1 << self.n} amplitudes, got shape {amps.shape}"
            )
        if self.exact is not None:
            exact = _validate_exact(self.exact)
            if len(exact) != 1 << self.n:
                raise ValueError("exact amplitude count mismatch")
            if all(re == 0 and im == 0 for re, im in exact):
                raise ZeroStateError("zero vector is not a state")
            object.__setattr__(self, "exact", exact)
            amps = np.array([float(re) + 1j * float(im) for re, im in exact])
        elif not np.any(amps):
            raise ZeroStateError("zero vector is not a state")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @classmethod
    def from_amplitudes(cls, amps: Sequence[complex]) -> "PureState":
        amps = np.asarray(amps, dtype=complex)
        n = int(np.log2(len(amps)))
        if 1 << n != len(amps):
            raise ValueError("amplitude count must be a power of two")
        return cls(n=n, amps=amps)

    @classmethod
    def from_exact(cls, exact: Sequence[ExactAmp]) -> "PureState":
        n = int(np.log2(len(exact)))
        if 1 << n != len(exact):
            raise ValueError("amplitude count must be a power of two")
        return cls(n=n, amps=np.zeros(len(exact)), exact=tuple(exact))

    @classmethod
    def from_int_amplitudes(cls, ints: Sequence[int]) -> "PureState":
        return cls.from_exact([(Fraction(v), Fraction(0)) for v in ints])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def amplitude(self, index: MultiIndex) -> complex:
        return complex(self.amps[index.to_int()])


def make_basis(index: MultiIndex) -> PureState:
    """The computational basis state |I>."""
    amps: list[ExactAmp] = [(Fraction(0), Fraction(0))] * (1 << index.n)
    amps[index.to_int()] = (Fraction(1), Fraction(0))
    return PureState.from_exact(amps)


def _singlet_exact() -> list[ExactAmp]:
    # |01> - |10>, unnormalized
    z = (Fraction(0), Fraction(0))
    return [z, (Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0)), z]


def make_singlet_product(k: int) -> PureState:
    """k tensored copies of the singlet |01> - |10>, on n = 2k qubits."""
    if k < 1:
        raise ValueError("need at least one singlet copy")
    state = PureState.from_exact(_singlet_exact())
    single = state
    for _ in range(k - 1):
        state = tensor(state, single)
    return state


def make_singlet_product_plus_zero(k: int) -> PureState:
    """k singlets tensored with |0>, on n = 2k + 1 qubits."""
    if k < 1:
        raise ValueError("need at least one singlet copy")
    return tensor(make_singlet_product(k), make_basis(MultiIndex((0,))))


def make_cat(n: int) -> PureState:
    """The n-cat state |0...0> + |1...1>, stored with unit amplitudes.

    The 1/sqrt(2) normalization is dropped: rank results downstream are
    scale-invariant.
    """
    if n < 1:
        raise ValueError("need at least one qubit")
    amps: list[ExactAmp] = [(Fraction(0), Fraction(0))] * (1 << n)
    amps[0] = (Fraction(1), Fraction(0))
    amps[-1] = (Fraction(1), Fraction(0))
    return PureState.from_exact(amps)


def sample_haar_state(n: int, seed: int) -> PureState:
    """Haar-like random state: i.i.d. standard Gaussian real/imag parts.

    The induced projective distribution is unitarily invariant, which is all
    the "almost all states" checks require.  Deterministic given the seed.
    """
    if n < 1:
        raise ValueError("need at least one qubit")
    rng = np.random.default_rng(seed)
    dim = 1 << n
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(n=n, amps=amps)


def tensor(psi1: PureState, psi2: PureState) -> PureState:
    """Kronecker product; exact iff both inputs are exact."""
    if psi1.is_exact and psi2.is_exact:
        exact: list[ExactAmp] = []
        for a1, b1 in psi1.exact:
            for a2, b2 in psi2.exact:
                exact.append((a1 * a2 - b1 * b2, a1 * b2 + b1 * a2))
        return PureState.from_exact(exact)
    return PureState(n=psi1.n + psi2.n, amps=np.kron(psi1.amps, psi2.amps))


def _parse_rational(text: str) -> Fraction:
    if "." in text or "e" in text.lower():
        raise ValueError(f"rational string must be decimal-free: {text!r}")
    return Fraction(text)


def state_from_json(doc: dict) -> PureState:
    """Parse the state file schema.

    {"n": int, "amplitudes": [[re, im], ...]} or, for exact states,
    {"n": int, "amplitudes_exact": [["p/q", "r/s"], ...]}.
    """
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise ValueError("state file needs a positive integer 'n'")
    dim = 1 << n
    if "amplitudes_exact" in doc:
        raw = doc["amplitudes_exact"]
        if len(raw) != dim:
            raise ValueError(f"expected {dim} amplitudes, got {len(raw)}")
        exact = [(_parse_rational(re), _parse_rational(im)) for re, im in raw]
        return PureState.from_exact(exact)
    if "amplitudes" in doc:
        raw = doc["amplitudes"]
        if len(raw) != dim:
            raise ValueError(f"expected {dim} amplitudes, got {len(raw)}")
        amps = np.array([complex(re, im) for re, im in raw])
        return PureState(n=n, amps=amps)
    raise ValueError("state file needs 'amplitudes' or 'amplitudes_exact'")


def load_state(path: str) -> PureState:
    with open(path) as fh:
        return state_from_json(json.load(fh))


def state_to_json(psi: PureState) -> dict:
    if psi.is_exact:
        return {
            "n": psi.n,
            "amplitudes_exact": [[str(re), str(im)] for re, im in psi.exact],
        }
    return {
        "n": psi.n,
        "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amps],
    }
