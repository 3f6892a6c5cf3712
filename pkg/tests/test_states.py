import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbitscope.states import (
    MultiIndex,
    PureState,
    ZeroStateError,
    make_basis,
    make_cat,
    make_singlet_product,
    make_singlet_product_plus_zero,
    multi_index_complement,
    multi_index_double_complement,
    sample_haar_state,
    state_from_json,
    state_to_json,
    tensor,
)

bits_strategy = st.lists(st.integers(0, 1), min_size=1, max_size=10).map(tuple)


def brute_force_singlet_product(k):
    """Independent tensor-expansion oracle: expand k singlets term by term."""
    terms = {(): 1}
    for _ in range(k):
        new = {}
        for bits, coeff in terms.items():
            new[bits + (0, 1)] = coeff
            new[bits + (1, 0)] = -coeff
        terms = new
    return terms


class TestMultiIndex:
    def test_complement_examples(self):
        assert multi_index_complement(MultiIndex((0, 1, 1, 0)), 1).bits == (1, 1, 1, 0)
        assert multi_index_complement(MultiIndex((0, 0)), 2).bits == (0, 1)

    @given(bits_strategy, st.data())
    def test_complement_involution(self, bits, data):
        k = data.draw(st.integers(1, len(bits)))
        index = MultiIndex(bits)
        assert multi_index_complement(multi_index_complement(index, k), k) == index

    def test_complement_out_of_range(self):
        with pytest.raises(ValueError):
            multi_index_complement(MultiIndex((0, 1)), 3)
        with pytest.raises(ValueError):
            multi_index_complement(MultiIndex((0, 1)), 0)

    def test_double_complement_examples(self):
        assert multi_index_double_complement(MultiIndex((0, 0, 0)), 1, 3).bits == (1, 0, 1)
        assert multi_index_double_complement(MultiIndex((1, 1)), 1, 2).bits == (0, 0)

    @given(bits_strategy.filter(lambda b: len(b) >= 2), st.data())
    def test_double_complement_is_composition(self, bits, data):
        k = data.draw(st.integers(1, len(bits) - 1))
        l = data.draw(st.integers(k + 1, len(bits)))
        index = MultiIndex(bits)
        expected = multi_index_complement(multi_index_complement(index, k), l)
        assert multi_index_double_complement(index, k, l) == expected

    def test_double_complement_ordering(self):
        with pytest.raises(ValueError):
            multi_index_double_complement(MultiIndex((0, 0)), 2, 1)
        with pytest.raises(ValueError):
            multi_index_double_complement(MultiIndex((0, 0)), 1, 1)

    def test_storage_index_roundtrip(self):
        for n in range(1, 13):
            for idx in range(1 << n):
                index = MultiIndex.from_int(idx, n)
                assert index.to_int() == idx
                assert sum(b << (n - k) for k, b in enumerate(index.bits, start=1)) == idx


class TestGenerators:
    def test_singlet(self):
        psi = make_singlet_product(1)
        assert psi.n == 2
        assert list(psi.amps) == [0, 1, -1, 0]
        assert psi.is_exact

    def test_two_singlets_frozen(self):
        psi = make_singlet_product(2)
        nonzero = {
            format(i, "04b"): int(a.real)
            for i, a in enumerate(psi.amps)
            if a != 0
        }
        assert nonzero == {"0101": 1, "0110": -1, "1001": -1, "1010": 1}

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_singlet_product_matches_expansion_oracle(self, k):
        psi = make_singlet_product(k)
        expected = brute_force_singlet_product(k)
        for bits, coeff in expected.items():
            assert psi.amplitude(MultiIndex(bits)) == coeff
        assert np.count_nonzero(psi.amps) == len(expected) == 2**k
        assert set(np.unique(psi.amps[psi.amps != 0].real)) <= {1.0, -1.0}

    def test_singlet_product_rejects_zero_copies(self):
        with pytest.raises(ValueError):
            make_singlet_product(0)
        with pytest.raises(ValueError):
            make_singlet_product_plus_zero(0)

    def test_singlet_plus_zero(self):
        psi = make_singlet_product_plus_zero(1)
        assert psi.n == 3
        assert psi.amplitude(MultiIndex((0, 1, 0))) == 1
        assert psi.amplitude(MultiIndex((1, 0, 0))) == -1
        assert np.count_nonzero(psi.amps) == 2

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_singlet_plus_zero_last_bit(self, k):
        psi = make_singlet_product_plus_zero(k)
        for i in np.flatnonzero(psi.amps):
            assert i % 2 == 0  # last bit of every populated multi-index is 0
        assert np.count_nonzero(psi.amps) == 2**k

    def test_cat(self):
        psi = make_cat(3)
        assert psi.amplitude(MultiIndex((0, 0, 0))) == 1
        assert psi.amplitude(MultiIndex((1, 1, 1))) == 1
        assert np.count_nonzero(psi.amps) == 2
        single = make_cat(1)
        assert list(single.amps) == [1, 1]
        for n in range(1, 9):
            assert np.count_nonzero(make_cat(n).amps) == 2

    def test_basis(self):
        assert list(make_basis(MultiIndex((0,))).amps) == [1, 0]
        psi = make_basis(MultiIndex((0, 1)))
        assert list(psi.amps) == [0, 1, 0, 0]
        assert np.count_nonzero(psi.amps) == 1

    def test_generators_are_exact(self):
        assert make_singlet_product(2).is_exact
        assert make_cat(4).is_exact
        assert make_basis(MultiIndex((1, 0))).is_exact
        assert not sample_haar_state(3, 0).is_exact


class TestHaarSampling:
    def test_deterministic(self):
        a = sample_haar_state(3, 11)
        b = sample_haar_state(3, 11)
        assert np.array_equal(a.amps, b.amps)

    def test_seed_sensitivity(self):
        a = sample_haar_state(3, 11)
        b = sample_haar_state(3, 12)
        assert not np.array_equal(a.amps, b.amps)

    def test_no_zero_amplitudes(self):
        psi = sample_haar_state(4, 5)
        assert len(psi.amps) == 16
        assert np.all(np.abs(psi.amps) > 0)


class TestTensor:
    def test_basis_tensor(self):
        psi = tensor(make_basis(MultiIndex((0,))), make_basis(MultiIndex((1,))))
        assert np.array_equal(psi.amps, make_basis(MultiIndex((0, 1))).amps)

    def test_singlet_squared(self):
        psi = tensor(make_singlet_product(1), make_singlet_product(1))
        assert psi.exact == make_singlet_product(2).exact

    def test_norm_multiplicative(self):
        a = sample_haar_state(2, 1)
        b = sample_haar_state(3, 2)
        assert tensor(a, b).norm() ** 2 == pytest.approx(a.norm() ** 2 * b.norm() ** 2)

    def test_associative(self):
        a = sample_haar_state(1, 3)
        b = sample_haar_state(2, 4)
        c = sample_haar_state(1, 5)
        left = tensor(tensor(a, b), c)
        right = tensor(a, tensor(b, c))
        assert np.allclose(left.amps, right.amps, atol=1e-15)


class TestStateValidation:
    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroStateError):
            PureState.from_amplitudes([0, 0])
        with pytest.raises(ZeroStateError):
            PureState.from_exact([(Fraction(0), Fraction(0))] * 2)

    def test_exact_flag_requires_fractions(self):
        with pytest.raises(TypeError):
            PureState.from_exact([(0.5, 0.0), (Fraction(1), Fraction(0))])

    def test_bad_length(self):
        with pytest.raises(ValueError):
            PureState.from_amplitudes([1, 0, 0])


class TestJsonFormat:
    def test_float_roundtrip(self):
        psi = sample_haar_state(2, 9)
        again = state_from_json(state_to_json(psi))
        assert np.allclose(psi.amps, again.amps)

    def test_exact_roundtrip(self):
        psi = make_singlet_product(1)
        again = state_from_json(state_to_json(psi))
        assert again.is_exact
        assert again.exact == psi.exact

    def test_rational_strings(self):
        doc = {"n": 1, "amplitudes_exact": [["1/2", "0"], ["-1/3", "2"]]}
        psi = state_from_json(doc)
        assert psi.exact[0] == (Fraction(1, 2), Fraction(0))
        assert psi.exact[1] == (Fraction(-1, 3), Fraction(2))

    def test_decimal_strings_rejected(self):
        doc = {"n": 1, "amplitudes_exact": [["0.5", "0"], ["1", "0"]]}
        with pytest.raises(ValueError):
            state_from_json(doc)

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            state_from_json({"n": 2, "amplitudes": [[1, 0]]})

    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroStateError):
            state_from_json({"n": 1, "amplitudes": [[0, 0], [0, 0]]})
