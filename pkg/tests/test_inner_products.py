import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitscope.inner_products import (
    ALL_KINDS,
    PAIR_KINDS,
    SINGLE_KINDS,
    HypothesisViolationError,
    InnerProductKind,
    direct_inner_product,
    orthogonality_report,
    real_dot,
    table_inner_product,
    table_kind_as_labels,
)
from orbitscope.states import (
    MultiIndex,
    PureState,
    make_basis,
    make_cat,
    make_singlet_product,
    make_singlet_product_plus_zero,
    sample_haar_state,
)


def all_kind_instances(n):
    for tag in SINGLE_KINDS:
        for k in range(1, n + 1):
            yield InnerProductKind(tag, k)
    for tag in PAIR_KINDS:
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                yield InnerProductKind(tag, k, j)


class TestKindValidation:
    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            InnerProductKind("AD", 1, 1)

    def test_single_with_two_slots(self):
        with pytest.raises(ValueError):
            InnerProductKind("A", 1, 2)

    def test_pair_with_one_slot(self):
        with pytest.raises(ValueError):
            InnerProductKind("BB", 1)

    def test_slot_out_of_range(self):
        psi = make_cat(2)
        with pytest.raises(ValueError):
            table_inner_product(psi, InnerProductKind("A", 3))

    def test_tag_count(self):
        assert len(ALL_KINDS) == 12


class TestTableAgainstDirect:
    def test_random_states(self):
        for i in range(30):
            n = 1 + i % 5
            psi = sample_haar_state(n, 700 + i)
            scale = psi.norm() ** 2
            for kind in all_kind_instances(n):
                table = table_inner_product(psi, kind)
                direct = direct_inner_product(psi, *table_kind_as_labels(kind))
                assert abs(table - direct) <= 1e-12 * scale, kind

    def test_exact_states_bitwise(self):
        states = [
            make_singlet_product(1),
            make_singlet_product(2),
            make_cat(2),
            make_cat(3),
            make_basis(MultiIndex((0, 1, 0))),
            make_singlet_product_plus_zero(1),
        ]
        for psi in states:
            for kind in all_kind_instances(psi.n):
                table = table_inner_product(psi, kind)
                direct = direct_inner_product(psi, *table_kind_as_labels(kind))
                assert table == direct, kind

    def test_frozen_cb_instance(self):
        # distinguishes the two candidate sign exponents in the C.B row:
        # with (-1)^{i_j} this value would come out as -2, not +2
        psi = PureState(n=2, amps=np.array([1, 0, 0, 1j], dtype=complex))
        kind = InnerProductKind("CB", k=2, j=1)
        assert table_inner_product(psi, kind) == 2 + 0j
        assert direct_inner_product(psi, *table_kind_as_labels(kind)) == 2 + 0j

    @given(st.integers(0, 10_000), st.integers(1, 4))
    @settings(max_examples=40, deadline=None)
    def test_hypothesis_agreement(self, seed, n):
        psi = sample_haar_state(n, seed)
        scale = psi.norm() ** 2
        for kind in all_kind_instances(n):
            table = table_inner_product(psi, kind)
            direct = direct_inner_product(psi, *table_kind_as_labels(kind))
            assert abs(table - direct) <= 1e-12 * scale

    def test_conjugate_symmetry(self):
        # <X_j psi | Y_k psi> = conj(<Y_k psi | X_j psi>)
        psi = sample_haar_state(3, 42)
        for j in range(1, 4):
            for k in range(1, 4):
                ab = table_inner_product(psi, InnerProductKind("AB", k, j))
                ba = table_inner_product(psi, InnerProductKind("BA", j, k))
                assert abs(ab - np.conj(ba)) <= 1e-12 * psi.norm() ** 2


class TestRealDot:
    def test_matches_real_part(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            u = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            assert abs(real_dot(u, v) - np.vdot(u, v).real) <= 1e-12

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            real_dot(np.ones(2), np.ones(3))


class TestTripleScenario:
    def test_random_states(self):
        for i in range(20):
            n = 1 + i % 5
            psi = sample_haar_state(n, 900 + i)
            for k in range(1, n + 1):
                report = orthogonality_report(psi, "triple", k=k)
                assert report.all_pass
                assert report.hypothesis_residual == 0.0
                assert len(report.checks) == 3

    def test_json_round_trip(self):
        report = orthogonality_report(make_cat(3), "triple", k=2)
        payload = json.loads(report.to_json())
        assert payload["scenario"] == "triple"
        assert all(c["pass"] for c in payload["checks"])


class TestMainScenario:
    def test_singlet_dependency(self):
        psi = make_singlet_product(1)
        report = orthogonality_report(psi, "main", slots=[1, 2], xi=[1.0, 1.0])
        assert report.all_pass
        assert report.parity_slots == frozenset({1, 2})
        assert report.hypothesis_residual <= 1e-12 * psi.norm()

    def test_two_singlets_dependency(self):
        psi = make_singlet_product(2)
        report = orthogonality_report(psi, "main", slots=[3, 4], xi=[1.0, 1.0])
        assert report.all_pass
        # off-parity-set triples of the first singlet appear in the checks
        assert any(".A1" in c.pair or "A1." in c.pair for c in report.checks)

    def test_rejects_false_hypothesis(self):
        psi = sample_haar_state(2, 3)
        with pytest.raises(HypothesisViolationError) as info:
            orthogonality_report(psi, "main", slots=[1, 2], xi=[1.0, 1.0])
        assert info.value.residual > 0


class TestTwoCommonScenario:
    def test_cat_state(self):
        report = orthogonality_report(make_cat(2), "two-common", l=1, lp=2)
        assert report.all_pass
        assert report.scenario == "two-common"

    def test_underscore_alias(self):
        report = orthogonality_report(make_cat(2), "two_common", l=1, lp=2)
        assert report.scenario == "two-common"

    def test_rejects_singlet(self):
        with pytest.raises(HypothesisViolationError):
            orthogonality_report(make_singlet_product(1), "two-common", l=1, lp=2)

    def test_unknown_scenario(self):
        with pytest.raises(ValueError):
            orthogonality_report(make_cat(2), "bogus")
