"""Generators: Zipf priors, the classifier benchmark, random instances."""

import numpy as np
import pytest

from querytree.datagen import random_instance, synthetic_classifier_instance, zipf_prior
from querytree.errors import DomainError, GenerationFailedError
from querytree.instance import check_identifiability, validate_instance


class TestZipfPrior:
    def test_beta_zero_is_uniform(self):
        for seed in (0, 1, 12345):
            prior, _ = zipf_prior(4, 0.0, seed)
            assert np.allclose(prior, 0.25, atol=1e-15)

    def test_two_objects_beta_one(self):
        # unpermuted weights (1, 1/2) normalize to (2/3, 1/3)
        prior, perm = zipf_prior(2, 1.0, seed=3)
        assert sorted(prior, reverse=True) == pytest.approx([2 / 3, 1 / 3], abs=1e-15)
        assert prior[perm[0]] == pytest.approx(2 / 3, abs=1e-15)

    def test_large_beta_concentrates(self):
        prior, _ = zipf_prior(3, 50.0, seed=8)
        assert prior.max() >= 1 - 1e-9

    def test_sorted_values_equal_unpermuted_weights(self):
        M, beta = 9, 1.7
        prior, perm = zipf_prior(M, beta, seed=42)
        weights = np.arange(1, M + 1, dtype=float) ** (-beta)
        weights /= weights.sum()
        assert np.allclose(np.sort(prior)[::-1], weights, atol=1e-15)
        assert np.allclose(prior[perm], weights, atol=1e-15)
        assert abs(prior.sum() - 1.0) <= 1e-12

    def test_deterministic(self):
        a, pa = zipf_prior(12, 0.8, seed=7)
        b, pb = zipf_prior(12, 0.8, seed=7)
        assert (a == b).all() and (pa == pb).all()

    def test_negative_beta_rejected(self):
        with pytest.raises(DomainError):
            zipf_prior(4, -0.1, seed=0)


class TestClassifierInstance:
    def test_paper_scale_counts(self):
        inst = synthetic_classifier_instance(25, 1.0)
        assert inst.num_objects == 100
        assert inst.num_queries == 676

    def test_minimal_instance(self):
        inst = synthetic_classifier_instance(1, 0.0)
        assert inst.num_objects == 4 and inst.num_queries == 4
        assert np.allclose(inst.prior, 0.25)
        assert validate_instance(inst) == []
        assert check_identifiability(inst, "object") is None

    def test_beta_zero_uniform(self):
        inst = synthetic_classifier_instance(7, 0.0)
        assert np.allclose(inst.prior, 1.0 / 28.0)

    def test_no_degenerate_columns(self):
        for c in (1, 2, 5):
            inst = synthetic_classifier_instance(c, 1.0)
            sums = inst.responses.sum(axis=0)
            assert (sums > 0).all() and (sums < inst.num_objects).all()

    def test_identifiable_and_valid(self):
        inst = synthetic_classifier_instance(5, 1.0)
        assert validate_instance(inst) == []
        assert check_identifiability(inst, "object") is None

    def test_prior_ranks_by_threshold_distance(self):
        # thresholds for c_count=5 are -2..2; the four |c|=0 classifiers get
        # the top Zipf weights
        inst = synthetic_classifier_instance(5, 1.0)
        near_axis = [i for i, name in enumerate(inst.object_names) if "(0)" in name]
        assert len(near_axis) == 4
        top4 = np.argsort(inst.prior)[::-1][:4]
        assert set(top4) == set(near_axis)

    def test_deterministic_regardless_of_seed(self):
        a = synthetic_classifier_instance(3, 1.0, seed=1)
        b = synthetic_classifier_instance(3, 1.0, seed=999)
        assert (a.responses == b.responses).all() and (a.prior == b.prior).all()


class TestRandomInstance:
    def test_two_objects_one_query_forced(self):
        inst = random_instance(2, 1, 0.5, seed=0, mode="object")
        assert inst.responses[0, 0] != inst.responses[1, 0]

    def test_deterministic(self):
        a = random_instance(8, 10, 0.5, seed=33)
        b = random_instance(8, 10, 0.5, seed=33)
        assert (a.responses == b.responses).all() and (a.prior == b.prior).all()

    def test_round_robin_labels(self):
        inst = random_instance(6, 8, 0.5, seed=4, mode="group", group_count=3)
        assert inst.labels == (1, 2, 3, 1, 2, 3)

    def test_generated_instances_are_valid(self):
        rng = np.random.default_rng(5050)
        for k in range(10):
            mode = "object" if k % 2 else "group"
            inst = random_instance(
                8, 10, 0.5, seed=int(rng.integers(1 << 31)),
                mode=mode, group_count=2 if mode == "group" else None,
            )
            assert validate_instance(inst) == []
            assert check_identifiability(inst, mode) is None

    def test_generation_failure(self):
        # 9 objects cannot have distinct rows over 3 queries (2**3 = 8)
        with pytest.raises(GenerationFailedError):
            random_instance(9, 3, 0.5, seed=1, mode="object")

    def test_argument_validation(self):
        with pytest.raises(DomainError):
            random_instance(4, 4, 0.0, seed=1)
        with pytest.raises(DomainError):
            random_instance(4, 4, 0.5, seed=1, mode="group", group_count=9)
