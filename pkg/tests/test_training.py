import numpy as np
import pytest

from excitation.data import synth_clusters
from excitation.errors import InputError
from excitation.modulation import ExcitationConfig
from excitation.optimizers import OptimizerConfig
from excitation.topk_mlp import ModelConfig
from excitation.training import evaluate, train_loop


def small_data(n=100, d=6, classes=4, spread=0.5, seed=0):
    return synth_clusters(seed=seed, n=n, d=d, classes=classes, spread=spread)


MODEL = ModelConfig(input_dim=6, width=8, depth=2, classes=4, sparsity=0.5)
SGD = OptimizerConfig(kind="sgd", lr=0.05)


def run(variant, *, excitation=True, seed=0, epochs=2, model=MODEL, opt=SGD, **kw):
    exc = ExcitationConfig(variant=variant) if excitation else None
    return train_loop(
        model, opt, exc, small_data(), epochs=epochs, batch_size=25, seed=seed, **kw
    )


def tensors_equal(a, b):
    return all(np.array_equal(x, y) for x, y in zip(a.tensors(), b.tensors()))


class TestEquivalences:
    def test_variant_none_bitwise_equals_disabled_module(self):
        """phi == 1 through the excited path must cost nothing numerically."""
        with_module = run("none", excitation=True)
        without_module = run("none", excitation=False)
        assert tensors_equal(with_module.params, without_module.params)

    def test_zerosum_at_zero_sparsity_bitwise_equals_none(self):
        # dense routing puts every expert in every batch, u == 1, phi == 1
        dense = ModelConfig(input_dim=6, width=8, depth=2, classes=4, sparsity=0.0)
        a = run("zerosum", model=dense)
        b = run("none", model=dense)
        assert tensors_equal(a.params, b.params)

    def test_zerosum_differs_from_none_when_sparse(self):
        a = run("zerosum")
        b = run("none")
        assert not tensors_equal(a.params, b.params)


class TestReproducibility:
    @pytest.mark.parametrize("variant", ["none", "zerosum", "random_boost"])
    def test_same_seed_bitwise_identical(self, variant):
        a = run(variant, seed=3)
        b = run(variant, seed=3)
        assert tensors_equal(a.params, b.params)
        assert [p.train_loss for p in a.eval_points] == [
            p.train_loss for p in b.eval_points
        ]

    def test_different_seed_differs(self):
        a = run("none", seed=3)
        b = run("none", seed=4)
        assert not tensors_equal(a.params, b.params)

    def test_variants_share_init_and_batch_order(self):
        """First-step batch loss is computed before any update, so it must be
        identical across variants run from the same seed."""
        a = run("none", epochs=1, eval_every=1)
        b = run("random_boost", epochs=1, eval_every=1)
        assert a.eval_points[0].train_loss == b.eval_points[0].train_loss
        assert a.eval_points[1].train_loss != b.eval_points[1].train_loss


class TestEvalCadence:
    # 100 samples / batch 25 -> 4 steps per epoch

    def test_per_epoch_when_eval_every_zero(self):
        result = run("none", epochs=3, eval_every=0)
        assert [p.step for p in result.eval_points] == [4, 8, 12]
        assert [p.epoch for p in result.eval_points] == [0, 1, 2]

    def test_step_cadence_with_final_flush(self):
        result = run("none", epochs=3, eval_every=5)
        assert [p.step for p in result.eval_points] == [5, 10, 12]

    def test_on_eval_streams_the_same_points(self):
        seen = []
        result = run("none", epochs=2, eval_every=0, on_eval=seen.append)
        assert seen == result.eval_points

    def test_dev_metrics_attached_when_eval_set_given(self):
        dev = small_data(n=40, seed=9)
        result = run("none", epochs=1, eval_set=dev)
        point = result.eval_points[-1]
        assert point.dev is not None
        assert len(point.dev.entropy) == MODEL.depth
        assert 0.0 <= point.dev.accuracy <= 1.0
        direct = evaluate(result.params, MODEL, dev)
        assert point.dev.loss == direct.loss

    def test_dev_absent_otherwise(self):
        result = run("none", epochs=1)
        assert result.eval_points[-1].dev is None


class TestPhiReporting:
    def test_disabled_module_reports_unit_phi(self):
        result = run("none", excitation=False, epochs=1)
        point = result.eval_points[-1]
        assert point.phi_min == [1.0, 1.0]
        assert point.phi_mean == [1.0, 1.0]
        assert point.phi_max == [1.0, 1.0]

    def test_zerosum_phi_brackets_one(self):
        result = run("zerosum", epochs=1)
        point = result.eval_points[-1]
        for lo, mid, hi in zip(point.phi_min, point.phi_mean, point.phi_max):
            assert lo <= 1.0 <= hi
            assert abs(mid - 1.0) < 1e-9

    def test_positivesum_phi_floor_is_one(self):
        result = run("positivesum", epochs=1)
        assert all(lo >= 1.0 for lo in result.eval_points[-1].phi_min)


class TestDivergence:
    @pytest.mark.filterwarnings("ignore:overflow", "ignore:invalid value")
    def test_huge_lr_marks_diverged_without_raising(self):
        result = run("none", opt=OptimizerConfig(kind="sgd", lr=1e120), epochs=5)
        assert result.diverged
        assert result.divergence_step is not None
        assert result.steps < 20

    def test_healthy_run_not_marked(self):
        result = run("none")
        assert not result.diverged
        assert result.divergence_step is None


class TestSchedules:
    def test_cosine_lr_decreases_across_eval_points(self):
        result = run("none", epochs=4, schedule="cosine")
        lrs = [p.lr for p in result.eval_points]
        assert all(a > b for a, b in zip(lrs, lrs[1:]))
        assert lrs[0] < SGD.lr  # already decayed by the end of epoch one

    def test_constant_lr_flat(self):
        result = run("none", epochs=3)
        assert {p.lr for p in result.eval_points} == {SGD.lr}


class TestValidation:
    def test_class_mismatch_rejected(self):
        bad = ModelConfig(input_dim=6, width=8, depth=1, classes=7, sparsity=0.5)
        with pytest.raises(InputError):
            train_loop(bad, SGD, None, small_data(), epochs=1, batch_size=25, seed=0)

    def test_epoch_and_cadence_validation(self):
        with pytest.raises(InputError):
            run("none", epochs=0)
        with pytest.raises(InputError):
            run("none", eval_every=-1)

    def test_training_reduces_loss(self):
        result = run("none", epochs=8)
        losses = [p.train_loss for p in result.eval_points]
        assert losses[-1] < losses[0]
