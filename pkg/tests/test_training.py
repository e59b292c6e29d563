import math
from dataclasses import replace

import numpy as np
import pytest

from liftwave.dwt2d import dwt2
from liftwave.lifting import build_filters, haar_base, solve_params, reference_h1
from liftwave.training import (
    DatasetSpec,
    LearningRates,
    TrainConfig,
    make_toy_dataset,
    stripe_image,
    train,
)


@pytest.fixture(scope="module")
def default_report():
    return train(TrainConfig())


def test_dataset_sizes():
    d = make_toy_dataset(DatasetSpec(classes=4, image_size=16, samples_per_class=50), seed=7)
    assert len(d.x_train) == 160 and len(d.x_test) == 40
    assert d.x_train.shape[1:] == (1, 16, 16)
    assert np.bincount(d.y_train).tolist() == [40] * 4
    assert np.bincount(d.y_test).tolist() == [10] * 4


def test_dataset_deterministic():
    a = make_toy_dataset(DatasetSpec(), 7)
    b = make_toy_dataset(DatasetSpec(), 7)
    for u, v in zip((a.x_train, a.y_train, a.x_test, a.y_test),
                    (b.x_train, b.y_train, b.x_test, b.y_test)):
        assert u.tobytes() == v.tobytes()
    c = make_toy_dataset(DatasetSpec(), 8)
    assert c.x_train.tobytes() != a.x_train.tobytes()


def test_class0_is_horizontal_stripes():
    d = make_toy_dataset(DatasetSpec(), 7)
    fp = haar_base()
    subs = [dwt2(x[0], fp) for x in d.x_train[d.y_train == 0]]
    lh = np.mean([np.sum(s.lh ** 2) for s in subs])
    hl = np.mean([np.sum(s.hl ** 2) for s in subs])
    assert lh > 10 * hl


def test_stripe_orientation():
    img = stripe_image(0.0, 4.0, 8, 0.3)
    assert np.allclose(img, img[:, :1])  # constant along each row


def test_invalid_specs():
    for bad in (DatasetSpec(classes=1), DatasetSpec(image_size=15), DatasetSpec(samples_per_class=0),
                DatasetSpec(noise=-1.0), DatasetSpec(train_fraction=1.0)):
        with pytest.raises(ValueError):
            make_toy_dataset(bad, 0)


def test_default_training_reaches_targets(default_report):
    r = default_report
    assert not r.diverged
    assert len(r.loss) == 50
    assert r.train_accuracy[-1] >= 0.95
    assert r.test_accuracy[-1] >= 0.85
    assert r.loss[-1] <= r.loss[0] <= r.initial_loss


def test_tuned_filter_keeps_high_pass_structure(default_report):
    h1 = np.array(default_report.h1)
    assert abs(h1.sum()) < 1e-12
    assert abs(abs(h1 @ (-1.0) ** np.arange(h1.size)) - math.sqrt(2)) < 1e-12
    np.testing.assert_allclose(h1, build_filters(default_report.final_a).h1, atol=0)


def test_lifting_parameters_move(default_report):
    assert np.abs(np.subtract(default_report.final_a, default_report.initial_a)).max() > 1e-3


def test_bior15_initialization(default_report):
    expected = solve_params(reference_h1("bior1.5"), 2).params.a
    np.testing.assert_allclose(default_report.initial_a, expected, atol=1e-15)
    np.testing.assert_allclose(default_report.initial_a, [405 / 2357, -166 / 7071], atol=1e-12)


def small_config(**kw):
    base = TrainConfig(epochs=3, dataset=DatasetSpec(samples_per_class=10))
    return replace(base, **kw)


def strip_clock(report):
    d = report.to_dict()
    d.pop("wall_clock_s")
    return d


def test_deterministic():
    assert strip_clock(train(small_config())) == strip_clock(train(small_config()))


def test_zero_learning_rate_constant_loss():
    r = train(small_config(lr=LearningRates(0.0, 0.0, 0.0)))
    assert r.loss == [r.initial_loss] * 3
    assert r.final_a == r.initial_a


@pytest.mark.parametrize("init, steps", [("haar", 1), ("haar", 3), ("bior1.3", 1), ("near-zero-a3", 3)])
def test_init_modes(init, steps):
    r = train(small_config(init=init, steps=steps))
    assert len(r.initial_a) == steps
    if init == "near-zero-a3":
        assert r.initial_a[2] == 1e-3


def test_config_validation():
    with pytest.raises(ValueError, match="steps"):
        train(small_config(init="bior1.3", steps=2))
    with pytest.raises(ValueError):
        train(small_config(epochs=0))
    with pytest.raises(ValueError):
        train(small_config(lr=LearningRates(-1.0)))


def test_divergence_reported():
    r = train(small_config(lr=LearningRates(1e6, 1e6, 1e6)))
    assert r.diverged
    assert r.diverged_epoch is not None
    assert len(r.loss) == r.diverged_epoch < 3


def test_config_round_trip():
    cfg = small_config(init="haar", steps=4)
    assert TrainConfig.from_dict(cfg.to_dict()) == cfg
