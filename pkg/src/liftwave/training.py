"""Small deterministic training loop for the wavelet unit.

The model is ``unit -> flatten -> linear -> softmax`` trained with plain
SGD on synthetic stripe textures.  Everything is driven by one seed, so a
config always produces the same report.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
import math
import time

import numpy as np

from . import lifting
from .lifting import LiftingParams, build_filters
from .unit import WaveletUnitParams, unit_backward, unit_forward

# (angle in degrees measured from the row axis, period in pixels) per class.
# Class 0 varies along rows only (horizontal stripes), class 1 along columns.
STRIPE_CLASSES = (
    (0.0, 3.0),
    (90.0, 3.0),
    (45.0, 2.83),
    (135.0, 8.0),
    (0.0, 6.0),
    (90.0, 6.0),
    (45.0, 5.0),
    (135.0, 4.0),
)


@dataclass
class DatasetSpec:
    classes: int = 4
    image_size: int = 16
    samples_per_class: int = 50
    noise: float = 0.1
    train_fraction: float = 0.8

    def validate(self):
        if not 2 <= self.classes <= len(STRIPE_CLASSES):
            raise ValueError(f"classes must be in [2, {len(STRIPE_CLASSES)}]")
        if self.image_size < 2 or self.image_size % 2:
            raise ValueError("image_size must be even and >= 2")
        if self.samples_per_class < 1:
            raise ValueError("samples_per_class must be positive")
        if self.noise < 0:
            raise ValueError("noise must be nonnegative")
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must lie in (0, 1)")


@dataclass
class ToyDataset:
    x_train: np.ndarray  # (n, 1, S, S)
    y_train: np.ndarray
    x_test: np.ndarray
    y_test: np.ndarray


def stripe_image(angle_deg: float, period: float, size: int, phase: float) -> np.ndarray:
    """Sinusoidal stripes in ``[0, 1]``; ``angle=0`` gives horizontal stripes."""
    r, c = np.mgrid[0:size, 0:size].astype(float)
    t = math.radians(angle_deg)
    coord = r * math.cos(t) + c * math.sin(t)
    return 0.5 + 0.5 * np.sin(2 * np.pi * coord / period + phase)


def make_toy_dataset(spec: DatasetSpec, seed: int) -> ToyDataset:
    spec.validate()
    rng = np.random.default_rng(seed)
    n = spec.samples_per_class
    S = spec.image_size
    images = np.empty((spec.classes, n, 1, S, S))
    for k in range(spec.classes):
        angle, period = STRIPE_CLASSES[k]
        for i in range(n):
            phase = rng.uniform(0, 2 * np.pi)
            images[k, i, 0] = stripe_image(angle, period, S, phase)
    images += spec.noise * rng.standard_normal(images.shape)

    # per-class split keeps both parts balanced
    n_train = int(round(spec.train_fraction * n))
    train_idx, test_idx = [], []
    for k in range(spec.classes):
        order = rng.permutation(n) + k * n
        train_idx.append(order[:n_train])
        test_idx.append(order[n_train:])
    flat = images.reshape((-1, 1, S, S))
    labels = np.repeat(np.arange(spec.classes), n)
    tr = rng.permutation(np.concatenate(train_idx))
    te = np.concatenate(test_idx)
    return ToyDataset(flat[tr], labels[tr], flat[te], labels[te])


@dataclass
class LearningRates:
    lifting: float = 0.01
    combiner: float = 0.1
    classifier: float = 0.1


@dataclass
class TrainConfig:
    seed: int = 7
    steps: int = 2
    init: str = "bior1.5"
    a3: float = lifting.NEAR_ZERO_A3
    lr: LearningRates = field(default_factory=LearningRates)
    epochs: int = 50
    batch_size: int = 16
    use_bias: bool = True
    dataset: DatasetSpec = field(default_factory=DatasetSpec)

    def validate(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")
        for name, v in asdict(self.lr).items():
            if v < 0 or not math.isfinite(v):
                raise ValueError(f"lr.{name} must be finite and nonnegative")
        if self.init not in lifting.INIT_MODES:
            raise ValueError(f"unknown init mode {self.init!r}")
        if self.init != "haar" and len(self.initial_lifting().a) != self.steps:
            raise ValueError(f"init {self.init!r} does not have {self.steps} steps")
        self.dataset.validate()

    def initial_lifting(self) -> LiftingParams:
        return lifting.init_params(self.init, a3=self.a3, steps=self.steps)

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        d = dict(d)
        lr = LearningRates(**d.pop("lr", {}))
        ds = DatasetSpec(**d.pop("dataset", {}))
        return cls(lr=lr, dataset=ds, **d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrainReport:
    loss: list[float]
    train_accuracy: list[float]
    test_accuracy: list[float]
    initial_loss: float
    initial_a: list[float]
    final_a: list[float]
    h0: list[float]
    h1: list[float]
    combiner_weights: list[list[float]]
    combiner_bias: list[float]
    wall_clock_s: float
    diverged: bool = False
    diverged_epoch: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


class Model:
    """Wavelet unit followed by a linear softmax classifier."""

    def __init__(self, unit: WaveletUnitParams, W: np.ndarray, b: np.ndarray):
        self.unit = unit
        self.W = W
        self.b = b

    def logits(self, x):
        y, cache = unit_forward(x, self.unit)
        feats = y.reshape(len(x), -1)
        return feats @ self.W.T + self.b, feats, cache

    def loss_and_grads(self, x, labels):
        z, feats, cache = self.logits(x)
        logp = _log_softmax(z)
        n = len(x)
        loss = -np.mean(logp[np.arange(n), labels])
        dz = np.exp(logp)
        dz[np.arange(n), labels] -= 1.0
        dz /= n
        dW = dz.T @ feats
        db = dz.sum(axis=0)
        dy = (dz @ self.W).reshape(cache.subbands.shape[:-3] + cache.subbands.shape[-2:])
        g = unit_backward(dy, cache, self.unit)
        return loss, (dW, db, g)

    def evaluate(self, x, labels):
        z = self.logits(x)[0]
        loss = -np.mean(_log_softmax(z)[np.arange(len(x)), labels])
        acc = float(np.mean(np.argmax(z, axis=1) == labels))
        return float(loss), acc


def _log_softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def init_model(cfg: TrainConfig, rng: np.random.Generator) -> Model:
    S = cfg.dataset.image_size
    unit = WaveletUnitParams.initial(cfg.initial_lifting(), channels=1, use_bias=cfg.use_bias)
    n_feat = (S // 2) ** 2
    W = 0.01 * rng.standard_normal((cfg.dataset.classes, n_feat))
    return Model(unit, W, np.zeros(cfg.dataset.classes))


def train(cfg: TrainConfig) -> TrainReport:
    """Run SGD and record full-training-set loss/accuracy after each epoch."""
    cfg.validate()
    start = time.perf_counter()
    data = make_toy_dataset(cfg.dataset, cfg.seed)
    rng = np.random.default_rng([cfg.seed, 1])
    model = init_model(cfg, rng)
    initial_a = list(model.unit.lifting.a)
    initial_loss, _ = model.evaluate(data.x_train, data.y_train)

    losses, train_acc, test_acc = [], [], []
    diverged_epoch = None
    n = len(data.x_train)
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        for s in range(0, n, cfg.batch_size):
            idx = order[s:s + cfg.batch_size]
            with np.errstate(over="ignore", invalid="ignore"):
                batch_loss, (dW, db, g) = model.loss_and_grads(data.x_train[idx], data.y_train[idx])
            model.W = model.W - cfg.lr.classifier * dW
            model.b = model.b - cfg.lr.classifier * db
            unit = model.unit
            new_a = unit.lifting.as_array() - cfg.lr.lifting * g.d_lifting
            if not (math.isfinite(batch_loss) and np.all(np.isfinite(new_a))
                    and np.all(np.isfinite(model.W))):
                diverged_epoch = epoch
                break
            model.unit = unit.with_updates(
                lifting=LiftingParams(tuple(new_a)),
                weights=unit.weights - cfg.lr.combiner * g.d_weights,
                bias=unit.bias - cfg.lr.combiner * g.d_bias,
            )
        if diverged_epoch is not None:
            break
        with np.errstate(over="ignore", invalid="ignore"):
            loss, acc = model.evaluate(data.x_train, data.y_train)
        if not math.isfinite(loss):
            diverged_epoch = epoch
            break
        losses.append(loss)
        train_acc.append(acc)
        test_acc.append(model.evaluate(data.x_test, data.y_test)[1])

    fp = build_filters(model.unit.lifting)
    return TrainReport(
        loss=losses,
        train_accuracy=train_acc,
        test_accuracy=test_acc,
        initial_loss=initial_loss,
        initial_a=initial_a,
        final_a=list(model.unit.lifting.a),
        h0=fp.h0.tolist(),
        h1=fp.h1.tolist(),
        combiner_weights=model.unit.weights.tolist(),
        combiner_bias=model.unit.bias.tolist(),
        wall_clock_s=time.perf_counter() - start,
        diverged=diverged_epoch is not None,
        diverged_epoch=diverged_epoch,
    )
