"""Deterministic Adam trainer for the projection model.

Defaults mirror the reference configuration: batch 64, learning rate 1e-5
after 100 linear warm-up steps, 8 epochs, dev evaluation every 1000 steps.
The returned model is the checkpoint with the minimum development loss
among the evaluations (the final step is always evaluated).
"""

from dataclasses import dataclass

import numpy as np

from amrsim.decompose import ProjectionModel, global_loss, gradients


class TrainingDiverged(RuntimeError):
    """Raised when the loss stops being finite."""


@dataclass
class TrainConfig:
    lr: float = 1e-5
    warmup: int = 100
    epochs: int = 8
    batch: int = 64
    eval_every: int = 1000
    seed: int = 0
    alpha: float = 1.0
    cons_weight: float = 1.0  # 0 trains without the consistency objective


@dataclass
class EvalPoint:
    step: int
    dev_loss: float
    dev_decomposition: float
    dev_consistency: float


class _Adam:
    def __init__(self, shape, beta1=0.9, beta2=0.999, eps=1e-8):
        self.m = np.zeros(shape)
        self.v = np.zeros(shape)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0

    def step(self, grad, lr):
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad * grad
        mhat = self.m / (1 - self.beta1**self.t)
        vhat = self.v / (1 - self.beta2**self.t)
        return lr * mhat / (np.sqrt(vhat) + self.eps)


def _dev_losses(model, dev, alpha, cons_weight):
    e1, e2, m = dev
    total = global_loss(model, e1, e2, m, alpha=alpha, cons_weight=cons_weight)
    dec = global_loss(model, e1, e2, m, alpha=1.0, cons_weight=0.0)
    cons = global_loss(model, e1, e2, m, alpha=0.0, cons_weight=1.0)
    return total, dec, cons


def train(model: ProjectionModel, train_data, dev_data, config: TrainConfig = None):
    """Train on (E1, E2, M) arrays; returns (best model, eval history).

    Deterministic for a fixed seed.  Zero epochs return the model
    unchanged with an empty history.
    """
    cfg = config or TrainConfig()
    e1, e2, m = (np.asarray(a, dtype=np.float64) for a in train_data)
    n = e1.shape[0]
    if n == 0:
        raise ValueError("training data is empty")
    model = model.copy()
    opt_w = _Adam(model.W.shape)
    opt_b = _Adam(model.betas.shape)
    rng = np.random.default_rng(cfg.seed)
    history = []
    best = model.copy()
    best_loss = np.inf
    step = 0

    def evaluate():
        nonlocal best, best_loss
        dev_loss, dec, cons = _dev_losses(model, dev_data, cfg.alpha, cfg.cons_weight)
        history.append(EvalPoint(step, dev_loss, dec, cons))
        if dev_loss < best_loss:
            best_loss = dev_loss
            best = model.copy()

    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        for lo in range(0, n, cfg.batch):
            idx = order[lo : lo + cfg.batch]
            step += 1
            lr = cfg.lr * min(1.0, step / cfg.warmup) if cfg.warmup > 0 else cfg.lr
            dw, db = gradients(model, e1[idx], e2[idx], m[idx],
                               alpha=cfg.alpha, cons_weight=cfg.cons_weight)
            if not (np.all(np.isfinite(dw)) and np.all(np.isfinite(db))):
                raise TrainingDiverged("non-finite gradient at step %d" % step)
            model.W -= opt_w.step(dw, lr)
            model.betas -= opt_b.step(db, lr)
            if cfg.eval_every > 0 and step % cfg.eval_every == 0:
                loss = history and history[-1].dev_loss
                evaluate()
                if not np.isfinite(history[-1].dev_loss):
                    raise TrainingDiverged(
                        "dev loss %r at step %d (previous %r)"
                        % (history[-1].dev_loss, step, loss)
                    )
    if step > 0 and (not history or history[-1].step != step):
        evaluate()
        if not np.isfinite(history[-1].dev_loss):
            raise TrainingDiverged("dev loss %r at final step %d"
                                   % (history[-1].dev_loss, step))
    return (best if history else model), history
