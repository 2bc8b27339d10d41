"""Adam and RMSProp over flat parameter dicts."""

from dataclasses import asdict, dataclass, field

import numpy as np

from ..exceptions import ConfigError, ShapeError

ADAM = "adam"
RMSPROP = "rmsprop"
BINARY_CE = "binary_ce"
CATEGORICAL_CE = "categorical_ce"


@dataclass
class TrainConfig:
    epochs: int = 100
    batch_size: int = 64
    optimizer: str = RMSPROP
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    rho: float = 0.9
    epsilon: float = 1e-8
    loss: str = CATEGORICAL_CE
    seed: int = 0
    shuffle: bool = True
    clip_norm: float = None

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be > 0")
        if self.optimizer not in (ADAM, RMSPROP):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if self.loss not in (BINARY_CE, CATEGORICAL_CE):
            raise ConfigError(f"unknown loss {self.loss!r}")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")

    def to_dict(self):
        return asdict(self)


@dataclass
class OptimizerState:
    first: dict = field(default_factory=dict)
    second: dict = field(default_factory=dict)
    step: int = 0


def optimizer_step(state, params, grads, config):
    """Apply one update and return a new parameter dict; ``state`` is mutated."""
    if set(grads) != set(params):
        raise ShapeError(f"gradient keys {sorted(set(grads) ^ set(params))} do not match params")
    state.step += 1
    t = state.step
    lr = config.learning_rate
    eps = config.epsilon
    new = {}
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ShapeError(f"{name}: gradient {g.shape} vs parameter {p.shape}")
        v = state.second.get(name)
        if v is None:
            v = np.zeros_like(p)
        if config.optimizer == ADAM:
            m = state.first.get(name)
            if m is None:
                m = np.zeros_like(p)
            m = config.beta1 * m + (1.0 - config.beta1) * g
            v = config.beta2 * v + (1.0 - config.beta2) * g * g
            m_hat = m / (1.0 - config.beta1 ** t)
            v_hat = v / (1.0 - config.beta2 ** t)
            new[name] = p - lr * m_hat / (np.sqrt(v_hat) + eps)
            state.first[name] = m
        else:
            v = config.rho * v + (1.0 - config.rho) * g * g
            new[name] = p - lr * g / (np.sqrt(v) + eps)
        state.second[name] = v
    return new


def clip_by_global_norm(grads, max_norm):
    total = np.sqrt(sum(float((g * g).sum()) for g in grads.values()))
    if total <= max_norm or total == 0.0:
        return grads
    scale = max_norm / total
    return {k: g * scale for k, g in grads.items()}
