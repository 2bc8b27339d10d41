"""LSTM cells and stacks with full backpropagation through time.

Everything is batched along axis 1: sequences are ``(T, B, features)`` and a
``(T, B)`` mask marks real steps. On masked steps a layer carries its previous
state forward unchanged, so the state after the last step is the state after
each sequence's last real character.

Gate order inside the stacked ``4*hidden`` weights is input, forget, cell,
output.
"""

from dataclasses import dataclass

import numpy as np

from ..exceptions import EmptyInput, ShapeError

INIT_SCALE = 0.08


def sigmoid(x):
    # tanh form never overflows
    return 0.5 * (1.0 + np.tanh(0.5 * x))


@dataclass(frozen=True)
class LstmLayerParams:
    """Weights of one LSTM layer: ``W`` (4H x I), ``U`` (4H x H), ``b`` (4H)."""

    W: np.ndarray
    U: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        four_h = self.U.shape[0]
        if (four_h % 4 or self.U.shape != (four_h, four_h // 4)
                or self.W.shape[0] != four_h or self.b.shape != (four_h,)):
            raise ShapeError(
                f"inconsistent LSTM shapes W{self.W.shape} U{self.U.shape} b{self.b.shape}")

    @property
    def input_dim(self):
        return self.W.shape[1]

    @property
    def hidden_dim(self):
        return self.U.shape[1]

    @classmethod
    def init(cls, input_dim, hidden_dim, rng=None, zeros=False):
        """Uniform(-0.08, 0.08) weights with the forget-gate bias set to 1."""
        if zeros:
            W = np.zeros((4 * hidden_dim, input_dim))
            U = np.zeros((4 * hidden_dim, hidden_dim))
        else:
            W = rng.uniform(-INIT_SCALE, INIT_SCALE, (4 * hidden_dim, input_dim))
            U = rng.uniform(-INIT_SCALE, INIT_SCALE, (4 * hidden_dim, hidden_dim))
        b = np.zeros(4 * hidden_dim)
        b[hidden_dim:2 * hidden_dim] = 1.0
        return cls(W, U, b)

    @classmethod
    def from_params(cls, params, prefix):
        return cls(params[prefix + ".W"], params[prefix + ".U"], params[prefix + ".b"])

    def to_params(self, prefix):
        return {prefix + ".W": self.W, prefix + ".U": self.U, prefix + ".b": self.b}


def lstm_cell_forward(layer, x, h_prev, c_prev):
    """One LSTM step. Accepts vectors or ``(B, dim)`` batches."""
    x = np.asarray(x, dtype=float)
    h_prev = np.asarray(h_prev, dtype=float)
    c_prev = np.asarray(c_prev, dtype=float)
    H = layer.hidden_dim
    if x.shape[-1] != layer.input_dim or h_prev.shape[-1] != H or c_prev.shape[-1] != H:
        raise ShapeError(
            f"expected input {layer.input_dim} / hidden {H}, got "
            f"{x.shape[-1]} / {h_prev.shape[-1]} / {c_prev.shape[-1]}")
    z = x @ layer.W.T + h_prev @ layer.U.T + layer.b
    i = sigmoid(z[..., :H])
    f = sigmoid(z[..., H:2 * H])
    g = np.tanh(z[..., 2 * H:3 * H])
    o = sigmoid(z[..., 3 * H:])
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c


def layer_forward(layer, X, mask, h0=None, c0=None):
    """Run one layer over ``X`` (T, B, I). Returns outputs (T, B, H) and a cache."""
    T, B, _ = X.shape
    H = layer.hidden_dim
    if X.shape[2] != layer.input_dim:
        raise ShapeError(f"layer expects input dim {layer.input_dim}, got {X.shape[2]}")
    h = np.zeros((B, H)) if h0 is None else h0
    c = np.zeros((B, H)) if c0 is None else c0
    # input projections for all steps at once
    XW = X @ layer.W.T + layer.b
    dt = np.result_type(X, layer.W)
    hs = np.empty((T + 1, B, H), dtype=dt)
    cs = np.empty((T + 1, B, H), dtype=dt)
    gates = np.empty((T, B, 4 * H), dtype=dt)
    tanh_c = np.empty((T, B, H), dtype=dt)
    hs[0], cs[0] = h, c
    UT = layer.U.T
    full = mask.all(axis=1)
    for t in range(T):
        z = XW[t] + hs[t] @ UT
        act = sigmoid(z)
        act[:, 2 * H:3 * H] = np.tanh(z[:, 2 * H:3 * H])
        i, f, g, o = act[:, :H], act[:, H:2 * H], act[:, 2 * H:3 * H], act[:, 3 * H:]
        c_new = f * cs[t] + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        if full[t]:
            cs[t + 1] = c_new
            hs[t + 1] = h_new
        else:
            m = mask[t][:, None]
            cs[t + 1] = m * c_new + (1.0 - m) * cs[t]
            hs[t + 1] = m * h_new + (1.0 - m) * hs[t]
        gates[t] = act
        tanh_c[t] = tc
    cache = (layer, X, mask, hs, cs, gates, tanh_c)
    return hs[1:], cache


def layer_backward(cache, dY, dh_last=None, dc_last=None):
    """Backward pass of :func:`layer_forward`.

    ``dY`` is the loss gradient w.r.t. every output step; ``dh_last`` and
    ``dc_last`` are gradients w.r.t. the final state. Returns the gradient
    w.r.t. the inputs, the initial state, and the layer's weights.
    """
    layer, X, mask, hs, cs, gates, tanh_c = cache
    T, B, _ = X.shape
    H = layer.hidden_dim
    dW = np.zeros_like(layer.W)
    dU = np.zeros_like(layer.U)
    db = np.zeros_like(layer.b)
    dX = np.empty_like(X)
    dh_next = np.zeros((B, H)) if dh_last is None else dh_last.copy()
    dc_next = np.zeros((B, H)) if dc_last is None else dc_last.copy()
    for t in reversed(range(T)):
        m = mask[t][:, None]
        dh = dY[t] + dh_next
        i, f, g, o = (gates[t, :, k * H:(k + 1) * H] for k in range(4))
        tc = tanh_c[t]
        dh_new = m * dh
        dc_new = m * dc_next + dh_new * o * (1.0 - tc * tc)
        dz = np.concatenate([
            dc_new * g * i * (1.0 - i),
            dc_new * cs[t] * f * (1.0 - f),
            dc_new * i * (1.0 - g * g),
            dh_new * tc * o * (1.0 - o),
        ], axis=1)
        dW += dz.T @ X[t]
        dU += dz.T @ hs[t]
        db += dz.sum(axis=0)
        dX[t] = dz @ layer.W
        dh_next = dz @ layer.U + (1.0 - m) * dh
        dc_next = dc_new * f + (1.0 - m) * dc_next
    return dX, (dh_next, dc_next), LstmLayerParams(dW, dU, db)


def stack_forward(layers, X, mask, init_states=None):
    """Run stacked layers; returns top outputs, final ``(h, c)`` per layer, caches."""
    caches, finals = [], []
    out = X
    for k, layer in enumerate(layers):
        h0, c0 = (None, None) if init_states is None else init_states[k]
        out, cache = layer_forward(layer, out, mask, h0, c0)
        caches.append(cache)
        finals.append((cache[3][-1], cache[4][-1]))
    return out, finals, caches


def stack_backward(caches, dY_top, d_finals=None):
    """Backward through a stack.

    ``d_finals`` optionally gives ``(dh, dc)`` for each layer's final state.
    Returns gradient w.r.t. stack input, per-layer initial-state gradients,
    and per-layer weight gradients (bottom to top).
    """
    n = len(caches)
    d_init = [None] * n
    grads = [None] * n
    dY = dY_top
    for k in reversed(range(n)):
        dh_last, dc_last = (None, None) if d_finals is None or d_finals[k] is None else d_finals[k]
        dY, d_init[k], grads[k] = layer_backward(caches[k], dY, dh_last, dc_last)
    return dY, d_init, grads


def run_stack(layers, sequence):
    """Unbatched convenience wrapper over :func:`stack_forward`.

    ``sequence`` is a list of input vectors. Returns the top layer's hidden
    state at every step and the final ``(h, c)`` of every layer.
    """
    if len(sequence) == 0:
        raise EmptyInput("run_stack needs at least one step")
    X = np.asarray(sequence, dtype=float)
    if X.ndim != 2:
        raise ShapeError("sequence must be a list of equal-length vectors")
    if X.shape[1] != layers[0].input_dim:
        raise ShapeError(f"first layer expects {layers[0].input_dim} inputs, got {X.shape[1]}")
    mask = np.ones((X.shape[0], 1))
    out, finals, _ = stack_forward(layers, X[:, None, :], mask)
    return [h[0] for h in out], [(h[0], c[0]) for h, c in finals]
