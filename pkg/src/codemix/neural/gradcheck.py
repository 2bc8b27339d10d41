import numpy as np


def _central_difference(model, batch, name, i, eps):
    flat = model.params[name].reshape(-1)
    orig = flat[i]
    flat[i] = orig + eps
    up = model.loss(batch)
    flat[i] = orig - eps
    down = model.loss(batch)
    flat[i] = orig
    return float((up - down) / (2 * flat.dtype.type(eps)))


def _rel_error(a, n):
    return abs(a - n) / max(abs(a), abs(n), 1e-8)


def gradient_check(model, batch, eps=1e-5, extended=True, recheck_above=1e-6):
    """Max relative error between analytic and central-difference gradients.

    Error per entry is ``|a - n| / max(|a|, |n|, 1e-8)``. The analytic side
    runs in float64. For gradient entries around 1e-7 the float64 round-off
    in ``loss(p + eps) - loss(p - eps)`` is of the same order as the signal,
    so with ``extended`` any entry whose error exceeds ``recheck_above`` has
    its finite difference recomputed on a ``np.longdouble`` copy of the
    parameters. On platforms where longdouble is float64 this is a no-op.
    """
    _, analytic = model.loss_and_grads(batch)
    model = model.with_params({k: v.copy() for k, v in model.params.items()})
    probe = None
    worst = 0.0
    for name, p in model.params.items():
        a_flat = analytic[name].reshape(-1)
        for i in range(p.size):
            a = float(a_flat[i])
            err = _rel_error(a, _central_difference(model, batch, name, i, eps))
            if extended and err > recheck_above:
                if probe is None:
                    probe = model.with_params(
                        {k: v.astype(np.longdouble) for k, v in model.params.items()})
                err = _rel_error(a, _central_difference(probe, batch, name, i, eps))
            worst = max(worst, err)
    return worst
