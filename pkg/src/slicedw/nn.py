"""Minimal dense feed-forward networks with hand-written backpropagation.

Only what the training loop needs: affine layers with a handful of
activations, exact reverse-mode gradients, reconstruction losses, and
sgd/rmsprop parameter updates.  Everything runs in float64 so gradient
checks against central finite differences hold to tight tolerances.

Checkpoint format (``save_network``/``load_network``): a JSON document
``{"format_version": 1, "layers": [{"activation", "alpha", "weight",
"bias"}, ...]}`` with row-major nested lists for the parameter arrays.
Floats are serialised via ``repr`` and round-trip exactly.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

__all__ = [
    "ACTIVATIONS",
    "Layer",
    "DenseNetwork",
    "ForwardCache",
    "init_network",
    "forward",
    "backward",
    "recon_loss_and_grad",
    "RECON_LOSS_KINDS",
    "OptimizerState",
    "optimizer_step",
    "save_network",
    "load_network",
    "NumericalError",
    "CHECKPOINT_FORMAT_VERSION",
]

ACTIVATIONS = ("identity", "relu", "leaky_relu", "sigmoid")
RECON_LOSS_KINDS = ("squared", "l1", "bce", "bce_plus_l1")
CHECKPOINT_FORMAT_VERSION = 1


class NumericalError(RuntimeError):
    """A computation produced or received non-finite values."""


@dataclass
class Layer:
    weight: np.ndarray  # (out_dim, in_dim)
    bias: np.ndarray  # (out_dim,)
    activation: str = "identity"
    alpha: float = 0.2  # leaky_relu negative slope

    def __post_init__(self):
        self.weight = np.asarray(self.weight, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weight.ndim != 2:
            raise ValueError(f"layer weight must be 2-D, got shape {self.weight.shape}")
        if self.bias.shape != (self.weight.shape[0],):
            raise ValueError(
                f"bias shape {self.bias.shape} does not match weight rows {self.weight.shape[0]}"
            )
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}; expected one of {ACTIVATIONS}")
        if self.activation == "leaky_relu" and not 0.0 < self.alpha < 1.0:
            raise ValueError(f"leaky_relu slope must lie in (0, 1), got {self.alpha}")
        if not (np.all(np.isfinite(self.weight)) and np.all(np.isfinite(self.bias))):
            raise ValueError("layer parameters must be finite")

    @property
    def in_dim(self):
        return self.weight.shape[1]

    @property
    def out_dim(self):
        return self.weight.shape[0]


@dataclass
class DenseNetwork:
    layers: list

    def __post_init__(self):
        if not self.layers:
            raise ValueError("a network needs at least one layer")
        for prev, cur in zip(self.layers, self.layers[1:]):
            if prev.out_dim != cur.in_dim:
                raise ValueError(
                    f"layer dimensions do not chain: {prev.out_dim} -> {cur.in_dim}"
                )

    @property
    def in_dim(self):
        return self.layers[0].in_dim

    @property
    def out_dim(self):
        return self.layers[-1].out_dim

    def parameter_arrays(self):
        """Flat list of the parameter arrays, weights and biases interleaved."""
        out = []
        for layer in self.layers:
            out.append(layer.weight)
            out.append(layer.bias)
        return out


@dataclass
class ForwardCache:
    """Intermediate state of one forward pass, consumed by :func:`backward`."""

    net: DenseNetwork
    inputs: list = field(default_factory=list)  # layer inputs, per layer
    preacts: list = field(default_factory=list)  # pre-activation values, per layer


def init_network(layer_sizes, activations, rng, alpha=0.2):
    """Glorot-uniform initialised network: weights in +-sqrt(6/(fan_in+fan_out)), biases zero.

    ``layer_sizes`` lists the widths including input and output
    (``len(activations) == len(layer_sizes) - 1``).
    """
    sizes = [int(s) for s in layer_sizes]
    if len(sizes) < 2:
        raise ValueError("need at least an input and an output width")
    if any(s < 1 for s in sizes):
        raise ValueError(f"zero-width layer in {sizes}")
    activations = list(activations)
    if len(activations) != len(sizes) - 1:
        raise ValueError(
            f"expected {len(sizes) - 1} activations for {len(sizes)} widths, got {len(activations)}"
        )
    layers = []
    for fan_in, fan_out, act in zip(sizes, sizes[1:], activations):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weight = rng.uniform(-limit, limit, size=(fan_out, fan_in))
        layers.append(Layer(weight, np.zeros(fan_out), act, alpha))
    return DenseNetwork(layers)


def _activate(x, kind, alpha):
    if kind == "identity":
        return x
    if kind == "relu":
        return np.maximum(x, 0.0)
    if kind == "leaky_relu":
        return np.where(x >= 0.0, x, alpha * x)
    return expit(x)


def _activate_grad(pre, out, kind, alpha):
    if kind == "identity":
        return np.ones_like(pre)
    if kind == "relu":
        return (pre >= 0.0).astype(np.float64)
    if kind == "leaky_relu":
        return np.where(pre >= 0.0, 1.0, alpha)
    return out * (1.0 - out)  # sigmoid'(x) = s(x)(1 - s(x))


def forward(net, batch):
    """Run the network on a batch, returning ``(output, cache)``.

    ``batch`` is ``(m, in_dim)``; the cache feeds :func:`backward`.
    """
    x = np.asarray(batch, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != net.in_dim:
        raise ValueError(f"batch shape {x.shape} does not match network input width {net.in_dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("batch contains non-finite entries")
    cache = ForwardCache(net)
    for layer in net.layers:
        pre = x @ layer.weight.T + layer.bias
        cache.inputs.append(x)
        cache.preacts.append(pre)
        x = _activate(pre, layer.activation, layer.alpha)
    return x, cache


def backward(net, cache, grad_output):
    """Exact reverse-mode gradients of :func:`forward`.

    Parameters
    ----------
    net : DenseNetwork
    cache : ForwardCache
        Produced by a forward call on this same network.
    grad_output : ndarray, shape (m, out_dim)
        Gradient of the loss with respect to the network output.

    Returns
    -------
    (grads, grad_input)
        ``grads`` is a list of ``(d_weight, d_bias)`` pairs mirroring the
        layers; ``grad_input`` has the batch's shape and lets callers chain
        through composed networks (decoder into encoder).
    """
    if cache.net is not net or len(cache.inputs) != len(net.layers):
        raise ValueError("forward cache does not belong to this network")
    grad = np.asarray(grad_output, dtype=np.float64)
    if grad.shape != (cache.inputs[0].shape[0], net.out_dim):
        raise ValueError(
            f"grad_output shape {grad.shape} does not match cached batch "
            f"({cache.inputs[0].shape[0]}, {net.out_dim})"
        )
    grads = [None] * len(net.layers)
    for k in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[k]
        pre = cache.preacts[k]
        out = _activate(pre, layer.activation, layer.alpha)
        d_pre = grad * _activate_grad(pre, out, layer.activation, layer.alpha)
        grads[k] = (d_pre.T @ cache.inputs[k], d_pre.sum(axis=0))
        grad = d_pre @ layer.weight
    return grads, grad


def recon_loss_and_grad(x, y, kind="squared"):
    """Reconstruction loss between a batch and its reconstruction.

    squared
        mean over samples of the squared Euclidean gap ``|x_m - y_m|^2``.
    l1
        mean absolute gap over all elements.
    bce
        mean binary cross-entropy over all elements (targets ``x`` in
        [0, 1], predictions ``y`` strictly inside (0, 1)).
    bce_plus_l1
        sum of the two, the combination used with a sigmoid decoder.

    Returns ``(loss, grad)`` with ``grad`` the exact gradient with respect
    to ``y``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"x and y must have the same shape, got {x.shape} vs {y.shape}")
    if x.ndim != 2:
        raise ValueError(f"batches must be 2-D, got shape {x.shape}")
    if kind not in RECON_LOSS_KINDS:
        raise ValueError(f"unknown loss kind {kind!r}; expected one of {RECON_LOSS_KINDS}")
    m, d = x.shape
    if kind == "squared":
        diff = y - x
        return float(np.sum(diff * diff) / m), 2.0 * diff / m
    if kind == "l1":
        diff = y - x
        return float(np.abs(diff).mean()), np.sign(diff) / (m * d)
    # bce paths
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("bce targets must lie in [0, 1]")
    if np.any(y <= 0.0) or np.any(y >= 1.0):
        raise ValueError("bce predictions must lie strictly inside (0, 1); end the decoder in a sigmoid")
    bce = float(-np.mean(x * np.log(y) + (1.0 - x) * np.log(1.0 - y)))
    bce_grad = (-x / y + (1.0 - x) / (1.0 - y)) / (m * d)
    if kind == "bce":
        return bce, bce_grad
    diff = y - x
    return bce + float(np.abs(diff).mean()), bce_grad + np.sign(diff) / (m * d)


@dataclass
class OptimizerState:
    """sgd or rmsprop state for one network.

    rmsprop keeps a decaying mean of squared gradients per parameter:
    ``a <- rho a + (1 - rho) g^2`` then ``w <- w - lr g / sqrt(a + eps)``.
    """

    kind: str = "rmsprop"
    learning_rate: float = 1e-3
    rho: float = 0.9
    eps: float = 1e-8
    accumulators: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in ("sgd", "rmsprop"):
            raise ValueError(f"unknown optimizer kind {self.kind!r}")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rmsprop decay must lie in (0, 1)")
        if self.eps <= 0:
            raise ValueError("rmsprop eps must be positive")


def optimizer_step(state, net, grads):
    """Apply one in-place parameter update; returns ``(net, state)``.

    Needs exclusive access to the network.  Rejects non-finite gradients
    so a diverging run fails loudly instead of silently corrupting the
    parameters.
    """
    if len(grads) != len(net.layers):
        raise ValueError(f"got {len(grads)} gradient pairs for {len(net.layers)} layers")
    flat = []
    for layer, (d_w, d_b) in zip(net.layers, grads):
        if d_w.shape != layer.weight.shape or d_b.shape != layer.bias.shape:
            raise ValueError("gradient shapes do not mirror the network")
        if not (np.all(np.isfinite(d_w)) and np.all(np.isfinite(d_b))):
            raise NumericalError("non-finite gradient; lower the learning rate or check the inputs")
        flat.extend((d_w, d_b))
    params = net.parameter_arrays()
    if state.kind == "sgd":
        for param, grad in zip(params, flat):
            param -= state.learning_rate * grad
        return net, state
    if not state.accumulators:
        state.accumulators = [np.zeros_like(p) for p in params]
    for param, grad, acc in zip(params, flat, state.accumulators):
        acc *= state.rho
        acc += (1.0 - state.rho) * grad * grad
        param -= state.learning_rate * grad / np.sqrt(acc + state.eps)
    return net, state


def save_network(net, path):
    """Write a network checkpoint (see module docstring for the layout)."""
    doc = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "layers": [
            {
                "activation": layer.activation,
                "alpha": layer.alpha,
                "weight": layer.weight.tolist(),
                "bias": layer.bias.tolist(),
            }
            for layer in net.layers
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_network(path):
    """Read a checkpoint written by :func:`save_network`."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.get("format_version")
    if version != CHECKPOINT_FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint format_version {version!r}")
    layers = [
        Layer(
            np.asarray(spec["weight"], dtype=np.float64),
            np.asarray(spec["bias"], dtype=np.float64),
            spec["activation"],
            float(spec["alpha"]),
        )
        for spec in doc["layers"]
    ]
    return DenseNetwork(layers)
