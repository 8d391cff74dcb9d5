"""Stochastic training loop that shapes an encoder's latent law to a prior.

Each step draws a data minibatch, a fresh prior sample of the same size and
a fresh set of projection directions, then descends the combined objective

    recon(x, decode(encode(x))) + latent_weight * SW2(encode(x), prior sample)

where the sliced term sorts the projections per direction and holds that
pairing fixed while differentiating (sorting and descending alternate, so
the pairing is a constant within a step).  Both networks are updated from
the one backward pass.

Randomness is split into independent streams derived from the config seed:
stream 0 initialises the networks, stream 1 shuffles minibatches, stream 2
draws prior samples and projection directions, stream 3 drives evaluation.
A run with ``latent_weight = 0`` therefore walks the exact parameter
trajectory of a plain autoencoder with the same seed.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .distances import (
    reconstruction_cost,
    sliced_wasserstein,
    sliced_wasserstein_gradient,
)
from .nn import (
    NumericalError,
    OptimizerState,
    RECON_LOSS_KINDS,
    backward,
    forward,
    init_network,
    optimizer_step,
    recon_loss_and_grad,
)
from .samplers import (
    PriorSpec,
    derive_rng,
    epoch_shuffled_batches,
    sample_prior,
    sample_unit_sphere,
)
from .validation import as_cloud

__all__ = [
    "TrainConfig",
    "LossReport",
    "EvalReport",
    "TrainRecord",
    "StepResult",
    "step_objective",
    "train_step",
    "train",
    "evaluate",
    "latent_grid_decode",
    "grid_occupancy",
]

_STREAM_INIT, _STREAM_SHUFFLE, _STREAM_LATENT, _STREAM_EVAL = range(4)


@dataclass(frozen=True)
class TrainConfig:
    """Knobs of one training run.

    ``latent_weight`` is the relative weight of the sliced term;
    ``num_projections`` the number of directions drawn per step.  Defaults
    mirror the reference setup: weight 10, 50 projections, batches of 500,
    rmsprop at 1e-3.
    """

    latent_dim: int = 2
    prior: PriorSpec = field(default_factory=PriorSpec)
    latent_weight: float = 10.0
    num_projections: int = 50
    batch_size: int = 500
    epochs: int = 20
    hidden_sizes: tuple = (128, 128)
    recon_loss: str = "squared"
    optimizer: str = "rmsprop"
    learning_rate: float = 1e-3
    seed: int = 0
    eval_interval: int = 0  # steps between held-out evaluations; 0 = endpoints only
    eval_projections: int = 100
    early_stop_patience: int = 0  # evals without sw improvement before stopping; 0 = off

    def __post_init__(self):
        if self.latent_dim < 1:
            raise ValueError("latent_dim must be >= 1")
        if self.latent_weight < 0:
            raise ValueError("latent_weight must be >= 0")
        if self.num_projections < 1:
            raise ValueError("num_projections must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not self.hidden_sizes or any(int(h) < 1 for h in self.hidden_sizes):
            raise ValueError("hidden_sizes must be a nonempty tuple of positive ints")
        if self.recon_loss not in RECON_LOSS_KINDS:
            raise ValueError(f"unknown recon_loss {self.recon_loss!r}")
        if self.optimizer not in ("sgd", "rmsprop"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.prior.dim != self.latent_dim:
            raise ValueError(
                f"prior dim {self.prior.dim} must equal latent_dim {self.latent_dim}"
            )
        if self.eval_interval < 0 or self.eval_projections < 1 or self.early_stop_patience < 0:
            raise ValueError("eval_interval/eval_projections/early_stop_patience out of range")


@dataclass(frozen=True)
class LossReport:
    """Per-step objective terms; ``total = recon + latent_weight * sw``."""

    step: int
    recon: float
    sw: float
    total: float
    wall_ms: float = 0.0


@dataclass(frozen=True)
class EvalReport:
    step: int
    sw_latent: float
    recon_cost: float
    grid_occupancy: float


@dataclass
class TrainRecord:
    steps: list = field(default_factory=list)  # LossReport per step
    evals: list = field(default_factory=list)  # EvalReport per evaluation
    encoder: object = None
    decoder: object = None
    stopped_early: bool = False


@dataclass
class StepResult:
    recon: float
    sw: float
    total: float
    encoder_grads: list
    decoder_grads: list


def build_networks(data_dim, config):
    """Encoder/decoder pair for a config, initialised from the init stream.

    Hidden layers use leaky_relu(0.2); the encoder output is linear, the
    decoder output is a sigmoid when the loss needs (0, 1) predictions and
    linear otherwise.
    """
    rng = derive_rng(config.seed, _STREAM_INIT)
    hidden = [int(h) for h in config.hidden_sizes]
    hidden_acts = ["leaky_relu"] * len(hidden)
    encoder = init_network(
        [data_dim, *hidden, config.latent_dim], hidden_acts + ["identity"], rng
    )
    out_act = "sigmoid" if "bce" in config.recon_loss else "identity"
    decoder = init_network(
        [config.latent_dim, *hidden, data_dim], hidden_acts + [out_act], rng
    )
    return encoder, decoder


def step_objective(encoder, decoder, batch, z_prior, thetas, latent_weight, recon_loss="squared"):
    """Objective terms and parameter gradients for one frozen step.

    All stochastic inputs (``batch``, ``z_prior``, ``thetas``) are explicit
    so the computation is a deterministic function; :func:`train_step`
    layers the sampling on top.  The sliced term's sort pairing enters the
    gradient as a constant.
    """
    batch = as_cloud(batch, "batch")
    z_prior = as_cloud(z_prior, "z_prior")
    z, enc_cache = forward(encoder, batch)
    y, dec_cache = forward(decoder, z)
    recon, d_y = recon_loss_and_grad(batch, y, recon_loss)
    sw = sliced_wasserstein(z, z_prior, thetas, p=2)
    total = recon + latent_weight * sw
    decoder_grads, d_z = backward(decoder, dec_cache, d_y)
    if latent_weight != 0.0:
        d_z = d_z + latent_weight * sliced_wasserstein_gradient(z, z_prior, thetas)
    encoder_grads, _ = backward(encoder, enc_cache, d_z)
    return StepResult(recon, sw, total, encoder_grads, decoder_grads)


def train_step(encoder, decoder, batch, config, rng, enc_opt, dec_opt, step=0):
    """One body of the training loop; updates both networks in place.

    Samples the prior batch and the projection directions from ``rng``,
    forms the objective, backpropagates through decoder and encoder, and
    applies one optimizer step to each.  Returns the pre-update
    :class:`LossReport`.
    """
    started = time.perf_counter()
    batch = as_cloud(batch, "batch")
    z_prior = sample_prior(config.prior, batch.shape[0], rng)
    thetas = sample_unit_sphere(config.num_projections, config.latent_dim, rng)
    result = step_objective(
        encoder, decoder, batch, z_prior, thetas, config.latent_weight, config.recon_loss
    )
    if not np.isfinite(result.total):
        raise NumericalError(
            f"non-finite loss at step {step}: recon={result.recon!r} sw={result.sw!r}"
        )
    optimizer_step(enc_opt, encoder, result.encoder_grads)
    optimizer_step(dec_opt, decoder, result.decoder_grads)
    wall_ms = (time.perf_counter() - started) * 1e3
    return LossReport(step, result.recon, result.sw, result.total, wall_ms)


def _make_optimizer(config):
    return OptimizerState(kind=config.optimizer, learning_rate=config.learning_rate)


def train(data, config):
    """Run the full epoch-shuffled training loop.

    Evaluates on the training cloud before the first step, every
    ``config.eval_interval`` steps (when nonzero) and after the last step.
    Deterministic: a fixed (data, config) pair reproduces the record
    bit-for-bit.
    """
    data = as_cloud(data, "data")
    n = data.shape[0]
    if config.batch_size > n:
        raise ValueError(f"batch_size {config.batch_size} exceeds dataset size {n}")
    encoder, decoder = build_networks(data.shape[1], config)
    enc_opt = _make_optimizer(config)
    dec_opt = _make_optimizer(config)
    shuffle_rng = derive_rng(config.seed, _STREAM_SHUFFLE)
    latent_rng = derive_rng(config.seed, _STREAM_LATENT)
    eval_rng = derive_rng(config.seed, _STREAM_EVAL)

    record = TrainRecord(encoder=encoder, decoder=decoder)
    record.evals.append(evaluate(encoder, decoder, data, config.prior, config.eval_projections, eval_rng, step=0))
    best_sw = record.evals[0].sw_latent
    stale_evals = 0
    step = 0
    for _ in range(config.epochs):
        for idx in epoch_shuffled_batches(n, config.batch_size, shuffle_rng):
            report = train_step(
                encoder, decoder, data[idx], config, latent_rng, enc_opt, dec_opt, step
            )
            record.steps.append(report)
            step += 1
            if config.eval_interval and step % config.eval_interval == 0:
                ev = evaluate(encoder, decoder, data, config.prior, config.eval_projections, eval_rng, step)
                record.evals.append(ev)
                if config.early_stop_patience:
                    if ev.sw_latent < best_sw:
                        best_sw = ev.sw_latent
                        stale_evals = 0
                    else:
                        stale_evals += 1
                        if stale_evals >= config.early_stop_patience:
                            record.stopped_early = True
                            break
        if record.stopped_early:
            break
    if not record.evals or record.evals[-1].step != step:
        record.evals.append(evaluate(encoder, decoder, data, config.prior, config.eval_projections, eval_rng, step))
    return record


def grid_occupancy(points, box, side=8):
    """Fraction of cells of a ``side x side`` partition holding a point.

    The partition covers ``box = (lo, hi)`` on the first two coordinates;
    points outside the box fall in no cell.  A diagnostic for how well a
    cloud fills a box-shaped prior: a collapsed blob scores near ``1/side^2``,
    full coverage scores 1.
    """
    points = as_cloud(points, "points")
    lo, hi = float(box[0]), float(box[1])
    if hi <= lo:
        raise ValueError(f"box must satisfy lo < hi, got ({lo}, {hi})")
    xy = points[:, :2] if points.shape[1] >= 2 else np.column_stack((points[:, 0], points[:, 0]))
    inside = np.all((xy >= lo) & (xy <= hi), axis=1)
    if not np.any(inside):
        return 0.0
    cells = np.floor((xy[inside] - lo) / (hi - lo) * side).astype(int)
    cells = np.minimum(cells, side - 1)  # points exactly on the hi edge
    occupied = np.unique(cells[:, 0] * side + cells[:, 1])
    return float(occupied.size) / float(side * side)


def evaluate(encoder, decoder, data, prior, l_eval, rng, step=0):
    """Held-out metrics: latent sliced cost, reconstruction cost, coverage.

    Encodes the data, draws an equal-size prior sample and ``l_eval``
    fresh directions, and reports the sliced-Wasserstein cost between the
    two latent clouds, the paired reconstruction cost of the round trip,
    and the 8x8 grid occupancy of the encoded cloud over the prior's
    bounding box.
    """
    data = as_cloud(data, "data")
    z, _ = forward(encoder, data)
    y, _ = forward(decoder, z)
    z_prior = sample_prior(prior, data.shape[0], rng)
    thetas = sample_unit_sphere(l_eval, prior.dim, rng)
    return EvalReport(
        step=step,
        sw_latent=sliced_wasserstein(z, z_prior, thetas, p=2),
        recon_cost=reconstruction_cost(data, y, p=2),
        grid_occupancy=grid_occupancy(z, prior.bounding_box()),
    )


def latent_grid_decode(decoder, grid_side=25, box=(-1.0, 1.0)):
    """Decode a regular lattice over a square box in a 2-D latent space.

    Returns the ``grid_side**2 x out_dim`` decoded cloud, row-major over
    (row, column) = (second latent axis, first latent axis).  ``grid_side=1``
    decodes the single centre point of the box.
    """
    if decoder.in_dim != 2:
        raise ValueError(f"grid decoding needs a 2-D latent space, decoder takes {decoder.in_dim}")
    grid_side = int(grid_side)
    if grid_side < 1:
        raise ValueError("grid_side must be >= 1")
    lo, hi = float(box[0]), float(box[1])
    if hi <= lo:
        raise ValueError(f"box must satisfy lo < hi, got ({lo}, {hi})")
    if grid_side == 1:
        axis = np.array([(lo + hi) / 2.0])
    else:
        axis = np.linspace(lo, hi, grid_side)
    cols, rows = np.meshgrid(axis, axis)
    lattice = np.column_stack((cols.ravel(), rows.ravel()))
    out, _ = forward(decoder, lattice)
    return out
