"""Sliced-Wasserstein distances over point clouds and prior-shaped autoencoders.

The core pieces:

- :mod:`slicedw.distances` -- sort-based 1-D and sliced Wasserstein costs,
  their gradients, exact small-instance assignment oracles, quantile and
  Jensen-Shannon utilities.
- :mod:`slicedw.samplers` -- seeded projection directions, latent priors,
  synthetic manifolds, minibatch shuffling.
- :mod:`slicedw.nn` -- minimal dense networks with manual backprop and
  sgd/rmsprop optimizers.
- :mod:`slicedw.training` -- the stochastic loop matching a latent cloud to
  a prior while reconstructing the data.
- :class:`SlicedWassersteinAutoencoder` -- scikit-learn style estimator
  wrapping the loop (fit / transform / inverse_transform).
- :mod:`slicedw.cli` -- the ``slicedw`` command.
"""

from .autoencoder import SlicedWassersteinAutoencoder
from .distances import (
    exact_wasserstein_small,
    js_divergence_1d,
    project,
    quantile_wasserstein_1d,
    reconstruction_cost,
    sliced_wasserstein,
    sliced_wasserstein_gradient,
    sliced_wasserstein_per_direction,
    to_metric,
    wasserstein_1d,
)
from .nn import DenseNetwork, Layer, OptimizerState, init_network, load_network, save_network
from .samplers import (
    PriorSpec,
    derive_rng,
    sample_minibatch,
    sample_prior,
    sample_swiss_roll,
    sample_unit_sphere,
)
from .training import (
    EvalReport,
    LossReport,
    TrainConfig,
    TrainRecord,
    evaluate,
    latent_grid_decode,
    train,
    train_step,
)

__version__ = "0.1.0"

__all__ = [
    "SlicedWassersteinAutoencoder",
    "project",
    "wasserstein_1d",
    "quantile_wasserstein_1d",
    "sliced_wasserstein",
    "sliced_wasserstein_per_direction",
    "sliced_wasserstein_gradient",
    "exact_wasserstein_small",
    "reconstruction_cost",
    "js_divergence_1d",
    "to_metric",
    "PriorSpec",
    "derive_rng",
    "sample_unit_sphere",
    "sample_prior",
    "sample_swiss_roll",
    "sample_minibatch",
    "DenseNetwork",
    "Layer",
    "OptimizerState",
    "init_network",
    "save_network",
    "load_network",
    "TrainConfig",
    "TrainRecord",
    "LossReport",
    "EvalReport",
    "train",
    "train_step",
    "evaluate",
    "latent_grid_decode",
    "__version__",
]
