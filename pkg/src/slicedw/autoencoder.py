"""scikit-learn style front end for the sliced-Wasserstein autoencoder.

The estimator wraps the training loop behind the usual ``fit`` /
``transform`` / ``inverse_transform`` surface so it composes with
pipelines, ``clone`` and grid search.  ``transform`` returns latent codes,
``inverse_transform`` decodes them, ``score`` returns the negative
combined objective (higher is better, per sklearn convention).
"""

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .distances import reconstruction_cost, sliced_wasserstein
from .nn import forward
from .samplers import PriorSpec, derive_rng, sample_prior, sample_unit_sphere
from .training import TrainConfig, train
from .validation import as_cloud

__all__ = ["SlicedWassersteinAutoencoder"]


class SlicedWassersteinAutoencoder(BaseEstimator, TransformerMixin):
    """Autoencoder whose latent distribution is pulled toward a chosen prior.

    Parameters
    ----------
    latent_dim : int
        Width of the latent space.
    prior : str
        Prior kind: ``uniform_box``, ``ring``, ``circle`` or ``bowl``.
    prior_params : dict or None
        Kind-specific parameters forwarded to :class:`PriorSpec`
        (e.g. ``{"half_width": 1.0}`` or ``{"r_inner": 0.5, "r_outer": 1.0}``).
    latent_weight : float
        Weight of the sliced-Wasserstein latent term relative to the
        reconstruction term.
    num_projections : int
        Random projection directions drawn per training step.
    batch_size : int
        Minibatch size; clipped to ``n_samples`` at fit time.
    epochs : int
        Passes over the training set.
    hidden_sizes : tuple of int
        Hidden layer widths shared by encoder and decoder.
    recon_loss : str
        ``squared``, ``l1``, ``bce`` or ``bce_plus_l1``.
    optimizer : str
        ``rmsprop`` or ``sgd``.
    learning_rate : float
    eval_interval : int
        Steps between held-out evaluations recorded in ``record_``
        (0 keeps only the first and last).
    early_stop_patience : int
        Evaluations without latent-cost improvement before stopping early
        (0 disables; needs ``eval_interval > 0``).
    random_state : int
        Seed for initialisation, shuffling and sampling.

    Attributes
    ----------
    encoder_, decoder_ : DenseNetwork
        Trained networks.
    record_ : TrainRecord
        Per-step loss reports and periodic evaluation metrics.
    n_features_in_ : int
    """

    def __init__(
        self,
        latent_dim=2,
        prior="uniform_box",
        prior_params=None,
        latent_weight=10.0,
        num_projections=50,
        batch_size=500,
        epochs=20,
        hidden_sizes=(128, 128),
        recon_loss="squared",
        optimizer="rmsprop",
        learning_rate=1e-3,
        eval_interval=0,
        early_stop_patience=0,
        random_state=0,
    ):
        self.latent_dim = latent_dim
        self.prior = prior
        self.prior_params = prior_params
        self.latent_weight = latent_weight
        self.num_projections = num_projections
        self.batch_size = batch_size
        self.epochs = epochs
        self.hidden_sizes = hidden_sizes
        self.recon_loss = recon_loss
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.eval_interval = eval_interval
        self.early_stop_patience = early_stop_patience
        self.random_state = random_state

    def _prior_spec(self):
        params = dict(self.prior_params or {})
        return PriorSpec(kind=self.prior, dim=int(self.latent_dim), **params)

    def _config(self, n_samples):
        return TrainConfig(
            latent_dim=int(self.latent_dim),
            prior=self._prior_spec(),
            latent_weight=float(self.latent_weight),
            num_projections=int(self.num_projections),
            batch_size=min(int(self.batch_size), n_samples),
            epochs=int(self.epochs),
            hidden_sizes=tuple(int(h) for h in self.hidden_sizes),
            recon_loss=self.recon_loss,
            optimizer=self.optimizer,
            learning_rate=float(self.learning_rate),
            seed=int(self.random_state),
            eval_interval=int(self.eval_interval),
            early_stop_patience=int(self.early_stop_patience),
        )

    def fit(self, X, y=None):
        """Train encoder and decoder on ``X`` (shape ``(n_samples, n_features)``)."""
        X = as_cloud(X, "X")
        record = train(X, self._config(X.shape[0]))
        self.encoder_ = record.encoder
        self.decoder_ = record.decoder
        self.record_ = record
        self.n_features_in_ = X.shape[1]
        return self

    def _check_fitted(self):
        if not hasattr(self, "encoder_"):
            raise NotFittedError(
                "This SlicedWassersteinAutoencoder instance is not fitted yet; call fit first."
            )

    def transform(self, X):
        """Encode samples into the latent space."""
        self._check_fitted()
        X = as_cloud(X, "X")
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return forward(self.encoder_, X)[0]

    def inverse_transform(self, Z):
        """Decode latent codes back to the data space."""
        self._check_fitted()
        Z = as_cloud(Z, "Z")
        if Z.shape[1] != int(self.latent_dim):
            raise ValueError(f"Z has {Z.shape[1]} columns, expected {self.latent_dim}")
        return forward(self.decoder_, Z)[0]

    def reconstruct(self, X):
        """Round-trip ``decode(encode(X))``."""
        return self.inverse_transform(self.transform(X))

    def score(self, X, y=None):
        """Negative combined objective of ``X`` under the trained model.

        Uses a fresh prior sample and fresh evaluation directions seeded
        from ``random_state``, so the score is deterministic for a fitted
        estimator.
        """
        self._check_fitted()
        X = as_cloud(X, "X")
        z = self.transform(X)
        recon = reconstruction_cost(X, self.inverse_transform(z), p=2)
        rng = derive_rng(int(self.random_state), 9)
        spec = self._prior_spec()
        sw = sliced_wasserstein(
            z,
            sample_prior(spec, X.shape[0], rng),
            sample_unit_sphere(max(int(self.num_projections), 100), spec.dim, rng),
            p=2,
        )
        return -(recon + float(self.latent_weight) * sw)
