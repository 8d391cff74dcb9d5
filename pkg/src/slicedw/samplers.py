"""Seeded random sources: projection directions, latent priors, synthetic data.

All samplers take a ``numpy.random.Generator`` and are pure functions of
(arguments, generator state), so a fixed seed reproduces the exact sample
stream on any platform.  The generator algorithm is NumPy's default PCG64;
use :func:`derive_rng` to split one seed into independent named streams.
"""

from dataclasses import dataclass

import numpy as np

from .validation import as_cloud

__all__ = [
    "derive_rng",
    "PriorSpec",
    "PRIOR_KINDS",
    "sample_unit_sphere",
    "sample_prior",
    "sample_swiss_roll",
    "sample_swiss_roll_labeled",
    "sample_minibatch",
    "epoch_shuffled_batches",
]

PRIOR_KINDS = ("uniform_box", "ring", "circle", "bowl")


def derive_rng(seed, stream=0):
    """Independent PCG64 generator for (seed, stream-id).

    Distinct stream ids yield statistically independent streams, so
    concurrent consumers can each own one without sharing mutable state.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream)]))


def sample_unit_sphere(l, d, rng):
    """Draw ``l`` independent uniform directions on the unit sphere in R^d.

    Each row is a standard-Gaussian vector normalised to unit length;
    for ``d = 1`` the directions are +1 or -1.  Row norms are 1 within
    1e-12 by construction.
    """
    l = int(l)
    d = int(d)
    if l < 1:
        raise ValueError(f"need at least one direction, got l={l}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got d={d}")
    thetas = rng.standard_normal((l, d))
    norms = np.linalg.norm(thetas, axis=1)
    # A zero draw has probability ~0 but would poison the normalisation.
    while np.any(norms < 1e-12):
        bad = norms < 1e-12
        thetas[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(thetas, axis=1)
    return thetas / norms[:, None]


@dataclass(frozen=True)
class PriorSpec:
    """A samplable latent target distribution.

    kinds
    -----
    uniform_box
        i.i.d. uniform on ``[-half_width, half_width]^dim``.
    ring
        area-uniform on the annulus ``r_inner <= |z| <= r_outer`` (dim 2).
    circle
        uniform angle on the radius-``radius`` circle plus isotropic
        Gaussian noise of scale ``noise`` (dim 2).
    bowl
        density proportional to ``|z|^exponent`` on ``[-1, 1]^2``, drawn
        by rejection (dim 2).

    ring/circle/bowl are only named, never defined, in their source; these
    shapes are interpretations chosen to match the published scatter
    panels, with the bowl exponent left configurable.
    """

    kind: str = "uniform_box"
    dim: int = 2
    half_width: float = 1.0
    r_inner: float = 0.5
    r_outer: float = 1.0
    radius: float = 1.0
    noise: float = 0.1
    exponent: float = 2.0

    def __post_init__(self):
        if self.kind not in PRIOR_KINDS:
            raise ValueError(f"unknown prior kind {self.kind!r}; expected one of {PRIOR_KINDS}")
        if self.dim < 1:
            raise ValueError(f"prior dim must be >= 1, got {self.dim}")
        if self.kind != "uniform_box" and self.dim != 2:
            raise ValueError(f"{self.kind} prior is only defined for dim 2, got dim {self.dim}")
        if self.kind == "uniform_box" and self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.kind == "ring":
            if self.r_inner < 0 or self.r_outer <= 0:
                raise ValueError("ring radii must be nonnegative with r_outer > 0")
            if self.r_inner >= self.r_outer:
                raise ValueError(f"ring needs r_inner < r_outer, got {self.r_inner} >= {self.r_outer}")
        if self.kind == "circle":
            if self.radius <= 0:
                raise ValueError("circle radius must be positive")
            if self.noise < 0:
                raise ValueError("circle noise must be nonnegative")
        if self.kind == "bowl" and self.exponent <= 0:
            raise ValueError("bowl exponent must be positive")

    def bounding_box(self):
        """Per-axis (lo, hi) bounds containing essentially all mass."""
        if self.kind == "uniform_box":
            h = self.half_width
        elif self.kind == "ring":
            h = self.r_outer
        elif self.kind == "circle":
            h = self.radius + 3.0 * self.noise
        else:
            h = 1.0
        return (-h, h)


def sample_prior(spec, m, rng):
    """Draw ``m`` samples from the prior described by ``spec``.

    Returns an ``(m, spec.dim)`` cloud lying in the documented support of
    the kind.
    """
    m = int(m)
    if m < 1:
        raise ValueError(f"need at least one sample, got m={m}")
    if spec.kind == "uniform_box":
        h = spec.half_width
        return rng.uniform(-h, h, size=(m, spec.dim))
    if spec.kind == "ring":
        # r = sqrt(r0^2 + u (r1^2 - r0^2)) gives area-uniform radii.
        u = rng.uniform(0.0, 1.0, size=m)
        r = np.sqrt(spec.r_inner**2 + u * (spec.r_outer**2 - spec.r_inner**2))
        ang = rng.uniform(0.0, 2.0 * np.pi, size=m)
        return np.column_stack((r * np.cos(ang), r * np.sin(ang)))
    if spec.kind == "circle":
        ang = rng.uniform(0.0, 2.0 * np.pi, size=m)
        pts = spec.radius * np.column_stack((np.cos(ang), np.sin(ang)))
        if spec.noise > 0.0:
            pts = pts + spec.noise * rng.standard_normal((m, 2))
        return pts
    # bowl: accept z ~ U[-1,1]^2 with probability (|z| / sqrt(2))^exponent.
    out = np.empty((m, 2))
    filled = 0
    while filled < m:
        chunk = max(m - filled, 64)
        z = rng.uniform(-1.0, 1.0, size=(chunk, 2))
        accept_p = (np.linalg.norm(z, axis=1) / np.sqrt(2.0)) ** spec.exponent
        keep = z[rng.uniform(size=chunk) < accept_p]
        take = min(keep.shape[0], m - filled)
        out[filled : filled + take] = keep[:take]
        filled += take
    return out


_ROLL_T_LO = 1.5 * np.pi
_ROLL_T_HI = 4.5 * np.pi


def sample_swiss_roll_labeled(m, noise=0.0, rng=None):
    """Swiss-roll cloud in ``[-1, 1]^3`` plus the unrolled parameter.

    Points are ``(t cos t, h, t sin t)`` with ``t ~ U[1.5 pi, 4.5 pi]`` and
    ``h ~ U[0, 10]``, optionally perturbed by Gaussian noise of scale
    ``noise``, then affinely rescaled by the noise-free coordinate bounds
    so the clean manifold fits ``[-1, 1]^3``.  Returns ``(points, t)``;
    ``t`` orders the points along the spiral and is the colour signal for
    the scatter plots.
    """
    m = int(m)
    if m < 1:
        raise ValueError(f"need at least one sample, got m={m}")
    if noise < 0:
        raise ValueError(f"noise must be >= 0, got {noise}")
    t = rng.uniform(_ROLL_T_LO, _ROLL_T_HI, size=m)
    height = rng.uniform(0.0, 10.0, size=m)
    pts = np.column_stack((t * np.cos(t), height, t * np.sin(t)))
    if noise > 0.0:
        pts = pts + noise * rng.standard_normal((m, 3))
    pts[:, 0] /= _ROLL_T_HI
    pts[:, 2] /= _ROLL_T_HI
    pts[:, 1] = pts[:, 1] / 5.0 - 1.0
    return pts, t


def sample_swiss_roll(m, noise=0.0, rng=None):
    """Swiss-roll point cloud in ``[-1, 1]^3`` (see the labeled variant)."""
    return sample_swiss_roll_labeled(m, noise, rng)[0]


def sample_minibatch(data, m, rng):
    """Draw ``m`` distinct rows of ``data`` from a fresh uniform permutation."""
    data = as_cloud(data, "data")
    m = int(m)
    n = data.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"batch size must satisfy 1 <= m <= {n}, got {m}")
    return data[rng.permutation(n)[:m]]


def epoch_shuffled_batches(n, batch_size, rng):
    """Index batches covering one epoch: a fresh permutation cut into slices.

    Every index appears exactly once per epoch; if ``batch_size`` does not
    divide ``n`` the final batch is short.
    """
    n = int(n)
    batch_size = int(batch_size)
    if not 1 <= batch_size <= n:
        raise ValueError(f"batch size must satisfy 1 <= m <= {n}, got {batch_size}")
    order = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]
