"""Input validation helpers shared across the package.

Point clouds are plain ``float64`` arrays of shape ``(n, d)``: one row per
sample, every sample carrying uniform mass ``1/n``.  Projection direction
sets are ``(L, d)`` arrays whose rows are unit vectors.  Everything here
raises ``ValueError`` with a descriptive message instead of silently
broadcasting or truncating.
"""

import numpy as np

UNIT_NORM_ATOL = 1e-9


def as_float_array(x, name="array"):
    """Convert to a float64 ndarray and reject non-finite entries."""
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def as_cloud(x, name="cloud"):
    """Validate a point cloud: 2-D, finite, at least one sample and one axis."""
    arr = as_float_array(x, name)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D (n, d) array, got shape {arr.shape}")
    n, d = arr.shape
    if n < 1 or d < 1:
        raise ValueError(f"{name} must have n >= 1 samples and d >= 1 columns, got {arr.shape}")
    return arr


def as_vector(x, name="vector"):
    """Validate a 1-D finite array with at least one entry."""
    arr = as_float_array(x, name)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size < 1:
        raise ValueError(f"{name} must not be empty")
    return arr


def as_unit_vector(x, dim=None, name="direction"):
    """Validate a single unit-norm direction, optionally of a given dimension."""
    arr = as_vector(x, name)
    if dim is not None and arr.size != dim:
        raise ValueError(f"{name} has dimension {arr.size}, expected {dim}")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > UNIT_NORM_ATOL:
        raise ValueError(f"{name} must have unit norm, got |{name}| = {norm!r}")
    return arr


def as_directions(x, dim=None, name="directions"):
    """Validate an (L, d) set of unit-norm projection directions."""
    arr = as_cloud(x, name)
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"{name} have dimension {arr.shape[1]}, expected {dim}")
    norms = np.linalg.norm(arr, axis=1)
    worst = float(np.max(np.abs(norms - 1.0)))
    if worst > UNIT_NORM_ATOL:
        raise ValueError(f"every row of {name} must have unit norm (worst deviation {worst:g})")
    return arr


def check_same_shape(a, b, name_a="x", name_b="y"):
    if a.shape != b.shape:
        raise ValueError(f"{name_a} and {name_b} must have the same shape, got {a.shape} vs {b.shape}")


def check_cost_exponent(p):
    """The transport cost exponent: only |.|^1 and |.|^2 are supported."""
    if p not in (1, 2):
        raise ValueError(f"cost exponent p must be 1 or 2, got {p!r}")
    return int(p)
