"""Finite-dimensional ordered cones with norm context.

Two cone families are supported: the nonnegative orthant and the Lorentz
(second-order) cone.  Every operation here is a pure function; the module
also exposes the normality constant C, the decomposition constant M and
the dual decomposition constant M' that the stability criteria consume.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotALatticeError,
    UnsupportedConeNormError,
)
from .norms import NORMS, batch_vec_norm, vec_norm

DEFAULT_TOL = 1e-9

_SQRT2 = float(np.sqrt(2.0))


@dataclass(frozen=True)
class ConeSpec:
    """An ordered cone in R^n together with the ambient norm.

    kind : "orthant" (componentwise order) or "lorentz"
           ({x : x0 >= ||(x1..x_{n-1})||_2}).
    dim  : ambient dimension, >= 1 (>= 2 for the Lorentz cone).
    norm : "l1" | "l2" | "linf"; governs distances and margins.
    """

    kind: str
    dim: int
    norm: str

    def __post_init__(self):
        if self.kind not in ("orthant", "lorentz"):
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if self.norm not in NORMS:
            raise ValueError(f"unknown norm {self.norm!r}")
        if self.dim < 1:
            raise ValueError("cone dimension must be >= 1")
        if self.kind == "lorentz" and self.dim < 2:
            raise ValueError("Lorentz cone needs dimension >= 2")

    def to_dict(self):
        return {"kind": self.kind, "dim": int(self.dim), "norm": self.norm}


def cone_from_dict(d):
    return ConeSpec(kind=d["kind"], dim=int(d["dim"]), norm=d["norm"])


def orthant(dim, norm="linf"):
    return ConeSpec("orthant", dim, norm)


def lorentz(dim, norm="l2"):
    return ConeSpec("lorentz", dim, norm)


@dataclass(frozen=True)
class ConeConstants:
    """Constants of the cone/norm pair.

    normality_C      : ||x|| <= C ||y|| whenever 0 <= x <= y.
    decomposition_M  : every x splits as x = y - z with y, z in the cone
                       and ||y||, ||z|| <= M ||x||.
    dual_M_prime     : the same decomposition constant for the dual cone,
                       so that a positive functional z' with <z', x> >= 1
                       and ||z'|| <= M' exists for every unit x >= 0.
    """

    normality_C: float
    decomposition_M: float
    dual_M_prime: float


def _check_vector(cone, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (cone.dim,):
        raise DimensionMismatchError(
            f"expected vector of shape ({cone.dim},), got {x.shape}"
        )
    return x


def contains(cone, x, tol=DEFAULT_TOL):
    """Membership within an absolute slack `tol`."""
    x = _check_vector(cone, x)
    if cone.kind == "orthant":
        return bool(np.min(x) >= -tol)
    return bool(x[0] + tol >= np.linalg.norm(x[1:]))


def project(cone, x):
    """Nearest cone point.

    For the orthant, clipping the negative entries minimises the distance
    in all three supported norms.  For the Lorentz cone the closed-form l2
    projection is used; other norms are rejected.
    """
    x = _check_vector(cone, x)
    if cone.kind == "orthant":
        return np.maximum(x, 0.0)
    if cone.norm != "l2":
        raise UnsupportedConeNormError(
            "Lorentz-cone projection is only certified under the l2 norm"
        )
    t = x[0]
    rest = x[1:]
    r = float(np.linalg.norm(rest))
    if r <= t:
        return x.copy()
    if r <= -t:
        return np.zeros_like(x)
    alpha = 0.5 * (t + r)
    out = np.empty_like(x)
    out[0] = alpha
    out[1:] = (alpha / r) * rest
    return out


def distance(cone, x):
    """Distance from x to the cone in the cone's norm.

    Orthant: ||x^-||.  Lorentz: closed-form l2 projection distance; the
    l1/linf pairings have no implemented closed form and are rejected.
    """
    x = _check_vector(cone, x)
    if cone.kind == "orthant":
        return vec_norm(np.minimum(x, 0.0), cone.norm)
    if cone.norm != "l2":
        raise UnsupportedConeNormError(
            "Lorentz-cone distance is only certified under the l2 norm"
        )
    t = x[0]
    r = float(np.linalg.norm(x[1:]))
    if r <= t:
        return 0.0
    if r <= -t:
        return float(np.linalg.norm(x))
    return (r - t) / _SQRT2


def batch_distance(cone, X):
    """Row-wise `distance` for a 2-d array of vectors."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != cone.dim:
        raise DimensionMismatchError(f"expected (m, {cone.dim}) array")
    if cone.kind == "orthant":
        return batch_vec_norm(np.minimum(X, 0.0), cone.norm)
    if cone.norm != "l2":
        raise UnsupportedConeNormError(
            "Lorentz-cone distance is only certified under the l2 norm"
        )
    t = X[:, 0]
    r = np.sqrt((X[:, 1:] ** 2).sum(axis=1))
    full = np.sqrt((X**2).sum(axis=1))
    return np.where(r <= t, 0.0, np.where(r <= -t, full, (r - t) / _SQRT2))


def is_interior(cone, x):
    """(inside, margin): margin is the largest ball radius around x inside the cone.

    Orthant: min_i x_i, exact for l1, l2 and linf alike because each
    coordinate functional has dual norm one.  Lorentz: (x0 - ||rest||)/sqrt(2),
    the l2 ball radius (reported in the l2 metric for every norm context;
    the sign, hence the boolean, is norm independent).
    """
    x = _check_vector(cone, x)
    if cone.kind == "orthant":
        margin = float(np.min(x))
    else:
        margin = (x[0] - float(np.linalg.norm(x[1:]))) / _SQRT2
    return bool(margin > 0.0), margin


def interior_point(cone):
    """A canonical interior vector: all-ones (orthant) or the cone axis."""
    if cone.kind == "orthant":
        return np.ones(cone.dim)
    z = np.zeros(cone.dim)
    z[0] = 1.0
    return z


def lattice_parts(cone, x):
    """(x^+, x^-, |x|) componentwise; only the orthant is a lattice."""
    x = _check_vector(cone, x)
    if cone.kind != "orthant":
        raise NotALatticeError("the Lorentz cone does not order R^n as a lattice")
    plus = np.maximum(x, 0.0)
    minus = np.maximum(-x, 0.0)
    return plus, minus, np.abs(x)


def decompose(cone, x):
    """Split x = y - z with y, z in the cone and ||y||, ||z|| <= M ||x||.

    Orthant: the lattice parts (x^+, x^-).  Lorentz: y = x + t e0 and
    z = t e0 with t = max(0, ||rest|| - x0).
    """
    x = _check_vector(cone, x)
    if cone.kind == "orthant":
        return np.maximum(x, 0.0), np.maximum(-x, 0.0)
    t = max(0.0, float(np.linalg.norm(x[1:])) - x[0])
    z = np.zeros_like(x)
    z[0] = t
    return x + z, z


def cone_constants(cone):
    """Valid (not necessarily optimal) constants for the cone/norm pair.

    The orthant is a Banach lattice under every monotone norm, so C = M =
    M' = 1.  For the Lorentz cone under l2: self-duality gives C = 1, and
    the `decompose` construction realises M = M' = 1 + sqrt(2) (the worst
    ratio max(0, ||rest|| - x0)/||x|| equals sqrt(2), attained near
    x = -e0); the value is constructive, no optimality is claimed.
    """
    if cone.kind == "orthant":
        return ConeConstants(1.0, 1.0, 1.0)
    m = 1.0 + _SQRT2
    return ConeConstants(1.0, m, m)


def random_points(cone, rng, count, interior=False):
    """Sample `count` cone points (rows); crude but adequate for searches."""
    if cone.kind == "orthant":
        pts = rng.uniform(0.0, 1.0, size=(count, cone.dim))
        if interior:
            pts += 0.05
        return pts
    u = rng.normal(size=(count, cone.dim - 1))
    u /= np.maximum(np.linalg.norm(u, axis=1, keepdims=True), 1e-300)
    radius = rng.uniform(0.0, 0.95 if interior else 1.0, size=(count, 1))
    scale = rng.uniform(0.1, 1.0, size=(count, 1))
    pts = np.hstack([np.ones((count, 1)), radius * u]) * scale
    return pts
