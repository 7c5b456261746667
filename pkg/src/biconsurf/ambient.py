"""Signature-aware linear algebra for the ambient spaces E3, E4 and L4.

Vectors are plain numpy arrays whose trailing axis is the coordinate axis,
so every operation broadcasts over leading axes.  The Lorentz signature is
fixed to (+, +, +, -) with the fourth coordinate timelike.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpanError, UsageError

__all__ = [
    "Signature",
    "SpaceForm",
    "EUCLIDEAN3",
    "EUCLIDEAN4",
    "LORENTZ4",
    "R3",
    "S3",
    "H3",
    "space_form",
    "basis_vector",
    "orthonormal_complement",
]


@dataclass(frozen=True)
class Signature:
    """Inner-product signature of an ambient linear space.

    ``timelike`` counts negative directions; it is 0 for Euclidean space and
    1 for Lorentz-Minkowski space, where the last coordinate is the
    timelike one.
    """

    dim: int
    timelike: int = 0

    def __post_init__(self):
        if self.dim not in (3, 4):
            raise UsageError(f"ambient dimension must be 3 or 4, got {self.dim}")
        if self.timelike not in (0, 1):
            raise UsageError(f"timelike count must be 0 or 1, got {self.timelike}")
        if self.timelike == 1 and self.dim != 4:
            raise UsageError("Lorentz signature is only supported in dimension 4")

    @property
    def metric(self) -> np.ndarray:
        eps = np.ones(self.dim)
        if self.timelike:
            eps[-1] = -1.0
        return eps

    def _check(self, *vectors) -> None:
        for v in vectors:
            shape = np.shape(v)
            if not shape or shape[-1] != self.dim:
                raise UsageError(
                    f"vector of shape {shape} does not match signature "
                    f"dimension {self.dim}"
                )

    def inner(self, a, b):
        """Bilinear symmetric product sum(eps_i a_i b_i)."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        self._check(a, b)
        return np.sum(a * b * self.metric, axis=-1)

    def norm(self, a):
        """sqrt(|<a, a>|); for Lorentz vectors this is the modulus norm."""
        return np.sqrt(np.abs(self.inner(a, a)))


EUCLIDEAN3 = Signature(3)
EUCLIDEAN4 = Signature(4)
LORENTZ4 = Signature(4, timelike=1)


@dataclass(frozen=True)
class SpaceForm:
    """One of the three simply connected 3-spaces of constant curvature.

    ``c`` selects the model: 0 for flat space (ambient E3), +1 for the unit
    sphere inside E4, -1 for the hyperboloid ``<r, r> = -1, x4 > 0`` inside
    Lorentz-Minkowski L4.
    """

    c: int

    def __post_init__(self):
        if self.c not in (-1, 0, 1):
            raise UsageError(f"curvature must be -1, 0 or +1, got {self.c}")

    @property
    def ambient(self) -> Signature:
        if self.c == 0:
            return EUCLIDEAN3
        return EUCLIDEAN4 if self.c == 1 else LORENTZ4

    @property
    def quadric_target(self) -> float:
        """Required value of <r, r> for points of the model."""
        if self.c == 0:
            raise UsageError("flat space carries no quadric constraint")
        return float(self.c)

    @property
    def ricci_normal(self) -> float:
        """Ricci curvature of the model in any unit direction (equals 2c)."""
        return 2.0 * self.c

    def inner(self, a, b):
        return self.ambient.inner(a, b)

    def norm(self, a):
        return self.ambient.norm(a)

    def on_model(self, p, tol: float = 1e-9):
        """Whether p satisfies the model's quadric constraint within tol."""
        target = self.quadric_target
        p = np.asarray(p, dtype=float)
        ok = np.abs(self.inner(p, p) - target) <= tol
        if self.c == -1:
            ok = ok & (p[..., 3] > 0)
        return ok if np.ndim(ok) else bool(ok)


R3 = SpaceForm(0)
S3 = SpaceForm(1)
H3 = SpaceForm(-1)


def space_form(c: int) -> SpaceForm:
    return SpaceForm(int(c))


def basis_vector(sig: Signature, i: int) -> np.ndarray:
    e = np.zeros(sig.dim)
    e[i] = 1.0
    return e


def _cofactor_complement(sig: Signature, mat: np.ndarray) -> np.ndarray:
    """Vector orthogonal (in sig) to the rows of mat, shape (..., dim).

    Uses the generalized cross product: the cofactor expansion is continuous
    in the inputs, which downstream code relies on for orienting normal
    fields without per-point sign searches.
    """
    dim = sig.dim
    if dim == 3:
        a, b = mat[..., 0, :], mat[..., 1, :]
        w = np.cross(a, b)
    else:
        cols = np.arange(4)
        minors = [mat[..., :, cols != j] for j in range(4)]
        w = np.stack(
            [((-1.0) ** j) * np.linalg.det(m) for j, m in enumerate(minors)],
            axis=-1,
        )
    # raise the index so that <w, row> = 0 holds in the stated signature
    return w * sig.metric


def orthonormal_complement(sig: Signature, vectors, sign_convention=None):
    """Unit vector orthogonal to ``vectors`` (a codimension-1 system).

    ``vectors`` must contain dim-1 arrays of shape (..., dim) spanning a
    non-degenerate hyperplane at every point.  The result has |<n, n>| = 1
    and, when ``sign_convention`` is given and not orthogonal to the result,
    a positive inner product with it.  With no convention the orientation is
    the (deterministic, continuous) cofactor orientation.
    """
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    sig._check(*vecs)
    if len(vecs) != sig.dim - 1:
        raise UsageError(
            f"need exactly {sig.dim - 1} spanning vectors in dimension "
            f"{sig.dim}, got {len(vecs)}"
        )
    mat = np.stack(np.broadcast_arrays(*vecs), axis=-2)

    # degeneracy guard: Gram determinant against the Euclidean scale
    gram = np.einsum("...ik,k,...jk->...ij", mat, sig.metric, mat)
    scale = np.prod(np.linalg.norm(mat, axis=-1), axis=-1)
    det = np.linalg.det(gram)
    if np.any(np.abs(det) <= 1e-10 * scale**2):
        raise DegenerateSpanError(
            "input vectors span a (numerically) degenerate hyperplane"
        )

    n = _cofactor_complement(sig, mat)
    n2 = sig.inner(n, n)
    if np.any(np.abs(n2) <= 1e-24 * scale**2):
        raise DegenerateSpanError("complement direction is numerically null")
    n = n / np.sqrt(np.abs(n2))[..., None]

    if sign_convention is not None:
        s = sig.inner(n, np.asarray(sign_convention, dtype=float))
        flip = np.where(s < 0, -1.0, 1.0)
        n = n * flip[..., None]
    return n
