"""Orthonormal frames for subspaces and affine fibers of R^d."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class Frame:
    """Orthonormal basis of a sub_dim-dimensional subspace of R^ambient_dim.

    basis has shape (ambient_dim, sub_dim) with orthonormal columns; offset
    (default 0) turns the subspace into an affine fiber.
    """

    basis: np.ndarray
    offset: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if b.ndim != 2:
            raise ValueError("basis must be a 2-d array")
        object.__setattr__(self, "basis", b)
        gram = b.T @ b
        if not np.allclose(gram, np.eye(b.shape[1]), atol=1e-10):
            raise ValueError("frame columns are not orthonormal")
        off = self.offset
        if off is None:
            off = np.zeros(b.shape[0])
        off = np.asarray(off, dtype=float)
        if off.shape != (b.shape[0],):
            raise ValueError("offset dimension mismatch")
        object.__setattr__(self, "offset", off)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def sub_dim(self) -> int:
        return self.basis.shape[1]

    def embed(self, coords: np.ndarray) -> np.ndarray:
        """Map subspace coordinates (..., sub_dim) to ambient points."""
        return np.asarray(coords) @ self.basis.T + self.offset

    def project(self, points: np.ndarray) -> np.ndarray:
        """Coordinates of ambient points in this frame, shape (..., sub_dim)."""
        return (np.asarray(points) - self.offset) @ self.basis

    def complement(self) -> "Frame":
        """An orthonormal frame of the orthogonal complement (through 0)."""
        d, k = self.basis.shape
        q, _ = np.linalg.qr(np.hstack([self.basis, np.eye(d)]))
        return Frame(q[:, k:d])

    @staticmethod
    def span(*vectors) -> "Frame":
        """Frame from a spanning set (orthonormalized by QR)."""
        m = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
        q, r = np.linalg.qr(m)
        if np.any(np.abs(np.diag(r)) < 1e-12):
            raise ValueError("spanning vectors are linearly dependent")
        return Frame(q)

    @staticmethod
    def coordinate(ambient_dim: int, axes) -> "Frame":
        """Frame spanned by the given coordinate axes."""
        axes = list(axes)
        b = np.zeros((ambient_dim, len(axes)))
        for j, a in enumerate(axes):
            b[a, j] = 1.0
        return Frame(b)

    def shifted(self, offset) -> "Frame":
        return Frame(self.basis, np.asarray(offset, dtype=float))
