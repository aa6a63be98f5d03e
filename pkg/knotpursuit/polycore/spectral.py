from dataclasses import dataclass

import numpy as np
import scipy.linalg

from knotpursuit.errors import InputError


@dataclass(frozen=True)
class SpectralSplit:
    """Right singular vectors of a matrix partitioned at a threshold.

    ``singular_values`` has one entry per right singular vector (zeros are
    appended when the matrix has fewer rows than columns), so
    ``singular_values[:n_above]`` belong to ``right_above`` and the rest to
    ``right_below``.
    """

    left_singulars: np.ndarray
    singular_values: np.ndarray
    right_above: np.ndarray
    right_below: np.ndarray
    threshold: float

    @property
    def n_above(self) -> int:
        return self.right_above.shape[1]

    @property
    def n_below(self) -> int:
        return self.right_below.shape[1]

    @property
    def sigma_above(self) -> np.ndarray:
        return self.singular_values[: self.n_above]

    @property
    def sigma_below(self) -> np.ndarray:
        return self.singular_values[self.n_above :]

    @property
    def largest(self) -> float:
        return float(self.singular_values[0]) if self.singular_values.size else 0.0


def spectral_split(matrix, threshold: float) -> SpectralSplit:
    """SVD of ``matrix`` with right singular vectors split at ``threshold``.

    Singular values exactly equal to the threshold go to ``right_below``.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise InputError(f"spectral_split expects a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("spectral_split got non-finite entries")
    if threshold < 0 or not np.isfinite(threshold):
        raise InputError(f"threshold must be finite and >= 0, got {threshold}")
    rows, cols = m.shape
    if cols == 0:
        empty = np.zeros((0, 0))
        return SpectralSplit(np.zeros((rows, 0)), np.zeros(0), empty, empty, threshold)
    if rows == 0:
        return SpectralSplit(np.zeros((0, 0)), np.zeros(cols), np.zeros((cols, 0)), np.eye(cols), threshold)

    u, s, vt = np.linalg.svd(m, full_matrices=rows < cols)
    v = vt.T
    sigma = np.zeros(cols)
    sigma[: s.size] = s
    n_above = int(np.count_nonzero(sigma > threshold))
    return SpectralSplit(
        left_singulars=u,
        singular_values=sigma,
        right_above=v[:, :n_above],
        right_below=v[:, n_above:],
        threshold=float(threshold),
    )


def pseudo_inverse(matrix: np.ndarray, rcond: float = 1e-10) -> np.ndarray:
    """Moore-Penrose inverse with singular values below ``rcond * sigma_max`` dropped."""
    m = np.asarray(matrix, dtype=float)
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[0]))
    return scipy.linalg.pinv(m, atol=0.0, rtol=rcond)
