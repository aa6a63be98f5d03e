import numpy as np

BLOB_CENTERS = np.array([[-0.5, 0.5], [0.5, 0.5], [0.0, -0.5]])


def gen_blobs(seed: int = 0, n_points: int = 60, noisy: float = 0.3, quiet: float = 0.05) -> np.ndarray:
    """Three blobs of equal size; the first gets ``noisy`` Gaussian noise."""
    rng = np.random.default_rng(seed)
    sizes = [n_points // 3 + (1 if i < n_points % 3 else 0) for i in range(3)]
    stds = [noisy, quiet, quiet]
    blobs = [center + std * rng.standard_normal((size, 2)) for center, std, size in zip(BLOB_CENTERS, stds, sizes)]
    return np.vstack(blobs)


def _circle(rng: np.random.Generator, n: int, radius: float, noise: float) -> np.ndarray:
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    points = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    if noise > 0:
        points = points + noise * rng.standard_normal(points.shape)
    return points


def gen_circle(seed: int = 0, n_points: int = 30, noise: float = 0.05, radius: float = 1.0) -> np.ndarray:
    return _circle(np.random.default_rng(seed), n_points, radius, noise)


def gen_concentric(
    seed: int = 0, n_points: int = 50, noise: float = 0.02, radii: tuple[float, float] = (0.5, 1.0)
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    inner = n_points // 2
    return np.vstack([_circle(rng, inner, radii[0], noise), _circle(rng, n_points - inner, radii[1], noise)])


GENERATORS = {"blobs": gen_blobs, "circle": gen_circle, "concentric": gen_concentric}
