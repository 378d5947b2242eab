"""Deterministic direction sets for searches in dimension three and up."""

from functools import lru_cache
from itertools import product

import numpy as np
from scipy.stats import norm as _gauss
from scipy.stats import qmc


@lru_cache(maxsize=64)
def sobol_directions(n: int, count: int) -> np.ndarray:
    """Unit vectors from an unscrambled Sobol sequence pushed through the Gaussian quantile."""
    m = int(np.ceil(np.log2(count + 2)))
    pts = qmc.Sobol(d=n, scramble=False).random_base2(m)
    pts = np.clip(pts, 1e-12, 1 - 1e-12)
    G = _gauss.ppf(pts)
    nrm = np.linalg.norm(G, axis=1)
    # the origin and the centre point map to the zero vector
    G = G[nrm > 1e-9][:count] / nrm[nrm > 1e-9][:count, None]
    G.setflags(write=False)
    return G


@lru_cache(maxsize=64)
def structured_directions(n: int, max_patterns: int = 512) -> np.ndarray:
    """Coordinate axes, coordinate-pair diagonals and sign patterns."""
    rows = []
    eye = np.eye(n)
    for i in range(n):
        rows.append(eye[i])
        rows.append(-eye[i])
    if n <= 48:
        for i in range(n):
            for j in range(i + 1, n):
                for s in (1.0, -1.0):
                    v = eye[i] + s * eye[j]
                    rows.append(v / np.sqrt(2.0))
                    rows.append(-v / np.sqrt(2.0))
    if n <= 9:
        for signs in product((1.0, -1.0), repeat=n):
            rows.append(np.array(signs) / np.sqrt(n))
    else:
        rng_free = sobol_directions(n, max_patterns)
        rows.extend(np.sign(rng_free) / np.sqrt(n))
    D = np.unique(np.round(np.array(rows), 15), axis=0)
    D.setflags(write=False)
    return D


def directions(n: int, count: int = 2048) -> np.ndarray:
    S = structured_directions(n)
    return np.concatenate([S, sobol_directions(n, count)], axis=0)
