"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time from the environment variable
``CROSSPANEL_BACKEND``:

* ``numba``  -- JIT-compiled kernels (default when numba imports cleanly)
* ``numpy``  -- vectorized numpy implementations, no compilation

Both paths are bit-deterministic for fixed inputs (fixed summation order
within each backend), but they are not bit-identical to each other.

Channel vectors enter these kernels reshaped to (n_y, n_z); entry (iy, iz)
corresponds to flat index iy * n_z + iz. The direction-cosine pair (u, w)
is u = cos(theta)*sin(phi) for the y-axis phase and w = sin(theta) for the
z-axis phase, each stepping pi per element.
"""

import os

import numpy as np

__all__ = [
    "BACKEND",
    "corr_grid_scores",
    "corr_point",
    "spherical_entries",
    "warmup",
]


def _py_corr_grid_scores(h2: np.ndarray, w: np.ndarray, u: np.ndarray) -> np.ndarray:
    """|sum_{iy,iz} h2[iy,iz] * exp(-j*pi*(iy*u + iz*w))| on a (theta, phi) grid.

    h2: (n_y, n_z) complex; w: (T,) sin-elevations; u: (T, P) y-direction
    cosines. Returns (T, P) float scores (unnormalized matched-filter
    magnitudes).
    """
    ny, nz = h2.shape
    ez = np.exp(-1j * np.pi * np.outer(w, np.arange(nz)))  # (T, nz)
    m = ez @ h2.T  # (T, ny): z-reduced channel per elevation row
    ey = np.exp(-1j * np.pi * u[..., None] * np.arange(ny))  # (T, P, ny)
    return np.abs(np.einsum("tpy,ty->tp", ey, m))


def _py_corr_point(h2: np.ndarray, u: float, w: float) -> complex:
    """Unnormalized steering correlation sum_{iy,iz} h2 * exp(-j*pi*(iy*u+iz*w))."""
    ny, nz = h2.shape
    ey = np.exp(-1j * np.pi * u * np.arange(ny))
    ez = np.exp(-1j * np.pi * w * np.arange(nz))
    return complex(ey @ h2 @ ez)


def _py_spherical_entries(positions: np.ndarray, source: np.ndarray, lam: float) -> np.ndarray:
    """Per-element spherical-wave coefficients (lam/4*pi*r)*exp(-j*2*pi*r/lam)."""
    r = np.sqrt(np.sum((positions - source) ** 2, axis=1))
    return (lam / (4.0 * np.pi * r)) * np.exp(-2j * np.pi * r / lam)


def _resolve_backend() -> str:
    requested = os.environ.get("CROSSPANEL_BACKEND", "").strip().lower()
    if requested not in ("", "numba", "numpy"):
        raise ValueError(
            f"CROSSPANEL_BACKEND must be 'numba' or 'numpy', got {requested!r}"
        )
    if requested == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if requested == "numba":
            raise
        return "numpy"
    return "numba"


BACKEND = _resolve_backend()


if BACKEND == "numba":
    from numba import njit

    @njit(cache=True)
    def _nb_corr_grid_scores(h2, w, u):
        ny, nz = h2.shape
        t_count = w.shape[0]
        p_count = u.shape[1]
        out = np.empty((t_count, p_count))
        m = np.empty(ny, np.complex128)
        for t in range(t_count):
            bz = np.exp(-1j * np.pi * w[t])
            for iy in range(ny):
                acc = 0.0 + 0.0j
                e = 1.0 + 0.0j
                for iz in range(nz):
                    acc += e * h2[iy, iz]
                    e *= bz
                m[iy] = acc
            for p in range(p_count):
                by = np.exp(-1j * np.pi * u[t, p])
                c = 0.0 + 0.0j
                e = 1.0 + 0.0j
                for iy in range(ny):
                    c += e * m[iy]
                    e *= by
                out[t, p] = abs(c)
        return out

    @njit(cache=True)
    def _nb_corr_point(h2, u, w):
        ny, nz = h2.shape
        by = np.exp(-1j * np.pi * u)
        bz = np.exp(-1j * np.pi * w)
        c = 0.0 + 0.0j
        ey = 1.0 + 0.0j
        for iy in range(ny):
            acc = 0.0 + 0.0j
            ez = 1.0 + 0.0j
            for iz in range(nz):
                acc += ez * h2[iy, iz]
                ez *= bz
            c += ey * acc
            ey *= by
        return c

    @njit(cache=True)
    def _nb_spherical_entries(positions, source, lam):
        n = positions.shape[0]
        out = np.empty(n, np.complex128)
        k = 2.0 * np.pi / lam
        for i in range(n):
            dx = positions[i, 0] - source[0]
            dy = positions[i, 1] - source[1]
            dz = positions[i, 2] - source[2]
            r = np.sqrt(dx * dx + dy * dy + dz * dz)
            out[i] = (lam / (4.0 * np.pi * r)) * np.exp(-1j * k * r)
        return out

    corr_grid_scores = _nb_corr_grid_scores
    spherical_entries = _nb_spherical_entries

    def corr_point(h2, u, w):
        return complex(_nb_corr_point(h2, u, w))

else:
    corr_grid_scores = _py_corr_grid_scores
    corr_point = _py_corr_point
    spherical_entries = _py_spherical_entries


def warmup():
    """Trigger JIT compilation (no-op on the numpy backend)."""
    h2 = np.ones((2, 2), np.complex128)
    corr_grid_scores(h2, np.zeros(1), np.zeros((1, 1)))
    corr_point(h2, 0.0, 0.0)
    spherical_entries(np.zeros((1, 3)), np.ones(3), 1.0)
