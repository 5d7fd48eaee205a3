import numpy as np
import pytest

from crosspanel import PanelConfig, TwoPanelLayout
from crosspanel import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT compilation happens once here so per-test timings measure algorithms,
    # not compiler startup.
    _kernels.warmup()


@pytest.fixture
def panel28():
    return PanelConfig(28e9, 16, 16, (0.0, 0.0, 15.0))


@pytest.fixture
def panel39():
    return PanelConfig(39e9, 16, 16, (0.0, 0.0, 16.0))


@pytest.fixture
def layout(panel28, panel39):
    return TwoPanelLayout(panel28, panel39)


def steering_loop_oracle(panel, theta, phi):
    """Independent per-entry evaluation of the array response (test oracle)."""
    n = panel.n_elements
    out = np.empty(n, dtype=complex)
    u = np.cos(theta) * np.sin(phi)
    w = np.sin(theta)
    for iy in range(panel.n_y):
        for iz in range(panel.n_z):
            out[iy * panel.n_z + iz] = np.exp(1j * np.pi * (iy * u + iz * w)) / np.sqrt(n)
    return out


def plant_separated_paths(rng, n_paths, n_y=16, n_z=16):
    """Random paths pairwise separated by >= 2 null-to-null beamwidths in
    direction-cosine space (separation in at least one coordinate)."""
    import math
    from crosspanel import PathComponent

    bw_u, bw_w = 2.0 / n_y, 2.0 / n_z
    accepted = []
    while len(accepted) < n_paths:
        theta = rng.uniform(-1.3, 1.3)
        phi = rng.uniform(0.1, 1.47)  # front hemisphere, matching x > 0 sources
        u = math.cos(theta) * math.sin(phi)
        w = math.sin(theta)
        ok = all(abs(u - au) >= 2 * bw_u or abs(w - aw) >= 2 * bw_w for au, aw, *_ in accepted)
        if ok:
            accepted.append((u, w, theta, phi))
    paths = []
    for _, _, theta, phi in accepted:
        mag = rng.uniform(0.5, 1.5)
        gain = mag * np.exp(2j * np.pi * rng.uniform())
        paths.append(PathComponent(complex(gain), theta, phi))
    return paths


def match_sets(estimated, planted):
    """Nearest-neighbor assignment in (theta, phi); greedy order-insensitive."""
    import math

    cand = sorted(
        (math.hypot(e.theta - p.theta, e.phi - p.phi), i, j)
        for i, p in enumerate(planted) for j, e in enumerate(estimated)
    )
    out = {}
    used = set()
    for _, i, j in cand:
        if i in out or j in used:
            continue
        out[i] = estimated[j]
        used.add(j)
    return out
