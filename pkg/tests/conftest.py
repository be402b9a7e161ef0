import math

import numpy as np
import pytest

import curvewave as cw


@pytest.fixture(scope="session")
def frame64():
    return cw.build_frame(cw.FrameParams(n=64, scales=4))


@pytest.fixture(scope="session")
def frame128():
    return cw.build_frame(cw.FrameParams(n=128, scales=5))


@pytest.fixture(scope="session")
def frame256():
    return cw.build_frame(cw.FrameParams(n=256, scales=6))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_field(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def rotated_box_energy(table, mu, f, half_major, half_minor):
    """Energy of f inside the rotated box around the center of mu."""
    wedge = table.wedge(mu.j, mu.ell)
    n = table.n
    e = np.array([math.cos(wedge.theta), math.sin(wedge.theta)])
    x0 = table.center(mu)
    g = np.arange(n) / n
    r1 = np.mod(g[:, None] - x0[0] + 0.5, 1.0) - 0.5
    r2 = np.mod(g[None, :] - x0[1] + 0.5, 1.0) - 0.5
    u_minor = np.abs(e[0] * r1 + e[1] * r2)
    u_major = np.abs(-e[1] * r1 + e[0] * r2)
    box = (u_minor <= half_minor) & (u_major <= half_major)
    return float(np.sum(np.abs(f[box]) ** 2))
