import numpy as np
import pytest

from akverify.family import presets
from akverify.jets import N_COEFFS
from akverify.tensorjets import JT
from akverify.curvature import MetricField


@pytest.fixture(scope="session")
def family_presets():
    return presets()


@pytest.fixture(scope="session")
def hyperbolic_geom(family_presets):
    return family_presets["hyperbolic3sym"].geometry((1.37, 0.21, 0.33, -0.41))


@pytest.fixture(scope="session")
def poly2_geom(family_presets):
    return family_presets["poly2"].geometry((1.41, 0.17, 0.52, -0.33))


@pytest.fixture(scope="session")
def gh_geom(family_presets):
    return family_presets["gibbons_hawking"].geometry((1.37, 0.21, 0.33, -0.41))


def random_polynomial_metric(seed: int, amplitude: float = 0.08) -> MetricField:
    """Identity plus a random quadratic polynomial perturbation."""
    rng = np.random.default_rng(seed)
    lin = rng.normal(size=(4, 4, 4)) * amplitude
    quad = rng.normal(size=(4, 4, 4, 4)) * amplitude * 0.5

    def fn(p):
        xs = JT.coords(p)
        g = JT(np.zeros((4, 4, N_COEFFS)))
        for i in range(4):
            g.c[i, i, 0] = 1.0
        for i in range(4):
            for j in range(i, 4):
                pert = None
                for a in range(4):
                    term = xs[a] * lin[i, j, a]
                    pert = term if pert is None else pert + term
                    for b in range(a, 4):
                        pert = pert + xs[a] * xs[b] * quad[i, j, a, b]
                g.c[i, j] += pert.c
                if i != j:
                    g.c[j, i] += pert.c
                g.order = min(g.order, pert.order)
        return g

    return MetricField(fn, name=f"randpoly{seed}")
