import numpy as np
import pytest

from picpkit import _kernels_py
from picpkit.dataio import Dataset

try:
    from picpkit import _ckernels

    BACKENDS = {"python": _kernels_py, "c": _ckernels}
except ImportError:
    BACKENDS = {"python": _kernels_py}


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    """Run kernel-level tests against every importable backend."""
    return BACKENDS[request.param]


def make_calibrated(m: int, seed: int, scale: float = 1.0) -> Dataset:
    """Normal errors with lognormal uncertainties; z-scores ~ scale*N(0,1)."""
    rng = np.random.default_rng(seed)
    uE = np.exp(rng.normal(0.0, 0.3, m))
    E = scale * rng.standard_normal(m) * uE
    return Dataset(id=f"synth-{seed}-{scale}", E=E, uE=uE)


def make_heavy(m: int, seed: int, nu: float = 2.3) -> Dataset:
    """Heavy-tailed z-scores from unit-variance t(nu)."""
    from picpkit.distributions import sample_ts

    z = sample_ts(nu, m, seed)
    uE = np.ones(m)
    return Dataset(id=f"heavy-{seed}-{nu}", E=z * uE, uE=uE)


def write_csv(path, E, uE) -> str:
    lines = ["E,uE"]
    lines += [f"{float(e)!r},{float(u)!r}" for e, u in zip(E, uE)]
    path.write_text("\n".join(lines) + "\n")
    return str(path)
