import sys
import time
from pathlib import Path

import numpy as np
import pytest

SESSION_T0 = time.time()

sys.path.insert(0, str(Path(__file__).parent))

from eval3d.assets import normalize_mesh, with_normals
from eval3d.camrig import RigSpec, build_rig
from eval3d.primitives import make_cube, make_icosphere


@pytest.fixture(scope="session")
def icosphere3():
    return with_normals(normalize_mesh(make_icosphere(3)))


@pytest.fixture(scope="session")
def cube():
    return with_normals(make_cube())


@pytest.fixture(scope="session")
def rig12_512():
    return build_rig(RigSpec(n_views=12, resolution=512))


@pytest.fixture(scope="session")
def rig12_128():
    return build_rig(RigSpec(n_views=12, resolution=128))


@pytest.fixture(scope="session")
def sphere_render_512(icosphere3, rig12_512):
    """View-0 buffers of the icosphere at full resolution (shared: slow)."""
    from eval3d.raster import rasterize

    return rasterize(icosphere3, rig12_512[0])


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
