from pathlib import Path

import numpy as np
import pytest

from interstatis import io_data
from interstatis.ia_linalg import IntervalMatrix, embed_classic
from interstatis.pipeline import StudyInput

WINE_MANIFEST = Path(__file__).resolve().parent.parent / 'interstatis' / 'datasets' / 'wine' / 'manifest.json'


def random_interval_matrix(rng, n, p, scale=5.0, max_radius=1.0):
    centros = rng.uniform(-scale, scale, size=(n, p))
    raios = rng.uniform(0.0, max_radius, size=(n, p))
    return IntervalMatrix.from_centers_radii(centros, raios)


def random_real_tables(rng, n=6, r=3, sizes=(3, 4, 5)):
    return [rng.uniform(-5.0, 5.0, size=(n, int(rng.choice(sizes)))) for _ in range(r)]


def degenerate_study(tables, **kwargs):
    return StudyInput(tables=[embed_classic(t) for t in tables], **kwargs)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def wine_manifest():
    return WINE_MANIFEST


@pytest.fixture(autouse=True)
def _clear_table_cache():
    io_data.invalidate_cache()
    yield
    io_data.invalidate_cache()
