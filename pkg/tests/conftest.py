import numpy as np
import pytest

from cdreval.core import EmbeddingRowMeta, EmbeddingTable, Role


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_table(rng, n_real=4, n_generated=6, dim=5, config_id="cfg-a", prompt_id="p0"):
    metas, rows = [], []
    for i in range(n_real):
        metas.append(EmbeddingRowMeta(f"r-{i:03d}", prompt_id, Role.REAL))
        rows.append(rng.normal(size=dim))
    for i in range(n_generated):
        metas.append(EmbeddingRowMeta(f"g-{i:03d}", prompt_id, Role.GENERATED, config_id=config_id))
        rows.append(rng.normal(size=dim))
    return EmbeddingTable(dim, metas, rows)
