import pytest

from c960.synth import SynthConfig, gen_corpus


@pytest.fixture(scope="session")
def small_corpus():
    """Six playouts for each of four start positions, all reaching move 20."""
    cfg = SynthConfig(
        seed=20260822,
        sps=(0, 233, 518, 959),
        games_per_sp=6,
        label_rule="material-at-20",
        min_moves=20,
        max_moves=25,
    )
    corpus, diagnostics = gen_corpus(cfg)
    assert not diagnostics
    return corpus
