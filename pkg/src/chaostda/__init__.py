"""Chaos detection under coloured noise: the 0-1 test, persistence scores of
p-q density images and persistent entropy of ordinal partition networks."""
from .timeseries import TimeSeries
from .dynsys import SystemParams, simulate
from .noise import NoiseSpec, gen_colored, contaminate
from .zero_one import zero_one_score, subsample_fmax
from .ordinal import EmbeddingParams, opn_from_series
from .tda import (PersistenceDiagram, vr_persistence, sublevel_0d, superlevel_0d,
                  persistence_score, persistent_entropy, normalized_persistent_entropy)
from .pipeline import SweepConfig, run_sweep, zero_one_test, ps_test, opn_test

__all__ = [
    "TimeSeries", "SystemParams", "simulate", "NoiseSpec", "gen_colored", "contaminate",
    "zero_one_score", "subsample_fmax", "EmbeddingParams", "opn_from_series",
    "PersistenceDiagram", "vr_persistence", "sublevel_0d", "superlevel_0d",
    "persistence_score", "persistent_entropy", "normalized_persistent_entropy",
    "SweepConfig", "run_sweep", "zero_one_test", "ps_test", "opn_test",
]
