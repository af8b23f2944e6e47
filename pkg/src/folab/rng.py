"""Deterministic per-trial random streams.

Every Monte Carlo trial gets its own PCG64 generator keyed by
``SeedSequence((seed, *stream, trial_index))``, so a trial's graph depends
only on the seed and its index, never on execution order or worker count.
Within a trial, the potential edge {u, v} (u < v) is decided by the
(u*n + v)-th uniform draw of that stream.
"""

import numpy as np


def trial_rng(seed, trial_index, *stream):
    """Generator for one trial.  ``stream`` adds optional cell coordinates."""
    return np.random.default_rng(np.random.SeedSequence((int(seed), *map(int, stream), int(trial_index))))


def edge_uniforms(rng, n):
    """The n*n uniform block; entry u*n+v (u < v) decides edge {u, v}."""
    return rng.random(n * n)
