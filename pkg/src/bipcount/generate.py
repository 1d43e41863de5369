"""Seeded sampling from the union-of-matchings model G^bip_{n,Delta}.

Generator ``pcg64-fy/1``:

* the master seed feeds ``numpy.random.SeedSequence(seed)``;
* ``SeedSequence.spawn(delta)`` gives one child sequence per matching, so
  matching ``i`` depends only on ``(seed, i)`` and matchings can be generated
  in any order or in parallel;
* each child drives a ``PCG64`` bit generator, and the matching is a
  Fisher-Yates shuffle of ``0..n-1``: for ``i = n-1, ..., 1`` swap position
  ``i`` with position ``j`` drawn uniformly from ``0..i``.  The ``n-1`` draws
  come from a single vectorised ``Generator.integers`` call, highest ``i``
  first.

Changing any of these steps changes every fixture, so bump the version tag
if you do.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .graph import BipartiteGraph, build_graph

GENERATOR_VERSION = "pcg64-fy/1"


@dataclass(frozen=True)
class SampleConfig:
    n: int
    delta: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.delta < 1:
            raise PreconditionError(f"need n >= 1 and delta >= 1, got {self}")
        if not 0 <= self.seed < 2**64:
            raise PreconditionError("seed must be a 64-bit natural number")


def matching_seeds(seed: int, delta: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(delta)


def fisher_yates(n: int, rng: np.random.Generator) -> list[int]:
    perm = list(range(n))
    if n > 1:
        idx = np.arange(n - 1, 0, -1)
        draws = rng.integers(0, idx + 1)
        for i, j in zip(idx.tolist(), draws.tolist()):
            perm[i], perm[j] = perm[j], perm[i]
    return perm


def sample_matchings(cfg: SampleConfig) -> list[list[int]]:
    return [
        fisher_yates(cfg.n, np.random.Generator(np.random.PCG64(child)))
        for child in matching_seeds(cfg.seed, cfg.delta)
    ]


def sample_graph(cfg: SampleConfig) -> BipartiteGraph:
    return build_graph(cfg.n, cfg.delta, sample_matchings(cfg))
