"""Seed derivation and trial-state sampling shared by the suites and the scanner."""

from __future__ import annotations

import zlib

import numpy as np

from ..states import StateSpec, build


def derive_seed(base: int, stream: str, *keys: int) -> int:
    """Deterministic 32-bit seed for (base seed, named stream, integer keys)."""
    entropy = [int(base) & 0xFFFFFFFF, zlib.crc32(stream.encode()), *(int(k) for k in keys)]
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint32)[0])


def sample_spec(n: int, d: int, ensemble: str, seed: int, stream: str, trial: int) -> dict:
    """State spec for one trial.

    ``ensemble`` is ``"pure"`` (Haar pure), ``"mixed"`` (induced measure with
    rank 2 or full rank, equally likely) or ``"mix"`` (half pure, half mixed).
    """
    rng = np.random.default_rng(derive_seed(seed, stream, trial, 0))
    state_seed = derive_seed(seed, stream, trial, 1)
    dims = [d] * n
    if ensemble == "pure" or (ensemble == "mix" and rng.random() < 0.5):
        return StateSpec("random_pure", {"dims": dims, "seed": state_seed}).to_dict()
    if ensemble not in ("mixed", "mix"):
        raise ValueError(f"unknown ensemble {ensemble!r}")
    rank = 2 if rng.random() < 0.5 else d**n
    return StateSpec("random_mixed", {"dims": dims, "rank": rank, "seed": state_seed}).to_dict()


def aux_seed(seed: int, stream: str, trial: int) -> int:
    return derive_seed(seed, stream, trial, 2)


def build_spec(spec: dict):
    return build(StateSpec.from_dict(spec))

