"""Brute-force survivor enumeration, independent of the counting engine.

Two routes with different failure modes:

* oracle_series enumerates the survivors themselves, extending the packed
  word list one digit at a time and discarding words whose newest window is
  forbidden.  Vectorized over numpy int64 arrays, so it stays usable up to
  millions of survivors.
* fullscan_count inspects every one of the b^k words of length k and tests
  all of its windows.  Pure definition, exponential cost; used to certify
  the incremental route on small cases.

Both work purely from HoleSchedule.hole_at_packed and never touch the
stepping engine.
"""

from __future__ import annotations

import random

import numpy as np

from holeshift import (
    ExplicitSchedule,
    HoleSchedule,
    MultiSchedule,
    Params,
    unpack_word,
)


def oracle_series(s: HoleSchedule, k_max: int) -> list[int]:
    """Survivor counts for k = 0..k_max by explicit survivor enumeration."""
    p = s.params
    b, m = p.b, p.m
    counts = [1]
    words = np.zeros(1, dtype=np.int64)  # packed words, length 0
    window_mod = b**m
    for k in range(1, k_max + 1):
        digits = np.arange(b, dtype=np.int64)
        words = (words[:, None] * b + digits[None, :]).ravel()
        if k >= m:
            holes = np.array(sorted(s.hole_at_packed(k - m)), dtype=np.int64)
            keep = ~np.isin(words % window_mod, holes)
            words = words[keep]
        counts.append(int(words.shape[0]))
        if words.shape[0] == 0:
            counts.extend([0] * (k_max - k))
            break
    return counts


def fullscan_count(s: HoleSchedule, k: int) -> int:
    """Survivor count at length k by scanning all b^k words."""
    p = s.params
    b, m = p.b, p.m
    if k < m:
        return b**k
    words = np.arange(b**k, dtype=np.int64)
    alive = np.ones(words.shape[0], dtype=bool)
    window_mod = b**m
    for i in range(k - m + 1):
        # window starting at position i ends m + i digits from the left
        shift = b ** (k - m - i)
        vals = (words // shift) % window_mod
        holes = np.array(sorted(s.hole_at_packed(i)), dtype=np.int64)
        alive &= ~np.isin(vals, holes)
    return int(alive.sum())


def survivor_words(s: HoleSchedule, k: int) -> list[tuple[int, ...]]:
    """The survivors themselves, unpacked, for small k."""
    p = s.params
    b, m = p.b, p.m
    words = np.zeros(1, dtype=np.int64)
    for j in range(1, k + 1):
        digits = np.arange(b, dtype=np.int64)
        words = (words[:, None] * b + digits[None, :]).ravel()
        if j >= m:
            holes = np.array(sorted(s.hole_at_packed(j - m)), dtype=np.int64)
            words = words[~np.isin(words % (b**m), holes)]
    return [unpack_word(int(v), k, p) for v in words]


def random_explicit(p: Params, seed: int, positions: int = 16) -> ExplicitSchedule:
    """Seeded single-hole schedule: one random word per position, cycled."""
    rng = random.Random(seed)
    sets = tuple(
        (tuple(rng.randrange(p.b) for _ in range(p.m)),) for _ in range(positions)
    )
    return ExplicitSchedule(params=p, hole_sets=sets)


def random_two_hole(p: Params, seed: int, positions: int = 16) -> MultiSchedule:
    """Seeded two-hole schedule: union of two random single-hole schedules."""
    return MultiSchedule(
        params=p,
        children=(
            random_explicit(p, seed * 2 + 1, positions),
            random_explicit(p, seed * 2 + 2, positions),
        ),
    )
