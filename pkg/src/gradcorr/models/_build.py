"""Helpers for filling symmetric cumulant arrays entry by entry."""

from __future__ import annotations

import itertools

__all__ = ["sym_fill", "pair_fill"]


def sym_fill(arr, idx, value) -> None:
    """Assign value at every permutation of idx (fully symmetric block)."""
    for perm in set(itertools.permutations(idx)):
        arr[perm] = value


def pair_fill(arr, jr, su, value) -> None:
    """Assign value at (j,r,s,u) symmetric separately in (j,r) and (s,u)."""
    for a, b in {tuple(jr), tuple(jr)[::-1]}:
        for c, d in {tuple(su), tuple(su)[::-1]}:
            arr[a, b, c, d] = value
