"""Shared name canonicalization and fuzzy suggestions for the registries."""

from __future__ import annotations


def canonical(name: str) -> str:
    """Casefold and collapse whitespace so lookups are format-insensitive."""
    return " ".join(name.split()).casefold()


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance (unit insert/delete/substitute costs)."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ch_a in enumerate(a, start=1):
        current = [i]
        for j, ch_b in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (ch_a != ch_b),
                )
            )
        previous = current
    return previous[-1]


def closest(query: str, candidates: list[str], count: int = 3) -> list[str]:
    """The ``count`` candidates nearest to ``query``, ties broken by name."""
    ranked = sorted(candidates, key=lambda c: (edit_distance(query, c), c))
    return ranked[:count]
