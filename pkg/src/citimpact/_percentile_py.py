"""Pure-Python percentile kernel, fallback for the compiled extension.

Both backends must evaluate the same float expressions so results are
bit-identical whichever one is loaded:

    strict: (100.0 * L) / N
    weak:   (100.0 * (L + T)) / N
    mid:    (50.0 * (2L + T)) / N

with L the number of strictly lower citation counts and T the tie-group
size (the paper itself included).
"""

from bisect import bisect_right

BACKEND = "pure"

_RULES = ("strict", "weak", "mid")


def percentile_values(citations, rule):
    """Percentile value in [0, 100] for every count, input order preserved."""
    n = len(citations)
    if n == 0:
        raise ValueError("empty reference set")
    if rule not in _RULES:
        raise ValueError(f"unknown counting rule: {rule!r}")
    order = sorted(range(n), key=lambda i: citations[i])
    out = [0.0] * n
    i = 0
    while i < n:
        value = citations[order[i]]
        j = i
        while j < n and citations[order[j]] == value:
            j += 1
        if rule == "strict":
            score = (100.0 * i) / n
        elif rule == "weak":
            score = (100.0 * j) / n
        else:
            score = (50.0 * (i + j)) / n
        for k in range(i, j):
            out[order[k]] = score
        i = j
    return out


def class_counts(values, lowers):
    """Count values per rank class, classes being closed below / open above
    (the last class absorbs everything up to and including the top value).

    ``lowers`` is the ascending list of class lower bounds.
    """
    k = len(lowers)
    if k == 0:
        raise ValueError("scheme has no classes")
    counts = [0] * k
    for v in values:
        i = bisect_right(lowers, v) - 1
        if i < 0:
            raise ValueError(f"value {v} below the first class boundary {lowers[0]}")
        counts[i] += 1
    return counts
