"""Suffix array and LCP array over integer sequences."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def suffix_array(text: Sequence[int]) -> np.ndarray:
    """Prefix doubling; O(n log^2 n) but vectorized."""
    s = np.asarray(text, dtype=np.int64)
    n = len(s)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.unique(s, return_inverse=True)[1].astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[:n - k] = rank[k:] if k < n else second[:0]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        fresh = np.empty(n, dtype=bool)
        fresh[0] = True
        fresh[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new = np.cumsum(fresh) - 1
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = new
        if new[-1] == n - 1 or k >= n:
            return sa
        k *= 2


def lcp_array(text: Sequence[int], sa: Sequence[int]) -> list[int]:
    """Kasai: ``lcp[r]`` is the common prefix of suffixes ``sa[r-1]`` and ``sa[r]``."""
    n = len(text)
    sa = [int(x) for x in sa]
    rank = [0] * n
    for r, p in enumerate(sa):
        rank[p] = r
    lcp = [0] * n
    h = 0
    for p in range(n):
        r = rank[p]
        if r == 0:
            h = 0
            continue
        q = sa[r - 1]
        while p + h < n and q + h < n and text[p + h] == text[q + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp
