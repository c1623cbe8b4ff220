"""Pure-Python implementations of the hot kernels.

These mirror the compiled Cython extensions (`_edit_c`, `_layout_c`) and are
used whenever the extensions are unavailable. The layout kernel uses the same
xorshift RNG as the compiled version, so both backends follow the same
sampling schedule for a given seed.
"""

from __future__ import annotations

_MASK64 = 0xFFFFFFFFFFFFFFFF


def edit_counts_kernel(ref, hyp):
    """Levenshtein alignment counts between two code sequences.

    Returns (substitutions, deletions, insertions) from a minimal-cost
    unit-cost alignment. Among minimal alignments the backtrace prefers
    match/substitution, then deletion, then insertion.
    """
    m, n = len(ref), len(hyp)
    # dist[i][j] = edit distance between ref[:i] and hyp[:j]
    prev = list(range(n + 1))
    rows = [prev]
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        ri = ref[i - 1]
        for j in range(1, n + 1):
            cost = 0 if ri == hyp[j - 1] else 1
            cur[j] = min(prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1)
        rows.append(cur)
        prev = cur

    subs = dels = ins = 0
    i, j = m, n
    while i > 0 or j > 0:
        here = rows[i][j]
        if i > 0 and j > 0:
            cost = 0 if ref[i - 1] == hyp[j - 1] else 1
            if rows[i - 1][j - 1] + cost == here:
                subs += cost
                i -= 1
                j -= 1
                continue
        if i > 0 and rows[i - 1][j] + 1 == here:
            dels += 1
            i -= 1
            continue
        ins += 1
        j -= 1
    return subs, dels, ins


def _xorshift(state):
    state ^= (state << 13) & _MASK64
    state ^= state >> 7
    state ^= (state << 17) & _MASK64
    return state


def optimize_layout_kernel(embedding, heads, tails, epochs_per_sample,
                           n_epochs, n_vertices, a, b, gamma,
                           initial_alpha, negative_sample_rate, seed):
    """SGD layout optimization over a weighted edge list, in place.

    ``embedding`` is an (n, dim) float64 array; edges are directed (head,
    tail) pairs sampled every ``epochs_per_sample[e]`` epochs. Attractive
    updates move both endpoints; ``negative_sample_rate`` repulsive updates
    per positive edge move only the head. Per-component displacements are
    clipped to +-4 so the layout never diverges to NaN/Inf.
    """
    emb = [list(row) for row in embedding.tolist()]
    heads = list(heads)
    tails = list(tails)
    eps = list(epochs_per_sample)
    n_edges = len(heads)
    dim = len(emb[0]) if emb else 0

    epn = [e / negative_sample_rate for e in eps]
    next_sample = list(eps)
    next_neg = list(epn)
    state = (int(seed) | 1) & _MASK64

    alpha = initial_alpha
    for epoch in range(n_epochs):
        for e in range(n_edges):
            if next_sample[e] > epoch:
                continue
            jrow = emb[heads[e]]
            krow = emb[tails[e]]
            d2 = 0.0
            for d in range(dim):
                diff = jrow[d] - krow[d]
                d2 += diff * diff
            if d2 > 0.0:
                coeff = (-2.0 * a * b * d2 ** (b - 1.0)) / (a * d2 ** b + 1.0)
            else:
                coeff = 0.0
            for d in range(dim):
                g = coeff * (jrow[d] - krow[d])
                if g > 4.0:
                    g = 4.0
                elif g < -4.0:
                    g = -4.0
                jrow[d] += alpha * g
                krow[d] -= alpha * g
            next_sample[e] += eps[e]

            n_neg = int((epoch - next_neg[e]) / epn[e])
            if n_neg < 0:
                n_neg = 0
            for _ in range(n_neg):
                state = _xorshift(state)
                other = state % n_vertices
                if other == heads[e]:
                    continue
                orow = emb[other]
                d2 = 0.0
                for d in range(dim):
                    diff = jrow[d] - orow[d]
                    d2 += diff * diff
                if d2 > 0.0:
                    coeff = (2.0 * gamma * b) / ((0.001 + d2) * (a * d2 ** b + 1.0))
                else:
                    coeff = 0.0
                for d in range(dim):
                    if coeff > 0.0:
                        g = coeff * (jrow[d] - orow[d])
                        if g > 4.0:
                            g = 4.0
                        elif g < -4.0:
                            g = -4.0
                    else:
                        g = 4.0
                    jrow[d] += alpha * g
            next_neg[e] += n_neg * epn[e]
        alpha = initial_alpha * (1.0 - (epoch + 1.0) / n_epochs)

    for i in range(len(emb)):
        for d in range(dim):
            embedding[i, d] = emb[i][d]
