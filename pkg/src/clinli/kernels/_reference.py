"""Plain numpy/python reference implementations of the hot kernels.

These define the semantics; the numba backend in ``_jit`` mirrors them
loop for loop. Keep the two files in sync.
"""

import numpy as np


def levenshtein(a, b):
    """Edit distance between two int sequences (insert/delete/substitute, cost 1)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0:
        return int(b.size)
    if b.size == 0:
        return int(a.size)
    prev = np.arange(b.size + 1, dtype=np.int64)
    cur = np.zeros(b.size + 1, dtype=np.int64)
    for i in range(1, a.size + 1):
        cur[0] = i
        for j in range(1, b.size + 1):
            sub = prev[j - 1] + (0 if a[i - 1] == b[j - 1] else 1)
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, sub)
        prev, cur = cur, prev
    return int(prev[b.size])


def _sigmoid(x):
    if x >= 0.0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


def sgns_epoch(
    tokens,
    offsets,
    word_vecs,
    ngram_vecs,
    out_vecs,
    ngram_ids,
    ngram_offsets,
    windows,
    neg_draws,
    n_negative,
    max_window,
    lr_start,
    lr_end,
    step_offset,
    total_steps,
):
    """One skip-gram negative-sampling sweep over the corpus, in place.

    ``windows`` holds the pre-drawn dynamic window per position and
    ``neg_draws`` the pre-drawn negative token ids, indexed by
    ``(position * 2*max_window + slot) * n_negative + k`` so both backends
    consume randomness identically. Returns (loss_sum, pair_count); the
    loss is the negative log likelihood summed over (center, context) pairs.
    """
    loss_sum = 0.0
    n_pairs = 0
    pos = 0
    for s in range(offsets.size - 1):
        start, stop = offsets[s], offsets[s + 1]
        for i in range(start, stop):
            center = tokens[i]
            step = step_offset + pos
            frac = step / total_steps if total_steps > 0 else 0.0
            lr = lr_start + (lr_end - lr_start) * frac
            w = windows[pos]
            g_lo, g_hi = ngram_offsets[center], ngram_offsets[center + 1]
            vec = word_vecs[center].copy()
            for gi in range(g_lo, g_hi):
                vec += ngram_vecs[ngram_ids[gi]]
            grad_in = np.zeros_like(vec)
            touched = False
            slot = 0
            for d in range(-w, w + 1):
                j = i + d
                if d == 0:
                    continue
                if j < start or j >= stop:
                    slot += 1
                    continue
                context = tokens[j]
                touched = True
                # positive target
                score = _sigmoid(float(vec @ out_vecs[context]))
                loss_sum -= np.log(max(score, 1e-12))
                g = (1.0 - score) * lr
                grad_in += g * out_vecs[context]
                out_vecs[context] += g * vec
                # negative targets
                base = (pos * 2 * max_window + slot) * n_negative
                for k in range(n_negative):
                    neg = neg_draws[base + k]
                    if neg == center:
                        continue
                    score = _sigmoid(float(vec @ out_vecs[neg]))
                    loss_sum -= np.log(max(1.0 - score, 1e-12))
                    g = (0.0 - score) * lr
                    grad_in += g * out_vecs[neg]
                    out_vecs[neg] += g * vec
                n_pairs += 1
                slot += 1
            if touched:
                word_vecs[center] += grad_in
                for gi in range(g_lo, g_hi):
                    ngram_vecs[ngram_ids[gi]] += grad_in
            pos += 1
    return loss_sum, n_pairs


def best_split(x, residual, min_leaf):
    """Best squared-error split over all feature columns.

    Returns (feature, threshold, gain); feature is -1 when no split with
    positive gain exists. Ties resolve to the lowest feature index and the
    lowest threshold (strict-greater comparison in scan order).
    """
    n, d = x.shape
    total = residual.sum()
    base = total * total / n
    best_feat = -1
    best_thr = 0.0
    best_gain = 0.0
    for f in range(d):
        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        rs = residual[order]
        left_sum = 0.0
        for i in range(n - 1):
            left_sum += rs[i]
            if xs[i + 1] <= xs[i]:
                continue
            nl = i + 1
            nr = n - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            right_sum = total - left_sum
            gain = left_sum * left_sum / nl + right_sum * right_sum / nr - base
            if gain > best_gain + 1e-12:
                best_gain = gain
                best_feat = f
                best_thr = 0.5 * (xs[i] + xs[i + 1])
    return best_feat, best_thr, best_gain
