"""Numba-compiled twins of the reference kernels.

Semantics mirror ``_reference`` loop for loop; randomness is pre-drawn by
the caller and indexed by formula, so the two backends agree up to
floating-point accumulation order.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def levenshtein(a, b):
    if a.size == 0:
        return int(b.size)
    if b.size == 0:
        return int(a.size)
    prev = np.arange(b.size + 1)
    cur = np.zeros(b.size + 1, dtype=np.int64)
    for i in range(1, a.size + 1):
        cur[0] = i
        for j in range(1, b.size + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            sub = prev[j - 1] + cost
            dele = prev[j] + 1
            ins = cur[j - 1] + 1
            best = sub
            if dele < best:
                best = dele
            if ins < best:
                best = ins
            cur[j] = best
        tmp = prev
        prev = cur
        cur = tmp
    return int(prev[b.size])


@njit(cache=True, inline="always")
def _sigmoid(x):
    if x >= 0.0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


@njit(cache=True)
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
    dim = word_vecs.shape[1]
    vec = np.zeros(dim)
    grad_in = np.zeros(dim)
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
            for c in range(dim):
                vec[c] = word_vecs[center, c]
                grad_in[c] = 0.0
            for gi in range(g_lo, g_hi):
                gid = ngram_ids[gi]
                for c in range(dim):
                    vec[c] += ngram_vecs[gid, c]
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
                dot = 0.0
                for c in range(dim):
                    dot += vec[c] * out_vecs[context, c]
                score = _sigmoid(dot)
                loss_sum -= np.log(max(score, 1e-12))
                g = (1.0 - score) * lr
                for c in range(dim):
                    grad_in[c] += g * out_vecs[context, c]
                for c in range(dim):
                    out_vecs[context, c] += g * vec[c]
                base = (pos * 2 * max_window + slot) * n_negative
                for k in range(n_negative):
                    neg = neg_draws[base + k]
                    if neg == center:
                        continue
                    dot = 0.0
                    for c in range(dim):
                        dot += vec[c] * out_vecs[neg, c]
                    score = _sigmoid(dot)
                    loss_sum -= np.log(max(1.0 - score, 1e-12))
                    g = (0.0 - score) * lr
                    for c in range(dim):
                        grad_in[c] += g * out_vecs[neg, c]
                    for c in range(dim):
                        out_vecs[neg, c] += g * vec[c]
                n_pairs += 1
                slot += 1
            if touched:
                for c in range(dim):
                    word_vecs[center, c] += grad_in[c]
                for gi in range(g_lo, g_hi):
                    gid = ngram_ids[gi]
                    for c in range(dim):
                        ngram_vecs[gid, c] += grad_in[c]
            pos += 1
    return loss_sum, n_pairs


@njit(cache=True)
def best_split(x, residual, min_leaf):
    n, d = x.shape
    total = 0.0
    for i in range(n):
        total += residual[i]
    base = total * total / n
    best_feat = -1
    best_thr = 0.0
    best_gain = 0.0
    for f in range(d):
        order = np.argsort(x[:, f], kind="mergesort")
        left_sum = 0.0
        for i in range(n - 1):
            left_sum += residual[order[i]]
            if x[order[i + 1], f] <= x[order[i], f]:
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
                best_thr = 0.5 * (x[order[i], f] + x[order[i + 1], f])
    return best_feat, best_thr, best_gain
