"""Pure-numpy hot kernels (fallback backend).

These mirror the compiled kernels in ``_kernels_cy`` draw for draw.  The
shared contract, which tests enforce bit-exactly across backends:

pa1_targets(n, delta, gen)
    Single-edge preferential attachment.  Vertex 1 gets a self-loop for
    free (no draws).  Each later vertex v chooses its target with weights
    (1+delta) on itself, D_i(v-1)+delta on each existing vertex i.

    delta >= 0: exactly 2 uniforms per vertex v >= 2.  The first picks the
    branch against cumulative mass [1+delta | 2s | s*delta] where s = v-1;
    the second picks a uniform endpoint slot (degree-proportional part) or
    a uniform vertex index (flat delta part).  The second uniform is drawn
    and discarded on the self-loop branch, which keeps the stream aligned
    regardless of outcomes.

    -1 < delta < 0: exactly 1 uniform per vertex, resolved by a linear scan
    over per-vertex weights D_i + delta (self weight 1+delta scanned last).
    Slot sampling is unusable here because per-slot mass is not uniform.

mpk_step(indptr, endpoints, colours, k, gen)
    One synchronous round of k-sample local majority on a CSR slot array
    (0-based; a self-loop contributes two slots).  Per vertex, in vertex
    order: degree n >= k consumes exactly k uniforms (partial Fisher-Yates
    over a scratch copy of its slots, round i swaps position i with
    i + min(floor(u*(n-i)), n-i-1)); n < k odd consumes none (poll all);
    n < k even consumes one uniform naming the slot to drop.  The polled
    sample size is always odd, so majorities are strict.

voter_step(indptr, endpoints, colours, gen)
    One uniform per vertex in vertex order; each vertex copies the colour
    of one uniformly chosen slot.

Vectorised numpy consumes each block of uniforms up-front; interleaving is
reconstructed by per-vertex draw offsets so the sequential compiled loop
sees the same values at the same points.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def pa1_targets(n: int, delta: float, gen: np.random.Generator) -> np.ndarray:
    """Targets (1-based, targets[v-1] <= v) of the n single-edge attachment steps."""
    targets = np.empty(n, dtype=np.int64)
    targets[0] = 1
    if n == 1:
        return targets
    if delta >= 0.0:
        return _pa1_slots(n, delta, gen, targets)
    return _pa1_scan(n, delta, gen, targets)


def _pa1_slots(n, delta, gen, targets):
    # endpoints[2s], endpoints[2s+1] are the slots added by vertex s+1, so a
    # uniform slot of the first 2s is a degree-proportional vertex draw.
    endpoints = np.empty(2 * n, dtype=np.int64)
    endpoints[0] = 1
    endpoints[1] = 1
    u = gen.random(2 * (n - 1))
    one_plus = 1.0 + delta
    for v in range(2, n + 1):
        s = v - 1
        den = s * (2.0 + delta) + one_plus
        x = u[2 * (v - 2)] * den
        u2 = u[2 * (v - 2) + 1]
        if x < one_plus:
            target = v
        elif x < one_plus + 2.0 * s:
            j = int(u2 * (2.0 * s))
            if j >= 2 * s:
                j = 2 * s - 1
            target = int(endpoints[j])
        else:
            j = int(u2 * float(s))
            if j >= s:
                j = s - 1
            target = j + 1
        targets[v - 1] = target
        endpoints[2 * s] = v
        endpoints[2 * s + 1] = target
    return targets


def _pa1_scan(n, delta, gen, targets):
    deg = np.zeros(n + 1, dtype=np.float64)
    deg[1] = 2.0
    u = gen.random(n - 1)
    for v in range(2, n + 1):
        s = v - 1
        den = s * (2.0 + delta) + (1.0 + delta)
        x = u[v - 2] * den
        target = v
        acc = 0.0
        for i in range(1, s + 1):
            acc += deg[i] + delta
            if x < acc:
                target = i
                break
        targets[v - 1] = target
        deg[target] += 1.0
        deg[v] += 1.0
    return targets


def mpk_step(
    indptr: np.ndarray,
    endpoints: np.ndarray,
    colours: np.ndarray,
    k: int,
    gen: np.random.Generator,
) -> np.ndarray:
    """Next colour vector (uint8, 1 = red) after one synchronous majority round."""
    t = indptr.shape[0] - 1
    start = indptr[:-1]
    deg = np.diff(indptr)
    is_big = deg >= k
    odd = (deg & 1) == 1
    draws = np.where(is_big, k, np.where(odd, 0, 1))
    offs = np.empty(t + 1, dtype=np.int64)
    offs[0] = 0
    np.cumsum(draws, out=offs[1:])
    u = gen.random(int(offs[-1]))

    slot_red = colours[endpoints].astype(np.int64)
    seg_red = np.add.reduceat(slot_red, start)
    size = np.where(is_big, k, np.where(odd, deg, deg - 1))
    red = np.empty(t, dtype=np.int64)

    small_odd = ~is_big & odd
    red[small_odd] = seg_red[small_odd]

    idx = np.nonzero(~is_big & ~odd)[0]
    if idx.size:
        j = (u[offs[idx]] * deg[idx]).astype(np.int64)
        np.minimum(j, deg[idx] - 1, out=j)
        red[idx] = seg_red[idx] - slot_red[start[idx] + j]

    idx = np.nonzero(is_big)[0]
    if idx.size:
        scratch = endpoints.copy()
        st = start[idx]
        nn = deg[idx]
        ob = offs[idx]
        for i in range(k):
            j = (u[ob + i] * (nn - i)).astype(np.int64)
            np.minimum(j, nn - i - 1, out=j)
            a = st + i
            b = a + j
            tmp = scratch[a]
            scratch[a] = scratch[b]
            scratch[b] = tmp
        acc = np.zeros(idx.size, dtype=np.int64)
        for i in range(k):
            acc += colours[scratch[st + i]]
        red[idx] = acc

    return (2 * red > size).astype(np.uint8)


def voter_step(
    indptr: np.ndarray,
    endpoints: np.ndarray,
    colours: np.ndarray,
    gen: np.random.Generator,
) -> np.ndarray:
    """Next colour vector after one synchronous single-sample (voter) round."""
    deg = np.diff(indptr)
    u = gen.random(indptr.shape[0] - 1)
    j = (u * deg).astype(np.int64)
    np.minimum(j, deg - 1, out=j)
    return colours[endpoints[indptr[:-1] + j]]
