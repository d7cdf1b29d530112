"""numba kernels for the pairwise ZY+YZ rotation circuit.

A rotation exp(-i t (Z_a Y_b + Y_a Z_b)) is real orthogonal; on the amplitude
quadruple (x00, x01, x10, x11) of qubits (a, b) it acts as

    x00' =  c^2 x00 - cs (x01 + x10) - s^2 x11
    x11' = -s^2 x00 - cs (x01 + x10) + c^2 x11
    x01' =  cs (x00 + x11) + c^2 x01 - s^2 x10
    x10' =  cs (x00 + x11) - s^2 x01 + c^2 x10

with c = cos t, s = sin t. Gates are applied tile by tile: all gates of a tile
act on a small qubit set, so the tile's amplitudes are gathered into a local
buffer once, rotated in cache, and scattered back.
"""

from __future__ import annotations

import numpy as np
from numba import njit

LANE_BITS = 5
BLOCK = 4


@njit(cache=True)
def _insert_zero(x, pos):
    return ((x >> pos) << (pos + 1)) | (x & ((1 << pos) - 1))


@njit(cache=True)
def apply_tile(psi, n, qubits, loc_a, loc_b, c2, cs, s2):
    """Apply gates on local qubit pairs (loc_a[g], loc_b[g]) of the sorted
    global qubit list ``qubits``, in order, to ``psi`` in place."""
    K = qubits.shape[0]
    L = min(LANE_BITS, n - K)
    lanes = np.empty(L, np.int64)
    cnt = 0
    b = 0
    while cnt < L:
        taken = False
        for t in range(K):
            if qubits[t] == b:
                taken = True
        if not taken:
            lanes[cnt] = b
            cnt += 1
        b += 1
    fixed = np.empty(K + L, np.int64)
    fixed[:K] = qubits
    fixed[K:] = lanes
    fixed.sort()

    M = 1 << K
    W = 1 << L
    loc = np.zeros(M, np.int64)
    for l in range(M):
        off = 0
        for t in range(K):
            if (l >> t) & 1:
                off |= 1 << qubits[t]
        loc[l] = off
    lan = np.zeros(W, np.int64)
    for w in range(W):
        off = 0
        for t in range(L):
            if (w >> t) & 1:
                off |= 1 << lanes[t]
        lan[w] = off

    buf = np.empty((M, W), psi.dtype)
    G = loc_a.shape[0]
    n_outer = 1 << (n - K - L)
    for o in range(n_outer):
        x = o
        for t in range(K + L):
            x = _insert_zero(x, fixed[t])
        for l in range(M):
            base = x | loc[l]
            for w in range(W):
                buf[l, w] = psi[base | lan[w]]
        for g in range(G):
            ba = 1 << loc_a[g]
            bb = 1 << loc_b[g]
            lo = min(loc_a[g], loc_b[g])
            hi = max(loc_a[g], loc_b[g])
            p = c2[g]
            q = cs[g]
            r = s2[g]
            for k in range(M >> 2):
                y = _insert_zero(_insert_zero(k, lo), hi)
                r01 = y | bb
                r10 = y | ba
                r11 = y | ba | bb
                for w in range(W):
                    x00 = buf[y, w]
                    x01 = buf[r01, w]
                    x10 = buf[r10, w]
                    x11 = buf[r11, w]
                    odd = x01 + x10
                    even = x00 + x11
                    buf[y, w] = p * x00 - q * odd - r * x11
                    buf[r11, w] = -r * x00 - q * odd + p * x11
                    buf[r01, w] = q * even + p * x01 - r * x10
                    buf[r10, w] = q * even - r * x01 + p * x10
        for l in range(M):
            base = x | loc[l]
            for w in range(W):
                psi[base | lan[w]] = buf[l, w]


def tile_schedule(n: int, block: int = BLOCK) -> list[list[tuple[int, int]]]:
    """Partition all pairs i < j into tiles, in an execution order equivalent
    to canonical lexicographic gate order.

    Qubits are cut into consecutive blocks; tile (r, c) holds pairs with i in
    block r and j in block c (r <= c), listed lexicographically. Any two gates
    sharing a qubit appear in the same relative order as in the canonical
    sequence; gates on disjoint qubits commute.
    """
    blocks = [list(range(s, min(s + block, n))) for s in range(0, n, block)]
    out = []
    for r in range(len(blocks)):
        for c in range(r, len(blocks)):
            pairs = [(i, j) for i in blocks[r] for j in blocks[c] if i < j]
            if pairs:
                out.append(pairs)
    return out
