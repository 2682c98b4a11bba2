"""Numba kernels: packed GF(2) elimination, BP message passing, OSD search.

All matrices are bit-packed row-major into uint64 words, bit j of a row
living at word j >> 6, bit j & 63.  Kernels never allocate hot-loop
temporaries beyond small per-call scratch and release the GIL so the
simulation harness can run them from worker threads.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U0 = np.uint64(0)
U1 = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, nogil=True, inline="always")
def popcount64(x):
    x = x - ((x >> U1) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, nogil=True)
def row_weights(data):
    m, w = data.shape
    out = np.empty(m, dtype=np.int64)
    for i in range(m):
        acc = 0
        for k in range(w):
            acc += popcount64(data[i, k])
        out[i] = acc
    return out


@njit(cache=True, nogil=True)
def eliminate(data, order, full):
    """Gaussian elimination pivoting on the bit columns listed in `order`.

    Mutates `data` (which may carry augmented words past the pivot range;
    row operations apply to the whole row).  With full=True the pivot
    column is cleared in every other row (Gauss-Jordan), otherwise only
    below the pivot.  Returns the pivot columns in processing order;
    pivot k ends up in row k.
    """
    m, nw = data.shape
    pivot_cols = np.empty(min(m, order.shape[0]), dtype=np.int64)
    npiv = 0
    for oi in range(order.shape[0]):
        if npiv == m:
            break
        c = order[oi]
        w = c >> 6
        b = np.uint64(c & 63)
        piv = -1
        for r in range(npiv, m):
            if (data[r, w] >> b) & U1:
                piv = r
                break
        if piv < 0:
            continue
        if piv != npiv:
            for k in range(nw):
                t = data[npiv, k]
                data[npiv, k] = data[piv, k]
                data[piv, k] = t
        lo = 0 if full else npiv + 1
        for r in range(lo, m):
            if r != npiv and ((data[r, w] >> b) & U1):
                for k in range(nw):
                    data[r, k] ^= data[npiv, k]
        pivot_cols[npiv] = c
        npiv += 1
    return pivot_cols[:npiv]


@njit(cache=True, nogil=True)
def matvec_parity(data, v):
    """Per-row parity of <row, v> for a packed matrix and packed vector."""
    m, nw = data.shape
    out = np.empty(m, dtype=np.uint8)
    for i in range(m):
        acc = U0
        for k in range(nw):
            acc ^= data[i, k] & v[k]
        par = 0
        if acc != U0:
            par = popcount64(acc) & 1
        out[i] = par
    return out


@njit(cache=True, nogil=True)
def matmul_f2(a_data, a_cols, b_data):
    """C = A @ B over GF(2); A is m x a_cols, B packed with a_cols rows."""
    m = a_data.shape[0]
    wb = b_data.shape[1]
    out = np.zeros((m, wb), dtype=np.uint64)
    for i in range(m):
        for j in range(a_cols):
            if (a_data[i, j >> 6] >> np.uint64(j & 63)) & U1:
                for t in range(wb):
                    out[i, t] ^= b_data[j, t]
    return out


@njit(cache=True, nogil=True)
def overlap_parity_any(a_data, b_data):
    """True if some row pair (a_i, b_j) has odd intersection (A B^T != 0)."""
    for i in range(a_data.shape[0]):
        for j in range(b_data.shape[0]):
            acc = U0
            for k in range(a_data.shape[1]):
                acc ^= a_data[i, k] & b_data[j, k]
            if acc != U0 and (popcount64(acc) & 1):
                return True
    return False


@njit(cache=True, nogil=True)
def reduce_vector(rref, pivot_cols, v):
    """Reduce packed vector v in place by rows of a Gauss-Jordan RREF."""
    for i in range(pivot_cols.shape[0]):
        c = pivot_cols[i]
        if (v[c >> 6] >> np.uint64(c & 63)) & U1:
            for k in range(v.shape[0]):
                v[k] ^= rref[i, k]


@njit(cache=True, nogil=True)
def girth_bfs(adj_ptr, adj, cap):
    """Shortest cycle length of an undirected simple graph, or cap + 1.

    BFS from every vertex; a non-tree edge closing at depths (du, dx)
    witnesses a cycle of length du + dx + 1 through the root.  Search
    depth shrinks as the best bound improves.
    """
    nv = adj_ptr.shape[0] - 1
    best = cap + 1
    stamp = np.zeros(nv, dtype=np.int64)
    dist = np.zeros(nv, dtype=np.int64)
    parent = np.zeros(nv, dtype=np.int64)
    queue = np.empty(nv, dtype=np.int64)
    for root in range(nv):
        depth_limit = (best - 1) >> 1
        if depth_limit < 1:
            break
        tick = root + 1
        stamp[root] = tick
        dist[root] = 0
        parent[root] = -1
        queue[0] = root
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            if du >= depth_limit:
                continue
            for e in range(adj_ptr[u], adj_ptr[u + 1]):
                x = adj[e]
                if x == parent[u]:
                    continue
                if stamp[x] == tick:
                    cyc = du + dist[x] + 1
                    if cyc < best:
                        best = cyc
                        depth_limit = (best - 1) >> 1
                else:
                    stamp[x] = tick
                    dist[x] = du + 1
                    parent[x] = u
                    queue[tail] = x
                    tail += 1
    return best


@njit(cache=True, nogil=True, inline="always")
def _lse2(a, b):
    m = a if a > b else b
    d = a - b
    if d < 0.0:
        d = -d
    return m + np.log1p(np.exp(-d))


# Internal single-qubit Pauli encoding used by the decoder kernels:
# code = x_bit + 2 * z_bit, so I=0, X=1, Z=2, Y=3.  A check whose label
# on a qubit is L anticommutes with error E there iff E != 0 and E != L.


@njit(cache=True, nogil=True)
def bp_syndrome(chk_ptr, chk_q, chk_lab, hard, out):
    m = chk_ptr.shape[0] - 1
    for i in range(m):
        s = 0
        for e in range(chk_ptr[i], chk_ptr[i + 1]):
            c = hard[chk_q[e]]
            if c != 0 and c != chk_lab[e]:
                s ^= 1
        out[i] = s
    return out


@njit(cache=True, nogil=True, inline="always")
def _argmax4(lam, j):
    best = 0
    bv = lam[j, 0]
    for c in range(1, 4):
        if lam[j, c] > bv:
            bv = lam[j, c]
            best = c
    return best


@njit(cache=True, nogil=True)
def bp_decode(chk_ptr, chk_q, chk_lab, chk_order, layer_ptr, syndrome,
              logp, max_iters, alpha, clamp, lam, msg, tmp, hard, scratch):
    """Normalized-min-sum BP over a stabilizer Tanner graph.

    Messages are scalar LLRs of the per-edge commutation bit; the
    per-qubit state lam holds log-beliefs over (I, X, Z, Y).  Checks are
    processed layer by layer (flooding inside a layer); the hard
    decision and syndrome are re-checked after every full sweep.
    Returns (converged, iterations_used).
    """
    n = logp.shape[0]
    for j in range(n):
        for c in range(4):
            lam[j, c] = logp[j, c]
    for e in range(msg.shape[0]):
        msg[e] = 0.0
    zero = True
    for i in range(syndrome.shape[0]):
        if syndrome[i]:
            zero = False
            break
    for j in range(n):
        hard[j] = _argmax4(lam, j)
    if zero:
        ok = True
        for j in range(n):
            if hard[j] != 0:
                ok = False
                break
        if ok:
            return True, 0
    n_layers = layer_ptr.shape[0] - 1
    for it in range(1, max_iters + 1):
        for li in range(n_layers):
            # flooding inside the layer: gather all extrinsic LLRs first
            for oi in range(layer_ptr[li], layer_ptr[li + 1]):
                i = chk_order[oi]
                for e in range(chk_ptr[i], chk_ptr[i + 1]):
                    j = chk_q[e]
                    lab = chk_lab[e]
                    mo = msg[e]
                    if lab == 1:
                        a0, a1 = 2, 3
                    elif lab == 2:
                        a0, a1 = 1, 3
                    else:
                        a0, a1 = 1, 2
                    v = _lse2(lam[j, 0] - mo, lam[j, lab] - mo) - \
                        _lse2(lam[j, a0], lam[j, a1])
                    if v > clamp:
                        v = clamp
                    elif v < -clamp:
                        v = -clamp
                    tmp[e] = v
            for oi in range(layer_ptr[li], layer_ptr[li + 1]):
                i = chk_order[oi]
                lo = chk_ptr[i]
                hi = chk_ptr[i + 1]
                sgn = -1.0 if syndrome[i] else 1.0
                min1 = 1e30
                min2 = 1e30
                arg1 = -1
                for e in range(lo, hi):
                    v = tmp[e]
                    if v < 0.0:
                        sgn = -sgn
                        v = -v
                    if v < min1:
                        min2 = min1
                        min1 = v
                        arg1 = e
                    elif v < min2:
                        min2 = v
                for e in range(lo, hi):
                    v = tmp[e]
                    es = sgn
                    if v < 0.0:
                        es = -es
                        v = -v
                    mag = min2 if e == arg1 else min1
                    nm = alpha * es * mag
                    j = chk_q[e]
                    lab = chk_lab[e]
                    d = nm - msg[e]
                    lam[j, 0] += d
                    lam[j, lab] += d
                    msg[e] = nm
        for j in range(n):
            hard[j] = _argmax4(lam, j)
        bp_syndrome(chk_ptr, chk_q, chk_lab, hard, scratch)
        ok = True
        for i in range(syndrome.shape[0]):
            if scratch[i] != syndrome[i]:
                ok = False
                break
        if ok:
            return True, it
    return False, max_iters


@njit(cache=True, nogil=True)
def osd_search(hperm, n, y, vperm, w_order, pauli_cost):
    """Minimum-cost syndrome completion over 2^w information-bit flips.

    hperm: packed check matrix with columns already in reliability order
           (destroyed by Gauss-Jordan elimination).
    y:     uint8 per-row right-hand side (the target syndrome; destroyed).
    vperm: uint8 hard-decision vector in permuted coordinates.
    w_order: number of weakest free bits to flip (capped at |T|).
    Returns (status, best packed candidate); status 1 means the syndrome
    is not in the image of the matrix.
    """
    m = hperm.shape[0]
    # eliminate [H | y]: y rides along as a per-row bit
    npiv = 0
    pivot_cols = np.empty(min(m, n), dtype=np.int64)
    for c in range(n):
        if npiv == m:
            break
        w = c >> 6
        b = np.uint64(c & 63)
        piv = -1
        for r in range(npiv, m):
            if (hperm[r, w] >> b) & U1:
                piv = r
                break
        if piv < 0:
            continue
        if piv != npiv:
            for k in range(hperm.shape[1]):
                t = hperm[npiv, k]
                hperm[npiv, k] = hperm[piv, k]
                hperm[piv, k] = t
            ty = y[npiv]
            y[npiv] = y[piv]
            y[piv] = ty
        for r in range(m):
            if r != npiv and ((hperm[r, w] >> b) & U1):
                for k in range(hperm.shape[1]):
                    hperm[r, k] ^= hperm[npiv, k]
                y[r] ^= y[npiv]
        pivot_cols[npiv] = c
        npiv += 1
    nw = (n + 63) >> 6
    empty = np.zeros(nw, dtype=np.uint64)
    for r in range(npiv, m):
        if y[r]:
            return 1, empty
    # free columns in scan order; first w_eff of them get flipped
    is_pivot = np.zeros(n, dtype=np.uint8)
    for k in range(npiv):
        is_pivot[pivot_cols[k]] = 1
    n_free = n - npiv
    w_eff = w_order if w_order < n_free else n_free
    wecols = np.empty(w_eff, dtype=np.int64)
    wk = 0
    # base candidate for flip pattern r = 0: free bits take the hard
    # decision except the flip window, which starts at 0
    base = np.zeros(nw, dtype=np.uint64)
    for c in range(n):
        if is_pivot[c]:
            continue
        if wk < w_eff:
            wecols[wk] = c
            wk += 1
        elif vperm[c]:
            base[c >> 6] |= U1 << np.uint64(c & 63)
            for r in range(npiv):
                if (hperm[r, c >> 6] >> np.uint64(c & 63)) & U1:
                    y[r] ^= 1
    for k in range(npiv):
        if y[k]:
            base[pivot_cols[k] >> 6] |= U1 << np.uint64(pivot_cols[k] & 63)
    if w_eff == 0:
        return 0, base
    # toggle mask per flip bit: the bit itself plus the pivot positions
    # of its reduced column
    toggles = np.zeros((w_eff, nw), dtype=np.uint64)
    for k in range(w_eff):
        c = wecols[k]
        toggles[k, c >> 6] |= U1 << np.uint64(c & 63)
        for r in range(npiv):
            if (hperm[r, c >> 6] >> np.uint64(c & 63)) & U1:
                pc = pivot_cols[r]
                toggles[k, pc >> 6] ^= U1 << np.uint64(pc & 63)
    cur = base.copy()
    best = base.copy()
    best_cost = _vec_cost(cur, pauli_cost)
    best_r = np.int64(0)
    gray = np.int64(0)
    for step in range(1, 1 << w_eff):
        bit = 0
        s = step
        while not (s & 1):
            s >>= 1
            bit += 1
        gray ^= np.int64(1) << bit
        for k in range(nw):
            cur[k] ^= toggles[bit, k]
        cost = _vec_cost(cur, pauli_cost)
        # tie-break: smallest flip pattern in binary counting order
        if cost < best_cost or (cost == best_cost and gray < best_r):
            best_cost = cost
            best_r = gray
            for k in range(nw):
                best[k] = cur[k]
    return 0, best


@njit(cache=True, nogil=True, inline="always")
def _vec_cost(vec, pauli_cost):
    acc = 0
    if pauli_cost:
        for k in range(vec.shape[0]):
            x = vec[k]
            acc += popcount64(((x >> U1) | x) & _M1)
    else:
        for k in range(vec.shape[0]):
            acc += popcount64(vec[k])
    return acc


@njit(cache=True, nogil=True)
def osd0_stream(hperm, n, s0, vperm):
    """Simplified order-0 completion with an early consistency stop.

    Scans columns left to right, adding pivots while the eliminated
    right-hand side still has support beyond the pivot rows.  Returns
    (status, correction) with the hard-decision bits kept outside the
    pivot set; status 1 flags a syndrome outside the image.
    """
    m = hperm.shape[0]
    y = s0.copy()
    npiv = 0
    pivot_cols = np.empty(min(m, n), dtype=np.int64)
    stopped = False
    for c in range(n):
        consistent = True
        for r in range(npiv, m):
            if y[r]:
                consistent = False
                break
        if consistent:
            stopped = True
            break
        if npiv == m:
            break
        w = c >> 6
        b = np.uint64(c & 63)
        piv = -1
        for r in range(npiv, m):
            if (hperm[r, w] >> b) & U1:
                piv = r
                break
        if piv < 0:
            continue
        if piv != npiv:
            for k in range(hperm.shape[1]):
                t = hperm[npiv, k]
                hperm[npiv, k] = hperm[piv, k]
                hperm[piv, k] = t
            ty = y[npiv]
            y[npiv] = y[piv]
            y[piv] = ty
        for r in range(m):
            if r != npiv and ((hperm[r, w] >> b) & U1):
                for k in range(hperm.shape[1]):
                    hperm[r, k] ^= hperm[npiv, k]
                y[r] ^= y[npiv]
        if vperm[c]:
            y[npiv] ^= 1
        pivot_cols[npiv] = c
        npiv += 1
    if not stopped:
        for r in range(npiv, m):
            if y[r]:
                nw = (n + 63) >> 6
                return 1, np.zeros(nw, dtype=np.uint64)
    nw = (n + 63) >> 6
    out = np.zeros(nw, dtype=np.uint64)
    for c in range(n):
        if vperm[c]:
            out[c >> 6] |= U1 << np.uint64(c & 63)
    for k in range(npiv):
        c = pivot_cols[k]
        w = c >> 6
        b = np.uint64(c & 63)
        if y[k]:
            out[w] |= U1 << b
        else:
            out[w] &= ~(U1 << b)
    return 0, out


@njit(cache=True, nogil=True)
def coset_min_weight(lows, base, best_in):
    """Min Hamming weight of lows[i] ^ base; returns (weight, index).

    Only improves on best_in, so callers can thread a running optimum.
    """
    best = best_in
    besti = np.int64(-1)
    nw = lows.shape[1]
    for i in range(lows.shape[0]):
        acc = 0
        for k in range(nw):
            acc += popcount64(lows[i, k] ^ base[k])
            if acc >= best:
                break
        if acc < best:
            best = acc
            besti = i
    return best, besti
