"""Pure-numpy implementation of the hot kernels.

Mirrors lapcut._kernels._core operation for operation.  The two
implementations consume identical draw sequences and perform the same
element-wise arithmetic; only reductions (dot products) may differ in the
last few ulps because numpy sums pairwise while the C loops sum
sequentially.
"""

from __future__ import annotations

import numpy as np

COMPILED = False


def cut_solve_loop(draws, cum, S, R, sub_lo, sub_hi, vals, backend,
                   cut_flow, H,
                   cr_indptr, cr_apos, cr_bpos, cr_w,
                   trace_mode, b_pos, e_tpos, e_hpos, e_w, r_te,
                   out_cut, out_delta, out_bound, out_gap):
    """Run the sampled cut-update iterations in place.

    backend: 0 = naive (scan the crossing lists), 1 = table (influence rows).
    trace_mode: 0 = record cut/delta only, 1 = also the potential bound after
    each update, 2 = additionally the duality gap before each update.
    """
    niters = len(draws)
    ncuts = len(S)
    ks = np.minimum(np.searchsorted(cum, draws, side="right"), ncuts - 1)
    for t in range(niters):
        k = int(ks[t])
        if trace_mode >= 2:
            out_gap[t] = _gap_now(backend, S, cut_flow, r_te, vals,
                                  cr_indptr, cr_apos, cr_bpos, cr_w)
        if backend == 1:
            ff = S[k] - cut_flow[k]
        else:
            lo, hi = cr_indptr[k], cr_indptr[k + 1]
            f = float(np.dot(vals[cr_apos[lo:hi]] - vals[cr_bpos[lo:hi]], cr_w[lo:hi]))
            ff = S[k] - f
        delta = ff * R[k]
        out_cut[t] = k
        out_delta[t] = delta
        vals[sub_lo[k]:sub_hi[k]] += delta
        if backend == 1:
            cut_flow += delta * H[k]
        if trace_mode >= 1:
            d = vals[e_tpos] - vals[e_hpos]
            out_bound[t] = 2.0 * float(np.dot(b_pos, vals)) - float(np.dot(e_w * d, d))
    return None


def _gap_now(backend, S, cut_flow, r_te, vals, cr_indptr, cr_apos, cr_bpos, cr_w):
    if backend == 1:
        resid = S - cut_flow
    else:
        flows = np.empty(len(S), dtype=np.float64)
        naive_cut_flows(vals, cr_indptr, cr_apos, cr_bpos, cr_w, flows)
        resid = S - flows
    return float(np.dot(r_te * resid, resid))


def naive_cut_flows(vals, cr_indptr, cr_apos, cr_bpos, cr_w, out):
    """Flow out of every cut, by scanning each cut's crossing list."""
    for k in range(len(out)):
        lo, hi = cr_indptr[k], cr_indptr[k + 1]
        out[k] = np.dot(vals[cr_apos[lo:hi]] - vals[cr_bpos[lo:hi]], cr_w[lo:hi])
    return None


def build_h_table(n, e_tpos, e_hpos, e_w, parent_pos, sub_hi, H):
    """Fill the (n-1) x (n-1) influence table.

    Row k is the response of every cut's outflow to a unit value increase on
    subtree k: per-vertex boundary terms first, then a leaves-up pass that
    adds child-subtree sums.  Positions are preorder indices, so cut k is the
    interval [k+1, sub_hi[k]).
    """
    for k in range(n - 1):
        lo, hi = k + 1, sub_hi[k]
        tin = (e_tpos >= lo) & (e_tpos < hi)
        hin = (e_hpos >= lo) & (e_hpos < hi)
        contrib = (tin.astype(np.float64) - hin.astype(np.float64)) * e_w
        acc = np.bincount(e_tpos, weights=contrib, minlength=n) \
            - np.bincount(e_hpos, weights=contrib, minlength=n)
        row = H[k]
        for p in range(n - 1, 0, -1):
            row[p - 1] = acc[p]
            acc[parent_pos[p]] += acc[p]
    return None
