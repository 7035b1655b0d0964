"""Compiled kernels: solver inner loop, cut-flow scans, influence table.

Same contracts as lapcut._kernels._fallback; see there for the argument
conventions.  Element-wise arithmetic matches the fallback exactly (the
extension is compiled with FP contraction off); reductions are sequential
where numpy's are pairwise, so dot-product results may differ in ulps.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

COMPILED = True

ctypedef cnp.float64_t f64
ctypedef cnp.int64_t i64


cdef inline Py_ssize_t _bisect_right(const f64[::1] cum, f64 u, Py_ssize_t hi) nogil:
    cdef Py_ssize_t lo = 0, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cum[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline f64 _naive_flow(const f64[::1] vals, const i64[::1] apos,
                            const i64[::1] bpos, const f64[::1] w,
                            Py_ssize_t lo, Py_ssize_t hi) nogil:
    cdef f64 acc = 0.0
    cdef Py_ssize_t t
    for t in range(lo, hi):
        acc += (vals[apos[t]] - vals[bpos[t]]) * w[t]
    return acc


cdef f64 _gap_now(int backend, const f64[::1] S, const f64[::1] cut_flow,
                  const f64[::1] r_te, const f64[::1] vals,
                  const i64[::1] cr_indptr, const i64[::1] cr_apos,
                  const i64[::1] cr_bpos, const f64[::1] cr_w) nogil:
    cdef f64 acc = 0.0, resid
    cdef Py_ssize_t k
    for k in range(S.shape[0]):
        if backend == 1:
            resid = S[k] - cut_flow[k]
        else:
            resid = S[k] - _naive_flow(vals, cr_apos, cr_bpos, cr_w,
                                       cr_indptr[k], cr_indptr[k + 1])
        acc += r_te[k] * resid * resid
    return acc


cdef f64 _bound_now(const f64[::1] vals, const f64[::1] b_pos,
                    const i64[::1] e_tpos, const i64[::1] e_hpos,
                    const f64[::1] e_w) nogil:
    cdef f64 bp = 0.0, quad = 0.0, d
    cdef Py_ssize_t i
    for i in range(vals.shape[0]):
        bp += b_pos[i] * vals[i]
    for i in range(e_w.shape[0]):
        d = vals[e_tpos[i]] - vals[e_hpos[i]]
        quad += (e_w[i] * d) * d
    return 2.0 * bp - quad


def cut_solve_loop(const f64[::1] draws, const f64[::1] cum, const f64[::1] S,
                   const f64[::1] R, const i64[::1] sub_lo, const i64[::1] sub_hi,
                   f64[::1] vals, int backend,
                   f64[::1] cut_flow, const f64[:, ::1] H,
                   const i64[::1] cr_indptr, const i64[::1] cr_apos,
                   const i64[::1] cr_bpos, const f64[::1] cr_w,
                   int trace_mode, const f64[::1] b_pos,
                   const i64[::1] e_tpos, const i64[::1] e_hpos,
                   const f64[::1] e_w, const f64[::1] r_te,
                   i64[::1] out_cut, f64[::1] out_delta,
                   f64[::1] out_bound, f64[::1] out_gap):
    cdef Py_ssize_t niters = draws.shape[0]
    cdef Py_ssize_t ncuts = S.shape[0]
    cdef Py_ssize_t t, k, i
    cdef f64 ff, delta
    with nogil:
        for t in range(niters):
            k = _bisect_right(cum, draws[t], ncuts)
            if k > ncuts - 1:
                k = ncuts - 1
            if trace_mode >= 2:
                out_gap[t] = _gap_now(backend, S, cut_flow, r_te, vals,
                                      cr_indptr, cr_apos, cr_bpos, cr_w)
            if backend == 1:
                ff = S[k] - cut_flow[k]
            else:
                ff = S[k] - _naive_flow(vals, cr_apos, cr_bpos, cr_w,
                                        cr_indptr[k], cr_indptr[k + 1])
            delta = ff * R[k]
            out_cut[t] = k
            out_delta[t] = delta
            for i in range(sub_lo[k], sub_hi[k]):
                vals[i] += delta
            if backend == 1:
                for i in range(ncuts):
                    cut_flow[i] += delta * H[k, i]
            if trace_mode >= 1:
                out_bound[t] = _bound_now(vals, b_pos, e_tpos, e_hpos, e_w)
    return None


def naive_cut_flows(const f64[::1] vals, const i64[::1] cr_indptr,
                    const i64[::1] cr_apos, const i64[::1] cr_bpos,
                    const f64[::1] cr_w, f64[::1] out):
    cdef Py_ssize_t k
    with nogil:
        for k in range(out.shape[0]):
            out[k] = _naive_flow(vals, cr_apos, cr_bpos, cr_w,
                                 cr_indptr[k], cr_indptr[k + 1])
    return None


def build_h_table(Py_ssize_t n, const i64[::1] e_tpos, const i64[::1] e_hpos,
                  const f64[::1] e_w, const i64[::1] parent_pos,
                  const i64[::1] sub_hi, f64[:, ::1] H):
    cdef cnp.ndarray acc_arr = np.empty(n, dtype=np.float64)
    cdef f64[::1] acc = acc_arr
    cdef Py_ssize_t k, j, p, lo, hi
    cdef int tin, hin
    cdef f64 contrib
    with nogil:
        for k in range(n - 1):
            lo = k + 1
            hi = sub_hi[k]
            for p in range(n):
                acc[p] = 0.0
            for j in range(e_w.shape[0]):
                tin = 1 if (e_tpos[j] >= lo and e_tpos[j] < hi) else 0
                hin = 1 if (e_hpos[j] >= lo and e_hpos[j] < hi) else 0
                if tin != hin:
                    contrib = (tin - hin) * e_w[j]
                    acc[e_tpos[j]] += contrib
                    acc[e_hpos[j]] -= contrib
            for p in range(n - 1, 0, -1):
                H[k, p - 1] = acc[p]
                acc[parent_pos[p]] += acc[p]
    return None
