# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: schedule execution and graph peeling."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, int32_t, int64_t, uint64_t

cnp.import_array()

cdef enum:
    OP_COMPUTE = 1
    OP_EVAL = 2
    OP_PAIR = 3
    OP_SINGLE = 4
    OP_RECOMPUTE = 5
    OP_FLIP = 6

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _popcount(uint64_t v) noexcept nogil:
    return __builtin_popcountll(v)


def peel_inplace(const int64_t[:] c_ptr, const int32_t[:] c_idx,
                 const int64_t[:] b_ptr, const int32_t[:] b_idx,
                 uint8_t[:] bit_in, uint8_t[:] check_in, order):
    cdef Py_ssize_t nb = bit_in.shape[0]
    cdef cnp.ndarray[int32_t] deg_a = np.zeros(nb, dtype=np.int32)
    cdef cnp.ndarray[int32_t] stack_a = np.empty(max(nb, 1) * 2 + 1, dtype=np.int32)
    cdef int32_t[:] deg = deg_a
    cdef int32_t[:] stack = stack_a
    cdef Py_ssize_t top = 0, b, j, bb
    cdef int32_t c, d
    cdef bint record = order is not None
    cdef list pairs = []
    for b in range(nb):
        if bit_in[b]:
            d = 0
            for j in range(b_ptr[b], b_ptr[b + 1]):
                if check_in[b_idx[j]]:
                    d += 1
            deg[b] = d
            if d <= 1:
                stack[top] = <int32_t>b
                top += 1
    while top > 0:
        top -= 1
        b = stack[top]
        if not bit_in[b]:
            continue
        bit_in[b] = 0
        if deg[b] == 0:
            continue
        c = -1
        for j in range(b_ptr[b], b_ptr[b + 1]):
            if check_in[b_idx[j]]:
                c = b_idx[j]
                break
        check_in[c] = 0
        if record:
            pairs.append((c, b))
        for j in range(c_ptr[c], c_ptr[c + 1]):
            bb = c_idx[j]
            if bit_in[bb]:
                deg[bb] -= 1
                if deg[bb] == 1:
                    stack[top] = <int32_t>bb
                    top += 1
                elif deg[bb] == 0:
                    stack[top] = <int32_t>bb
                    top += 1
    if record:
        order.extend(pairs)


def run_program(const int32_t[:] prog, Py_ssize_t n_bits, Py_ssize_t n_keys,
                const int64_t[:] info_pos, const uint8_t[:] info_vals):
    cdef cnp.ndarray[uint8_t] xa = np.zeros(n_bits, dtype=np.uint8)
    cdef cnp.ndarray[uint8_t] ka = np.zeros(max(n_keys, 1), dtype=np.uint8)
    cdef uint8_t[:] x = xa
    cdef uint8_t[:] key = ka
    cdef Py_ssize_t i = 0, j, end = prog.shape[0], r
    cdef int32_t op, t, n, ng, nc, tag, ka_, kb_, g, dd
    cdef uint8_t v, a, bv, m
    cdef int64_t xors = 0, flips = 0
    for r in range(info_pos.shape[0]):
        x[info_pos[r]] = info_vals[r] & 1
    with nogil:
        while i < end:
            op = prog[i]
            if op == OP_COMPUTE or op == OP_EVAL:
                t = prog[i + 1]
                n = prog[i + 2]
                v = 0
                for j in range(i + 3, i + 3 + n):
                    v ^= x[prog[j]]
                if n > 0:
                    xors += n - 1
                if op == OP_COMPUTE:
                    x[t] = v
                else:
                    key[t] = v
                i += 3 + n
            elif op == OP_PAIR:
                tag = prog[i + 1]
                ka_ = prog[i + 2]
                kb_ = prog[i + 3]
                g = prog[i + 4]
                dd = prog[i + 5]
                a = key[ka_]
                bv = key[kb_]
                if tag == 0:
                    x[g] = a
                    x[dd] = bv
                elif tag == 1:
                    x[g] = a
                    x[dd] = a ^ bv
                    xors += 1
                else:
                    x[g] = a ^ bv
                    x[dd] = bv
                    xors += 1
                i += 6
            elif op == OP_SINGLE:
                x[prog[i + 2]] = key[prog[i + 1]]
                i += 3
            elif op == OP_RECOMPUTE:
                ng = prog[i + 1]
                m = 0
                for j in range(i + 2, i + 2 + ng):
                    m |= x[prog[j]]
                j = i + 2 + ng
                t = prog[j]
                n = prog[j + 1]
                if m:
                    v = 0
                    for r in range(j + 2, j + 2 + n):
                        v ^= x[prog[r]]
                    x[t] = v
                    if n > 0:
                        xors += n - 1
                i = j + 2 + n
            elif op == OP_FLIP:
                nc = prog[i + 1]
                m = 0
                for j in range(i + 2, i + 2 + nc):
                    m ^= x[prog[j]]
                xors += nc - 1
                j = i + 2 + nc
                n = prog[j]
                if m:
                    for r in range(j + 1, j + 1 + n):
                        x[prog[r]] ^= 1
                    flips += 1
                i = j + 1 + n
            else:
                break
    if i < end:
        raise ValueError(f"bad opcode {prog[i]} at {i}")
    return xa, xors, flips


def run_program_sliced(const int32_t[:] prog, Py_ssize_t n_bits, Py_ssize_t n_keys,
                       const int64_t[:] info_pos, const uint64_t[:, :] info_words,
                       Py_ssize_t n_lanes):
    cdef Py_ssize_t W = info_words.shape[1]
    cdef cnp.ndarray[uint64_t, ndim=2] xa = np.zeros((n_bits, W), dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=2] ka = np.zeros((max(n_keys, 1), W), dtype=np.uint64)
    cdef cnp.ndarray[uint64_t] acc_a = np.zeros(W, dtype=np.uint64)
    cdef uint64_t[:, :] x = xa
    cdef uint64_t[:, :] key = ka
    cdef uint64_t[:] acc = acc_a
    cdef Py_ssize_t i = 0, j, end = prog.shape[0], r, w
    cdef int32_t op, t, n, ng, nc, tag, ka_, kb_, g, dd, s
    cdef uint64_t a, bv, m
    cdef int64_t xors = 0, flips = 0, cnt
    for r in range(info_pos.shape[0]):
        x[info_pos[r], :] = info_words[r, :]
    with nogil:
        while i < end:
            op = prog[i]
            if op == OP_COMPUTE or op == OP_EVAL:
                t = prog[i + 1]
                n = prog[i + 2]
                for w in range(W):
                    acc[w] = 0
                for j in range(i + 3, i + 3 + n):
                    s = prog[j]
                    for w in range(W):
                        acc[w] ^= x[s, w]
                if n > 0:
                    xors += (n - 1) * n_lanes
                if op == OP_COMPUTE:
                    for w in range(W):
                        x[t, w] = acc[w]
                else:
                    for w in range(W):
                        key[t, w] = acc[w]
                i += 3 + n
            elif op == OP_PAIR:
                tag = prog[i + 1]
                ka_ = prog[i + 2]
                kb_ = prog[i + 3]
                g = prog[i + 4]
                dd = prog[i + 5]
                for w in range(W):
                    a = key[ka_, w]
                    bv = key[kb_, w]
                    if tag == 0:
                        x[g, w] = a
                        x[dd, w] = bv
                    elif tag == 1:
                        x[g, w] = a
                        x[dd, w] = a ^ bv
                    else:
                        x[g, w] = a ^ bv
                        x[dd, w] = bv
                if tag != 0:
                    xors += n_lanes
                i += 6
            elif op == OP_SINGLE:
                for w in range(W):
                    x[prog[i + 2], w] = key[prog[i + 1], w]
                i += 3
            elif op == OP_RECOMPUTE:
                ng = prog[i + 1]
                j = i + 2 + ng
                t = prog[j]
                n = prog[j + 1]
                for w in range(W):
                    m = 0
                    for r in range(i + 2, i + 2 + ng):
                        m |= x[prog[r], w]
                    if m:
                        a = 0
                        for r in range(j + 2, j + 2 + n):
                            a ^= x[prog[r], w]
                        x[t, w] = (x[t, w] & ~m) | (a & m)
                        if n > 0:
                            xors += (n - 1) * _popcount(m)
                i = j + 2 + n
            elif op == OP_FLIP:
                nc = prog[i + 1]
                j = i + 2 + nc
                n = prog[j]
                xors += (nc - 1) * n_lanes
                for w in range(W):
                    m = 0
                    for r in range(i + 2, i + 2 + nc):
                        m ^= x[prog[r], w]
                    if m:
                        for r in range(j + 1, j + 1 + n):
                            x[prog[r], w] ^= m
                        flips += _popcount(m)
                i = j + 1 + n
            else:
                break
    if i < end:
        raise ValueError(f"bad opcode {prog[i]} at {i}")
    return xa, xors, flips


def kept_rows(uint64_t[:, ::1] a):
    """Greedy ascending independent rows of a packed GF(2) matrix; ``a`` is clobbered."""
    cdef Py_ssize_t m = a.shape[0], nw = a.shape[1], i, j, w, t
    cdef uint64_t word, low
    kept = []
    for i in range(m):
        w = 0
        while w < nw and a[i, w] == 0:
            w += 1
        if w == nw:
            continue
        kept.append(i)
        word = a[i, w]
        low = word & (~word + 1)
        for j in range(i + 1, m):
            if a[j, w] & low:
                for t in range(w, nw):
                    a[j, t] ^= a[i, t]
    return kept
