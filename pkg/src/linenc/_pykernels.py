"""Pure-Python kernels; behavior reference for the compiled module."""

from __future__ import annotations

import numpy as np

OP_COMPUTE = 1
OP_EVAL = 2
OP_PAIR = 3
OP_SINGLE = 4
OP_RECOMPUTE = 5
OP_FLIP = 6

TAG_DISJOINT = 0
TAG_GAMMA_BOTH = 1
TAG_DELTA_BOTH = 2

_M64 = (1 << 64) - 1


def kept_rows(a: np.ndarray) -> list[int]:
    """Greedy ascending independent rows of a packed GF(2) matrix; ``a`` is clobbered."""
    kept: list[int] = []
    for i in range(a.shape[0]):
        row = a[i]
        nz = np.flatnonzero(row)
        if nz.size == 0:
            continue
        kept.append(i)
        w = int(nz[0])
        word = int(row[w])
        bit = (word & -word).bit_length() - 1
        # the pivot row is zero left of word w
        below = a[i + 1 :, w:]
        sel = np.flatnonzero((below[:, 0] >> np.uint64(bit)) & np.uint64(1))
        if sel.size:
            below[sel] ^= row[w:]
    return kept


def peel_inplace(c_ptr, c_idx, b_ptr, b_idx, bit_in, check_in, order) -> None:
    """Peel the masked subgraph in place.

    ``order`` (a list or None) receives ``(check, private_bit)`` pairs.
    """
    deg = {}
    stack = []
    for b, v in enumerate(bit_in):
        if v:
            d = 0
            for j in range(b_ptr[b], b_ptr[b + 1]):
                if check_in[b_idx[j]]:
                    d += 1
            deg[b] = d
            if d <= 1:
                stack.append(b)
    while stack:
        b = stack.pop()
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
        if order is not None:
            order.append((c, b))
        for j in range(c_ptr[c], c_ptr[c + 1]):
            bb = c_idx[j]
            if bit_in[bb]:
                deg[bb] -= 1
                if deg[bb] <= 1:
                    stack.append(bb)


def run_program(prog, n_bits: int, n_keys: int, info_pos, info_vals):
    """Encode one word. Returns ``(codeword uint8 array, xor_count, flip_ops)``."""
    x = [0] * n_bits
    key = [0] * max(n_keys, 1)
    for p, v in zip(info_pos, info_vals):
        x[p] = v & 1
    prog = prog.tolist() if isinstance(prog, np.ndarray) else prog
    xors = 0
    flips = 0
    i = 0
    end = len(prog)
    while i < end:
        op = prog[i]
        if op == OP_COMPUTE or op == OP_EVAL:
            t, n = prog[i + 1], prog[i + 2]
            v = 0
            for s in prog[i + 3 : i + 3 + n]:
                v ^= x[s]
            if n:
                xors += n - 1
            if op == OP_COMPUTE:
                x[t] = v
            else:
                key[t] = v
            i += 3 + n
        elif op == OP_PAIR:
            tag, ka, kb, g, d = prog[i + 1 : i + 6]
            a, b = key[ka], key[kb]
            if tag == TAG_DISJOINT:
                x[g], x[d] = a, b
            elif tag == TAG_GAMMA_BOTH:
                x[g], x[d] = a, a ^ b
                xors += 1
            else:
                x[g], x[d] = a ^ b, b
                xors += 1
            i += 6
        elif op == OP_SINGLE:
            x[prog[i + 2]] = key[prog[i + 1]]
            i += 3
        elif op == OP_RECOMPUTE:
            ng = prog[i + 1]
            guards = prog[i + 2 : i + 2 + ng]
            j = i + 2 + ng
            t, n = prog[j], prog[j + 1]
            if any(x[q] for q in guards):
                v = 0
                for s in prog[j + 2 : j + 2 + n]:
                    v ^= x[s]
                x[t] = v
                if n:
                    xors += n - 1
            i = j + 2 + n
        elif op == OP_FLIP:
            nc = prog[i + 1]
            cond = 0
            for q in prog[i + 2 : i + 2 + nc]:
                cond ^= x[q]
            xors += nc - 1
            j = i + 2 + nc
            n = prog[j]
            if cond:
                for b in prog[j + 1 : j + 1 + n]:
                    x[b] ^= 1
                flips += 1
            i = j + 1 + n
        else:
            raise ValueError(f"bad opcode {op} at {i}")
    return np.asarray(x, dtype=np.uint8), xors, flips


def run_program_sliced(prog, n_bits: int, n_keys: int, info_pos, info_words, n_lanes: int):
    """Bit-sliced batch encode: lane ``j`` of word ``w`` is codeword ``64*w + j``.

    ``info_words`` has shape ``(n_info, W)``. Returns ``(state (n_bits, W),
    total_xors, total_flips)`` summed over the ``n_lanes`` real lanes.
    """
    info_words = np.asarray(info_words, dtype=np.uint64)
    W = info_words.shape[1] if info_words.ndim == 2 else 0
    # one Python int per bit, all lanes side by side
    width = 64 * W
    x = [0] * n_bits
    key = [0] * max(n_keys, 1)
    for r, p in enumerate(info_pos):
        x[p] = int.from_bytes(info_words[r].astype("<u8").tobytes(), "little")
    prog = prog.tolist() if isinstance(prog, np.ndarray) else prog
    xors = 0
    flips = 0
    i = 0
    end = len(prog)
    while i < end:
        op = prog[i]
        if op == OP_COMPUTE or op == OP_EVAL:
            t, n = prog[i + 1], prog[i + 2]
            v = 0
            for s in prog[i + 3 : i + 3 + n]:
                v ^= x[s]
            if n:
                xors += (n - 1) * n_lanes
            if op == OP_COMPUTE:
                x[t] = v
            else:
                key[t] = v
            i += 3 + n
        elif op == OP_PAIR:
            tag, ka, kb, g, d = prog[i + 1 : i + 6]
            a, b = key[ka], key[kb]
            if tag == TAG_DISJOINT:
                x[g], x[d] = a, b
            elif tag == TAG_GAMMA_BOTH:
                x[g], x[d] = a, a ^ b
                xors += n_lanes
            else:
                x[g], x[d] = a ^ b, b
                xors += n_lanes
            i += 6
        elif op == OP_SINGLE:
            x[prog[i + 2]] = key[prog[i + 1]]
            i += 3
        elif op == OP_RECOMPUTE:
            ng = prog[i + 1]
            m = 0
            for q in prog[i + 2 : i + 2 + ng]:
                m |= x[q]
            j = i + 2 + ng
            t, n = prog[j], prog[j + 1]
            if m:
                v = 0
                for s in prog[j + 2 : j + 2 + n]:
                    v ^= x[s]
                x[t] = (x[t] & ~m) | (v & m)
                if n:
                    xors += (n - 1) * m.bit_count()
            i = j + 2 + n
        elif op == OP_FLIP:
            nc = prog[i + 1]
            cond = 0
            for q in prog[i + 2 : i + 2 + nc]:
                cond ^= x[q]
            xors += (nc - 1) * n_lanes
            j = i + 2 + nc
            n = prog[j]
            if cond:
                for b in prog[j + 1 : j + 1 + n]:
                    x[b] ^= cond
                flips += cond.bit_count()
            i = j + 1 + n
        else:
            raise ValueError(f"bad opcode {op} at {i}")
    out = np.zeros((n_bits, W), dtype=np.uint64)
    nbytes = 8 * W
    for b, v in enumerate(x):
        if v:
            out[b] = np.frombuffer((v & ((1 << width) - 1)).to_bytes(nbytes, "little"), dtype="<u8")
    return out, xors, flips
