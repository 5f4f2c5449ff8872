"""Kernel selection.

The compiled module is used when it imports; set ``LINENC_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels
from ._pykernels import (  # noqa: F401
    OP_COMPUTE,
    OP_EVAL,
    OP_FLIP,
    OP_PAIR,
    OP_RECOMPUTE,
    OP_SINGLE,
    TAG_DELTA_BOTH,
    TAG_DISJOINT,
    TAG_GAMMA_BOTH,
)

_impl = _pykernels
BACKEND = "python"
if os.environ.get("LINENC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _pykernels


def csr_of(g):
    """CSR arrays ``(c_ptr, c_idx, b_ptr, b_idx)`` for a graph, cached on it."""
    cache = getattr(g, "_csr_cache", None)
    if cache is not None:
        return cache
    out = []
    for adj in (g.check_adj, g.bit_adj):
        lens = np.fromiter((len(a) for a in adj), dtype=np.int64, count=len(adj))
        ptr = np.zeros(len(adj) + 1, dtype=np.int64)
        np.cumsum(lens, out=ptr[1:])
        idx = np.fromiter((v for a in adj for v in a), dtype=np.int32, count=int(ptr[-1]))
        out += [ptr, idx]
    cache = tuple(out)
    try:
        g._csr_cache = cache
    except AttributeError:
        pass
    return cache


def peel_inplace(g, bit_in: bytearray, check_in: bytearray, order: list | None) -> None:
    c_ptr, c_idx, b_ptr, b_idx = csr_of(g)
    _impl.peel_inplace(c_ptr, c_idx, b_ptr, b_idx, bit_in, check_in, order)


def kept_rows(data: np.ndarray, impl=None) -> list[int]:
    impl = impl or _impl
    return impl.kept_rows(np.ascontiguousarray(data, dtype=np.uint64).copy())


def run_program(prog: np.ndarray, n_bits: int, n_keys: int, info_pos: np.ndarray, info_vals: np.ndarray, impl=None):
    impl = impl or _impl
    return impl.run_program(prog, n_bits, n_keys, info_pos, info_vals)


def run_program_sliced(prog, n_bits, n_keys, info_pos, info_words, n_lanes, impl=None):
    impl = impl or _impl
    return impl.run_program_sliced(prog, n_bits, n_keys, info_pos, info_words, n_lanes)


def backends() -> dict:
    """Every importable backend by name; used by the benchmark and tests."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:  # pragma: no cover
        pass
    return out
