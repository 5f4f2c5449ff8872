import os
import subprocess
import sys

import numpy as np
import pytest

from linenc import _pykernels, kernels
from linenc.codes import random_ldpc


def test_backend_selected_at_import():
    assert kernels.BACKEND in ("cython", "python")
    assert "python" in kernels.backends()


def test_env_forces_pure_python():
    env = dict(os.environ, LINENC_PURE_PYTHON="1")
    r = subprocess.run(
        [sys.executable, "-c", "from linenc import kernels; print(kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert r.stdout.strip() == "python"


@pytest.mark.skipif("cython" not in kernels.backends(), reason="extension not built")
def test_peel_agrees_across_backends():
    ck = kernels.backends()["cython"]
    for seed in range(6):
        g = random_ldpc(150, 3, 6, seed)
        csr = kernels.csr_of(g)
        rng = np.random.default_rng(seed)
        bits = bytearray(rng.integers(0, 2, g.n_bits).astype(np.uint8).tobytes())
        checks = bytearray(rng.integers(0, 2, g.n_checks).astype(np.uint8).tobytes())
        outs = []
        for impl in (_pykernels, ck):
            b, c, order = bytearray(bits), bytearray(checks), []
            impl.peel_inplace(*csr, b, c, order)
            outs.append((bytes(b), bytes(c), sorted(order)))
        assert outs[0] == outs[1]


def test_flip_condition_is_xor_of_bits():
    prog = np.array([kernels.OP_FLIP, 2, 0, 1, 1, 2], dtype=np.int32)
    pos = np.array([0, 1], dtype=np.int64)
    for impl in kernels.backends().values():
        x, xors, flips = impl.run_program(prog, 3, 0, pos, np.array([1, 1], dtype=np.uint8))
        assert list(x) == [1, 1, 0] and xors == 1 and flips == 0
        x, xors, flips = impl.run_program(prog, 3, 0, pos, np.array([1, 0], dtype=np.uint8))
        assert list(x) == [1, 0, 1] and flips == 1


def test_kept_rows_agree_across_backends():
    from linenc.gf2 import DenseGf2Matrix

    rng = np.random.default_rng(11)
    for rows, cols in [(5, 3), (40, 70), (130, 129)]:
        a = rng.integers(0, 2, (rows, cols))
        a[rows // 2] = a[0] ^ a[1]
        m = DenseGf2Matrix.from_row_lists([np.flatnonzero(r).tolist() for r in a], cols)
        got = [kernels.kept_rows(m.data, impl) for impl in kernels.backends().values()]
        assert all(k == got[0] for k in got)
        assert rows // 2 not in got[0]
