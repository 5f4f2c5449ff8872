"""Bit-packed vectors and dense matrices over GF(2).

Bits are stored LSB-first inside little-endian ``uint64`` words; nothing
outside this module depends on that layout.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import UsageError

_WORD = 64


def _n_words(n: int) -> int:
    return (n + _WORD - 1) // _WORD


class BitWord:
    """Fixed-length binary vector with packed storage.

    Bits beyond ``len(self)`` are kept at zero so that equality and
    weight can work on whole words.
    """

    __slots__ = ("_n", "_w")

    def __init__(self, length: int, words: np.ndarray | None = None):
        if length < 0:
            raise UsageError("negative BitWord length")
        self._n = int(length)
        if words is None:
            self._w = np.zeros(_n_words(length), dtype=np.uint64)
        else:
            w = np.array(words, dtype=np.uint64, copy=True)
            if w.shape != (_n_words(length),):
                raise UsageError("word buffer does not match length")
            self._w = w
            self._mask_tail()

    def _mask_tail(self) -> None:
        r = self._n % _WORD
        if r and self._w.size:
            self._w[-1] &= np.uint64((1 << r) - 1)

    @classmethod
    def zeros(cls, length: int) -> "BitWord":
        return cls(length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitWord":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        return cls.from_array(arr)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitWord":
        arr = np.asarray(arr)
        if arr.ndim != 1:
            raise UsageError("expected a 1-D bit array")
        if arr.size and not np.all((arr == 0) | (arr == 1)):
            raise UsageError("bit values must be 0 or 1")
        n = arr.size
        padded = np.zeros(_n_words(n) * _WORD, dtype=np.uint8)
        padded[:n] = arr
        packed = np.packbits(padded, bitorder="little")
        return cls(n, packed.view("<u8").astype(np.uint64))

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "BitWord":
        w = cls(length)
        for i in indices:
            w[i] = 1
        return w

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BitWord":
        """Parse the MSB-first hex rendering produced by :meth:`to_hex`."""
        text = text.strip()
        need = (length + 3) // 4
        if len(text) != need:
            raise UsageError(f"expected {need} hex digits for {length} bits, got {len(text)}")
        try:
            nibbles = [int(ch, 16) for ch in text]
        except ValueError as exc:
            raise UsageError(f"invalid hex digit in {text!r}") from exc
        bits = np.zeros(need * 4, dtype=np.uint8)
        for i, v in enumerate(nibbles):
            for j in range(4):
                bits[4 * i + j] = (v >> (3 - j)) & 1
        if bits[length:].any():
            raise UsageError("nonzero padding bits in hex word")
        return cls.from_array(bits[:length])

    def to_hex(self) -> str:
        bits = self.to_array()
        pad = (-len(bits)) % 4
        if pad:
            bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
        quads = bits.reshape(-1, 4)
        vals = quads[:, 0] * 8 + quads[:, 1] * 4 + quads[:, 2] * 2 + quads[:, 3]
        return "".join("0123456789abcdef"[v] for v in vals)

    def to_array(self) -> np.ndarray:
        if self._n == 0:
            return np.zeros(0, dtype=np.uint8)
        raw = self._w.astype("<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self._n].copy()

    def to_list(self) -> list[int]:
        return self.to_array().tolist()

    @property
    def words(self) -> np.ndarray:
        return self._w

    def copy(self) -> "BitWord":
        return BitWord(self._n, self._w)

    def weight(self) -> int:
        return int(sum(int(x).bit_count() for x in self._w))

    def support(self) -> list[int]:
        return np.flatnonzero(self.to_array()).tolist()

    def any(self) -> bool:
        return bool(self._w.any())

    def __len__(self) -> int:
        return self._n

    def _check(self, i: int) -> int:
        if i < 0:
            i += self._n
        if not 0 <= i < self._n:
            raise IndexError(f"bit index {i} out of range for length {self._n}")
        return i

    def __getitem__(self, i: int) -> int:
        i = self._check(i)
        return int((int(self._w[i >> 6]) >> (i & 63)) & 1)

    def __setitem__(self, i: int, value: int) -> None:
        i = self._check(i)
        m = np.uint64(1 << (i & 63))
        if value & 1:
            self._w[i >> 6] |= m
        else:
            self._w[i >> 6] &= ~m

    def flip(self, i: int) -> None:
        i = self._check(i)
        self._w[i >> 6] ^= np.uint64(1 << (i & 63))

    def __xor__(self, other: "BitWord") -> "BitWord":
        return xor_into(self.copy(), other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitWord):
            return NotImplemented
        return self._n == other._n and bool(np.array_equal(self._w, other._w))

    def __hash__(self) -> int:
        return hash((self._n, self._w.tobytes()))

    def __repr__(self) -> str:
        if self._n <= 64:
            return f"BitWord({''.join(map(str, self.to_list()))})"
        return f"BitWord(len={self._n}, weight={self.weight()})"


def xor_into(dst: BitWord, src: BitWord) -> BitWord:
    """``dst ^= src`` in place; returns ``dst``."""
    if len(dst) != len(src):
        raise UsageError(f"length mismatch: {len(dst)} vs {len(src)}")
    np.bitwise_xor(dst.words, src.words, out=dst.words)
    return dst


class DenseGf2Matrix:
    """Row-major packed binary matrix.

    ``data`` has shape ``(rows, words)``; row ``i`` is viewable as a
    :class:`BitWord` through :meth:`row`.
    """

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        shape = (self.rows, _n_words(self.cols))
        if data is None:
            self.data = np.zeros(shape, dtype=np.uint64)
        else:
            if data.shape != shape:
                raise UsageError(f"data shape {data.shape} != {shape}")
            self.data = np.array(data, dtype=np.uint64, copy=True)

    @classmethod
    def from_row_lists(cls, row_lists: Sequence[Iterable[int]], cols: int) -> "DenseGf2Matrix":
        m = cls(len(row_lists), cols)
        lens = [len(idx) for idx in row_lists]
        r = np.repeat(np.arange(len(row_lists)), lens)
        c = np.fromiter((j for idx in row_lists for j in idx), dtype=np.int64, count=sum(lens))
        bad = (c < 0) | (c >= cols)
        if bad.any():
            raise UsageError(f"column {int(c[bad][0])} out of range")
        np.bitwise_xor.at(m.data, (r, c >> 6), np.left_shift(np.uint64(1), (c & 63).astype(np.uint64)))
        return m

    @classmethod
    def from_dense(cls, array) -> "DenseGf2Matrix":
        a = np.asarray(array, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise UsageError("expected a 2-D array")
        m = cls(a.shape[0], a.shape[1])
        for i in range(a.shape[0]):
            m.data[i] = BitWord.from_array(a[i]).words
        return m

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i in range(self.rows):
            out[i] = self.row(i).to_array()
        return out

    def row(self, i: int) -> BitWord:
        return BitWord(self.cols, self.data[i])

    def transpose(self) -> "DenseGf2Matrix":
        return DenseGf2Matrix.from_dense(self.to_dense().T)

    def __repr__(self) -> str:
        return f"DenseGf2Matrix({self.rows}x{self.cols})"


def independent_row_set(m: DenseGf2Matrix) -> list[int]:
    """Greedy ascending maximal independent row set.

    Row ``i`` is kept iff it is not in the span of rows ``0..i-1``. Forward
    elimination only ever XORs a kept row into later rows, so the scan
    order is preserved.
    """
    return kernels.kept_rows(m.data)


def rank(m: DenseGf2Matrix) -> int:
    return len(independent_row_set(m))
