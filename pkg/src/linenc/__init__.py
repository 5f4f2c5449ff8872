"""Linear-time encoding of LDPC codes.

A parity-check matrix is preprocessed once into a :class:`Schedule` by
splitting its Tanner graph into pseudo-trees and 1- or 2-fold encoding
stopping sets; each information word is then encoded with a number of
XORs linear in the code length.
"""

from .encoder import EncodeReport, Schedule, encode, encode_many, preprocess
from .errors import FormatError, LinencError, StructuralError, UsageError
from .gf2 import BitWord, DenseGf2Matrix, independent_row_set, rank, xor_into
from .io import read_matrix, read_schedule, save_schedule
from .oracle import verify
from .tanner import SubgraphMask, TannerGraph, from_matrix

__all__ = [
    "BitWord",
    "DenseGf2Matrix",
    "EncodeReport",
    "FormatError",
    "LinencError",
    "Schedule",
    "StructuralError",
    "SubgraphMask",
    "TannerGraph",
    "UsageError",
    "encode",
    "encode_many",
    "from_matrix",
    "independent_row_set",
    "preprocess",
    "rank",
    "read_matrix",
    "read_schedule",
    "save_schedule",
    "verify",
    "xor_into",
]

__version__ = "0.1.0"
