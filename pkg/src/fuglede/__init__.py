"""Computer verification of Fuglede's conjecture in Z_2^5 and Z_2^6.

The rank pipeline lives in :mod:`fuglede.rank_pipeline` and is imported on
demand, since importing it compiles the LangGraph graph.
"""

from .enumeration import CaseSpec, FreeTuple, count_enumeration, enumerate_tuples
from .gf2 import GF2Matrix, RankRecord, SignMatrix, dephase, dephased_rank, gf2_rank
from .spectile import SubsetZ2d, check_equivalence, is_spectral, is_tile
from .verify import VerificationRunner, VerifyReport

__all__ = [
    "CaseSpec",
    "FreeTuple",
    "GF2Matrix",
    "RankRecord",
    "SignMatrix",
    "SubsetZ2d",
    "VerificationRunner",
    "VerifyReport",
    "check_equivalence",
    "count_enumeration",
    "dephase",
    "dephased_rank",
    "enumerate_tuples",
    "gf2_rank",
    "is_spectral",
    "is_tile",
]
