"""Computable linear orders, eventually periodic sequences and the isomorphisms between them."""
from .errors import *  # noqa: F401,F403
from .orders import (  # noqa: F401
    Cmp, Dyadic, Eta, Finite, Lex, Omega, OmegaStar, RepPoint, Rev, Shuffle, SqLimit, Stage, Sum,
    Tag, Zeta, color_of, compare, construct, endpoints_and_meta, witness,
)
from .epseq import (  # noqa: F401
    EpSeq, EquivWitness, canonicalize, compare_ep, entry, eventual_period, prepend, shift,
    tail_equiv_n,
)
from .parse import (  # noqa: F401
    format_element, format_order, format_seq, parse_order_expr, parse_point, parse_seq,
)

__version__ = "0.1.0"
