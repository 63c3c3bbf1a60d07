"""Exact arithmetic for the Romik map on the unit quarter circle."""

from .berggren import (
    ROOTS,
    Terminal,
    Triple,
    children,
    descend,
    enumerate_bfs,
    enumerate_oracle,
    is_funnel,
    parent,
    walk_tree,
)
from .dynamics import (
    DigitStream,
    RationalExpansion,
    Tail,
    digit,
    digit_all,
    expand_rational,
    expand_rational_both,
    expand_stream,
    iter_digits,
    t_map,
)
from .errors import RomikError
from .field import QFE, fundamental_unit, parse_qfe, squarefree_part
from .lagrange import (
    circular_root,
    construct_periodic,
    count_nkk,
    detect_period,
    galois_check,
    integralize,
    w_sequence,
)
from .quadspace import CirclePoint, act, mat_const, mat_word, project, q_cross, q_form

__version__ = "0.1.0"
