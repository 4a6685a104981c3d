"""brind: exact Brauer induction and character arithmetic for finite groups.

The package computes, with exact cyclotomic arithmetic throughout:
character tables (Dixon's modular method), induction and restriction,
lambda and Adams operations, the monomial module A(T,G) with its explicit
Brauer induction section and Mackey restriction, and the Z[eps]/(eps^2-1)
weak-additivity calculus, together with a verification harness that
replays every identity over a built-in corpus of small groups.
"""

__version__ = "0.1.0"

from .cyclotomic import Cyclotomic, parse_cyclotomic, rational, zeta
from .errors import BrindError, CapacityError, ConsistencyError, InputError
from .groups import (
    ConjClass,
    DoubleCoset,
    PermGroup,
    Subgroup,
    abelianization,
    conjugacy_classes,
    double_cosets,
    load_group,
    normalizer,
    parse_group_file,
    schreier_sims,
    subgroups_up_to_conjugacy,
)
from .perms import Permutation, cycle_string, identity, parse_cycles
from .characters import (
    CharacterTable,
    ClassFunction,
    LinearCharacter,
    VirtualCharacter,
    character_table,
    induce,
    inner_product,
    linear_characters,
    restrict,
    tensor,
)
from .lambda_adams import LambdaContext, adams, lambda_op, sym_op
from .monomial import (
    MonomialElement,
    MonomialPair,
    PairPoset,
    brauer_induction,
    check_section,
    evaluate,
    moebius,
    pair_poset,
    restrict_monomial,
)
from .realeps import (
    AugmentedGroup,
    EpsModuleElement,
    EpsScalar,
    WeakAdditiveMap,
    brauer_as_weak_additive,
    theta_rank_one,
    transfer_unit,
    twist_scalar,
    weak_extend,
)
from .verify import run_verification

__all__ = [name for name in dir() if not name.startswith("_")]
