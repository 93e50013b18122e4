"""Classical and quantum versions of the two-proposal ultimatum game."""

from .classical_game import Bimatrix, GameParams, PureProfile, build_gamma1, normal_representation
from .equilibrium import grid_deviation_search, pure_nash, weakly_dominant_column
from .ewl_scheme import EWLGame, EWLProfile, ewl_payoff_closed, ewl_payoff_numeric
from .mw_scheme import MWGame, MWProfile, mw_matrix, mw_payoff, preset
from .sequential import OutcomeOperator, build_tree

__all__ = [
    "Bimatrix",
    "EWLGame",
    "EWLProfile",
    "GameParams",
    "MWGame",
    "MWProfile",
    "OutcomeOperator",
    "PureProfile",
    "build_gamma1",
    "build_tree",
    "ewl_payoff_closed",
    "ewl_payoff_numeric",
    "grid_deviation_search",
    "mw_matrix",
    "mw_payoff",
    "normal_representation",
    "preset",
    "pure_nash",
    "weakly_dominant_column",
]
