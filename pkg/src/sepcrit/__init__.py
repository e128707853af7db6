"""Separability criteria from mutually unbiased bases, MUMs and GSIC-POVMs."""
from .criteria import (CRITERIA, ENTANGLED, INCONCLUSIVE, CriterionResult, PairingRule, apply_pairing, eval_gsic_J,
                       eval_mub_M, eval_mum_T, eval_thm1_L, eval_thm2_S, eval_thm3_R, evaluate)
from .measurements import (AxiomReport, GsicSet, MubSet, MumSet, PositivityInfeasible, axiom_residuals,
                           build_gsic_set, build_mub_set, build_mum_set, gell_mann_basis, mum_from_mub,
                           weyl_heisenberg_sic)
from .states import (BellDiagonalSpec, BipartiteState, bell_diagonal, horodecki_3x3, maximally_entangled, mix,
                     random_state, weyl_operator, werner)

__version__ = "0.1.0"
