"""Negative beta-shifts: expansions, admissibility, codes, the interval exchange
between levels and the maximal-entropy measure."""

from .automaton import LowerBoundAutomaton, SupportAutomaton, build_support_automaton
from .codes import (CodeFamily, code_statistics, decompose_characteristic, enumerate_family,
                    verify_series_identity)
from .config import DEFAULTS, Settings
from .errors import (BoundaryAmbiguous, BudgetExceeded, IncomparablePrefix, InvalidBase, MalformedCharacteristic,
                     NegBetaError, NoConvergence, NotEventuallyPeriodic, NotInImage, TruncationInsufficient)
from .exchange import (classify_interval, gamma_bound, phi_apply, phi_decode, t_threshold, upsilon,
                       upsilon_inverse)
from .measure import (codeword_measure, cylinder_measure, is_intransitive, orbit_simulate, parry_measure,
                      support_code)
from .numeration import (Base, characteristic_sequence, endpoints, expand, golden_base, neg_gamma1_base,
                         parse_base, tbeta_step)
from .ordering import alt_compare, brute_force_language, count_words, is_admissible
from .sequences import DigitSequence, format_word, parse_word

__version__ = "0.1.0"
