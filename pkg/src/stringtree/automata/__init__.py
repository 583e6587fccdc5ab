from .construct import (Ncfta, bool_complement, bool_intersect, bool_union, complete,
                        determinize, embed_cta, embed_fa, embed_fa_vertical, single_letter_automaton,
                        to_complete_dfsta, to_pure_states)
from .fsta import DFSTA, GNFSTA, NFSTA, Fsta, run_accept, state_label
from .run import BruteForce, RunTrace, brute_force_accept, run_length, trace_run
from .textfmt import fa_from_regex, format_fsta, parse_fa, parse_fsta, parse_ncfta
