"""String trees, finite string-tree automata, regular tree grammars and tree expressions."""

from .errors import *  # noqa: F401,F403
from .tree import (NULL, Tree, concat, concat_all, encapsulate, equals_reduced, leaf, parse_tree,
                   reduce, serialize, vertical_concat, vertical_decode, vertical_encode)
from .terms import RankedTerm, parse_signature, parse_term, term_decode, term_encode

__version__ = "0.1.0"
