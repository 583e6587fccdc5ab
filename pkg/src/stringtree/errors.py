"""Exception hierarchy shared by every module of the package."""


class StringTreeError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(StringTreeError, ValueError):
    """Malformed textual input (trees, automata, grammars, expressions)."""


class UnbalancedBrackets(FormatError):
    pass


class ContentOutsideRoot(FormatError):
    pass


class BadEscape(FormatError):
    pass


class ArityMismatch(FormatError):
    pass


class ParseError(FormatError):
    """Syntax error in an automaton, grammar, expression or rule file."""


class UnknownNonterminal(FormatError):
    pass


class AxiomMissing(FormatError):
    pass


class UndeclaredVariable(FormatError):
    pass


class VariableInAlphabet(FormatError):
    pass


class AlphabetMismatch(StringTreeError):
    pass


class ImpureInput(StringTreeError):
    pass


class NotDeterministic(StringTreeError):
    pass


class BudgetExceeded(StringTreeError):
    pass


class VariableInInput(StringTreeError):
    pass


class UnboundGroup(StringTreeError):
    pass


class ProgramError(StringTreeError):
    pass
