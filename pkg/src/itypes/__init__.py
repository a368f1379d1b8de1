"""Lambda-I inhabitants of System F types: normalization, derivations,
quantifier polarity, inhabitant enumeration and lambda-K witness extraction."""

from itypes.parser import ParseError, parse_term, parse_type
from itypes.printer import print_term, print_type

__all__ = ["ParseError", "parse_term", "parse_type", "print_term", "print_type"]
