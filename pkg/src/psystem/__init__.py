"""Arithmetization of syntax for Gödel's system P and a proof kernel for its propositional fragment."""
import sys

# Gödel numbers routinely exceed the default int->str conversion limit
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

__version__ = "0.1.0"
