"""Text format, generator and command-line interface."""

from .generate import GeneratorSpec, carrier_measure, generate
from .main import main, run_command
from .textio import Document, ParseError, dump, parse

__all__ = ["Document", "GeneratorSpec", "ParseError", "carrier_measure", "dump",
           "generate", "main", "parse", "run_command"]
