"""Command line interface: ``lmg-stieltjes <mode> ...``."""
from .main import build_parser, main

__all__ = ["build_parser", "main"]
