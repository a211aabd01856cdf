"""Toolkit for a family of lexical-resource notations.

Covers the Shabdaanjali bilingual dictionary format, TransLexGram
transfer-lexicon records with verb frames, the AnnCorra linear dependency
notation, Shabda-Sutra core-meaning formulas, frame-based structural
transfer, and a plain-directory treebank store.
"""

from .diagnostics import Diagnostic, LerilError, Severity

__version__ = "0.1.0"

__all__ = ["Diagnostic", "LerilError", "Severity", "__version__"]
