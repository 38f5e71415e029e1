"""Bounded model-theoretic checks: formulas, finite structures, model
companionship surrogates, and the coding of hereditarily finite sets."""
from .formula import Signature
from .syntax import parse, to_text
from .normal import levy_classify, to_prenex
from .structures import FinStructure, satisfies

__all__ = ["Signature", "parse", "to_text", "levy_classify", "to_prenex",
           "FinStructure", "satisfies"]
