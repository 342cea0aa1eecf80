"""Spans of finite sets and the quasicategory they form."""

from .finset import FinSet, SetMap, pullback
from .spans import NatMatrix, Span1, Span2, compose_spans, span, span_matrix

__all__ = ["FinSet", "SetMap", "pullback", "NatMatrix", "Span1", "Span2", "compose_spans", "span", "span_matrix"]
