"""Surprisal-based reading-time evaluation of word segmentation schemes
(orthographic words, BPE subwords, morphemes) with n-gram language models."""

__version__ = "0.1.0"
