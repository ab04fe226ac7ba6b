"""Embedding exporter: pretrained masked-LM vectors in the NLQE v1 format.

Runs a pretrained transformer encoder over (question, schema) pairs, aligns
its subword pieces to the downstream toolkit's word tokens by
character-offset overlap, mean-pools pieces per token and per header, and
writes the frozen vectors to the binary embedding format that toolkit
loads. The two sides share nothing but the file contracts.
"""

from .export import ExportJob, export, verify

__version__ = "0.1.0"

__all__ = ["ExportJob", "export", "verify"]
