"""Authorship-attribution benchmark over lexical and grammatical style-markers."""

__version__ = "0.1.0"
