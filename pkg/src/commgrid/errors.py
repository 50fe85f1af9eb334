"""Exceptions shared across modules."""


class InternalInconsistency(RuntimeError):
    """A result contradicting a proven theorem: a bug or a bad certificate."""
