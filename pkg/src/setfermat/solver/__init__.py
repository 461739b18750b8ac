"""Sampling descent toward set-stationary points."""

from .descent import DescentParams, DescentTrace, IterateRecord, Termination, descend, is_monotone, write_csv

__all__ = ["DescentParams", "DescentTrace", "IterateRecord", "Termination", "descend", "is_monotone", "write_csv"]
