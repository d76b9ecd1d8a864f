"""Shared sink for the per-criterion PASS/FAIL lines."""
LINES = []
