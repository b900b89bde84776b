"""Checker, prover and interpreter for a fragment of the FoCaLiZe species language."""
