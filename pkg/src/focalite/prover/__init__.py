"""Bounded tableau prover with ground congruence closure."""
