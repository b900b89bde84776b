"""Kernel formulas, substitution, definitional axioms and induction."""
