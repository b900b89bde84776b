"""Species flattening, typing and dependency analysis."""
