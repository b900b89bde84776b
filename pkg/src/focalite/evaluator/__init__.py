"""Runtime for the functional methods of collections."""
