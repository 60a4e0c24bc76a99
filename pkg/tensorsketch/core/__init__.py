"""Core utilities: exceptions, logging and counter-based random numbers."""
