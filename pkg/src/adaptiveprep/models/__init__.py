"""Circuit representation, scheduling and the worst-case error model."""
