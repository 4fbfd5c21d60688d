"""Closed-form success probabilities, crossover thresholds and runtimes."""
