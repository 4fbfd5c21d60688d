"""Statevector and worst-case Monte Carlo simulation."""
