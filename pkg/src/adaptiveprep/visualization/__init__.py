"""Visualization package for histograms and crossover charts."""
