"""Outer-code design: DE baseline, stopping-set swaps and nonstationary DE."""
