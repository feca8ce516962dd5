"""Quantized LLR densities and density-evolution constructions."""
