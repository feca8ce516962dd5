"""Augmented and local-global concatenated codes built from polar components."""
