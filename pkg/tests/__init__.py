"""Test suite for the polarcat engine."""
