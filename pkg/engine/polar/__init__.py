"""GF(2) polar code primitives and the sparse polar factor graph."""
