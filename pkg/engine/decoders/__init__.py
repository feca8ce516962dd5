"""SC and BP decoders, concatenated BP, genie-aided simulation and LLR histograms."""
