"""Monte-Carlo simulation: channels, records and the SNR sweep harness."""
