"""Run manifests: provenance for every file a command writes."""
