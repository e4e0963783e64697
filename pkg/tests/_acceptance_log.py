"""Per-criterion verdict lines collected by the acceptance suite."""

RESULTS: list = []
