"""Loading, validating and batching cloze-task data."""
