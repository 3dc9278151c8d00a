"""Training loop and batch prediction over a corpus."""
