"""Minimal float64 network: dense projection, GELU, coral heads, AdamW, gradient check."""
