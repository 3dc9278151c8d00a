"""Turns cloze instances into pooled numeric representations."""
