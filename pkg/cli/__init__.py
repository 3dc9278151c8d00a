"""Command-line surface: configuration and the train/predict/eval/gradcheck commands."""
