"""Security metrics, attack models and reference experiments."""
