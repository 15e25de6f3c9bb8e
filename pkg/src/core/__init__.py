"""Core package for KlSpark: shared models, settings, errors and storage."""
