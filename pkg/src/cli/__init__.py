"""Command-line surface: run configurations, context building and commands."""
