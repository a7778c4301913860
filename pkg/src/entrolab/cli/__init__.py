"""CLI commands for entrolab."""
