"""Stage orchestration behind the CLI commands."""
