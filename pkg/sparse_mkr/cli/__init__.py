"""Command-line front end: kernel-table, check, fit and compare."""
