"""Test package for adaptiveprep."""
