"""Builders for GHZ, W and constant-depth subroutine circuits."""
