"""Test suite for tangle-response."""
