"""Unit tests for the robust beamforming tool."""
