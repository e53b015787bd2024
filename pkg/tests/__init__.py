"""Test suite for stc_ris."""
