"""Shared pytest configuration.

Hypothesis deadlines are disabled because several property tests draw Haar
samples through LAPACK, whose first-call dispatch cost is machine dependent.
"""

from hypothesis import settings

settings.register_profile("grassvol", deadline=None, max_examples=50)
settings.load_profile("grassvol")
