# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
listhyp - exact error probability of Bayesian list hypothesis testing.

Computes the minimum list error probability over finite alphabets and checks
it against the meta-converse and information-spectrum identities.
"""

__version__ = "0.1.0"
