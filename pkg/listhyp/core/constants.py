# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Constants shared across the package.
"""

from listhyp.core.config import settings

# Report / instance schema
SPEC_VERSION = "1"

# Tolerances
NORMALIZATION_TOL = 1e-9
# Renormalized totals land within this of one
EXACT_SUM_TOL = 1e-15
IDENTITY_TOL = 1e-12
RENORMALIZE_SLACK = 1e-6
CLAMP_TOL = 1e-12
# Likelihood ratios closer than this (relative) are one ratio class
RATIO_REL_TOL = 1e-12
BOUND_TOL = 1e-9
DUAL_TOL = 1e-10
# Relative slack when checking that a constructed test thresholds at mu
THRESHOLD_CHECK_TOL = 1e-9

# Size caps
MAX_OUTCOMES = settings.max_outcomes
ORACLE_MAX_TESTS_LOG2 = settings.oracle_max_tests_log2
ORACLE_MAX_MASS_POINTS = settings.oracle_max_mass_points

# Exact-arithmetic oracle caps
EXACT_MAX_M = 8
EXACT_MAX_L = 3
EXACT_MAX_OUTCOMES = 10

# Instance generation
PRODUCT_LABEL_SEPARATOR = ","

# Q_Y families accepted by analyze / sweep-qy
FAMILY_UNIFORM = "uniform"
FAMILY_MARGINAL = "marginal"
FAMILY_QSTAR = "qstar"
FAMILY_DIRICHLET = "dirichlet"

SUPPORTED_FAMILIES = [
    FAMILY_UNIFORM,
    FAMILY_MARGINAL,
    FAMILY_QSTAR,
    FAMILY_DIRICHLET,
]

# CSV report columns, in output order
CSV_COLUMNS = [
    "instance_hash",
    "M",
    "L",
    "cardY",
    "q_family",
    "q_index",
    "eps_min",
    "mc_bound",
    "is_bound",
    "gap_mc",
    "gap_is",
    "lambda_opt",
]

# CLI exit codes
EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NUMERIC = 3
EXIT_ORACLE_MISMATCH = 4

# Random instances for oracle-check
ORACLE_CHECK_MAX_M = 6
ORACLE_CHECK_MAX_L = 3
ORACLE_CHECK_MAX_OUTCOMES = 8
ORACLE_CHECK_RANDOM_QY = 5
# Largest support on which the exhaustive Neyman-Pearson oracle is run
BRUTE_NP_MAX_SUPPORT = 16
