# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Pydantic models for command output.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel

from listhyp.core.constants import SPEC_VERSION


class InstanceDigest(BaseModel):
    """Identifies the analyzed instance."""

    M: int
    L: int
    cardY: int
    content_hash: str


class MetaConverseEntry(BaseModel):
    """Meta-converse bound for one auxiliary Q_Y."""

    q_family: str
    q_index: int
    q_y: List[float]
    tv_to_qstar: float
    alpha_value: float
    lower_bound_eps: float
    identity_gap: float


class InfoSpectrumEntry(BaseModel):
    """Best information-spectrum bound for one auxiliary Q_Y."""

    q_family: str
    q_index: int
    lambda_opt: float
    sup_value: float
    lower_bound_eps: float
    identity_gap: float


class OracleFlags(BaseModel):
    """Agreement of closed forms with independent checks.

    ``brute_min_error`` is None when the instance exceeds the oracle cap.
    """

    brute_min_error: Optional[bool] = None
    meta_converse_tight: bool
    info_spectrum_tight: bool
    lambda_star_consistent: bool


class Report(BaseModel):
    """Full analysis of one instance."""

    spec_version: str = SPEC_VERSION
    timestamp: Optional[str] = None
    instance: InstanceDigest
    eps_min: float
    q_star: List[float]
    mu: float
    lambda_star: float
    meta_converse: List[MetaConverseEntry]
    info_spectrum: List[InfoSpectrumEntry]
    oracle: OracleFlags
    timings: Optional[Dict[str, float]] = None


class SweepRow(BaseModel):
    """One CSV row of a Q_Y sweep; field order is the CSV column order."""

    instance_hash: str
    M: int
    L: int
    cardY: int
    q_family: str
    q_index: int
    eps_min: float
    mc_bound: float
    is_bound: float
    gap_mc: float
    gap_is: float
    lambda_opt: float


class SimulationReport(BaseModel):
    spec_version: str = SPEC_VERSION
    timestamp: Optional[str] = None
    instance: InstanceDigest
    samples: int
    seed: int
    eps_min: float
    empirical: float
    abs_error: float
    sigma: float
    within_three_sigma: bool


class Lemma2Report(BaseModel):
    """Strict-improvement construction for a Q_Y with a zero."""

    spec_version: str = SPEC_VERSION
    instance: InstanceDigest
    q_y: List[float]
    y_bar: int
    y_bar_label: str
    x_bar: List[int]
    q_hat: List[float]
    mu: float
    lambda_star: float
    eps1_hat: float
    eps0_before: float
    eps0_after: float
    threshold_cases_ok: List[bool]
    alpha_before: float
    alpha_after: float


class TradeoffPoint(BaseModel):
    beta: float
    alpha: float


class OracleFailure(BaseModel):
    """One disagreement found by the oracle check."""

    instance_index: int
    M: int
    L: int
    cardY: int
    check: str
    expected: float
    actual: float


class OracleCheckSummary(BaseModel):
    spec_version: str = SPEC_VERSION
    count: int
    seed: int
    checks_run: int
    passed: bool
    failures: List[OracleFailure]
