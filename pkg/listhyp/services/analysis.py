# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Report orchestration.

Commands parse their inputs, call into this module and serialize the
returned models. Per-Q_Y evaluations run on the worker pool; results are
assembled in (family order, member index) order so reports are stable.
"""

import csv
import json
import logging
import math
import time
from datetime import datetime, timezone
from typing import Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np
from pydantic import BaseModel

from listhyp.bounds import (
    info_spectrum_sup,
    lambda_star,
    lemma2_improve,
    list_mass_pair,
    meta_converse_bound,
    qstar,
)
from listhyp.core.constants import BOUND_TOL, CSV_COLUMNS, DUAL_TOL
from listhyp.core.errors import TooLarge, ValidationError
from listhyp.distributions import (
    JointDistribution,
    OutputDistribution,
    build_list_joint,
    check_list_size,
    total_variation,
    validate_output,
)
from listhyp.list_test import min_error, optimal_list_test, simulate
from listhyp.models.instance import Instance
from listhyp.models.report import (
    InfoSpectrumEntry,
    InstanceDigest,
    Lemma2Report,
    MetaConverseEntry,
    OracleFlags,
    Report,
    SimulationReport,
    SweepRow,
    TradeoffPoint,
)
from listhyp.neyman_pearson import pareto_curve
from listhyp.oracle import brute_min_error
from listhyp.services.families import FamilyMember, expand_family, parse_family
from listhyp.services.pool import parallel_map

logger = logging.getLogger(__name__)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def digest(instance: Instance, L: int) -> InstanceDigest:
    return InstanceDigest(
        M=instance.M,
        L=L,
        cardY=len(instance.outcome_labels),
        content_hash=instance.content_hash(),
    )


def resolve_list_size(instance: Instance, L: Optional[int]) -> int:
    """The --l override if given, else the instance's own L."""
    return instance.L if L is None else L


def collect_members(
    P: JointDistribution, L: int, families: Sequence[str]
) -> List[FamilyMember]:
    """Expand every family spec, parsing all of them before any work."""
    specs = [parse_family(family) for family in families]
    PL = build_list_joint(P, L)
    members: List[FamilyMember] = []
    for spec in specs:
        members.extend(expand_family(spec, P, L, PL))
    return members


class _Evaluation(BaseModel):
    meta_converse: MetaConverseEntry
    info_spectrum: InfoSpectrumEntry


def _evaluate(
    P: JointDistribution,
    L: int,
    eps: float,
    q_star: OutputDistribution,
    member: FamilyMember,
) -> _Evaluation:
    mc = meta_converse_bound(P, L, member.q_y)
    spectrum = info_spectrum_sup(P, L, member.q_y)
    return _Evaluation(
        meta_converse=MetaConverseEntry(
            q_family=member.family,
            q_index=member.index,
            q_y=member.q_y.q.tolist(),
            tv_to_qstar=total_variation(member.q_y, q_star),
            alpha_value=mc.alpha_value,
            lower_bound_eps=mc.lower_bound_eps,
            identity_gap=mc.identity_gap,
        ),
        info_spectrum=InfoSpectrumEntry(
            q_family=member.family,
            q_index=member.index,
            lambda_opt=spectrum.lambda_opt,
            sup_value=spectrum.sup_value,
            lower_bound_eps=spectrum.lower_bound_eps,
            identity_gap=eps - spectrum.lower_bound_eps,
        ),
    )


def _oracle_flags(P: JointDistribution, L: int, eps: float, q_star: OutputDistribution, lam: float) -> OracleFlags:
    try:
        brute: Optional[bool] = abs(brute_min_error(P, L) - eps) <= BOUND_TOL
    except TooLarge as e:
        logger.warning("Skipping brute-force list error: %s", e)
        brute = None
    mc = meta_converse_bound(P, L, q_star)
    spectrum = info_spectrum_sup(P, L, q_star)
    return OracleFlags(
        brute_min_error=brute,
        meta_converse_tight=abs(mc.identity_gap) <= BOUND_TOL,
        info_spectrum_tight=abs(eps - spectrum.lower_bound_eps) <= BOUND_TOL,
        lambda_star_consistent=abs(spectrum.lambda_opt - lam) <= DUAL_TOL * max(1.0, lam),
    )


def analyze_instance(
    instance: Instance,
    families: Sequence[str],
    L: Optional[int] = None,
    with_timestamp: bool = True,
) -> Report:
    """eps_min, Q*, mu, lambda*, both bounds for every requested Q_Y and oracle flags.

    ``with_timestamp=False`` drops both the timestamp and the wall-clock
    stage timings so that repeated runs are byte-identical.
    """
    timings: Dict[str, float] = {}
    start = time.perf_counter()

    L = resolve_list_size(instance, L)
    P = instance.to_joint()
    check_list_size(P.M, L)
    PL = build_list_joint(P, L)
    members = collect_members(P, L, families)
    timings["validate"] = time.perf_counter() - start

    mark = time.perf_counter()
    eps = min_error(P, L).eps_min
    q_star, mu = qstar(PL)
    lam = lambda_star(PL)
    timings["closed_form"] = time.perf_counter() - mark

    mark = time.perf_counter()
    logger.info("Evaluating %d auxiliary Q_Y (M=%d, L=%d, |Y|=%d)", len(members), P.M, L, P.card_y)
    evaluations = parallel_map(lambda member: _evaluate(P, L, eps, q_star, member), members)
    timings["bounds"] = time.perf_counter() - mark

    mark = time.perf_counter()
    flags = _oracle_flags(P, L, eps, q_star, lam)
    timings["oracle"] = time.perf_counter() - mark

    return Report(
        timestamp=_now() if with_timestamp else None,
        instance=digest(instance, L),
        eps_min=eps,
        q_star=q_star.q.tolist(),
        mu=mu,
        lambda_star=lam,
        meta_converse=[e.meta_converse for e in evaluations],
        info_spectrum=[e.info_spectrum for e in evaluations],
        oracle=flags,
        timings=timings if with_timestamp else None,
    )


def report_rows(report: Report) -> List[SweepRow]:
    """CSV rows for a report, one per evaluated Q_Y."""
    rows = []
    for mc, spectrum in zip(report.meta_converse, report.info_spectrum):
        rows.append(
            SweepRow(
                instance_hash=report.instance.content_hash,
                M=report.instance.M,
                L=report.instance.L,
                cardY=report.instance.cardY,
                q_family=mc.q_family,
                q_index=mc.q_index,
                eps_min=report.eps_min,
                mc_bound=mc.lower_bound_eps,
                is_bound=spectrum.lower_bound_eps,
                gap_mc=report.eps_min - mc.lower_bound_eps,
                gap_is=report.eps_min - spectrum.lower_bound_eps,
                lambda_opt=spectrum.lambda_opt,
            )
        )
    return rows


def sweep_qy(instance: Instance, family: str, L: Optional[int] = None) -> List[SweepRow]:
    """One row per member of ``family``."""
    report = analyze_instance(instance, [family], L=L, with_timestamp=False)
    return report_rows(report)


def simulate_instance(
    instance: Instance,
    samples: int,
    seed: int,
    L: Optional[int] = None,
    with_timestamp: bool = True,
) -> SimulationReport:
    """Monte Carlo estimate of the optimal list test's error."""
    L = resolve_list_size(instance, L)
    P = instance.to_joint()
    eps = min_error(P, L).eps_min
    test = optimal_list_test(P, L)
    empirical = simulate(P, test, samples, seed)
    sigma = math.sqrt(eps * (1.0 - eps) / samples)
    abs_error = abs(empirical - eps)
    logger.info("Simulated %d samples: empirical %r vs eps_min %r", samples, empirical, eps)
    return SimulationReport(
        timestamp=_now() if with_timestamp else None,
        instance=digest(instance, L),
        samples=samples,
        seed=seed,
        eps_min=eps,
        empirical=empirical,
        abs_error=abs_error,
        sigma=sigma,
        within_three_sigma=abs_error <= 3.0 * sigma,
    )


def lemma2_report(
    instance: Instance,
    q_y: Sequence[float],
    y_bar: Optional[int] = None,
    L: Optional[int] = None,
) -> Lemma2Report:
    L = resolve_list_size(instance, L)
    P = instance.to_joint()
    q = validate_output(q_y)
    if q.card_y != P.card_y:
        raise ValidationError(f"Q_Y has {q.card_y} outcomes, instance has {P.card_y}")
    record = lemma2_improve(P, L, q, y_bar)
    return Lemma2Report(
        instance=digest(instance, L),
        q_y=q.q.tolist(),
        y_bar=record.y_bar,
        y_bar_label=P.outcome_labels[record.y_bar],
        x_bar=list(record.x_bar.entries),
        q_hat=record.q_hat.q.tolist(),
        mu=record.mu,
        lambda_star=record.lambda_star,
        eps1_hat=record.eps1_hat,
        eps0_before=record.eps0_before,
        eps0_after=record.eps0_after,
        threshold_cases_ok=list(record.threshold_cases_ok),
        alpha_before=record.alpha_before,
        alpha_after=record.alpha_after,
    )


def tradeoff_curve(instance: Instance, family: str, points: int, L: Optional[int] = None) -> List[TradeoffPoint]:
    """(beta, alpha_beta) on an even grid of [0, 1] for the first member of ``family``."""
    if points < 2:
        raise ValidationError(f"a tradeoff grid needs at least 2 points, got {points}")
    L = resolve_list_size(instance, L)
    P = instance.to_joint()
    member = collect_members(P, L, [family])[0]
    pq = list_mass_pair(P, L, member.q_y)
    grid = np.linspace(0.0, 1.0, points)
    return [TradeoffPoint(beta=beta, alpha=alpha) for beta, alpha in pareto_curve(pq, grid)]


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def to_json(model: BaseModel) -> str:
    """JSON with floats in shortest round-trip form."""
    return json.dumps(model.model_dump(), indent=2) + "\n"


def _cell(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Iterable[BaseModel], stream: TextIO, columns: Optional[Sequence[str]] = None) -> None:
    """Header plus one line per row, in the fixed column order."""
    rows = list(rows)
    if columns is None:
        columns = CSV_COLUMNS if not rows else list(type(rows[0]).model_fields)
    writer = csv.DictWriter(stream, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(value) for key, value in row.model_dump().items()})
