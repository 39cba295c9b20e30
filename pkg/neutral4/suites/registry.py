"""The named check suites.

A suite takes a SuiteContext and returns its CheckReports in a fixed order.
Per-point work goes through `SuiteContext.evaluate`; report assembly stays on
the event loop thread.
"""

import asyncio
import logging
from dataclasses import dataclass
from functools import partial
from typing import Awaitable, Callable, Dict, List

from neutral4.config import get_settings
from neutral4.errors import SpecResolutionError
from neutral4.exprdsl.oracle import ad_oracle_at, shipped_expressions
from neutral4.geometry.operations import signature_at, signature_report
from neutral4.killing.pairs import david_report, field_pair_at, killing_pair_report
from neutral4.models import hopf_search, inoue, kodaira
from neutral4.models.registry import SUITE_NAMES
from neutral4.schemas.report import Bound, CheckReport, ClauseResult, Tier
from neutral4.structures.checks import (
    companion_planes_at,
    companion_planes_report,
    complex_structure_at,
    complex_structure_report,
    involution_at,
    involution_report,
)
from neutral4.structures.construction import build_triple
from neutral4.structures.integrability import para_hyperhermitian_at, para_hyperhermitian_report
from neutral4.suites.context import SuiteContext, run_points
from neutral4.suites.points import (
    holomorphy_at,
    holomorphy_report,
    lee_at,
    lee_report,
    reference_triple,
    weyl_split_at,
    weyl_split_report,
)
from neutral4.tensor.curvature import curvature_checks_at, curvature_report

logger = logging.getLogger(__name__)
settings = get_settings()

SuiteFunction = Callable[[SuiteContext], Awaitable[List[CheckReport]]]


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    run: SuiteFunction


async def signature_suite(ctx: SuiteContext) -> List[CheckReport]:
    geom = ctx.geometry
    sample = ctx.sample()
    values = await ctx.evaluate(partial(signature_at, geom), sample)
    return [signature_report(geom, sample.points, values, sample.seed, ctx.tol)]


async def curvature_suite(ctx: SuiteContext) -> List[CheckReport]:
    geom, info = ctx.geometry, ctx.bundle.info
    sample = ctx.sample()
    values = await ctx.evaluate(partial(curvature_checks_at, geom), sample)
    reports = [
        curvature_report(
            geom,
            sample.points,
            values,
            sample.seed,
            ctx.tol,
            flat=info.flat,
            ricci_flat=info.ricci_flat,
            constant_scalar=info.constant_scalar,
        )
    ]
    if info.builtin and info.name == "kodaira":
        maps = kodaira.kodaira_maps()
        deck = kodaira.kodaira_sample(geom, maps, ctx.samples, ctx.seed)
        invariance = await ctx.evaluate(partial(kodaira.kodaira_invariance_at, geom, maps), deck)
        reports.append(kodaira.kodaira_invariance_report(geom, maps, deck.points, invariance, deck.seed, ctx.tol))
    return reports


async def weyl_split_suite(ctx: SuiteContext) -> List[CheckReport]:
    X, Y = ctx.pair("weyl_split")
    triple = build_triple(ctx.geometry, X, Y)
    sample = ctx.sample()
    values = await ctx.evaluate(partial(weyl_split_at, triple), sample)
    return [weyl_split_report(ctx.geometry, sample.points, values, sample.seed, ctx.tol)]


async def para_hyperhermitian_suite(ctx: SuiteContext) -> List[CheckReport]:
    geom = ctx.geometry
    X, Y = ctx.pair("para_hyperhermitian")
    triple = build_triple(geom, X, Y)
    sample = ctx.sample()
    points, seed, tol = sample.points, sample.seed, ctx.tol

    complex_values = await ctx.evaluate(partial(complex_structure_at, geom, X, Y), sample)
    plane_values = await ctx.evaluate(partial(companion_planes_at, geom, X, Y), sample)
    involution_values = await ctx.evaluate(partial(involution_at, geom, X, Y), sample)
    triple_values = await ctx.evaluate(partial(para_hyperhermitian_at, triple), sample)
    holomorphy_values = await ctx.evaluate(partial(holomorphy_at, triple, ctx.bundle.extra_fields), sample)
    return [
        complex_structure_report(geom, points, complex_values, seed, tol),
        companion_planes_report(geom, points, plane_values, seed, tol),
        involution_report(geom, points, involution_values, seed, tol),
        para_hyperhermitian_report(triple, points, triple_values, seed, tol),
        holomorphy_report(triple, points, holomorphy_values, ctx.bundle.info.holomorphic_pair, seed, tol),
    ]


async def killing_pair_suite(ctx: SuiteContext) -> List[CheckReport]:
    geom = ctx.geometry
    X, Y = ctx.pair("killing_pair")
    sample = ctx.sample()
    values = await ctx.evaluate(partial(field_pair_at, geom, X, Y), sample)
    reports = [killing_pair_report(geom, X, Y, sample.points, values, sample.seed, ctx.tol)]
    if ctx.bundle.inoue is not None:
        for label in inoue.OMEGA_F_CHOICES:
            variant = inoue.inoue_omega_f_geometry(geom, label, ctx.samples, ctx.seed).geometry
            variant_values = await ctx.evaluate(partial(field_pair_at, variant, X, Y), sample)
            reports.append(killing_pair_report(variant, X, Y, sample.points, variant_values, sample.seed, ctx.tol))
    return reports


async def david_suite(ctx: SuiteContext) -> List[CheckReport]:
    geom = ctx.geometry
    X, Y = ctx.pair("david")
    sample = ctx.sample()
    values = await ctx.evaluate(partial(field_pair_at, geom, X, Y), sample)
    return [david_report(geom, X, Y, sample.points, values, sample.seed, ctx.tol)]


async def lee_suite(ctx: SuiteContext) -> List[CheckReport]:
    bundle = ctx.bundle
    ctx.pair("lee")
    triple = reference_triple(bundle)
    info = bundle.info
    if not info.builtin:
        expected, coefficient, expectation = None, 0.0, None
    elif info.lee is None:
        expected, coefficient, expectation = None, 0.0, "0"
    else:
        coefficient, name = info.lee
        expected, expectation = ctx.geometry.form(name), f"{coefficient:g} {name}"
    sample = ctx.sample()
    values = await ctx.evaluate(partial(lee_at, triple, expected, coefficient), sample)
    return [lee_report(triple, sample.points, values, expectation, sample.seed, ctx.tol)]


async def inoue_invariance_suite(ctx: SuiteContext) -> List[CheckReport]:
    constants = ctx.bundle.inoue
    if constants is None:
        raise SpecResolutionError(
            f"suite 'inoue_invariance' needs the inoue_s_plus model, not '{ctx.bundle.name}'", "run"
        )
    geom = ctx.geometry
    maps = inoue.inoue_generators(constants)
    sample = inoue.inoue_sample(geom, maps, ctx.samples, ctx.seed)
    values = await ctx.evaluate(partial(inoue.inoue_structure_at, geom, constants, maps), sample)
    return [inoue.inoue_structure_report(geom, constants, sample.points, values, sample.seed, ctx.tol)]


async def hopf_remark_suite(ctx: SuiteContext) -> List[CheckReport]:
    """
    The multi-start search on S^1 x SU(2) and its abelian positive control.

    Attempts are independent and merged by index. The sampling seed seeds
    the starts; `samples` does not apply.
    """
    c = hopf_search.hopf_structure_constants()
    results = await run_points(
        partial(_hopf_attempt, seed=ctx.seed, c=c), range(settings.hopf_attempts)
    )
    control = await asyncio.to_thread(hopf_search.positive_control, ctx.seed)
    search = hopf_search.assemble_search_report(
        results, ctx.seed, settings.hopf_threshold, "commuting", control
    )
    clauses = [
        ClauseResult.from_residuals(
            "no_admissible_pair",
            Tier.ALGEBRAIC,
            search.residuals,
            tolerance=search.threshold,
            bound=Bound.LOWER,
            note="best residual of every attempt stays above the threshold",
        ),
        ClauseResult.from_residuals(
            "positive_control",
            Tier.ALGEBRAIC,
            [control],
            tolerance=settings.hopf_control_tolerance,
            note="the same search on the abelian frame finds a pair",
        ),
    ]
    pinned = {
        "attempts": search.attempts,
        "threshold": search.threshold,
        "conclusion": search.conclusion,
    }
    return [
        CheckReport.assemble("hopf_remark", ctx.bundle.name, [], clauses, seed=ctx.seed, pinned=pinned)
    ]


def _hopf_attempt(index: int, seed: int, c) -> hopf_search.AttemptResult:
    return hopf_search.search_attempt(index, seed, c, "commuting")


async def ad_oracle_suite(ctx: SuiteContext) -> List[CheckReport]:
    geom = ctx.geometry
    expressions = shipped_expressions(geom)
    sample = ctx.sample()
    values = await ctx.evaluate(partial(ad_oracle_at, geom, expressions), sample)
    tolerance = settings.ad_oracle_relative_tol
    clauses = [
        ClauseResult.from_residuals(
            name, Tier.FIRST_DERIVATIVE, [v[name] for v in values], tolerance=tolerance, note=note
        )
        for name, note in (
            ("gradient", "exact gradient vs Richardson central differences"),
            ("hessian", "exact Hessian vs Richardson differences of the exact gradient"),
        )
    ]
    pinned = {"expressions": len(expressions)}
    return [CheckReport.assemble("ad_oracle", geom.name, sample.points, clauses, seed=sample.seed, pinned=pinned)]


SUITES: Dict[str, Suite] = {
    suite.name: suite
    for suite in (
        Suite("signature", "metric has signature (2,2) with no small eigenvalues", signature_suite),
        Suite(
            "curvature",
            "Riemann symmetries, Bianchi, claimed (Ricci-)flatness, Kodaira deck invariance",
            curvature_suite,
        ),
        Suite("weyl_split", "Weyl halves in the structure orientation; one vanishes when integrable", weyl_split_suite),
        Suite(
            "para_hyperhermitian",
            "complex structure, companion planes, involution S, triple integrability, holomorphy",
            para_hyperhermitian_suite,
        ),
        Suite("killing_pair", "X, Y null, orthogonal, independent and Killing", killing_pair_suite),
        Suite("david", "conditional consequences for null conformal Killing pairs", david_suite),
        Suite("lee", "equal closed Lee forms matching the model's claim", lee_suite),
        Suite("inoue_invariance", "Inoue coframe identities and generator invariance", inoue_invariance_suite),
        Suite("hopf_remark", "search for a commuting null Killing pair on S^1 x SU(2)", hopf_remark_suite),
        Suite("ad_oracle", "exact jets against finite differences on shipped expressions", ad_oracle_suite),
    )
}

assert tuple(SUITES) == SUITE_NAMES


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise SpecResolutionError(f"unknown suite '{name}'; known suites: {', '.join(SUITES)}", "run") from None


def list_suites() -> List[str]:
    return list(SUITES)


def describe_suite(name: str) -> str:
    suite = get_suite(name)
    return f"{suite.name}: {suite.description}"
