"""
Solver runs with independent verification, and the seeded certification
suite built on top of them.
"""
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from app.core.config import settings
from app.core.errors import LPError, ParameterError, RoundingInvariantError, SolverMismatchError
from app.models.base import to_fraction
from app.models.instance import EdgePacking, Instance
from app.models.report import (
    BatchSpec,
    CertifyConfig,
    CertifySummary,
    GeneratorSpec,
    RunParameters,
    RunReport,
    SolverSummary,
    Violation,
)
from app.services.generators import generate
from app.services.graph_core import (
    instance_digest,
    is_feasible,
    normalize_instance,
    packing_degrees,
    packing_value,
    upper_bound,
    weighted_upper_bound,
)
from app.services.greedy import edge_addition, edge_deletion, random_order
from app.services.lp import build_lp2, gap_demo, random_residual_state
from app.services.oracle import exact_opt
from app.services.rounding import phi_value, solve_ip2, write_trace
from app.services.simplex import solve_extreme, verify_corner
from app.services.tree_exact import is_forest, is_tree, solve_forest, tree_dp
from app.services.weighted import bit_count, certificate_sum, partition_solve

logger = logging.getLogger(__name__)

ALGORITHMS = ("add", "delete", "round", "weighted", "tree", "exact")
UNWEIGHTED_ONLY = ("add", "delete", "round", "tree")
HALF = Fraction(1, 2)


def select_algorithm(inst: Instance) -> str:
    """Tree solver for forests, weighted solver for weighted input, edge deletion otherwise."""
    if inst.is_weighted:
        return "weighted"
    if inst.m and is_forest(inst):
        return "tree"
    return "delete"


def guarantee(alg: str, inst: Instance, eps: Optional[Fraction]) -> Fraction:
    if alg == "add":
        return Fraction(4)
    if alg == "delete":
        return Fraction(2)
    if alg == "round":
        return Fraction(3) / (1 - eps) ** 2
    if alg == "weighted":
        return Fraction(2 + 2 * bit_count(inst.n))
    return Fraction(1)


def _solve(
    inst: Instance,
    alg: str,
    params: RunParameters,
    checks: Dict[str, bool],
    trace: Optional[Union[str, Path]],
    oracle_limit: int,
) -> EdgePacking:
    if alg in UNWEIGHTED_ONLY and inst.is_weighted:
        raise SolverMismatchError(f"solver {alg!r} ignores weights; use 'weighted' or 'exact' for weighted input")
    order = None if params.order is None else random_order(inst, params.order)

    if alg == "add":
        packing, _ = edge_addition(inst, order)
        checks["quarter_of_bounds"] = 4 * len(packing) >= upper_bound(inst)
        return packing

    if alg == "delete":
        packing = edge_deletion(inst, order)
        degrees = packing_degrees(inst, packing)
        checks["degree_floor"] = all(d >= c for d, c in zip(degrees, inst.c))
        return packing

    if alg == "round":
        # exact rank checks only on oracle-sized instances
        packing, state = solve_ip2(inst, params.eps, verify_corners=inst.m <= oracle_limit)
        if trace is not None:
            write_trace(state, trace)
        bound = Fraction(3, 2) / (1 - state.eps) * phi_value(inst, packing, state.eps)
        checks["root_lp_bound"] = state.root_lp_value <= bound
        checks["corner_structure"] = all(
            it.half_or_zero_witness and it.corner_verified is not False for it in state.iterations
        )
        checks["endpoint_condition"] = all(it.endpoint_ok for it in state.iterations)
        return packing

    if alg == "weighted":
        result = partition_solve(inst, relabel_seed=params.relabel_seed)
        partition = result.partition
        covered = set(partition.T.edges) | set(partition.discarded) | {d.edge for d in partition.directed}
        checks["coverage"] = covered == set(range(inst.m)) and len(partition.T) + len(
            partition.discarded
        ) + len(partition.directed) == inst.m
        checks["families_feasible"] = all(is_feasible(inst, cand) for _, cand in partition.candidates())
        checks["heavy_set_identity"] = certificate_sum(inst, partition) == weighted_upper_bound(inst)
        return result.packing

    if alg == "tree":
        if not is_tree(inst) and is_forest(inst):
            _, packing = solve_forest(inst)
            return packing
        _, _, packing = tree_dp(inst, params.root)
        return packing

    if alg == "exact":
        return exact_opt(inst, limit=oracle_limit).witness

    raise ParameterError(f"unknown solver {alg!r}; expected one of {ALGORITHMS + ('auto',)}")


def run(
    inst: Instance,
    alg: str = "auto",
    *,
    eps: Union[Fraction, int, str, None] = None,
    order: Optional[int] = None,
    root: Optional[int] = None,
    relabel_seed: Optional[int] = None,
    oracle_limit: Optional[int] = None,
    trace: Optional[Union[str, Path]] = None,
) -> RunReport:
    """
    Run one solver and certify its output. Feasibility is recomputed from
    the packing; the ratio is taken against the oracle when the instance is
    small enough, else against the sum of bounds (unweighted) or the
    heavy-set bound (weighted).
    """
    inst = normalize_instance(inst)
    oracle_limit = settings.ORACLE_EDGE_LIMIT if oracle_limit is None else oracle_limit
    if alg == "auto":
        alg = select_algorithm(inst)
        logger.info(f"auto selected solver {alg!r}")
    if alg == "round":
        eps = settings.default_eps if eps is None else to_fraction(eps)
    params = RunParameters(
        eps=eps if alg == "round" else None,
        order=order if alg in ("add", "delete") else None,
        root=root if alg == "tree" else None,
        relabel_seed=relabel_seed if alg == "weighted" else None,
    )

    checks: Dict[str, bool] = {}
    started = time.perf_counter()
    packing = _solve(inst, alg, params, checks, trace, oracle_limit)
    elapsed = time.perf_counter() - started

    value = packing_value(inst, packing)
    if inst.m <= oracle_limit:
        bound_kind, bound = "oracle", exact_opt(inst, limit=oracle_limit).value
        if alg in ("tree", "exact"):
            checks["exact"] = value == bound
    elif inst.is_weighted:
        bound_kind, bound = "heavy-sets", weighted_upper_bound(inst)
    else:
        bound_kind, bound = "degree-sum", Fraction(upper_bound(inst))

    if value > 0:
        ratio = bound / value
    else:
        ratio = Fraction(1) if bound == 0 else None

    factor = guarantee(alg, inst, params.eps)
    certified = None
    # the combinatorial and weighted guarantees are proven against the cheap bounds too
    if bound_kind == "oracle" or alg in ("add", "delete", "weighted"):
        certified = bound <= factor * value

    report = RunReport(
        digest=instance_digest(inst),
        solver=alg,
        parameters=params,
        n=inst.n,
        m=inst.m,
        value=value,
        size=len(packing),
        packing=packing,
        feasible=is_feasible(inst, packing),
        bound_kind=bound_kind,
        bound=bound,
        ratio=ratio,
        guarantee=factor,
        certified=certified,
        checks=checks,
        wall_seconds=elapsed,
    )
    level = logging.INFO if not report.violations else logging.WARNING
    logger.log(
        level,
        f"{alg}: value {value} on n={inst.n} m={inst.m}, {bound_kind} bound {bound}, "
        f"ratio {ratio}, violations {report.violations or 'none'}",
    )
    return report


def default_config(quick: bool = False) -> CertifyConfig:
    """The acceptance batches; `quick` shrinks every count for smoke runs."""

    def scale(count: int) -> int:
        return max(1, count // 20) if quick else count

    return CertifyConfig(
        seed=0,
        batches=(
            BatchSpec(
                name="feasibility",
                kind="random",
                count=scale(1000),
                n_min=2,
                n_max=50,
                m_max=80,
                solvers=("add", "delete", "round", "weighted", "tree"),
                round_edge_limit=16,
            ),
            BatchSpec(
                name="combinatorial",
                kind="random",
                count=scale(1000),
                n_min=2,
                n_max=8,
                m_max=14,
                solvers=("add", "delete"),
            ),
            BatchSpec(
                name="deletion-floor",
                kind="random",
                count=scale(100),
                n_min=50,
                n_max=200,
                m_max=400,
                solvers=("delete",),
            ),
            BatchSpec(
                name="rounding",
                kind="random",
                count=scale(300),
                n_min=2,
                n_max=8,
                m_max=12,
                solvers=("round",),
                eps=(Fraction(1, 100), Fraction(1, 10)),
            ),
            BatchSpec(name="lp2", kind="lp2", count=scale(200), n_min=2, n_max=8, m_max=12),
            BatchSpec(name="gap", kind="gap", sizes=(8, 12, 16) if quick else (8, 12, 16, 24)),
            BatchSpec(
                name="weighted",
                kind="weighted",
                count=scale(500),
                n_min=2,
                n_max=8,
                m_max=14,
                solvers=("weighted",),
            ),
            BatchSpec(name="trees", kind="tree", count=scale(500), n_min=1, n_max=12, solvers=("tree",)),
            BatchSpec(
                name="large-tree",
                kind="tree",
                count=1,
                n_min=10_000 if quick else 100_000,
                n_max=10_000 if quick else 100_000,
                solvers=("tree",),
            ),
        ),
    )


def batch_instance(batch: BatchSpec, seed: int) -> Instance:
    """Instance number `seed` of a batch; a pure function of (batch, seed)."""
    rng = random.Random(f"{batch.name}:{seed}")
    n = rng.randint(batch.n_min, batch.n_max)
    simple_limit = n * (n - 1) // 2
    m_cap = simple_limit if batch.m_max is None else min(batch.m_max, simple_limit)

    if batch.kind == "tree":
        spec = GeneratorSpec(family="tree", n=n, bound="uniform", seed=seed)
    elif batch.kind == "weighted":
        spec = GeneratorSpec(
            family="gnm", n=n, m=rng.randint(0, m_cap), bound="uniform", weights="uniform", seed=seed
        )
    else:
        family = rng.choice(("gnm", "gnm", "tree", "star", "path", "complete"))
        if family == "complete" and simple_limit > m_cap:
            family = "gnm"
        bound = rng.choice(("fixed", "uniform", "fraction"))
        spec = GeneratorSpec(
            family=family,
            n=n,
            m=rng.randint(0, m_cap) if family == "gnm" else None,
            bound=bound,
            bound_value=rng.randint(0, 3),
            seed=seed,
        )
    return generate(spec)


def _lp2_check(batch: BatchSpec, seed: int) -> List[Violation]:
    """
    One relaxation solve on a fresh instance with a random residual state
    (C, f) and eps; structural checks on the corner.
    """
    inst = batch_instance(batch, seed)
    rng = random.Random(f"{batch.name}:state:{seed}")
    eps = rng.choice(batch.eps)
    C, f = random_residual_state(inst, rng)
    lp = build_lp2(inst, C, f, eps, drop_isolated=True)
    solution = solve_extreme(lp)
    problems = []
    if not verify_corner(lp, solution):
        problems.append("corner rank")

    def z(x: int) -> Fraction:
        j = lp.index.get(f"z_{x}")
        return Fraction(0) if j is None else solution.values[j]

    ys = [solution.value(lp, f"y_{e}") for e in range(inst.m)]
    if inst.m and not any(y == 0 or y >= HALF for y in ys):
        problems.append("no edge with y = 0 or y >= 1/2")
    for e, y in enumerate(ys):
        u, v = inst.edges[e]
        if y >= HALF and not any(f[x] > 0 and z(x) == 0 for x in (u, v)):
            problems.append(f"edge {e} has y = {y} but no endpoint with f > 0 and z = 0")
    return [Violation(batch=batch.name, seed=seed, solver="lp2", reason=p) for p in problems]


def _run_task(task: Tuple[BatchSpec, int]) -> Tuple[List[RunReport], List[Violation]]:
    batch, seed = task
    if batch.kind == "lp2":
        return [], _lp2_check(batch, seed)

    inst = batch_instance(batch, seed)
    reports: List[RunReport] = []
    violations: List[Violation] = []
    for solver in batch.solvers:
        if solver == "tree" and not is_forest(inst):
            continue
        if solver == "round" and batch.round_edge_limit is not None and inst.m > batch.round_edge_limit:
            continue
        eps_values = batch.eps if solver == "round" else (None,)
        for eps in eps_values:
            try:
                report = run(inst, solver, eps=eps, order=seed if solver in ("add", "delete") else None)
            except (RoundingInvariantError, LPError) as e:
                violations.append(Violation(batch=batch.name, seed=seed, solver=solver, reason=str(e)))
                continue
            reports.append(report)
            violations.extend(
                Violation(batch=batch.name, seed=seed, solver=solver, reason=reason) for reason in report.violations
            )
    return reports, violations


def _summarize(batch: BatchSpec, reports: List[RunReport]) -> List[SolverSummary]:
    rows = []
    for solver in sorted({r.solver for r in reports}):
        mine = [r for r in reports if r.solver == solver]
        # worst ratio is taken against the oracle only
        measured = [r for r in mine if r.bound_kind == "oracle"]
        ratios = [r.ratio for r in measured if r.ratio is not None]
        rows.append(
            SolverSummary(
                batch=batch.name,
                solver=solver,
                runs=len(mine),
                feasible=sum(r.feasible for r in mine),
                oracle_runs=len(measured),
                worst_ratio=max(ratios) if ratios else None,
                guarantee=max(r.guarantee for r in mine),
            )
        )
    return rows


def certify_suite(config: Optional[CertifyConfig] = None, *, workers: Optional[int] = None) -> CertifySummary:
    """
    Run every batch; any infeasible output, broken certificate or
    non-increasing gap sweep is a violation.
    """
    config = config or default_config()
    workers = workers or config.workers or settings.CERTIFY_WORKERS
    rows: List[SolverSummary] = []
    violations: List[Violation] = []
    gap_rows = []

    for batch in config.batches:
        if batch.kind == "gap":
            batch_rows = [gap_demo(n) for n in batch.sizes]
            for row in batch_rows:
                if row.lp1_value < Fraction((row.n - 1) ** 2, 4):
                    violations.append(Violation(batch=batch.name, seed=row.n, solver="lp1", reason="lp1 below (n-1)^2/4"))
            for prev, row in zip(batch_rows, batch_rows[1:]):
                if not row.ratio > prev.ratio:
                    violations.append(
                        Violation(batch=batch.name, seed=row.n, solver="lp1", reason="gap ratio not increasing")
                    )
            gap_rows.extend(batch_rows)
            continue

        tasks = [(batch, config.seed + i) for i in range(batch.count)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
        else:
            results = [_run_task(task) for task in tasks]

        reports = [r for task_reports, _ in results for r in task_reports]
        batch_violations = [v for _, task_violations in results for v in task_violations]
        rows.extend(_summarize(batch, reports))
        violations.extend(sorted(batch_violations, key=lambda v: (v.seed, v.solver, v.reason)))
        logger.info(f"batch {batch.name}: {len(reports)} runs, {len(batch_violations)} violations")

    summary = CertifySummary(passed=not violations, rows=tuple(rows), gap=tuple(gap_rows), violations=tuple(violations))
    logger.info(f"certification {'passed' if summary.passed else 'FAILED'} with {len(violations)} violations")
    return summary
