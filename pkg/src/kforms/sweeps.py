"""Sweep orchestration: per-modulus bound checks, dyadic-average checks, and
the named lemma grids, all emitting ordered BoundReport lists.

Results are assembled in a fixed order regardless of worker count, so a
sweep's data columns are reproducible byte for byte (wall-clock columns
excepted).  KFORMS_THREADS caps the worker pool; a wall-clock budget stops a
sweep early and marks the result truncated instead of running unbounded.
"""

from __future__ import annotations

import hashlib
import math
import time

from .characters import build_characters, fourth_moment
from .counts import (
    average_reciprocal_sweep,
    multiplicative_energy,
    reciprocal_count_mod,
    reciprocal_count_rational,
)
from .reports import BoundReport, SweepResult, fit_exponent, make_report, with_params
from .ring import IntervalSet, build_ring
from .sweeps_util import SweepBudget, ordered_map, parse_int_list
from .trilinear import TrilinearInstance, make_weights, theorem1_bounds, trilinear_fast

# Guard against sweep cells whose fast-path work L*q is out of desk scale.
DEFAULT_WORK_BUDGET = 500_000_000

DEFAULT_GRIDS = {
    "2.1": {
        "qs": [5, 12, 97, 128, 360, 997, 1536, 1997],
        "ks": [0, 3],
        "Hs": [1, 2, 5, 16, 50, 160, 500, 997, 1997],
    },
    "2.2": {
        "qs": [12, 97, 360, 997, 1997],
        "intervals": [[0, 5], [3, 12], [0, 50], [7, 200], [0, 1997]],
    },
    "2.3": {
        "qs": [10, 97, 360, 499, 997, 1997],
        "Ks": [1, 2, 5, 20, 36, 120, 499, 997, 1997],
    },
    "2.4": {"r": 2, "Ks": [100, 150, 200, 250, 300, 350, 400, 450, 500]},
    "2.5": {"r": 2, "Qs": [50, 100], "Ks": [10, 100]},
}


def stable_seed(root_seed: int, *parts) -> int:
    """Platform-independent derivation of per-case seeds from one root."""
    text = ":".join([str(root_seed), *map(str, parts)])
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


def resolve_interval(spec, q: int) -> IntervalSet:
    """Interval from a 'start:length' spec; length 'sqrt' means floor(sqrt(q))."""
    if isinstance(spec, IntervalSet):
        return spec
    if isinstance(spec, (tuple, list)) and len(spec) == 2:
        return IntervalSet(int(spec[0]), int(spec[1]))
    if isinstance(spec, str):
        if ":" in spec:
            start_text, length_text = spec.split(":", 1)
        else:
            start_text, length_text = "0", spec
        length = math.isqrt(q) if length_text == "sqrt" else int(length_text)
        return IntervalSet(int(start_text), length)
    raise ValueError(f"cannot parse interval spec {spec!r}")


def _count_exceptions(reports: list[BoundReport], threshold: float) -> int:
    return sum(1 for r in reports if r.ratio is not None and r.ratio > threshold)


def _fit_or_none(points) -> float | None:
    try:
        return fit_exponent(points)
    except ValueError:
        return None


def _thm1_case(q, l_spec, m_spec, n_spec, mode, seed, work_budget):
    l_int = resolve_interval(l_spec, q)
    m_int = resolve_interval(m_spec, q)
    n_int = resolve_interval(n_spec, q)
    if l_int.length * q > work_budget:
        raise ValueError(
            f"dimension too large: L*q = {l_int.length * q} exceeds the work "
            f"budget {work_budget}"
        )
    ring = build_ring(q)
    weights = make_weights(
        ring, l_int, mode=mode, seed=stable_seed(seed, q), m_interval=m_int, n_interval=n_int
    )
    instance = TrilinearInstance(ring, weights, m_int, n_int)
    return with_params(theorem1_bounds(instance), mode=mode, seed=seed)


def verify_thm1_sweep(
    q_list,
    l_spec,
    m_spec,
    n_spec,
    mode: str = "ones",
    seed: int = 0,
    threshold: float = math.inf,
    budget_ms: int | None = None,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> SweepResult:
    """Per-modulus check of |S_q| against min of the two fixed-modulus
    envelopes; reports with ratio above the threshold count as exceptions."""
    qs = sorted(set(int(q) for q in q_list))
    if any(q < 2 for q in qs):
        raise ValueError("every modulus must be >= 2")
    budget = SweepBudget(budget_ms)
    reports, truncated = ordered_map(
        lambda q: _thm1_case(q, l_spec, m_spec, n_spec, mode, seed, work_budget),
        qs,
        budget,
    )
    points = [(r.params["q"], r.measured) for r in reports if r.measured > 0]
    return SweepResult(
        reports=reports,
        exceptions=_count_exceptions(reports, threshold),
        fitted_exponent=_fit_or_none(points),
        truncated=truncated,
    )


def verify_thm2_sweep(
    Q: int,
    r: int,
    l_spec,
    m_spec,
    n_spec,
    mode: str = "ones",
    seed: int = 0,
    epsilon: float = 0.05,
    threshold: float = math.inf,
    budget_ms: int | None = None,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> SweepResult:
    """Dyadic-range check: every q in [Q, 2Q] against the averaged envelope
    (L + L^(1-1/2r) M^(1/2r)) (q^(2-1/2r) + N^(1/2) q^(3/2)).

    The exception count is meant to be compared with Q^(1-2*r*epsilon).
    """
    if Q < 2:
        raise ValueError(f"Q must be >= 2, got {Q}")
    if r < 2:
        raise ValueError(f"the averaged bound needs r >= 2, got {r}")

    def case(q: int) -> BoundReport:
        t0 = time.perf_counter()
        l_int = resolve_interval(l_spec, q)
        m_int = resolve_interval(m_spec, q)
        n_int = resolve_interval(n_spec, q)
        if l_int.length * q > work_budget:
            raise ValueError(
                f"dimension too large: L*q = {l_int.length * q} exceeds the "
                f"work budget {work_budget}"
            )
        ring = build_ring(q)
        weights = make_weights(
            ring, l_int, mode=mode, seed=stable_seed(seed, q),
            m_interval=m_int, n_interval=n_int,
        )
        measured = abs(trilinear_fast(TrilinearInstance(ring, weights, m_int, n_int)))
        L, M, N = l_int.length, m_int.length, n_int.length
        reference = (L + L ** (1 - 1 / (2 * r)) * M ** (1 / (2 * r))) * (
            q ** (2 - 1 / (2 * r)) + math.sqrt(N) * q**1.5
        )
        params = {
            "q": q, "Q": Q, "r": r, "epsilon": epsilon,
            "L": L, "M": M, "N": N, "mode": mode, "seed": seed,
        }
        return make_report(params=params, measured=measured, reference=reference, t0=t0)

    budget = SweepBudget(budget_ms)
    reports, truncated = ordered_map(case, range(Q, 2 * Q + 1), budget)
    points = [(r.params["q"], r.measured) for r in reports if r.measured > 0]
    return SweepResult(
        reports=reports,
        exceptions=_count_exceptions(reports, threshold),
        fitted_exponent=_fit_or_none(points),
        truncated=truncated,
    )


def allowed_exceptions(Q: int, r: int, epsilon: float) -> float:
    """Size allowance Q^(1 - 2*r*epsilon) for the dyadic exceptional set."""
    return Q ** (1 - 2 * r * epsilon)


def _lemma_21_cases(grid):
    for q in grid["qs"]:
        ring = build_ring(q)
        table = build_characters(ring)
        for k in grid["ks"]:
            for H in sorted({min(h, q) for h in grid["Hs"] if h >= 1}):
                t0 = time.perf_counter()
                moment = fourth_moment(table, IntervalSet(k, H))
                yield make_report(
                    params={"q": q, "k": k, "H": H},
                    measured=moment,
                    reference=float(H * H),
                    t0=t0,
                )


def _lemma_22_cases(grid):
    for q in grid["qs"]:
        ring = build_ring(q)
        pairs = [(s, min(ln, q)) for s, ln in grid["intervals"]]
        for sa, la in pairs:
            for sb, lb in pairs:
                t0 = time.perf_counter()
                report = multiplicative_energy(
                    ring, IntervalSet(sa, la), IntervalSet(sb, lb)
                )
                yield make_report(
                    params={"q": q, "a_start": sa, "A": la, "b_start": sb, "B": lb},
                    measured=float(report.value),
                    reference=float(report.bound_value),
                    t0=t0,
                )


def _lemma_23_cases(grid):
    for q in grid["qs"]:
        ring = build_ring(q)
        for K in sorted({min(k, q) for k in grid["Ks"] if k >= 1}):
            t0 = time.perf_counter()
            report = reciprocal_count_mod(ring, 2, K)
            yield make_report(
                params={"q": q, "r": 2, "K": K},
                measured=float(report.value),
                reference=float(report.bound_value),
                t0=t0,
            )


def _lemma_24_cases(grid):
    r = grid["r"]
    for K in grid["Ks"]:
        t0 = time.perf_counter()
        report = reciprocal_count_rational(r, K)
        yield make_report(
            params={"r": r, "K": K},
            measured=float(report.value),
            reference=float(report.bound_value),
            t0=t0,
        )


def _lemma_25_cases(grid):
    r = grid["r"]
    for Q in grid["Qs"]:
        for K in grid["Ks"]:
            if K > Q:
                continue
            yield average_reciprocal_sweep(Q, r, K)


_LEMMA_BUILDERS = {
    "2.1": (_lemma_21_cases, ("qs", "ks", "Hs"), "q"),
    "2.2": (_lemma_22_cases, ("qs", "intervals"), "q"),
    "2.3": (_lemma_23_cases, ("qs", "Ks"), "q"),
    "2.4": (_lemma_24_cases, ("r", "Ks"), "K"),
    "2.5": (_lemma_25_cases, ("r", "Qs", "Ks"), "Q"),
}


def verify_lemma_sweeps(
    lemma: str, grid: dict | None = None, budget_ms: int | None = None
) -> SweepResult:
    """Run one of the named moment/count checks over its grid.

    ``grid`` overrides the documented default; each report carries the
    measured count or moment and the check's reference expression.
    """
    if lemma not in _LEMMA_BUILDERS:
        raise ValueError(f"unknown lemma {lemma!r}; pick one of {sorted(_LEMMA_BUILDERS)}")
    builder, required, fit_key = _LEMMA_BUILDERS[lemma]
    grid = dict(DEFAULT_GRIDS[lemma]) if grid is None else dict(grid)
    missing = [key for key in required if key not in grid or grid[key] in (None, [])]
    if missing:
        raise ValueError(f"invalid grid for lemma {lemma}: missing {missing}")

    budget = SweepBudget(budget_ms)
    reports: list[BoundReport] = []
    truncated = False
    for report in builder(grid):
        reports.append(report)
        if budget.exceeded():
            truncated = True
            break
    points = [(r.params[fit_key], r.measured) for r in reports if r.measured > 0]
    return SweepResult(
        reports=reports,
        exceptions=0,
        fitted_exponent=_fit_or_none(points),
        truncated=truncated,
    )
