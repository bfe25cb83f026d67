"""Shared sweep plumbing: wall-clock budgets, ordered fan-out, list parsing."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor


class SweepBudget:
    """Wall-clock cutoff; exceeded() flips once budget_ms has elapsed."""

    def __init__(self, budget_ms: int | None):
        self.budget_ms = budget_ms
        self.t0 = time.monotonic()

    def exceeded(self) -> bool:
        if self.budget_ms is None:
            return False
        return (time.monotonic() - self.t0) * 1000 >= self.budget_ms


def thread_limit() -> int:
    raw = os.environ.get("KFORMS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn, items, budget: SweepBudget):
    """Apply fn over items, collecting results in input order.

    Fans out across KFORMS_THREADS workers when no budget is set; with a
    budget the loop stays sequential so the cutoff lands between items.
    Returns (results, truncated).
    """
    items = list(items)
    workers = thread_limit()
    if budget.budget_ms is None and workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items)), False
    results = []
    for item in items:
        if budget.exceeded():
            return results, True
        results.append(fn(item))
    return results, False


def parse_int_list(text: str) -> list[int]:
    """Parse '3,5,9' and '100..110' (inclusive) forms, possibly mixed."""
    out: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ".." in chunk:
            lo_text, hi_text = chunk.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ValueError(f"empty range {chunk!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(chunk))
    if not out:
        raise ValueError(f"no integers in {text!r}")
    return out
