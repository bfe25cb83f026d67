"""Weighted trilinear forms over double Kloosterman sums.

The form S_q(alpha; L, M, N) = sum_l alpha_l sum_m sum_n K_q(l, m, n) is
evaluated two ways: a brute-force oracle over double sums, and a fast path
through the identity

    S_q = sum_l alpha_l sum_{x,y units} mu_x nu_y e_q(l * inv(x) * inv(y)),

where mu/nu are the interval phase sums of the M and N windows.  The trace
machinery splits the fast form over a dyadic decomposition of the centered
unit representatives and records every intermediate quantity next to its
reference envelope (all absorbed constants set to 1).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .counts import reciprocal_count_mod
from .reports import BoundReport, make_report
from .ring import (
    IntervalSet,
    ResidueRing,
    cyclic_dft,
    interval_phase_sum,
    phase_sum_table,
)

WEIGHT_MODES = ("ones", "rademacher", "phase", "extremal")


@dataclass(frozen=True)
class WeightVector:
    """Complex weights on an interval, supported on units, |w| <= 1."""

    interval: IntervalSet
    weights: np.ndarray

    def validate(self, ring: ResidueRing) -> None:
        if self.weights.shape != (self.interval.length,):
            raise ValueError("weights must align with the interval members")
        if np.max(np.abs(self.weights), initial=0.0) > 1 + 1e-12:
            raise ValueError("weights must satisfy |w| <= 1")
        off_units = ~ring.unit_mask[np.mod(self.interval.members(), ring.q)]
        if np.any(self.weights[off_units] != 0):
            raise ValueError("weights must vanish off units")


@dataclass(frozen=True)
class TrilinearInstance:
    ring: ResidueRing
    weights: WeightVector
    m_interval: IntervalSet
    n_interval: IntervalSet


@dataclass(frozen=True)
class DyadicDecomposition:
    """Partition of the centered unit representatives into annuli whose radii
    grow by factor e, separately for each sign.

    ``q_sets[(i, sign)]`` holds the representatives for level i on the M side
    (``r_sets`` for the N side); level 0 covers 0 < |x| <= q/length and level
    i covers e^(i-1) q/length < |x| <= min(q/2, e^i q/length).
    """

    levels_m: int
    levels_n: int
    q_sets: dict
    r_sets: dict


@dataclass(frozen=True)
class MomentCheck:
    value: float
    reference: float
    ratio: float | None


@dataclass(frozen=True)
class TraceCell:
    i: int
    sign_x: int
    j: int
    sign_y: int
    value: complex
    holder_bound: float
    holder_ratio: float | None


@dataclass(frozen=True)
class ProofTrace:
    r: int
    total: complex  # sum of all cell values
    fast_value: complex  # full fast evaluation, for the reconstruction check
    decomposition: DyadicDecomposition
    t_maps: dict  # (i, sign) -> per-residue collision sums
    first_moments: dict  # (i, sign) -> sum |T| vs q*L
    second_moments: dict  # (i, sign) -> sum |T|^2 vs q*L^2 + e^-i q*L*M
    y_moments: dict  # (j, sign) -> sum_lam |U|^(2r) vs e^(-2rj) q N^(2r) J_r
    cells: list[TraceCell]


def _rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def window_sums(
    ring: ResidueRing,
    l_interval: IntervalSet,
    m_interval: IntervalSet,
    n_interval: IntervalSet,
) -> np.ndarray:
    """W_l = sum_{m in M} sum_{n in N} K_q(l, m, n) for every l in L.

    One DFT over the N window plus O(phi) work per l.
    """
    q = ring.q
    mu = phase_sum_table(ring, m_interval)
    nu = phase_sum_table(ring, n_interval)
    x = ring.units
    xb = ring.inv_table[x]
    h = np.zeros(q, dtype=np.complex128)
    h[x] = nu[xb]
    transform = cyclic_dft(ring, h, "forward")
    g = mu[xb]
    out = np.empty(l_interval.length, dtype=np.complex128)
    for idx, l in enumerate(l_interval.members()):
        out[idx] = np.sum(g * transform[(int(l) % q) * x % q])
    return out


def make_weights(
    ring: ResidueRing,
    l_interval: IntervalSet,
    mode: str = "ones",
    seed: int = 0,
    m_interval: IntervalSet | None = None,
    n_interval: IntervalSet | None = None,
) -> WeightVector:
    """Weight models for the harness; deterministic given (mode, seed).

    ``extremal`` aligns each weight against the inner double-sum window
    W_l so that |S_q| attains sum_l |W_l|; it needs the M and N intervals.
    """
    if mode not in WEIGHT_MODES:
        raise ValueError(f"unknown weight mode {mode!r}; pick one of {WEIGHT_MODES}")
    members = l_interval.members()
    on_units = ring.unit_mask[np.mod(members, ring.q)]
    if mode == "ones":
        weights = on_units.astype(np.complex128)
    elif mode == "rademacher":
        rng = _rng_for(seed)
        weights = rng.choice(np.array([-1.0, 1.0]), size=members.size) + 0j
        weights[~on_units] = 0
    elif mode == "phase":
        rng = _rng_for(seed)
        weights = np.exp(2j * np.pi * rng.random(members.size))
        weights[~on_units] = 0
    else:
        if m_interval is None or n_interval is None:
            raise ValueError("extremal weights need the M and N intervals")
        window = window_sums(ring, l_interval, m_interval, n_interval)
        mags = np.abs(window)
        # W_l = 0 would give 0/0; those weights are set to 0
        weights = np.where(mags > 0, np.conj(window) / np.where(mags > 0, mags, 1), 0)
        weights[~on_units] = 0
    return WeightVector(interval=l_interval, weights=weights)


def trilinear_naive(instance: TrilinearInstance) -> complex:
    """Oracle evaluation straight from the definition, one double sum per
    (l, m, n); O(L*M*N*phi^2)."""
    from .kloosterman import double_naive

    ring = instance.ring
    total = 0j
    for l, alpha in zip(instance.weights.interval.members(), instance.weights.weights):
        if alpha == 0:
            continue
        block = 0j
        for m in instance.m_interval.members():
            for n in instance.n_interval.members():
                block += double_naive(ring, int(l), int(m), int(n))
        total += alpha * block
    return total


def trilinear_fast(instance: TrilinearInstance) -> complex:
    """Fast evaluation: one DFT over the N window, then O(phi) per weight."""
    ring = instance.ring
    q = ring.q
    mu = phase_sum_table(ring, instance.m_interval)
    nu = phase_sum_table(ring, instance.n_interval)
    x = ring.units
    xb = ring.inv_table[x]
    g = np.zeros(q, dtype=np.complex128)
    g[x] = nu[xb]
    transform = cyclic_dft(ring, g, "forward")
    mu_inv = mu[xb]
    total = 0j
    for l, alpha in zip(instance.weights.interval.members(), instance.weights.weights):
        if alpha == 0:
            continue
        total += alpha * np.sum(mu_inv * transform[(int(l) % q) * x % q])
    return complex(total)


def weighted_double_sum(ring: ResidueRing, l: int, eta, kappa) -> complex:
    """sum_{x,y units} eta_x kappa_y e_q(l*x*y); eta/kappa align with
    ring.units.  Additive twists e_q(m*inv(x)), e_q(n*inv(y)) fold into the
    weights."""
    eta = np.asarray(eta, dtype=np.complex128)
    kappa = np.asarray(kappa, dtype=np.complex128)
    if eta.shape != ring.units.shape or kappa.shape != ring.units.shape:
        raise ValueError("eta and kappa must align with ring.units")
    full = np.zeros(ring.q, dtype=np.complex128)
    full[ring.units] = kappa
    transform = cyclic_dft(ring, full, "forward")
    return complex(np.sum(eta * transform[(l % ring.q) * ring.units % ring.q]))


def _level_count(length: int) -> int:
    # ceil of the natural log of length/2; lengths <= 2 stay at level 0
    if length <= 2:
        return 0
    return math.ceil(math.log(length / 2))


def _sign_sets(ring: ResidueRing, length: int) -> tuple[int, dict]:
    q = ring.q
    levels = _level_count(length)
    bounds = np.minimum(np.exp(np.arange(levels + 1)) * q / length, q / 2)
    bounds[levels] = q / 2  # e^levels >= length/2 guarantees the cap
    pos = ring.units[2 * ring.units <= q]
    neg = ring.units[2 * ring.units > q] - q
    sets = {}
    for sign, reps in ((1, pos), (-1, neg)):
        idx = np.searchsorted(bounds, np.abs(reps), side="left")
        for i in range(levels + 1):
            sets[(i, sign)] = reps[idx == i]
    return levels, sets


def dyadic_decomposition(ring: ResidueRing, m_len: int, n_len: int) -> DyadicDecomposition:
    """Split the centered unit representatives into the sign/level annuli for
    window lengths m_len (M side) and n_len (N side)."""
    if m_len < 1 or n_len < 1:
        raise ValueError("window lengths must be >= 1")
    levels_m, q_sets = _sign_sets(ring, m_len)
    levels_n, r_sets = _sign_sets(ring, n_len)
    return DyadicDecomposition(
        levels_m=levels_m, levels_n=levels_n, q_sets=q_sets, r_sets=r_sets
    )


def _moment_check(value: float, reference: float) -> MomentCheck:
    ratio = value / reference if reference > 0 else None
    return MomentCheck(value=value, reference=reference, ratio=ratio)


def proof_trace(instance: TrilinearInstance, r: int) -> ProofTrace:
    """Trace the dyadic split of the fast form cell by cell.

    Per (i, sign): the collision sums T(lam) = sum over l in L and x in the
    level set with l*inv(x) = lam of alpha_l mu_x, their first and second
    moments against q*L and q*L^2 + e^-i q*L*M.  Per (j, sign): the 2r-th
    moment of U(lam) = sum_y nu_y e_q(lam*inv(y)) against
    e^(-2rj) q N^(2r) J_r(q; min(q, floor(e^j q/N))).  Per cell: the value
    sum_lam T*U and its three-factor Hoelder bound.  The cell values sum back
    to the full form exactly.
    """
    if r not in (1, 2, 3):
        raise ValueError(f"r unsupported: trace needs r in {{1, 2, 3}}, got {r}")
    ring = instance.ring
    q = ring.q
    l_len = instance.weights.interval.length
    m_len = instance.m_interval.length
    n_len = instance.n_interval.length
    if m_len > q or n_len > q:
        raise ValueError("trace needs M, N <= q")

    dec = dyadic_decomposition(ring, m_len, n_len)
    mu = phase_sum_table(ring, instance.m_interval)
    nu = phase_sum_table(ring, instance.n_interval)
    members = np.mod(instance.weights.interval.members(), q)
    alphas = instance.weights.weights

    t_maps = {}
    first_moments = {}
    second_moments = {}
    for (i, sign), xs in dec.q_sets.items():
        xres = np.mod(xs, q)
        xinv = ring.inv_table[xres]
        t_map = np.zeros(q, dtype=np.complex128)
        if xs.size:
            lam = (members[:, None] * xinv[None, :]) % q
            np.add.at(t_map, lam, alphas[:, None] * mu[xres][None, :])
        t_maps[(i, sign)] = t_map
        abs_t = np.abs(t_map)
        first_moments[(i, sign)] = _moment_check(float(abs_t.sum()), q * l_len)
        second_moments[(i, sign)] = _moment_check(
            float((abs_t**2).sum()),
            q * l_len**2 + math.exp(-i) * q * l_len * m_len,
        )

    u_tables = {}
    y_moments = {}
    j_cache = {}
    for (j, sign), ys in dec.r_sets.items():
        yres = np.mod(ys, q)
        g = np.zeros(q, dtype=np.complex128)
        g[ring.inv_table[yres]] = nu[yres]
        u_map = cyclic_dft(ring, g, "forward")
        u_tables[(j, sign)] = u_map
        moment = float(np.sum(np.abs(u_map) ** (2 * r)))
        if j not in j_cache:
            cap = min(q, math.floor(math.exp(j) * q / n_len))
            j_cache[j] = reciprocal_count_mod(ring, r, max(1, cap)).value
        reference = math.exp(-2 * r * j) * q * float(n_len) ** (2 * r) * j_cache[j]
        y_moments[(j, sign)] = _moment_check(moment, reference)

    cells = []
    total = 0j
    inv_2r = 1.0 / (2 * r)
    for (i, sign_x), t_map in t_maps.items():
        s1 = first_moments[(i, sign_x)].value
        s2 = second_moments[(i, sign_x)].value
        for (j, sign_y), u_map in u_tables.items():
            value = complex(np.sum(t_map * u_map))
            total += value
            bound = s1 ** (1 - 1 / r) * s2**inv_2r * y_moments[(j, sign_y)].value ** inv_2r
            ratio = abs(value) / bound if bound > 0 else None
            cells.append(
                TraceCell(
                    i=i,
                    sign_x=sign_x,
                    j=j,
                    sign_y=sign_y,
                    value=value,
                    holder_bound=bound,
                    holder_ratio=ratio,
                )
            )

    return ProofTrace(
        r=r,
        total=total,
        fast_value=trilinear_fast(instance),
        decomposition=dec,
        t_maps=t_maps,
        first_moments=first_moments,
        second_moments=second_moments,
        y_moments=y_moments,
        cells=cells,
    )


def theorem1_bounds(instance: TrilinearInstance) -> BoundReport:
    """|S_q| (fast path) against the two fixed-modulus envelopes, their
    minimum, and the trivial bound L*M*N*q; every ratio is reported."""
    t0 = time.perf_counter()
    ring = instance.ring
    q = ring.q
    L = instance.weights.interval.length
    M = instance.m_interval.length
    N = instance.n_interval.length
    measured = abs(trilinear_fast(instance))
    b1 = (L + math.sqrt(L * M)) * math.sqrt(N) * q**1.5
    b2 = (L + L**0.75 * M**0.25) * (N**0.125 * q**1.75 + math.sqrt(N) * q**1.5)
    trivial = float(L * M * N * q)
    params = {
        "q": q,
        "l_start": instance.weights.interval.start,
        "L": L,
        "m_start": instance.m_interval.start,
        "M": M,
        "n_start": instance.n_interval.start,
        "N": N,
        "bound_b1": b1,
        "bound_b2": b2,
        "bound_trivial": trivial,
        "ratio_b1": measured / b1,
        "ratio_b2": measured / b2,
        "ratio_trivial": measured / trivial,
    }
    return make_report(params=params, measured=measured, reference=min(b1, b2), t0=t0)


__all__ = [
    "WeightVector",
    "TrilinearInstance",
    "DyadicDecomposition",
    "MomentCheck",
    "TraceCell",
    "ProofTrace",
    "WEIGHT_MODES",
    "make_weights",
    "window_sums",
    "trilinear_naive",
    "trilinear_fast",
    "weighted_double_sum",
    "interval_phase_sum",
    "phase_sum_table",
    "dyadic_decomposition",
    "proof_trace",
    "theorem1_bounds",
]
