"""Residue-ring arithmetic for Z_q: unit tables, batch modular inversion,
additive characters e_q, centered representatives, and cyclic DFTs of
arbitrary length (naive reference plus a Bluestein chirp transform).

Complex vectors are plain numpy arrays of length q indexed by residue.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Moduli past this size switch from the O(q^2) reference DFT to Bluestein.
NAIVE_DFT_CUTOFF = 64


class NotAUnitError(ValueError):
    """Inverse requested for a residue that is not coprime to the modulus."""


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division as (prime, exponent) pairs."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def divisor_count(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n):
        phi *= p ** (e - 1) * (p - 1)
    return phi


@dataclass(frozen=True)
class IntervalSet:
    """A block of consecutive integers {start+1, ..., start+length}."""

    start: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"interval length must be >= 1, got {self.length}")

    def members(self) -> np.ndarray:
        return np.arange(self.start + 1, self.start + self.length + 1, dtype=np.int64)

    def __contains__(self, value: int) -> bool:
        return self.start + 1 <= value <= self.start + self.length


@dataclass(frozen=True)
class ResidueRing:
    """Precomputed context for arithmetic mod q.

    Treated as immutable after construction; safe to share across threads.
    ``inv_table`` holds 0 at non-unit residues.
    """

    q: int
    unit_mask: np.ndarray
    inv_table: np.ndarray
    phi: int
    tau: int
    units: np.ndarray
    eq_pows: np.ndarray  # eq_pows[k] = exp(2*pi*i*k/q)


def _batch_inverse(units: list[int], q: int) -> list[int]:
    # Montgomery batch trick: prefix products + a single extended gcd,
    # then unwind; O(len) multiplications instead of one inversion each.
    prefix = [1] * (len(units) + 1)
    for i, u in enumerate(units):
        prefix[i + 1] = prefix[i] * u % q
    acc = pow(prefix[-1], -1, q)
    out = [0] * len(units)
    for i in range(len(units) - 1, -1, -1):
        out[i] = prefix[i] * acc % q
        acc = acc * units[i] % q
    return out


def build_ring(q: int) -> ResidueRing:
    """Build the full arithmetic context for Z_q.  Requires q >= 2."""
    if q < 2:
        raise ValueError(f"modulus too small: need q >= 2, got {q}")
    residues = np.arange(q, dtype=np.int64)
    unit_mask = np.gcd(residues, q) == 1
    units = residues[unit_mask]
    inv_table = np.zeros(q, dtype=np.int64)
    inv_table[units] = _batch_inverse([int(u) for u in units], q)
    return ResidueRing(
        q=q,
        unit_mask=unit_mask,
        inv_table=inv_table,
        phi=euler_phi(q),
        tau=divisor_count(q),
        units=units,
        eq_pows=np.exp((2j * np.pi / q) * residues),
    )


def mod_inverse(ring: ResidueRing, x: int) -> int:
    """Multiplicative inverse of x mod q; raises NotAUnitError off units."""
    r = int(x) % ring.q
    if not ring.unit_mask[r]:
        raise NotAUnitError(
            f"{x} is not a unit modulo {ring.q} (gcd = {math.gcd(r, ring.q)})"
        )
    return int(ring.inv_table[r])


def eq_eval(ring: ResidueRing, z) -> complex | np.ndarray:
    """exp(2*pi*i*z/q); the argument is reduced mod q before evaluation."""
    if isinstance(z, (int, np.integer)):
        return complex(ring.eq_pows[int(z) % ring.q])
    return ring.eq_pows[np.mod(np.asarray(z, dtype=np.int64), ring.q)]


def centered_rep(ring: ResidueRing, u) -> int | np.ndarray:
    """Representative of u mod q in the window (-q/2, q/2]."""
    if isinstance(u, (int, np.integer)):
        r = int(u) % ring.q
        return r if 2 * r <= ring.q else r - ring.q
    r = np.mod(np.asarray(u, dtype=np.int64), ring.q)
    return np.where(2 * r <= ring.q, r, r - ring.q)


def centered_dist(ring: ResidueRing, u) -> int | np.ndarray:
    """Distance from u to the nearest multiple of q; lies in [0, q/2]."""
    return abs(centered_rep(ring, u))


def _dft_naive(f: np.ndarray, q: int, eq_pows: np.ndarray) -> np.ndarray:
    out = np.empty(q, dtype=np.complex128)
    idx = np.arange(q, dtype=np.int64)
    for t in range(q):
        out[t] = f @ eq_pows[(t * idx) % q]
    return out


@lru_cache(maxsize=64)
def _bluestein_kernel(q: int):
    n = np.arange(q, dtype=np.int64)
    # exp(i*pi*n^2/q) has period 2q in n^2; reduce first to keep the phase exact
    n2 = (n * n) % (2 * q)
    chirp = np.exp((1j * np.pi / q) * n2)
    nfft = 1 << (2 * q - 1).bit_length()
    kernel = np.zeros(nfft, dtype=np.complex128)
    kernel[:q] = np.conj(chirp)
    kernel[nfft - q + 1:] = np.conj(chirp[q - 1:0:-1])
    return chirp, np.fft.fft(kernel), nfft


def _dft_bluestein(f: np.ndarray, q: int) -> np.ndarray:
    chirp, kernel_hat, nfft = _bluestein_kernel(q)
    a = np.zeros(nfft, dtype=np.complex128)
    a[:q] = f * chirp
    conv = np.fft.ifft(np.fft.fft(a) * kernel_hat)[:q]
    return chirp * conv


def cyclic_dft(
    ring: ResidueRing, f, direction: str = "forward", method: str = "auto"
) -> np.ndarray:
    """Length-q DFT with convention F(t) = sum_z f(z) e_q(t*z).

    The inverse carries the 1/q factor and the e_q(-t*z) kernel, so
    inverse(forward(f)) == f.  ``method`` selects the O(q^2) reference or
    the Bluestein chirp path ("auto" picks by size).
    """
    f = np.asarray(f, dtype=np.complex128)
    if f.shape != (ring.q,):
        raise ValueError(f"length mismatch: expected {ring.q} entries, got {f.shape}")
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be forward|inverse, got {direction!r}")
    if method == "auto":
        method = "naive" if ring.q <= NAIVE_DFT_CUTOFF else "bluestein"
    if method not in ("naive", "bluestein"):
        raise ValueError(f"unknown DFT method {method!r}")

    def transform(g):
        if method == "naive":
            return _dft_naive(g, ring.q, ring.eq_pows)
        return _dft_bluestein(g, ring.q)

    if direction == "inverse":
        return np.conj(transform(np.conj(f))) / ring.q
    return transform(f)


def interval_phase_sum(ring: ResidueRing, interval: IntervalSet, x: int) -> complex:
    """Geometric sum over the interval: sum_{m in interval} e_q(m*x).

    Evaluated in closed form (Dirichlet-kernel shape); returns the interval
    length when x = 0 mod q.  Satisfies |result| <= min(length, q/<x>_q).
    """
    q = ring.q
    r = int(x) % q
    if r == 0:
        return complex(interval.length)
    length, v = interval.length, interval.start
    num = math.sin(math.pi * ((length * r) % (2 * q)) / q)
    den = math.sin(math.pi * r / q)
    ph = ((2 * (v + 1) + (length - 1)) * r) % (2 * q)
    return cmath.exp(1j * math.pi * ph / q) * (num / den)


def phase_sum_table(ring: ResidueRing, interval: IntervalSet) -> np.ndarray:
    """interval_phase_sum for all residues x = 0..q-1 as one vector."""
    q = ring.q
    t = np.arange(q, dtype=np.int64)
    length, v = interval.length, interval.start
    num = np.sin(np.pi * ((length * t) % (2 * q)) / q)
    den = np.sin(np.pi * t / q)
    den[0] = 1.0  # placeholder; the x=0 entry is overwritten below
    ph = ((2 * (v + 1) + (length - 1)) * t) % (2 * q)
    out = np.exp((1j * np.pi / q) * ph) * (num / den)
    out[0] = complex(length)
    return out
