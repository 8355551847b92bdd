"""Scattering amplitudes of fermions prepared in entangled quadruplets.

Input channels ``4q .. 4q+3`` (0-based) of quadruplet ``q`` hold two
fermions in ``(|1100> + |0011>) / sqrt(2)``. A single particle entering
channel ``i`` leaves in channel ``j`` with amplitude ``U[i, j]``.

Channels in the public API are 1-based, as in the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .exterior import TwoFormFamily, d22_float_fast, d22_subset_sum
from .ring import DimensionError, SizeGuardError

UNITARITY_TOL = 1e-10
FOCK_MAX_M = 2
DISTRIBUTION_MAX_CONFIGS = 10**6


class NonUnitaryError(ValueError):
    pass


@dataclass(frozen=True)
class ScatteringProblem:
    unitary: np.ndarray

    def __post_init__(self):
        u = np.array(self.unitary, dtype=complex)
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)
        n = u.shape[0]
        if u.ndim != 2 or u.shape[1] != n:
            raise DimensionError(f"unitary must be square, got shape {u.shape}")
        if n == 0 or n % 4:
            raise DimensionError(f"channel count must be a positive multiple of 4, got {n}")
        err = np.abs(u.conj().T @ u - np.eye(n)).max()
        if err >= UNITARITY_TOL:
            raise NonUnitaryError(f"max |U^dag U - I| = {err:.3e} exceeds {UNITARITY_TOL}")

    @property
    def n_channels(self) -> int:
        return self.unitary.shape[0]

    @property
    def m(self) -> int:
        return self.n_channels // 4


def check_config(p: ScatteringProblem, out: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(c) for c in out)
    if len(out) != 2 * p.m:
        raise DimensionError(f"output config needs {2 * p.m} channels, got {len(out)}")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise DimensionError(f"output channels must be strictly increasing: {out}")
    if out[0] < 1 or out[-1] > p.n_channels:
        raise DimensionError(f"output channels must lie in [1, {p.n_channels}]")
    return out


def scattering_family(p: ScatteringProblem, out: Sequence[int]) -> TwoFormFamily:
    """Rows of ``U`` restricted to the output columns, one vector per input channel."""
    cols = [c - 1 for c in check_config(p, out)]
    return TwoFormFamily(p.unitary[:, cols].tolist())


def amplitude_d22(p: ScatteringProblem, out: Sequence[int], method: str = "subset") -> complex:
    """``2^(-M/2) D22`` of the restricted scattering rows."""
    family = scattering_family(p, out)
    if method == "fast":
        value = d22_float_fast(family)
    elif method == "subset":
        value = d22_subset_sum(family)
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(value) * 2.0 ** (-p.m / 2)


def _create(state: np.ndarray, mode: int, n: int) -> np.ndarray:
    """Apply ``c^dag_mode`` with the ascending-mode (Jordan-Wigner) sign."""
    out = np.zeros_like(state)
    bit = 1 << (n - 1 - mode)  # mode 0 is the most significant bit
    higher = ~((bit << 1) - 1) & ((1 << n) - 1)
    for basis in np.flatnonzero(state):
        basis = int(basis)
        if basis & bit:
            continue
        sign = -1 if bin(basis & higher).count("1") % 2 else 1
        out[basis | bit] += sign * state[basis]
    return out


def _create_evolved(state: np.ndarray, channel: int, u: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    out = np.zeros_like(state)
    for j in range(n):
        if u[channel, j] != 0:
            out += u[channel, j] * _create(state, j, n)
    return out


def _occupation_index(channels: Sequence[int], n: int) -> int:
    """Basis index of the configuration with the given 0-based channels filled."""
    idx = 0
    for c in channels:
        idx |= 1 << (n - 1 - c)
    return idx


def input_terms(m: int) -> list[tuple[int, ...]]:
    """Occupied input channels (0-based, ascending) of each term of the input state."""
    terms = []
    for code in range(1 << m):
        chans = []
        for q in range(m):
            base = 4 * q + 2 * ((code >> q) & 1)
            chans += [base, base + 1]
        terms.append(tuple(chans))
    return terms


def fock_state(p: ScatteringProblem, evolved: bool = True) -> np.ndarray:
    """Many-body state vector over the ``2^n`` occupation basis.

    Each term is built by applying creation operators right to left onto
    the vacuum, with ``c^dag_i -> sum_j U[i, j] c^dag_j`` when ``evolved``.
    """
    n, m = p.n_channels, p.m
    if m > FOCK_MAX_M:
        raise SizeGuardError(f"Fock oracle limited to M <= {FOCK_MAX_M}, got {m}")
    vacuum = np.zeros(1 << n, dtype=complex)
    vacuum[0] = 1.0
    total = np.zeros_like(vacuum)
    for chans in input_terms(m):
        state = vacuum
        for c in reversed(chans):
            state = _create_evolved(state, c, p.unitary) if evolved else _create(state, c, n)
        total += state
    return total * 2.0 ** (-m / 2)


def amplitude_fock(p: ScatteringProblem, out: Sequence[int]) -> complex:
    """Output amplitude read off the evolved Fock-space state."""
    out = check_config(p, out)
    state = fock_state(p)
    return complex(state[_occupation_index([c - 1 for c in out], p.n_channels)])


def all_configs(n_channels: int, k: int) -> list[tuple[int, ...]]:
    return [tuple(c + 1 for c in cfg) for cfg in combinations(range(n_channels), k)]


def output_distribution(p: ScatteringProblem, method: str = "subset") -> list[tuple[tuple[int, ...], complex, float]]:
    """``(config, amplitude, probability)`` for every output config, lexicographic."""
    count = comb(p.n_channels, 2 * p.m)
    if count > DISTRIBUTION_MAX_CONFIGS:
        raise SizeGuardError(f"{count} output configurations exceed {DISTRIBUTION_MAX_CONFIGS}")
    rows = []
    for cfg in all_configs(p.n_channels, 2 * p.m):
        amp = amplitude_d22(p, cfg, method=method)
        rows.append((cfg, amp, abs(amp) ** 2))
    return rows


def haar_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-random unitary from ``numpy.random.default_rng(seed)`` (PCG64).

    QR of a complex Ginibre matrix, with the phases of ``R``'s diagonal
    moved into ``Q`` so the result does not depend on the QR convention.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def identity_problem(m: int) -> ScatteringProblem:
    return ScatteringProblem(np.eye(4 * m))
