"""Generalized Bell and GHZ states, and projective measurement in those bases.

The two-qudit Bell family is labeled by a phase/shift pair (u, v):

    (u, v) = (1/sqrt(d)) sum_j w^{ju} |j, j+v>

and the N-qudit GHZ family by a phase and N-1 shifts:

    (v1; v2..vN) = (1/sqrt(d)) sum_j w^{j*v1} |j, j+v2, ..., j+vN>

For fixed sites the d^2 Bell (d^N GHZ) states form an orthonormal basis of
the measured sites' space, so a Bell/GHZ measurement is an ordinary
projective measurement whose outcomes are labels.  Measured sites stay in
the register, collapsed to the labeled state; parties in the protocols
re-measure and forward previously measured qudits, so nothing is traced
out.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .qudit import (
    DimensionError,
    Register,
    StateVector,
    check_dimension,
)
from .sampling import RandomSampler, clean_probabilities

BELL = "bell"
GHZ = "ghz"


@dataclass(frozen=True, order=True)
class BellLabel:
    """Phase label u and shift label v, both in Z_d."""

    u: int
    v: int

    def reduced(self, d: int) -> "BellLabel":
        return BellLabel(self.u % d, self.v % d)

    def index(self, d: int) -> int:
        return (self.u % d) * d + (self.v % d)

    @classmethod
    def from_index(cls, d: int, index: int) -> "BellLabel":
        return cls(index // d, index % d)

    def as_tuple(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True, order=True)
class GhzLabel:
    """Phase label and per-site shift labels (one per party after the first)."""

    phase: int
    shifts: tuple[int, ...]

    def reduced(self, d: int) -> "GhzLabel":
        return GhzLabel(self.phase % d, tuple(s % d for s in self.shifts))

    @property
    def parties(self) -> int:
        return 1 + len(self.shifts)

    def index(self, d: int) -> int:
        idx = self.phase % d
        for s in self.shifts:
            idx = idx * d + (s % d)
        return idx

    @classmethod
    def from_index(cls, d: int, parties: int, index: int) -> "GhzLabel":
        digits = []
        for _ in range(parties):
            digits.append(index % d)
            index //= d
        digits.reverse()
        return cls(digits[0], tuple(digits[1:]))

    def as_tuple(self) -> tuple[int, ...]:
        return (self.phase,) + self.shifts


def bell_labels(d: int) -> list[BellLabel]:
    """All d^2 Bell labels in canonical order (u major, v minor)."""
    return [BellLabel(u, v) for u in range(d) for v in range(d)]

def ghz_labels(d: int, parties: int) -> list[GhzLabel]:
    """All d^parties GHZ labels (phase major, shifts lexicographic)."""
    return [
        GhzLabel(p, shifts)
        for p in range(d)
        for shifts in product(range(d), repeat=parties - 1)
    ]


def make_bell(d: int, label: BellLabel) -> StateVector:
    """The two-qudit maximally entangled state with the given label."""
    check_dimension(d)
    u, v = label.u % d, label.v % d
    amps = np.zeros(d * d, dtype=np.complex128)
    j = np.arange(d)
    amps[j * d + (j + v) % d] = np.exp(2j * np.pi * j * u / d)
    return StateVector(Register(d, 2), amps / np.sqrt(d))


def make_ghz(d: int, label: GhzLabel, parties: int | None = None) -> StateVector:
    """The N-qudit GHZ state with the given label.

    For parties=2 this coincides with ``make_bell`` at (u, v) =
    (phase, shifts[0]).
    """
    check_dimension(d)
    if parties is None:
        parties = label.parties
    if parties < 2:
        raise DimensionError(f"GHZ states need >= 2 parties, got {parties}")
    if label.parties != parties:
        raise DimensionError(
            f"label carries {label.parties - 1} shifts but {parties} parties requested"
        )
    lab = label.reduced(d)
    reg = Register(d, parties)
    amps = np.zeros(reg.size, dtype=np.complex128)
    for j in range(d):
        digits = [j] + [(j + s) % d for s in lab.shifts]
        amps[reg.index_of(digits)] = np.exp(2j * np.pi * j * lab.phase / d)
    return StateVector(reg, amps / np.sqrt(d))


@dataclass
class OutcomeDistribution:
    """Outcome labels in canonical order with their Born probabilities."""

    labels: list
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        self.probabilities = clean_probabilities(self.probabilities)
        if len(self.labels) != self.probabilities.shape[0]:
            raise ValueError("label/probability length mismatch")

    def probability_of(self, label) -> float:
        return float(self.probabilities[self.labels.index(label)])

    def max_probability(self) -> float:
        return float(self.probabilities.max())

    def sample(self, sampler) -> tuple[int, object]:
        idx = sampler.choose(self.probabilities)
        return idx, self.labels[idx]


# ---------------------------------------------------------------------------
# measurement kernels
#
# The overlap of a state T with the labeled basis state (p; s...) on m
# measured axes is
#     C[p, s, rest] = (1/sqrt(d)) sum_j conj(w^{jp}) T[j, j+s_2, ..., rest]
# Everything below is vectorized gather + one einsum; the index arrays and
# phase matrix depend only on (d, m) and are cached.
# ---------------------------------------------------------------------------

_KERNEL_CACHE: dict[tuple[int, int], tuple] = {}


def _kernel(d: int, m: int):
    key = (d, m)
    cached = _KERNEL_CACHE.get(key)
    if cached is not None:
        return cached
    shift_tuples = list(product(range(d), repeat=m - 1))
    n_shift = len(shift_tuples)
    j = np.arange(d)
    gathers = [np.tile(j, (n_shift, 1))]
    for t in range(m - 1):
        offs = np.array([sh[t] for sh in shift_tuples])
        gathers.append((j[None, :] + offs[:, None]) % d)
    conj_phases = np.exp(-2j * np.pi * np.outer(np.arange(d), j) / d) / np.sqrt(d)
    cached = (shift_tuples, tuple(gathers), conj_phases)
    _KERNEL_CACHE[key] = cached
    return cached


def entangled_overlaps(tensor: np.ndarray, d: int, axes: tuple[int, ...]) -> np.ndarray:
    """Branch amplitudes C[phase, shift_index, rest] for the given axes."""
    m = len(axes)
    _, gathers, conj_phases = _kernel(d, m)
    moved = np.moveaxis(tensor, axes, range(m))
    flat = moved.reshape((d,) * m + (-1,))
    gathered = flat[tuple(gathers)]  # (n_shift, d, rest)
    return np.einsum("pj,sjr->psr", conj_phases, gathered)


def collapse_from_overlaps(
    shape: tuple[int, ...],
    d: int,
    axes: tuple[int, ...],
    phase_idx: int,
    shift_idx: int,
    rest: np.ndarray,
) -> np.ndarray:
    """Rebuild the full post-measurement tensor for one chosen branch."""
    m = len(axes)
    shift_tuples, gathers, conj_phases = _kernel(d, m)
    moved_shape = tuple(shape[a] for a in axes) + tuple(
        shape[a] for a in range(len(shape)) if a not in axes
    )
    out = np.zeros((d,) * m + (rest.shape[0],), dtype=np.complex128)
    coeff = conj_phases[phase_idx].conj()  # w^{j*phase}/sqrt(d)
    idx = tuple(g[shift_idx] for g in gathers)
    out[idx] = coeff[:, None] * rest[None, :]
    out = out.reshape(moved_shape)
    return np.moveaxis(out, range(m), axes)


def _labels_for(d: int, m: int, kind: str):
    if kind == BELL:
        if m != 2:
            raise DimensionError("Bell measurements act on exactly 2 sites")
        return bell_labels(d)
    if kind == GHZ:
        if m < 2:
            raise DimensionError("GHZ measurements need >= 2 sites")
        return ghz_labels(d, m)
    raise ValueError(f"unknown basis kind {kind!r}")


def _check_sites(s: StateVector, sites) -> tuple[int, ...]:
    sites = tuple(int(x) for x in sites)
    if len(set(sites)) != len(sites):
        raise DimensionError(f"measurement sites must be distinct, got {sites}")
    for x in sites:
        if not 0 <= x < s.n_sites:
            raise DimensionError(f"site {x} out of range")
    return sites


def basis_distribution(s: StateVector, sites, kind: str) -> OutcomeDistribution:
    """Born-rule probabilities over all Bell/GHZ labels on the given sites.

    The probability of a label is the squared norm of the projection of the
    state onto (labeled state on ``sites``) tensor (anything elsewhere).
    """
    sites = _check_sites(s, sites)
    labels = _labels_for(s.d, len(sites), kind)
    overlaps = entangled_overlaps(s.tensorized(), s.d, sites)
    probs = np.einsum("psr,psr->ps", overlaps, overlaps.conj()).real.reshape(-1)
    return OutcomeDistribution(labels, probs)


def measure_in_basis(
    s: StateVector, sites, kind: str, rng: np.random.Generator
) -> tuple[object, StateVector]:
    """Sample a Bell/GHZ measurement outcome and collapse the state.

    Returns (label, post-measurement state).  Measured sites remain in the
    register, collapsed to the labeled entangled state; re-measuring them
    reproduces the label with probability 1.
    """
    sites = _check_sites(s, sites)
    d = s.d
    m = len(sites)
    labels = _labels_for(d, m, kind)
    overlaps = entangled_overlaps(s.tensorized(), d, sites)
    probs = np.einsum("psr,psr->ps", overlaps, overlaps.conj()).real.reshape(-1)
    dist = OutcomeDistribution(labels, probs)
    idx, label = dist.sample(RandomSampler(rng))
    n_shift = overlaps.shape[1]
    phase_idx, shift_idx = divmod(idx, n_shift)
    rest = overlaps[phase_idx, shift_idx]
    rest = rest / np.linalg.norm(rest)
    post = collapse_from_overlaps(s.tensorized().shape, d, sites, phase_idx, shift_idx, rest)
    return label, StateVector(s.register, post.reshape(-1))
