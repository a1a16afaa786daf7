"""Dense state-vector engine for registers of d-level systems (qudits).

Conventions used throughout the package:

* Basis states of an n-qudit register are indexed big-endian: the amplitude
  index of |j_0, j_1, ..., j_{n-1}> is sum_i j_i * d**(n-1-i), i.e. the
  first-registered site is the most significant digit.
* The shift and phase (clock) operators are
      X: |j> -> |j+1 mod d>        Z: |j> -> w^j |j>,   w = exp(2*pi*i/d)
  and satisfy the Weyl relation Z X = w X Z.  ``apply_weyl(s, i, q, p)``
  applies X^q Z^p (Z first, then X).
* The discrete Fourier transform is F: |k> -> (1/sqrt(d)) sum_j w^{jk} |j>.

States are immutable; every operation returns a new ``StateVector``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

DEFAULT_AMPLITUDE_CAP = 1 << 24
AMPLITUDE_CAP_ENV = "SWAPQKD_AMPLITUDE_CAP"

#: tolerance for scalar identities (norms, phases)
SCALAR_TOL = 1e-12
#: tolerance for state-vector comparisons
STATE_TOL = 1e-9


class DimensionError(ValueError):
    """Raised for invalid qudit dimensions, sites or register mismatches."""


class CapacityError(RuntimeError):
    """Raised when a state would exceed the configured amplitude cap."""


def amplitude_cap() -> int:
    """Maximum number of amplitudes a single state may hold.

    Overridable through the ``SWAPQKD_AMPLITUDE_CAP`` environment variable.
    """
    raw = os.environ.get(AMPLITUDE_CAP_ENV)
    if raw is None:
        return DEFAULT_AMPLITUDE_CAP
    cap = int(raw)
    if cap < 2:
        raise ValueError(f"{AMPLITUDE_CAP_ENV} must be >= 2, got {cap}")
    return cap


def check_dimension(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise DimensionError(f"qudit dimension must be an integer >= 2, got {d!r}")
    return int(d)


def omega(d: int) -> complex:
    """Primitive d-th root of unity w = exp(2*pi*i/d)."""
    check_dimension(d)
    return complex(np.exp(2j * np.pi / d))


def phase(d: int, exponent: int) -> complex:
    """w^exponent computed directly from the reduced exponent.

    Avoids the error accumulation of repeated multiplication for large
    exponents.
    """
    return complex(np.exp(2j * np.pi * (exponent % d) / d))


@dataclass(frozen=True)
class Register:
    """An ordered collection of ``n_sites`` qudits of equal dimension ``d``."""

    d: int
    n_sites: int

    def __post_init__(self) -> None:
        check_dimension(self.d)
        if self.n_sites < 1:
            raise DimensionError(f"register needs >= 1 site, got {self.n_sites}")
        if self.size > amplitude_cap():
            raise CapacityError(
                f"register of {self.n_sites} qudits at d={self.d} needs "
                f"{self.size} amplitudes, exceeding the cap of {amplitude_cap()}"
            )

    @property
    def size(self) -> int:
        return self.d**self.n_sites

    def index_of(self, digits) -> int:
        """Amplitude index of the basis state with the given site values."""
        if len(digits) != self.n_sites:
            raise DimensionError("digit count does not match register size")
        idx = 0
        for j in digits:
            if not 0 <= j < self.d:
                raise DimensionError(f"basis digit {j} out of range for d={self.d}")
            idx = idx * self.d + j
        return idx

    def digits_of(self, index: int) -> tuple[int, ...]:
        """Site values of the basis state at the given amplitude index."""
        if not 0 <= index < self.size:
            raise DimensionError(f"index {index} out of range")
        digits = []
        for _ in range(self.n_sites):
            digits.append(index % self.d)
            index //= self.d
        return tuple(reversed(digits))


@dataclass(frozen=True)
class StateVector:
    """Immutable dense amplitude vector over a register."""

    register: Register
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != self.register.size:
            raise DimensionError(
                f"expected {self.register.size} amplitudes, got {amps.shape[0]}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, d: int, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = int(round(np.log(amps.shape[0]) / np.log(d)))
        if d**n != amps.shape[0]:
            raise DimensionError("amplitude count is not a power of d")
        return cls(Register(d, n), amps)

    @classmethod
    def basis(cls, d: int, digits) -> "StateVector":
        """Computational basis state |digits...>."""
        reg = Register(d, len(digits))
        amps = np.zeros(reg.size, dtype=np.complex128)
        amps[reg.index_of(digits)] = 1.0
        return cls(reg, amps)

    @property
    def d(self) -> int:
        return self.register.d

    @property
    def n_sites(self) -> int:
        return self.register.n_sites

    def tensorized(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per site."""
        return self.amplitudes.reshape((self.d,) * self.n_sites)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product; b's sites are appended after a's sites."""
    if a.d != b.d:
        raise DimensionError(f"mismatched dimensions d={a.d} and d={b.d}")
    total = a.register.size * b.register.size
    if total > amplitude_cap():
        raise CapacityError(
            f"tensor product would need {total} amplitudes, cap is {amplitude_cap()}"
        )
    amps = np.multiply.outer(a.amplitudes, b.amplitudes).reshape(-1)
    return StateVector(Register(a.d, a.n_sites + b.n_sites), amps)


def _check_site(s: StateVector, site: int) -> None:
    if not 0 <= site < s.n_sites:
        raise DimensionError(f"site {site} out of range for {s.n_sites} qudits")


def apply_matrix(s: StateVector, site: int, matrix: np.ndarray) -> StateVector:
    """Apply a single-site d x d matrix at the given site."""
    _check_site(s, site)
    d = s.d
    t = np.moveaxis(s.tensorized(), site, 0).reshape(d, -1)
    t = matrix @ t
    t = np.moveaxis(t.reshape((d,) * s.n_sites), 0, site)
    return StateVector(s.register, t.reshape(-1))


def weyl_matrix(d: int, shift: int, phase_power: int) -> np.ndarray:
    """Matrix of X^shift Z^phase_power: |j> -> w^{j*phase_power} |j+shift>."""
    check_dimension(d)
    m = np.zeros((d, d), dtype=np.complex128)
    for j in range(d):
        m[(j + shift) % d, j] = phase(d, j * phase_power)
    return m


def fourier_matrix(d: int, inverse: bool = False) -> np.ndarray:
    """Matrix of the d-dimensional Fourier transform (or its inverse)."""
    check_dimension(d)
    j = np.arange(d)
    sign = -1 if inverse else 1
    return np.exp(sign * 2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def apply_weyl(s: StateVector, site: int, shift: int, phase_power: int) -> StateVector:
    """Apply the Weyl operator X^shift Z^phase_power on one site."""
    return apply_matrix(s, site, weyl_matrix(s.d, shift % s.d, phase_power % s.d))


def apply_fourier(s: StateVector, site: int, inverse: bool = False) -> StateVector:
    """Apply the d-dimensional Fourier transform (or its inverse) on one site."""
    return apply_matrix(s, site, fourier_matrix(s.d, inverse=inverse))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b> for states over identical registers."""
    if a.register != b.register:
        raise DimensionError("inner product requires identical registers")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def permute_sites(s: StateVector, permutation) -> StateVector:
    """Reorder sites: the qudit previously at site permutation[i] moves to site i.

    ``permutation`` must be a bijection on range(n_sites); this matches
    numpy's transpose-axes convention.
    """
    perm = tuple(int(p) for p in permutation)
    if sorted(perm) != list(range(s.n_sites)):
        raise DimensionError(f"{perm} is not a permutation of {s.n_sites} sites")
    t = np.transpose(s.tensorized(), perm)
    return StateVector(s.register, np.ascontiguousarray(t).reshape(-1))


def states_close(a: StateVector, b: StateVector, tol: float = STATE_TOL) -> bool:
    """Exact amplitude-wise comparison (no global-phase allowance)."""
    if a.register != b.register:
        return False
    return bool(np.max(np.abs(a.amplitudes - b.amplitudes)) < tol)
