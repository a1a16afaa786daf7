"""Numerical verification of the entanglement-swapping identities.

Each check expands both sides of one swap identity as dense state vectors
and reports the maximum amplitude deviation.  The identities all share the
structure

    (factor A) x (factor B)
        = (1/d) sum_{k,l} w^{-kl} (measured-pair state) x (remaining state)

with labels shifted by (k, l).  The branch phase is w^{-kl} for every
identity in this family; the branch weight is |1/d|^2 = 1/d^2 either way.

Verified identities:

* ``bell-bell``          swapping two Bell pairs
* ``bell-ghz-keep``      Bell x GHZ, measuring the GHZ reference qudit
* ``bell-ghz-send``      Bell x GHZ, measuring a GHZ shift qudit
* ``weyl-ghz``           Weyl operators shifting GHZ labels
* ``fourier-swap``       GHZ x Fourier-twisted Bell pair
* ``fourier-swap-tagged``  same with a pre-existing Fourier tag on the GHZ
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .entangled import BellLabel, GhzLabel, make_bell, make_ghz
from .qudit import (
    StateVector,
    apply_fourier,
    apply_weyl,
    phase,
    permute_sites,
    tensor,
)

ALL_IDENTITIES = (
    "bell-bell",
    "bell-ghz-keep",
    "bell-ghz-send",
    "weyl-ghz",
    "fourier-swap",
    "fourier-swap-tagged",
)


def _branch_phase(d: int, k: int, l: int, corrupt: bool) -> complex:
    # corrupt=True is a test hook: dropping the branch phase must break
    # every identity, which the negative-control test relies on.
    if corrupt:
        return 1.0
    return phase(d, -k * l)


def bell_bell_deviation(d: int, a1: int, a2: int, a3: int, a4: int,
                        corrupt: bool = False) -> float:
    """Two Bell pairs on sites (0,1) and (2,3), measured pair (0,3).

    (a1,a2)_{01} x (a3,a4)_{23}
      = (1/d) sum w^{-kl} (a1-k, a4+l)_{03} x (a3+k, a2-l)_{21}
    """
    lhs = tensor(make_bell(d, BellLabel(a1, a2)), make_bell(d, BellLabel(a3, a4)))
    rhs = np.zeros_like(lhs.amplitudes)
    for k in range(d):
        for l in range(d):
            term = tensor(
                make_bell(d, BellLabel(a1 - k, a4 + l)),
                make_bell(d, BellLabel(a3 + k, a2 - l)),
            )
            # term site order (0,3,2,1) -> register order (0,1,2,3)
            term = permute_sites(term, (0, 3, 2, 1))
            rhs = rhs + _branch_phase(d, k, l, corrupt) * term.amplitudes
    return float(np.max(np.abs(lhs.amplitudes - rhs / d)))


def bell_ghz_keep_deviation(d: int, u1: int, u2: int, v, parties: int = 3,
                            corrupt: bool = False) -> float:
    """Bell (0,1) x GHZ (2..), measuring (GHZ reference, Bell second qudit).

    (u1,u2)_{01} x (v1; v2..)_{2..}
      = (1/d) sum w^{-kl} (v1-k, u2+l)_{21} x (u1+k; v2-l, ..)_{0,3..}
    """
    v = tuple(v)
    lhs = tensor(make_bell(d, BellLabel(u1, u2)), make_ghz(d, GhzLabel(v[0], v[1:]), parties))
    n = 2 + parties
    rhs = np.zeros_like(lhs.amplitudes)
    for k in range(d):
        for l in range(d):
            term = tensor(
                make_bell(d, BellLabel(v[0] - k, u2 + l)),
                make_ghz(d, GhzLabel(u1 + k, tuple(t - l for t in v[1:])), parties),
            )
            # term site order (2,1,0,3,4,..) -> register order
            perm = (2, 1, 0) + tuple(range(3, n))
            term = permute_sites(term, perm)
            rhs = rhs + _branch_phase(d, k, l, corrupt) * term.amplitudes
    return float(np.max(np.abs(lhs.amplitudes - rhs / d)))


def bell_ghz_send_deviation(d: int, u1: int, u2: int, v, leg: int = -1,
                            parties: int = 3, corrupt: bool = False) -> float:
    """Bell (0,1) x GHZ (2..), measuring (Bell first qudit, GHZ shift qudit).

    For the last GHZ qudit of a 3-party state this reads
    (u1,u2)_{01} x (v1,v2,v3)_{234}
      = (1/d) sum w^{-kl} (u1-k, v3+l)_{04} x (v1+k, v2, u2-l)_{231}
    """
    v = tuple(v)
    if leg < 0:
        leg += parties
    if not 1 <= leg < parties:
        raise ValueError("leg must name a GHZ shift qudit")
    lhs = tensor(make_bell(d, BellLabel(u1, u2)), make_ghz(d, GhzLabel(v[0], v[1:]), parties))
    n = 2 + parties
    measured_site = 2 + leg
    rhs = np.zeros_like(lhs.amplitudes)
    for k in range(d):
        for l in range(d):
            new_shifts = list(v[1:])
            new_shifts[leg - 1] = u2 - l
            term = tensor(
                make_bell(d, BellLabel(u1 - k, v[leg] + l)),
                make_ghz(d, GhzLabel(v[0] + k, tuple(new_shifts)), parties),
            )
            # term sites: (0, measured, 2, .., 1 at leg position, ..)
            order = [0, measured_site] + [
                2 + t if t != leg else 1 for t in range(parties)
            ]
            perm = tuple(order.index(site) for site in range(n))
            term = permute_sites(term, perm)
            rhs = rhs + _branch_phase(d, k, l, corrupt) * term.amplitudes
    return float(np.max(np.abs(lhs.amplitudes - rhs / d)))


def weyl_ghz_deviation(d: int, p: int, q: int, r: int, u: int, v: int, w: int) -> float:
    """Weyl operators on GHZ shift qudits relabel the state:

    (I x X^q Z^p x X^r) (u; v, w) = w^{pv} (u+p; v+q, w+r)

    The w^{pv} factor is the global phase produced by the X-then-Z operator
    ordering used by ``apply_weyl``; any ordering convention differs only by
    such a phase.
    """
    lhs = make_ghz(d, GhzLabel(u, (v, w)), 3)
    lhs = apply_weyl(lhs, 1, q, p)
    lhs = apply_weyl(lhs, 2, r, 0)
    rhs = make_ghz(d, GhzLabel(u + p, (v + q, w + r)), 3)
    expected = phase(d, p * v) * rhs.amplitudes
    return float(np.max(np.abs(lhs.amplitudes - expected)))


def fourier_swap_deviation(d: int, u1: int, u2: int, u3: int, tagged: bool = False,
                           corrupt: bool = False) -> float:
    """GHZ (0,1,2) x Fourier-twisted Bell (3,4), measured pair (3,2).

    (u1,u2,u3)_{012} x [(F x I)(0,0)_{34}]
      = (1/d) sum w^{-kl} [(I x I x F)(u1-k, u2, l)_{014}] x (k, u3-l)_{32}

    With ``tagged`` an extra F sits on GHZ qudit 1 on both sides (it commutes
    with everything the measurement touches).
    """
    lhs = tensor(make_ghz(d, GhzLabel(u1, (u2, u3)), 3), make_bell(d, BellLabel(0, 0)))
    lhs = apply_fourier(lhs, 3)
    if tagged:
        lhs = apply_fourier(lhs, 1)
    rhs = np.zeros_like(lhs.amplitudes)
    for k in range(d):
        for l in range(d):
            g = make_ghz(d, GhzLabel(u1 - k, (u2, l)), 3)
            g = apply_fourier(g, 2)
            if tagged:
                g = apply_fourier(g, 1)
            term = tensor(g, make_bell(d, BellLabel(k, u3 - l)))
            # term site order (0,1,4,3,2) -> register order
            term = permute_sites(term, (0, 1, 4, 3, 2))
            rhs = rhs + _branch_phase(d, k, l, corrupt) * term.amplitudes
    return float(np.max(np.abs(lhs.amplitudes - rhs / d)))


@dataclass
class IdentityResult:
    name: str
    d: int
    cases: int
    max_deviation: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < 1e-9


def _label_sets(d: int, count: int, exhaustive_cutoff: int, rng: np.random.Generator):
    """Exhaustive label tuples for small d, a random sample otherwise."""
    if d**count <= exhaustive_cutoff:
        yield from product(range(d), repeat=count)
    else:
        for _ in range(100):
            yield tuple(int(x) for x in rng.integers(0, d, size=count))


def check_identity(name: str, d: int, rng: np.random.Generator | None = None,
                   corrupt: bool = False) -> IdentityResult:
    """Run one identity over its full (or sampled) label space at dimension d."""
    if rng is None:
        rng = np.random.default_rng(0)
    worst = 0.0
    cases = 0
    if name == "bell-bell":
        for labs in _label_sets(d, 4, 700, rng):
            worst = max(worst, bell_bell_deviation(d, *labs, corrupt=corrupt))
            cases += 1
    elif name == "bell-ghz-keep":
        for labs in _label_sets(d, 5, 700, rng):
            worst = max(worst, bell_ghz_keep_deviation(d, labs[0], labs[1], labs[2:],
                                                       corrupt=corrupt))
            cases += 1
    elif name == "bell-ghz-send":
        for labs in _label_sets(d, 5, 700, rng):
            worst = max(worst, bell_ghz_send_deviation(d, labs[0], labs[1], labs[2:],
                                                       corrupt=corrupt))
            cases += 1
    elif name == "weyl-ghz":
        for labs in _label_sets(d, 6, 3**6, rng):
            worst = max(worst, weyl_ghz_deviation(d, *labs))
            cases += 1
        if corrupt:
            worst = max(worst, 1.0)
    elif name == "fourier-swap":
        for labs in _label_sets(d, 3, 700, rng):
            worst = max(worst, fourier_swap_deviation(d, *labs, corrupt=corrupt))
            cases += 1
    elif name == "fourier-swap-tagged":
        for labs in _label_sets(d, 3, 700, rng):
            worst = max(worst, fourier_swap_deviation(d, *labs, tagged=True,
                                                      corrupt=corrupt))
            cases += 1
    else:
        raise ValueError(f"unknown identity {name!r}")
    return IdentityResult(name, d, cases, worst)


def run_identity_suite(dims, names=ALL_IDENTITIES, seed: int = 0,
                       corrupt: bool = False) -> list[IdentityResult]:
    """Check the selected identities for every dimension in ``dims``."""
    rng = np.random.default_rng(seed)
    return [check_identity(name, d, rng, corrupt=corrupt) for d in dims for name in names]
