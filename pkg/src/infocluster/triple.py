"""Complexity profiles, clones and the common core of a triple (set model)."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .models import SetString, Universe, _check_same, set_complexity, set_information

MAX_CLONE_SCAN = 1 << 20

PROFILE_FIELDS = ("x", "y", "z", "xy", "xz", "yz", "xyz")


@dataclass(frozen=True)
class ComplexityProfile:
    x: int
    y: int
    z: int
    xy: int
    xz: int
    yz: int
    xyz: int

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(getattr(self, f) for f in PROFILE_FIELDS)

    def within(self, other: "ComplexityProfile", delta: int) -> bool:
        return all(abs(a - b) <= delta for a, b in zip(self.as_tuple(), other.as_tuple()))


def profile(x: SetString, y: SetString, z: SetString) -> ComplexityProfile:
    _check_same(x, y, z)
    return ComplexityProfile(
        set_complexity(x), set_complexity(y), set_complexity(z),
        set_complexity((x, y)), set_complexity((x, z)), set_complexity((y, z)),
        set_complexity((x, y, z)),
    )


def conditional_information(a: SetString, b: SetString, cond: SetString) -> int:
    """``I(a:b|c) = C(b|c) - C(b|a,c)`` computed from complexities."""
    return set_complexity(b, cond) - set_complexity(b, a | cond)


def triple_information(x: SetString, y: SetString, z: SetString) -> int:
    """The seven-term inclusion-exclusion ``I(x:y:z)``."""
    p = profile(x, y, z)
    return p.x + p.y + p.z - p.xy - p.xz - p.yz + p.xyz


def epsilon(x: SetString, y: SetString, z: SetString) -> int:
    return max(
        conditional_information(x, y, z),
        conditional_information(x, z, y),
        conditional_information(y, z, x),
    )


@dataclass(frozen=True)
class TripleReport:
    eps: int
    triple_info: int
    w: SetString | None = None
    w_complexity: int | None = None
    residuals: tuple[int, int, int] | None = None   # C(w|x), C(w|y), C(w|z)
    profile: ComplexityProfile | None = None

    def to_json(self) -> dict:
        return {
            "eps": self.eps,
            "triple_info": self.triple_info,
            "w": self.w.positions if self.w is not None else None,
            "residuals": list(self.residuals) if self.residuals is not None else None,
            "profile": list(self.profile.as_tuple()) if self.profile is not None else None,
        }


def triple_report(x: SetString, y: SetString, z: SetString) -> TripleReport:
    return TripleReport(epsilon(x, y, z), triple_information(x, y, z), profile=profile(x, y, z))


def extract_triple_core(x: SetString, y: SetString, z: SetString) -> TripleReport:
    """Materialize the shared information as ``w = x & y & z``."""
    w = x & y & z
    residuals = (set_complexity(w, x), set_complexity(w, y), set_complexity(w, z))
    return TripleReport(
        epsilon(x, y, z), triple_information(x, y, z), w, set_complexity(w), residuals, profile(x, y, z)
    )


def nonshannon_slack(x: SetString, y: SetString, z: SetString, z1: SetString, z2: SetString) -> int:
    """RHS - LHS of the five-variable inequality used for clone sets.

    ``I(x:y) <= I(x:y|z1) + I(x:y|z2) + I(z1:z2) + I(x:y|z) + I(x:z|y) + I(y:z|x)``
    """
    _check_same(x, y, z, z1, z2)
    rhs = (
        conditional_information(x, y, z1)
        + conditional_information(x, y, z2)
        + set_information(z1, z2)
        + conditional_information(x, y, z)
        + conditional_information(x, z, y)
        + conditional_information(y, z, x)
    )
    return rhs - set_information(x, y)


def _popcount_table(size: int) -> np.ndarray:
    return np.array([bin(i).count("1") for i in range(1 << size)], dtype=np.int64)


def nonshannon_sweep(universe: int) -> tuple[int, int, tuple]:
    """Minimum slack over every five-tuple of subsets, with a minimizer.

    Vectorized over ``(x, y, z)`` for each ``(z1, z2)`` using the per-position
    form of each term: ``I(a:b|c) = |(a & b) \\ c|``.
    """
    n = 1 << universe
    pc = _popcount_table(universe)
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    xy = x & y
    base = pc[xy & ~z] + pc[x & z & ~y] + pc[y & z & ~x] - pc[xy]
    best, arg = None, None
    for z1 in range(n):
        t1 = pc[xy & ~z1]
        for z2 in range(n):
            slack = base + t1 + pc[xy & ~z2] + pc[z1 & z2]
            k = int(slack.argmin())
            v = int(slack.flat[k])
            if best is None or v < best:
                i, j, l = np.unravel_index(k, slack.shape)
                best, arg = v, (int(i), int(j), int(l), z1, z2)
    return best, n ** 5, arg


def clones(x: SetString, y: SetString, z: SetString, delta: int) -> frozenset:
    """All ``z'`` whose profile with ``(x, y)`` is within ``delta`` of ``z``'s."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    size = _check_same(x, y, z)
    if 1 << size > MAX_CLONE_SCAN:
        raise ValueError(f"universe of {size} positions is too large to scan for clones")
    ref = profile(x, y, z)
    return frozenset(c for c in Universe(size).all_strings() if profile(x, y, c).within(ref, delta))


@dataclass(frozen=True)
class CloneClusterCheck:
    members: frozenset
    diameter: int
    logsize: int
    bound: int            # C(z|x,y) + 7*delta + 3*eps
    size_target: int      # C(z|x,y) - delta
    passed: bool


def clone_cluster_check(x: SetString, y: SetString, z: SetString, delta: int) -> CloneClusterCheck:
    """Measure the clone set as a cluster.

    Outside ``x&y`` a clone holds at most ``C(z|x,y) + 2*eps + 3*delta``
    positions, and it misses at most ``eps + 4*delta`` positions of ``x&y``,
    so ``diameter <= C(z|x,y) + 7*delta + 3*eps``. The ``2*delta`` version of
    the bound fails already for ``x={0,1,2,4}, y=z={1,2}, delta=1``.
    """
    members = clones(x, y, z, delta)
    if not members:
        raise ValueError("clone set is empty")
    diam = max(
        (max(len(a - b), len(b - a)) for a, b in combinations(members, 2)),
        default=0,
    )
    cond = set_complexity(z, x | y)
    bound = cond + 7 * delta + 3 * epsilon(x, y, z)
    logsize = len(members).bit_length() - 1
    return CloneClusterCheck(members, diam, logsize, bound, cond - delta, diam <= bound)
