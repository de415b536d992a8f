"""Exact complexity models used in place of Kolmogorov complexity.

Two models are provided:

* the set (Venn) model, where a string is a subset of a small labelled
  universe and every complexity is the cardinality of a union or a
  difference;
* description systems, where an explicit finite table of programs
  ``(code, condition) -> output`` defines conditional description length.

Both expose the same small surface used by the cluster and daisy code:
``strings`` (the finite population of string ids), ``complexity(x, cond)``
and ``distance(a, b)``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np

INFINITE = math.inf
MAX_UNIVERSE = 64


class UniverseMismatch(ValueError):
    pass


class UnsupportedQuantity(TypeError):
    """Raised when a model has no notion of the requested quantity."""


@dataclass(frozen=True)
class Universe:
    size: int

    def __post_init__(self):
        if not 1 <= self.size <= MAX_UNIVERSE:
            raise ValueError(f"universe size must be in 1..{MAX_UNIVERSE}, got {self.size}")

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def all_strings(self) -> Iterator["SetString"]:
        for bits in range(1 << self.size):
            yield SetString(bits, self.size)


@dataclass(frozen=True, order=True)
class SetString:
    """A subset of ``range(size)`` stored as a bit mask."""

    bits: int
    size: int

    def __post_init__(self):
        if not 1 <= self.size <= MAX_UNIVERSE:
            raise ValueError(f"universe size must be in 1..{MAX_UNIVERSE}, got {self.size}")
        if self.bits < 0 or self.bits >> self.size:
            raise ValueError(f"bits {self.bits:#x} fall outside a universe of {self.size}")

    @classmethod
    def of(cls, positions: Iterable[int], size: int) -> "SetString":
        bits = 0
        for p in positions:
            if not 0 <= p < size:
                raise ValueError(f"position {p} outside universe of size {size}")
            bits |= 1 << p
        return cls(bits, size)

    @property
    def positions(self) -> list[int]:
        return [i for i in range(self.size) if self.bits >> i & 1]

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __or__(self, other: "SetString") -> "SetString":
        _check_same(self, other)
        return SetString(self.bits | other.bits, self.size)

    def __and__(self, other: "SetString") -> "SetString":
        _check_same(self, other)
        return SetString(self.bits & other.bits, self.size)

    def __sub__(self, other: "SetString") -> "SetString":
        _check_same(self, other)
        return SetString(self.bits & ~other.bits, self.size)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.positions)) + "}"


def _check_same(*items: SetString) -> int:
    sizes = {s.size for s in items}
    if len(sizes) != 1:
        raise UniverseMismatch(f"strings live in different universes: sizes {sorted(sizes)}")
    return sizes.pop()


def _union_bits(items: Sequence[SetString]) -> int:
    bits = 0
    for s in items:
        bits |= s.bits
    return bits


def set_complexity(items: SetString | Sequence[SetString], condition: SetString | None = None) -> int:
    """Joint complexity ``|union(items)|``, or ``|union(items) \\ condition|``."""
    if isinstance(items, SetString):
        items = (items,)
    if not items:
        raise ValueError("set_complexity needs at least one string")
    everything = list(items) + ([condition] if condition is not None else [])
    _check_same(*everything)
    bits = _union_bits(items)
    if condition is not None:
        bits &= ~condition.bits
    return bits.bit_count()


def set_information(x: SetString, y: SetString, condition: SetString | None = None) -> int:
    """Mutual information ``|x & y|``, or ``|(x & y) \\ condition|`` when conditioned."""
    if condition is None:
        _check_same(x, y)
        return (x.bits & y.bits).bit_count()
    _check_same(x, y, condition)
    return (x.bits & y.bits & ~condition.bits).bit_count()


class SetModel:
    """The Venn model over a fixed universe.

    ``strings`` defaults to every subset of the universe; a narrower
    population can be given when only some sets are of interest.
    """

    supports_joint = True

    def __init__(self, universe: int | Universe, strings: Iterable[SetString] | None = None):
        self.universe = universe if isinstance(universe, Universe) else Universe(universe)
        if strings is None:
            self._strings = None
        else:
            self._strings = tuple(strings)
            for s in self._strings:
                if s.size != self.universe.size:
                    raise UniverseMismatch(f"{s} does not belong to a universe of size {self.universe.size}")

    @property
    def strings(self) -> Sequence[SetString]:
        if self._strings is None:
            return tuple(self.universe.all_strings())
        return self._strings

    def __contains__(self, s: object) -> bool:
        if not isinstance(s, SetString) or s.size != self.universe.size:
            return False
        return self._strings is None or s in self._strings

    def complexity(self, x: SetString, cond: SetString | None = None) -> int:
        return set_complexity(x, cond)

    def joint(self, *items: SetString, cond: SetString | None = None) -> int:
        return set_complexity(items, cond)

    def distance(self, a: SetString, b: SetString) -> int:
        _check_same(a, b)
        return max((a.bits & ~b.bits).bit_count(), (b.bits & ~a.bits).bit_count())


@dataclass(frozen=True)
class Program:
    code: str
    cond: Hashable | None
    out: Hashable

    def __post_init__(self):
        if set(self.code) - {"0", "1"}:
            raise ValueError(f"program code must be a binary word, got {self.code!r}")


@dataclass
class DescriptionSystem:
    """A finite table of programs defining conditional description length.

    A program ``(code, cond, out)`` prints ``out`` when run on the condition
    ``cond`` (``None`` means unconditional). ``(code, cond)`` pairs are
    unique, so for every condition there are at most ``2**L`` programs of
    length ``L``.
    """

    strings: list
    programs: list[Program] = field(default_factory=list)

    supports_joint = False

    def __post_init__(self):
        self.strings = list(self.strings)
        if len(set(self.strings)) != len(self.strings):
            raise ValueError("duplicate string ids in description system")
        declared = set(self.strings)
        seen = set()
        for p in self.programs:
            if (p.code, p.cond) in seen:
                raise ValueError(f"duplicate program {p.code!r} for condition {p.cond!r}")
            seen.add((p.code, p.cond))
            if p.out not in declared or (p.cond is not None and p.cond not in declared):
                raise KeyError(f"program {p} refers to an undeclared string")

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.strings)}

    @cached_property
    def _shortest(self) -> dict:
        best: dict = {}
        for p in self.programs:
            key = (p.cond, p.out)
            if len(p.code) < best.get(key, INFINITE):
                best[key] = len(p.code)
        return best

    @cached_property
    def conditional_matrix(self) -> np.ndarray:
        """``K[i, j] = C(strings[j] | strings[i])``, ``inf`` where nothing applies."""
        n = len(self.strings)
        k = np.full((n, n), INFINITE)
        for (cond, out), length in self._shortest.items():
            if cond is not None:
                k[self.index[cond], self.index[out]] = length
        return k

    def __contains__(self, s: object) -> bool:
        return s in self.index

    def complexity(self, x, cond=None) -> int | float:
        if x not in self.index:
            raise KeyError(f"string {x!r} is not declared in the description system")
        if cond is not None and cond not in self.index:
            raise KeyError(f"condition {cond!r} is not declared in the description system")
        return self._shortest.get((cond, x), INFINITE)

    def distance(self, a, b) -> int | float:
        return max(self.complexity(a, b), self.complexity(b, a))

    def to_json(self) -> dict:
        return {
            "strings": list(self.strings),
            "programs": [{"code": p.code, "cond": p.cond, "out": p.out} for p in self.programs],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "DescriptionSystem":
        programs = [Program(p["code"], p.get("cond"), p["out"]) for p in payload["programs"]]
        return cls(payload["strings"], programs)

    @classmethod
    def load(cls, path: str | Path) -> "DescriptionSystem":
        return cls.from_json(json.loads(Path(path).read_text()))

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))


def table_complexity(x, condition, system: DescriptionSystem) -> int | float:
    return system.complexity(x, condition)


def chain_rule_defect(model, x, y) -> int:
    """``C(x,y) - C(x) - C(y|x)``; zero for every pair in the set model."""
    if not getattr(model, "supports_joint", False):
        raise UnsupportedQuantity(f"{type(model).__name__} has no joint complexity")
    return model.joint(x, y) - model.complexity(x) - model.complexity(y, x)


def binary_words(max_len: int) -> Iterator[str]:
    """All binary words of length ``0..max_len`` in shortlex order."""
    for n in range(max_len + 1):
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)


def chain_rule_sweep(universe: int) -> np.ndarray:
    """Chain-rule defect for every ordered pair of subsets, as a matrix.

    Entry ``[x, y]`` is ``|x | y| - |x| - |y - x|`` for bit masks ``x, y``.
    """
    n = 1 << universe
    pc = np.array([bin(i).count("1") for i in range(n)], dtype=np.int64)
    x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return pc[x | y] - pc[x] - pc[y & ~x]
