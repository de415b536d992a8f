"""Compression-based proxies for information distance on byte data."""
from __future__ import annotations

import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import lz77

BUILTIN = "builtin"
EXTERNAL = "external"


class CompressorError(RuntimeError):
    pass


@dataclass
class CompressorHandle:
    """A compressor standing in for complexity.

    ``kind`` is ``"builtin"`` (the in-repo LZ77 coder) or ``"external"``, in
    which case ``template`` is a command line with ``{in}`` and ``{out}``
    placeholders (and optionally ``{level}``) that must write a compressed
    file to ``{out}``. External commands are run twice per input and must
    agree byte for byte.

    Handles memoize lengths and must not be shared between workers.
    """

    kind: str = BUILTIN
    level: int = 0
    template: str | None = None
    _lengths: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in (BUILTIN, EXTERNAL):
            raise ValueError(f"unknown compressor kind {self.kind!r}")
        if self.kind == EXTERNAL:
            if not self.template or "{in}" not in self.template or "{out}" not in self.template:
                raise ValueError("external compressor template needs {in} and {out} placeholders")

    @classmethod
    def parse(cls, spec: str) -> "CompressorHandle":
        """Build a handle from ``builtin`` or ``cmd:TEMPLATE``."""
        if spec == BUILTIN:
            return cls()
        if spec.startswith("cmd:"):
            return cls(EXTERNAL, template=spec[4:])
        raise ValueError(f"compressor must be 'builtin' or 'cmd:TEMPLATE', got {spec!r}")

    def fresh(self) -> "CompressorHandle":
        return CompressorHandle(self.kind, self.level, self.template)

    def _run_external(self, data: bytes) -> bytes:
        with tempfile.TemporaryDirectory() as tmp:
            src = Path(tmp) / "input"
            dst = Path(tmp) / "output"
            src.write_bytes(data)
            argv = [
                part.replace("{in}", str(src)).replace("{out}", str(dst)).replace("{level}", str(self.level))
                for part in shlex.split(self.template)
            ]
            try:
                proc = subprocess.run(argv, capture_output=True, timeout=120)
            except (OSError, subprocess.TimeoutExpired) as exc:
                raise CompressorError(f"external compressor failed to run: {exc}") from exc
            if proc.returncode != 0:
                raise CompressorError(
                    f"external compressor exited with {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}"
                )
            if not dst.exists():
                raise CompressorError("external compressor produced no output file")
            return dst.read_bytes()

    def compress(self, data: bytes) -> tuple[int, bytes]:
        data = bytes(data)
        if self.kind == BUILTIN:
            payload = lz77.compress(data)
        else:
            payload = self._run_external(data)
            if self._run_external(data) != payload:
                raise CompressorError("external compressor is not deterministic: two runs disagree")
        self._lengths[data] = len(payload)
        return len(payload), payload

    def length(self, data: bytes) -> int:
        data = bytes(data)
        cached = self._lengths.get(data)
        if cached is None:
            cached = self.compress(data)[0]
        return cached


def compress(data: bytes, c: CompressorHandle | None = None) -> tuple[int, bytes]:
    return (c or CompressorHandle()).compress(data)


@dataclass(frozen=True)
class ProxyDistance:
    value: Fraction
    units: str  # "bits" or "ncd"

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("proxy distances are nonnegative")

    def __float__(self) -> float:
        return float(self.value)


def cond_proxy(x: bytes, y: bytes, c: CompressorHandle | None = None) -> ProxyDistance:
    """Approximate ``C(x|y)`` in bits as ``8 * max(Z(y + x) - Z(y), 0)``."""
    c = c or CompressorHandle()
    extra = c.length(bytes(y) + bytes(x)) - c.length(y)
    return ProxyDistance(Fraction(8 * max(extra, 0)), "bits")


def proxy_distance(x: bytes, y: bytes, c: CompressorHandle | None = None) -> ProxyDistance:
    """Compressor estimate of ``max(C(x|y), C(y|x))`` in bits."""
    c = c or CompressorHandle()
    return max(cond_proxy(x, y, c), cond_proxy(y, x, c), key=lambda p: p.value)


def ncd(x: bytes, y: bytes, c: CompressorHandle | None = None) -> ProxyDistance:
    """Normalized compression distance with canonically ordered concatenation."""
    c = c or CompressorHandle()
    x, y = bytes(x), bytes(y)
    if not x and not y:
        raise ValueError("ncd is undefined for two empty inputs")
    zx, zy = c.length(x), c.length(y)
    first, second = sorted((x, y))
    zxy = c.length(first + second)
    value = Fraction(zxy - min(zx, zy), max(zx, zy))
    return ProxyDistance(max(value, Fraction(0)), "ncd")


def read_corpus(root: str | Path) -> dict[str, bytes]:
    """Every regular file under ``root``, keyed by its relative POSIX path."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory {root} does not exist")
    items = {}
    for path in sorted(root.rglob("*")):
        if path.is_file() and not path.is_symlink():
            items[path.relative_to(root).as_posix()] = path.read_bytes()
    return items
