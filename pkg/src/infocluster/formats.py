"""Readers and writers for the on-disk formats.

* cluster stream: JSON lines, one ``{"members": [ids]}`` object per line;
* registry / certificate / triple report / verify report: JSON documents.

Set-model strings are written as lists of positions.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Callable

from .models import SetString


def set_member_parser(universe: int) -> Callable:
    def parse(item):
        if isinstance(item, SetString):
            return item
        if isinstance(item, str):
            item = [int(p) for p in item.split(",") if p.strip()]
        return SetString.of(item, universe)
    return parse


def member_to_json(x):
    return x.positions if isinstance(x, SetString) else x


def read_stream(path: str | Path, parse: Callable = lambda x: x) -> list[frozenset]:
    clusters = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            members = record["members"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"{path}:{lineno}: expected {{\"members\": [...]}}") from exc
        clusters.append(frozenset(parse(_hashable(m)) for m in members))
    return clusters


def _hashable(x):
    return tuple(x) if isinstance(x, list) else x


def write_stream(path: str | Path, clusters) -> None:
    lines = [json.dumps({"members": sorted((member_to_json(x) for x in c), key=str)}) for c in clusters]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def dump_json(path: str | Path, payload) -> None:
    Path(path).write_text(json.dumps(to_plain(payload), indent=1, sort_keys=False) + "\n")


def to_plain(obj):
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((to_plain(v) for v in obj), key=str)
    if isinstance(obj, SetString):
        return obj.positions
    return obj
