"""PrefLib strict-order file support (.soc complete, .soi incomplete).

Only the modern header style is accepted: '#'-prefixed "KEY: value"
metadata lines followed by body lines "<multiplicity>: c1,c2,...", with
1-based candidate numbers. Orders with ties (.toc/.toi brace syntax) and
the legacy headerless format are rejected explicitly.
"""

from __future__ import annotations

import re

from .exceptions import (
    InputError,
    ParseError,
    UnsupportedFormatError,
    ValidationError,
)
from .model import AlternativeRegistry, Profile, Vote

__all__ = ["parse", "serialize"]

_ALT_NAME = re.compile(r"ALTERNATIVE NAME (\d+)$")
_BODY = re.compile(r"^\s*(-?\d+)\s*:\s*(.*)$")


def parse(text: str) -> Profile:
    """Parse .soc/.soi text into a Profile.

    Metadata drives validation when present: the declared alternative
    count fixes n, and a declared voter count must match the sum of
    multiplicities.
    """
    metadata: dict[str, str] = {}
    orders: list[tuple[int, tuple[int, ...]]] = []
    body_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if body_seen:
                raise ParseError("metadata after body lines", line=lineno)
            entry = line[1:].strip()
            if ":" not in entry:
                raise ParseError(f"malformed metadata line {entry!r}", line=lineno)
            key, value = entry.split(":", 1)
            metadata[key.strip().upper()] = value.strip()
            continue
        body_seen = True
        if "{" in line or "}" in line:
            raise UnsupportedFormatError(
                "orders with ties are not supported; "
                "this looks like a .toc/.toi file",
                line=lineno,
            )
        match = _BODY.match(line)
        if match is None:
            raise ParseError(
                f"expected '<count>: c1,c2,...', got {line!r}; "
                "legacy headerless PrefLib files are not supported",
                line=lineno,
            )
        count = int(match.group(1))
        if count <= 0:
            raise ParseError(f"multiplicity must be positive, got {count}", line=lineno)
        rest = match.group(2).strip()
        if not rest:
            raise ParseError("empty candidate list", line=lineno)
        try:
            candidates = tuple(int(tok) for tok in rest.split(","))
        except ValueError:
            raise ParseError(f"non-numeric candidate in {rest!r}", line=lineno) from None
        if len(set(candidates)) != len(candidates):
            raise ParseError("duplicate candidate in one order", line=lineno)
        orders.append((count, candidates))

    if not orders:
        raise ParseError("no vote lines found")
    n = _declared_int(metadata, "NUMBER ALTERNATIVES")
    if n is None:
        n = max(max(cands) for _, cands in orders)
    for count, cands in orders:
        for c in cands:
            if not 1 <= c <= n:
                raise ParseError(
                    f"candidate {c} out of range 1..{n}"
                )
    declared_m = _declared_int(metadata, "NUMBER VOTERS")
    total = sum(count for count, _ in orders)
    if declared_m is not None and declared_m != total:
        raise ValidationError(
            f"declared {declared_m} voters but orders sum to {total}"
        )
    labels = []
    for i in range(1, n + 1):
        labels.append(metadata.get(f"ALTERNATIVE NAME {i}", f"Candidate {i}"))
    registry = AlternativeRegistry(tuple(labels))
    entries = [
        (Vote(tuple(c - 1 for c in cands), n=n), count) for count, cands in orders
    ]
    return Profile(registry, tuple(entries))


def _declared_int(metadata: dict[str, str], key: str) -> int | None:
    value = metadata.get(key)
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"metadata {key} is not an integer: {value!r}") from None


def serialize(profile: Profile, kind: str = "soc") -> str:
    """Canonical .soc/.soi text; parse(serialize(V)) == V as a multiset."""
    if kind not in ("soc", "soi"):
        raise InputError(f"kind must be 'soc' or 'soi', got {kind!r}")
    if kind == "soc" and not profile.is_complete:
        raise InputError("soc files require complete votes; use kind='soi'")
    n = profile.registry.n
    lines = [
        f"# FILE NAME: profile.{kind}",
        f"# NUMBER ALTERNATIVES: {n}",
        f"# NUMBER VOTERS: {profile.m}",
        f"# NUMBER UNIQUE ORDERS: {len(profile.entries)}",
    ]
    for i, label in enumerate(profile.registry.labels, start=1):
        lines.append(f"# ALTERNATIVE NAME {i}: {label}")
    body = sorted(
        profile.entries,
        key=lambda e: (-e[1], e[0].ranked_prefix),
    )
    for vote, count in body:
        if not vote.ranked_prefix:
            raise InputError("cannot serialize a vote that ranks nothing")
        cands = ",".join(str(c + 1) for c in vote.ranked_prefix)
        lines.append(f"{count}: {cands}")
    return "\n".join(lines) + "\n"
