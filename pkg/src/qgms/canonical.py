"""Canonical JSON and hashing for commitment / ledger preimages.

Every hash in the blind protocol is computed over canonical JSON bytes so
that an independent verifier in any language can reproduce them:

* object keys sorted lexicographically, no insignificant whitespace
* strings JSON-escaped with non-ASCII characters as ``\\uXXXX``
* integers as plain decimals, floats formatted with 12 significant
  digits (``%.12g``), booleans/null as JSON literals
* NaN / infinities rejected
* bytes are the UTF-8 encoding of the resulting text
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction

ZERO_HASH = "0" * 64


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float has no canonical form")
    return format(float(x), ".12g")


def canonical_json(obj) -> str:
    """Serialize ``obj`` (dict/list/str/int/float/bool/None) canonically."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return format_float(float(obj))
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, dict):
        for k in obj:
            if not isinstance(k, str):
                raise ValueError("canonical JSON object keys must be strings")
        items = (
            f"{json.dumps(k, ensure_ascii=True)}:{canonical_json(v)}"
            for k, v in sorted(obj.items())
        )
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    raise TypeError(f"no canonical form for {type(obj).__name__}")


def canonical_bytes(obj) -> bytes:
    return canonical_json(obj).encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
