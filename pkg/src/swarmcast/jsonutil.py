"""Canonical JSON serialization for wire payloads.

Keys are emitted sorted and every float is printed with 17 significant
digits, so equal payloads serialize to identical bytes.
"""

from __future__ import annotations

import json
import math

from .errors import InvalidInputError


def format_float(value: float) -> str:
    f = float(value)
    if not math.isfinite(f):
        raise InvalidInputError("cannot serialize non-finite number")
    if f == int(f) and abs(f) < 1e16:
        return f"{int(f)}.0"
    return format(f, ".17g")


def dumps_canonical(obj) -> str:
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: kv[0])
        inner = ",".join(f"{json.dumps(str(k))}:{dumps_canonical(v)}" for k, v in items)
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps_canonical(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return dumps_canonical(obj.item())
    if hasattr(obj, "tolist"):  # numpy arrays
        return dumps_canonical(obj.tolist())
    raise InvalidInputError(f"cannot serialize {type(obj).__name__}")
