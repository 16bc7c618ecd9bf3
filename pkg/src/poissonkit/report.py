"""Versioned JSON report envelope."""
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA = "poisson-kit/1"
VERSION = "0.1.0"


def digest(text):
    if isinstance(text, str):
        text = text.encode("utf-8")
    return hashlib.sha256(text).hexdigest()


def _plain(obj):
    """Fallback for json.dumps: rationals and other scalars become strings, tuples lists."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(x) if not isinstance(x, (int, str)) else x for x in obj)
    if isinstance(obj, tuple):
        return list(obj)
    return str(obj)


def _keys(obj):
    """Stringify dict keys so that sort_keys never compares mixed types."""
    if isinstance(obj, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): _keys(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_keys(v) for v in obj]
    return obj


@dataclass
class Report:
    command: str
    input_digest: str
    seed: int
    ok: bool
    result: dict
    timing: dict = field(default=None)

    def to_json(self):
        out = {
            "schema": SCHEMA,
            "tool": {"name": "poissonkit", "version": VERSION},
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "verdict": "pass" if self.ok else "fail",
            "result": _keys(self.result),
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def dumps(self, indent=2):
        return json.dumps(self.to_json(), sort_keys=True, indent=indent, default=_plain)
