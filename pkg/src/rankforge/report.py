"""JSON reports.

Integers become decimal strings and rationals ``"n/d"``, so any JSON
consumer survives 50-digit values. ``Report.from_json`` undoes
``Report.to_json`` exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import __version__
from .curve import CurvePoint
from .heights import HeightValue, RankCertificate
from .quartic import QuarticSolution

HEIGHT_DIGITS = 30


def encode(obj):
    """Plain JSON-ready structure; ints and rationals turn into strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, str):
        return obj
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, mpmath.mpf):
        return mpmath.nstr(obj, HEIGHT_DIGITS, min_fixed=-5, max_fixed=40)
    if isinstance(obj, QuarticSolution):
        return {"A": str(obj.A), "B": str(obj.B), "C": str(obj.C), "D": str(obj.D)}
    if isinstance(obj, CurvePoint):
        if obj.is_infinity:
            return "infinity"
        return {"x": encode(obj.x), "y": encode(obj.y)}
    if isinstance(obj, HeightValue):
        return {"value": encode(obj.value), "err": encode(obj.err)}
    if isinstance(obj, RankCertificate):
        return {
            "gram": [[encode(v) for v in row] for row in obj.gram],
            "determinant": encode(obj.determinant),
            "normalization": obj.normalization.value,
            "rank_lower_bound": encode(obj.rank_lower_bound),
            "torsion": None if obj.torsion is None else obj.torsion.value,
        }
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "value") and isinstance(obj.value, str):
        return obj.value
    raise TypeError(f"cannot encode {type(obj).__name__}")


def parse_integer(text: str) -> int:
    return int(text)


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": encode(self.inputs),
            "outputs": encode(self.outputs),
            "timings": encode(self.timings),
            "version": self.version,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    def normalized(self) -> "Report":
        """The report as it reads back after a JSON round trip."""
        return Report.from_dict(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(data["command"], data["inputs"], data["outputs"], data["timings"], data["version"])

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))
