"""Torsion of y^2 = x^3 + K x.

For fourth-power-free d the rational torsion is Z/4 when d = 4, Z/2 x Z/2
when -d is a square, and Z/2 otherwise. K = d m^4 is isomorphic to the
d-curve (x -> x/m^2, y -> y/m^3), so we classify d.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InvariantError, RankforgeError
from .family import FamilyInstance
from .numtheory import (DEFAULT_FACTOR_BUDGET, fourth_power_free_part,
                        is_perfect_fourth_power, is_perfect_square)


# factoring below this size is a matter of milliseconds
CROSS_CHECK_BITS = 160


class ZeroCoefficient(RankforgeError, ValueError):
    pass


class TorsionClass(enum.Enum):
    Z4 = "Z4"
    Z2xZ2 = "Z2xZ2"
    Z2 = "Z2"
    UNKNOWN = "Unknown"

    @property
    def order(self) -> int | None:
        return {"Z4": 4, "Z2xZ2": 4, "Z2": 2}.get(self.value)


def _classify_reduced(d: int) -> TorsionClass:
    if d == 4:
        return TorsionClass.Z4
    if is_perfect_square(-d):
        return TorsionClass.Z2xZ2
    return TorsionClass.Z2


def _classify_unreduced(k: int) -> TorsionClass:
    # m^4 is a square, so -d square <=> -k square; d = 4 <=> k = 4 m^4
    if k > 0 and k % 4 == 0 and is_perfect_fourth_power(k // 4):
        return TorsionClass.Z4
    if is_perfect_square(-k):
        return TorsionClass.Z2xZ2
    return TorsionClass.Z2


def classify(k: int, budget: float = DEFAULT_FACTOR_BUDGET, seed: int = 0,
             cross_check: bool | None = None) -> TorsionClass:
    """Torsion class of y^2 = x^3 + k x.

    The exact square / fourth-power tests on ``k`` decide the trichotomy
    without factoring. With ``cross_check`` (default: only when k has at
    most CROSS_CHECK_BITS bits) k is also reduced to its fourth-power-free
    part and the two readings must agree.
    """
    k = int(k)
    if k == 0:
        raise ZeroCoefficient("y^2 = x^3 is singular")
    cls = _classify_unreduced(k)
    if cross_check is None:
        cross_check = k.bit_length() <= CROSS_CHECK_BITS
    if cross_check:
        reduced = fourth_power_free_part(k, budget=budget, seed=seed)
        if reduced is not None and _classify_reduced(reduced[0]) is not cls:
            raise InvariantError(f"torsion of {k} changed under the quartic twist")
    return cls


@dataclass(frozen=True)
class TorsionDiagnostics:
    s_real: bool
    four_s2_is_square: bool
    torsion: TorsionClass
    # True when "4S^2 square" and the reduced-coefficient criterion agree
    readings_agree: bool


def diagnostics(inst: FamilyInstance, budget: float = DEFAULT_FACTOR_BUDGET, seed: int = 0) -> TorsionDiagnostics:
    s_real = inst.sixteen_s2 > 0
    four_s2 = -inst.k
    square = s_real and is_perfect_square(four_s2)
    torsion = classify(inst.k, budget=budget, seed=seed)
    if not s_real and torsion is not TorsionClass.Z2:
        raise InvariantError(f"imaginary S but torsion {torsion.value} for {inst.solution}")
    agree = True
    if s_real:
        agree = square == (torsion is TorsionClass.Z2xZ2)
    return TorsionDiagnostics(s_real, square, torsion, agree)
