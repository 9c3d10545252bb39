"""Right-hand sides of the VC, Rademacher and falsification-count risk bounds.

Every bound is ``empirical + capacity + confidence``. The confidence term
is ``c * sqrt((1 - log2(delta)) / l)`` with base-2 logarithms throughout.
Totals are reported unclamped; ``vacuous`` flags ``total >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import EiExceedsL, InvalidConfidence
from .learning import MinRiskHistogram, RiskValue

KINDS = ("vc", "rademacher", "ei_vc", "ei_rademacher")


@dataclass(frozen=True)
class Constants:
    c1: float
    c2: float
    c3: float

    def scaled(self, c1: float = 1.0, c2: float = 1.0, c3: float = 1.0) -> Constants:
        return Constants(self.c1 * c1, self.c2 * c2, self.c3 * c3)


def constants() -> Constants:
    log2e = math.log2(math.e)
    return Constants(math.sqrt(6 / log2e), math.sqrt(1 / log2e), math.sqrt(2 / log2e))


@dataclass(frozen=True)
class Confidence:
    delta: float

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise InvalidConfidence(f"delta must lie in (0, 1), got {self.delta}")

    def term(self, l: int) -> float:
        return math.sqrt((1 - math.log2(self.delta)) / l)


@dataclass(frozen=True)
class BoundReport:
    kind: str
    empirical_term: Fraction
    capacity_term: float
    confidence_term: float
    total: float
    capacity_exact: Fraction | None = None

    @property
    def vacuous(self) -> bool:
        return self.total >= 1

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "empirical_term": str(self.empirical_term),
            "capacity_term": self.capacity_term,
            "confidence_term": self.confidence_term,
            "total": self.total,
            "vacuous": self.vacuous,
        }
        if self.capacity_exact is not None:
            out["capacity_exact"] = str(self.capacity_exact)
        return out


def _conf(conf: Confidence | float) -> Confidence:
    return conf if isinstance(conf, Confidence) else Confidence(conf)


def _emp(emp: RiskValue | Fraction) -> Fraction:
    return emp.value if isinstance(emp, RiskValue) else Fraction(emp)


def _report(kind, emp, cap, conf_term, cap_exact=None) -> BoundReport:
    total = float(emp) + cap + conf_term
    return BoundReport(kind, emp, cap, conf_term, total, cap_exact)


def vc_bound(emp, V: float, l: int, conf, consts: Constants | None = None) -> BoundReport:
    c = consts or constants()
    conf = _conf(conf)
    if V < 0 or l < 1:
        raise ValueError(f"need V >= 0 and l >= 1, got V={V}, l={l}")
    return _report("vc", _emp(emp), c.c1 * math.sqrt(V / l), c.c2 * conf.term(l))


def rademacher_bound(emp, R: Fraction | float, l: int, conf, consts: Constants | None = None) -> BoundReport:
    c = consts or constants()
    conf = _conf(conf)
    if not -1 <= R <= 1:
        raise ValueError(f"Rademacher complexity {R} outside [-1, 1]")
    exact = R if isinstance(R, Fraction) else None
    return _report("rademacher", _emp(emp), float(R), c.c3 * conf.term(l), exact)


def ei_vc_bound(emp, ei0: float, l: int, conf, consts: Constants | None = None) -> BoundReport:
    c = consts or constants()
    conf = _conf(conf)
    if ei0 > l:
        raise EiExceedsL(f"ei={ei0} exceeds sample length {l}")
    if ei0 < 0:
        raise ValueError(f"negative effective information {ei0}")
    cap = c.c1 * math.sqrt(max(0.0, 1 - ei0 / l))
    return _report("ei_vc", _emp(emp), cap, c.c2 * conf.term(l))


def falsification_weights(h: MinRiskHistogram) -> dict[int, Fraction]:
    """``2**-ei`` at each produced level, as exact fractions of the labelings."""
    return {k: Fraction(h.counts[k], h.pattern_universe) for k in h.levels()}


def ei_rademacher_capacity(h: MinRiskHistogram) -> Fraction:
    return 1 - 2 * sum(Fraction(k, h.l) * w for k, w in falsification_weights(h).items())


def ei_rademacher_bound(emp, h: MinRiskHistogram, conf, consts: Constants | None = None) -> BoundReport:
    c = consts or constants()
    conf = _conf(conf)
    cap = ei_rademacher_capacity(h)
    return _report("ei_rademacher", _emp(emp), float(cap), c.c3 * conf.term(h.l), cap)


__all__ = [
    "KINDS",
    "BoundReport",
    "Confidence",
    "Constants",
    "constants",
    "ei_rademacher_bound",
    "ei_rademacher_capacity",
    "ei_vc_bound",
    "falsification_weights",
    "rademacher_bound",
    "vc_bound",
]
