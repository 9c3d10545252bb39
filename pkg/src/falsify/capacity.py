"""Capacity measures of a repertoire on a sample.

VC-entropy and Rademacher complexity are each computed two ways: directly
from their definitions, and from the min-risk histogram. The histogram
routes are what production code uses; the direct routes are oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import InputSpace, Sample, sign_matrix
from .errors import EmptyLevel, NoPerfectFit, RequiresDistinctSample
from .learning import MinRiskHistogram, Repertoire, dichotomy_count, min_risk_histogram


def vc_entropy(F: Repertoire, d: Sample) -> float:
    """log2 of the number of distinct dichotomies ``F`` realizes on ``d``."""
    return math.log2(dichotomy_count(F, d))


def ei_min_risk(h: MinRiskHistogram, k: int) -> float:
    """Bits of labelings ruled out when the min-risk outputs ``k / l``.

    ``m - log2(|preimage|)`` with ``|preimage| = counts[k] * 2**(m - l)``,
    which reduces to ``l - log2(counts[k])``.
    """
    if not h.distinct:
        raise RequiresDistinctSample("effective information of the min-risk needs a distinct sample")
    c = h.count(k)
    if c == 0:
        raise EmptyLevel(f"min-risk level {k}/{h.l} is never produced")
    return h.l - math.log2(c)


def vc_entropy_via_ei(h: MinRiskHistogram) -> float:
    return h.l - ei_min_risk(h, 0)


def rademacher_direct(F: Repertoire, space: InputSpace, d: Sample) -> Fraction:
    """Average over all labelings of X of the best correlation any member achieves.

    Oracle: enumerates ``2**m`` labelings, so ``m`` is capped.
    """
    space.check_enumerable()
    d.check_space(space.m)
    idx = list(d.indices)
    sigma_d = sign_matrix(space.m)[:, idx].astype(np.int32)
    corr = sigma_d @ F.matrix[:, idx].astype(np.int32).T
    total = int(corr.max(axis=1).sum())
    return Fraction(total, (1 << space.m) * len(d))


def expected_min_risk(h: MinRiskHistogram) -> Fraction:
    num = sum(c * k for k, c in h.counts.items())
    return Fraction(num, h.pattern_universe * h.l)


def rademacher_via_distribution(h: MinRiskHistogram) -> Fraction:
    return 1 - 2 * expected_min_risk(h)


def mml_preimage_count(F: Repertoire, d: Sample, space: InputSpace) -> int:
    """Integer under the log of the code length: ``|q_D(F)| * 2**(m - l)``."""
    if not d.distinct:
        raise RequiresDistinctSample("code length needs a distinct sample")
    return dichotomy_count(F, d) << (space.m - len(d))


def mml_length(F: Repertoire, d: Sample, space: InputSpace, h: MinRiskHistogram | None = None) -> float:
    """Length in bits of the true labeling in the optimal code for the zero-risk posterior.

    Pass ``h`` to check that a perfect fit is observable; otherwise it is
    computed.
    """
    if not d.distinct:
        raise RequiresDistinctSample("code length needs a distinct sample")
    if h is None:
        h = min_risk_histogram(F, d)
    if h.count(0) == 0:
        raise NoPerfectFit("no labeling is fit perfectly")
    return math.log2(mml_preimage_count(F, d, space))


@dataclass
class CapacityReport:
    l: int
    m: int
    dichotomies: int
    vc_entropy_bits: float
    rademacher: Fraction
    ei_zero_bits: float | None = None
    mml_length_bits: float | None = None
    ei_levels: dict[int, float] = field(default_factory=dict)
    histogram: dict[int, int] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    @property
    def falsified_bits(self) -> float | None:
        return self.ei_zero_bits

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "m": self.m,
            "dichotomies": self.dichotomies,
            "vc_entropy_bits": self.vc_entropy_bits,
            "ei_zero_bits": self.ei_zero_bits,
            "falsified_bits": self.falsified_bits,
            "rademacher": str(self.rademacher),
            "rademacher_float": float(self.rademacher),
            "mml_length_bits": self.mml_length_bits,
            "ei_levels": {str(k): v for k, v in self.ei_levels.items()},
            "histogram": {str(k): v for k, v in self.histogram.items()},
            "provenance": self.provenance,
        }


def capacity_report(F: Repertoire, d: Sample, space: InputSpace | None = None) -> CapacityReport:
    space = space or F.space
    h = min_risk_histogram(F, d)
    rep = CapacityReport(
        l=len(d),
        m=space.m,
        dichotomies=dichotomy_count(F, d),
        vc_entropy_bits=vc_entropy(F, d),
        rademacher=rademacher_via_distribution(h),
        histogram=dict(h.counts),
        provenance={
            "vc_entropy_bits": "dichotomy count",
            "rademacher": f"min-risk distribution ({h.method})",
        },
    )
    if d.distinct:
        rep.ei_levels = {k: ei_min_risk(h, k) for k in h.levels()}
        rep.ei_zero_bits = ei_min_risk(h, 0)
        rep.mml_length_bits = mml_length(F, d, space, h)
        rep.provenance["ei_zero_bits"] = f"min-risk histogram ({h.method})"
        rep.provenance["mml_length_bits"] = "dichotomy count + (m - l)"
    return rep
