"""Falsification counts, capacity measures and risk bounds over finite hypothesis spaces."""

from .bounds import (
    BoundReport,
    Confidence,
    constants,
    ei_rademacher_bound,
    ei_vc_bound,
    rademacher_bound,
    vc_bound,
)
from .capacity import (
    CapacityReport,
    capacity_report,
    ei_min_risk,
    mml_length,
    rademacher_direct,
    rademacher_via_distribution,
    vc_entropy,
    vc_entropy_via_ei,
)
from .core import (
    M_CAP,
    Distribution,
    Hypothesis,
    InputSpace,
    Labels,
    Sample,
    enumerate_hypotheses,
    restrict,
    sample_iid,
)
from .learning import (
    L_CAP,
    MinRiskHistogram,
    Repertoire,
    RiskValue,
    dichotomies,
    empirical_risk,
    erm,
    min_risk,
    min_risk_histogram,
    rademacher_distribution,
    sigma_preimage_count,
)
from .mechanism import (
    ActualRepertoire,
    Mechanism,
    actual_repertoire,
    effective_information,
    from_function,
    output_marginal,
)

__version__ = "0.1.0"
