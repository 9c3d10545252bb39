"""Monte Carlo coverage harness for the four risk bounds.

A configuration fixes the input distribution, the supervisor and the
repertoire. Each trial draws an i.i.d. sample, labels it with the
supervisor, runs ERM, evaluates the exact true risk of the ERM output and
all four bound totals on the drawn sample, and records whether each bound
held. Trial ``i`` uses seed ``cfg.seed ^ i``.
"""

from __future__ import annotations

import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import bounds
from .capacity import ei_min_risk, rademacher_via_distribution, vc_entropy
from .core import Distribution, Hypothesis, InputSpace, Labels, Sample, restrict, sample_iid
from .errors import CapExceeded, InvalidSpec, SpaceMismatch
from .learning import MinRiskHistogram, Repertoire, RiskValue, erm, min_risk_histogram

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


# --- repertoire generators -------------------------------------------------

def thresholds(m: int) -> Repertoire:
    x = np.arange(m)
    mat = np.where(x[None, :] >= np.arange(m + 1)[:, None], 1, -1)
    return Repertoire(mat, "thresholds")


def intervals(m: int) -> Repertoire:
    x = np.arange(m)
    rows = [np.full(m, -1)]
    for a in range(m):
        for b in range(a + 1, m + 1):
            rows.append(np.where((x >= a) & (x < b), 1, -1))
    return Repertoire(np.array(rows), "intervals")


def random_k(k: int, m: int, seed: int) -> Repertoire:
    if k < 1:
        raise InvalidSpec("random-k needs k >= 1")
    if m < 63 and k > 1 << m:
        raise InvalidSpec(f"cannot draw {k} distinct hypotheses on {m} points")
    rng = np.random.default_rng(seed)
    if m <= 30:
        codes = rng.choice(1 << m, size=k, replace=False)
        mat = ((codes[:, None] >> np.arange(m)) & 1) * 2 - 1
    else:
        mat = rng.integers(0, 2, size=(k, m), dtype=np.int8) * 2 - 1
        _, first = np.unique(mat, axis=0, return_index=True)
        while len(first) < k:
            extra = rng.integers(0, 2, size=(k - len(first), m), dtype=np.int8) * 2 - 1
            mat = np.vstack([mat[np.sort(first)], extra])
            _, first = np.unique(mat, axis=0, return_index=True)
        mat = mat[np.sort(first)]
    return Repertoire(mat, f"random-{k}")


@dataclass(frozen=True)
class RepertoireSpec:
    kind: str
    k: int | None = None
    seed: int | None = None
    members: tuple[str, ...] | None = None

    def build(self, m: int) -> Repertoire:
        if self.kind == "thresholds":
            return thresholds(m)
        if self.kind == "intervals":
            return intervals(m)
        if self.kind == "random-k":
            if self.k is None or self.seed is None:
                raise InvalidSpec("random-k needs k and seed")
            return random_k(self.k, m, self.seed)
        if self.kind == "explicit":
            if not self.members:
                raise InvalidSpec("explicit repertoire needs members")
            F = Repertoire.from_hypotheses([Hypothesis.from_bitstring(s) for s in self.members], "explicit")
            if F.m != m:
                raise InvalidSpec(f"explicit members have length {F.m}, expected {m}")
            return F
        raise InvalidSpec(f"unknown repertoire kind {self.kind!r}")


def generate_repertoire(spec: RepertoireSpec | dict, m: int) -> Repertoire:
    if isinstance(spec, dict):
        spec = _repertoire_spec(spec)
    return spec.build(m)


@dataclass(frozen=True)
class SupervisorSpec:
    kind: str
    t: int | None = None
    seed: int | None = None
    labels: str | None = None

    def build(self, m: int) -> Hypothesis:
        if self.kind == "threshold":
            if self.t is None or not 0 <= self.t <= m:
                raise InvalidSpec("threshold supervisor needs 0 <= t <= m")
            return Hypothesis(tuple(1 if x >= self.t else -1 for x in range(m)))
        if self.kind == "random":
            if self.seed is None:
                raise InvalidSpec("random supervisor needs a seed")
            rng = np.random.default_rng(self.seed)
            return Hypothesis(tuple(int(v) for v in rng.integers(0, 2, size=m) * 2 - 1))
        if self.kind == "explicit":
            if self.labels is None or len(self.labels) != m:
                raise InvalidSpec(f"explicit supervisor needs a bitstring of length {m}")
            return Hypothesis.from_bitstring(self.labels)
        raise InvalidSpec(f"unknown supervisor kind {self.kind!r}")


# --- configuration ---------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    m: int
    repertoire: RepertoireSpec
    supervisor: SupervisorSpec
    l: int
    trials: int = 1000
    delta: float = 0.05
    seed: int = 0
    distribution: str | tuple[float, ...] = "uniform"
    # negative-control hook; 1.0 in every real run
    c1_scale: float = 1.0

    def __post_init__(self):
        if self.m < 1 or self.l < 1 or self.trials < 1:
            raise InvalidSpec("m, l and trials must all be >= 1")
        bounds.Confidence(self.delta)
        if not isinstance(self.distribution, str):
            if len(self.distribution) != self.m:
                raise InvalidSpec(f"distribution has {len(self.distribution)} entries, expected {self.m}")
        elif self.distribution != "uniform":
            raise InvalidSpec(f"unknown distribution {self.distribution!r}")

    def to_json(self) -> dict:
        out = asdict(self)
        out["repertoire"] = {k: v for k, v in out["repertoire"].items() if v is not None}
        out["supervisor"] = {k: v for k, v in out["supervisor"].items() if v is not None}
        if "members" in out["repertoire"]:
            out["repertoire"]["members"] = list(out["repertoire"]["members"])
        if not isinstance(self.distribution, str):
            out["distribution"] = list(self.distribution)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> ExperimentConfig:
        obj = dict(obj)
        try:
            obj["repertoire"] = _repertoire_spec(obj["repertoire"])
            obj["supervisor"] = _supervisor_spec(obj["supervisor"])
        except KeyError as e:
            raise InvalidSpec(f"config missing {e}") from None
        if isinstance(obj.get("distribution"), list):
            obj["distribution"] = tuple(float(p) for p in obj["distribution"])
        try:
            return cls(**obj)
        except TypeError as e:
            raise InvalidSpec(str(e)) from None

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        path = Path(path)
        if path.suffix == ".toml":
            with open(path, "rb") as f:
                return cls.from_json(tomllib.load(f))
        with open(path) as f:
            return cls.from_json(json.load(f))


def _repertoire_spec(obj) -> RepertoireSpec:
    if isinstance(obj, str):
        return RepertoireSpec(obj)
    obj = dict(obj)
    if "members" in obj:
        obj["members"] = tuple(obj["members"])
    try:
        return RepertoireSpec(**obj)
    except TypeError as e:
        raise InvalidSpec(str(e)) from None


def _supervisor_spec(obj) -> SupervisorSpec:
    try:
        return SupervisorSpec(**obj)
    except TypeError as e:
        raise InvalidSpec(str(e)) from None


@dataclass(frozen=True)
class Setup:
    space: InputSpace
    distribution: Distribution
    supervisor: Hypothesis
    repertoire: Repertoire
    consts: bounds.Constants


@lru_cache(maxsize=8)
def prepare(cfg: ExperimentConfig) -> Setup:
    if cfg.distribution == "uniform":
        p = Distribution.uniform(cfg.m)
    else:
        p = Distribution(cfg.distribution)
    return Setup(
        InputSpace(cfg.m),
        p,
        cfg.supervisor.build(cfg.m),
        cfg.repertoire.build(cfg.m),
        bounds.constants().scaled(c1=cfg.c1_scale),
    )


# --- trials ----------------------------------------------------------------

def true_risk(f: Hypothesis, supervisor: Hypothesis, p: Distribution):
    if not f.m == supervisor.m == p.m:
        raise SpaceMismatch(f"spaces differ: {f.m}, {supervisor.m}, {p.m}")
    return sum((q for a, b, q in zip(f.labels, supervisor.labels, p.probs) if a != b), Fraction(0))


@dataclass
class TrialRecord:
    trial: int
    seed: int
    sample: tuple[int, ...]
    labels: tuple[int, ...]
    erm_index: int
    empirical: RiskValue
    true_risk: Fraction | float
    distinct: bool
    totals: dict[str, float | None] = field(default_factory=dict)

    @property
    def held(self) -> dict[str, bool | None]:
        return {k: (None if t is None else self.true_risk <= t) for k, t in self.totals.items()}

    def csv_row(self) -> dict:
        row = {
            "trial": self.trial,
            "seed": self.seed,
            "emp_k": self.empirical.errors,
            "emp_l": self.empirical.sample_size,
            "true_risk": _fmt(self.true_risk),
            "distinct": int(self.distinct),
            "erm_index": self.erm_index,
        }
        for k in bounds.KINDS:
            t = self.totals.get(k)
            row[f"bound_{k}"] = "" if t is None else repr(t)
        for k, h in self.held.items():
            row[f"held_{k}"] = "" if h is None else int(h)
        return row


CSV_FIELDS = (
    ["trial", "seed", "emp_k", "emp_l", "true_risk"]
    + [f"bound_{k}" for k in bounds.KINDS]
    + [f"held_{k}" for k in bounds.KINDS]
    + ["distinct", "erm_index"]
)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


HIST_WORK_CAP = 1 << 28


def _histogram(F: Repertoire, d: Sample) -> MinRiskHistogram | None:
    try:
        return min_risk_histogram(F, d, max_work=HIST_WORK_CAP)
    except CapExceeded:
        return None


def run_trial(cfg: ExperimentConfig, trial_seed: int, trial: int = 0) -> TrialRecord:
    s = prepare(cfg)
    F, conf, c = s.repertoire, bounds.Confidence(cfg.delta), s.consts
    d = sample_iid(s.distribution, cfg.l, trial_seed)
    lab = Labels(restrict(s.supervisor, d))
    j, emp = erm(F, d, lab)
    rec = TrialRecord(
        trial=trial,
        seed=trial_seed,
        sample=d.indices,
        labels=lab.values,
        erm_index=j,
        empirical=emp,
        true_risk=true_risk(F[j], s.supervisor, s.distribution),
        distinct=d.distinct,
    )
    l = cfg.l
    rec.totals["vc"] = bounds.vc_bound(emp, vc_entropy(F, d), l, conf, c).total
    h = _histogram(F, d)
    # histograms beyond the enumeration cap leave the histogram-based bounds not applicable
    if h is not None:
        rec.totals["rademacher"] = bounds.rademacher_bound(emp, rademacher_via_distribution(h), l, conf, c).total
    else:
        rec.totals["rademacher"] = None
    if h is not None and d.distinct:
        rec.totals["ei_vc"] = bounds.ei_vc_bound(emp, ei_min_risk(h, 0), l, conf, c).total
        rec.totals["ei_rademacher"] = bounds.ei_rademacher_bound(emp, h, conf, c).total
    else:
        rec.totals["ei_vc"] = None
        rec.totals["ei_rademacher"] = None
    return rec


# --- aggregation -----------------------------------------------------------

@dataclass
class BoundCoverage:
    trials: int = 0
    violations: int = 0
    slack_sum: float = 0.0
    vacuous: int = 0

    @property
    def coverage(self) -> float | None:
        return None if self.trials == 0 else 1 - self.violations / self.trials

    @property
    def mean_slack(self) -> float | None:
        return None if self.trials == 0 else self.slack_sum / self.trials

    @property
    def vacuous_fraction(self) -> float | None:
        return None if self.trials == 0 else self.vacuous / self.trials

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "violations": self.violations,
            "coverage": self.coverage,
            "mean_slack": self.mean_slack,
            "vacuous_fraction": self.vacuous_fraction,
        }


@dataclass
class CoverageSummary:
    trials: int
    delta: float
    per_bound: dict[str, BoundCoverage]
    mean_true_risk: float
    mean_empirical_risk: float

    def ok(self) -> bool:
        """Every applicable bound held in at least a ``1 - delta`` fraction of trials."""
        return all(b.coverage is None or b.coverage >= 1 - self.delta for b in self.per_bound.values())

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "delta": self.delta,
            "mean_true_risk": self.mean_true_risk,
            "mean_empirical_risk": self.mean_empirical_risk,
            "bounds": {k: v.to_json() for k, v in self.per_bound.items()},
            "ok": self.ok(),
        }


def summarize(records: list[TrialRecord], delta: float) -> CoverageSummary:
    per = {k: BoundCoverage() for k in bounds.KINDS}
    for r in records:
        tr = float(r.true_risk)
        for k, t in r.totals.items():
            if t is None:
                continue
            b = per[k]
            b.trials += 1
            b.violations += int(not r.true_risk <= t)
            b.slack_sum += t - tr
            b.vacuous += int(t >= 1)
    n = len(records)
    return CoverageSummary(
        trials=n,
        delta=delta,
        per_bound=per,
        mean_true_risk=sum(float(r.true_risk) for r in records) / n,
        mean_empirical_risk=sum(float(r.empirical) for r in records) / n,
    )


def _run_chunk(cfg: ExperimentConfig, trials: list[int]) -> list[TrialRecord]:
    return [run_trial(cfg, cfg.seed ^ i, i) for i in trials]


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> tuple[CoverageSummary, list[TrialRecord]]:
    idx = list(range(cfg.trials))
    if workers <= 1:
        records = _run_chunk(cfg, idx)
    else:
        chunks = [idx[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_run_chunk, [cfg] * workers, chunks))
        records = sorted((r for p in parts for r in p), key=lambda r: r.trial)
    return summarize(records, cfg.delta), records


# --- output ----------------------------------------------------------------

def write_trial_log(records: list[TrialRecord], path):
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow(r.csv_row())


def write_summary(summary: CoverageSummary, cfg: ExperimentConfig, path):
    with open(path, "w") as f:
        json.dump({"config": cfg.to_json(), "summary": summary.to_json()}, f, indent=2, sort_keys=True)
        f.write("\n")


def write_plot_data(rows: list[dict], path):
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["bound", "l", "mean_bound", "mean_true_risk"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def plot_rows(records: list[TrialRecord], l: int) -> list[dict]:
    """Mean bound total and mean true risk per bound kind over applicable trials."""
    rows = []
    for k in bounds.KINDS:
        used = [r for r in records if r.totals.get(k) is not None]
        if not used:
            continue
        rows.append({
            "bound": k,
            "l": l,
            "mean_bound": repr(sum(r.totals[k] for r in used) / len(used)),
            "mean_true_risk": repr(sum(float(r.true_risk) for r in used) / len(used)),
        })
    return rows
