"""Repertoires, empirical risk minimization and the min-risk histogram.

The min-risk of a labeling ``sigma`` is the smallest number of sample
positions on which some member of the repertoire disagrees with ``sigma``.
``min_risk_histogram`` counts, per error count ``k``, the sign assignments to
the distinct sample points whose min-risk is ``k``. Every capacity measure
downstream is read off these exact integer counts.

Two exact routes fill the histogram:

* ``enumerate``: all ``2**d`` assignments, XOR against each distinct
  dichotomy, weighted popcount through byte tables, running minimum.
* ``chain``: when the distinct dichotomies are nested (thresholds and their
  sub-families), a dynamic program over the blocks of the chain. No cap on
  ``d``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import Hypothesis, InputSpace, Labels, Sample, check_labels, sign_matrix
from .errors import CapExceeded, FalsifyError, RequiresDistinctSample

L_CAP = 24


@dataclass(frozen=True, eq=False)
class Repertoire:
    """Ordered family of hypotheses stored as a ``(k, m)`` int8 sign matrix."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.int8)
        if mat.ndim != 2 or mat.shape[0] == 0 or mat.shape[1] == 0:
            raise FalsifyError("repertoire must be a nonempty 2-d sign matrix")
        if not np.isin(mat, (-1, 1)).all():
            raise FalsifyError("repertoire entries must be -1 or +1")
        mat = np.ascontiguousarray(mat)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_hypotheses(cls, members: Iterable[Hypothesis], name: str = "") -> Repertoire:
        members = list(members)
        if not members:
            raise FalsifyError("repertoire must be nonempty")
        if len({h.m for h in members}) != 1:
            raise FalsifyError("repertoire members live on different input spaces")
        return cls(np.array([h.labels for h in members], dtype=np.int8), name)

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def space(self) -> InputSpace:
        return InputSpace(self.m)

    def __len__(self):
        return self.matrix.shape[0]

    def __getitem__(self, i) -> Hypothesis:
        return Hypothesis(tuple(self.matrix[i].tolist()))

    @property
    def members(self) -> list[Hypothesis]:
        return [self[i] for i in range(len(self))]

    def __eq__(self, other):
        if not isinstance(other, Repertoire):
            return NotImplemented
        return self.name == other.name and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.name, self.matrix.tobytes()))

    def restricted(self, d: Sample) -> np.ndarray:
        d.check_space(self.m)
        return self.matrix[:, list(d.indices)]

    def to_json(self) -> dict:
        bits = np.where(self.matrix > 0, "1", "0")
        return {"m": self.m, "members": ["".join(row) for row in bits], "name": self.name}

    @classmethod
    def from_json(cls, obj: dict) -> Repertoire:
        try:
            m = int(obj["m"])
            members = [Hypothesis.from_bitstring(s) for s in obj["members"]]
        except KeyError as e:
            raise FalsifyError(f"repertoire JSON missing key {e}") from None
        if any(h.m != m for h in members):
            raise FalsifyError(f"member length differs from m={m}")
        return cls.from_hypotheses(members, obj.get("name", ""))

    @classmethod
    def load(cls, path) -> Repertoire:
        with open(path) as f:
            return cls.from_json(json.load(f))


@dataclass(frozen=True, order=True)
class RiskValue:
    """Exact empirical risk ``errors / sample_size``."""

    errors: int
    sample_size: int

    def __post_init__(self):
        if self.sample_size < 1 or not 0 <= self.errors <= self.sample_size:
            raise ValueError(f"invalid risk {self.errors}/{self.sample_size}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.errors, self.sample_size)

    def __float__(self):
        return self.errors / self.sample_size

    def __str__(self):
        return f"{self.errors}/{self.sample_size}"


@dataclass(frozen=True)
class MinRiskHistogram:
    counts: dict[int, int]
    l: int
    m: int
    distinct: bool
    n_distinct: int
    method: str = field(default="", compare=False)

    @property
    def pattern_universe(self) -> int:
        return 1 << self.n_distinct

    def count(self, k: int) -> int:
        return self.counts.get(k, 0)

    def levels(self) -> list[int]:
        return sorted(k for k, c in self.counts.items() if c > 0)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "m": self.m,
            "distinct": self.distinct,
            "counts": {str(k): c for k, c in sorted(self.counts.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> MinRiskHistogram:
        counts = {int(k): int(v) for k, v in obj["counts"].items()}
        total = sum(counts.values())
        n = total.bit_length() - 1
        if total != 1 << n:
            raise FalsifyError(f"histogram total {total} is not a power of two")
        if obj["distinct"] and n != obj["l"]:
            raise FalsifyError("distinct histogram must cover 2**l patterns")
        return cls(counts, int(obj["l"]), int(obj["m"]), bool(obj["distinct"]), n)


def _as_labels(lab: Labels | Sequence[int]) -> np.ndarray:
    values = lab.values if isinstance(lab, Labels) else tuple(lab)
    return np.asarray(values, dtype=np.int8)


def empirical_risk(f: Hypothesis, d: Sample, lab: Labels | Sequence[int]) -> RiskValue:
    check_labels(d, lab)
    d.check_space(f.m)
    y = _as_labels(lab)
    k = sum(int(f.labels[x] != yi) for x, yi in zip(d.indices, y))
    return RiskValue(k, len(d))


def _error_counts(F: Repertoire, d: Sample, lab) -> np.ndarray:
    check_labels(d, lab)
    return np.count_nonzero(F.restricted(d) != _as_labels(lab), axis=1)


def erm(F: Repertoire, d: Sample, lab: Labels | Sequence[int]) -> tuple[int, RiskValue]:
    """Member with minimal empirical risk; ties go to the lowest index."""
    errors = _error_counts(F, d, lab)
    j = int(np.argmin(errors))
    return j, RiskValue(int(errors[j]), len(d))


def min_risk(F: Repertoire, d: Sample, lab: Labels | Sequence[int]) -> RiskValue:
    return erm(F, d, lab)[1]


def _unique_rows(mat: np.ndarray) -> np.ndarray:
    """Distinct rows of a sign or bool matrix, via packed row keys."""
    bits = mat > 0
    n = bits.shape[1]
    if n <= 64:
        keys = (bits.astype(np.uint64) << np.arange(n, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)
    else:
        packed = np.ascontiguousarray(np.packbits(bits, axis=1))
        keys = packed.view(np.dtype((np.void, packed.shape[1]))).ravel()
    _, first = np.unique(keys, return_index=True)
    return mat[np.sort(first)]


def dichotomies(F: Repertoire, d: Sample) -> set[tuple[int, ...]]:
    return {tuple(int(v) for v in r) for r in _unique_rows(F.restricted(d))}


def dichotomy_count(F: Repertoire, d: Sample) -> int:
    return int(_unique_rows(F.restricted(d)).shape[0])


def _distinct_dichotomies(F: Repertoire, d: Sample):
    """Unique patterns on the distinct points, as bool (+1 -> True), with weights."""
    d.check_space(F.m)
    points = d.distinct_points()
    weights = np.array([d.indices.count(x) for x in points], dtype=np.int64)
    pats = _unique_rows(F.matrix[:, list(points)] > 0)
    return pats, weights


def _is_chain(pats: np.ndarray) -> bool:
    order = np.argsort(pats.sum(axis=1), kind="stable")
    p = pats[order]
    return bool(np.all(p[:-1] <= p[1:]))


def min_risk_histogram(F: Repertoire, d: Sample, method: str = "auto",
                       max_work: int | None = None) -> MinRiskHistogram:
    """Exact count of sign assignments per min-risk error count.

    ``method`` is ``"auto"``, ``"enumerate"`` or ``"chain"``. ``auto`` uses
    the chain program when the dichotomies are nested, enumeration otherwise.
    ``max_work`` caps ``2**d * (number of dichotomies)`` for enumeration.
    """
    pats, weights = _distinct_dichotomies(F, d)
    n = pats.shape[1]
    chain = _is_chain(pats)
    if method == "auto":
        method = "chain" if chain else "enumerate"
    if method == "chain":
        if not chain:
            raise FalsifyError("dichotomies are not nested; chain method unavailable")
        counts = _chain_counts(pats, weights)
    elif method == "enumerate":
        if n > L_CAP:
            raise CapExceeded(f"{n} distinct sample points exceed histogram cap {L_CAP}")
        if max_work is not None and (len(pats) << n) > max_work:
            raise CapExceeded(f"{len(pats)} dichotomies on {n} points exceed work budget {max_work}")
        counts = _enumerate_counts(pats, weights)
    else:
        raise ValueError(f"unknown method {method!r}")
    return MinRiskHistogram(counts, len(d), F.m, d.distinct, n, method)


def _pattern_codes(pats: np.ndarray) -> np.ndarray:
    shifts = np.arange(pats.shape[1], dtype=np.uint64)
    return (pats.astype(np.uint64) << shifts).sum(axis=1).astype(np.uint32)


def _enumerate_counts(pats: np.ndarray, weights: np.ndarray, chunk: int = 1 << 20) -> dict[int, int]:
    n = pats.shape[1]
    codes = _pattern_codes(pats)
    l = int(weights.sum())
    unit = bool(np.all(weights == 1))
    # byte tables: table[b][v] = weighted popcount of byte value v at byte position b
    tables = []
    for b in range(0, n, 8):
        w = np.zeros(8, dtype=np.int64)
        seg = weights[b:b + 8]
        w[:len(seg)] = seg
        v = np.arange(256)
        tables.append((((v[:, None] >> np.arange(8)) & 1) * w).sum(axis=1).astype(np.uint8))
    dtype = np.uint8 if l < 255 else np.uint16
    hist = np.zeros(l + 1, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, chunk):
        s = np.arange(start, min(total, start + chunk), dtype=np.uint32)
        best = np.full(s.shape, l, dtype=dtype)
        for c in codes:
            x = s ^ c
            if unit:
                err = np.bitwise_count(x).astype(dtype)
            else:
                err = np.zeros(s.shape, dtype=dtype)
                for b, t in enumerate(tables):
                    err += t[(x >> np.uint32(8 * b)) & np.uint32(0xFF)]
            np.minimum(best, err, out=best)
        hist += np.bincount(best, minlength=l + 1)
    return {k: int(c) for k, c in enumerate(hist) if c}


def _subset_sums(ws) -> dict[int, int]:
    dist = {0: 1}
    for w in ws:
        nxt: dict[int, int] = {}
        for a, c in dist.items():
            nxt[a] = nxt.get(a, 0) + c
            nxt[a + w] = nxt.get(a + w, 0) + c
        dist = nxt
    return dist


def _chain_counts(pats: np.ndarray, weights: np.ndarray) -> dict[int, int]:
    """Dynamic program for nested dichotomies ``S_1 < S_2 < ... < S_q``.

    Points are processed block by block (``S_1``, ``S_2 - S_1``, ...,
    complement of ``S_q``). The state is ``(best, minus)``: the minimum so
    far of each introduced member's errors on processed points, and the
    weight of processed points labelled -1. Unprocessed points lie outside
    every introduced member, so they add their +1 weight to ``best``.
    """
    order = np.argsort(pats.sum(axis=1), kind="stable")
    p = pats[order]
    ws = [int(w) for w in weights]
    total = sum(ws)
    blocks = []
    prev = np.zeros(p.shape[1], dtype=bool)
    for row in p:
        blocks.append(np.flatnonzero(row & ~prev))
        prev = row
    tail = np.flatnonzero(~prev)

    unset = total + 1
    states = {(unset, 0): 1}
    for blk in blocks:
        bw = sum(ws[i] for i in blk)
        nxt: dict[tuple[int, int], int] = {}
        for a, ca in _subset_sums(ws[i] for i in blk).items():
            b = bw - a
            for (best, minus), c in states.items():
                key = (min(best + a, minus + b), minus + b)
                nxt[key] = nxt.get(key, 0) + c * ca
        states = nxt
    hist: dict[int, int] = {}
    tail_dist = _subset_sums(ws[i] for i in tail)
    for (best, _), c in states.items():
        for a, ca in tail_dist.items():
            hist[best + a] = hist.get(best + a, 0) + c * ca
    return dict(sorted(hist.items()))


def _require_distinct(h: MinRiskHistogram):
    if not h.distinct:
        raise RequiresDistinctSample(
            "sample has repeated points; the labeling space no longer factors over the sample"
        )


def sigma_preimage_count(h: MinRiskHistogram, k: int) -> int:
    """Number of full labelings of X whose min-risk is ``k / l``."""
    _require_distinct(h)
    return h.count(k) << (h.m - h.l)


def rademacher_distribution(h: MinRiskHistogram) -> dict[Fraction, Fraction]:
    _require_distinct(h)
    return {Fraction(k, h.l): Fraction(h.counts[k], 1 << h.l) for k in h.levels()}



def min_risk_by_enumeration(F: Repertoire, space: InputSpace, d: Sample) -> dict[int, int]:
    """Oracle: number of labelings of X at each min-risk error count, over all ``2**m``."""
    space.check_enumerable()
    d.check_space(space.m)
    idx = list(d.indices)
    sig = sign_matrix(space.m)[:, idx]
    fd = F.matrix[:, idx]
    best = np.full(sig.shape[0], len(d), dtype=np.int64)
    for row in fd:
        np.minimum(best, np.count_nonzero(sig != row, axis=1), out=best)
    return {int(k): int(c) for k, c in enumerate(np.bincount(best)) if c}
