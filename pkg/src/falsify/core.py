"""Finite input spaces, sign-vector hypotheses, distributions and samples.

Hypotheses over ``X = {0, ..., m-1}`` are labelings in ``{-1, +1}^m``. The
canonical integer encoding is little-endian: bit ``i`` is set iff the label
at index ``i`` is ``+1``. Enumeration order is ascending code order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded, IndexOutOfRange, InvalidDistribution, LengthMismatch

M_CAP = 24


@dataclass(frozen=True)
class InputSpace:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"input space needs m >= 1, got {self.m}")

    def check_enumerable(self):
        if self.m > M_CAP:
            raise CapExceeded(f"m={self.m} exceeds enumeration cap {M_CAP}")


@dataclass(frozen=True)
class Hypothesis:
    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        if not labels:
            raise ValueError("hypothesis must label at least one point")
        if any(v not in (-1, 1) for v in labels):
            raise ValueError("labels must be -1 or +1")
        object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.labels)

    @property
    def code(self) -> int:
        return encode(self)

    def __neg__(self) -> Hypothesis:
        return Hypothesis(tuple(-v for v in self.labels))

    def __getitem__(self, i):
        return self.labels[i]

    def to_bitstring(self) -> str:
        return "".join("1" if v > 0 else "0" for v in self.labels)

    @classmethod
    def from_bitstring(cls, bits: str) -> Hypothesis:
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {bits!r}")
        return cls(tuple(1 if c == "1" else -1 for c in bits))

    @classmethod
    def from_code(cls, code: int, m: int) -> Hypothesis:
        return decode(code, m)


def encode(h: Hypothesis) -> int:
    code = 0
    for i, v in enumerate(h.labels):
        if v > 0:
            code |= 1 << i
    return code


def decode(code: int, m: int) -> Hypothesis:
    if code < 0 or code >> m:
        raise ValueError(f"code {code} does not fit in {m} bits")
    return Hypothesis(tuple(1 if (code >> i) & 1 else -1 for i in range(m)))


def constant(m: int, sign: int) -> Hypothesis:
    return Hypothesis((sign,) * m)


@dataclass(frozen=True)
class Distribution:
    """Probability vector over the input space.

    Entries may be floats or ``Fraction``; exact entries keep downstream risks
    exact.
    """

    probs: tuple

    def __post_init__(self):
        probs = tuple(self.probs)
        if not probs:
            raise InvalidDistribution("empty distribution")
        if any(p < 0 for p in probs):
            raise InvalidDistribution("negative probability")
        if abs(float(sum(probs)) - 1.0) > 1e-12:
            raise InvalidDistribution(f"probabilities sum to {float(sum(probs))!r}")
        object.__setattr__(self, "probs", probs)

    @property
    def m(self) -> int:
        return len(self.probs)

    @classmethod
    def uniform(cls, m: int) -> Distribution:
        return cls((Fraction(1, m),) * m)

    @classmethod
    def point_mass(cls, m: int, index: int) -> Distribution:
        return cls(tuple(Fraction(int(i == index)) for i in range(m)))

    def as_array(self) -> np.ndarray:
        p = np.array([float(v) for v in self.probs])
        return p / p.sum()


@dataclass(frozen=True)
class Sample:
    indices: tuple[int, ...]
    distinct: bool = field(init=False)

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        if not indices:
            raise ValueError("sample must contain at least one point")
        if any(i < 0 for i in indices):
            raise IndexOutOfRange("negative sample index")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "distinct", len(set(indices)) == len(indices))

    def __len__(self):
        return len(self.indices)

    @property
    def l(self) -> int:
        return len(self.indices)

    def distinct_points(self) -> tuple[int, ...]:
        """Distinct indices in order of first appearance."""
        return tuple(dict.fromkeys(self.indices))

    def check_space(self, m: int):
        if max(self.indices) >= m:
            raise IndexOutOfRange(f"sample index {max(self.indices)} outside space of size {m}")


@dataclass(frozen=True)
class Labels:
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if any(v not in (-1, 1) for v in values):
            raise ValueError("labels must be -1 or +1")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)


def enumerate_hypotheses(space: InputSpace) -> Iterator[Hypothesis]:
    space.check_enumerable()
    for code in range(1 << space.m):
        yield decode(code, space.m)


def sign_matrix(m: int) -> np.ndarray:
    """All ``2**m`` hypotheses as rows of an int8 sign matrix, in code order."""
    InputSpace(m).check_enumerable()
    codes = np.arange(1 << m, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(m)) & 1
    return (2 * bits - 1).astype(np.int8)


def restrict(h: Hypothesis, d: Sample) -> tuple[int, ...]:
    d.check_space(h.m)
    return tuple(h.labels[i] for i in d.indices)


def sample_iid(p: Distribution, l: int, seed: int) -> Sample:
    if l < 1:
        raise ValueError(f"sample length must be >= 1, got {l}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(p.m, size=l, p=p.as_array())
    return Sample(tuple(int(i) for i in idx))


def check_labels(d: Sample, lab: Labels | Sequence[int]):
    n = len(lab)
    if n != len(d):
        raise LengthMismatch(f"{n} labels for a sample of length {len(d)}")
