"""Stochastic mechanisms, their actual repertoires and effective information.

A mechanism is a row-stochastic matrix ``p(y|x)``. Observing output ``y``
induces a posterior over inputs under a uniform input prior; the effective
information of that observation is the KL divergence (bits) from the
uniform prior to the posterior.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import FalsifyError, UnknownOutput, ZeroProbabilityOutput


@dataclass(frozen=True)
class Mechanism:
    matrix: np.ndarray
    outputs: tuple

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] < 1:
            raise FalsifyError("mechanism matrix must be 2-d with at least one row")
        if mat.shape[1] != len(self.outputs):
            raise FalsifyError(f"{mat.shape[1]} columns but {len(self.outputs)} outputs")
        if len(set(self.outputs)) != len(self.outputs):
            raise FalsifyError("output alphabet has repeated values")
        if (mat < 0).any():
            raise FalsifyError("negative transition probability")
        bad = np.abs(mat.sum(axis=1) - 1.0) > 1e-12
        if bad.any():
            raise FalsifyError(f"row {int(np.argmax(bad))} does not sum to 1")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "outputs", tuple(self.outputs))

    @property
    def n_inputs(self) -> int:
        return self.matrix.shape[0]

    def column(self, y) -> np.ndarray:
        try:
            j = self.outputs.index(y)
        except ValueError:
            raise UnknownOutput(f"output {y!r} not in alphabet {list(self.outputs)}") from None
        return self.matrix[:, j]

    def to_json(self) -> dict:
        return {"outputs": list(self.outputs), "rows": self.matrix.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> Mechanism:
        try:
            return cls(np.asarray(obj["rows"], dtype=float), tuple(obj["outputs"]))
        except KeyError as e:
            raise FalsifyError(f"mechanism JSON missing key {e}") from None

    @classmethod
    def load(cls, path) -> Mechanism:
        with open(path) as f:
            return cls.from_json(json.load(f))


@dataclass(frozen=True)
class ActualRepertoire:
    posterior: np.ndarray
    output: Hashable

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.posterior > 0))


def output_marginal(mech: Mechanism, y) -> float:
    col = mech.column(y)
    return float(col.sum()) / mech.n_inputs


def actual_repertoire(mech: Mechanism, y) -> ActualRepertoire:
    col = mech.column(y)
    total = col.sum()
    if total <= 0:
        raise ZeroProbabilityOutput(f"output has zero probability: {y!r}")
    return ActualRepertoire(col / total, y)


def effective_information(mech: Mechanism, y) -> float:
    post = actual_repertoire(mech, y).posterior
    n = mech.n_inputs
    nz = post[post > 0]
    # 0 * log(0) terms dropped; the uniform reference is never zero
    ei = float(np.sum(nz * np.log2(nz * n)))
    return min(max(ei, 0.0), math.log2(n))


def from_function(f: Callable[[int], Hashable] | Sequence, n_inputs: int | None = None,
                  outputs: Sequence | None = None) -> Mechanism:
    """Deterministic mechanism from a total function on ``range(n_inputs)``.

    ``f`` may be a callable or a sequence of outputs indexed by input
    (a ``Hypothesis`` works directly).
    """
    if callable(f):
        if n_inputs is None:
            raise ValueError("n_inputs is required when f is callable")
        values = [f(x) for x in range(n_inputs)]
    else:
        values = list(getattr(f, "labels", f))
    if outputs is None:
        outputs = sorted(set(values), key=repr) if not _sortable(values) else sorted(set(values))
    outputs = tuple(outputs)
    col = {y: j for j, y in enumerate(outputs)}
    mat = np.zeros((len(values), len(outputs)))
    for x, y in enumerate(values):
        if y not in col:
            raise UnknownOutput(f"f({x}) = {y!r} not in output alphabet")
        mat[x, col[y]] = 1.0
    return Mechanism(mat, outputs)


def _sortable(values) -> bool:
    try:
        sorted(set(values))
    except TypeError:
        return False
    return True
