"""Explicit phase data theta(s, a) realising a chosen statistics class.

This is a falsification harness: phases are floats, and every check is up to
a tolerance. Exact class arithmetic stays in linalg.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .linalg import SmithDecomposition
from .model import ExcitationModel, ThetaVector, Word, evaluate_word

TAU = 2 * math.pi
DEFORMATIONS = ("state-phase", "unitary-phase", "local-vertex")


@dataclass(frozen=True)
class PhaseAssignment:
    theta: np.ndarray                    # one phase per theta column, radians
    class_choice: tuple[int, ...] = ()   # k_i per torsion factor
    seed: int | None = None
    model: ExcitationModel | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        if self.model is not None:
            labels = [self.model.describe_column(c) for c in range(len(self.theta))]
        else:
            labels = [str(c) for c in range(len(self.theta))]
        return {
            "seed": self.seed,
            "class_choice": list(self.class_choice),
            "theta": {lab: float(x) for lab, x in zip(labels, self.theta)},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def sample_assignment(decomp: SmithDecomposition, class_choice: Sequence[int] | Mapping[int, int],
                      seed: int | None = 0, model: ExcitationModel | None = None) -> PhaseAssignment:
    """theta = R^-1 phi with phi fixed on torsion factors and random on free ones.

    ``class_choice`` lists k_i for each torsion factor in order (or maps
    theta' positions to k_i; missing factors get 0).
    """
    pos = decomp.torsion_positions
    if isinstance(class_choice, Mapping):
        unknown = set(class_choice) - set(pos)
        if unknown:
            raise ValueError(f"positions {sorted(unknown)} are not torsion factors")
        ks = [int(class_choice.get(i, 0)) for i in pos]
    else:
        ks = [int(k) for k in class_choice]
        if len(ks) != len(pos):
            raise ValueError(f"expected {len(pos)} class coordinates, got {len(ks)}")
    for i, k in zip(pos, ks):
        if not 0 <= k < decomp.diag[i]:
            raise ValueError(f"class {k} out of range for a factor of order {decomp.diag[i]}")
    rng = np.random.default_rng(seed)
    phi = np.zeros(decomp.ncols)
    free = decomp.free_positions
    phi[free] = rng.uniform(0.0, TAU, size=len(free))
    for i, k in zip(pos, ks):
        phi[i] = TAU * k / decomp.diag[i]
    theta = np.asarray(decomp.apply_R_inv(phi.tolist()))
    return PhaseAssignment(theta, tuple(ks), seed, model)


def _model(assignment: PhaseAssignment, m: ExcitationModel | None) -> ExcitationModel:
    m = m or assignment.model
    if m is None:
        raise ValueError("this operation needs the excitation model")
    return m


def deform(assignment: PhaseAssignment, kind: str, rng: np.random.Generator | int | None = None,
           m: ExcitationModel | None = None, scale: float = TAU) -> PhaseAssignment:
    """Shift the phases by a random gauge transformation of the given kind.

    state-phase:   theta(s,a) += phi(a + ds) - phi(a)
    unitary-phase: theta(s,a) += phi(s)
    local-vertex:  theta(s,a) += sum over vertices v of s of phi_{s,v}(a restricted to v)
    """
    m = _model(assignment, m)
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    nS, nA = m.n_generators, m.n_configs
    theta = assignment.theta.reshape(nS, nA).copy()
    if kind == "state-phase":
        phi = rng.uniform(0.0, scale, size=nA)
        theta += phi[m.step] - phi[None, :]
    elif kind == "unitary-phase":
        theta += rng.uniform(0.0, scale, size=(nS, 1))
    elif kind == "local-vertex":
        for s, by_vertex in m.vertex_restriction_keys.items():
            for key in by_vertex.values():
                phi = rng.uniform(0.0, scale, size=int(key.max()) + 1)
                theta[s] += phi[key]
    else:
        raise ValueError(f"unknown deformation {kind!r}; expected one of {DEFORMATIONS}")
    return PhaseAssignment(theta.reshape(-1), assignment.class_choice, assignment.seed, m)


def evaluate(assignment: PhaseAssignment, v: ThetaVector | Word, m: ExcitationModel | None = None) -> float:
    """sum eps(s,a) theta(s,a) reduced to [0, 2pi)."""
    if isinstance(v, Word):
        v, _ = evaluate_word(_model(assignment, m), v)
    total = math.fsum(c * float(assignment.theta[col]) for col, c in v.items())
    return total % TAU


def evaluate_raw(assignment: PhaseAssignment, v: ThetaVector) -> float:
    return math.fsum(c * float(assignment.theta[col]) for col, c in v.items())


def angle_distance(x: float, y: float) -> float:
    """Distance between two angles on the circle."""
    d = (x - y) % TAU
    return min(d, TAU - d)
