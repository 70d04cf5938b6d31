"""Sequential query protocols and their simulation.

A protocol interleaves T queries to an unknown unitary with T+1 fixed
unitaries on system+ancilla, starting from a fixed probe state. Running
it against both candidate unitaries side by side yields the per-step
trace distances that every bound audit in the toolkit consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ShapeError, ValidationError
from .geometry import fidelity_closed_form, trace_distance_pure
from .linalg import DIM_CAP, require_normalized, require_unitary

# Per-step growth allowance for the distance audit.
AUDIT_TOL = 1e-9


@dataclass(eq=False)
class Protocol:
    """A fixed discrimination procedure: probe, interleavers, query count.

    Interleavers act on the full system*ancilla space; the queried unitary
    acts on the system factor only. ``interleavers[0]`` is applied before
    the first query and ``interleavers[T]`` after the last one.
    """

    system_dim: int
    ancilla_dim: int
    queries: int
    interleavers: list[np.ndarray]
    probe: np.ndarray

    def __post_init__(self):
        if self.system_dim < 1 or self.ancilla_dim < 1:
            raise ValidationError("system and ancilla dimensions must be >= 1")
        if self.queries < 0:
            raise ValidationError("query count must be nonnegative")
        total = self.system_dim * self.ancilla_dim
        if total > DIM_CAP:
            raise CapacityError(f"system*ancilla dimension {total} exceeds cap {DIM_CAP}")
        if len(self.interleavers) != self.queries + 1:
            raise ValidationError(
                f"need {self.queries + 1} interleavers for {self.queries} queries, "
                f"got {len(self.interleavers)}"
            )
        self.interleavers = [
            require_unitary(w, name=f"interleaver {k}") for k, w in enumerate(self.interleavers)
        ]
        for k, w in enumerate(self.interleavers):
            if w.shape[0] != total:
                raise ShapeError(f"interleaver {k} has dimension {w.shape[0]}, expected {total}")
        self.probe = require_normalized(self.probe, name="probe")
        if self.probe.shape[0] != total:
            raise ShapeError(f"probe has dimension {self.probe.shape[0]}, expected {total}")

    @property
    def total_dim(self) -> int:
        return self.system_dim * self.ancilla_dim


@dataclass(eq=False)
class SimulationTrace:
    """States and distances recorded while running one protocol on both candidates.

    ``states_1[k]`` / ``states_2[k]`` are the states after interleaver k;
    ``distances[k]`` is their trace distance, so ``distances[0]`` is always 0
    and ``distances[T]`` equals 2*sqrt(1 - final_overlap^2).
    """

    states_1: list[np.ndarray]
    states_2: list[np.ndarray]
    distances: list[float]
    final_overlap: float

    @property
    def queries(self) -> int:
        return len(self.distances) - 1


def apply_query(state: np.ndarray, u: np.ndarray, system_dim: int, ancilla_dim: int) -> np.ndarray:
    """Apply U on the system factor of a system*ancilla state vector."""
    return (u @ state.reshape(system_dim, ancilla_dim)).ravel()


def run_protocol(u1, u2, protocol: Protocol) -> SimulationTrace:
    """Run the protocol against both candidate unitaries and record the trace.

    Evolution per branch i: state_0 = W_0 |probe>, then
    state_{k+1} = W_{k+1} (U_i x I) state_k for k = 0..T-1.
    """
    a = require_unitary(u1, name="u1")
    b = require_unitary(u2, name="u2")
    d = protocol.system_dim
    if a.shape[0] != d or b.shape[0] != d:
        raise ShapeError(
            f"candidate unitaries have dimension {a.shape[0]}/{b.shape[0]}, "
            f"protocol expects {d}"
        )

    anc = protocol.ancilla_dim
    s1 = protocol.interleavers[0] @ protocol.probe
    s2 = protocol.interleavers[0] @ protocol.probe
    states_1, states_2 = [s1], [s2]
    distances = [trace_distance_pure(s1, s2)]
    for k in range(protocol.queries):
        w = protocol.interleavers[k + 1]
        s1 = w @ apply_query(s1, a, d, anc)
        s2 = w @ apply_query(s2, b, d, anc)
        states_1.append(s1)
        states_2.append(s2)
        distances.append(trace_distance_pure(s1, s2))

    return SimulationTrace(states_1, states_2, distances, _overlap_for(s1, s2, distances[-1]))


def _overlap_for(s1: np.ndarray, s2: np.ndarray, distance: float) -> float:
    """Final overlap consistent with the recorded distance at the parallel end."""
    if distance < 1e-12:
        return 1.0
    return min(1.0, float(abs(np.vdot(s1, s2))))


def audit_step_slacks(trace: SimulationTrace, theta: float) -> list[float]:
    """Per-step slack of the distance-growth bound along a trace.

    Each query can grow the trace distance by at most 2*sqrt(1 - F^2)
    with F the fidelity at spread theta; returns
    D_k + 2*sqrt(1 - F^2) - D_{k+1} for every step, all of which must be
    >= -1e-9 on a correct simulation.
    """
    if len(trace.distances) != len(trace.states_1) or len(trace.distances) != len(trace.states_2):
        raise ShapeError("trace distances and state lists are inconsistent")
    f = fidelity_closed_form(theta)
    step = 2.0 * np.sqrt(max(0.0, 1.0 - f * f))
    d = trace.distances
    return [float(d[k] + step - d[k + 1]) for k in range(len(d) - 1)]
