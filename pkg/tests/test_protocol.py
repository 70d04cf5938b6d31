import numpy as np
import pytest

from qudisc import (
    CapacityError,
    Protocol,
    ShapeError,
    ValidationError,
    audit_step_slacks,
    fidelity_closed_form,
    haar_unitary_from_rng,
    relative_spectrum,
    run_protocol,
    smallest_arc,
)
from qudisc.linalg import random_state_from_rng

I2 = np.eye(2, dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


def identity_protocol(queries, dim=2):
    return Protocol(
        system_dim=dim,
        ancilla_dim=1,
        queries=queries,
        interleavers=[np.eye(dim, dtype=complex) for _ in range(queries + 1)],
        probe=PLUS.copy(),
    )


def random_protocol(rng, system_dim=2, ancilla_dim=2, queries=None):
    if queries is None:
        queries = int(rng.integers(1, 6))
    total = system_dim * ancilla_dim
    return Protocol(
        system_dim=system_dim,
        ancilla_dim=ancilla_dim,
        queries=queries,
        interleavers=[haar_unitary_from_rng(total, rng) for _ in range(queries + 1)],
        probe=random_state_from_rng(total, rng),
    )


class TestRunProtocol:
    def test_single_query_identity_vs_z(self):
        trace = run_protocol(I2, Z, identity_protocol(1))
        assert trace.distances[0] == 0.0
        assert trace.distances[1] == pytest.approx(2.0, abs=1e-12)
        assert trace.final_overlap == pytest.approx(0.0, abs=1e-12)

    def test_identical_unitaries_never_separate(self):
        rng = np.random.default_rng(21)
        u = haar_unitary_from_rng(2, rng)
        trace = run_protocol(u, u, random_protocol(rng))
        assert all(d == 0.0 for d in trace.distances)
        assert trace.final_overlap == 1.0

    def test_two_queries_of_an_eighth_turn(self):
        u2 = np.diag([1.0, np.exp(1j * np.pi / 4)])
        trace = run_protocol(I2, u2, identity_protocol(2))
        assert trace.final_overlap == pytest.approx(np.sqrt(2) / 2, abs=1e-12)

    def test_zero_queries(self):
        trace = run_protocol(I2, Z, identity_protocol(0))
        assert trace.distances == [0.0]
        assert trace.final_overlap == 1.0

    def test_final_distance_matches_overlap(self):
        rng = np.random.default_rng(22)
        for _ in range(50):
            u1 = haar_unitary_from_rng(2, rng)
            u2 = haar_unitary_from_rng(2, rng)
            trace = run_protocol(u1, u2, random_protocol(rng))
            expected = 2.0 * np.sqrt(1.0 - trace.final_overlap**2)
            assert trace.distances[-1] == pytest.approx(expected, abs=1e-9)

    def test_states_stay_normalized(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            u1 = haar_unitary_from_rng(2, rng)
            u2 = haar_unitary_from_rng(2, rng)
            trace = run_protocol(u1, u2, random_protocol(rng))
            for s in trace.states_1 + trace.states_2:
                assert abs(np.linalg.norm(s) - 1.0) <= 1e-9

    def test_dimension_mismatch_raises(self):
        with pytest.raises(ShapeError):
            run_protocol(np.eye(3), np.eye(3), identity_protocol(1))


class TestProtocolValidation:
    def test_interleaver_count(self):
        with pytest.raises(ValidationError):
            Protocol(2, 1, 2, [I2, I2], PLUS)

    def test_non_unitary_interleaver(self):
        with pytest.raises(Exception):
            Protocol(2, 1, 0, [np.diag([1.0, 0.5])], PLUS)

    def test_unnormalized_probe(self):
        with pytest.raises(Exception):
            Protocol(2, 1, 0, [I2], np.array([1.0, 1.0]))

    def test_capacity_cap_checked_before_shapes(self):
        with pytest.raises(CapacityError):
            Protocol(100, 100, 0, [np.eye(1)], np.array([1.0]))

    def test_probe_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            Protocol(2, 2, 0, [np.eye(4)], PLUS)


class TestStepAudit:
    def test_tight_on_identity_vs_z(self):
        trace = run_protocol(I2, Z, identity_protocol(1))
        slacks = audit_step_slacks(trace, np.pi)
        assert slacks == [pytest.approx(0.0, abs=1e-12)]

    def test_identical_pair_slack_is_full_step(self):
        rng = np.random.default_rng(24)
        u = haar_unitary_from_rng(2, rng)
        protocol = random_protocol(rng, queries=3)
        trace = run_protocol(u, u, protocol)
        theta = 0.9
        f = fidelity_closed_form(theta)
        expected = 2.0 * np.sqrt(1.0 - f * f)
        for slack in audit_step_slacks(trace, theta):
            assert slack == pytest.approx(expected, abs=1e-12)

    def test_monte_carlo_never_negative(self):
        rng = np.random.default_rng(25)
        worst = np.inf
        for _ in range(300):
            u1 = haar_unitary_from_rng(2, rng)
            u2 = haar_unitary_from_rng(2, rng)
            theta = smallest_arc(relative_spectrum(u1, u2)).theta
            trace = run_protocol(u1, u2, random_protocol(rng))
            worst = min(worst, min(audit_step_slacks(trace, theta)))
        assert worst >= -1e-9

    def test_telescoped_bound(self):
        rng = np.random.default_rng(26)
        for _ in range(100):
            u1 = haar_unitary_from_rng(2, rng)
            u2 = haar_unitary_from_rng(2, rng)
            theta = smallest_arc(relative_spectrum(u1, u2)).theta
            f = fidelity_closed_form(theta)
            trace = run_protocol(u1, u2, random_protocol(rng))
            t = trace.queries
            assert trace.distances[-1] <= 2.0 * t * np.sqrt(1.0 - f * f) + 1e-6


def test_swapping_an_interleaver_leaves_earlier_distances_alone():
    rng = np.random.default_rng(27)
    u1 = haar_unitary_from_rng(2, rng)
    u2 = haar_unitary_from_rng(2, rng)
    base = random_protocol(rng, queries=4)
    k = 2  # replace the interleaver applied at step k+1
    replaced = [w.copy() for w in base.interleavers]
    replaced[k + 1] = haar_unitary_from_rng(4, rng)
    other = Protocol(2, 2, 4, replaced, base.probe.copy())

    t1 = run_protocol(u1, u2, base)
    t2 = run_protocol(u1, u2, other)
    # the new interleaver multiplies both branches equally: D_{k+1} is unchanged
    for j in range(k + 2):
        assert t2.distances[j] == pytest.approx(t1.distances[j], abs=1e-9)
