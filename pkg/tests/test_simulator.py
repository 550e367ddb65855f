"""Circuit execution: sampled trajectories vs the exact enumerator."""
import numpy as np
import pytest

from majex.circuit import Circuit, Instruction
from majex.device import GateDurations
from majex.simulator import (asap_schedule, exact_outcome_distribution,
                             idle_intervals, run_circuit, total_variation)


def bell_circuit() -> Circuit:
    circ = Circuit(2, 2)
    circ.h(0).cx(0, 1)
    circ.measure(0, 0).measure(1, 1)
    return circ


def test_exact_distribution_bell():
    dist = exact_outcome_distribution(bell_circuit())
    assert dist[(0, 0)] == pytest.approx(0.5)
    assert dist[(1, 1)] == pytest.approx(0.5)
    assert set(dist) == {(0, 0), (1, 1)}


def test_sampled_matches_exact_bell():
    counts = {}
    for seed in range(2000):
        _, bits = run_circuit(bell_circuit(), np.random.default_rng(seed))
        counts[tuple(bits)] = counts.get(tuple(bits), 0) + 1
    emp = {k: v / 2000 for k, v in counts.items()}
    assert total_variation(emp, exact_outcome_distribution(bell_circuit())) < 0.05


def test_same_seed_same_record():
    circ = bell_circuit()
    a = run_circuit(circ, np.random.default_rng(99))[1]
    b = run_circuit(circ, np.random.default_rng(99))[1]
    assert a == b


def test_conditional_instruction():
    circ = Circuit(2, 2)
    circ.h(0)
    circ.measure(0, 0)
    circ.add("x", 1, condition=(0, 1))
    circ.measure(1, 1)
    for seed in range(32):
        _, bits = run_circuit(circ, np.random.default_rng(seed))
        assert bits[0] == bits[1]
    dist = exact_outcome_distribution(circ)
    assert set(dist) == {(0, 0), (1, 1)}


def test_reset_returns_to_zero():
    circ = Circuit(1, 1)
    circ.h(0)
    circ.reset(0)
    circ.measure(0, 0)
    dist = exact_outcome_distribution(circ)
    assert dist == {(0,): pytest.approx(1.0)}


def test_instruction_validation():
    circ = Circuit(2, 1)
    with pytest.raises(ValueError):
        circ.add("cx", 0, 0)
    with pytest.raises(ValueError):
        circ.add("h", 5)
    with pytest.raises(ValueError):
        circ.measure(0, 3)
    with pytest.raises(ValueError):
        Instruction("bogus", (0,))


def test_asap_schedule_parallel_singles():
    dur = GateDurations(single=10.0, cnot=100.0, measure=1000.0)
    circ = Circuit(2, 0)
    circ.h(0).h(1).cx(0, 1).h(0)
    starts = [t for t, _ in asap_schedule(circ, dur)]
    assert starts == [0.0, 0.0, 10.0, 110.0]


def test_idle_intervals():
    dur = GateDurations(single=10.0, cnot=100.0, measure=1000.0)
    circ = Circuit(2, 0)
    circ.h(0).h(0).cx(0, 1)  # qubit 1 waits for both singles on qubit 0
    idle = idle_intervals(circ, dur)
    assert idle[0] == pytest.approx(0.0)
    assert idle[1] == pytest.approx(20.0)


def test_barrier_synchronizes():
    dur = GateDurations(single=10.0, cnot=100.0, measure=1000.0)
    circ = Circuit(2, 0)
    circ.h(0).h(0).barrier().h(1)
    sched = asap_schedule(circ, dur)
    assert sched[-1][0] == pytest.approx(20.0)
