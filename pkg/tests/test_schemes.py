from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdisc import linalg
from qdisc.circuits import Circuit, Gate
from qdisc.errors import NoValidShots, ValidationError
from qdisc.optimal import (
    components_from_matrices,
    fourier_discrimination_components,
    fourier_p_succ,
    fourier_u,
    hadamard_components,
    hadamard_discrimination_components,
)
from qdisc.schemes import (
    DiscriminationComponents,
    assemble_direct_sum_circuits,
    assemble_postselection_circuits,
    direct_sum_probability,
    direct_sum_score,
    postselection_probability,
    postselection_score,
)
from qdisc.simulator import as_dict, exact_distribution

from conftest import random_unitary

HADAMARD_P = (2 + sqrt(2)) / 4


def exact_hists(circuits, scale=None):
    out = {}
    for name, c in circuits.items():
        probs = as_dict(exact_distribution(c))
        out[name] = {k: round(v * scale) for k, v in probs.items()} if scale else probs
    return out


def test_hadamard_postselection_gate_list():
    circuits = assemble_postselection_circuits(hadamard_discrimination_components(), target=0, ancilla=1)
    assert set(circuits) == {"id_v0", "id_v1", "u_v0", "u_v1"}
    u_v0 = circuits["u_v0"]
    expected = [Gate("H", (0,)), Gate("CNOT", (0, 1)), Gate("H", (0,)), Gate("RY", (1,), -3 * pi / 4)]
    assert list(u_v0.gates) == expected
    assert u_v0.measured


def test_postselection_with_empty_u_dag():
    comps = hadamard_discrimination_components()
    comps = DiscriminationComponents(comps.state_prep, Circuit(1), comps.v0_dag, comps.v1_dag)
    circuits = assemble_postselection_circuits(comps, 3, 5)
    assert circuits["id_v0"].gates == circuits["u_v0"].gates


def test_postselection_composite_matrix():
    comps = hadamard_discrimination_components()
    circuits = assemble_postselection_circuits(comps)
    v0_dag = comps.v0_dag.unitary()
    prep = comps.state_prep.unitary()
    assert np.allclose(circuits["id_v0"].unitary(), linalg.kron(linalg.I2, v0_dag) @ prep, atol=1e-12)


def test_hadamard_direct_sum_fragment_matches_block_form():
    comps = hadamard_discrimination_components()
    h = hadamard_components()
    expected = linalg.kron(linalg.P0, linalg.dagger(h.v0)) + linalg.kron(linalg.P1, linalg.dagger(h.v1))
    assert np.allclose(comps.v0_v1_direct_sum_dag.unitary(), expected, atol=1e-10)
    u = assemble_direct_sum_circuits(comps)["u"]
    assert [g.kind for g in u.gates] == ["H", "CNOT", "H", "RY", "CNOT"]


def test_identity_components_direct_sum():
    comps = DiscriminationComponents(Circuit(2).h(0).cnot(0, 1), Circuit(1), Circuit(1), Circuit(1), Circuit(2))
    assert assemble_direct_sum_circuits(comps)["id"].gates == comps.state_prep.gates


def test_components_validation():
    with pytest.raises(ValidationError):
        DiscriminationComponents(Circuit(1), Circuit(1), Circuit(1), Circuit(1))
    comps = hadamard_discrimination_components()
    with pytest.raises(ValidationError):
        assemble_postselection_circuits(comps, 1, 1)
    with pytest.raises(ValidationError):
        assemble_direct_sum_circuits(
            DiscriminationComponents(comps.state_prep, comps.u_dag, comps.v0_dag, comps.v1_dag)
        )


def test_assembled_circuits_are_unitary(rng):
    for _ in range(20):
        comps = components_from_matrices(random_unitary(rng), random_unitary(rng), random_unitary(rng))
        t, a = rng.choice(6, size=2, replace=False)
        circuits = {**assemble_postselection_circuits(comps, t, a), **assemble_direct_sum_circuits(comps, t, a)}
        for c in circuits.values():
            assert linalg.is_unitary(c.unitary(), 1e-10)


def test_postselection_perfect_and_uniform():
    assert postselection_probability({"01": 100}, {"11": 100}, {"00": 100}, {"10": 100}) == 1.0
    uniform = {k: 25 for k in ("00", "01", "10", "11")}
    assert postselection_probability(uniform, uniform, uniform, uniform) == 0.5


def test_postselection_hadamard_exact_counts():
    hists = exact_hists(assemble_postselection_circuits(hadamard_discrimination_components()), scale=10**6)
    p = postselection_probability(hists["id_v0"], hists["id_v1"], hists["u_v0"], hists["u_v1"])
    assert p == pytest.approx(HADAMARD_P, abs=1e-5)


def test_direct_sum_perfect_and_uniform():
    assert direct_sum_probability({"01": 50, "11": 50}, {"00": 50, "10": 50}) == 1.0
    uniform = {k: 25 for k in ("00", "01", "10", "11")}
    assert direct_sum_probability(uniform, uniform) == 0.5


def test_direct_sum_fourier_quarter_turn():
    hists = exact_hists(assemble_direct_sum_circuits(fourier_discrimination_components(pi / 2)))
    assert direct_sum_score(hists["id"], hists["u"]) == pytest.approx(fourier_p_succ(pi / 2), abs=1e-12)
    assert fourier_p_succ(pi / 2) == pytest.approx(0.5 + sqrt(2) / 4, abs=1e-15)


def test_estimator_errors():
    with pytest.raises(NoValidShots):
        postselection_probability({"10": 5}, {"01": 5}, {"10": 5}, {"01": 5})
    with pytest.raises(NoValidShots):
        direct_sum_probability({}, {})
    with pytest.raises(ValidationError):
        direct_sum_probability({"02": 1}, {"00": 1})
    with pytest.raises(ValidationError):
        direct_sum_probability({"00": 1.5}, {"00": 1})


counts = st.dictionaries(st.sampled_from(["00", "01", "10", "11"]), st.integers(0, 500), min_size=4)


@given(counts, counts, counts, counts, st.integers(1, 50))
def test_postselection_scale_invariance_and_range(a, b, c, d, k):
    try:
        p = postselection_probability(a, b, c, d)
    except NoValidShots:
        return
    scaled = [{key: v * k for key, v in h.items()} for h in (a, b, c, d)]
    assert 0.0 <= p <= 1.0
    assert postselection_probability(*scaled) == pytest.approx(p, abs=1e-12)


@given(counts, counts, st.integers(1, 50))
def test_direct_sum_scale_invariance_and_range(a, b, k):
    try:
        p = direct_sum_probability(a, b)
    except NoValidShots:
        return
    assert 0.0 <= p <= 1.0
    assert direct_sum_probability({x: v * k for x, v in a.items()}, {x: v * k for x, v in b.items()}) == pytest.approx(p, abs=1e-12)


def test_schemes_agree_in_infinite_shot_limit(rng):
    for _ in range(20):
        phi = rng.uniform(0, 2 * np.pi)
        comps = components_from_matrices(fourier_u(phi), random_unitary(rng), random_unitary(rng))
        ps = exact_hists(assemble_postselection_circuits(comps))
        ds = exact_hists(assemble_direct_sum_circuits(comps))
        assert abs(postselection_score(ps["id_v0"], ps["id_v1"], ps["u_v0"], ps["u_v1"]) - direct_sum_score(ds["id"], ds["u"])) < 1e-12
