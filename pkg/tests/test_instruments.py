import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.effects import Effect, PartialState, State, effect_prob
from src.errors import LabelError, ValidationError
from src.hermitian import max_norm
from src.instruments import (
    Instrument,
    Operation,
    SubInstrument,
    apply,
    constant_state_instrument,
    determined_subobservable,
    dual_apply,
    finite_holevo_instrument,
    holevo_instrument,
    instr_distribution,
    is_determined_observable,
    kraus_instrument,
    luders_instrument,
    measured_observable,
    minimal_extension_instrument,
    prepare_operation,
    restrict_instrument,
    update_state,
)
from src.observables import Observable, OutcomeSpace, distribution, sob_residual
from src.sampling import (
    INSTRUMENT_KINDS,
    make_rng,
    random_effect,
    random_instrument,
    random_instrument_of_kind,
    random_observable,
    random_state,
    random_subinstrument,
)

P = Observable.from_matrices(("x0", "x1"), (np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))


def test_operation_must_be_trace_non_increasing():
    with pytest.raises(ValidationError, match="trace-non-increasing"):
        Operation(np.sqrt(2.0) * np.eye(2))


def test_instrument_total_must_be_a_channel():
    half = {"x0": Operation(0.5 * np.eye(2))}
    S = SubInstrument(OutcomeSpace(("x0",)), half)
    assert S.dim == 2
    with pytest.raises(ValidationError, match="must equal I"):
        Instrument(S.space, half)


def test_kraus_instrument_picks_the_right_type():
    complete = kraus_instrument(("k",), {"k": [np.eye(2)]})
    partial = kraus_instrument(("k",), {"k": [0.6 * np.eye(2)]})
    assert isinstance(complete, Instrument)
    assert not isinstance(partial, Instrument)
    with pytest.raises(LabelError):
        kraus_instrument(("k", "j"), {"k": [np.eye(2)]})


def test_operations_compose_in_measurement_order():
    rng = make_rng(3)
    first, second = random_instrument(rng, 2)["x0"], random_instrument(rng, 2)["x1"]
    rho = random_state(rng, 2).matrix
    assert max_norm(first.then(second).apply(rho) - second.apply(first.apply(rho))) < 1e-12


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 3, 4]), kind=st.sampled_from(INSTRUMENT_KINDS))
def test_dual_instrument_reproduces_outcome_statistics(seed, dim, kind):
    """tr[ρ I*(Δ)(a)] = tr[I(Δ)(ρ) a]."""
    rng = make_rng(seed)
    I = random_instrument_of_kind(rng, dim, kind, 2)
    rho, a = random_state(rng, dim), random_effect(rng, dim)
    lhs = effect_prob(rho, dual_apply(I, ("x0",), a))
    rhs = float(np.trace(apply(I, ("x0",), rho).matrix @ a.matrix).real)
    assert abs(lhs - rhs) < 1e-9


def test_luders_instrument_measures_its_observable():
    rng = make_rng(8)
    A = random_observable(rng, 3, 3)
    L = luders_instrument(A)
    assert L.kind == "luders"
    assert sob_residual(measured_observable(L), A) < 1e-9
    assert is_determined_observable(L, Effect.identity(3))
    rho = random_state(rng, 3)
    dist = instr_distribution(L, rho)
    for x, p in distribution(A, rho).items():
        assert dist[x] == pytest.approx(p, abs=1e-12)


def test_luders_update_of_a_sharp_observable_projects():
    L = luders_instrument(P)
    rho = State(np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, 0.7]]))
    after = update_state(L, ("x1",), rho)
    assert max_norm(after.matrix - np.diag([0.0, 1.0])) < 1e-12


def test_holevo_instrument_prepares_its_state():
    rng = make_rng(12)
    alpha, A = random_state(rng, 2), random_observable(rng, 2, 2)
    H = holevo_instrument(alpha, A)
    rho = random_state(rng, 2)
    out = apply(H, ("x0",), rho)
    assert max_norm(out.matrix - effect_prob(rho, A["x0"]) * alpha.matrix) < 1e-12
    assert sob_residual(measured_observable(H), A) < 1e-9


def test_finite_holevo_needs_a_state_per_outcome():
    rng = make_rng(13)
    A = random_observable(rng, 2, 2)
    with pytest.raises(LabelError):
        finite_holevo_instrument({"x0": random_state(rng, 2)}, A)
    beta = {x: random_state(rng, 2) for x in A.labels}
    F = finite_holevo_instrument(beta, A)
    rho = random_state(rng, 2)
    out = apply(F, ("x1",), rho)
    assert max_norm(out.matrix - effect_prob(rho, A["x1"]) * beta["x1"].matrix) < 1e-12


def test_constant_state_instrument_ignores_the_input():
    rng = make_rng(14)
    I = random_instrument(rng, 2, 3)
    alpha = random_state(rng, 2)
    C = constant_state_instrument(I, alpha)
    expected = apply(I, ("x2",), alpha).matrix
    for rho in (random_state(rng, 2), random_state(rng, 2)):
        assert max_norm(apply(C, ("x2",), rho).matrix - expected) < 1e-12
    measured = measured_observable(C)
    for x in C.labels:
        weight = apply(I, (x,), alpha).trace
        assert max_norm(measured[x].matrix - weight * np.eye(2)) < 1e-12


def test_prepare_operation_with_zero_effect_is_the_zero_map():
    op = prepare_operation(Effect.zero(2), random_state(make_rng(1), 2))
    assert max_norm(op.apply(np.eye(2) / 2)) == 0.0


def test_minimal_extension_instrument_completes_a_sub_instrument():
    rng = make_rng(21)
    S = random_subinstrument(rng, 2, 2)
    J = minimal_extension_instrument(S)
    assert isinstance(J, Instrument)
    assert J.labels == S.labels + ("⊥ext",)
    restricted = restrict_instrument(J, S.labels)
    rho = PartialState(random_state(rng, 2).matrix)
    assert max_norm(apply(restricted, S.labels, rho).matrix - apply(S, S.labels, rho).matrix) < 1e-12
    measured = measured_observable(J)
    assert max_norm(measured["⊥ext"].matrix - (np.eye(2) - S.deficiency_matrix())) < 1e-9


def test_determined_sub_observable_of_identity_is_the_measured_observable():
    I = random_instrument(make_rng(30), 3, 2)
    F = determined_subobservable(I, Effect.identity(3))
    assert sob_residual(F, measured_observable(I)) == 0.0
