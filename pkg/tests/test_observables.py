import numpy as np
import pytest

from src.effects import Effect, State
from src.errors import LabelError, SobEscapeError, ValidationError
from src.hermitian import max_norm
from src.observables import (
    Observable,
    OutcomeSpace,
    SubObservable,
    distribution,
    eval_event,
    is_observable,
    minimal_extension,
    restrict,
    sob_add,
    sob_leq,
    sob_residual,
    sob_scale,
    subobservable_from_json,
    subobservable_to_json,
    total,
    zero_subobservable,
)
from src.sampling import make_rng, random_observable, random_state, random_subobservable

A0 = np.array([[0.6, 0.2], [0.2, 0.3]])


def qubit_observable() -> Observable:
    return Observable.from_matrices(("x0", "x1"), (A0, np.eye(2) - A0))


def test_outcome_space_rejects_duplicates_and_unknown_labels():
    with pytest.raises(ValidationError):
        OutcomeSpace(("x", "x"))
    space = OutcomeSpace(("x", "y", "z"))
    assert space.event(["z", "x"]) == ("x", "z")
    with pytest.raises(LabelError, match="w"):
        space.event(["w"])
    assert len(list(space.events())) == 8


def test_observable_must_sum_to_identity():
    with pytest.raises(ValidationError, match="sum to I"):
        Observable.from_matrices(("x0", "x1"), (A0, A0))
    with pytest.raises(ValidationError, match="sum to I") as excinfo:
        Observable.from_matrices(("x0", "x1"), (np.eye(2), np.diag([0.5, 0.0])))
    assert not isinstance(excinfo.value, SobEscapeError)


def test_sub_observable_total_must_stay_below_identity():
    with pytest.raises(SobEscapeError):
        SubObservable.from_matrices(("x0", "x1"), (np.eye(2), np.diag([0.5, 0.0])))


def test_events_sum_their_singletons():
    A = qubit_observable()
    assert max_norm(eval_event(A, ()).matrix) == 0.0
    assert max_norm(eval_event(A, ("x0", "x1")).matrix - np.eye(2)) < 1e-12
    assert max_norm(eval_event(A, ("x0",)).matrix - A0) < 1e-12


def test_distribution_of_an_observable_is_a_probability_vector():
    rng = make_rng(4)
    A = random_observable(rng, 3, 4)
    probs = distribution(A, random_state(rng, 3))
    assert set(probs) == set(A.labels)
    assert all(p >= -1e-12 for p in probs.values())
    assert sum(probs.values()) == pytest.approx(1.0, abs=1e-12)


def test_minimal_extension_completes_a_sub_observable():
    A = random_subobservable(make_rng(9), 2, 2)
    assert not is_observable(A)
    A1 = minimal_extension(A)
    assert isinstance(A1, Observable)
    assert A1.labels == A.labels + ("⊥ext",)
    assert sob_residual(restrict(A1, A.labels), A) == 0.0
    assert max_norm(A1["⊥ext"].matrix - (np.eye(2) - total(A).matrix)) < 1e-12


def test_minimal_extension_of_an_observable_adds_a_zero_outcome():
    A1 = minimal_extension(qubit_observable(), label="y")
    assert max_norm(A1["y"].matrix) == 0.0
    with pytest.raises(LabelError):
        minimal_extension(A1, label="y")


def test_pointwise_operations():
    A = qubit_observable()
    half = sob_scale(A, 0.5)
    assert sob_leq(half, A)
    assert not sob_leq(A, half)
    assert sob_residual(sob_add(half, half), A) < 1e-12
    with pytest.raises(SobEscapeError):
        sob_add(A, half)
    with pytest.raises(ValidationError):
        sob_scale(A, 1.5)
    zero = zero_subobservable(A.space, 2)
    assert sob_residual(sob_add(zero, A), A) == 0.0


def test_outcome_lookup_raises_label_error():
    with pytest.raises(LabelError, match="nope"):
        qubit_observable()["nope"]


def test_json_codec_restores_observable_type():
    A = qubit_observable()
    back = subobservable_from_json(subobservable_to_json(A))
    assert isinstance(back, Observable)
    assert sob_residual(back, A) == 0.0
    sub = SubObservable.from_effects({"x0": Effect(A0)})
    assert not isinstance(subobservable_from_json(subobservable_to_json(sub)), Observable)


def test_distribution_requires_matching_dimension():
    A = qubit_observable()
    with pytest.raises(ValueError):
        distribution(A, State(np.eye(3) / 3))
