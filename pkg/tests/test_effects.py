import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.effects import (
    Effect,
    PartialState,
    State,
    commutes,
    complement,
    conjugate,
    effect_leq,
    effect_oplus,
    effect_perp,
    effect_prob,
    is_sharp,
    normalize,
    seq_product,
)
from src.errors import NonHermitianError, NotPerpendicularError, ValidationError, ZeroProbabilityError
from src.hermitian import max_norm
from src.sampling import make_rng, random_effect, random_state, random_unitary

P0 = Effect(np.diag([1.0, 0.0]))
P1 = Effect(np.diag([0.0, 1.0]))


def test_effect_rejects_eigenvalue_above_one():
    with pytest.raises(ValidationError, match=r"\[0, 1\]"):
        Effect(np.diag([1.5, 0.2]))


def test_effect_rejects_non_hermitian_matrix():
    with pytest.raises(NonHermitianError):
        Effect(np.array([[0.5, 0.1], [0.0, 0.5]]))


def test_effect_matrix_is_read_only():
    a = Effect.scalar(2, 0.5)
    with pytest.raises(ValueError):
        a.matrix[0, 0] = 1.0


def test_state_needs_unit_trace_but_partial_state_does_not():
    with pytest.raises(ValidationError, match="trace"):
        State(np.diag([0.25, 0.25]))
    assert PartialState(np.diag([0.25, 0.25])).trace == pytest.approx(0.5)
    with pytest.raises(ValidationError, match="exceeds 1"):
        PartialState(np.diag([0.75, 0.75]))


def test_complement_and_perpendicularity():
    a = Effect(np.array([[0.6, 0.2], [0.2, 0.3]]))
    assert effect_perp(a, complement(a))
    assert max_norm(effect_oplus(a, complement(a)).matrix - np.eye(2)) < 1e-12
    assert not effect_perp(a, a)
    with pytest.raises(NotPerpendicularError):
        effect_oplus(Effect.identity(2), Effect.identity(2))


def test_sequential_product_of_commuting_effects_is_the_matrix_product():
    a = Effect(np.diag([0.2, 0.9]))
    b = Effect(np.diag([0.5, 0.4]))
    assert max_norm(seq_product(a, b).matrix - np.diag([0.1, 0.36])) < 1e-12
    assert commutes(a, b)


def test_orthogonal_projections_annihilate():
    assert max_norm(seq_product(P0, P1).matrix) < 1e-12
    assert is_sharp(P0)
    assert not is_sharp(Effect.scalar(2, 0.5))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 3]))
def test_sequential_product_lies_below_its_first_factor(seed, dim):
    """a∘b ≤ a and a∘I = I∘a = a."""
    rng = make_rng(seed)
    a, b = random_effect(rng, dim), random_effect(rng, dim)
    assert effect_leq(seq_product(a, b), a)
    unit = Effect.identity(dim)
    assert max_norm(seq_product(a, unit).matrix - a.matrix) < 1e-9
    assert max_norm(seq_product(unit, a).matrix - a.matrix) < 1e-9


def test_probabilities_are_real_and_additive():
    rng = make_rng(11)
    rho = random_state(rng, 3)
    a = random_effect(rng, 3)
    p = effect_prob(rho, a)
    assert 0.0 <= p <= 1.0
    assert p + effect_prob(rho, complement(a)) == pytest.approx(1.0, abs=1e-12)


def test_normalize_rejects_zero_trace():
    with pytest.raises(ZeroProbabilityError):
        normalize(PartialState(np.zeros((2, 2))))
    out = normalize(PartialState(np.diag([0.2, 0.2])))
    assert max_norm(out.matrix - np.diag([0.5, 0.5])) < 1e-12


def test_unitary_conjugation_preserves_the_spectrum():
    rng = make_rng(2)
    a = Effect(np.diag([0.1, 0.7, 1.0]))
    b = conjugate(a, random_unitary(rng, 3))
    assert np.allclose(np.linalg.eigvalsh(b.matrix), [0.1, 0.7, 1.0], atol=1e-12)
