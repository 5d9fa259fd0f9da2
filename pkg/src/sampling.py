"""
Seeded random generators for effects, states, observables and instruments.

Every generator takes an explicit ``numpy.random.Generator``; suites derive
one generator per trial from ``seed + index`` so a single failing trial can be
replayed on its own.
"""
from __future__ import annotations

from typing import Dict, Sequence, Tuple

import numpy as np

from .effects import Effect, PartialState, State
from .errors import ValidationError
from .hermitian import adjoint, hermitize, identity, psd_sqrt
from .instruments import (
    Instrument,
    SubInstrument,
    constant_state_instrument,
    finite_holevo_instrument,
    holevo_instrument,
    kraus_instrument,
    luders_instrument,
    restrict_instrument,
)
from .observables import Observable, OutcomeSpace, SubObservable, restrict

DIMENSIONS = (2, 3, 4)
INSTRUMENT_KINDS = ("luders", "holevo", "finite_holevo", "constant_state", "kraus")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for trial ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(seed + index)


def labels(n: int, prefix: str = "x") -> Tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


def pick_dimension(rng: np.random.Generator, dims: Sequence[int] = DIMENSIONS) -> int:
    return int(rng.choice(dims))


def ginibre(rng: np.random.Generator, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """``rows × cols`` matrix V with V†V = I (QR with phase correction)."""
    q, r = np.linalg.qr(ginibre(rng, rows, cols))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    return random_isometry(rng, dim, dim)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    return hermitize(ginibre(rng, dim))


def random_effect(rng: np.random.Generator, dim: int, scale: float = 1.0) -> Effect:
    """U diag(λ) U† with λ uniform in [0, scale]."""
    u = random_unitary(rng, dim)
    values = rng.uniform(0.0, scale, dim)
    return Effect(hermitize((u * values) @ adjoint(u)))


def random_state(rng: np.random.Generator, dim: int) -> State:
    g = ginibre(rng, dim)
    m = g @ adjoint(g)
    return State(hermitize(m / np.trace(m).real))


def random_partial_state(rng: np.random.Generator, dim: int) -> PartialState:
    return PartialState(rng.uniform(0.0, 1.0) * random_state(rng, dim).matrix)


def random_observable(rng: np.random.Generator, dim: int, n_outcomes: int = 2) -> Observable:
    """a_x = V_x†V_x for the blocks V_x of a random isometry."""
    v = random_isometry(rng, n_outcomes * dim, dim).reshape(n_outcomes, dim, dim)
    names = labels(n_outcomes)
    return Observable(
        OutcomeSpace(names), {x: Effect(hermitize(adjoint(b) @ b)) for x, b in zip(names, v)}
    )


def random_projective_observable(rng: np.random.Generator, dim: int, n_outcomes: int = 2) -> Observable:
    """Spectral projections of a random basis split into ``n_outcomes`` groups."""
    if not 1 <= n_outcomes <= dim:
        raise ValidationError(f"need 1 <= n_outcomes <= dim, got {n_outcomes} for dim {dim}")
    u = random_unitary(rng, dim)
    groups = np.array_split(np.arange(dim), n_outcomes)
    names = labels(n_outcomes)
    return Observable(
        OutcomeSpace(names),
        {x: Effect(hermitize(u[:, g] @ adjoint(u[:, g]))) for x, g in zip(names, groups)},
    )


def random_subobservable(rng: np.random.Generator, dim: int, n_outcomes: int = 2) -> SubObservable:
    """An observable with one extra outcome, with that outcome dropped."""
    full = random_observable(rng, dim, n_outcomes + 1)
    return restrict(full, full.labels[:n_outcomes])


def random_instrument(
    rng: np.random.Generator, dim: int, n_outcomes: int = 2, kraus_rank: int = 2
) -> Instrument:
    """Blocks of a random isometry used as Kraus operators."""
    v = random_isometry(rng, n_outcomes * kraus_rank * dim, dim).reshape(n_outcomes, kraus_rank, dim, dim)
    names = labels(n_outcomes)
    return kraus_instrument(names, {x: list(k) for x, k in zip(names, v)})


def random_subinstrument(rng: np.random.Generator, dim: int, n_outcomes: int = 2) -> SubInstrument:
    full = random_instrument(rng, dim, n_outcomes + 1)
    return restrict_instrument(full, full.labels[:n_outcomes])


def random_instrument_of_kind(
    rng: np.random.Generator, dim: int, kind: str, n_outcomes: int = 2
) -> Instrument:
    if kind == "luders":
        return luders_instrument(random_observable(rng, dim, n_outcomes))
    if kind == "holevo":
        return holevo_instrument(random_state(rng, dim), random_observable(rng, dim, n_outcomes))
    if kind == "finite_holevo":
        A = random_observable(rng, dim, n_outcomes)
        return finite_holevo_instrument({x: random_state(rng, dim) for x in A.labels}, A)
    if kind == "constant_state":
        return constant_state_instrument(random_instrument(rng, dim, n_outcomes), random_state(rng, dim))
    if kind == "kraus":
        return random_instrument(rng, dim, n_outcomes)
    raise ValidationError(f"unknown instrument kind {kind!r}")


def random_perp_pair(rng: np.random.Generator, dim: int) -> Tuple[Effect, Effect]:
    """(a, b) with a + b ≤ I: b = (I − a)^{1/2} r (I − a)^{1/2}."""
    a = random_effect(rng, dim)
    root = psd_sqrt(identity(dim) - a.matrix)
    r = random_effect(rng, dim)
    return a, Effect(hermitize(root @ r.matrix @ root))


def random_leq_pair(rng: np.random.Generator, dim: int) -> Tuple[Effect, Effect]:
    """(a, b) with a ≤ b."""
    a, gap = random_perp_pair(rng, dim)
    return a, Effect(a.matrix + gap.matrix)


def random_commuting_effects(rng: np.random.Generator, dim: int, count: int) -> Tuple[Effect, ...]:
    """Effects diagonal in one shared random basis."""
    u = random_unitary(rng, dim)
    return tuple(
        Effect(hermitize((u * rng.uniform(0.0, 1.0, dim)) @ adjoint(u))) for _ in range(count)
    )


def random_annihilating_pair(rng: np.random.Generator, dim: int) -> Tuple[Effect, Effect]:
    """(a, b) with a∘b = 0: a lives on a random subspace, b on its complement."""
    u = random_unitary(rng, dim)
    cut = int(rng.integers(1, dim))
    p = u[:, :cut] @ adjoint(u[:, :cut])
    q = identity(dim) - p
    r, s = random_effect(rng, dim), random_effect(rng, dim)
    return Effect(hermitize(p @ r.matrix @ p)), Effect(hermitize(q @ s.matrix @ q))


def random_weights(rng: np.random.Generator, n: int) -> Tuple[float, ...]:
    """Convex weights λ_i ≥ 0 with Σλ_i = 1."""
    return tuple(float(w) for w in rng.dirichlet(np.ones(n)))


def random_state_family(rng: np.random.Generator, dim: int, names: Sequence[str]) -> Dict[str, State]:
    return {x: random_state(rng, dim) for x in names}
