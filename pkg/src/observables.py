"""
Finite-outcome sub-observables and observables.

Outcome spaces are finite label sets carrying the power-set σ-algebra, so an
event is just a subset of labels and A(Δ) = Σ_{x∈Δ} a_x.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

import numpy as np

from . import config
from .config import Tolerance
from .effects import Effect, PartialState, complement, effect_prob, is_sharp
from .errors import DimensionMismatchError, LabelError, SobEscapeError, ValidationError
from .hermitian import eigenvalues, identity, matrix_from_json, matrix_to_json, max_norm, zeros


@dataclass(frozen=True)
class OutcomeSpace:
    labels: Tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(str(x) for x in self.labels)
        if not labels:
            raise ValidationError("outcome space must be non-empty")
        if len(set(labels)) != len(labels):
            raise ValidationError(f"outcome labels must be unique: {list(labels)}")
        object.__setattr__(self, "labels", labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def event(self, delta: Iterable[str]) -> Tuple[str, ...]:
        """Validate an event and return its labels in space order."""
        wanted = set(delta)
        unknown = wanted - set(self.labels)
        if unknown:
            raise LabelError(f"unknown outcome label(s): {sorted(unknown)}")
        return tuple(x for x in self.labels if x in wanted)

    def events(self) -> Iterator[Tuple[str, ...]]:
        """Every event (the power set), smallest first."""
        for size in range(len(self.labels) + 1):
            yield from combinations(self.labels, size)

    def extended(self, label: str) -> "OutcomeSpace":
        """One-point extension Ω ∪ {label}."""
        if label in self.labels:
            raise LabelError(f"extension label {label!r} already in the outcome space")
        return OutcomeSpace(self.labels + (label,))


@dataclass(frozen=True, eq=False)
class SubObservable:
    """Effect-valued measure whose total A(Ω) need not be I."""

    space: OutcomeSpace
    effects: Mapping[str, Effect]

    def __post_init__(self) -> None:
        effects = dict(self.effects)
        if set(effects) != set(self.space.labels):
            raise ValidationError(
                f"effects must be given for exactly the labels {list(self.space.labels)}, got {list(effects)}"
            )
        dims = {e.dim for e in effects.values()}
        if len(dims) != 1:
            raise DimensionMismatchError(f"effects have mixed dimensions {sorted(dims)}")
        ordered = {x: effects[x] for x in self.space.labels}
        object.__setattr__(self, "effects", MappingProxyType(ordered))
        self._check_total()
        top = float(eigenvalues(self.total_matrix())[-1])
        if top > 1.0 + config.default_tolerance().eps:
            raise SobEscapeError(f"{type(self).__name__}: total A(Ω) exceeds I (max eigenvalue {top:.6g})")

    def _check_total(self) -> None:
        pass

    @property
    def dim(self) -> int:
        return next(iter(self.effects.values())).dim

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.space.labels

    def __getitem__(self, label: str) -> Effect:
        try:
            return self.effects[label]
        except KeyError:
            raise LabelError(f"unknown outcome label {label!r}") from None

    def total_matrix(self) -> np.ndarray:
        return sum((e.matrix for e in self.effects.values()), zeros(self.dim))

    @classmethod
    def from_matrices(cls, labels: Sequence[str], matrices: Sequence[np.ndarray]):
        if len(labels) != len(matrices):
            raise ValidationError("labels and matrices differ in length")
        return cls(OutcomeSpace(tuple(labels)), {x: Effect(m) for x, m in zip(labels, matrices)})

    @classmethod
    def from_effects(cls, effects: Mapping[str, Effect]):
        return cls(OutcomeSpace(tuple(effects)), effects)


@dataclass(frozen=True, eq=False)
class Observable(SubObservable):
    """Sub-observable with A(Ω) = I (a POVM)."""

    def _check_total(self) -> None:
        gap = max_norm(self.total_matrix() - identity(self.dim))
        if gap > config.default_tolerance().eps:
            raise ValidationError(f"Observable: effects must sum to I (‖A(Ω) − I‖_max = {gap:.3e})")


def eval_event(A: SubObservable, delta: Iterable[str]) -> Effect:
    """A(Δ) = Σ_{x∈Δ} a_x; the empty event gives 0."""
    labels = A.space.event(delta)
    return Effect(sum((A.effects[x].matrix for x in labels), zeros(A.dim)))


def total(A: SubObservable) -> Effect:
    return Effect(A.total_matrix())


def distribution(A: SubObservable, rho: PartialState) -> Dict[str, float]:
    """Φ_ρ^A on singletons: x ↦ tr(ρ a_x)."""
    if rho.dim != A.dim:
        raise DimensionMismatchError(f"state dimension {rho.dim} does not match {A.dim}")
    return {x: effect_prob(rho, a) for x, a in A.effects.items()}


def is_observable(A: SubObservable, tol: Tolerance | float | None = None) -> bool:
    return max_norm(A.total_matrix() - identity(A.dim)) <= config.resolve(tol).eps


def as_observable(A: SubObservable) -> Observable:
    if isinstance(A, Observable):
        return A
    return Observable(A.space, A.effects)


def zero_subobservable(space: OutcomeSpace, dim: int) -> SubObservable:
    return SubObservable(space, {x: Effect.zero(dim) for x in space})


def minimal_extension(A: SubObservable, label: str | None = None) -> Observable:
    """
    One-point completion of A: the new outcome carries a′ = I − A(Ω).

    If A is already an observable the new outcome carries the zero effect.
    """
    label = config.extension_label() if label is None else label
    space = A.space.extended(label)
    extra = Effect.zero(A.dim) if is_observable(A) else complement(total(A))
    return Observable(space, {**A.effects, label: extra})


def restrict(A: SubObservable, labels: Iterable[str]) -> SubObservable:
    keep = A.space.event(labels)
    return SubObservable(OutcomeSpace(keep), {x: A.effects[x] for x in keep})


def _same_space(A: SubObservable, B: SubObservable) -> None:
    if A.space != B.space:
        raise LabelError(f"outcome spaces differ: {list(A.labels)} vs {list(B.labels)}")
    if A.dim != B.dim:
        raise DimensionMismatchError(f"dimension mismatch: {A.dim} vs {B.dim}")


def sob_add(A: SubObservable, B: SubObservable) -> SubObservable:
    """Pointwise sum; raises :class:`SobEscapeError` if it leaves Sob(H)."""
    _same_space(A, B)
    sums = {x: A.effects[x].matrix + B.effects[x].matrix for x in A.labels}
    top = float(eigenvalues(sum(sums.values(), zeros(A.dim)))[-1])
    if top > 1.0 + config.default_tolerance().eps:
        raise SobEscapeError(f"A + B is not a sub-observable (total has eigenvalue {top:.6g})")
    return SubObservable(A.space, {x: Effect(m) for x, m in sums.items()})


def sob_scale(A: SubObservable, lam: float) -> SubObservable:
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"scale factor must lie in [0, 1], got {lam}")
    return SubObservable(A.space, {x: Effect(lam * a.matrix) for x, a in A.effects.items()})


def sob_leq(A: SubObservable, B: SubObservable, tol: Tolerance | float | None = None) -> bool:
    """
    A ≤ B on every event. Positivity of the effects makes the singleton
    comparison sufficient: B(Δ) − A(Δ) is a sum of singleton differences.
    """
    _same_space(A, B)
    eps = config.resolve(tol).eps
    return all(
        float(eigenvalues(B.effects[x].matrix - A.effects[x].matrix)[0]) >= -eps for x in A.labels
    )


def sob_residual(A: SubObservable, B: SubObservable) -> float:
    """Largest entry-wise difference over all outcomes."""
    _same_space(A, B)
    return max(max_norm(A.effects[x].matrix - B.effects[x].matrix) for x in A.labels)


def is_sharp_observable(A: SubObservable) -> bool:
    return all(is_sharp(a) for a in A.effects.values())


def subobservable_to_json(A: SubObservable) -> dict:
    return {
        "labels": list(A.labels),
        "effects": {x: matrix_to_json(a.matrix) for x, a in A.effects.items()},
    }


def subobservable_from_json(data: Mapping) -> SubObservable:
    labels = tuple(data["labels"])
    mats = [matrix_from_json(data["effects"][x], f"effect {x!r}") for x in labels]
    A = SubObservable.from_matrices(labels, mats)
    return as_observable(A) if is_observable(A) else A
