"""
Quantum operations and instruments in Kraus form.

An :class:`Operation` is a stack of Kraus matrices ``K`` of shape
``(n, d, d)`` acting as ρ ↦ Σ_i K_i ρ K_i†, with dual a ↦ Σ_i K_i† a K_i.
Complete positivity holds by construction; only the trace-non-increasing
condition Σ K_i†K_i ≤ I is checked.

Instruments map outcome labels to operations. The named families (Lüders,
Holevo, finite Holevo, constant state) are realized through
:func:`prepare_operation` or effect square roots, and every result is
validated at construction like any hand-built instrument.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Sequence

import numpy as np

from . import config
from .config import Tolerance
from .effects import Effect, PartialState, State, normalize
from .errors import DimensionMismatchError, LabelError, SobEscapeError, ValidationError
from .hermitian import (
    adjoint,
    as_matrix,
    eigenvalues,
    frozen,
    herm_eigendecompose,
    hermitize,
    identity,
    max_norm,
    psd_sqrt,
    zeros,
)
from .observables import Observable, OutcomeSpace, SubObservable, as_observable

logger = logging.getLogger(__name__)

KINDS = (
    "luders",
    "holevo",
    "finite_holevo",
    "constant_state",
    "kraus",
    "identity",
    "sequential",
    "conditioned",
    "extension",
)


@dataclass(frozen=True, eq=False)
class Operation:
    """Trace-non-increasing completely positive map held as stacked Kraus matrices."""

    kraus: np.ndarray

    def __post_init__(self) -> None:
        stack = np.array(self.kraus, dtype=np.complex128)
        if stack.ndim == 2:
            stack = stack[np.newaxis]
        if stack.ndim != 3 or stack.shape[0] == 0 or stack.shape[1] != stack.shape[2]:
            raise ValidationError(f"operation: expected a non-empty stack of square Kraus matrices, got {stack.shape}")
        for k in stack:
            as_matrix(k, "Kraus operator")
        top = float(eigenvalues(self._effect_matrix(stack))[-1])
        if top > 1.0 + config.default_tolerance().eps:
            raise ValidationError(f"operation: Σ K†K exceeds I (max eigenvalue {top:.6g}); not trace-non-increasing")
        object.__setattr__(self, "kraus", frozen(stack))

    @staticmethod
    def _effect_matrix(stack: np.ndarray) -> np.ndarray:
        return hermitize(np.einsum("kji,kjl->il", stack.conj(), stack))

    @property
    def dim(self) -> int:
        return self.kraus.shape[1]

    def effect_matrix(self) -> np.ndarray:
        """Σ_i K_i†K_i, the effect O*(I) this operation measures."""
        return self._effect_matrix(self.kraus)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        self._check_dim(rho)
        return hermitize(np.einsum("kij,jl,kml->im", self.kraus, rho, self.kraus.conj()))

    def dual(self, a: np.ndarray) -> np.ndarray:
        self._check_dim(a)
        return hermitize(np.einsum("kji,jl,klm->im", self.kraus.conj(), a, self.kraus))

    def then(self, other: "Operation") -> "Operation":
        """``other`` after ``self``: Kraus products K^other_j K^self_i."""
        if other.dim != self.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} vs {other.dim}")
        products = np.einsum("jab,ibc->jiac", other.kraus, self.kraus).reshape(-1, self.dim, self.dim)
        return Operation(_prune(products))

    def _check_dim(self, m: np.ndarray) -> None:
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatchError(f"dimension mismatch: operation is {self.dim}-dimensional, got {m.shape}")

    @classmethod
    def zero(cls, dim: int) -> "Operation":
        return cls(zeros(dim)[np.newaxis])

    @classmethod
    def concat(cls, ops: Sequence["Operation"]) -> "Operation":
        return cls(_prune(np.concatenate([op.kraus for op in ops])))


def _prune(stack: np.ndarray) -> np.ndarray:
    """Drop exactly-zero Kraus matrices, keeping at least one."""
    keep = [k for k in stack if np.any(k)]
    return np.array(keep) if keep else stack[:1]


@dataclass(frozen=True, eq=False)
class SubInstrument:
    """Operation-valued measure whose total need not be a channel."""

    space: OutcomeSpace
    ops: Mapping[str, Operation]
    kind: str = field(default="kraus")

    def __post_init__(self) -> None:
        ops = dict(self.ops)
        if set(ops) != set(self.space.labels):
            raise ValidationError(
                f"operations must be given for exactly the labels {list(self.space.labels)}, got {list(ops)}"
            )
        dims = {op.dim for op in ops.values()}
        if len(dims) != 1:
            raise DimensionMismatchError(f"operations have mixed dimensions {sorted(dims)}")
        if self.kind not in KINDS:
            raise ValidationError(f"unknown instrument kind {self.kind!r}")
        object.__setattr__(self, "ops", MappingProxyType({x: ops[x] for x in self.space.labels}))
        top = float(eigenvalues(self.deficiency_matrix())[-1])
        if top > 1.0 + config.default_tolerance().eps:
            raise SobEscapeError(f"{type(self).__name__}: Σ C†C exceeds I (max eigenvalue {top:.6g})")
        self._check_total()

    def _check_total(self) -> None:
        pass

    @property
    def dim(self) -> int:
        return next(iter(self.ops.values())).dim

    @property
    def labels(self):
        return self.space.labels

    def __getitem__(self, label: str) -> Operation:
        try:
            return self.ops[label]
        except KeyError:
            raise LabelError(f"unknown outcome label {label!r}") from None

    def deficiency_matrix(self) -> np.ndarray:
        return sum((op.effect_matrix() for op in self.ops.values()), zeros(self.dim))


@dataclass(frozen=True, eq=False)
class Instrument(SubInstrument):
    """Sub-instrument whose total Ī = I(Ω) is a channel."""

    def _check_total(self) -> None:
        gap = max_norm(self.deficiency_matrix() - identity(self.dim))
        if gap > config.default_tolerance().eps:
            raise ValidationError(f"Instrument: Σ K†K over all outcomes must equal I (gap {gap:.3e})")


def deficiency(S: SubInstrument) -> Effect:
    """D = Σ_x Σ_i C_{x,i}†C_{x,i}."""
    return Effect(S.deficiency_matrix())


def is_instrument(S: SubInstrument, tol: Tolerance | float | None = None) -> bool:
    return max_norm(S.deficiency_matrix() - identity(S.dim)) <= config.resolve(tol).eps


def as_instrument(S: SubInstrument) -> Instrument:
    if isinstance(S, Instrument):
        return S
    return Instrument(S.space, S.ops, S.kind)


def _event_ops(I: SubInstrument, delta: Iterable[str]):
    return [I.ops[x] for x in I.space.event(delta)]


def apply(I: SubInstrument, delta: Iterable[str], rho: PartialState) -> PartialState:
    """I(Δ)(ρ) = Σ_{x∈Δ} Σ_i K_{x,i} ρ K_{x,i}†."""
    if rho.dim != I.dim:
        raise DimensionMismatchError(f"state dimension {rho.dim} does not match instrument dimension {I.dim}")
    out = sum((op.apply(rho.matrix) for op in _event_ops(I, delta)), zeros(I.dim))
    return PartialState(out)


def update_state(I: SubInstrument, delta: Iterable[str], rho: PartialState) -> State:
    """The state after a measurement of I yields an outcome in Δ."""
    return normalize(apply(I, delta, rho))


def instr_distribution(I: SubInstrument, rho: PartialState) -> Dict[str, float]:
    """x ↦ tr[I({x})(ρ)]."""
    return {x: apply(I, (x,), rho).trace for x in I.labels}


def dual_apply(I: SubInstrument, delta: Iterable[str], a: Effect) -> Effect:
    """I*(Δ)(a) = Σ_{x∈Δ} Σ_i K_{x,i}† a K_{x,i}."""
    if a.dim != I.dim:
        raise DimensionMismatchError(f"effect dimension {a.dim} does not match instrument dimension {I.dim}")
    return Effect(sum((op.dual(a.matrix) for op in _event_ops(I, delta)), zeros(I.dim)))


def determined_subobservable(I: SubInstrument, a: Effect) -> SubObservable:
    """I_a^*: x ↦ I*({x})(a)."""
    if a.dim != I.dim:
        raise DimensionMismatchError(f"effect dimension {a.dim} does not match instrument dimension {I.dim}")
    return SubObservable(I.space, {x: Effect(I.ops[x].dual(a.matrix)) for x in I.labels})


def measured_observable(I: Instrument) -> Observable:
    """Î = I_I^*, the unique observable with tr[ρÎ(Δ)] = tr[I(Δ)(ρ)]."""
    return as_observable(determined_subobservable(I, Effect.identity(I.dim)))


def is_determined_observable(I: SubInstrument, a: Effect, tol: Tolerance | float | None = None) -> bool:
    """True iff I_a^* is an observable, i.e. I*(Ω)(a) = I."""
    total = dual_apply(I, I.labels, a)
    return max_norm(total.matrix - identity(I.dim)) <= config.resolve(tol).eps


def total_channel(I: SubInstrument) -> Operation:
    """Ī = I(Ω) as a single operation."""
    return Operation.concat(list(I.ops.values()))


def prepare_operation(a: Effect, sigma: PartialState | np.ndarray) -> Operation:
    """
    Measure-and-prepare operation ρ ↦ tr(ρa)·σ.

    With σ = Σ_j μ_j φ_jφ_j† and a = Σ_v ν_v w_vw_v†, the Kraus operators are
    √(μ_j ν_v)·|φ_j⟩⟨w_v|. Negative roundoff eigenvalues are dropped.
    """
    sigma_m = sigma.matrix if isinstance(sigma, PartialState) else np.asarray(sigma)
    if sigma_m.shape != a.matrix.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.matrix.shape} vs {sigma_m.shape}")
    mu, phi = herm_eigendecompose(sigma_m)
    nu, w = herm_eigendecompose(a.matrix)
    kraus = [
        np.sqrt(mu[j] * nu[v]) * np.outer(phi[:, j], w[:, v].conj())
        for j in range(len(mu))
        for v in range(len(nu))
        if mu[j] > 0.0 and nu[v] > 0.0
    ]
    if not kraus:
        return Operation.zero(a.dim)
    return Operation(np.array(kraus))


def identity_instrument(dim: int, label: str = "x0") -> Instrument:
    return Instrument(OutcomeSpace((label,)), {label: Operation(identity(dim))}, kind="identity")


def kraus_instrument(labels: Sequence[str], kraus: Mapping[str, Sequence[np.ndarray]]) -> SubInstrument:
    """Build from raw Kraus data; returns an Instrument when the total is a channel."""
    space = OutcomeSpace(tuple(labels))
    missing = [x for x in space if x not in kraus]
    if missing:
        raise LabelError(f"no Kraus operators for label(s) {missing}")
    S = SubInstrument(space, {x: Operation(np.array(kraus[x], dtype=np.complex128)) for x in space}, kind="kraus")
    return as_instrument(S) if is_instrument(S) else S


def luders_instrument(A: Observable) -> Instrument:
    """L_x(ρ) = a_x^{1/2} ρ a_x^{1/2}."""
    return Instrument(A.space, {x: Operation(a.sqrt) for x, a in A.effects.items()}, kind="luders")


def holevo_instrument(alpha: State, A: Observable) -> Instrument:
    """H_(α,A)(Δ)(ρ) = tr[ρA(Δ)]·α."""
    if alpha.dim != A.dim:
        raise DimensionMismatchError(f"state dimension {alpha.dim} does not match observable dimension {A.dim}")
    return Instrument(A.space, {x: prepare_operation(a, alpha) for x, a in A.effects.items()}, kind="holevo")


def finite_holevo_instrument(alphas: Mapping[str, State], A: Observable) -> Instrument:
    """H(x)(ρ) = tr(ρa_x)·α_x."""
    if set(alphas) != set(A.labels):
        raise LabelError(f"state labels {sorted(alphas)} do not match observable labels {list(A.labels)}")
    return Instrument(
        A.space, {x: prepare_operation(A.effects[x], alphas[x]) for x in A.labels}, kind="finite_holevo"
    )


def constant_state_instrument(I: Instrument, alpha: State) -> Instrument:
    """I_α(Δ)(ρ) = I(Δ)(α), independent of ρ."""
    if alpha.dim != I.dim:
        raise DimensionMismatchError(f"state dimension {alpha.dim} does not match instrument dimension {I.dim}")
    unit = Effect.identity(I.dim)
    ops = {x: prepare_operation(unit, I.ops[x].apply(alpha.matrix)) for x in I.labels}
    return Instrument(I.space, ops, kind="constant_state")


def minimal_extension_instrument(S: SubInstrument, label: str | None = None) -> Instrument:
    """
    Add outcome ``label`` with Kraus operator (I − D)^{1/2}, so that
    J(Δ∪{y})(ρ) = S(Δ)(ρ) + D′∘ρ. If S is already an instrument the new
    outcome carries the zero map.
    """
    label = config.extension_label() if label is None else label
    space = S.space.extended(label)
    if is_instrument(S):
        extra = Operation.zero(S.dim)
    else:
        extra = Operation(psd_sqrt(identity(S.dim) - S.deficiency_matrix()))
    logger.debug("Extending %s instrument with outcome %r", S.kind, label)
    return Instrument(space, {**S.ops, label: extra}, kind="extension")


def restrict_instrument(I: SubInstrument, labels: Iterable[str]) -> SubInstrument:
    keep = I.space.event(labels)
    return SubInstrument(OutcomeSpace(keep), {x: I.ops[x] for x in keep}, kind=I.kind)
