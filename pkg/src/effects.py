"""
Effects, states and partial states, with the effect-algebra partial sum on
E(H) and the standard sequential product a∘b = a^{1/2} b a^{1/2}.

All three types validate once at construction; every operation below may
assume its inputs are valid.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import config
from .config import Tolerance
from .errors import (
    DimensionMismatchError,
    NonHermitianError,
    NotPerpendicularError,
    ValidationError,
    ZeroProbabilityError,
)
from .hermitian import (
    adjoint,
    as_matrix,
    commutator_norm,
    eigenvalues,
    frozen,
    hermitize,
    identity,
    is_hermitian,
    max_norm,
    psd_sqrt,
    zeros,
)


def _validated(data, kind: str) -> np.ndarray:
    m = as_matrix(data, kind)
    if not is_hermitian(m):
        raise NonHermitianError(f"{kind}: matrix is not Hermitian")
    return hermitize(m)


@dataclass(frozen=True, eq=False)
class Effect:
    """Hermitian operator a with 0 ≤ a ≤ I."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _validated(self.matrix, "effect")
        eps = config.default_tolerance().eps
        vals = eigenvalues(m)
        if vals[0] < -eps or vals[-1] > 1.0 + eps:
            raise ValidationError(
                f"effect: eigenvalues must lie in [0, 1] (0 <= a <= I), got [{vals[0]:.6g}, {vals[-1]:.6g}]"
            )
        object.__setattr__(self, "matrix", frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def sqrt(self) -> np.ndarray:
        return psd_sqrt(self.matrix)

    @classmethod
    def zero(cls, dim: int) -> "Effect":
        return cls(zeros(dim))

    @classmethod
    def identity(cls, dim: int) -> "Effect":
        return cls(identity(dim))

    @classmethod
    def scalar(cls, dim: int, value: float) -> "Effect":
        return cls(value * identity(dim))


@dataclass(frozen=True, eq=False)
class PartialState:
    """Positive operator with trace at most one."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        kind = type(self).__name__
        m = _validated(self.matrix, kind)
        eps = config.default_tolerance().eps
        vals = eigenvalues(m)
        if vals[0] < -eps:
            raise ValidationError(f"{kind}: matrix is not positive (min eigenvalue {vals[0]:.6g})")
        tr = float(np.trace(m).real)
        if tr > 1.0 + eps:
            raise ValidationError(f"{kind}: trace {tr:.12g} exceeds 1")
        self._check_trace(tr, eps)
        object.__setattr__(self, "matrix", frozen(m))

    def _check_trace(self, tr: float, eps: float) -> None:
        pass

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True, eq=False)
class State(PartialState):
    """Density operator: positive with unit trace."""

    def _check_trace(self, tr: float, eps: float) -> None:
        if abs(tr - 1.0) > eps:
            raise ValidationError(f"State: trace {tr:.12g} is not 1")

    def as_effect(self) -> Effect:
        return Effect(self.matrix)


def _same_dim(a, b) -> None:
    if a.matrix.shape != b.matrix.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")


def complement(a: Effect) -> Effect:
    """a′ = I − a."""
    return Effect(identity(a.dim) - a.matrix)


def effect_perp(a: Effect, b: Effect, tol: Tolerance | float | None = None) -> bool:
    """a ⊥ b iff a + b ≤ I."""
    _same_dim(a, b)
    return float(eigenvalues(a.matrix + b.matrix)[-1]) <= 1.0 + config.resolve(tol).eps


def effect_oplus(a: Effect, b: Effect) -> Effect:
    if not effect_perp(a, b):
        raise NotPerpendicularError("a ⊕ b is undefined: a + b exceeds I")
    return Effect(a.matrix + b.matrix)


def effect_leq(a: Effect, b: Effect, tol: Tolerance | float | None = None) -> bool:
    """a ≤ b iff b − a has no eigenvalue below −eps."""
    _same_dim(a, b)
    return float(eigenvalues(b.matrix - a.matrix)[0]) >= -config.resolve(tol).eps


def sandwich(a: Effect, m: np.ndarray) -> np.ndarray:
    """a^{1/2} m a^{1/2} for an arbitrary matrix m (a∘ρ when m is a state)."""
    if m.shape != a.matrix.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.matrix.shape} vs {m.shape}")
    return a.sqrt @ m @ a.sqrt


def seq_product(a: Effect, b: Effect) -> Effect:
    """Standard sequential product a∘b: measure a, then b."""
    _same_dim(a, b)
    return Effect(sandwich(a, b.matrix))


def commutes(a: Effect, b: Effect, tol: Tolerance | float | None = None) -> bool:
    if tol is None:
        tol = config.numerics()["commutation_tol"]
    return commutator_norm(a.matrix, b.matrix) <= config.resolve(tol).eps


def is_sharp(a: Effect, tol: Tolerance | float | None = None) -> bool:
    """True for projections (a² = a)."""
    return max_norm(a.matrix @ a.matrix - a.matrix) <= config.resolve(tol).eps


def normalize(p: PartialState) -> State:
    """p / tr(p); the update of a state after an outcome."""
    tr = p.trace
    if tr <= config.default_tolerance().eps:
        raise ZeroProbabilityError(f"cannot normalise a partial state with trace {tr:.3e}")
    return State(p.matrix / tr)


def effect_prob(rho: PartialState, a: Effect) -> float:
    """tr(ρa); real for Hermitian arguments."""
    _same_dim(rho, a)
    value = complex(np.trace(rho.matrix @ a.matrix))
    if abs(value.imag) > config.default_tolerance().eps:
        raise ValidationError(f"tr(ρa) has imaginary part {value.imag:.3e}")
    return value.real


def effect_residual(a: Effect, b: Effect) -> float:
    return max_norm(a.matrix - b.matrix)


def conjugate(a: Effect, u: np.ndarray) -> Effect:
    """u a u† for a unitary u."""
    return Effect(u @ a.matrix @ adjoint(u))
