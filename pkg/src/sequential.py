"""
Sequential products and conditioning of instruments and sub-observables.

Product outcomes are serialized as ``"x⊗y"`` strings; :class:`ProductOutcomeSpace`
keeps the pairing so callers can map back to coordinates.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

from . import config
from .effects import Effect, seq_product
from .errors import DimensionMismatchError, LabelError, PreconditionError, ValidationError
from .hermitian import identity, max_norm, zeros
from .instruments import (
    Instrument,
    SubInstrument,
    as_instrument,
    determined_subobservable,
    is_instrument,
    measured_observable,
    total_channel,
)
from .observables import OutcomeSpace, SubObservable, is_observable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProductOutcomeSpace:
    left: OutcomeSpace
    right: OutcomeSpace

    @property
    def pairs(self) -> Tuple[Tuple[str, str], ...]:
        return tuple((x, y) for x in self.left for y in self.right)

    @property
    def space(self) -> OutcomeSpace:
        return OutcomeSpace(tuple(product_label(x, y) for x, y in self.pairs))

    def __len__(self) -> int:
        return len(self.left) * len(self.right)

    def rectangle(self, delta: Iterable[str], gamma: Iterable[str]) -> Tuple[str, ...]:
        """Labels of the event Δ×Γ."""
        xs = self.left.event(delta)
        ys = self.right.event(gamma)
        return tuple(product_label(x, y) for x in xs for y in ys)


def product_label(x: str, y: str) -> str:
    return f"{x}{config.product_separator()}{y}"


def _same_dim(I: SubInstrument, J: SubInstrument) -> None:
    if I.dim != J.dim:
        raise DimensionMismatchError(f"dimension mismatch: {I.dim} vs {J.dim}")


def instr_seq_product(I: SubInstrument, J: SubInstrument) -> SubInstrument:
    """I∘J: measure I, then J, so (I∘J)(Δ×Γ)(ρ) = J(Γ)[I(Δ)(ρ)]. An Instrument when both are."""
    _same_dim(I, J)
    product = ProductOutcomeSpace(I.space, J.space)
    ops = {product_label(x, y): I.ops[x].then(J.ops[y]) for x, y in product.pairs}
    S = SubInstrument(product.space, ops, kind="sequential")
    return as_instrument(S) if is_instrument(S) else S


def instr_conditioned(J: SubInstrument, I: SubInstrument) -> SubInstrument:
    """(J|I)(Γ)(ρ) = J(Γ)[Ī(ρ)]. An Instrument when both are."""
    _same_dim(I, J)
    channel = total_channel(I)
    S = SubInstrument(J.space, {y: channel.then(op) for y, op in J.ops.items()}, kind="conditioned")
    return as_instrument(S) if is_instrument(S) else S


def measurement_gap(I: SubInstrument, A: SubObservable) -> Tuple[float, str | None]:
    """
    How far I is from measuring the minimal extension A₁ of A.

    Returns ``(residual, extension_label)``. The instrument must carry A's
    labels plus at most one extra outcome; with no extra outcome A itself
    must be an observable.
    """
    if I.dim != A.dim:
        raise DimensionMismatchError(f"dimension mismatch: {I.dim} vs {A.dim}")
    extra = [x for x in I.labels if x not in A.space]
    missing = [x for x in A.labels if x not in I.space]
    if missing or len(extra) > 1:
        raise LabelError(
            f"instrument outcomes {list(I.labels)} are not a one-point extension of {list(A.labels)}"
        )
    measured = determined_subobservable(I, Effect.identity(I.dim))
    gap = max(max_norm(measured[x].matrix - A[x].matrix) for x in A.labels)
    if extra:
        y = extra[0]
        deficit = identity(A.dim) - A.total_matrix()
        return max(gap, max_norm(measured[y].matrix - deficit)), y
    if not is_observable(A):
        return max(gap, max_norm(A.total_matrix() - identity(A.dim))), None
    return gap, None


def _require_measures(I: SubInstrument, A: SubObservable) -> str | None:
    gap, label = measurement_gap(I, A)
    if gap > config.default_tolerance().eps:
        raise PreconditionError(f"instrument does not measure the minimal extension of A (residual {gap:.3e})")
    return label


def sob_seq_product(A: SubObservable, B: SubObservable, I: SubInstrument) -> SubObservable:
    """
    A[I]B(x, y) = I*({x})(b_y) for x ∈ Ω_A, y ∈ Ω_B.

    ``I`` must measure A's minimal extension; its extension outcome is not
    part of the product space.
    """
    if B.dim != I.dim:
        raise DimensionMismatchError(f"dimension mismatch: {I.dim} vs {B.dim}")
    _require_measures(I, A)
    product = ProductOutcomeSpace(A.space, B.space)
    effects = {
        product_label(x, y): Effect(I.ops[x].dual(B[y].matrix)) for x, y in product.pairs
    }
    return SubObservable(product.space, effects)


def sob_conditioned(
    B: SubObservable, I: SubInstrument, A: SubObservable, marginal: str = "extended"
) -> SubObservable:
    """
    (B|I|A)(y) = Ī*(b_y).

    ``marginal="extended"`` sums the dual over every outcome of I, including
    the extension point. ``marginal="original"`` sums over Ω_A only, which is
    A[I]B(Ω_A × {y}).
    """
    if marginal not in ("extended", "original"):
        raise ValidationError(f"marginal must be 'extended' or 'original', got {marginal!r}")
    if B.dim != I.dim:
        raise DimensionMismatchError(f"dimension mismatch: {I.dim} vs {B.dim}")
    _require_measures(I, A)
    outcomes = I.labels if marginal == "extended" else A.labels
    effects = {
        y: Effect(sum((I.ops[x].dual(b.matrix) for x in outcomes), zeros(I.dim)))
        for y, b in B.effects.items()
    }
    return SubObservable(B.space, effects)


def determined_seq_product(I: SubInstrument, a: Effect, b: Effect) -> SubObservable:
    """I_a^*∘I_b^* = I_{a∘b}^*."""
    return determined_subobservable(I, seq_product(a, b))


def theorem41_report(I: Instrument, J: Instrument, a: Effect) -> Dict[str, float]:
    """
    Residuals of the four composition identities for I∘J and (J|I), maximised
    over singleton events:

    - ``composition``: (I∘J)_a^*(x, y) = I*(x)[J_a^*(y)]
    - ``measured``: (I∘J)_I^*(x, y) = I*(x)[Ĵ(y)]
    - ``conditioned``: (J|I)_a^*(y) = I*(Ω)[J_a^*(y)]
    - ``conditioned_measured``: (J|I)_I^*(y) = I*(Ω)[Ĵ(y)]
    """
    _same_dim(I, J)
    product = ProductOutcomeSpace(I.space, J.space)
    seq = instr_seq_product(I, J)
    cond = instr_conditioned(J, I)
    seq_a = determined_subobservable(seq, a)
    seq_unit = measured_observable(seq)
    cond_a = determined_subobservable(cond, a)
    cond_unit = measured_observable(cond)
    J_a = determined_subobservable(J, a)
    J_hat = measured_observable(J)
    I_total = total_channel(I)

    residuals = {"composition": 0.0, "measured": 0.0, "conditioned": 0.0, "conditioned_measured": 0.0}
    for x, y in product.pairs:
        label = product_label(x, y)
        residuals["composition"] = max(
            residuals["composition"], max_norm(seq_a[label].matrix - I.ops[x].dual(J_a[y].matrix))
        )
        residuals["measured"] = max(
            residuals["measured"], max_norm(seq_unit[label].matrix - I.ops[x].dual(J_hat[y].matrix))
        )
    for y in J.labels:
        residuals["conditioned"] = max(
            residuals["conditioned"], max_norm(cond_a[y].matrix - I_total.dual(J_a[y].matrix))
        )
        residuals["conditioned_measured"] = max(
            residuals["conditioned_measured"], max_norm(cond_unit[y].matrix - I_total.dual(J_hat[y].matrix))
        )
    logger.debug("Composition residuals for %s∘%s: %s", I.kind, J.kind, residuals)
    return residuals
