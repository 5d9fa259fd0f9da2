"""
Effect-algebra structure: axiom checking for finite models, the determined
family U_I of an instrument, Sob effect algebras and their closure and
convexity criteria, the sequential-product laws on U_I, and a feasibility
search for Sob-closure of Lüders families.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import config, sampling
from .config import Tolerance
from .effects import (
    Effect,
    State,
    commutes,
    complement,
    effect_leq,
    effect_oplus,
    effect_perp,
    seq_product,
)
from .errors import NotPerpendicularError, PreconditionError, SobEscapeError, ValidationError
from .hermitian import adjoint, eigenvalues, herm_eigendecompose, hermitize, identity, max_norm, zeros
from .instruments import (
    Instrument,
    constant_state_instrument,
    determined_subobservable,
    holevo_instrument,
    luders_instrument,
    measured_observable,
)
from .observables import (
    Observable,
    SubObservable,
    is_observable,
    is_sharp_observable,
    sob_add,
    sob_residual,
    sob_scale,
)

logger = logging.getLogger(__name__)

AXIOMS = ("E1", "E2", "E3", "E4")
SOB_KINDS = ("holevo", "sharp-luders", "constant-state", "explicit-list")


@dataclass
class AxiomResult:
    axiom: str
    passed: bool = True
    checked: int = 0
    witness: Optional[Tuple[Any, ...]] = None
    detail: str = ""

    def fail(self, witness: Tuple[Any, ...], detail: str) -> None:
        if self.passed:
            self.passed = False
            self.witness = witness
            self.detail = detail


class EffectAlgebraModel(ABC):
    """Finite sample of a partial algebra (E, 0, 1, ⊕) with an equality test."""

    elements: Sequence[Any]
    zero: Any
    one: Any

    @abstractmethod
    def perp(self, a, b) -> bool: ...

    @abstractmethod
    def oplus(self, a, b): ...

    def same(self, a, b) -> bool:
        return a == b


class FiniteEffectAlgebraModel(EffectAlgebraModel):
    """Explicit model: ``table[(a, b)]`` is a ⊕ b, and a ⊥ b iff the key exists."""

    def __init__(self, elements: Sequence[Hashable], zero: Hashable, one: Hashable,
                 table: Mapping[Tuple[Hashable, Hashable], Hashable]):
        self.elements = list(elements)
        known = set(self.elements)
        if zero not in known or one not in known:
            raise ValidationError("zero and one must be elements of the model")
        for (a, b), c in table.items():
            if a not in known or b not in known or c not in known:
                raise ValidationError(f"table entry {a!r} ⊕ {b!r} = {c!r} uses an unknown element")
        self.zero = zero
        self.one = one
        self.table = dict(table)

    def perp(self, a, b) -> bool:
        return (a, b) in self.table

    def oplus(self, a, b):
        try:
            return self.table[(a, b)]
        except KeyError:
            raise NotPerpendicularError(f"{a!r} ⊕ {b!r} is undefined") from None


class EffectSpaceModel(EffectAlgebraModel):
    """Sampled effects of E(H) with a ⊥ b iff a + b ≤ I and a ⊕ b = a + b."""

    def __init__(self, elements: Sequence[Effect], tol: Tolerance | float | None = None):
        if not elements:
            raise ValidationError("model needs at least one effect")
        dim = elements[0].dim
        self.elements = list(elements)
        self.zero = Effect.zero(dim)
        self.one = Effect.identity(dim)
        self.tol = config.resolve(tol)

    @classmethod
    def sampled(cls, rng: np.random.Generator, dim: int, count: int) -> "EffectSpaceModel":
        """``count`` random effects plus their complements, 0 and I."""
        drawn = [sampling.random_effect(rng, dim) for _ in range(count)]
        return cls(drawn + [complement(a) for a in drawn] + [Effect.zero(dim), Effect.identity(dim)])

    def perp(self, a: Effect, b: Effect) -> bool:
        return effect_perp(a, b)

    def oplus(self, a: Effect, b: Effect) -> Effect:
        return effect_oplus(a, b)

    def same(self, a: Effect, b: Effect) -> bool:
        return max_norm(a.matrix - b.matrix) <= self.tol.eps


class DeterminedFamily(EffectAlgebraModel):
    """
    U_I = {I_a^* : a ∈ E(H)}, represented by the generating effects.

    I_a^* ⊥ I_b^* iff a ⊥ b, with I_a^* ⊕ I_b^* = I_{a+b}^*. Two members are
    equal when their determined sub-observables agree, which is tested by
    applying the dual to a − b.
    """

    def __init__(self, instrument: Instrument, generators: Sequence[Effect],
                 tol: Tolerance | float | None = None):
        self.instrument = instrument
        dim = instrument.dim
        self.elements = list(generators)
        self.zero = Effect.zero(dim)
        self.one = Effect.identity(dim)
        self.tol = config.resolve(tol)

    @classmethod
    def sampled(cls, instrument: Instrument, rng: np.random.Generator, count: int,
                tol: Tolerance | float | None = None) -> "DeterminedFamily":
        """``count`` random generators plus their complements, 0 and I."""
        dim = instrument.dim
        drawn = [sampling.random_effect(rng, dim) for _ in range(count)]
        generators = drawn + [complement(a) for a in drawn] + [Effect.zero(dim), Effect.identity(dim)]
        return cls(instrument, generators, tol)

    def member(self, a: Effect) -> SubObservable:
        return determined_subobservable(self.instrument, a)

    def perp(self, a: Effect, b: Effect) -> bool:
        return effect_perp(a, b)

    def oplus(self, a: Effect, b: Effect) -> Effect:
        return effect_oplus(a, b)

    def distance(self, a: Effect, b: Effect) -> float:
        diff = a.matrix - b.matrix
        return max(max_norm(op.dual(diff)) for op in self.instrument.ops.values())

    def same(self, a: Effect, b: Effect) -> bool:
        return self.distance(a, b) <= self.tol.eps


def check_effect_algebra_axioms(model: EffectAlgebraModel) -> Dict[str, AxiomResult]:
    """
    Evaluate E1-E4 over every pair and triple of ``model.elements``.

    Witnesses are tuples of element indices.
    """
    elems = list(model.elements)
    n = len(elems)
    results = {name: AxiomResult(name) for name in AXIOMS}
    perp = [[model.perp(elems[i], elems[j]) for j in range(n)] for i in range(n)]
    sums: Dict[Tuple[int, int], Any] = {
        (i, j): model.oplus(elems[i], elems[j]) for i in range(n) for j in range(n) if perp[i][j]
    }

    e1 = results["E1"]
    for (i, j), s in sums.items():
        e1.checked += 1
        if not perp[j][i]:
            e1.fail((i, j), "a ⊥ b but not b ⊥ a")
        elif not model.same(s, sums[(j, i)]):
            e1.fail((i, j), "a ⊕ b differs from b ⊕ a")

    e2 = results["E2"]
    for (i, j), s in sums.items():
        for k in range(n):
            if not model.perp(s, elems[k]):
                continue
            e2.checked += 1
            if not perp[j][k]:
                e2.fail((i, j, k), "(a ⊕ b) ⊥ c but not b ⊥ c")
                continue
            bc = sums[(j, k)]
            if not model.perp(elems[i], bc):
                e2.fail((i, j, k), "(a ⊕ b) ⊥ c but not a ⊥ (b ⊕ c)")
            elif not model.same(model.oplus(elems[i], bc), model.oplus(s, elems[k])):
                e2.fail((i, j, k), "a ⊕ (b ⊕ c) differs from (a ⊕ b) ⊕ c")

    e3 = results["E3"]
    for i in range(n):
        e3.checked += 1
        found = [j for j in range(n) if perp[i][j] and model.same(sums[(i, j)], model.one)]
        if not found:
            e3.fail((i,), "no complement a′ with a ⊕ a′ = 1 among the elements")
            continue
        for j in found[1:]:
            if not model.same(elems[found[0]], elems[j]):
                e3.fail((i, found[0], j), "complement is not unique")
                break

    e4 = results["E4"]
    for i in range(n):
        if model.perp(elems[i], model.one):
            e4.checked += 1
            if not model.same(elems[i], model.zero):
                e4.fail((i,), "a ⊥ 1 but a ≠ 0")
    return results


def determined_family_oplus(F: DeterminedFamily, a: Effect, b: Effect) -> SubObservable:
    """I_a^* ⊕ I_b^* = I_{a+b}^*."""
    return F.member(effect_oplus(a, b))


def check_morphism(F: DeterminedFamily, pairs: Sequence[Tuple[Effect, Effect]]) -> Dict[str, Any]:
    """
    Check that a ↦ I_a^* preserves ⊕, the unit and complements.

    Returns the largest residual per law and the indices of pairs whose
    additivity residual exceeds the family tolerance.
    """
    I = F.instrument
    unit = identity(I.dim)
    measured = measured_observable(I)
    residuals = {"additivity": 0.0, "unit": 0.0, "complement": 0.0}
    failures: List[int] = []
    for index, (a, b) in enumerate(pairs):
        if not effect_perp(a, b):
            raise PreconditionError(f"pair {index} is not perpendicular")
        joint = determined_family_oplus(F, a, b)
        Fa, Fb = F.member(a), F.member(b)
        additivity = max(
            max_norm(joint[x].matrix - Fa[x].matrix - Fb[x].matrix) for x in I.labels
        )
        if additivity > F.tol.eps:
            failures.append(index)
        residuals["additivity"] = max(residuals["additivity"], additivity)
        Fa_prime = F.member(complement(a))
        residuals["complement"] = max(
            residuals["complement"],
            max(max_norm(measured[x].matrix - Fa[x].matrix - Fa_prime[x].matrix) for x in I.labels),
        )
    residuals["unit"] = sob_residual(F.member(Effect(unit)), measured)
    return {"residuals": residuals, "failures": failures, "pairs": len(pairs)}


@dataclass(frozen=True, eq=False)
class SobFamilySpec:
    """
    A family of sub-observables tested for the Sob effect-algebra conditions.

    ``params`` by kind:

    - ``holevo``: ``alpha`` (State), ``observable`` (Observable)
    - ``sharp-luders``: ``observable`` (projective Observable)
    - ``constant-state``: ``instrument`` (Instrument), ``alpha`` (State)
    - ``explicit-list``: ``members`` (sequence of SubObservable)
    """

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in SOB_KINDS:
            raise ValidationError(f"unknown Sob family kind {self.kind!r}; expected one of {SOB_KINDS}")
        required = {
            "holevo": ("alpha", "observable"),
            "sharp-luders": ("observable",),
            "constant-state": ("instrument", "alpha"),
            "explicit-list": ("members",),
        }[self.kind]
        missing = [k for k in required if k not in self.params]
        if missing:
            raise ValidationError(f"{self.kind} family is missing parameter(s) {missing}")
        if self.kind == "sharp-luders" and not is_sharp_observable(self.params["observable"]):
            raise ValidationError("sharp-luders family needs an observable whose effects are projections")
        if self.kind == "explicit-list":
            members = list(self.params["members"])
            if not members:
                raise ValidationError("explicit-list family is empty")
            spaces = {m.space for m in members}
            if len(spaces) != 1:
                raise ValidationError("explicit-list members must share one outcome space")
            observables = [i for i, m in enumerate(members) if is_observable(m)]
            if len(observables) != 1:
                raise ValidationError(
                    f"explicit-list family must contain exactly one observable, found {len(observables)}"
                )

    @property
    def members(self) -> List[SubObservable]:
        return list(self.params["members"])

    @property
    def z_index(self) -> int:
        return next(i for i, m in enumerate(self.members) if is_observable(m))

    @cached_property
    def instrument(self) -> Instrument:
        """The instrument whose determined family this is (parameterized kinds only)."""
        p = self.params
        if self.kind == "holevo":
            return holevo_instrument(p["alpha"], p["observable"])
        if self.kind == "sharp-luders":
            return luders_instrument(p["observable"])
        if self.kind == "constant-state":
            return constant_state_instrument(p["instrument"], p["alpha"])
        raise PreconditionError("an explicit-list family has no defining instrument")

    @property
    def dim(self) -> int:
        if self.kind == "explicit-list":
            return self.members[0].dim
        return self.instrument.dim

    def member(self, a: Effect) -> SubObservable:
        return determined_subobservable(self.instrument, a)


@dataclass
class ClosureVerdict:
    """Outcome of a Sob-closure check: ``witness``, ``criterion-violated`` or ``unknown``."""

    status: str
    witness: Any = None
    residual: float = 0.0
    detail: str = ""


def _sum_in_sob(A: SubObservable, B: SubObservable) -> SubObservable:
    try:
        return sob_add(A, B)
    except SobEscapeError as exc:
        raise PreconditionError(f"sum of members escapes Sob(H): {exc}") from exc


def _find_member(members: Sequence[SubObservable], target: SubObservable, eps: float) -> Optional[int]:
    for index, member in enumerate(members):
        if member.space == target.space and sob_residual(member, target) <= eps:
            return index
    return None


def check_sob_closure(spec: SobFamilySpec, a, b, rng: np.random.Generator | None = None) -> ClosureVerdict:
    """
    Is the sum of two members again a member?

    For parameterized kinds ``a`` and ``b`` are effects naming I_a^* and
    I_b^*; for ``explicit-list`` they are members. Raises
    :class:`PreconditionError` when the sum is not a sub-observable.
    """
    eps = config.default_tolerance().eps
    if spec.kind == "explicit-list":
        total = _sum_in_sob(a, b)
        index = _find_member(spec.members, total, eps)
        if index is None:
            return ClosureVerdict("criterion-violated", detail="A + B ∈ Sob(H) is not in the list")
        return ClosureVerdict("witness", witness=index)

    total = _sum_in_sob(spec.member(a), spec.member(b))
    dim = spec.dim
    if spec.kind == "holevo":
        alpha: State = spec.params["alpha"]
        weight = float(np.trace(alpha.matrix @ (a.matrix + b.matrix)).real)
        c = Effect(weight * identity(dim))
    elif spec.kind == "sharp-luders":
        A: Observable = spec.params["observable"]
        s = a.matrix + b.matrix
        c = Effect(hermitize(sum((p.matrix @ s @ p.matrix for p in A.effects.values()), zeros(dim))))
    else:
        source: Instrument = spec.params["instrument"]
        alpha = spec.params["alpha"]
        sigmas = [op.apply(alpha.matrix) for op in source.ops.values()]
        s = a.matrix + b.matrix
        targets = np.array([np.trace(sig @ s).real for sig in sigmas])
        masses = np.array([np.trace(sig).real for sig in sigmas])
        if np.any(targets > masses + eps) or np.any(targets < -eps):
            return ClosureVerdict(
                "criterion-violated", detail="some tr[I(x)(α)(a+b)] lies outside [0, tr I(x)(α)]"
            )
        if effect_perp(a, b):
            c = Effect(s)
        else:
            c = find_effect_preimage(
                lambda m: np.array([np.trace(sig @ m).real for sig in sigmas]),
                targets,
                dim,
                rng=rng,
                refine=True,
            )
            if c is None:
                return ClosureVerdict("unknown", detail="no effect c found by alternating projections")
    return ClosureVerdict("witness", witness=c, residual=sob_residual(spec.member(c), total))


def check_convexity(spec: SobFamilySpec, trials: int, seed: int,
                    lambdas: Sequence[float] = (0.5,), tol: Tolerance | float | None = None) -> Dict[str, Any]:
    """
    Scalar criterion for convexity: λA must be a member whenever A is.

    For instrument families λ·I_a^* is compared with I_{λa}^* on sampled
    (a, λ); explicit lists are searched for λA for every member and every
    λ in ``lambdas``.
    """
    eps = config.resolve(tol).eps
    verdict: Dict[str, Any] = {"convex": True, "checked": 0, "witness": None, "max_residual": 0.0}
    if spec.kind == "explicit-list":
        members = spec.members
        for index, member in enumerate(members):
            for lam in lambdas:
                verdict["checked"] += 1
                if _find_member(members, sob_scale(member, lam), config.default_tolerance().eps) is None:
                    verdict["convex"] = False
                    verdict["witness"] = {"member": index, "lambda": lam}
                    return verdict
        return verdict

    return check_determined_convexity(spec.instrument, trials, seed, eps)


def check_determined_convexity(I: Instrument, trials: int, seed: int,
                               tol: Tolerance | float | None = None) -> Dict[str, Any]:
    """λ·I_a^* = I_{λa}^* on ``trials`` sampled pairs (a, λ)."""
    eps = config.resolve(tol).eps
    verdict: Dict[str, Any] = {"convex": True, "checked": 0, "witness": None, "max_residual": 0.0}
    for t in range(trials):
        rng = sampling.trial_rng(seed, t)
        a = sampling.random_effect(rng, I.dim)
        lam = float(rng.uniform(0.0, 1.0))
        residual = sob_residual(
            sob_scale(determined_subobservable(I, a), lam), determined_subobservable(I, Effect(lam * a.matrix))
        )
        verdict["checked"] += 1
        verdict["max_residual"] = max(verdict["max_residual"], residual)
        if residual > eps and verdict["convex"]:
            verdict["convex"] = False
            verdict["witness"] = {"trial": t, "lambda": lam, "residual": residual}
    return verdict


def check_sob_effect_algebra(spec: SobFamilySpec) -> Dict[str, AxiomResult]:
    """Conditions S1-S3 for an explicit list. Witnesses are member indices."""
    if spec.kind != "explicit-list":
        raise PreconditionError("S1-S3 are checked directly only for explicit lists")
    eps = config.default_tolerance().eps
    members = spec.members
    z = spec.z_index
    Z = members[z]
    results = {name: AxiomResult(name) for name in ("S1", "S2", "S3")}
    results["S1"].checked = len(members)
    results["S1"].witness = (z,)

    s2 = results["S2"]
    for i, A in enumerate(members):
        s2.checked += 1
        diffs = {x: Z[x].matrix - A[x].matrix for x in Z.labels}
        if any(float(eigenvalues(d)[0]) < -eps for d in diffs.values()):
            s2.fail((i,), "Z − A is not a sub-observable")
            continue
        prime = SubObservable(Z.space, {x: Effect(d) for x, d in diffs.items()})
        if _find_member(members, prime, eps) is None:
            s2.fail((i,), "Z − A is not in the family")

    s3 = results["S3"]
    for i in range(len(members)):
        for j in range(i, len(members)):
            try:
                total = sob_add(members[i], members[j])
            except SobEscapeError:
                continue
            s3.checked += 1
            if _find_member(members, total, eps) is None:
                s3.fail((i, j), "A + B ∈ Sob(H) is not in the family")
    return results


def sob_family_model(spec: SobFamilySpec) -> FiniteEffectAlgebraModel:
    """Table model (U, 0, Z, ⊕) over member indices, with A ⊥ B iff A + B ∈ Sob(H)."""
    if spec.kind != "explicit-list":
        raise PreconditionError("only explicit lists can be tabulated")
    eps = config.default_tolerance().eps
    members = spec.members
    zero_index = next(
        (i for i, m in enumerate(members) if max(max_norm(e.matrix) for e in m.effects.values()) <= eps),
        None,
    )
    if zero_index is None:
        raise PreconditionError("the family has no zero sub-observable")
    table: Dict[Tuple[int, int], int] = {}
    for i in range(len(members)):
        for j in range(len(members)):
            try:
                total = sob_add(members[i], members[j])
            except SobEscapeError:
                continue
            k = _find_member(members, total, eps)
            if k is not None:
                table[(i, j)] = k
    return FiniteEffectAlgebraModel(list(range(len(members))), zero_index, spec.z_index, table)


def _hermitian_basis(dim: int) -> List[np.ndarray]:
    """Orthonormal basis of the d²-dimensional real space of Hermitian matrices."""
    basis = []
    for j in range(dim):
        m = zeros(dim)
        m[j, j] = 1.0
        basis.append(m)
    for j in range(dim):
        for k in range(j + 1, dim):
            re = zeros(dim)
            re[j, k] = re[k, j] = 1.0 / np.sqrt(2.0)
            im = zeros(dim)
            im[j, k] = -1j / np.sqrt(2.0)
            im[k, j] = 1j / np.sqrt(2.0)
            basis.extend([re, im])
    return basis


def _clip_to_effect(m: np.ndarray) -> np.ndarray:
    values, vectors = herm_eigendecompose(hermitize(m))
    return hermitize((vectors * np.clip(values, 0.0, 1.0)) @ adjoint(vectors))


def find_effect_preimage(
    linear_map: Callable[[np.ndarray], np.ndarray],
    target: np.ndarray,
    dim: int,
    rng: np.random.Generator | None = None,
    restarts: int = 3,
    max_iter: int = 400,
    tol: float | None = None,
    refine: bool = False,
    refine_iter: int = 2000,
) -> Optional[Effect]:
    """
    Search for an effect c with ``linear_map(c) = target``.

    ``linear_map`` must be real-linear on Hermitian matrices and return a
    real vector. The least-squares solution is checked for consistency,
    then alternating projections between the affine solution set and
    {0 ≤ c ≤ I} run from it and from ``restarts`` random perturbations.
    A point within ``tol`` (``feasibility_tol`` by default) is accepted.

    With ``refine`` the accepted point is pushed on until it solves the
    constraints exactly and lies within eps of the effect set; if that
    stalls the result is ``None``. Returns ``None`` when nothing feasible is
    found, which is not a proof that no solution exists.
    """
    tol = float(config.numerics()["feasibility_tol"]) if tol is None else tol
    eps = config.default_tolerance().eps
    basis = _hermitian_basis(dim)
    M = np.column_stack([np.asarray(linear_map(e), dtype=np.float64).reshape(-1) for e in basis])
    t = np.asarray(target, dtype=np.float64).reshape(-1)
    pinv = np.linalg.pinv(M)
    x0 = pinv @ t
    if np.linalg.norm(M @ x0 - t, ord=np.inf) > tol:
        logger.debug("Constraints have no Hermitian solution (residual %.3e)",
                     np.linalg.norm(M @ x0 - t, ord=np.inf))
        return None

    def to_matrix(x: np.ndarray) -> np.ndarray:
        return sum((xi * e for xi, e in zip(x, basis)), zeros(dim))

    def to_vector(m: np.ndarray) -> np.ndarray:
        return np.array([np.real(np.vdot(e, m)) for e in basis])

    def to_affine(v: np.ndarray) -> np.ndarray:
        return v - pinv @ (M @ v - t)

    def polish(y: np.ndarray) -> Optional[Effect]:
        for _ in range(refine_iter):
            x = to_matrix(to_affine(to_vector(y)))
            values = eigenvalues(x)
            if values[0] >= -eps and values[-1] <= 1.0 + eps:
                return Effect(x)
            y = _clip_to_effect(x)
        logger.debug("Preimage refinement stalled after %d iterations", refine_iter)
        return None

    if np.linalg.matrix_rank(M) == len(basis):
        # Unique Hermitian solution: it is either an effect or nothing is.
        restarts, max_iter = 0, 1
    rng = rng if rng is not None else sampling.make_rng(0)
    starts = [x0] + [x0 + rng.standard_normal(x0.shape) * 0.5 for _ in range(restarts)]
    for start in starts:
        x = to_affine(start)
        for _ in range(max_iter):
            y = _clip_to_effect(to_matrix(x))
            yv = to_vector(y)
            if np.linalg.norm(M @ yv - t, ord=np.inf) <= tol:
                return polish(y) if refine else Effect(y)
            step = to_affine(yv)
            if np.linalg.norm(step - x) < 1e-14:
                break
            x = step
    return None


def luders_constraints(A: Observable) -> Callable[[np.ndarray], np.ndarray]:
    """c ↦ (a_x^{1/2} c a_x^{1/2})_x flattened to a real vector."""
    roots = [a.sqrt for a in A.effects.values()]

    def apply(c: np.ndarray) -> np.ndarray:
        blocks = [r @ c @ r for r in roots]
        return np.concatenate([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in blocks])

    return apply


def search_luders_counterexample(
    A: Observable, trials: int, seed: int, scale: float = 0.75
) -> Dict[str, Any]:
    """
    Look for effects a, b with L_a^* + L_b^* ∈ Sob(H) but no effect c with
    L_c^* = L_a^* + L_b^*.

    Trials whose sum leaves Sob(H) are skipped. Perpendicular pairs are
    solved by c = a + b. Every other pair goes through
    :func:`find_effect_preimage`; a failure there is reported as a
    candidate, not as a counterexample.
    """
    if is_sharp_observable(A):
        logger.info("Observable is sharp; every admissible pair should have a witness")
    L = luders_instrument(A)
    constraints = luders_constraints(A)
    report: Dict[str, Any] = {
        "trials": trials,
        "admissible": 0,
        "trivial": 0,
        "feasible": 0,
        "candidates": [],
    }
    for t in range(trials):
        rng = sampling.trial_rng(seed, t)
        a = sampling.random_effect(rng, A.dim, scale)
        b = sampling.random_effect(rng, A.dim, scale)
        s = a.matrix + b.matrix
        total = sum((r @ s @ r for r in (e.sqrt for e in A.effects.values())), zeros(A.dim))
        if float(eigenvalues(total)[-1]) > 1.0 + config.default_tolerance().eps:
            continue
        report["admissible"] += 1
        if effect_perp(a, b):
            report["trivial"] += 1
            report["feasible"] += 1
            continue
        c = find_effect_preimage(constraints, constraints(s), A.dim, rng=rng)
        if c is not None:
            report["feasible"] += 1
            continue
        logger.debug("Trial %d: no effect c found for L_a^* + L_b^*", t)
        report["candidates"].append({"trial": t, "seed": seed + t})
    admissible = report["admissible"]
    report["feasibility_rate"] = report["feasible"] / admissible if admissible else 1.0
    report["measured_ok"] = sob_residual(measured_observable(L), A) <= config.default_tolerance().eps
    return report


def _sob_gap(A: SubObservable, B: SubObservable) -> float:
    """How far A ≤ B is from holding: max over outcomes of −λ_min(b_x − a_x), floored at 0."""
    return max(max(0.0, -float(eigenvalues(B[x].matrix - A[x].matrix)[0])) for x in A.labels)


def check_theorem36(
    I: Instrument,
    a: Effect,
    b: Effect,
    c: Effect,
    lambdas: Sequence[float] = (0.5, 0.5),
    bs: Sequence[Effect] | None = None,
) -> List[Dict[str, Any]]:
    """
    Evaluate the eight laws of the sequential product I_a^*∘I_b^* = I_{a∘b}^*.

    Each entry carries ``clause``, ``applicable`` (the side condition held)
    and ``residual``: an equality residual, or for the order laws the
    amount by which the inequality is violated.
    """
    def F(e: Effect | np.ndarray) -> SubObservable:
        return determined_subobservable(I, e if isinstance(e, Effect) else Effect(e))

    def pointwise(A: SubObservable, B: SubObservable) -> float:
        return sob_residual(A, B)

    def plain_sum(*subs: Tuple[float, SubObservable]) -> Dict[str, np.ndarray]:
        return {x: sum((w * S[x].matrix for w, S in subs), zeros(I.dim)) for x in I.labels}

    def against(A: SubObservable, sums: Dict[str, np.ndarray]) -> float:
        return max(max_norm(A[x].matrix - sums[x]) for x in I.labels)

    eps = config.default_tolerance().eps
    bs = list(bs) if bs is not None else [b, c]
    results: List[Dict[str, Any]] = []

    def record(clause: int, applicable: bool, residual: float = 0.0, note: str = "") -> None:
        results.append({"clause": clause, "applicable": applicable, "residual": residual, "note": note})

    if effect_perp(b, c):
        lhs = F(seq_product(a, Effect(b.matrix + c.matrix)))
        record(1, True, against(lhs, plain_sum((1.0, F(seq_product(a, b))), (1.0, F(seq_product(a, c))))))
    else:
        record(1, False, note="b and c are not perpendicular")

    weights = list(lambdas)
    if len(weights) == len(bs) and all(0.0 <= w <= 1.0 for w in weights) and abs(sum(weights) - 1.0) <= eps:
        mix = Effect(sum((w * e.matrix for w, e in zip(weights, bs)), zeros(I.dim)))
        lhs = F(seq_product(a, mix))
        rhs = plain_sum(*[(w, F(seq_product(a, e))) for w, e in zip(weights, bs)])
        record(2, True, against(lhs, rhs))
    else:
        record(2, False, note="weights must lie in [0, 1], sum to 1 and match the effects")

    unit = Effect.identity(I.dim)
    Fa = F(a)
    record(3, True, max(pointwise(F(seq_product(unit, a)), Fa), pointwise(F(seq_product(a, unit)), Fa)))

    if max_norm(seq_product(a, b).matrix) <= eps:
        record(4, True, pointwise(F(seq_product(a, b)), F(seq_product(b, a))))
    else:
        record(4, False, note="a∘b ≠ 0")

    if commutes(a, b):
        record(5, True, pointwise(F(seq_product(a, seq_product(b, c))), F(seq_product(seq_product(a, b), c))))
    else:
        record(5, False, note="a and b do not commute")

    if commutes(a, c) and commutes(b, c):
        ab = seq_product(a, b)
        residual = pointwise(F(seq_product(c, ab)), F(seq_product(ab, c)))
        if effect_perp(a, b):
            s = Effect(a.matrix + b.matrix)
            residual = max(residual, pointwise(F(seq_product(c, s)), F(seq_product(s, c))))
        record(6, True, residual)
    else:
        record(6, False, note="c does not commute with both a and b")

    record(7, True, _sob_gap(F(seq_product(a, b)), Fa))

    if effect_leq(a, b):
        record(8, True, _sob_gap(F(seq_product(c, a)), F(seq_product(c, b))))
    else:
        record(8, False, note="a ≰ b")
    return results
