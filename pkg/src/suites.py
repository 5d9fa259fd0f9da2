"""
Property suites run by ``qmi verify``.

Each suite takes a :class:`SuiteContext` and returns :class:`CheckResult`
entries. Random inputs come from ``trial_rng(seed, index)`` so every trial
can be replayed alone; instruments named in the scenario are checked
alongside the sampled ones.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from . import config
from .effect_algebra import (
    DeterminedFamily,
    EffectSpaceModel,
    FiniteEffectAlgebraModel,
    SobFamilySpec,
    check_convexity,
    check_determined_convexity,
    check_effect_algebra_axioms,
    check_morphism,
    check_sob_closure,
    check_sob_effect_algebra,
    check_theorem36,
    sob_family_model,
)
from .effects import Effect, State, effect_prob, normalize, sandwich, seq_product
from .errors import PreconditionError
from .hermitian import commutator_norm, identity, max_norm, min_eigenvalue
from .instruments import (
    Instrument,
    SubInstrument,
    apply,
    constant_state_instrument,
    determined_subobservable,
    dual_apply,
    finite_holevo_instrument,
    holevo_instrument,
    instr_distribution,
    luders_instrument,
    measured_observable,
    minimal_extension_instrument,
)
from .observables import (
    OutcomeSpace,
    SubObservable,
    distribution,
    eval_event,
    minimal_extension,
    restrict,
    sob_residual,
    zero_subobservable,
)
from .report import CheckResult
from .sampling import (
    INSTRUMENT_KINDS,
    pick_dimension,
    random_annihilating_pair,
    random_commuting_effects,
    random_effect,
    random_instrument,
    random_instrument_of_kind,
    random_leq_pair,
    random_observable,
    random_perp_pair,
    random_projective_observable,
    random_state,
    random_state_family,
    random_subinstrument,
    random_subobservable,
    random_weights,
    trial_rng,
)
from .sequential import (
    determined_seq_product,
    instr_seq_product,
    measurement_gap,
    product_label,
    theorem41_report,
)

logger = logging.getLogger(__name__)


@dataclass
class SuiteContext:
    seed: int
    trials: int
    tol: float
    instruments: Dict[str, SubInstrument] = field(default_factory=dict)

    def rng(self, index: int) -> np.random.Generator:
        return trial_rng(self.seed, index)

    @property
    def product_tol(self) -> float:
        """Threshold for identities that compose several square roots."""
        return self.tol * float(config.suite_settings()["product_factor"])

    @property
    def commutator_tol(self) -> float:
        return self.tol * float(config.suite_settings()["commutator_factor"])

    def named_instruments(self) -> Dict[str, Instrument]:
        return {name: I for name, I in self.instruments.items() if isinstance(I, Instrument)}


def _random_event(rng: np.random.Generator, labels: Sequence[str]) -> Tuple[str, ...]:
    mask = rng.random(len(labels)) < 0.5
    return tuple(x for x, keep in zip(labels, mask) if keep)


def _pointwise(A: SubObservable, matrices: Dict[str, np.ndarray]) -> float:
    return max(max_norm(A[x].matrix - matrices[x]) for x in A.labels)


def _outcomes(rng: np.random.Generator, low: int = 2, high: int = 3) -> int:
    return int(rng.integers(low, high + 1))


# --- duality -----------------------------------------------------------------


def _duality_trial(ctx: SuiteContext, I: Instrument, rng: np.random.Generator,
                   results: Sequence[CheckResult], witness: Dict) -> None:
    dual, unital, factor, additive = results
    dim = I.dim
    rho = random_state(rng, dim)
    a = random_effect(rng, dim)
    delta = _random_event(rng, I.labels)
    gamma = tuple(x for x in I.labels if x not in delta)

    after = apply(I, delta, rho)
    lhs = effect_prob(rho, dual_apply(I, delta, a))
    rhs = float(np.trace(after.matrix @ a.matrix).real)
    dual.observe(abs(lhs - rhs), ctx.tol, {**witness, "event": list(delta)})

    unit = dual_apply(I, I.labels, Effect.identity(dim))
    unital.observe(max_norm(unit.matrix - identity(dim)), ctx.tol, witness)

    if after.trace > config.default_tolerance().eps:
        lhs = effect_prob(rho, eval_event(determined_subobservable(I, a), delta))
        rhs = after.trace * effect_prob(normalize(after), a)
        factor.observe(abs(lhs - rhs), ctx.tol, {**witness, "event": list(delta)})

    whole = apply(I, I.labels, rho).matrix
    split = apply(I, delta, rho).matrix + apply(I, gamma, rho).matrix
    additive.observe(max_norm(whole - split), ctx.tol, witness)


def duality(ctx: SuiteContext) -> List[CheckResult]:
    results = [
        CheckResult("duality", params={"dims": [2, 3, 4], "kinds": list(INSTRUMENT_KINDS)},
                    citation="tr[ρ I*(Δ)(a)] = tr[I(Δ)(ρ) a]"),
        CheckResult("dual-unitality", citation="I*(Ω)(I) = I"),
        CheckResult("probability-factorization",
                    citation="tr[ρ I_a^*(Δ)] = tr[I(Δ)(ρ)] · tr[(I(Δ)(ρ))~ a]"),
        CheckResult("instrument-additivity", citation="I(Ω)(ρ) = I(Δ)(ρ) + I(Ω∖Δ)(ρ)"),
    ]
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = pick_dimension(rng)
        kind = INSTRUMENT_KINDS[t % len(INSTRUMENT_KINDS)]
        I = random_instrument_of_kind(rng, dim, kind, _outcomes(rng))
        _duality_trial(ctx, I, rng, results, {"trial": t, "kind": kind, "dim": dim})
    for name, I in ctx.named_instruments().items():
        for t in range(ctx.trials):
            _duality_trial(ctx, I, ctx.rng(t), results, {"instrument": name, "trial": t})
    return results


# --- sequential product of effects -------------------------------------------


def lemma21(ctx: SuiteContext) -> List[CheckResult]:
    distributive = CheckResult("lemma21-distributive", citation="a∘(b ⊕ c) = a∘b ⊕ a∘c")
    unit = CheckResult("lemma21-unit", citation="I∘a = a∘I = a")
    annihilating = CheckResult(
        "lemma21-annihilating", params={"threshold": ctx.commutator_tol},
        citation="a∘b = 0 implies ab = ba",
    )
    associative = CheckResult(
        "lemma21-associative", params={"threshold": ctx.product_tol},
        citation="ab = ba implies a∘(b∘c) = (a∘b)∘c",
    )
    commuting = CheckResult(
        "lemma21-commuting", params={"threshold": ctx.product_tol},
        citation="c commuting with a and b commutes with a∘b and with a ⊕ b",
    )
    below = CheckResult("lemma21-below", citation="a∘b ≤ a")
    monotone = CheckResult("lemma21-monotone", citation="a ≤ b implies c∘a ≤ c∘b")
    symmetric = CheckResult("seq-product-commuting", citation="ab = ba implies a∘b = b∘a")

    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = int(rng.choice((2, 3)))
        w = {"trial": t, "dim": dim}
        a = random_effect(rng, dim)
        b, c = random_perp_pair(rng, dim)

        lhs = seq_product(a, Effect(b.matrix + c.matrix)).matrix
        distributive.observe(max_norm(lhs - seq_product(a, b).matrix - seq_product(a, c).matrix), ctx.tol, w)

        one = Effect.identity(dim)
        unit.observe(
            max(max_norm(seq_product(one, a).matrix - a.matrix), max_norm(seq_product(a, one).matrix - a.matrix)),
            ctx.tol, w,
        )

        below.observe(max(0.0, -min_eigenvalue(a.matrix - seq_product(a, b).matrix)), ctx.tol, w)

        lo, hi = random_leq_pair(rng, dim)
        gap = seq_product(c, hi).matrix - seq_product(c, lo).matrix
        monotone.observe(max(0.0, -min_eigenvalue(gap)), ctx.tol, w)

        p, q = random_annihilating_pair(rng, dim)
        annihilating.observe(commutator_norm(p.matrix, q.matrix), ctx.commutator_tol,
                             {**w, "product_norm": max_norm(seq_product(p, q).matrix)})

        u, v, z = random_commuting_effects(rng, dim, 3)
        r = random_effect(rng, dim)
        associative.observe(
            max_norm(seq_product(u, seq_product(v, r)).matrix - seq_product(seq_product(u, v), r).matrix),
            ctx.product_tol, w,
        )
        v_perp = Effect(sandwich(Effect(identity(dim) - u.matrix), v.matrix))
        commuting.observe(
            max(
                commutator_norm(z.matrix, seq_product(u, v_perp).matrix),
                commutator_norm(z.matrix, u.matrix + v_perp.matrix),
            ),
            ctx.product_tol, w,
        )
        symmetric.observe(max_norm(seq_product(u, v).matrix - seq_product(v, u).matrix), ctx.tol, w)

    return [distributive, unit, annihilating, associative, commuting, below, monotone, symmetric]


# --- determined families -------------------------------------------------------


def _axiom_result(name: str, axioms: Dict, citation: str, params: Dict | None = None) -> CheckResult:
    result = CheckResult(name, params=params or {}, citation=citation)
    result.trials = sum(r.checked for r in axioms.values())
    for r in axioms.values():
        if not r.passed:
            result.fail({"axiom": r.axiom, "witness": list(r.witness or ()), "detail": r.detail})
    return result


def _family_checks(ctx: SuiteContext, label: str, I: Instrument, rng: np.random.Generator) -> List[CheckResult]:
    generators = int(config.suite_settings()["axiom_generators"])
    F = DeterminedFamily.sampled(I, rng, generators, tol=ctx.tol)
    axioms = _axiom_result(
        f"determined-family-axioms[{label}]", check_effect_algebra_axioms(F),
        "(U_I, 0, I_I^*, ⊕) is an effect algebra", {"generators": generators, "dim": I.dim},
    )
    pairs = [random_perp_pair(ctx.rng(t), I.dim) for t in range(ctx.trials)]
    morphism = CheckResult(
        f"determined-family-morphism[{label}]", params={"dim": I.dim},
        citation="a ↦ I_a^* preserves ⊕, the unit and complements",
    )
    if pairs:
        verdict = check_morphism(F, pairs)
        morphism.trials = verdict["pairs"]
        morphism.max_residual = max(verdict["residuals"].values())
        for index in verdict["failures"]:
            morphism.fail({"pair": index, "law": "additivity"})
        for law in ("unit", "complement"):
            if verdict["residuals"][law] > ctx.tol:
                morphism.fail({"law": law, "residual": verdict["residuals"][law]})
    return [axioms, morphism]


def thm32(ctx: SuiteContext) -> List[CheckResult]:
    results: List[CheckResult] = []
    for k, kind in enumerate(INSTRUMENT_KINDS):
        rng = ctx.rng(k)
        I = random_instrument_of_kind(rng, 2, kind, 2)
        results.extend(_family_checks(ctx, kind, I, rng))
    for name, I in ctx.named_instruments().items():
        results.extend(_family_checks(ctx, name, I, ctx.rng(0)))
    return results


# --- Sob closure -----------------------------------------------------------------


def _observe_closure(result: CheckResult, spec: SobFamilySpec, a: Effect, b: Effect,
                     ctx: SuiteContext, witness: Dict, rng: np.random.Generator | None = None) -> str | None:
    try:
        verdict = check_sob_closure(spec, a, b, rng=rng)
    except PreconditionError:
        return None
    if verdict.status == "witness":
        result.observe(verdict.residual, ctx.tol, witness)
    return verdict.status


def thm33(ctx: SuiteContext) -> List[CheckResult]:
    perpendicular = CheckResult(
        "sob-closure[holevo]", citation="H_a^* + H_b^* = H_c^* with c = [tr(αa) + tr(αb)]·I",
    )
    general = CheckResult(
        "sob-closure[holevo-general]", citation="any sum H_a^* + H_b^* in Sob(H) is H_c^* with c = tr(α(a+b))·I",
    )
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = int(rng.choice((2, 3)))
        spec = SobFamilySpec("holevo", {"alpha": random_state(rng, dim),
                                        "observable": random_observable(rng, dim, _outcomes(rng))})
        a, b = random_perp_pair(rng, dim)
        _observe_closure(perpendicular, spec, a, b, ctx, {"trial": t, "dim": dim})
        _observe_closure(general, spec, random_effect(rng, dim), random_effect(rng, dim), ctx,
                         {"trial": t, "dim": dim})
    results = [perpendicular, general]
    for name, I in ctx.named_instruments().items():
        if I.kind != "holevo":
            continue
        result = CheckResult(f"sob-closure[{name}]", citation=perpendicular.citation)
        spec = SobFamilySpec("holevo", {"alpha": _holevo_state(I), "observable": measured_observable(I)})
        for t in range(ctx.trials):
            a, b = random_perp_pair(ctx.rng(t), I.dim)
            _observe_closure(result, spec, a, b, ctx, {"trial": t, "instrument": name})
        results.append(result)
    return results


def _holevo_state(I: Instrument) -> State:
    """The prepared state α of a Holevo instrument: Ī maps every state to α."""
    return normalize(apply(I, I.labels, State(identity(I.dim) / I.dim)))


def thm34(ctx: SuiteContext) -> List[CheckResult]:
    chain = CheckResult(
        "constant-state-sum", citation="(I_α)_a^*(Δ) + (I_α)_b^*(Δ) = tr[I(Δ)(α)(a+b)]·I",
    )
    closure = CheckResult(
        "sob-closure[constant-state]",
        citation="I_a^* + I_b^* ∈ U_I iff some c ∈ E(H) has tr[I(Δ)(α)c] = tr[I(Δ)(α)(a+b)] for all Δ",
    )
    general = CheckResult(
        "sob-closure[constant-state-general]",
        citation="I_a^* + I_b^* ∈ U_I iff some c ∈ E(H) has tr[I(Δ)(α)c] = tr[I(Δ)(α)(a+b)] for all Δ",
    )
    counts = {"witness": 0, "criterion-violated": 0, "unknown": 0, "inadmissible": 0}
    search_every = 10
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = int(rng.choice((2, 3)))
        source = random_instrument(rng, dim, _outcomes(rng))
        alpha = random_state(rng, dim)
        spec = SobFamilySpec("constant-state", {"instrument": source, "alpha": alpha})
        I = spec.instrument
        a, b = random_perp_pair(rng, dim)
        Fa, Fb = determined_subobservable(I, a), determined_subobservable(I, b)
        worst = 0.0
        for delta in I.space.events():
            weight = float(np.trace(apply(source, delta, alpha).matrix @ (a.matrix + b.matrix)).real)
            lhs = eval_event(Fa, delta).matrix + eval_event(Fb, delta).matrix
            worst = max(worst, max_norm(lhs - weight * identity(dim)))
        chain.observe(worst, ctx.tol, {"trial": t, "dim": dim})
        _observe_closure(closure, spec, a, b, ctx, {"trial": t, "dim": dim})

        if t % search_every == 0:
            status = _observe_closure(general, spec, random_effect(rng, dim), random_effect(rng, dim), ctx,
                                      {"trial": t, "dim": dim}, rng=rng)
            counts[status or "inadmissible"] += 1
    general.params = dict(counts)
    if counts["unknown"]:
        general.notes.append(f"{counts['unknown']} pair(s) without a witness from the preimage search")
    return [chain, closure, general]


def _boolean_family(A) -> SobFamilySpec:
    """Sub-observables x ↦ a_x·[x ∈ S] for every subset S of the outcomes."""
    zero = Effect.zero(A.dim)
    members = [
        SubObservable(A.space, {x: (A[x] if x in subset else zero) for x in A.labels})
        for subset in A.space.events()
    ]
    return SobFamilySpec("explicit-list", {"members": members})


def _two_point_family(dim: int) -> SobFamilySpec:
    """V = {(0, 0), (0, I)}."""
    space = OutcomeSpace(("x0", "x1"))
    Z = SubObservable(space, {"x0": Effect.zero(dim), "x1": Effect.identity(dim)})
    return SobFamilySpec("explicit-list", {"members": [zero_subobservable(space, dim), Z]})


def _explicit_family_checks(name: str, spec: SobFamilySpec) -> List[CheckResult]:
    members = len(spec.members)
    sob = _axiom_result(f"sob-conditions[{name}]", check_sob_effect_algebra(spec),
                        "S1-S3: Z ∈ U, Z − A ∈ U, A + B ∈ Sob(H) implies A + B ∈ U", {"members": members})
    model = _axiom_result(f"sob-model-axioms[{name}]", check_effect_algebra_axioms(sob_family_model(spec)),
                          "a Sob effect algebra is an effect algebra with A ⊥ B iff A + B ∈ Sob(H)",
                          {"members": members})
    return [sob, model]


def sob_closure(ctx: SuiteContext) -> List[CheckResult]:
    sharp = CheckResult("sob-closure[sharp-luders]", citation="c = Σ_x a_x(a+b)a_x for projective A")
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = int(rng.choice((2, 3)))
        A = random_projective_observable(rng, dim, int(rng.integers(2, dim + 1)))
        a, b = random_perp_pair(rng, dim)
        _observe_closure(sharp, SobFamilySpec("sharp-luders", {"observable": A}), a, b, ctx,
                         {"trial": t, "dim": dim})
    results = [sharp]
    if ctx.trials == 0:
        return results

    qubit_basis = random_projective_observable(ctx.rng(0), 2, 2)
    qutrit_basis = random_projective_observable(ctx.rng(1), 3, 3)
    results += _explicit_family_checks("two-point", _two_point_family(2))
    results += _explicit_family_checks("boolean-qubit", _boolean_family(qubit_basis))
    results += _explicit_family_checks("boolean-qutrit", _boolean_family(qutrit_basis))
    return results


# --- sequential products of determined sub-observables ---------------------------


def _eq32_trial(ctx: SuiteContext, I: Instrument, rng: np.random.Generator,
                result: CheckResult, witness: Dict) -> None:
    a, b = random_effect(rng, I.dim), random_effect(rng, I.dim)
    rho = random_state(rng, I.dim)
    delta = _random_event(rng, I.labels)
    lhs = effect_prob(rho, eval_event(determined_seq_product(I, a, b), delta))
    rhs = float(np.trace(sandwich(a, apply(I, delta, rho).matrix) @ b.matrix).real)
    result.observe(abs(lhs - rhs), ctx.tol, {**witness, "event": list(delta)})


def eq32(ctx: SuiteContext) -> List[CheckResult]:
    result = CheckResult("sequential-distribution",
                         citation="tr[ρ (I_a^*∘I_b^*)(Δ)] = tr[(a∘I(Δ)(ρ)) b]")
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = pick_dimension(rng)
        kind = INSTRUMENT_KINDS[t % len(INSTRUMENT_KINDS)]
        I = random_instrument_of_kind(rng, dim, kind, _outcomes(rng))
        _eq32_trial(ctx, I, rng, result, {"trial": t, "kind": kind, "dim": dim})
    for name, I in ctx.named_instruments().items():
        for t in range(ctx.trials):
            _eq32_trial(ctx, I, ctx.rng(t), result, {"trial": t, "instrument": name})
    return [result]


THM36_CITATIONS = {
    1: "I_a^*∘(I_b^* ⊕ I_c^*) = I_a^*∘I_b^* ⊕ I_a^*∘I_c^*",
    2: "I_a^*∘(Σλ_i I_{b_i}^*) = Σλ_i I_a^*∘I_{b_i}^*",
    3: "I_I^*∘I_a^* = I_a^*∘I_I^* = I_a^*",
    4: "I_a^*∘I_b^* = 0 implies I_a^*∘I_b^* = I_b^*∘I_a^*",
    5: "ab = ba implies I_a^*∘(I_b^*∘I_c^*) = (I_a^*∘I_b^*)∘I_c^*",
    6: "c commuting with a and b: I_c^* commutes with I_a^*∘I_b^* and I_a^* ⊕ I_b^*",
    7: "I_a^*∘I_b^* ≤ I_a^*",
    8: "a ≤ b implies I_c^*∘I_a^* ≤ I_c^*∘I_b^*",
}


def thm36(ctx: SuiteContext) -> List[CheckResult]:
    clauses = {
        n: CheckResult(f"determined-product-{n}", citation=cite,
                       params={"threshold": ctx.product_tol if n in (5, 6) else ctx.tol})
        for n, cite in THM36_CITATIONS.items()
    }
    proportional = CheckResult(
        "determined-product[holevo]", citation="H_{a∘b}^* = tr(α(a∘b))·A, a multiple of H_a^* when tr(αa) > 0",
    )

    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = int(rng.choice((2, 3)))
        kind = INSTRUMENT_KINDS[t % len(INSTRUMENT_KINDS)]
        I = random_instrument_of_kind(rng, dim, kind, 2)
        w = {"trial": t, "kind": kind, "dim": dim}

        a = random_effect(rng, dim)
        b, c = random_perp_pair(rng, dim)
        mix = [random_effect(rng, dim) for _ in range(3)]
        inputs = [
            check_theorem36(I, a, b, c, lambdas=random_weights(rng, 3), bs=mix),
            check_theorem36(I, *random_annihilating_pair(rng, dim), random_effect(rng, dim)),
        ]
        u, v, z = random_commuting_effects(rng, dim, 3)
        v_perp = Effect(sandwich(Effect(identity(dim) - u.matrix), v.matrix))
        inputs.append(check_theorem36(I, u, v_perp, z))
        lo, hi = random_leq_pair(rng, dim)
        inputs.append(check_theorem36(I, lo, hi, random_effect(rng, dim)))

        for entries in inputs:
            for entry in entries:
                if entry["applicable"]:
                    n = entry["clause"]
                    clauses[n].observe(entry["residual"], clauses[n].params["threshold"], w)

        alpha = random_state(rng, dim)
        A = random_observable(rng, dim, 2)
        H = holevo_instrument(alpha, A)
        ab = seq_product(a, b)
        weight = float(np.trace(alpha.matrix @ ab.matrix).real)
        product = determined_seq_product(H, a, b)
        residual = _pointwise(product, {x: weight * A[x].matrix for x in A.labels})
        mass = float(np.trace(alpha.matrix @ a.matrix).real)
        if mass > config.default_tolerance().eps:
            Ha = determined_subobservable(H, a)
            residual = max(residual, _pointwise(product, {x: (weight / mass) * Ha[x].matrix for x in A.labels}))
        proportional.observe(residual, ctx.tol, w)

    results = list(clauses.values())
    for result in results:
        if ctx.trials and result.trials == 0:
            result.notes.append("side condition never held on the sampled inputs")
    results.append(proportional)
    results.extend(eq32(ctx))
    return results


# --- instrument composition -------------------------------------------------------

THM41_CITATIONS = {
    "composition": "(I∘J)_a^*(x, y) = I*(x)[J_a^*(y)]",
    "measured": "(I∘J)_I^*(x, y) = I*(x)[Ĵ(y)]",
    "conditioned": "(J|I)_a^*(y) = I*(Ω)[J_a^*(y)]",
    "conditioned_measured": "(J|I)_I^*(y) = I*(Ω)[Ĵ(y)]",
}


def _thm41_trial(ctx: SuiteContext, I: Instrument, J: Instrument, a: Effect,
                 results: Dict[str, CheckResult], witness: Dict) -> None:
    for key, residual in theorem41_report(I, J, a).items():
        results[key].observe(residual, ctx.tol, witness)
    seq = measured_observable(instr_seq_product(I, J))
    I_hat = measured_observable(I)
    marginal = max(
        max_norm(sum(seq[product_label(x, y)].matrix for y in J.labels) - I_hat[x].matrix) for x in I.labels
    )
    results["marginal"].observe(marginal, ctx.tol, witness)


def thm41(ctx: SuiteContext) -> List[CheckResult]:
    results = {key: CheckResult(f"composition-{key.replace('_', '-')}", citation=cite)
               for key, cite in THM41_CITATIONS.items()}
    results["marginal"] = CheckResult("composition-marginal", citation="Σ_y (I∘J)_I^*(x, y) = Î(x)")
    n_kinds = len(INSTRUMENT_KINDS)
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = pick_dimension(rng)
        first, second = INSTRUMENT_KINDS[t % n_kinds], INSTRUMENT_KINDS[(t // n_kinds + t) % n_kinds]
        I = random_instrument_of_kind(rng, dim, first, _outcomes(rng))
        J = random_instrument_of_kind(rng, dim, second, _outcomes(rng))
        _thm41_trial(ctx, I, J, random_effect(rng, dim), results,
                     {"trial": t, "kinds": [first, second], "dim": dim})

    named = ctx.named_instruments()
    draws = max(1, ctx.trials // 10) if ctx.trials else 0
    for first, I in named.items():
        for second, J in named.items():
            for t in range(draws):
                _thm41_trial(ctx, I, J, random_effect(ctx.rng(t), I.dim), results,
                             {"trial": t, "instruments": [first, second]})
    return list(results.values())


# --- convexity ------------------------------------------------------------------


def _convexity_result(name: str, verdict: Dict, ctx: SuiteContext, expect_convex: bool = True,
                      citation: str = "") -> CheckResult:
    result = CheckResult(name, params={"expect_convex": expect_convex}, citation=citation)
    result.trials = verdict["checked"]
    result.max_residual = verdict["max_residual"]
    if verdict["convex"] != expect_convex:
        result.fail({"convex": verdict["convex"], "witness": verdict["witness"]})
    elif verdict["witness"] is not None:
        result.notes.append(f"witness: {verdict['witness']}")
    return result


def _dyadic_family(Z: SubObservable, depth: int = 40) -> SobFamilySpec:
    """{2^-k Z : 0 ≤ k ≤ depth} ∪ {0}; closed under halving up to roundoff at the last step."""
    members = [SubObservable(Z.space, {x: Effect(2.0 ** -k * Z[x].matrix) for x in Z.labels})
               for k in range(depth + 1)]
    members.append(zero_subobservable(Z.space, Z.dim))
    return SobFamilySpec("explicit-list", {"members": members})


def convexity(ctx: SuiteContext) -> List[CheckResult]:
    cite = "U is convex iff λA ∈ U for all A ∈ U and λ ∈ [0, 1]"
    if ctx.trials == 0:
        return []
    results = [
        _convexity_result("convexity[two-point]", check_convexity(_two_point_family(2), 0, ctx.seed),
                          ctx, expect_convex=False, citation=cite),
        _convexity_result("convexity[dyadic]",
                          check_convexity(_dyadic_family(random_observable(ctx.rng(0), 2, 2)), 0, ctx.seed),
                          ctx, citation=cite),
    ]
    rng = ctx.rng(0)
    specs = {
        "holevo": SobFamilySpec("holevo", {"alpha": random_state(rng, 2), "observable": random_observable(rng, 2, 2)}),
        "sharp-luders": SobFamilySpec("sharp-luders", {"observable": random_projective_observable(rng, 2, 2)}),
        "constant-state": SobFamilySpec(
            "constant-state", {"instrument": random_instrument(rng, 2, 2), "alpha": random_state(rng, 2)}
        ),
    }
    for name, spec in specs.items():
        verdict = check_convexity(spec, ctx.trials, ctx.seed, tol=ctx.tol)
        results.append(_convexity_result(f"convexity[{name}]", verdict, ctx, citation="λ·I_a^* = I_{λa}^*"))
    instruments = {
        "luders": luders_instrument(random_observable(rng, 3, 3)),
        "finite_holevo": finite_holevo_instrument(random_state_family(rng, 3, ("x0", "x1")),
                                                  random_observable(rng, 3, 2)),
        **ctx.named_instruments(),
    }
    for name, I in instruments.items():
        verdict = check_determined_convexity(I, ctx.trials, ctx.seed, ctx.tol)
        results.append(_convexity_result(f"convexity[{name}]", verdict, ctx, citation="λ·I_a^* = I_{λa}^*"))
    return results


# --- extensions and measured observables -----------------------------------------


def extensions(ctx: SuiteContext) -> List[CheckResult]:
    observable = CheckResult("minimal-extension[observable]",
                             citation="A₁ restricted to Ω is A and A₁(Ω ∪ {y}) = I")
    instrument = CheckResult("minimal-extension[instrument]",
                             citation="J restricted to Ω is S and J measures the minimal extension of S_I^*")
    holevo = CheckResult("minimal-extension[holevo]",
                         citation="D(Δ ∪ {y}) = tr(αa)A(Δ) + [1 − tr(αa)]·I")
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = pick_dimension(rng)
        w = {"trial": t, "dim": dim}

        S = random_subobservable(rng, dim, _outcomes(rng))
        E = minimal_extension(S)
        unit = identity(dim)
        residual = max(sob_residual(restrict(E, S.labels), S), max_norm(E.total_matrix() - unit))
        for delta in S.space.events():
            rest = [x for x in E.labels if x not in delta]
            residual = max(residual,
                           max_norm(eval_event(E, delta).matrix + eval_event(E, rest).matrix - unit))
        observable.observe(residual, ctx.tol, w)

        sub = random_subinstrument(rng, dim, _outcomes(rng))
        J = minimal_extension_instrument(sub)
        same_ops = max(
            max_norm(J.ops[x].apply(unit) - sub.ops[x].apply(unit)) for x in sub.labels
        )
        gap, _ = measurement_gap(J, determined_subobservable(sub, Effect.identity(dim)))
        instrument.observe(max(same_ops, gap), ctx.tol, w)

        alpha = random_state(rng, dim)
        A = random_observable(rng, dim, _outcomes(rng))
        a = random_effect(rng, dim)
        D = minimal_extension(determined_subobservable(holevo_instrument(alpha, A), a))
        mass = float(np.trace(alpha.matrix @ a.matrix).real)
        y = D.labels[-1]
        worst = 0.0
        for delta in A.space.events():
            lhs = eval_event(D, delta + (y,)).matrix
            rhs = mass * eval_event(A, delta).matrix + (1.0 - mass) * unit
            worst = max(worst, max_norm(lhs - rhs))
        holevo.observe(worst, ctx.tol, w)
    return [observable, instrument, holevo]


def _measured_trial(ctx: SuiteContext, I: Instrument, expected: Dict[str, np.ndarray] | None,
                    rng: np.random.Generator, results: Tuple[CheckResult, CheckResult], witness: Dict) -> None:
    identity_check, distribution_check = results
    I_hat = measured_observable(I)
    if expected is not None:
        identity_check.observe(_pointwise(I_hat, expected), ctx.tol, witness)
    rho = random_state(rng, I.dim)
    by_instrument = instr_distribution(I, rho)
    by_observable = distribution(I_hat, rho)
    distribution_check.observe(max(abs(by_instrument[x] - by_observable[x]) for x in I.labels), ctx.tol, witness)


def measured(ctx: SuiteContext) -> List[CheckResult]:
    closed_form = CheckResult(
        "measured-observable",
        citation="L̂ = A, Ĥ_(α,A) = A, Î_α(Δ) = tr[I(Δ)(α)]·I",
    )
    dist = CheckResult("measured-distribution", citation="tr[I(Δ)(ρ)] = tr[ρÎ(Δ)]")
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        dim = pick_dimension(rng)
        n = _outcomes(rng)
        kind = INSTRUMENT_KINDS[t % len(INSTRUMENT_KINDS)]
        A = random_observable(rng, dim, n)
        if kind == "luders":
            I, expected = luders_instrument(A), {x: A[x].matrix for x in A.labels}
        elif kind == "holevo":
            I, expected = holevo_instrument(random_state(rng, dim), A), {x: A[x].matrix for x in A.labels}
        elif kind == "finite_holevo":
            I = finite_holevo_instrument(random_state_family(rng, dim, A.labels), A)
            expected = {x: A[x].matrix for x in A.labels}
        elif kind == "constant_state":
            source, alpha = random_instrument(rng, dim, n), random_state(rng, dim)
            I = constant_state_instrument(source, alpha)
            expected = {x: apply(source, (x,), alpha).trace * identity(dim) for x in source.labels}
        else:
            I, expected = random_instrument(rng, dim, n), None
        _measured_trial(ctx, I, expected, rng, (closed_form, dist), {"trial": t, "kind": kind, "dim": dim})
    for name, I in ctx.named_instruments().items():
        for t in range(ctx.trials):
            _measured_trial(ctx, I, None, ctx.rng(t), (closed_form, dist), {"trial": t, "instrument": name})
    return [closed_form, dist]


# --- effect-algebra models ---------------------------------------------------------


def _expect_failure(name: str, axioms: Dict, axiom: str, citation: str) -> CheckResult:
    """A model built to break ``axiom``: the check passes when the violation is detected."""
    result = CheckResult(name, params={"expected_violation": axiom}, citation=citation)
    result.trials = sum(r.checked for r in axioms.values())
    if axioms[axiom].passed:
        result.fail({"axiom": axiom, "detail": "violation was not detected"})
    else:
        result.notes.append(f"{axiom} violated as expected: {axioms[axiom].detail}")
    return result


def axioms(ctx: SuiteContext) -> List[CheckResult]:
    if ctx.trials == 0:
        return []
    count = int(config.suite_settings()["effect_space_generators"])
    results = [
        _axiom_result("axioms[effect-space]",
                      check_effect_algebra_axioms(EffectSpaceModel.sampled(ctx.rng(0), 2, count)),
                      "(E(H), 0, I, ⊕) is an effect algebra", {"generators": count, "dim": 2}),
        _axiom_result("axioms[two-element]",
                      check_effect_algebra_axioms(FiniteEffectAlgebraModel(
                          ["0", "1"], "0", "1", {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1"})),
                      "{0, 1} with 0 ⊕ 0 = 0 and 0 ⊕ 1 = 1"),
    ]
    broken = FiniteEffectAlgebraModel(
        ["0", "u", "1"], "0", "1",
        {("0", "0"): "0", ("0", "u"): "u", ("u", "0"): "u", ("0", "1"): "1", ("1", "0"): "1",
         ("u", "1"): "1", ("1", "u"): "1"},
    )
    results.append(_expect_failure("axioms[detects-nonzero-orthogonal-to-one]",
                                   check_effect_algebra_axioms(broken), "E4", "a ⊥ 1 implies a = 0"))
    return results


SUITES: Dict[str, Callable[[SuiteContext], List[CheckResult]]] = {
    "duality": duality,
    "lemma21": lemma21,
    "thm32": thm32,
    "thm33": thm33,
    "thm34": thm34,
    "thm36": thm36,
    "thm41": thm41,
    "convexity": convexity,
    "sob-closure": sob_closure,
    "extensions": extensions,
    "measured": measured,
    "axioms": axioms,
    "eq32": eq32,
}
