"""
Worked qubit examples: each demo builds a fixed configuration and compares
both sides of every closed-form identity it states.

All demos share the data below. Residuals are max-norm differences, and each
check cites its demo and the identity it reproduces.
"""
from __future__ import annotations

import logging
import time
from typing import Callable, Dict, Iterable, List, Tuple

import numpy as np

from . import config
from .effect_algebra import SobFamilySpec, check_sob_closure
from .effects import Effect, State, effect_perp, sandwich, seq_product
from .errors import UnknownNameError
from .hermitian import identity, max_norm
from .instruments import (
    apply,
    constant_state_instrument,
    determined_subobservable,
    finite_holevo_instrument,
    holevo_instrument,
    luders_instrument,
    measured_observable,
)
from .observables import Observable, OutcomeSpace, eval_event, minimal_extension
from .report import CheckResult, Report
from .sequential import (
    ProductOutcomeSpace,
    determined_seq_product,
    instr_conditioned,
    instr_seq_product,
    measurement_gap,
    product_label,
    sob_conditioned,
    sob_seq_product,
)

logger = logging.getLogger(__name__)

I2 = identity(2)
P0 = np.diag([1.0, 0.0]).astype(np.complex128)
P1 = np.diag([0.0, 1.0]).astype(np.complex128)

A_OBS = Observable(
    OutcomeSpace(("x0", "x1")),
    {"x0": Effect(np.array([[0.6, 0.2], [0.2, 0.3]])), "x1": Effect(np.array([[0.4, -0.2], [-0.2, 0.7]]))},
)
B_OBS = Observable(
    OutcomeSpace(("y0", "y1")),
    {"y0": Effect(np.array([[0.5, 0.3], [0.3, 0.5]])), "y1": Effect(np.array([[0.5, -0.3], [-0.3, 0.5]]))},
)
EFFECT_B = Effect(np.array([[0.5, 0.25 - 0.1j], [0.25 + 0.1j, 0.4]]))
EFFECT_C = Effect(np.diag([0.3, 0.8]))
ALPHA = State(np.array([[0.75, 0.25], [0.25, 0.25]]))
BETA = State(np.array([[0.4, 0.2j], [-0.2j, 0.6]]))
RHO = State(np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, 0.7]]))


def _tr(m: np.ndarray) -> float:
    return float(np.trace(m).real)


Pairs = Iterable[Tuple[str, np.ndarray, np.ndarray]]


class DemoRun:
    """Collects the identity checks of one demo."""

    def __init__(self, name: str, tol: float):
        self.name = name
        self.tol = tol
        self.results: List[CheckResult] = []
        self.logger = logging.getLogger(__name__)

    def compare(self, key: str, identity_text: str, pairs: Pairs) -> CheckResult:
        result = CheckResult(f"{self.name}.{key}", citation=f"{self.name}: {identity_text}")
        for where, lhs, rhs in pairs:
            result.observe(max_norm(np.asarray(lhs) - np.asarray(rhs)), self.tol, {"at": where})
        self.logger.debug("%s: max residual %.3e", result.check, result.max_residual)
        self.results.append(result)
        return result

    def scalar(self, key: str, identity_text: str, residual: float) -> CheckResult:
        result = CheckResult(f"{self.name}.{key}", citation=f"{self.name}: {identity_text}")
        result.observe(residual, self.tol)
        self.results.append(result)
        return result


def example1(run: DemoRun) -> None:
    """Lüders instrument measuring the extension of x ↦ a_x∘b, composed with x ↦ a_z∘c."""
    A, b, c = A_OBS, EFFECT_B, EFFECT_C
    L = luders_instrument(A)
    S = determined_subobservable(L, b)
    run.compare("determined", "L_b^*(x) = a_x∘b",
                [(x, S[x].matrix, seq_product(A[x], b).matrix) for x in A.labels])

    E = minimal_extension(S)
    y = E.labels[-1]
    J = luders_instrument(E)
    b1 = S.total_matrix()
    run.compare("extension", "J(y)*(I) = (b₁)′ with b₁ = Σ_x a_x∘b",
                [(y, measured_observable(J)[y].matrix, I2 - b1)])
    run.scalar("measures", "J measures (L_b^*)₁", measurement_gap(J, S)[0])

    C = determined_subobservable(L, c)
    product = sob_seq_product(S, C, J)
    run.compare(
        "product", "L_b^*[J]L_c^*(x, z) = (a_x∘b)∘(a_z∘c)",
        [(product_label(x, z), product[product_label(x, z)].matrix, seq_product(S[x], C[z]).matrix)
         for x in S.labels for z in C.labels],
    )
    original = sob_conditioned(C, J, S, marginal="original")
    conditioned = run.compare(
        "conditioned", "(L_c^*|J|L_b^*)(z) = Σ_x (a_x∘b)∘(a_z∘c)",
        [(z, original[z].matrix, sum(seq_product(S[x], C[z]).matrix for x in S.labels)) for z in C.labels],
    )
    conditioned.notes.append("sum over the original outcomes; the extension outcome adds (b₁)′∘(a_z∘c)")
    extended = sob_conditioned(C, J, S)
    run.compare(
        "conditioned-extended", "J̄*(a_z∘c) = Σ_x (a_x∘b)∘(a_z∘c) + (b₁)′∘(a_z∘c)",
        [(z, extended[z].matrix,
          sum(seq_product(S[x], C[z]).matrix for x in S.labels) + seq_product(E[y], C[z]).matrix)
         for z in C.labels],
    )

    states = {"x0": ALPHA, "x1": BETA, y: State(I2 / 2)}
    H = finite_holevo_instrument(states, E)
    product = sob_seq_product(S, C, H)
    run.compare(
        "finite-holevo-product", "L_b^*[H]L_c^*(x, z) = tr[α_x(a_z∘c)]·a_x∘b",
        [(product_label(x, z), product[product_label(x, z)].matrix,
          _tr(states[x].matrix @ C[z].matrix) * S[x].matrix) for x in S.labels for z in C.labels],
    )
    original = sob_conditioned(C, H, S, marginal="original")
    run.compare(
        "finite-holevo-conditioned", "(L_c^*|H|L_b^*)(z) = Σ_x tr[α_x(a_z∘c)]·a_x∘b",
        [(z, original[z].matrix, sum(_tr(states[x].matrix @ C[z].matrix) * S[x].matrix for x in S.labels))
         for z in C.labels],
    )


def example2(run: DemoRun) -> None:
    """Holevo instrument, the extension D of its determined sub-observable, and H_(β,D)."""
    A, a, b = A_OBS, EFFECT_C, EFFECT_B
    H = holevo_instrument(ALPHA, A)
    Ha = determined_subobservable(H, a)
    mass_a = _tr(ALPHA.matrix @ a.matrix)
    mass_b = _tr(ALPHA.matrix @ b.matrix)
    run.compare("determined", "(H_(α,A))_a^*(x) = tr(αa)·a_x",
                [(x, Ha[x].matrix, mass_a * A[x].matrix) for x in A.labels])

    D = minimal_extension(Ha)
    y = D.labels[-1]
    run.compare("extension", "D(y) = [1 − tr(αa)]·I", [(y, D[y].matrix, (1.0 - mass_a) * I2)])

    G = holevo_instrument(BETA, D)
    Hb = determined_subobservable(H, b)
    product = sob_seq_product(Ha, Hb, G)
    rectangles = ProductOutcomeSpace(Ha.space, Hb.space)
    run.compare(
        "product", "(H_a^*)[H_(β,D)](H_b^*)(Δ×Γ) = tr(αb)tr(αa)tr[βA(Γ)]·A(Δ)",
        [(f"{list(delta)}×{list(gamma)}", eval_event(product, rectangles.rectangle(delta, gamma)).matrix,
          mass_b * mass_a * _tr(BETA.matrix @ eval_event(A, gamma).matrix) * eval_event(A, delta).matrix)
         for delta in A.space.events() for gamma in A.space.events()],
    )
    original = sob_conditioned(Hb, G, Ha, marginal="original")
    conditioned = run.compare(
        "conditioned", "(H_b^*|H_(β,D)|H_a^*)(Γ) = tr(αb)tr(αa)tr[βA(Γ)]·I",
        [(z, original[z].matrix, mass_b * mass_a * _tr(BETA.matrix @ A[z].matrix) * I2) for z in A.labels],
    )
    conditioned.notes.append("sum over the original outcomes; with the extension outcome the factor tr(αa) drops")
    extended = sob_conditioned(Hb, G, Ha)
    run.compare(
        "conditioned-extended", "H̄_(β,D)*(H_b^*(Γ)) = tr(αb)tr[βA(Γ)]·I",
        [(z, extended[z].matrix, mass_b * _tr(BETA.matrix @ A[z].matrix) * I2) for z in A.labels],
    )


def example3(run: DemoRun) -> None:
    """Sharp Lüders family: L_a^* + L_b^* = L_c^* with c = Σ_x P_x(a+b)P_x, a and b not perpendicular."""
    P = Observable(OutcomeSpace(("x0", "x1")), {"x0": Effect(P0), "x1": Effect(P1)})
    a = Effect(np.array([[0.5, 0.45], [0.45, 0.5]]))
    b = Effect(np.array([[0.45, 0.4], [0.4, 0.45]]))
    verdict = check_sob_closure(SobFamilySpec("sharp-luders", {"observable": P}), a, b)
    expected = P0 @ (a.matrix + b.matrix) @ P0 + P1 @ (a.matrix + b.matrix) @ P1
    run.compare("witness", "c = Σ_x P_x(a+b)P_x", [("c", verdict.witness.matrix, expected)])
    result = run.scalar("closure", "L_a^* + L_b^* = L_c^*", verdict.residual)
    if not effect_perp(a, b):
        result.notes.append("a + b exceeds I, so the sum is closed without a ⊥ b")


def example4(run: DemoRun) -> None:
    """Determined sequential products for Holevo and constant-state instruments."""
    A, a, b = A_OBS, EFFECT_B, EFFECT_C
    ab = seq_product(a, b)
    H = holevo_instrument(ALPHA, A)
    product = determined_seq_product(H, a, b)
    weight = _tr(ALPHA.matrix @ ab.matrix)
    run.compare("holevo", "(H_(α,A))_{a∘b}^* = tr(α(a∘b))·A",
                [(x, product[x].matrix, weight * A[x].matrix) for x in A.labels])
    Ha = determined_subobservable(H, a)
    ratio = weight / _tr(ALPHA.matrix @ a.matrix)
    run.compare("holevo-multiple", "(H_(α,A))_{a∘b}^* = [tr(α(a∘b)) / tr(αa)]·(H_(α,A))_a^*",
                [(x, product[x].matrix, ratio * Ha[x].matrix) for x in A.labels])

    L = luders_instrument(A)
    K = constant_state_instrument(L, ALPHA)
    product = determined_seq_product(K, a, b)
    run.compare(
        "constant-state", "(I_α)_{a∘b}^*(Δ) = tr[(a∘I(Δ)(α))b]·I",
        [(x, product[x].matrix, _tr(sandwich(a, L.ops[x].apply(ALPHA.matrix)) @ b.matrix) * I2)
         for x in A.labels],
    )

    source = holevo_instrument(BETA, A)
    K = constant_state_instrument(source, ALPHA)
    Ka = determined_subobservable(K, a)
    run.compare(
        "holevo-source", "(I_α)_a^*(Δ) = tr[αA(Δ)]tr(βa)·I",
        [(x, Ka[x].matrix, _tr(ALPHA.matrix @ A[x].matrix) * _tr(BETA.matrix @ a.matrix) * I2) for x in A.labels],
    )
    product = determined_seq_product(K, a, b)
    run.compare(
        "holevo-source-product", "(I_α)_{a∘b}^*(Δ) = tr[αA(Δ)]tr[(a∘β)b]·I",
        [(x, product[x].matrix,
          _tr(ALPHA.matrix @ A[x].matrix) * _tr(sandwich(a, BETA.matrix) @ b.matrix) * I2) for x in A.labels],
    )


def example5(run: DemoRun) -> None:
    """Two Holevo instruments H_(α,A) then H_(β,B)."""
    A, B, a = A_OBS, B_OBS, EFFECT_C
    I = holevo_instrument(ALPHA, A)
    J = holevo_instrument(BETA, B)
    seq = instr_seq_product(I, J)
    cond = instr_conditioned(J, I)
    rectangles = ProductOutcomeSpace(A.space, B.space)
    rho = RHO.matrix
    beta_a = _tr(BETA.matrix @ a.matrix)

    def alpha_B(gamma) -> float:
        return _tr(ALPHA.matrix @ eval_event(B, gamma).matrix)

    run.compare(
        "sequential", "(I∘J)(Δ×Γ)(ρ) = tr[ρA(Δ)]tr[αB(Γ)]·β",
        [(f"{list(delta)}×{list(gamma)}", apply(seq, rectangles.rectangle(delta, gamma), RHO).matrix,
          _tr(rho @ eval_event(A, delta).matrix) * alpha_B(gamma) * BETA.matrix)
         for delta in A.space.events() for gamma in B.space.events()],
    )
    seq_a = determined_subobservable(seq, a)
    seq_unit = measured_observable(seq)
    run.compare(
        "sequential-determined", "(I∘J)_a^*(Δ×Γ) = tr(βa)tr[αB(Γ)]·A(Δ)",
        [(product_label(x, y), seq_a[product_label(x, y)].matrix, beta_a * alpha_B((y,)) * A[x].matrix)
         for x in A.labels for y in B.labels],
    )
    run.compare(
        "sequential-measured", "(I∘J)_I^*(Δ×Γ) = tr[αB(Γ)]·A(Δ)",
        [(product_label(x, y), seq_unit[product_label(x, y)].matrix, alpha_B((y,)) * A[x].matrix)
         for x in A.labels for y in B.labels],
    )
    run.compare("conditioned", "(J|I)(Γ)(ρ) = tr[αB(Γ)]·β",
                [(y, apply(cond, (y,), RHO).matrix, alpha_B((y,)) * BETA.matrix) for y in B.labels])
    cond_a = determined_subobservable(cond, a)
    run.compare("conditioned-determined", "(J|I)_a^*(Γ) = tr(βa)tr[αB(Γ)]·I",
                [(y, cond_a[y].matrix, beta_a * alpha_B((y,)) * I2) for y in B.labels])
    cond_unit = measured_observable(cond)
    run.compare("conditioned-measured", "(J|I)_I^*(Γ) = tr[αB(Γ)]·I",
                [(y, cond_unit[y].matrix, alpha_B((y,)) * I2) for y in B.labels])


def example6(run: DemoRun) -> None:
    """Two Lüders instruments L_A then L_B."""
    A, B, a = A_OBS, B_OBS, EFFECT_C
    I, J = luders_instrument(A), luders_instrument(B)
    seq = instr_seq_product(I, J)
    cond = instr_conditioned(J, I)
    rho = RHO.matrix
    pairs = [(x, y, product_label(x, y)) for x in A.labels for y in B.labels]

    run.compare("sequential", "(I∘J)(x, y)(ρ) = b_y∘(a_x∘ρ)",
                [(xy, apply(seq, (xy,), RHO).matrix, sandwich(B[y], sandwich(A[x], rho))) for x, y, xy in pairs])
    seq_a = determined_subobservable(seq, a)
    run.compare("sequential-determined", "(I∘J)_a^*(x, y) = a_x∘(b_y∘a)",
                [(xy, seq_a[xy].matrix, seq_product(A[x], seq_product(B[y], a)).matrix) for x, y, xy in pairs])
    seq_unit = measured_observable(seq)
    run.compare("sequential-measured", "(I∘J)_I^*(x, y) = a_x∘b_y",
                [(xy, seq_unit[xy].matrix, seq_product(A[x], B[y]).matrix) for x, y, xy in pairs])
    run.compare("conditioned", "(J|I)_y(ρ) = Σ_x b_y∘(a_x∘ρ)",
                [(y, apply(cond, (y,), RHO).matrix, sum(sandwich(B[y], sandwich(A[x], rho)) for x in A.labels))
                 for y in B.labels])
    cond_a = determined_subobservable(cond, a)
    run.compare("conditioned-determined", "(J|I)_a^*(y) = Σ_x a_x∘(b_y∘a)",
                [(y, cond_a[y].matrix, sum(seq_product(A[x], seq_product(B[y], a)).matrix for x in A.labels))
                 for y in B.labels])
    cond_unit = measured_observable(cond)
    run.compare("conditioned-measured", "(J|I)_I^*(y) = Σ_x a_x∘b_y",
                [(y, cond_unit[y].matrix, sum(seq_product(A[x], B[y]).matrix for x in A.labels))
                 for y in B.labels])


def example7(run: DemoRun) -> None:
    """Constant-state instruments I_α then J_β built on Lüders sources."""
    A, B, a = A_OBS, B_OBS, EFFECT_C
    I, J = luders_instrument(A), luders_instrument(B)
    I_alpha = constant_state_instrument(I, ALPHA)
    J_beta = constant_state_instrument(J, BETA)
    seq = instr_seq_product(I_alpha, J_beta)
    cond = instr_conditioned(J_beta, I_alpha)
    pairs = [(x, y, product_label(x, y)) for x in A.labels for y in B.labels]

    def prepared(x: str) -> float:
        return _tr(I.ops[x].apply(ALPHA.matrix))

    def J_beta_out(y: str) -> np.ndarray:
        return J.ops[y].apply(BETA.matrix)

    run.compare("sequential", "(I_α∘J_β)(Δ×Γ)(ρ) = tr[I(Δ)(α)]·J(Γ)(β)",
                [(xy, apply(seq, (xy,), RHO).matrix, prepared(x) * J_beta_out(y)) for x, y, xy in pairs])
    seq_a = determined_subobservable(seq, a)
    run.compare("sequential-determined", "(I_α∘J_β)_a^*(Δ×Γ) = tr[J(Γ)(β)a]tr[I(Δ)(α)]·I",
                [(xy, seq_a[xy].matrix, _tr(J_beta_out(y) @ a.matrix) * prepared(x) * I2) for x, y, xy in pairs])
    seq_unit = measured_observable(seq)
    run.compare("sequential-measured", "(I_α∘J_β)_I^*(Δ×Γ) = tr[J(Γ)(β)]tr[I(Δ)(α)]·I",
                [(xy, seq_unit[xy].matrix, _tr(J_beta_out(y)) * prepared(x) * I2) for x, y, xy in pairs])
    run.compare(
        "conditioned", "(J_β|I_α) = J_β",
        [(f"{y} on {name}", apply(cond, (y,), state).matrix, apply(J_beta, (y,), state).matrix)
         for y in B.labels for name, state in (("ρ", RHO), ("α", ALPHA), ("β", BETA))],
    )
    cond_a = determined_subobservable(cond, a)
    run.compare("conditioned-determined", "(J_β|I_α)_a^*(Γ) = tr[J(Γ)(β)a]·I",
                [(y, cond_a[y].matrix, _tr(J_beta_out(y) @ a.matrix) * I2) for y in B.labels])


def example8(run: DemoRun) -> None:
    """Lüders L_A with a finite Holevo instrument H(y)(ρ) = tr(ρB_y)β_y, in both orders."""
    A, B, a = A_OBS, B_OBS, EFFECT_C
    betas = {"y0": BETA, "y1": ALPHA}
    I = luders_instrument(A)
    J = finite_holevo_instrument(betas, B)
    rho = RHO.matrix

    def beta_tr(y: str, m: np.ndarray) -> float:
        return _tr(betas[y].matrix @ m)

    seq = instr_seq_product(I, J)
    pairs = [(x, y, product_label(x, y)) for x in A.labels for y in B.labels]
    run.compare("sequential", "(I∘J)(x, y)(ρ) = tr[(a_x∘ρ)B_y]·β_y",
                [(xy, apply(seq, (xy,), RHO).matrix, _tr(sandwich(A[x], rho) @ B[y].matrix) * betas[y].matrix)
                 for x, y, xy in pairs])
    seq_a = determined_subobservable(seq, a)
    run.compare("sequential-determined", "(I∘J)_a^*(x, y) = tr(β_y a)·a_x∘B_y",
                [(xy, seq_a[xy].matrix, beta_tr(y, a.matrix) * seq_product(A[x], B[y]).matrix)
                 for x, y, xy in pairs])
    seq_unit = measured_observable(seq)
    run.compare("sequential-measured", "(I∘J)_I^*(x, y) = a_x∘B_y",
                [(xy, seq_unit[xy].matrix, seq_product(A[x], B[y]).matrix) for x, y, xy in pairs])

    C = Observable(B.space, {y: Effect(sum(seq_product(A[x], B[y]).matrix for x in A.labels)) for y in B.labels})
    H_C = finite_holevo_instrument(betas, C)
    cond = instr_conditioned(J, I)
    run.compare(
        "conditioned", "(J|I)_y = H_(β,C)(y) with C_y = Σ_x a_x∘B_y",
        [(f"{y} on {name}", apply(cond, (y,), state).matrix, apply(H_C, (y,), state).matrix)
         for y in B.labels for name, state in (("ρ", RHO), ("α", ALPHA), ("β", BETA))],
    )
    cond_a = determined_subobservable(cond, a)
    run.compare("conditioned-determined", "(J|I)_a^*(y) = tr(β_y a)·C_y",
                [(y, cond_a[y].matrix, beta_tr(y, a.matrix) * C[y].matrix) for y in B.labels])
    cond_unit = measured_observable(cond)
    run.compare("conditioned-measured", "(J|I)_I^*(y) = C_y",
                [(y, cond_unit[y].matrix, C[y].matrix) for y in B.labels])

    reverse = instr_seq_product(J, I)
    flipped = [(y, x, product_label(y, x)) for y in B.labels for x in A.labels]
    result = run.compare(
        "reverse-sequential", "(J∘I)(y, x)(ρ) = tr(ρB_y)·a_x∘β_y",
        [(yx, apply(reverse, (yx,), RHO).matrix, _tr(rho @ B[y].matrix) * sandwich(A[x], betas[y].matrix))
         for y, x, yx in flipped],
    )
    result.notes.append("the prepared state is a_x∘β_y; a_x∘B_y does not follow from the composition")
    rev_a = determined_subobservable(reverse, a)
    run.compare("reverse-determined", "(J∘I)_a^*(y, x) = tr(β_y(a_x∘a))·B_y",
                [(yx, rev_a[yx].matrix, beta_tr(y, seq_product(A[x], a).matrix) * B[y].matrix)
                 for y, x, yx in flipped])
    rev_unit = measured_observable(reverse)
    run.compare("reverse-measured", "(J∘I)_I^*(y, x) = tr(β_y a_x)·B_y",
                [(yx, rev_unit[yx].matrix, beta_tr(y, A[x].matrix) * B[y].matrix) for y, x, yx in flipped])

    rev_cond = instr_conditioned(I, J)
    run.compare(
        "reverse-conditioned", "(I|J)_x(ρ) = Σ_y tr(ρB_y)·a_x∘β_y",
        [(x, apply(rev_cond, (x,), RHO).matrix,
          sum(_tr(rho @ B[y].matrix) * sandwich(A[x], betas[y].matrix) for y in B.labels)) for x in A.labels],
    )
    rev_cond_a = determined_subobservable(rev_cond, a)
    run.compare(
        "reverse-conditioned-determined", "(I|J)_a^*(x) = Σ_y tr[β_y(a_x∘a)]·B_y",
        [(x, rev_cond_a[x].matrix,
          sum(beta_tr(y, seq_product(A[x], a).matrix) * B[y].matrix for y in B.labels)) for x in A.labels],
    )
    rev_cond_unit = measured_observable(rev_cond)
    run.compare(
        "reverse-conditioned-measured", "(I|J)_I^*(x) = Σ_y tr(β_y a_x)·B_y",
        [(x, rev_cond_unit[x].matrix, sum(beta_tr(y, A[x].matrix) * B[y].matrix for y in B.labels))
         for x in A.labels],
    )


DEMOS: Dict[str, Callable[[DemoRun], None]] = {
    "example1": example1,
    "example2": example2,
    "example3": example3,
    "example4": example4,
    "example5": example5,
    "example6": example6,
    "example7": example7,
    "example8": example8,
}


def demo_results(name: str, tol: float | None = None) -> List[CheckResult]:
    if name not in DEMOS:
        raise UnknownNameError(f"unknown demo {name!r}; expected one of {sorted(DEMOS)}")
    tol = float(config.run_defaults()["tol"]) if tol is None else tol
    run = DemoRun(name, tol)
    DEMOS[name](run)
    return run.results


def run_demo(name: str, tol: float | None = None) -> Report:
    """Build the named demo and report every identity it checks."""
    tol = float(config.run_defaults()["tol"]) if tol is None else tol
    start = time.perf_counter()
    report = Report(command="demo", tol=tol)
    report.extend(demo_results(name, tol))
    report.wall_time = time.perf_counter() - start
    return report
