"""
CompoundCert.GoldenExamples
~~~~~~~~~~~~

This module implements the selftest suite: every worked example with a known exact value,
recomputed and compared.
"""

# Import the required modules
import numpy as np
from typing import Any, Callable
from scipy.linalg import expm
from CompoundCert.Combinat import IndexSet, lex_sequences, binomial
from CompoundCert.Compound import add_compound, add_compound_oracle, mult_compound, alpha_add_compound, alpha_mult_compound
from CompoundCert.Measures import compound_measure
from CompoundCert.SignVariation import s_minus, s_plus, in_cone, sign_regular_order
from CompoundCert.Classify import certify_k_positive, certify_k_contracting, certify_k_cooperative, k_diag_stability_check, ltv_samples, jacobian_samples
from CompoundCert.Dynamics import (
    integrate, transition_matrix, compound_transition_residual, volume_trace, sign_variation_trace,
    converges_to_equilibrium, attractor_summary, box_grid, state_space_grid
)
from CompoundCert.Systems import EXAMPLE8_MATRIX, example5_matrix, ltv_system, example5_system, example5_transition, example8_system, thomas_system, thomas_gain_bound, thomas_alpha_bound, cyclic_system
from CompoundCert.Progress import Progress, ProgressStatusSelector as pss, report
from CompoundCert.Debugger import show_debug

# Start points of the closed-loop Thomas runs, spread over the box D for b = 0.1
CLOSED_LOOP_STARTS: list[list[float]] = [
    [1.0, -2.0, 1.0], [3.0, 3.0, 3.0], [-4.0, 2.0, 5.0],
    [6.0, -6.0, 0.5], [-1.0, -1.0, -1.0], [0.5, 0.0, -7.0],
    [8.0, 1.0, -3.0], [-9.0, 9.0, 9.0], [2.0, -5.0, -8.0]
]

def _example8_additive() -> tuple[bool, str]:
    compound: np.ndarray = add_compound(EXAMPLE8_MATRIX, 2).matrix
    expected: np.ndarray = np.array([[0.0, 0.1, 2.0], [0.0, 0.0, 1.0], [3.0, 0.0, 2.0]])
    return bool(np.array_equal(compound, expected)), f"A^[2] = {compound.tolist()}"

def _example1_entry() -> tuple[bool, str]:
    A: np.ndarray = np.array([[10.0 * i + j for j in range(1, 5)] for i in range(1, 5)])
    value: float = add_compound(A, 3).entry((1, 2, 4), (2, 3, 4))
    return value == -13.0, f"entry = {value}"

def _upper_triangular_multiplicative() -> tuple[bool, str]:
    rng: np.random.Generator = np.random.default_rng(0)
    A: np.ndarray = np.triu(rng.uniform(-2.0, 2.0, (3, 3)))
    a = lambda i, j: A[i - 1, j - 1]
    expected: np.ndarray = np.array([
        [a(1, 1) * a(2, 2), a(1, 1) * a(2, 3), a(1, 2) * a(2, 3) - a(1, 3) * a(2, 2)],
        [0.0, a(1, 1) * a(3, 3), a(1, 2) * a(3, 3)],
        [0.0, 0.0, a(2, 2) * a(3, 3)]
    ])
    error: float = float(np.max(np.abs(mult_compound(A, 2).matrix - expected)))
    return error <= 1e-12, f"max error = {error:.3e}"

def _sign_variations() -> tuple[bool, str]:
    x: list[float] = [-1.0, 0.0, 0.0, 2.0, -3.0]
    return (s_minus(x), s_plus(x)) == (2, 4), f"s- = {s_minus(x)}, s+ = {s_plus(x)}"

def _lexicographic_order() -> tuple[bool, str]:
    labels: list[list[int]] = [s.to_list() for s in lex_sequences(2, 3)]
    position: int = IndexSet((1, 3), 3).rank()
    return labels == [[1, 2], [1, 3], [2, 3]] and position == 1, f"Q(2,3) = {labels}, rank({{1,3}}) = {position}"

def _example8_positivity() -> tuple[bool, str]:
    second = certify_k_positive([(0.0, EXAMPLE8_MATRIX)], 2, strong = True)
    first = certify_k_positive([(0.0, EXAMPLE8_MATRIX)], 1)
    passed: bool = second.certified and first.verdict == 'Refuted' and first.witness["position"] == [1, 3]
    return passed, f"k=2: {second.verdict}, k=1: {first.verdict} at {first.witness['position']}"

def _example5_contraction() -> tuple[bool, str]:
    result = certify_k_contracting(ltv_samples(example5_matrix, (0.0, 2.0 * np.pi), 101), 2, 'L1')
    return result.certified and abs(result.margin - 1.0) <= 1e-12, f"{result.verdict}, eta = {result.margin}"

def _example5_transition() -> tuple[bool, str]:
    phi = transition_matrix(example5_system(), (0.0, 2.0), 1e-3)
    error: float = max(float(np.max(np.abs(state - example5_transition(t)))) for t, state in phi)
    return error <= 1e-5, f"max error = {error:.3e}"

def _thomas_trace() -> tuple[bool, str]:
    system = thomas_system(0.1)
    samples = jacobian_samples(system, state_space_grid(system, 5))
    result = certify_k_contracting(samples, 3, 'L1')
    return result.certified and abs(result.margin - 0.3) <= 1e-12, f"{result.verdict}, eta = {result.margin}"

def _thomas_threshold() -> tuple[bool, str]:
    system = thomas_system(0.1)
    samples = jacobian_samples(system, state_space_grid(system, 5))
    above = certify_k_contracting(samples, 2.74, 'L1')
    below = certify_k_contracting(samples, 2.70, 'L1')
    bound_error: float = abs(-above.margin - thomas_alpha_bound(0.1, 0.74))
    passed: bool = above.certified and below.verdict == 'Refuted' and bound_error <= 1e-10
    return passed, f"s=0.74: {above.verdict}, s=0.70: {below.verdict}, bound error = {bound_error:.3e}"

def _thomas_gain() -> tuple[bool, str]:
    gain: float = thomas_gain_bound(0.1, 0.0)
    return abs(gain - (-0.8)) <= 1e-12 and -0.9 < gain, f"c* = {gain}"

def _example8_sign_trace() -> tuple[bool, str]:
    trace = sign_variation_trace(example8_system(), [4.0, -21.0, -1.0], (0.0, 1.0), 1e-3)
    largest: int = max(minus for _, minus, _ in trace)
    return largest <= 1, f"max s- = {largest} over {len(trace)} steps"

def _cyclic_cooperativity() -> tuple[bool, str]:
    negative = cyclic_system(4, -1)
    positive = cyclic_system(4, 1)
    grid: np.ndarray = box_grid(-2.0 * np.ones(4), 2.0 * np.ones(4), 3)
    second = certify_k_cooperative(lambda x: negative.jacobian_at(0.0, x), grid, 2, strong = True)
    first = certify_k_cooperative(lambda x: positive.jacobian_at(0.0, x), grid, 1, strong = True)
    return second.certified and first.certified, f"delta1=-1, k=2: {second.verdict}; delta1=+1, k=1: {first.verdict}"

def _diagonal_stability() -> tuple[bool, str]:
    stable, largest = k_diag_stability_check(-np.eye(3), 2, np.eye(3))
    return stable and abs(largest + 4.0) <= 1e-12, f"max eigenvalue = {largest}"

def _scalar_alpha_power() -> tuple[bool, str]:
    result: np.ndarray = alpha_mult_compound(2.0 * np.eye(3), 2.5)
    error: float = float(np.max(np.abs(result - 2.0 ** 2.5 * np.eye(3))))
    return error <= 1e-12, f"max error = {error:.3e}"

def _example5_area() -> tuple[bool, str]:
    trace = volume_trace(example5_system(), 2, (0.0, 2.0), 1e-3)
    error: float = max(abs(float(volume) - np.exp(-t)) / np.exp(-t) for t, volume in trace)
    return error <= 1e-4, f"max relative error = {error:.3e}"

def _example5_limit_point() -> tuple[bool, str]:
    x0: list[float] = [1.0, 3.0]
    final: np.ndarray = integrate(example5_system(), x0, (0.0, 20.0), 1e-3).final
    error: float = float(np.max(np.abs(final - np.array([0.0, x0[1] - x0[0]]))))
    return error <= 1e-4, f"x(20) = {final.tolist()}"

def _identity_compounds() -> tuple[bool, str]:
    n: int = 4
    passed: bool = all(
        np.allclose(mult_compound(np.eye(n), k).matrix, np.eye(binomial(n, k)), rtol = 0.0, atol = 1e-15)
        and np.array_equal(add_compound(np.eye(n), k).matrix, k * np.eye(binomial(n, k)))
        for k in range(1, n + 1)
    )
    return passed, f"I^(k) = I and I^[k] = kI for n={n}, k=1..{n}"

def _compound_exponential() -> tuple[bool, str]:
    A: np.ndarray = np.random.default_rng(1).uniform(-0.5, 0.5, (4, 4))
    expected: np.ndarray = expm(2.0 * add_compound(A, 2).matrix)
    error: float = float(np.max(np.abs(mult_compound(expm(2.0 * A), 2).matrix - expected)) / np.max(np.abs(expected)))
    residual: float = compound_transition_residual(ltv_system(A), 2, (0.0, 2.0), 1e-3)
    return error <= 1e-8 and residual <= 1e-6, f"expm error = {error:.3e}, integrated residual = {residual:.3e}"

def _abel_jacobi_liouville() -> tuple[bool, str]:
    B: np.ndarray = np.random.default_rng(2).uniform(-1.0, 1.0, (3, 3))
    phi = transition_matrix(ltv_system(lambda t: B + np.sin(t) * np.eye(3)), (0.0, 2.0), 1e-3)
    error: float = 0.0
    for t, state in phi:
        expected: float = float(np.exp(np.trace(B) * t + 3.0 * (1.0 - np.cos(t))))
        error = max(error, abs(float(np.linalg.det(state)) - expected) / expected)
    return error <= 1e-6, f"max relative error = {error:.3e}"

def _full_order_measure() -> tuple[bool, str]:
    A: np.ndarray = np.random.default_rng(3).normal(size = (5, 5))
    errors: list[float] = [abs(compound_measure(A, 5, kind) - float(np.trace(A))) for kind in ('L1', 'L2', 'LInf')]
    return max(errors) <= 1e-12, f"max error = {max(errors):.3e}"

def _additivity() -> tuple[bool, str]:
    rng: np.random.Generator = np.random.default_rng(4)
    A: np.ndarray = 0.5 * rng.normal(size = (4, 4))
    B: np.ndarray = 0.5 * rng.normal(size = (4, 4))
    error: float = 0.0
    for k in range(1, 5):
        error = max(error, float(np.max(np.abs(add_compound(A + B, k).matrix - add_compound(A, k).matrix - add_compound(B, k).matrix))))
        error = max(error, float(np.max(np.abs(add_compound_oracle(A + B, k).matrix - add_compound_oracle(A, k).matrix - add_compound_oracle(B, k).matrix))))
    return error <= 1e-8, f"max error = {error:.3e}"

def _thomas_alpha_display() -> tuple[bool, str]:
    b, s = 0.1, 0.8
    system = thomas_system(b)
    error: float = 0.0
    for x in np.random.default_rng(5).uniform(-1.0 / b, 1.0 / b, (20, 3)):
        c1, c2, c3 = np.cos(x)
        expected: np.ndarray = np.array([
            [-(2.0 + s) * b, (1.0 - s) * c3, 0.0],
            [0.0, -(2.0 + s) * b, (1.0 - s) * c2],
            [-(1.0 - s) * c1, 0.0, -(2.0 + s) * b]
        ])
        error = max(error, float(np.max(np.abs(alpha_add_compound(system.jacobian_at(0.0, x), 2.0 + s) - expected))))
    return error <= 1e-12, f"max error = {error:.3e}"

def _thomas_closed_loop() -> tuple[bool, str]:
    b: float = 0.1
    system = thomas_system(b, 2.0 * b - 1.1)
    residuals: list[float] = [converges_to_equilibrium(system, x0, 200.0, 1e-2)[1] for x0 in CLOSED_LOOP_STARTS]
    return max(residuals) <= 1e-6, f"max residual = {max(residuals):.3e} over {len(residuals)} starts"

def _thomas_open_loop() -> tuple[bool, str]:
    summary: dict[str, Any] = attractor_summary(thomas_system(0.1), [1.0, -2.0, 1.0], 2000.0, 1e-2)
    return summary["bounded"] and not summary["converged"], f"max |x| = {summary['max_abs_state']:.3f}, tail speed >= {summary['tail_min_speed']:.3e}"

def _jacobi_total_positivity() -> tuple[bool, str]:
    rng: np.random.Generator = np.random.default_rng(6)
    n: int = 4
    A: np.ndarray = np.diag(rng.uniform(-2.0, 1.0, n)) + np.diag(rng.uniform(0.1, 2.0, n - 1), 1) + np.diag(rng.uniform(0.1, 2.0, n - 1), -1)
    classes: list[str] = [sign_regular_order(expm(A * t), k) for t in (0.5, 1.0, 2.0) for k in range(1, n + 1)]
    return all(value == 'NonNegative' for value in classes), f"classes = {sorted(set(classes))}"

def _example8_cone() -> tuple[bool, str]:
    x0: list[float] = [4.0, -21.0, -1.0]
    passed: bool = s_minus(x0) == 1 and in_cone(x0, 2, 'closed') and not in_cone(x0, 1, 'closed')
    return passed, f"s-(x0) = {s_minus(x0)}"

# The suite, in execution order
GOLDEN_CHECKS: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("example8-additive-compound", _example8_additive),
    ("example1-additive-entry", _example1_entry),
    ("upper-triangular-multiplicative-compound", _upper_triangular_multiplicative),
    ("sign-variations", _sign_variations),
    ("lexicographic-order", _lexicographic_order),
    ("example8-k-positivity", _example8_positivity),
    ("example5-2-contraction", _example5_contraction),
    ("example5-transition-matrix", _example5_transition),
    ("thomas-3-contraction", _thomas_trace),
    ("thomas-alpha-threshold", _thomas_threshold),
    ("thomas-gain-bound", _thomas_gain),
    ("example8-sign-variation-trace", _example8_sign_trace),
    ("cyclic-cooperativity", _cyclic_cooperativity),
    ("diagonal-stability", _diagonal_stability),
    ("scalar-alpha-multiplicative-compound", _scalar_alpha_power),
    ("example5-area-decay", _example5_area),
    ("example5-limit-point", _example5_limit_point),
    ("identity-compounds", _identity_compounds),
    ("compound-exponential", _compound_exponential),
    ("abel-jacobi-liouville", _abel_jacobi_liouville),
    ("full-order-compound-measure", _full_order_measure),
    ("additive-compound-additivity", _additivity),
    ("thomas-alpha-compound-display", _thomas_alpha_display),
    ("thomas-closed-loop-convergence", _thomas_closed_loop),
    ("thomas-open-loop-boundedness", _thomas_open_loop),
    ("jacobi-exponential-total-positivity", _jacobi_total_positivity),
    ("example8-initial-cone", _example8_cone)
]

def run_selftest(progress: Progress = None) -> list[dict[str, Any]]:
    """
    Run every golden check.

    Args:
        progress (Progress) = None: Receives CHECKING / COMPLETED updates.

    Returns:
        list[dict[str, Any]]: One {name, passed, detail} entry per check; errors count as failures.
    """

    results: list[dict[str, Any]] = []

    for index, (name, check) in enumerate(GOLDEN_CHECKS):
        try:
            passed, detail = check()
        except Exception as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"

        results.append({"name": name, "passed": bool(passed), "detail": detail})
        show_debug(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}", type = 'INFO' if passed else 'ERROR')
        report(progress, pss.CHECKING, f"Checked {name}", results[-1], (index + 1) / len(GOLDEN_CHECKS))

    report(progress, pss.COMPLETED, "Selftest completed", results, 1.0)
    return results
