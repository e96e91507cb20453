"""
CompoundCert.Classify
~~~~~~~~~~~~

This module implements the structural classification of matrices (Metzler, irreducible, Jacobi,
sign patterns of Metzler compounds) and the sample-based certification of k-positivity,
k-cooperativity, k- and alpha-contraction and k-diagonal stability.

Every certificate is computed on a finite sample set that is recorded in the report; none of them
is a claim over a continuum of times or states.
"""

# Import the required modules
import math
import numpy as np
from scipy.linalg import expm
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, TypeAlias, Literal, Sequence
from CompoundCert.Combinat import lex_sequences, binomial
from CompoundCert.Compound import add_compound, alpha_add_compound, split_alpha
from CompoundCert.Measures import MeasureKind, _MeasureKind, measure, compound_measure, matrix_norm
from CompoundCert.SignVariation import in_cone
from CompoundCert.Dynamics import integrate
from CompoundCert.Systems import SystemDef, Trajectory
from CompoundCert.Configuration import Configuration
from CompoundCert.DomainCheck import DomainCheck, DomainError
from CompoundCert.Progress import Progress, ProgressStatusSelector as pss, report
from CompoundCert.Debugger import show_debug, create_debug_file

# Type Alias
_Property: TypeAlias = Literal['KContracting', 'AlphaContracting', 'KPositive', 'StronglyKPositive', 'KCooperative', 'StronglyKCooperative', 'KDiagStable']
_Verdict: TypeAlias = Literal['Certified', 'Refuted', 'Inconclusive']
_PatternCase: TypeAlias = Literal['metzler', 'alternating', 'odd', 'even']

class PropertySelector:
    """
    A class naming the properties a CertReport can certify.
    """

    # Constants
    K_CONTRACTING: _Property = 'KContracting'
    ALPHA_CONTRACTING: _Property = 'AlphaContracting'
    K_POSITIVE: _Property = 'KPositive'
    STRONGLY_K_POSITIVE: _Property = 'StronglyKPositive'
    K_COOPERATIVE: _Property = 'KCooperative'
    STRONGLY_K_COOPERATIVE: _Property = 'StronglyKCooperative'
    K_DIAG_STABLE: _Property = 'KDiagStable'

class VerdictSelector:
    """
    A class naming the outcomes of a certification run.
    """

    # Constants
    CERTIFIED: _Verdict = 'Certified'
    REFUTED: _Verdict = 'Refuted'
    INCONCLUSIVE: _Verdict = 'Inconclusive'

class PatternCase:
    """
    A class naming the sign-pattern case used by metzler_compound_pattern.
    """

    # Constants
    METZLER: _PatternCase = 'metzler'          # k = 1
    ALTERNATING: _PatternCase = 'alternating'  # k = n-1
    ODD: _PatternCase = 'odd'                  # odd k, 1 < k < n-1
    EVEN: _PatternCase = 'even'                # even k, 1 < k < n-1

# CertReport Class
class CertReport:
    """
    A class for the outcome of a certification run.
    """

    def __init__(self, property: _Property, verdict: _Verdict, k_or_alpha: float, margin: float, grid: dict[str, Any], measure_kind: _MeasureKind = None, witness: dict[str, Any] = None, rationale: str = None, details: dict[str, Any] = None) -> None:
        """
        Initialize the CertReport object.

        Args:
            property (_Property): The certified property.
            verdict (_Verdict): 'Certified', 'Refuted' or 'Inconclusive'.
            k_or_alpha (float): The order k or the real order alpha.
            margin (float): eta for contraction, the smallest off-diagonal slack for Metzler tests,
                minus the largest eigenvalue for diagonal stability.
            grid (dict[str, Any]): Description of the sample set.
            measure_kind (_MeasureKind) = None: The norm, for contraction properties.
            witness (dict[str, Any]) = None: The offending sample and entry, required for Refuted.
            rationale (str) = None: Why the sample check implies the property.
            details (dict[str, Any]) = None: Further values (for example the irreducible fraction).

        Returns:
            None
        """

        self.property: _Property = property
        self.verdict: _Verdict = verdict
        self.k_or_alpha: float = k_or_alpha
        self.margin: float = margin
        self.grid: dict[str, Any] = grid
        self.measure_kind: _MeasureKind | None = measure_kind
        self.witness: dict[str, Any] | None = witness
        self.rationale: str | None = rationale
        self.details: dict[str, Any] = details if details else {}

        # A refutation always comes with its witness, a certificate with a positive margin
        if verdict == VerdictSelector.REFUTED and witness is None:
            raise DomainError("a Refuted report needs a witness")

        if verdict == VerdictSelector.CERTIFIED and not margin > 0:
            raise DomainError(f"a Certified report needs a positive margin, got {margin}")

    def __str__(self) -> str:
        return f"CertReport(property='{self.property}', verdict='{self.verdict}', k_or_alpha={self.k_or_alpha}, margin={self.margin}, witness={self.witness})"

    def __repr__(self) -> str:
        return self.__str__()

    def __bool__(self) -> bool:
        return self.verdict == VerdictSelector.CERTIFIED

    @property
    def certified(self) -> bool:
        """
        Returns True if the verdict is Certified.
        """
        return self.verdict == VerdictSelector.CERTIFIED

    def to_dict(self) -> dict[str, Any]:
        """
        Returns a JSON-ready dictionary of the report.
        """

        result: dict[str, Any] = {
            "property": self.property,
            "verdict": self.verdict,
            "k_or_alpha": self.k_or_alpha,
            "margin": self.margin,
            "grid": self.grid
        }

        if self.measure_kind is not None:
            result["measure_kind"] = self.measure_kind

        if self.witness is not None:
            result["witness"] = self.witness

        if self.rationale is not None:
            result["rationale"] = self.rationale

        if self.details:
            result["details"] = self.details

        return result

def _metzler_tol(A: np.ndarray, tol: float | None) -> float:
    """
    The default Metzler tolerance: Configuration.METZLER_RELATIVE_TOL times max |a_ij| (at least times 1).
    """

    if tol is not None:
        return float(tol)

    scale: float = float(np.max(np.abs(A)))
    return Configuration.METZLER_RELATIVE_TOL * (scale if scale > 0 else 1.0)

def _off_diagonal(A: np.ndarray) -> np.ndarray:
    """
    Boolean mask of the off-diagonal positions.
    """
    return ~np.eye(A.shape[0], dtype = bool)

def is_metzler(A: Any, tol: float = None) -> tuple[bool, tuple[int, int, float] | None]:
    """
    Test whether every off-diagonal entry of A is >= -tol.

    Args:
        A (Any): The square matrix.
        tol (float) = None: The tolerance. Defaults to Configuration.METZLER_RELATIVE_TOL times max |a_ij|.

    Returns:
        tuple[bool, tuple[int, int, float] | None]: The verdict and, when it fails, the 1-based
            (row, column, value) of the most negative off-diagonal entry.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    tol = _metzler_tol(A, tol)
    if A.shape[0] == 1:
        return True, None

    # Most negative off-diagonal entry
    masked: np.ndarray = np.where(_off_diagonal(A), A, np.inf)
    row, col = np.unravel_index(int(np.argmin(masked)), A.shape)
    value: float = float(A[row, col])

    if value >= -tol:
        return True, None

    return False, (int(row) + 1, int(col) + 1, value)

def first_metzler_violation(A: np.ndarray, tol: float) -> tuple[int, int, float] | None:
    """
    Returns the first off-diagonal entry < -tol in row-major order as a 1-based (row, column, value), or None.
    """

    violations: np.ndarray = np.argwhere(_off_diagonal(A) & (A < -tol))
    if violations.size == 0:
        return None

    row, col = violations[0]
    return int(row) + 1, int(col) + 1, float(A[row, col])

def is_irreducible(A: Any) -> bool:
    """
    Test irreducibility: strong connectivity of the digraph with an edge i -> j iff a_ij != 0 (i != j).

    Args:
        A (Any): The square matrix.

    Returns:
        bool: True if the digraph is strongly connected.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    if A.shape[0] == 1:
        return True

    adjacency: csr_matrix = csr_matrix((A != 0.0) & _off_diagonal(A))
    components, _ = connected_components(adjacency, directed = True, connection = 'strong')

    return components == 1

def metzler_compound_pattern(A: Any, k: int, tol: float = None) -> tuple[bool, _PatternCase]:
    """
    Decide whether A^[k] is Metzler from the sign pattern of A alone, without forming the compound.

    k = 1: A Metzler. k = n-1: a_ij >= 0 for odd i-j and a_ij <= 0 for even i-j (i != j).
    Odd 1 < k < n-1: a_1n, a_n1 >= 0, a_ij >= 0 for |i-j| = 1 and a_ij = 0 for 1 < |i-j| < n-1.
    Even 1 < k < n-1: as for odd k but with a_1n, a_n1 <= 0.

    Args:
        A (Any): The square n x n matrix, n >= 3.
        k (int): The order, 1 <= k <= n-1.
        tol (float) = None: The tolerance. Defaults to Configuration.METZLER_RELATIVE_TOL times max |a_ij|.

    Returns:
        tuple[bool, _PatternCase]: The verdict and the case that was applied.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    n: int = A.shape[0]
    if n < 3:
        raise DomainError(f"sign-pattern test needs n >= 3, got n={n}")

    DomainCheck.check_order(k, 1, n - 1)
    tol = _metzler_tol(A, tol)

    if k == 1:
        return is_metzler(A, tol)[0], PatternCase.METZLER

    # Signed distance i - j of every entry
    difference: np.ndarray = np.subtract.outer(np.arange(n), np.arange(n))
    distance: np.ndarray = np.abs(difference)
    off: np.ndarray = _off_diagonal(A)

    if k == n - 1:
        odd: np.ndarray = off & (difference % 2 == 1)
        even: np.ndarray = off & (difference % 2 == 0)
        verdict: bool = bool(np.all(A[odd] >= -tol) and np.all(A[even] <= tol))
        return verdict, PatternCase.ALTERNATING

    corners: np.ndarray = np.array([A[0, n - 1], A[n - 1, 0]])
    neighbours_ok: bool = bool(np.all(A[distance == 1] >= -tol))
    middle_ok: bool = bool(np.all(np.abs(A[(distance > 1) & (distance < n - 1)]) <= tol))

    if k % 2 == 1:
        return bool(neighbours_ok and middle_ok and np.all(corners >= -tol)), PatternCase.ODD

    return bool(neighbours_ok and middle_ok and np.all(corners <= tol)), PatternCase.EVEN

def is_jacobi(A: Any, strict_offdiag: bool = True) -> bool:
    """
    Test whether A is a Jacobi matrix: tridiagonal with positive super- and sub-diagonal entries.

    Args:
        A (Any): The square matrix.
        strict_offdiag (bool) = True: Require > 0 off-diagonals; False accepts >= 0.

    Returns:
        bool: True if A is (strictly or weakly) Jacobi.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    distance: np.ndarray = np.abs(np.subtract.outer(np.arange(A.shape[0]), np.arange(A.shape[0])))

    if np.any(A[distance > 1] != 0.0):
        return False

    neighbours: np.ndarray = A[distance == 1]
    return bool(np.all(neighbours > 0.0) if strict_offdiag else np.all(neighbours >= 0.0))

def _normalize_samples(samples: Sequence[Any]) -> list[tuple[Any, np.ndarray]]:
    """
    Turn samples into (label, matrix) pairs of equal square dimension; bare matrices get their index as label.
    """

    if samples is None or len(samples) == 0:
        raise DomainError("certification needs at least one sample")

    normalized: list[tuple[Any, np.ndarray]] = []
    for index, sample in enumerate(samples):
        if isinstance(sample, tuple) and len(sample) == 2:
            label, matrix = sample
        else:
            label, matrix = index, sample

        matrix = DomainCheck.as_matrix(matrix, f"sample {index}")
        DomainCheck.check_square(matrix, f"sample {index}")
        normalized.append((_plain(label), matrix))

    dimension: int = normalized[0][1].shape[0]
    if any(matrix.shape[0] != dimension for _, matrix in normalized):
        raise DomainError("all samples must have the same dimension")

    return normalized

def _plain(label: Any) -> Any:
    """
    Convert a sample label to plain JSON-ready Python values.
    """

    if isinstance(label, np.ndarray):
        return label.tolist()

    if isinstance(label, np.generic):
        return label.item()

    return label

def _evaluate(function: Callable[[tuple[Any, np.ndarray]], Any], samples: list[tuple[Any, np.ndarray]], workers: int | None) -> list[Any]:
    """
    Evaluate every sample, optionally on a thread pool; results keep the sample order.
    """

    if workers is None or workers <= 1 or len(samples) == 1:
        return [function(sample) for sample in samples]

    with ThreadPoolExecutor(max_workers = workers) as executor:
        return list(executor.map(function, samples))

def sample_times(t_span: tuple[float, float], count: int = None) -> np.ndarray:
    """
    Returns count uniformly spaced times over t_span (Configuration.DEFAULT_TIME_SAMPLES by default).
    """

    count = Configuration.DEFAULT_TIME_SAMPLES if count is None else count
    DomainCheck.check_order(count, 1, 10 ** 7, "count")

    return np.linspace(float(t_span[0]), float(t_span[1]), count)

def _grid_description(samples: list[tuple[Any, np.ndarray]], description: dict[str, Any] = None) -> dict[str, Any]:
    """
    Builds the grid metadata recorded in every report.
    """

    grid: dict[str, Any] = {"samples": len(samples), "dimension": samples[0][1].shape[0]}
    if description:
        grid.update(description)

    return grid

def _certify_metzler_compounds(samples: list[tuple[Any, np.ndarray]], k: int, strong: bool, tol: float | None, exception_fraction: float | None, workers: int | None, progress: Progress | None) -> tuple[_Verdict, float, dict[str, Any] | None, dict[str, Any]]:
    """
    Check that A^[k] is Metzler at every sample (and irreducible at enough samples when strong).

    Returns:
        tuple: (verdict, margin, witness, details).
    """

    n: int = samples[0][1].shape[0]
    DomainCheck.check_order(k, 1, n)

    exception_fraction = Configuration.IRREDUCIBLE_EXCEPTION_FRACTION if exception_fraction is None else exception_fraction
    labels = lex_sequences(k, n)

    def check(sample: tuple[Any, np.ndarray]) -> tuple[float, tuple[int, int, float] | None, bool]:
        compound: np.ndarray = add_compound(sample[1], k).matrix
        sample_tol: float = _metzler_tol(compound, tol)

        # Smallest off-diagonal entry plus the tolerance (0 plus the tolerance for 1 x 1 compounds)
        off: np.ndarray = compound[_off_diagonal(compound)]
        slack: float = (float(np.min(off)) if off.size else 0.0) + sample_tol

        return slack, first_metzler_violation(compound, sample_tol), (is_irreducible(compound) if strong else True)

    report(progress, pss.CERTIFYING, f"Checking {len(samples)} samples of A^[{k}]", None, 0.0)
    results: list[tuple[float, tuple[int, int, float] | None, bool]] = _evaluate(check, samples, workers)

    margin: float = min(slack for slack, _, _ in results)
    details: dict[str, Any] = {}

    # First violating sample in sample order wins
    for index, ((label, _), (_, violation, _)) in enumerate(zip(samples, results)):
        if violation is not None:
            row, col, value = violation
            witness: dict[str, Any] = {
                "sample_index": index,
                "sample": label,
                "position": [row, col],
                "row_set": labels[row - 1].to_list(),
                "col_set": labels[col - 1].to_list(),
                "value": value
            }
            return VerdictSelector.REFUTED, margin, witness, details

    if strong:
        irreducible: list[bool] = [flag for _, _, flag in results]
        fraction: float = sum(irreducible) / len(irreducible)
        details["irreducible_fraction"] = fraction
        details["allowed_exception_fraction"] = exception_fraction

        if fraction < 1.0 - exception_fraction:
            index: int = irreducible.index(False)
            witness = {"sample_index": index, "sample": samples[index][0], "reason": "A^[k] is reducible"}
            return VerdictSelector.REFUTED, margin, witness, details

    # An entry sitting exactly on -tol leaves no slack
    if margin <= 0.0:
        index = int(np.argmin([slack for slack, _, _ in results]))
        return VerdictSelector.INCONCLUSIVE, margin, {"sample_index": index, "sample": samples[index][0], "reason": "no Metzler slack"}, details

    return VerdictSelector.CERTIFIED, margin, None, details

def certify_k_positive(samples: Sequence[Any], k: int, strong: bool = False, tol: float = None, exception_fraction: float = None, workers: int = None, progress: Progress = None, grid: dict[str, Any] = None) -> CertReport:
    """
    Certify (strong) k-positivity of an LTV from samples of A(t): A^[k](t) Metzler at every sample,
    plus irreducibility at a fraction >= 1 - exception_fraction of the samples when strong.

    Args:
        samples (Sequence[Any]): (t, A(t)) pairs or bare matrices.
        k (int): The order.
        strong (bool) = False: Whether to certify strong k-positivity.
        tol (float) = None: The Metzler tolerance. Defaults to Configuration.METZLER_RELATIVE_TOL times max |entry|.
        exception_fraction (float) = None: The allowed fraction of reducible samples.
            Defaults to Configuration.IRREDUCIBLE_EXCEPTION_FRACTION.
        workers (int) = None: Threads used to evaluate the samples.
        progress (Progress) = None: Receives CERTIFYING / CERTIFIED updates.
        grid (dict[str, Any]) = None: Extra grid metadata for the report.

    Returns:
        CertReport: The report; a Refuted report names the first violating sample and compound entry.
    """

    normalized: list[tuple[Any, np.ndarray]] = _normalize_samples(samples)
    verdict, margin, witness, details = _certify_metzler_compounds(normalized, k, strong, tol, exception_fraction, workers, progress)

    result: CertReport = CertReport(
        property = PropertySelector.STRONGLY_K_POSITIVE if strong else PropertySelector.K_POSITIVE,
        verdict = verdict,
        k_or_alpha = k,
        margin = margin,
        grid = _grid_description(normalized, grid),
        witness = witness,
        rationale = "A^[k](t) Metzler at every sample" + (" and irreducible at all but the allowed fraction of samples" if strong else ""),
        details = details
    )

    report(progress, pss.CERTIFIED, f"k-positivity verdict: {result.verdict}", result, 1.0)
    show_debug(f"certify_k_positive(k={k}, strong={strong}): {result.verdict}, margin={margin:.3e}")

    return result

def certify_k_contracting(samples: Sequence[Any], k_or_alpha: float, kind: _MeasureKind = 'L1', margin_tol: float = None, workers: int = None, progress: Progress = None, grid: dict[str, Any] = None) -> CertReport:
    """
    Certify k-contraction (alpha-contraction for a fractional order): eta = -max over samples of
    mu(A^[k]) (or mu(A^[alpha])), Certified iff eta > 0.

    Args:
        samples (Sequence[Any]): (label, matrix) pairs or bare matrices (A(t) samples or Jacobians).
        k_or_alpha (float): The integer or real order, 1 <= k_or_alpha <= n.
        kind (_MeasureKind) = 'L1': The norm.
        margin_tol (float) = None: |eta| within margin_tol * (1 + scale) is Inconclusive.
            Defaults to Configuration.MARGIN_TOL.
        workers (int) = None: Threads used to evaluate the samples.
        progress (Progress) = None: Receives CERTIFYING / CERTIFIED updates.
        grid (dict[str, Any]) = None: Extra grid metadata for the report.

    Returns:
        CertReport: The report with eta as margin; the witness is the sample with the largest measure.
    """

    normalized: list[tuple[Any, np.ndarray]] = _normalize_samples(samples)
    kind = MeasureKind.check(kind)
    margin_tol = Configuration.MARGIN_TOL if margin_tol is None else margin_tol

    n: int = normalized[0][1].shape[0]
    k, s = split_alpha(k_or_alpha, n)
    fractional: bool = s > 0.0

    def evaluate(sample: tuple[Any, np.ndarray]) -> float:
        if fractional:
            return measure(alpha_add_compound(sample[1], k_or_alpha), kind)
        return compound_measure(sample[1], k, kind)

    report(progress, pss.CERTIFYING, f"Evaluating the {kind} measure of {len(normalized)} compound samples", None, 0.0)
    values: list[float] = _evaluate(evaluate, normalized, workers)

    # First maximiser in sample order
    worst: int = int(np.argmax(values))
    eta: float = -float(values[worst])
    scale: float = max(float(np.max(np.abs(matrix))) for _, matrix in normalized)

    if abs(eta) <= margin_tol * (1.0 + scale):
        verdict: _Verdict = VerdictSelector.INCONCLUSIVE
    elif eta > 0:
        verdict = VerdictSelector.CERTIFIED
    else:
        verdict = VerdictSelector.REFUTED

    witness: dict[str, Any] | None = None
    if verdict != VerdictSelector.CERTIFIED:
        witness = {"sample_index": worst, "sample": normalized[worst][0], "measure": float(values[worst])}

    # Per-sample values as a debug artefact
    create_debug_file("certify-k-contracting", "csv", "\n".join(f"{index},{float(value)!r}" for index, value in enumerate(values)))

    result: CertReport = CertReport(
        property = PropertySelector.ALPHA_CONTRACTING if fractional else PropertySelector.K_CONTRACTING,
        verdict = verdict,
        k_or_alpha = float(k_or_alpha) if fractional else k,
        margin = eta,
        grid = _grid_description(normalized, grid),
        measure_kind = kind,
        witness = witness,
        rationale = f"mu_{kind}(A^[{k_or_alpha}]) <= -eta at every sample",
        details = {"coppel_bound": "||Phi^(k)(t)|| <= exp(-eta t)"} if verdict == VerdictSelector.CERTIFIED and not fractional else None
    )

    report(progress, pss.CERTIFIED, f"Contraction verdict: {result.verdict}", result, 1.0)
    show_debug(f"certify_k_contracting({k_or_alpha}, {kind}): {result.verdict}, eta={eta:.6g}")

    return result

def certify_alpha_contracting(samples: Sequence[Any], alpha: float, kind: _MeasureKind = 'L1', margin_tol: float = None, workers: int = None, progress: Progress = None, grid: dict[str, Any] = None) -> CertReport:
    """
    Certify alpha-contraction and, when Certified, report the implied dimension bound.

    Args:
        samples (Sequence[Any]): (label, Jacobian) pairs or bare matrices.
        alpha (float): The real order.
        kind (_MeasureKind) = 'L1': The norm.
        margin_tol (float) = None: See certify_k_contracting.
        workers (int) = None: Threads used to evaluate the samples.
        progress (Progress) = None: Receives progress updates.
        grid (dict[str, Any]) = None: Extra grid metadata for the report.

    Returns:
        CertReport: The report, with property AlphaContracting.
    """

    result: CertReport = certify_k_contracting(samples, alpha, kind, margin_tol, workers, progress, grid)
    result.property = PropertySelector.ALPHA_CONTRACTING
    result.k_or_alpha = float(alpha)

    if result.certified:
        result.details["dimension_bound"] = f"every compact strongly invariant set has Hausdorff dimension < {float(alpha)!r}"

    return result

def certify_k_cooperative(jacobian: Callable[[np.ndarray], Any], grid: Any, k: int, strong: bool = False, tol: float = None, exception_fraction: float = None, workers: int = None, progress: Progress = None) -> CertReport:
    """
    Certify (strong) k-cooperativity of a nonlinear system on a convex state space from a grid of
    Jacobian samples: J(x)^[k] Metzler at every grid point (irreducible as well for strong).

    The variational matrix is an average of Jacobians over a segment of the convex state space, and
    the set of matrices with a Metzler k-compound is a convex cone, so the sample-wise sign pattern
    carries over to the variational LTV.

    Args:
        jacobian (Callable[[np.ndarray], Any]): x -> J(x).
        grid (Any): The grid points, one per row.
        k (int): The order.
        strong (bool) = False: Whether to certify strong k-cooperativity.
        tol (float) = None: The Metzler tolerance.
        exception_fraction (float) = None: The allowed fraction of reducible samples.
        workers (int) = None: Threads used to evaluate the samples.
        progress (Progress) = None: Receives SAMPLING / CERTIFYING / CERTIFIED updates.

    Returns:
        CertReport: The report.
    """

    points: np.ndarray = np.atleast_2d(np.asarray(grid, dtype = float))
    if points.size == 0:
        raise DomainError("certify_k_cooperative needs a non-empty grid")

    report(progress, pss.SAMPLING, f"Sampling the Jacobian at {points.shape[0]} grid points", None, 0.0)
    samples: list[tuple[Any, np.ndarray]] = _normalize_samples([(point, jacobian(point)) for point in points])
    report(progress, pss.SAMPLED, f"Sampled {len(samples)} Jacobians", None, 1.0)

    verdict, margin, witness, details = _certify_metzler_compounds(samples, k, strong, tol, exception_fraction, workers, progress)

    result: CertReport = CertReport(
        property = PropertySelector.STRONGLY_K_COOPERATIVE if strong else PropertySelector.K_COOPERATIVE,
        verdict = verdict,
        k_or_alpha = k,
        margin = margin,
        grid = _grid_description(samples, {"points": points.shape[0], "lower": points.min(axis = 0).tolist(), "upper": points.max(axis = 0).tolist()}),
        witness = witness,
        rationale = "J(x)^[k] Metzler at every grid point; the segment-averaged variational matrix keeps the sign pattern on a convex state space",
        details = details
    )

    report(progress, pss.CERTIFIED, f"k-cooperativity verdict: {result.verdict}", result, 1.0)
    return result

def k_diag_stability_check(A: Any, k: int, D: Any) -> tuple[bool, float]:
    """
    Check that D A^[k] + (A^[k])^T D is negative definite for a supplied positive diagonal D.

    Args:
        A (Any): The square n x n matrix.
        k (int): The order.
        D (Any): The positive diagonal of size C(n,k), as a vector or a diagonal matrix.

    Returns:
        tuple[bool, float]: The verdict and the largest eigenvalue of the symmetric matrix.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)
    DomainCheck.check_order(k, 1, A.shape[0])

    size: int = binomial(A.shape[0], k)
    weights: np.ndarray = np.asarray(D, dtype = float)

    # Accept a diagonal matrix or its diagonal
    if weights.ndim == 2:
        if weights.shape != (size, size) or np.any(weights[_off_diagonal(weights)] != 0.0):
            raise DomainError(f"D must be a diagonal {size}x{size} matrix")
        weights = np.diag(weights)

    weights = DomainCheck.as_vector(weights, "D")
    if weights.size != size:
        raise DomainError(f"D has {weights.size} entries, A^[{k}] has dimension {size}")

    if np.any(weights <= 0.0):
        raise DomainError("D must have strictly positive diagonal entries")

    compound: np.ndarray = add_compound(A, k).matrix
    symmetric: np.ndarray = weights[:, None] * compound + compound.T * weights[None, :]
    largest: float = float(np.linalg.eigvalsh(symmetric)[-1])

    return largest < 0.0, largest

def certify_k_diag_stable(A: Any, k: int, D: Any) -> CertReport:
    """
    Wrap k_diag_stability_check in a CertReport (margin = minus the largest eigenvalue).
    """

    stable, largest = k_diag_stability_check(A, k, D)

    return CertReport(
        property = PropertySelector.K_DIAG_STABLE,
        verdict = VerdictSelector.CERTIFIED if stable else VerdictSelector.REFUTED,
        k_or_alpha = k,
        margin = -largest,
        grid = {"samples": 1, "dimension": DomainCheck.as_matrix(A).shape[0]},
        witness = None if stable else {"max_eigenvalue": largest},
        rationale = "D A^[k] + (A^[k])^T D negative definite for the supplied D"
    )

def check_cone_invariance(system: SystemDef, pairs: Sequence[tuple[Any, Any]], k: int, t_span: tuple[float, float], step: float = None, tol: float = None, progress: Progress = None) -> list[dict[str, Any]]:
    """
    Sample the invariance of P^k_- under differences of solutions: for each (a, b) with a - b in P^k_-,
    check that x(t,a) - x(t,b) stays in P^k_- at every stored step.

    Pairs whose initial difference is outside the cone are skipped.

    Args:
        system (SystemDef): The system.
        pairs (Sequence[tuple[Any, Any]]): The initial conditions.
        k (int): The order.
        t_span (tuple[float, float]): The interval.
        step (float) = None: The integrator step.
        tol (float) = None: The zero tolerance of the sign counts.
        progress (Progress) = None: Receives CHECKING / CHECKED updates.

    Returns:
        list[dict[str, Any]]: The violations (pair index, time, difference); empty when none were found.
    """

    violations: list[dict[str, Any]] = []
    checked: int = 0

    for index, (a, b) in enumerate(pairs):
        a = DomainCheck.as_vector(a, "a")
        b = DomainCheck.as_vector(b, "b")

        if not in_cone(a - b, k, 'closed', tol):
            continue

        first: Trajectory = integrate(system, a, t_span, step)
        second: Trajectory = integrate(system, b, t_span, step)
        checked += 1

        for t, difference in zip(first.times, first.states - second.states):
            # Coinciding solutions are trivially in every cone
            if np.all(difference == 0.0):
                continue

            if not in_cone(difference, k, 'closed', tol):
                violations.append({"pair_index": index, "time": float(t), "difference": difference.tolist()})
                break

        report(progress, pss.CHECKING, f"Checked pair {index + 1} of {len(pairs)}", None, (index + 1) / len(pairs))

    report(progress, pss.CHECKED, f"Checked {checked} pairs, {len(violations)} violations", violations, 1.0)
    return violations

def ltv_samples(matrix: Callable[[float], Any], t_span: tuple[float, float], count: int = None) -> list[tuple[float, np.ndarray]]:
    """
    Sample t -> A(t) on uniformly spaced times.

    Args:
        matrix (Callable[[float], Any]): t -> A(t).
        t_span (tuple[float, float]): The interval.
        count (int) = None: The number of samples. Defaults to Configuration.DEFAULT_TIME_SAMPLES.

    Returns:
        list[tuple[float, np.ndarray]]: The (t, A(t)) pairs.
    """

    return [(float(t), DomainCheck.as_matrix(matrix(float(t)))) for t in sample_times(t_span, count)]

def jacobian_samples(system: SystemDef, grid: Any, t: float = 0.0) -> list[tuple[list[float], np.ndarray]]:
    """
    Sample the Jacobian of a system on grid points (one per row).
    """

    points: np.ndarray = np.atleast_2d(np.asarray(grid, dtype = float))
    return [(point.tolist(), system.jacobian_at(t, point)) for point in points]

def coppel_check(A: Any, k: int, eta: float, times: Sequence[float], kind: _MeasureKind = 'L1', tolerance: float = 1e-4) -> bool:
    """
    Check ||exp(A^[k] t)|| <= exp(-eta t) (1 + tolerance) at the given times for a constant A.

    Args:
        A (Any): The constant matrix.
        k (int): The order.
        eta (float): The certified margin.
        times (Sequence[float]): The times.
        kind (_MeasureKind) = 'L1': The norm on the compound space.
        tolerance (float) = 1e-4: The relative slack.

    Returns:
        bool: True if the bound holds at every time.
    """

    compound: np.ndarray = add_compound(A, k).matrix
    return all(matrix_norm(expm(compound * t), kind) <= math.exp(-eta * t) * (1.0 + tolerance) for t in times)
