"""
CompoundCert.CLI
~~~~~~~~~~~~

This module implements the command-line front end: it resolves a system from a problem file,
a matrix literal or a named builtin, dispatches to the library and writes a JSON report
(plus CSV time series for simulate and trace).

Exit codes: 0 ok / Certified, 1 error, 2 Refuted, Inconclusive or a failed selftest.
"""

# Import the required modules
import io
import math
import csv
import sys
import json
import time
import hashlib
import argparse
import numpy as np
from pathlib import Path
from typing import Any
from CompoundCert.Compound import mult_compound, add_compound, add_compound_oracle, alpha_add_compound, alpha_mult_compound
from CompoundCert.Measures import MeasureKind, measure, compound_measure
from CompoundCert.Classify import (
    CertReport, certify_k_contracting, certify_alpha_contracting, certify_k_positive,
    certify_k_cooperative, certify_k_diag_stable, ltv_samples, jacobian_samples
)
from CompoundCert.Dynamics import (
    IntegrationBlowupError, SignVariationError, integrate, transition_matrix, volume_trace,
    compound_transition_residual, sign_variation_trace, converges_to_equilibrium,
    attractor_summary, state_space_grid
)
from CompoundCert.Systems import SystemDef, Trajectory, builtin_system, ltv_system, BUILTIN_SYSTEMS
from CompoundCert.Expression import ExpressionParseError, MatrixExpression, entry_matrix
from CompoundCert.GoldenExamples import run_selftest
from CompoundCert.Configuration import Configuration
from CompoundCert.DomainCheck import DomainError
from CompoundCert.Progress import Progress, _ProgressData
from CompoundCert.Debugger import DebuggerConfiguration, show_debug

# Exception Classes
class ProblemFileError(Exception):
    """
    An exception for malformed problem files and inconsistent command-line parameters.
    """

    def __init__(self, message: str, field: str = None, line: int = None) -> None:
        """
        Initialize the ProblemFileError object.

        Args:
            message (str): The error message.
            field (str) = None: The offending field.
            line (int) = None: The 1-based line of the field in the problem file.
        """

        self.field: str | None = field
        self.line: int | None = line
        self.message: str = message
        super().__init__(self.message)

# Exit codes
EXIT_OK: int = 0
EXIT_ERROR: int = 1
EXIT_NOT_CERTIFIED: int = 2

# Accepted values
TASKS: tuple[str, ...] = ("compound", "measure", "certify", "simulate", "trace")
COMPOUND_KINDS: tuple[str, ...] = ("multiplicative", "additive", "additive-oracle", "alpha-additive", "alpha-multiplicative")
PROPERTIES: tuple[str, ...] = ("k-contracting", "alpha-contracting", "k-positive", "strongly-k-positive", "k-cooperative", "strongly-k-cooperative", "k-diag-stable")
SIMULATE_TASKS: tuple[str, ...] = ("state", "transition", "volume", "compound-residual", "equilibrium", "attractor")
PARAMETERS: tuple[str, ...] = ("k", "alpha", "kind", "property", "grid", "samples", "D", "task", "x0", "t_span", "step", "t", "workers")
SYSTEM_PARAMETERS: tuple[str, ...] = ("b", "c", "n", "delta1")

# Default initial states of the builtins
DEFAULT_X0: dict[str, list[float]] = {
    "example5": [1.0, 1.0],
    "example8": [4.0, -21.0, -1.0],
    "thomas": [1.0, -2.0, 1.0]
}

def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser with one subcommand per task.

    Returns:
        argparse.ArgumentParser: The parser.
    """

    # Options shared by every subcommand
    common: argparse.ArgumentParser = argparse.ArgumentParser(add_help = False)

    source = common.add_argument_group("system source (exactly one)")
    source.add_argument("--problem", help = "JSON problem file (schema_version 1)")
    source.add_argument("--matrix-file", help = "JSON file holding a matrix literal")
    source.add_argument("--matrix", help = "matrix literal or expression over t, e.g. '[[-1,0],[-2*cos(t),0]]'")
    source.add_argument("--builtin", choices = BUILTIN_SYSTEMS, help = "named example system")

    builtin = common.add_argument_group("builtin parameters")
    builtin.add_argument("--b", type = float, help = "Thomas friction (default 0.1)")
    builtin.add_argument("--c", type = float, help = "Thomas feedback gain (default 0)")
    builtin.add_argument("--n", type = int, help = "cyclic system dimension (default 4)")
    builtin.add_argument("--delta1", type = int, choices = (-1, 1), help = "cyclic system feedback sign (default -1)")

    task = common.add_argument_group("task parameters")
    task.add_argument("--k", type = int, help = "integer order")
    task.add_argument("--alpha", type = float, help = "real order")
    task.add_argument("--s", type = float, help = "fractional part; --k 2 --s 0.74 means alpha = 2.74")
    task.add_argument("--kind", help = "compound kind or measure kind (L1, L2, LInf)")
    task.add_argument("--property", choices = PROPERTIES)
    task.add_argument("--grid", type = int, help = "grid points per state axis")
    task.add_argument("--samples", type = int, help = "time samples for LTV certification")
    task.add_argument("--D", help = "comma-separated positive diagonal for k-diag-stable")
    task.add_argument("--task", dest = "sim_task", choices = SIMULATE_TASKS, help = "simulation quantity")
    task.add_argument("--x0", help = "comma-separated initial state (also the Jacobian point for nonlinear systems)")
    task.add_argument("--t-span", help = "interval a:b")
    task.add_argument("--step", type = float, help = "integrator step")
    task.add_argument("--t", type = float, help = "time at which a time-varying matrix is evaluated")
    task.add_argument("--workers", type = int, help = "threads for sample evaluation")

    output = common.add_argument_group("output")
    output.add_argument("--csv", help = "write the time series of simulate / trace to this CSV file")
    output.add_argument("--out", help = "write the JSON report to this file instead of stdout")
    output.add_argument("--debug", action = "store_true", help = "print debug messages to stderr")
    output.add_argument("--timing", action = "store_true", help = "add timing_ms to the report")

    parser: argparse.ArgumentParser = argparse.ArgumentParser(prog = "compoundcert", description = "Compound matrices and k-contraction / k-positivity certificates.")
    subparsers = parser.add_subparsers(dest = "command", required = True)

    subparsers.add_parser("compound", parents = [common], help = "compute a compound matrix")
    subparsers.add_parser("measure", parents = [common], help = "compute a matrix measure")
    subparsers.add_parser("certify", parents = [common], help = "certify a property on samples")
    subparsers.add_parser("simulate", parents = [common], help = "integrate a system")
    subparsers.add_parser("trace", parents = [common], help = "sign-variation trace along a solution")
    subparsers.add_parser("selftest", parents = [common], help = "run the golden-example suite")

    return parser

def _line_of(text: str, key: str) -> int | None:
    """
    Returns the 1-based line of the first occurrence of "key" in a JSON text.
    """

    position: int = text.find(f'"{key}"')
    return text.count("\n", 0, position) + 1 if position >= 0 else None

def _is_number(value: Any) -> bool:
    """
    Returns True for a finite JSON number (booleans excluded).
    """

    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)

def _is_count(value: Any, low: int) -> bool:
    """
    Returns True for a JSON integer of at least "low".
    """

    return isinstance(value, int) and not isinstance(value, bool) and value >= low

def _is_number_list(value: Any, length: int = None) -> bool:
    """
    Returns True for a non-empty list of finite numbers, of the given length when one is given.
    """

    if not isinstance(value, list) or not value or not all(_is_number(item) for item in value):
        return False

    return length is None or len(value) == length

# Shape checks of the parameters, with the expectation quoted in the diagnostic
PARAMETER_CHECKS: dict[str, tuple[Any, str]] = {
    "k": (lambda v: _is_count(v, 1), "an integer >= 1"),
    "alpha": (lambda v: _is_number(v) and v >= 1.0, "a number >= 1"),
    "kind": (lambda v: isinstance(v, str), "a string"),
    "property": (lambda v: isinstance(v, str), "a string"),
    "task": (lambda v: isinstance(v, str), "a string"),
    "grid": (lambda v: _is_count(v, 2), "an integer >= 2"),
    "samples": (lambda v: _is_count(v, 1), "an integer >= 1"),
    "workers": (lambda v: _is_count(v, 1), "an integer >= 1"),
    "D": (lambda v: _is_number_list(v) and all(item > 0.0 for item in v), "a list of positive numbers"),
    "x0": (lambda v: _is_number_list(v), "a non-empty list of numbers"),
    "t_span": (lambda v: _is_number_list(v, 2) and v[0] <= v[1], "a pair [t0, t1] with t0 <= t1"),
    "step": (lambda v: _is_number(v) and v > 0.0, "a number > 0"),
    "t": (lambda v: _is_number(v), "a number")
}

SYSTEM_CHECKS: dict[str, tuple[Any, str]] = {
    "builtin": (lambda v: isinstance(v, str), "a string"),
    "expression": (lambda v: isinstance(v, str), "a string"),
    "matrix": (lambda v: isinstance(v, list) and bool(v) and all(isinstance(row, list) and row for row in v), "a non-empty array of non-empty rows"),
    "b": (lambda v: _is_number(v), "a number"),
    "c": (lambda v: _is_number(v), "a number"),
    "n": (lambda v: _is_count(v, 2), "an integer >= 2"),
    "delta1": (lambda v: v in (-1, 1) and not isinstance(v, bool), "-1 or 1")
}

def validate_fields(values: dict[str, Any], checks: dict[str, tuple[Any, str]], prefix: str, text: str = None) -> None:
    """
    Check the type and shape of every field before anything is computed.

    Args:
        values (dict[str, Any]): The fields to check.
        checks (dict[str, tuple[Any, str]]): Predicate and expectation per field name.
        prefix (str): The field path prefix used in diagnostics, e.g. "parameters".
        text (str) = None: The problem-file text, for line numbers.

    Returns:
        None

    Raises:
        ProblemFileError: If a field has the wrong type or shape.
    """

    for key, value in values.items():
        if key not in checks:
            continue

        accepted, expectation = checks[key]
        if not accepted(value):
            raise ProblemFileError(f"{key} must be {expectation}, got {value!r}", f"{prefix}.{key}", _line_of(text, key) if text else None)

    # One order at a time
    if prefix == "parameters" and "k" in values and "alpha" in values:
        raise ProblemFileError("give k or alpha, not both", f"{prefix}.alpha", _line_of(text, "alpha") if text else None)

def load_problem_file(path: str) -> dict[str, Any]:
    """
    Read and validate a problem file.

    Args:
        path (str): The file path.

    Returns:
        dict[str, Any]: {schema_version, task, system, parameters}.
    """

    text: str = Path(path).read_text(encoding = "utf-8")

    try:
        problem: Any = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"invalid JSON: {exc.msg}", None, exc.lineno)

    if not isinstance(problem, dict):
        raise ProblemFileError("a problem file must hold a JSON object", None, 1)

    if problem.get("schema_version") != 1:
        raise ProblemFileError(f"unsupported schema_version {problem.get('schema_version')!r}, expected 1", "schema_version", _line_of(text, "schema_version"))

    if problem.get("task") not in TASKS:
        raise ProblemFileError(f"task must be one of {', '.join(TASKS)}", "task", _line_of(text, "task"))

    system: Any = problem.get("system")
    if not isinstance(system, dict):
        raise ProblemFileError("system must be an object", "system", _line_of(text, "system"))

    sources: list[str] = [key for key in ("matrix", "expression", "builtin") if key in system]
    if len(sources) != 1:
        raise ProblemFileError("system needs exactly one of matrix, expression or builtin", "system", _line_of(text, "system"))

    for key in system:
        if key not in ("matrix", "expression", "builtin", *SYSTEM_PARAMETERS):
            raise ProblemFileError(f"unknown system field '{key}'", f"system.{key}", _line_of(text, key))

    parameters: Any = problem.get("parameters", {})
    if not isinstance(parameters, dict):
        raise ProblemFileError("parameters must be an object", "parameters", _line_of(text, "parameters"))

    for key in parameters:
        if key not in PARAMETERS:
            raise ProblemFileError(f"unknown parameter '{key}'", f"parameters.{key}", _line_of(text, key))

    for key in problem:
        if key not in ("schema_version", "task", "system", "parameters"):
            raise ProblemFileError(f"unknown field '{key}'", key, _line_of(text, key))

    validate_fields(system, SYSTEM_CHECKS, "system", text)
    validate_fields(parameters, PARAMETER_CHECKS, "parameters", text)

    return {"schema_version": 1, "task": problem["task"], "system": system, "parameters": parameters}

def _split_numbers(text: str, field: str) -> list[float]:
    """
    Parse a comma-separated list of numbers.
    """

    try:
        return [float(value) for value in text.split(",")]
    except ValueError:
        raise ProblemFileError(f"{field} must be comma-separated numbers, got {text!r}", field)

def _parse_span(text: str) -> list[float]:
    """
    Parse an interval 'a:b'.
    """

    parts: list[str] = text.split(":")
    if len(parts) != 2:
        raise ProblemFileError(f"t_span must look like a:b, got {text!r}", "t_span")

    return _split_numbers(",".join(parts), "t_span")

def resolve_problem(args: argparse.Namespace) -> dict[str, Any]:
    """
    Merge the command line with an optional problem file into one canonical problem.

    Problem-file parameters fill in whatever the command line leaves unset.

    Args:
        args (argparse.Namespace): The parsed arguments.

    Returns:
        dict[str, Any]: The canonical problem {schema_version, task, system, parameters}.
    """

    given: list[str] = [name for name in ("problem", "matrix_file", "matrix", "builtin") if getattr(args, name) is not None]
    if len(given) != 1:
        raise ProblemFileError("give exactly one of --problem, --matrix-file, --matrix or --builtin", "system")

    parameters: dict[str, Any] = {}
    system: dict[str, Any] = {}

    if args.problem is not None:
        problem: dict[str, Any] = load_problem_file(args.problem)
        if problem["task"] != args.command:
            raise ProblemFileError(f"problem file task '{problem['task']}' does not match the '{args.command}' command", "task")
        system = dict(problem["system"])
        parameters = dict(problem["parameters"])
    elif args.matrix_file is not None:
        content: Any = json.loads(Path(args.matrix_file).read_text(encoding = "utf-8"))
        system = {"matrix": content["matrix"] if isinstance(content, dict) and "matrix" in content else content}
    elif args.matrix is not None:
        try:
            system = {"matrix": json.loads(args.matrix)}
        except json.JSONDecodeError:
            system = {"expression": args.matrix}
    else:
        system = {"builtin": args.builtin}

    # Builtin parameters from the command line
    for name in SYSTEM_PARAMETERS:
        if getattr(args, name) is not None:
            system[name] = getattr(args, name)

    # Task parameters from the command line win over the problem file
    alpha: float | None = args.alpha
    if args.s is not None:
        if args.k is None:
            raise ProblemFileError("--s needs --k", "s")
        alpha = args.k + args.s

    command_line: dict[str, Any] = {
        "k": args.k if args.s is None else None,
        "alpha": alpha,
        "kind": args.kind,
        "property": args.property,
        "grid": args.grid,
        "samples": args.samples,
        "D": _split_numbers(args.D, "D") if args.D else None,
        "task": args.sim_task,
        "x0": _split_numbers(args.x0, "x0") if args.x0 else None,
        "t_span": _parse_span(args.t_span) if args.t_span else None,
        "step": args.step,
        "t": args.t,
        "workers": args.workers
    }

    # An order given on the command line replaces the problem file's order of either kind
    if command_line["k"] is not None:
        parameters.pop("alpha", None)
    if command_line["alpha"] is not None:
        parameters.pop("k", None)

    for name, value in command_line.items():
        if value is not None:
            parameters[name] = value

    validate_fields(system, SYSTEM_CHECKS, "system")
    validate_fields(parameters, PARAMETER_CHECKS, "parameters")

    return {"schema_version": 1, "task": args.command, "system": system, "parameters": parameters}

def input_digest(problem: dict[str, Any]) -> str:
    """
    Returns the SHA-256 of the canonical (sorted-key, compact) JSON of a problem.
    """

    canonical: str = json.dumps(problem, sort_keys = True, separators = (",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

def build_system(description: dict[str, Any]) -> SystemDef:
    """
    Build the SystemDef of a canonical problem.

    Args:
        description (dict[str, Any]): The problem's system object.

    Returns:
        SystemDef: The system.
    """

    if "builtin" in description:
        return builtin_system(
            description["builtin"],
            b = description.get("b", 0.1),
            c = description.get("c", 0.0),
            n = description.get("n", 4),
            delta1 = description.get("delta1", -1)
        )

    expression: MatrixExpression = entry_matrix(description["matrix"]) if "matrix" in description else MatrixExpression(description["expression"])
    if expression.depends_on_time:
        return ltv_system(expression, "matrix")

    return ltv_system(expression.evaluate(0.0), "matrix")

def _x0(system: SystemDef, parameters: dict[str, Any]) -> np.ndarray:
    """
    The initial state (or Jacobian point): the parameter, the builtin default, or the ones vector.
    """

    if "x0" in parameters:
        if len(parameters["x0"]) != system.dimension:
            raise ProblemFileError(f"x0 has {len(parameters['x0'])} entries, the system has dimension {system.dimension}", "parameters.x0")
        return np.asarray(parameters["x0"], dtype = float)

    if system.name in DEFAULT_X0:
        return np.asarray(DEFAULT_X0[system.name], dtype = float)

    return 0.5 * np.ones(system.dimension)

def _t_span(system: SystemDef, parameters: dict[str, Any], default: float = None) -> tuple[float, float]:
    """
    The time interval: the parameter, or [0, default], or [0, 2 pi] for LTV systems and [0, 1] otherwise.
    """

    if "t_span" in parameters:
        return float(parameters["t_span"][0]), float(parameters["t_span"][1])

    if default is not None:
        return 0.0, float(default)

    return (0.0, 2.0 * np.pi) if system.is_ltv and not system.constant else (0.0, 1.0)

def _step(system: SystemDef, parameters: dict[str, Any]) -> float:
    """
    The integrator step: the parameter, or the Thomas step for nonlinear systems and the default step otherwise.
    """

    if "step" in parameters:
        return float(parameters["step"])

    return Configuration.DEFAULT_STEP if system.is_ltv else Configuration.THOMAS_STEP

def _point_matrix(system: SystemDef, parameters: dict[str, Any]) -> np.ndarray:
    """
    The single matrix a compound / measure / diagonal-stability task works on: A(t) or J(x0).
    """

    if system.is_ltv:
        return system.matrix_at(float(parameters.get("t", 0.0)))

    return system.jacobian_at(float(parameters.get("t", 0.0)), _x0(system, parameters))

def _order(parameters: dict[str, Any], allow_alpha: bool = True) -> float:
    """
    The requested order: k, or alpha when allowed.
    """

    if "k" in parameters:
        return int(parameters["k"])

    if allow_alpha and "alpha" in parameters:
        return float(parameters["alpha"])

    raise ProblemFileError("this task needs --k" + (" or --alpha" if allow_alpha else ""), "k")

def _samples(system: SystemDef, parameters: dict[str, Any]) -> tuple[list[tuple[Any, np.ndarray]], dict[str, Any]]:
    """
    The certification samples with their grid description.
    """

    if system.is_ltv and system.constant:
        return [(0.0, system.matrix_at(0.0))], {"kind": "constant"}

    if system.is_ltv:
        span: tuple[float, float] = _t_span(system, parameters)
        count: int = int(parameters.get("samples", Configuration.DEFAULT_TIME_SAMPLES))
        return ltv_samples(system.matrix_at, span, count), {"kind": "time", "t_span": list(span), "count": count}

    points: int = int(parameters.get("grid", Configuration.DEFAULT_GRID_POINTS))
    grid: np.ndarray = state_space_grid(system, points)
    return jacobian_samples(system, grid), {"kind": "state", "points_per_axis": points, "state_space": system.to_dict().get("state_space")}

def task_compound(system: SystemDef, parameters: dict[str, Any]) -> tuple[dict[str, Any], int, list[list[Any]] | None]:
    """
    Compute the requested compound of A(t) or J(x0).
    """

    kind: str = parameters.get("kind", "additive")
    if kind not in COMPOUND_KINDS:
        raise ProblemFileError(f"compound kind must be one of {', '.join(COMPOUND_KINDS)}", "kind")

    A: np.ndarray = _point_matrix(system, parameters)
    result: dict[str, Any] = {"kind": kind}

    if kind in ("alpha-additive", "alpha-multiplicative"):
        alpha: float = _order(parameters)
        matrix: np.ndarray = alpha_add_compound(A, alpha) if kind == "alpha-additive" else alpha_mult_compound(A, alpha)
        result["alpha"] = float(alpha)
    else:
        k: int = int(_order(parameters, allow_alpha = False))
        builder = {"multiplicative": mult_compound, "additive": add_compound, "additive-oracle": add_compound_oracle}[kind]
        compound = builder(A, k)
        matrix = compound.matrix
        result["k"] = k
        result["row_sets"] = [s.to_list() for s in compound.row_sets]

    result["result_matrix"] = matrix.tolist()
    result["shape"] = list(matrix.shape)

    return result, EXIT_OK, None

def task_measure(system: SystemDef, parameters: dict[str, Any]) -> tuple[dict[str, Any], int, list[list[Any]] | None]:
    """
    Compute mu(A), mu(A^[k]) or mu(A^[alpha]) of A(t) or J(x0).
    """

    kind: str = MeasureKind.check(parameters.get("kind", MeasureKind.L1))
    A: np.ndarray = _point_matrix(system, parameters)
    result: dict[str, Any] = {"kind": kind}

    if "k" in parameters:
        result["k"] = int(parameters["k"])
        result["measure"] = compound_measure(A, int(parameters["k"]), kind)
    elif "alpha" in parameters:
        result["alpha"] = float(parameters["alpha"])
        result["measure"] = measure(alpha_add_compound(A, float(parameters["alpha"])), kind)
    else:
        result["measure"] = measure(A, kind)

    return result, EXIT_OK, None

def task_certify(system: SystemDef, parameters: dict[str, Any], progress: Progress) -> tuple[dict[str, Any], int, list[list[Any]] | None]:
    """
    Run the requested certifier.
    """

    prop: str | None = parameters.get("property")
    if prop not in PROPERTIES:
        raise ProblemFileError(f"certify needs --property, one of {', '.join(PROPERTIES)}", "property")

    workers: int | None = parameters.get("workers")
    kind: str = MeasureKind.check(parameters.get("kind", MeasureKind.L1))

    if prop == "k-diag-stable":
        if "D" not in parameters:
            raise ProblemFileError("k-diag-stable needs --D", "D")
        report: CertReport = certify_k_diag_stable(_point_matrix(system, parameters), int(_order(parameters, allow_alpha = False)), parameters["D"])
    elif prop in ("k-cooperative", "strongly-k-cooperative"):
        if system.is_ltv:
            raise ProblemFileError("k-cooperativity needs a nonlinear system; use k-positive for LTV systems", "property")
        points: int = int(parameters.get("grid", Configuration.DEFAULT_GRID_POINTS))
        report = certify_k_cooperative(
            lambda x: system.jacobian_at(0.0, x), state_space_grid(system, points), int(_order(parameters, allow_alpha = False)),
            strong = prop.startswith("strongly"), workers = workers, progress = progress
        )
    else:
        samples, grid = _samples(system, parameters)
        if prop in ("k-positive", "strongly-k-positive"):
            report = certify_k_positive(samples, int(_order(parameters, allow_alpha = False)), strong = prop.startswith("strongly"), workers = workers, progress = progress, grid = grid)
        elif prop == "alpha-contracting":
            report = certify_alpha_contracting(samples, _order(parameters), kind, workers = workers, progress = progress, grid = grid)
        else:
            report = certify_k_contracting(samples, _order(parameters), kind, workers = workers, progress = progress, grid = grid)

    return report.to_dict(), EXIT_OK if report.certified else EXIT_NOT_CERTIFIED, None

def _trajectory_rows(trajectory: Trajectory, prefix: str) -> list[list[Any]]:
    """
    CSV rows with a header: t, then prefix1 ... prefixN (or just prefix for scalar states).
    """

    width: int = int(np.prod(trajectory.states.shape[1:])) if trajectory.states.ndim > 1 else 1
    header: list[str] = ["t", prefix] if trajectory.states.ndim == 1 else ["t", *[f"{prefix}{i}" for i in range(1, width + 1)]]

    return [header, *trajectory.to_rows()]

def task_simulate(system: SystemDef, parameters: dict[str, Any], progress: Progress) -> tuple[dict[str, Any], int, list[list[Any]] | None]:
    """
    Integrate a system and report the requested quantity.
    """

    sim_task: str = parameters.get("task", "state")
    if sim_task not in SIMULATE_TASKS:
        raise ProblemFileError(f"simulate task must be one of {', '.join(SIMULATE_TASKS)}", "task")

    step: float = _step(system, parameters)
    result: dict[str, Any] = {"simulation": sim_task, "step": step}

    if sim_task == "state":
        trajectory: Trajectory = integrate(system, _x0(system, parameters), _t_span(system, parameters), step, progress)
        result.update({"points": len(trajectory), "final_state": trajectory.final.tolist()})
        return result, EXIT_OK, _trajectory_rows(trajectory, "x")

    if sim_task == "transition":
        trajectory = transition_matrix(system, _t_span(system, parameters), step, progress)
        result.update({"points": len(trajectory), "final_matrix": trajectory.final.tolist()})
        return result, EXIT_OK, _trajectory_rows(trajectory, "phi")

    if sim_task == "volume":
        k: int = int(_order(parameters, allow_alpha = False))
        trajectory = volume_trace(system, k, _t_span(system, parameters), step, progress = progress)
        result.update({"k": k, "points": len(trajectory), "final_volume": float(trajectory.final)})
        return result, EXIT_OK, _trajectory_rows(trajectory, "volume")

    if sim_task == "compound-residual":
        k = int(_order(parameters, allow_alpha = False))
        result.update({"k": k, "residual": compound_transition_residual(system, k, _t_span(system, parameters), step, progress)})
        return result, EXIT_OK, None

    if sim_task == "equilibrium":
        span: tuple[float, float] = _t_span(system, parameters, Configuration.EQUILIBRIUM_HORIZON)
        converged, residual = converges_to_equilibrium(system, _x0(system, parameters), span[1], step, progress = progress)
        result.update({"converged": converged, "residual": residual, "horizon": span[1]})
        return result, EXIT_OK if converged else EXIT_NOT_CERTIFIED, None

    span = _t_span(system, parameters, Configuration.OPEN_LOOP_HORIZON)
    result.update(attractor_summary(system, _x0(system, parameters), span[1], step, progress = progress))
    return result, EXIT_OK, None

def task_trace(system: SystemDef, parameters: dict[str, Any], progress: Progress) -> tuple[dict[str, Any], int, list[list[Any]] | None]:
    """
    Record s- and s+ along a solution.
    """

    trace: list[tuple[float, int, int]] = sign_variation_trace(system, _x0(system, parameters), _t_span(system, parameters), _step(system, parameters), progress = progress)
    minus: list[int] = [value for _, value, _ in trace]

    result: dict[str, Any] = {
        "points": len(trace),
        "initial_s_minus": minus[0],
        "max_s_minus": max(minus),
        "max_s_plus": max(plus for _, _, plus in trace),
        "s_minus_non_increasing": all(b <= a for a, b in zip(minus, minus[1:]))
    }

    return result, EXIT_OK, [["t", "s_minus", "s_plus"], *[[t, a, b] for t, a, b in trace]]

def _float_text(value: float) -> str:
    """
    A float as JSON text with 17 significant digits; integral values keep a trailing '.0'.
    """

    if not math.isfinite(value):
        return "NaN" if value != value else ("Infinity" if value > 0 else "-Infinity")

    text: str = format(value, ".17g")
    return text if "." in text or "e" in text else text + ".0"

class ReportEncoder(json.JSONEncoder):
    """
    JSON encoder for reports: numpy scalars and arrays become plain JSON, floats carry 17 significant digits.
    """

    def default(self, o: Any) -> Any:
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        return super().default(o)

    def iterencode(self, o: Any, _one_shot: bool = False) -> Any:
        # The pure-Python encoder is the one that accepts a float formatter
        encode = json.encoder._make_iterencode(
            {} if self.check_circular else None, self.default,
            json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring,
            self.indent, _float_text, self.key_separator, self.item_separator,
            self.sort_keys, self.skipkeys, _one_shot
        )
        return encode(o, 0)

def dump_report(report: dict[str, Any]) -> str:
    """
    Serialize a report: sorted keys, two-space indent, 17 significant digits, trailing newline.
    """

    return json.dumps(report, cls = ReportEncoder, sort_keys = True, indent = 2) + "\n"

def _write_csv(rows: list[list[Any]], path: str) -> None:
    """
    Write CSV rows (LF line endings, '.' decimal, 17 significant digits) to a file.
    """

    buffer: io.StringIO = io.StringIO()
    writer = csv.writer(buffer, lineterminator = "\n")
    writer.writerows([[_float_text(value) if isinstance(value, float) else value for value in row] for row in rows])

    Path(path).parent.mkdir(parents = True, exist_ok = True)
    Path(path).write_text(buffer.getvalue(), encoding = "utf-8", newline = "")

def _forward_progress(data: _ProgressData) -> None:
    """
    Progress listener that hands updates to the debugger.
    """

    fraction: str = f" ({data.progress:.0%})" if data.progress is not None else ""
    show_debug(f"[{data.elapsed:8.3f}s] {data.status}: {data.message}{fraction}", importance = 'LOW' if data.status == 'INTEGRATING' else 'MEDIUM')

def _describe(exc: Exception) -> str:
    """
    The one-line diagnostic of an error, with field, line, position or last good time when known.
    """

    extras: list[str] = []
    for name in ("field", "line", "row", "column", "position", "last_good_time", "time"):
        value: Any = getattr(exc, name, None)
        if value is not None:
            extras.append(f"{name}={value}")

    return f"error: {exc}" + (f" [{', '.join(extras)}]" if extras else "")

def run(argv: list[str] | None = None) -> int:
    """
    Run the command line.

    Args:
        argv (list[str] | None) = None: The arguments (sys.argv[1:] when None).

    Returns:
        int: The exit code.
    """

    # argparse exits with 2 on usage errors, which is reserved for Refuted / Inconclusive here
    try:
        args: argparse.Namespace = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR

    if args.debug:
        DebuggerConfiguration.DEBUGGING = True

    progress: Progress = Progress()
    progress.add_progress_listener(_forward_progress)
    started: float = time.perf_counter()

    try:
        if args.command == "selftest":
            results: list[dict[str, Any]] = run_selftest(progress)
            passed: bool = all(result["passed"] for result in results)
            output: dict[str, Any] = {"task": "selftest", "passed": passed, "results": results}
            code: int = EXIT_OK if passed else EXIT_NOT_CERTIFIED
            rows: list[list[Any]] | None = None
        else:
            problem: dict[str, Any] = resolve_problem(args)
            system: SystemDef = build_system(problem["system"])
            parameters: dict[str, Any] = problem["parameters"]
            show_debug(f"Resolved {system} for task '{args.command}' with parameters {parameters}")

            if args.command == "compound":
                body, code, rows = task_compound(system, parameters)
            elif args.command == "measure":
                body, code, rows = task_measure(system, parameters)
            elif args.command == "certify":
                body, code, rows = task_certify(system, parameters, progress)
            elif args.command == "simulate":
                body, code, rows = task_simulate(system, parameters, progress)
            else:
                body, code, rows = task_trace(system, parameters, progress)

            output = {"task": args.command, "input_digest": input_digest(problem), **body}

    except (DomainError, ExpressionParseError, ProblemFileError, IntegrationBlowupError, SignVariationError, OSError, ValueError, KeyError) as exc:
        print(_describe(exc), file = sys.stderr)
        return EXIT_ERROR

    if args.timing:
        output["timing_ms"] = round((time.perf_counter() - started) * 1000.0, 3)

    # Time series are only written where --csv points; the report always goes out
    try:
        if rows is not None and args.csv is not None:
            _write_csv(rows, args.csv)
            output["csv"] = args.csv

        text: str = dump_report(output)
        if args.out is not None:
            Path(args.out).parent.mkdir(parents = True, exist_ok = True)
            Path(args.out).write_text(text, encoding = "utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(_describe(exc), file = sys.stderr)
        return EXIT_ERROR

    return code

def main() -> None:
    """
    Console entry point.
    """
    sys.exit(run())
