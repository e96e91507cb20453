"""
CompoundCert.Dynamics
~~~~~~~~~~~~

This module implements the fixed-step Runge-Kutta integrator and everything built on it:
transition matrices, the compound transition identity, k-volumes, variational matrices,
sign-variation traces and the equilibrium / attractor checks of the Thomas benchmark.
"""

# Import the required modules
import itertools
import numpy as np
from typing import Any, Callable
from CompoundCert.Compound import add_compound, mult_compound
from CompoundCert.Configuration import Configuration
from CompoundCert.DomainCheck import DomainCheck, DomainError
from CompoundCert.SignVariation import s_minus, s_plus
from CompoundCert.Systems import SystemDef, SystemKind, Trajectory
from CompoundCert.Progress import Progress, ProgressStatusSelector as pss, report
from CompoundCert.Debugger import show_debug

# Exception Classes
class IntegrationBlowupError(Exception):
    """
    An exception for integrations that produce a non-finite state.
    """

    def __init__(self, message: str, last_good_time: float) -> None:
        """
        Initialize the IntegrationBlowupError object.

        Args:
            message (str): The error message.
            last_good_time (float): The last time with a finite state.
        """

        self.message: str = message
        self.last_good_time: float = last_good_time
        super().__init__(self.message)

class SignVariationError(Exception):
    """
    An exception for a sign-variation trace that breaks the monotonicity it was asked to enforce.
    """

    def __init__(self, message: str, time: float) -> None:
        """
        Initialize the SignVariationError object.

        Args:
            message (str): The error message.
            time (float): The time of the violation.
        """

        self.message: str = message
        self.time: float = time
        super().__init__(self.message)

def time_grid(t_span: tuple[float, float], step: float) -> np.ndarray:
    """
    Build the integrator times t0 + i*step, plus the endpoint when it is not on the grid.

    Args:
        t_span (tuple[float, float]): The interval (t0, t1) with t1 >= t0.
        step (float): The step, > 0.

    Returns:
        np.ndarray: The strictly increasing times.
    """

    t0, t1 = float(t_span[0]), float(t_span[1])
    step = float(step)

    DomainCheck.check_positive(step, "step")
    if not (np.isfinite(t0) and np.isfinite(t1)) or t1 < t0:
        raise DomainError(f"t_span=({t0}, {t1}) must be finite with t1 >= t0")

    count: int = int(np.floor((t1 - t0) / step + 1e-9))
    times: np.ndarray = t0 + step * np.arange(count + 1)

    # Append the endpoint unless the grid already reaches it
    if t1 - times[-1] > 1e-9 * max(1.0, abs(t1), step):
        times = np.append(times, t1)
    elif count > 0:
        times[-1] = t1

    return times

def rk4_march(rhs: Callable[[float, np.ndarray], np.ndarray], y0: np.ndarray, times: np.ndarray, progress: Progress = None, label: str = "state") -> np.ndarray:
    """
    March y' = rhs(t, y) over the given times with the classical fourth-order Runge-Kutta scheme.

    Args:
        rhs (Callable[[float, np.ndarray], np.ndarray]): The right-hand side.
        y0 (np.ndarray): The initial value (any shape).
        times (np.ndarray): The strictly increasing times, times[0] being the initial time.
        progress (Progress) = None: Receives INTEGRATING updates every tenth of the run.
        label (str) = "state": Used in messages.

    Returns:
        np.ndarray: The values at every time, stacked along the first axis.
    """

    values: np.ndarray = np.empty((times.size, *y0.shape))
    values[0] = y0
    y: np.ndarray = y0.astype(float)
    every: int = max(1, (times.size - 1) // 10)

    for i in range(times.size - 1):
        t: float = float(times[i])
        h: float = float(times[i + 1] - times[i])

        k1: np.ndarray = rhs(t, y)
        k2: np.ndarray = rhs(t + h / 2, y + h / 2 * k1)
        k3: np.ndarray = rhs(t + h / 2, y + h / 2 * k2)
        k4: np.ndarray = rhs(t + h, y + h * k3)
        y_next: np.ndarray = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

        # Stop at the first non-finite value
        if not np.all(np.isfinite(y_next)):
            show_debug(f"Integration of the {label} blew up after t={t}", type = 'ERROR')
            raise IntegrationBlowupError(f"integration of the {label} blew up: non-finite value after t={t}", t)

        y = y_next
        values[i + 1] = y

        if (i + 1) % every == 0:
            report(progress, pss.INTEGRATING, f"Integrated the {label} to t={times[i + 1]:.6g}", None, (i + 1) / (times.size - 1))

    return values

def integrate(system: SystemDef, x0: Any, t_span: tuple[float, float], step: float = None, progress: Progress = None) -> Trajectory:
    """
    Integrate a system from x0 with classical fixed-step RK4.

    Args:
        system (SystemDef): The system.
        x0 (Any): The initial state of dimension n.
        t_span (tuple[float, float]): The interval (t0, t1).
        step (float) = None: The step. Defaults to Configuration.DEFAULT_STEP.
        progress (Progress) = None: Receives INTEGRATING / INTEGRATED updates.

    Returns:
        Trajectory: The states at t0 + i*step plus the endpoint.
    """

    step = Configuration.DEFAULT_STEP if step is None else step
    x0 = DomainCheck.as_vector(x0, "x0")

    if x0.size != system.dimension:
        raise DomainError(f"x0 has dimension {x0.size}, the system has dimension {system.dimension}")

    times: np.ndarray = time_grid(t_span, step)
    show_debug(f"Integrating '{system.name}' over [{times[0]}, {times[-1]}] with {times.size - 1} steps", importance = 'LOW')

    states: np.ndarray = rk4_march(system.rhs, x0, times, progress, "state")
    report(progress, pss.INTEGRATED, f"Integrated '{system.name}'", None, 1.0)

    return Trajectory(times, states, {"integrator": "rk4", "step": float(step), "system": system.name})

def transition_matrix(system: SystemDef, t_span: tuple[float, float], step: float = None, progress: Progress = None) -> Trajectory:
    """
    Integrate Phi' = A(t) Phi, Phi(t0) = I for an LTV system.

    Args:
        system (SystemDef): The LTV system.
        t_span (tuple[float, float]): The interval (t0, t1).
        step (float) = None: The step. Defaults to Configuration.DEFAULT_STEP.
        progress (Progress) = None: Receives INTEGRATING / INTEGRATED updates.

    Returns:
        Trajectory: The n x n transition matrices Phi(t, t0).
    """

    if not system.is_ltv:
        raise DomainError(f"transition_matrix needs an LTV system, '{system.name}' is {system.kind}")

    step = Configuration.DEFAULT_STEP if step is None else step
    times: np.ndarray = time_grid(t_span, step)

    # All columns evolve under the same integrator
    states: np.ndarray = rk4_march(system.rhs, np.eye(system.dimension), times, progress, "transition matrix")
    report(progress, pss.INTEGRATED, f"Integrated the transition matrix of '{system.name}'", None, 1.0)

    return Trajectory(times, states, {"integrator": "rk4", "step": float(step), "system": system.name, "quantity": "transition"})

def compound_transition_residual(system: SystemDef, k: int, t_span: tuple[float, float], step: float = None, progress: Progress = None) -> float:
    """
    Check the compound transition identity d/dt Phi^(k) = A^[k](t) Phi^(k).

    Integrates the compound ODE from the identity and separately forms mult_compound(Phi(t), k);
    the identity is exact, so the returned deviation only measures integrator error.

    Args:
        system (SystemDef): The LTV system.
        k (int): The order, 1 <= k <= n.
        t_span (tuple[float, float]): The interval (t0, t1).
        step (float) = None: The step. Defaults to Configuration.DEFAULT_STEP.
        progress (Progress) = None: Receives progress updates.

    Returns:
        float: The largest absolute entrywise deviation over the stored times.
    """

    DomainCheck.check_order(k, 1, system.dimension)
    step = Configuration.DEFAULT_STEP if step is None else step

    phi: Trajectory = transition_matrix(system, t_span, step, progress)

    # A^[k] only needs computing once for constant systems
    if system.constant:
        generator: np.ndarray = add_compound(system.matrix_at(float(t_span[0])), k).matrix
        compound_rhs: Callable[[float, np.ndarray], np.ndarray] = lambda t, y: generator @ y
    else:
        compound_rhs = lambda t, y: add_compound(system.matrix_at(t), k).matrix @ y

    size: int = mult_compound(np.eye(system.dimension), k).shape[0]
    compound: np.ndarray = rk4_march(compound_rhs, np.eye(size), phi.times, progress, "compound transition matrix")

    residual: float = 0.0
    for index in range(len(phi)):
        deviation: float = float(np.max(np.abs(compound[index] - mult_compound(phi.states[index], k).matrix)))
        residual = max(residual, deviation)

    show_debug(f"Compound transition residual for k={k}: {residual:.3e}")
    return residual

def k_volume(vectors: Any) -> float:
    """
    Compute the k-volume sqrt(det(G^T G)) of the parallelotope spanned by k vectors (the columns of G).

    Args:
        vectors (Any): The k vectors of common dimension n, one per row.

    Returns:
        float: The volume; 0 for more vectors than dimensions, rounding-level for dependent ones.
    """

    G: np.ndarray = DomainCheck.as_matrix(vectors, "vectors").T
    n, k = G.shape

    if k > n:
        return 0.0

    # The volume is the product of the singular values of G
    return float(np.prod(np.linalg.svd(G, compute_uv = False)))

def volume_trace(system: SystemDef, k: int, t_span: tuple[float, float], step: float = None, vectors: Any = None, progress: Progress = None) -> Trajectory:
    """
    Track the k-volume of a parallelotope carried by the flow of an LTV system.

    Args:
        system (SystemDef): The LTV system.
        k (int): The number of spanning vectors, 1 <= k <= n.
        t_span (tuple[float, float]): The interval (t0, t1).
        step (float) = None: The step. Defaults to Configuration.DEFAULT_STEP.
        vectors (Any) = None: The k initial vectors, one per row. Defaults to e^1, ..., e^k.
        progress (Progress) = None: Receives progress updates.

    Returns:
        Trajectory: The volumes over time.
    """

    DomainCheck.check_order(k, 1, system.dimension)

    if vectors is None:
        initial: np.ndarray = np.eye(system.dimension)[:k]
    else:
        initial = DomainCheck.as_matrix(vectors, "vectors")
        if initial.shape != (k, system.dimension):
            raise DomainError(f"expected {k} vectors of dimension {system.dimension}, got shape {initial.shape}")

    phi: Trajectory = transition_matrix(system, t_span, step, progress)
    volumes: np.ndarray = np.array([k_volume((state @ initial.T).T) for state in phi.states])

    return Trajectory(phi.times, volumes, {**phi.meta, "quantity": "volume", "k": k})

def variational_matrix(system: SystemDef, a: Any, b: Any, t: float, quad_nodes: int = None, step: float = None, t0: float = 0.0) -> np.ndarray:
    """
    Compute A^ab(t) = int_0^1 J(t, s x(t,a) + (1-s) x(t,b)) ds by Gauss-Legendre quadrature.

    Args:
        system (SystemDef): The system.
        a (Any): The first initial condition (at time t0).
        b (Any): The second initial condition (at time t0).
        t (float): The time, t >= t0.
        quad_nodes (int) = None: The number of nodes, >= 2. Defaults to Configuration.DEFAULT_QUAD_NODES.
        step (float) = None: The integrator step. Defaults to Configuration.DEFAULT_STEP.
        t0 (float) = 0.0: The initial time.

    Returns:
        np.ndarray: The n x n variational matrix.
    """

    quad_nodes = Configuration.DEFAULT_QUAD_NODES if quad_nodes is None else quad_nodes
    DomainCheck.check_order(quad_nodes, 2, 64, "quad_nodes")

    xa: np.ndarray = integrate(system, a, (t0, t), step).final
    xb: np.ndarray = integrate(system, b, (t0, t), step).final

    return segment_jacobian(system, t, xa, xb, quad_nodes)

def segment_jacobian(system: SystemDef, t: float, xa: np.ndarray, xb: np.ndarray, quad_nodes: int = None) -> np.ndarray:
    """
    Average the Jacobian over the segment from xb to xa by Gauss-Legendre quadrature on [0, 1].

    Args:
        system (SystemDef): The system.
        t (float): The time.
        xa (np.ndarray): The endpoint at s = 1.
        xb (np.ndarray): The endpoint at s = 0.
        quad_nodes (int) = None: The number of nodes. Defaults to Configuration.DEFAULT_QUAD_NODES.

    Returns:
        np.ndarray: The averaged Jacobian.
    """

    quad_nodes = Configuration.DEFAULT_QUAD_NODES if quad_nodes is None else quad_nodes

    # Map the nodes from [-1, 1] to [0, 1]
    nodes, weights = np.polynomial.legendre.leggauss(quad_nodes)
    nodes = (nodes + 1.0) / 2.0
    weights = weights / 2.0

    average: np.ndarray = np.zeros((system.dimension, system.dimension))
    for s, weight in zip(nodes, weights):
        average += weight * system.jacobian_at(t, s * xa + (1.0 - s) * xb)

    return average

def variational_system(system: SystemDef, a: Any, b: Any, t_span: tuple[float, float], step: float = None, quad_nodes: int = None) -> SystemDef:
    """
    Build the LTV z' = A^ab(t) z satisfied by z(t) = x(t,a) - x(t,b).

    Both trajectories are stored on a half-step grid so that every RK4 stage time of a run with
    the same step lands on a stored point.

    Args:
        system (SystemDef): The nonlinear system.
        a (Any): The first initial condition.
        b (Any): The second initial condition.
        t_span (tuple[float, float]): The interval (t0, t1).
        step (float) = None: The step of the later LTV integration. Defaults to Configuration.DEFAULT_STEP.
        quad_nodes (int) = None: The number of quadrature nodes.

    Returns:
        SystemDef: The variational LTV system.
    """

    step = Configuration.DEFAULT_STEP if step is None else step
    half: float = float(step) / 2.0

    trajectory_a: Trajectory = integrate(system, a, t_span, half)
    trajectory_b: Trajectory = integrate(system, b, t_span, half)
    times: np.ndarray = trajectory_a.times

    def matrix(t: float) -> np.ndarray:
        # Linear interpolation between stored states (exact hit on grid points)
        xa: np.ndarray = np.array([np.interp(t, times, trajectory_a.states[:, i]) for i in range(system.dimension)])
        xb: np.ndarray = np.array([np.interp(t, times, trajectory_b.states[:, i]) for i in range(system.dimension)])
        return segment_jacobian(system, t, xa, xb, quad_nodes)

    return SystemDef(SystemKind.LTV, system.dimension, f"variational-{system.name}", matrix = matrix, parameters = {"step": float(step)})

def sign_variation_trace(system: SystemDef, x0: Any, t_span: tuple[float, float], step: float = None, tol: float = None, enforce_monotone: bool = False, progress: Progress = None) -> list[tuple[float, int, int]]:
    """
    Integrate a system and record s-(x(t)) and s+(x(t)) at every stored step.

    Args:
        system (SystemDef): The system.
        x0 (Any): The initial state.
        t_span (tuple[float, float]): The interval (t0, t1).
        step (float) = None: The step. Defaults to Configuration.DEFAULT_STEP.
        tol (float) = None: The zero tolerance for the counts (see SignVariation.sign_vector).
        enforce_monotone (bool) = False: Raise SignVariationError unless s- is non-increasing and
            s+(x(t)) <= s-(x0) for t > t0, the behaviour of totally positive flows.
        progress (Progress) = None: Receives progress updates.

    Returns:
        list[tuple[float, int, int]]: The (t, s-, s+) triples.
    """

    trajectory: Trajectory = integrate(system, x0, t_span, step, progress)
    trace: list[tuple[float, int, int]] = [(t, s_minus(x, tol), s_plus(x, tol)) for t, x in trajectory]

    if enforce_monotone:
        initial: int = trace[0][1]
        for (_, previous, _), (t, minus, plus) in zip(trace, trace[1:]):
            if minus > previous:
                raise SignVariationError(f"s- increased from {previous} to {minus} at t={t}", t)
            if plus > initial:
                raise SignVariationError(f"s+ = {plus} exceeds s-(x0) = {initial} at t={t}", t)

    return trace

def box_grid(lower: Any, upper: Any, points: int = None) -> np.ndarray:
    """
    Build a uniform grid over a box.

    Args:
        lower (Any): The lower corner.
        upper (Any): The upper corner.
        points (int) = None: Points per axis, >= 1. Defaults to Configuration.DEFAULT_GRID_POINTS.

    Returns:
        np.ndarray: The grid points, one per row (points^n rows).
    """

    points = Configuration.DEFAULT_GRID_POINTS if points is None else points
    DomainCheck.check_order(points, 1, 10 ** 6, "points")

    lower = DomainCheck.as_vector(lower, "lower")
    upper = DomainCheck.as_vector(upper, "upper")

    if lower.size != upper.size or np.any(lower > upper):
        raise DomainError("box corners must have equal length and lower <= upper")

    axes: list[np.ndarray] = [np.linspace(lo, hi, points) for lo, hi in zip(lower, upper)]
    return np.array(list(itertools.product(*axes)))

def state_space_grid(system: SystemDef, points: int = None) -> np.ndarray:
    """
    Returns box_grid over the box state space of a system.
    """

    if system.state_space is None:
        raise DomainError(f"'{system.name}' has no state space box to grid")

    return box_grid(system.state_space[0], system.state_space[1], points)

def converges_to_equilibrium(system: SystemDef, x0: Any, horizon: float = None, step: float = None, tol: float = None, progress: Progress = None) -> tuple[bool, float]:
    """
    Integrate to a horizon and test whether the final state is an equilibrium, ||f(x(T))||_inf <= tol.

    Args:
        system (SystemDef): The system.
        x0 (Any): The initial state.
        horizon (float) = None: The final time T. Defaults to Configuration.EQUILIBRIUM_HORIZON.
        step (float) = None: The step. Defaults to Configuration.THOMAS_STEP.
        tol (float) = None: The residual threshold. Defaults to Configuration.EQUILIBRIUM_TOL.
        progress (Progress) = None: Receives progress updates.

    Returns:
        tuple[bool, float]: The verdict and the residual ||f(x(T))||_inf.
    """

    horizon = Configuration.EQUILIBRIUM_HORIZON if horizon is None else horizon
    step = Configuration.THOMAS_STEP if step is None else step
    tol = Configuration.EQUILIBRIUM_TOL if tol is None else tol

    trajectory: Trajectory = integrate(system, x0, (0.0, horizon), step, progress)
    residual: float = float(np.max(np.abs(system.rhs(horizon, trajectory.final))))

    return residual <= tol, residual

def attractor_summary(system: SystemDef, x0: Any, horizon: float = None, step: float = None, tail_fraction: float = 0.1, progress: Progress = None) -> dict[str, Any]:
    """
    Summarise a long run: boundedness relative to the state-space scale and non-convergence of the tail.

    Only boundedness and non-convergence are reported; the summary makes no claim about chaos.

    Args:
        system (SystemDef): The system.
        x0 (Any): The initial state.
        horizon (float) = None: The final time. Defaults to Configuration.OPEN_LOOP_HORIZON.
        step (float) = None: The step. Defaults to Configuration.THOMAS_STEP.
        tail_fraction (float) = 0.1: The final fraction of the run used for the tail statistics.
        progress (Progress) = None: Receives progress updates.

    Returns:
        dict[str, Any]: bounded, converged, max_abs_state, scale, tail speed range and tail spread.
    """

    horizon = Configuration.OPEN_LOOP_HORIZON if horizon is None else horizon
    step = Configuration.THOMAS_STEP if step is None else step

    trajectory: Trajectory = integrate(system, x0, (0.0, horizon), step, progress)

    # The scale of the state space box, or infinity when the system has none
    scale: float = float(np.max(np.abs(np.concatenate(system.state_space)))) if system.state_space is not None else float("inf")
    max_abs_state: float = float(np.max(np.abs(trajectory.states)))

    tail: np.ndarray = trajectory.states[int(len(trajectory) * (1.0 - tail_fraction)):]
    tail_times: np.ndarray = trajectory.times[-tail.shape[0]:]
    speeds: np.ndarray = np.array([np.max(np.abs(system.rhs(t, x))) for t, x in zip(tail_times, tail)])

    return {
        "bounded": bool(max_abs_state <= scale),
        "converged": bool(speeds[-1] <= Configuration.EQUILIBRIUM_TOL),
        "max_abs_state": max_abs_state,
        "scale": scale,
        "tail_min_speed": float(np.min(speeds)),
        "tail_max_speed": float(np.max(speeds)),
        "tail_spread": float(np.max(np.ptp(tail, axis = 0))),
        "horizon": float(horizon),
        "step": float(step)
    }
