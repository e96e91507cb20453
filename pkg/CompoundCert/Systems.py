"""
CompoundCert.Systems
~~~~~~~~~~~~

This module implements the system definitions (linear time-varying and nonlinear), the Trajectory
container produced by the integrator, and the named example systems: the shrinking-squares LTV,
the 2-positive LTI, the Thomas attractor with its partial-state controller, the monotone cyclic
feedback system and Jacobi LTI systems.
"""

# Import the required modules
import numpy as np
from typing import Any, Callable, TypeAlias, Literal, Iterator
from CompoundCert.DomainCheck import DomainCheck, DomainError

# Type Alias
_SystemKind: TypeAlias = Literal['LTV', 'Nonlinear']

class SystemKind:
    """
    A class selecting the kind of a dynamical system.
    """

    # Constants
    LTV: _SystemKind = 'LTV'
    NONLINEAR: _SystemKind = 'Nonlinear'

# SystemDef Class
class SystemDef:
    """
    A class for a dynamical system x' = A(t) x (LTV) or x' = f(t, x) with Jacobian J(t, x) (Nonlinear).
    """

    def __init__(self, kind: _SystemKind, dimension: int, name: str = "system", matrix: Callable[[float], np.ndarray] = None, field: Callable[[float, np.ndarray], np.ndarray] = None, jacobian: Callable[[float, np.ndarray], np.ndarray] = None, state_space: tuple[np.ndarray, np.ndarray] = None, constant: bool = False, parameters: dict[str, Any] = None) -> None:
        """
        Initialize the SystemDef object.

        Args:
            kind (_SystemKind): 'LTV' or 'Nonlinear'.
            dimension (int): The state dimension n.
            name (str) = "system": A short name used in reports.
            matrix (Callable[[float], np.ndarray]) = None: t -> A(t), required for LTV systems.
            field (Callable[[float, np.ndarray], np.ndarray]) = None: (t, x) -> f(t, x), required for nonlinear systems.
            jacobian (Callable[[float, np.ndarray], np.ndarray]) = None: (t, x) -> J(t, x), required for nonlinear systems.
            state_space (tuple[np.ndarray, np.ndarray]) = None: The (lower, upper) corners of a box state space.
            constant (bool) = False: Whether A(t) does not depend on t (lets compound dynamics cache A^[k]).
            parameters (dict[str, Any]) = None: The parameters the system was built with.

        Returns:
            None
        """

        self.kind: _SystemKind = kind
        self.dimension: int = int(dimension)
        self.name: str = name
        self.constant: bool = constant
        self.parameters: dict[str, Any] = parameters if parameters else {}
        self.__matrix: Callable[[float], np.ndarray] = matrix
        self.__field: Callable[[float, np.ndarray], np.ndarray] = field
        self.__jacobian: Callable[[float, np.ndarray], np.ndarray] = jacobian
        self.state_space: tuple[np.ndarray, np.ndarray] | None = None

        if self.dimension < 1:
            raise DomainError(f"system dimension must be positive, got {dimension}")

        # Each kind needs its own callbacks
        if kind == SystemKind.LTV:
            if matrix is None:
                raise DomainError("an LTV system needs a matrix callback t -> A(t)")
        elif kind == SystemKind.NONLINEAR:
            if field is None or jacobian is None:
                raise DomainError("a nonlinear system needs both a vector field and its Jacobian")
        else:
            raise DomainError(f"unknown system kind {kind!r}")

        # Box state space
        if state_space is not None:
            lower: np.ndarray = np.broadcast_to(np.asarray(state_space[0], dtype = float), (self.dimension,)).copy()
            upper: np.ndarray = np.broadcast_to(np.asarray(state_space[1], dtype = float), (self.dimension,)).copy()

            if np.any(lower > upper):
                raise DomainError("state space box has lower > upper")

            self.state_space = (lower, upper)

        # The Jacobian must be n x n; check once at the origin
        sample: np.ndarray = self.jacobian_at(0.0, np.zeros(self.dimension))
        if sample.shape != (self.dimension, self.dimension):
            raise DomainError(f"Jacobian has shape {sample.shape}, expected ({self.dimension}, {self.dimension})")

    def __str__(self) -> str:
        return f"SystemDef(kind='{self.kind}', name='{self.name}', dimension={self.dimension}, parameters={self.parameters})"

    def __repr__(self) -> str:
        return self.__str__()

    @property
    def is_ltv(self) -> bool:
        """
        Returns True for an LTV system.
        """
        return self.kind == SystemKind.LTV

    def matrix_at(self, t: float) -> np.ndarray:
        """
        Evaluate A(t) of an LTV system.

        Args:
            t (float): The time.

        Returns:
            np.ndarray: The n x n system matrix.
        """

        if not self.is_ltv:
            raise DomainError(f"'{self.name}' is not an LTV system")

        return np.asarray(self.__matrix(t), dtype = float)

    def rhs(self, t: float, x: np.ndarray) -> np.ndarray:
        """
        Evaluate the right-hand side at (t, x).

        Args:
            t (float): The time.
            x (np.ndarray): The state (a vector, or an n x m matrix of stacked states for LTV systems).

        Returns:
            np.ndarray: The time derivative.
        """

        if self.is_ltv:
            return self.matrix_at(t) @ x

        return np.asarray(self.__field(t, x), dtype = float)

    def jacobian_at(self, t: float, x: np.ndarray) -> np.ndarray:
        """
        Evaluate the Jacobian at (t, x); for LTV systems this is A(t).

        Args:
            t (float): The time.
            x (np.ndarray): The state.

        Returns:
            np.ndarray: The n x n Jacobian.
        """

        if self.is_ltv:
            return self.matrix_at(t)

        return np.asarray(self.__jacobian(t, x), dtype = float)

    def to_dict(self) -> dict[str, Any]:
        """
        Returns a JSON-ready description of the system.
        """

        description: dict[str, Any] = {
            "kind": self.kind,
            "name": self.name,
            "dimension": self.dimension,
            "parameters": self.parameters
        }

        if self.state_space is not None:
            description["state_space"] = {"lower": self.state_space[0].tolist(), "upper": self.state_space[1].tolist()}

        return description

# Trajectory Class
class Trajectory:
    """
    A class for a time-stamped sequence of states (vectors, matrices or scalars).
    """

    def __init__(self, times: Any, states: Any, meta: dict[str, Any] = None) -> None:
        """
        Initialize the Trajectory object.

        Args:
            times (Any): Strictly increasing times.
            states (Any): The states, stacked along the first axis.
            meta (dict[str, Any]) = None: Integrator name, step size and similar details.

        Returns:
            None
        """

        self.times: np.ndarray = np.asarray(times, dtype = float)
        self.states: np.ndarray = np.asarray(states, dtype = float)
        self.meta: dict[str, Any] = meta if meta else {}

        # Validate the trajectory
        if self.times.ndim != 1 or self.times.size == 0:
            raise DomainError("a trajectory needs a non-empty 1-D array of times")

        if self.states.shape[0] != self.times.size:
            raise DomainError(f"{self.states.shape[0]} states for {self.times.size} times")

        if np.any(np.diff(self.times) <= 0):
            raise DomainError("trajectory times must be strictly increasing")

        if not np.all(np.isfinite(self.states)):
            raise DomainError("trajectory contains non-finite states")

    def __str__(self) -> str:
        return f"Trajectory(points={len(self)}, t=[{self.times[0]}, {self.times[-1]}], state_shape={self.states.shape[1:]}, meta={self.meta})"

    def __repr__(self) -> str:
        return self.__str__()

    def __len__(self) -> int:
        return self.times.size

    def __getitem__(self, index: int) -> tuple[float, np.ndarray]:
        return float(self.times[index]), self.states[index]

    def __iter__(self) -> Iterator[tuple[float, np.ndarray]]:
        for index in range(len(self)):
            yield self[index]

    @property
    def final(self) -> np.ndarray:
        """
        Returns the last state.
        """
        return self.states[-1]

    def at(self, t: float) -> np.ndarray:
        """
        Returns the stored state closest in time to t.
        """
        return self.states[int(np.argmin(np.abs(self.times - t)))]

    def to_rows(self) -> list[list[float]]:
        """
        Returns the trajectory as CSV rows: t followed by the flattened state.
        """
        flat: np.ndarray = self.states.reshape(len(self), -1)
        return [[float(t), *row.tolist()] for t, row in zip(self.times, flat)]

def constant_matrix(A: Any) -> Callable[[float], np.ndarray]:
    """
    Wrap a fixed matrix as a t -> A callback.
    """

    A = DomainCheck.as_matrix(A)
    return lambda t: A

def ltv_system(A: Any, name: str = "ltv", parameters: dict[str, Any] = None) -> SystemDef:
    """
    Build an LTV system from a matrix (LTI) or a t -> A(t) callback.

    Args:
        A (Any): The constant matrix or a callable t -> A(t).
        name (str) = "ltv": A short name used in reports.
        parameters (dict[str, Any]) = None: Parameters recorded in reports.

    Returns:
        SystemDef: The LTV system.
    """

    if callable(A):
        initial: np.ndarray = DomainCheck.as_matrix(A(0.0))
        DomainCheck.check_square(initial)
        return SystemDef(SystemKind.LTV, initial.shape[0], name, matrix = A, parameters = parameters)

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    return SystemDef(SystemKind.LTV, A.shape[0], name, matrix = constant_matrix(A), constant = True, parameters = parameters)

# Shrinking-squares LTV
def example5_matrix(t: float) -> np.ndarray:
    """
    A(t) = [[-1, 0], [-2 cos t, 0]], a 2-contracting LTV whose unit square shrinks to a segment.
    """
    return np.array([[-1.0, 0.0], [-2.0 * np.cos(t), 0.0]])

def example5_transition(t: float) -> np.ndarray:
    """
    The closed-form transition matrix Phi(t, 0) of example5_matrix.

    Args:
        t (float): The time.

    Returns:
        np.ndarray: [[e^-t, 0], [-1 + e^-t (cos t - sin t), 1]].
    """

    decay: float = float(np.exp(-t))
    return np.array([[decay, 0.0], [-1.0 + decay * (np.cos(t) - np.sin(t)), 1.0]])

def example5_system() -> SystemDef:
    """
    Returns the shrinking-squares LTV system.
    """
    return SystemDef(SystemKind.LTV, 2, "example5", matrix = example5_matrix)

# 2-positive LTI
EXAMPLE8_MATRIX: np.ndarray = np.array([
    [-1.0, 1.0, -2.0],
    [0.0, 1.0, 0.1],
    [-3.0, 0.0, 1.0]
])

def example8_system() -> SystemDef:
    """
    Returns the LTI system whose matrix is not Metzler but has a Metzler, irreducible A^[2].
    """
    return ltv_system(EXAMPLE8_MATRIX, "example8")

# Thomas attractor
def thomas_system(b: float, c: float = 0.0) -> SystemDef:
    """
    Build the Thomas cyclically symmetric system, optionally with the partial-state controller.

    x1' = sin x2 - b x1 + c x1, x2' = sin x3 - b x2 + c x2, x3' = sin x1 - b x3.
    c = 0 is the open loop; c < 0 applies g(x) = c diag(1, 1, 0) x.

    Args:
        b (float): The friction, b > 0.
        c (float) = 0.0: The feedback gain.

    Returns:
        SystemDef: The nonlinear system on the box D = {x : b ||x||_inf <= 1}.
    """

    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")

    b = float(b)
    c = float(c)
    gain: np.ndarray = np.array([c, c, 0.0])
    cyclic: list[int] = [1, 2, 0]

    def field(t: float, x: np.ndarray) -> np.ndarray:
        return np.sin(x[cyclic]) - b * x + gain * x

    def jacobian(t: float, x: np.ndarray) -> np.ndarray:
        J: np.ndarray = np.diag(gain - b)
        J[0, 1] = np.cos(x[1])
        J[1, 2] = np.cos(x[2])
        J[2, 0] = np.cos(x[0])
        return J

    return SystemDef(
        SystemKind.NONLINEAR, 3, "thomas",
        field = field,
        jacobian = jacobian,
        state_space = (-np.ones(3) / b, np.ones(3) / b),
        parameters = {"b": b, "c": c}
    )

def thomas_alpha_bound(b: float, s: float) -> float:
    """
    The bound 1 - 2b - s(b+1) on mu_1(J^[2+s](x)) of the open-loop Thomas system over D.
    """
    return 1.0 - 2.0 * b - s * (b + 1.0)

def thomas_threshold(b: float) -> float:
    """
    The smallest s with thomas_alpha_bound(b, s) < 0, i.e. (1 - 2b)/(1 + b).
    """
    return (1.0 - 2.0 * b) / (1.0 + b)

def thomas_gain_bound(b: float, s: float) -> float:
    """
    The supremum gain c* = (s(b+1) + 2b - 1)/(1 + s) for which the closed loop is (2+s)-contracting in mu_1.

    Any gain c < c* works on D.

    Args:
        b (float): The friction, b > 0.
        s (float): The fractional part of alpha, 0 <= s < 1.

    Returns:
        float: c*.
    """

    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")

    if not 0.0 <= s < 1.0:
        raise DomainError(f"s={s} is out of range [0, 1)")

    return (s * (b + 1.0) + 2.0 * b - 1.0) / (1.0 + s)

# Monotone cyclic feedback
def cyclic_system(n: int = 4, delta1: int = -1, bound: float = 2.0) -> SystemDef:
    """
    Build the monotone cyclic feedback system with tanh couplings.

    x1' = -x1 + delta1 tanh(xn), xi' = -xi + tanh(x_{i-1}) + tanh(x_{i+1}), xn' = -xn + tanh(x_{n-1}).
    With delta1 = +1 the Jacobian is Metzler; with delta1 = -1 it has the even-k sign pattern.

    Args:
        n (int) = 4: The dimension, n >= 3.
        delta1 (int) = -1: The sign of the feedback, -1 or +1.
        bound (float) = 2.0: Half the side of the box state space.

    Returns:
        SystemDef: The nonlinear system.
    """

    DomainCheck.check_order(n, 3, 20, "n")
    if delta1 not in (-1, 1):
        raise DomainError(f"delta1 must be -1 or +1, got {delta1}")

    n = int(n)
    delta1 = int(delta1)

    def field(t: float, x: np.ndarray) -> np.ndarray:
        th: np.ndarray = np.tanh(x)
        dx: np.ndarray = -x.copy()
        dx[0] += delta1 * th[n - 1]
        dx[1:n - 1] += th[0:n - 2] + th[2:n]
        dx[n - 1] += th[n - 2]
        return dx

    def jacobian(t: float, x: np.ndarray) -> np.ndarray:
        slope: np.ndarray = 1.0 - np.tanh(x) ** 2
        J: np.ndarray = -np.eye(n)
        J[0, n - 1] = delta1 * slope[n - 1]
        for i in range(1, n - 1):
            J[i, i - 1] = slope[i - 1]
            J[i, i + 1] = slope[i + 1]
        J[n - 1, n - 2] = slope[n - 2]
        return J

    return SystemDef(
        SystemKind.NONLINEAR, n, "cyclic",
        field = field,
        jacobian = jacobian,
        state_space = (-bound * np.ones(n), bound * np.ones(n)),
        parameters = {"n": n, "delta1": delta1}
    )

def jacobi_system(A: Any) -> SystemDef:
    """
    Build the LTI system x' = A x for a Jacobi matrix A (tridiagonal, positive off-diagonals).

    Args:
        A (Any): The Jacobi matrix.

    Returns:
        SystemDef: The LTI system.
    """

    A = DomainCheck.as_matrix(A)
    DomainCheck.check_square(A)

    # Tridiagonal with strictly positive super- and sub-diagonals
    distance: np.ndarray = np.abs(np.subtract.outer(np.arange(A.shape[0]), np.arange(A.shape[0])))
    if np.any(A[distance > 1] != 0.0) or np.any(A[distance == 1] <= 0.0):
        raise DomainError("a Jacobi system needs a tridiagonal matrix with positive off-diagonal entries")

    return ltv_system(A, "jacobi")

# Builtin registry
BUILTIN_SYSTEMS: tuple[str, ...] = ("example5", "example8", "thomas", "cyclic")

def builtin_system(name: str, b: float = 0.1, c: float = 0.0, n: int = 4, delta1: int = -1) -> SystemDef:
    """
    Build a named example system.

    Args:
        name (str): One of BUILTIN_SYSTEMS.
        b (float) = 0.1: Thomas friction.
        c (float) = 0.0: Thomas feedback gain.
        n (int) = 4: Cyclic system dimension.
        delta1 (int) = -1: Cyclic system feedback sign.

    Returns:
        SystemDef: The system.
    """

    if name == "example5":
        return example5_system()

    if name == "example8":
        return example8_system()

    if name == "thomas":
        return thomas_system(b, c)

    if name == "cyclic":
        return cyclic_system(n, delta1)

    raise DomainError(f"unknown builtin system {name!r}, expected one of {', '.join(BUILTIN_SYSTEMS)}")
