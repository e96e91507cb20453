"""
CompoundCert.Progress
~~~~~~~~~~~~

This module implements the progress reporting for integrations and certification sweeps.
"""

# Import the required modules
import time
from typing import Any, TypeAlias, Literal, Callable
from datetime import datetime

# Type Alias
_ProgressStatus: TypeAlias = Literal['IDLE', 'INTEGRATING', 'INTEGRATED', 'SAMPLING', 'SAMPLED', 'CERTIFYING', 'CERTIFIED', 'CHECKING', 'CHECKED', 'COMPLETED']

# Progress Classes
class ProgressStatusSelector:
    """
    A class representing the status of a long-running numerical operation.
    """

    # Constants
    IDLE: _ProgressStatus = 'IDLE'
    INTEGRATING: _ProgressStatus = 'INTEGRATING'
    INTEGRATED: _ProgressStatus = 'INTEGRATED'
    SAMPLING: _ProgressStatus = 'SAMPLING'
    SAMPLED: _ProgressStatus = 'SAMPLED'
    CERTIFYING: _ProgressStatus = 'CERTIFYING'
    CERTIFIED: _ProgressStatus = 'CERTIFIED'
    CHECKING: _ProgressStatus = 'CHECKING'
    CHECKED: _ProgressStatus = 'CHECKED'
    COMPLETED: _ProgressStatus = 'COMPLETED'

class _ProgressData:
    """
    A class representing one progress update.
    """

    def __init__(self, status: _ProgressStatus = 'IDLE', message: str = None, data: Any = None, progress: float = None, timestamp: datetime = None, elapsed: float = 0.0) -> None:
        """
        Initializes a new instance of the _ProgressData class.

        Args:
            status (_ProgressStatus) = 'IDLE': The status of the progress.
            message (str) = None: The message to display.
            data (Any) = None: The data attached to the update.
            progress (float) = None: The completed fraction of the operation. Range: [0.0, 1.0].
            timestamp (datetime) = None: The timestamp of the progress. Defaults to current datetime.
            elapsed (float) = 0.0: Seconds since the reporting Progress object was created.

        Returns:
            None
        """

        self.__status: _ProgressStatus = status
        self.__message: str = message
        self.__data: Any = data
        self.__progress: float = progress
        self.__timestamp: datetime = timestamp if timestamp else datetime.now()
        self.__elapsed: float = elapsed

    def __str__(self) -> str:
        return f"_ProgressData(status='{self.__status}', message='{self.__message}', progress='{self.__progress}', elapsed={self.__elapsed:.3f}s)"

    def __repr__(self) -> str:
        return self.__str__()

    @property
    def status(self) -> _ProgressStatus:
        """
        Returns the status of the progress.
        """
        return self.__status

    @property
    def message(self) -> str:
        """
        Returns the message of the progress.
        """
        return self.__message

    @property
    def data(self) -> Any:
        """
        Returns the data of the progress.
        """
        return self.__data

    @property
    def progress(self) -> float:
        """
        Returns the completed fraction, or None when unknown.
        """
        return self.__progress

    @property
    def timestamp(self) -> datetime:
        """
        Returns the timestamp of the progress.
        """
        return self.__timestamp

    @property
    def elapsed(self) -> float:
        """
        Returns the seconds elapsed since the Progress object was created.
        """
        return self.__elapsed

class Progress:
    """
    A class broadcasting the progress of an operation to its listeners.
    """

    def __init__(self) -> None:
        """
        Initializes a new instance of the Progress class.

        Returns:
            None
        """

        # Initialize the class attributes
        self.__started: float = time.perf_counter()
        self.__current_progress: _ProgressData = _ProgressData()
        self.__progress_listeners: list[Callable[[_ProgressData], None]] = []

    @property
    def current(self) -> _ProgressData:
        """
        Returns the latest progress update.
        """
        return self.__current_progress

    def add_progress_listener(self, listener: Callable[[_ProgressData], None]) -> None:
        """
        Adds a listener to the progress.

        Args:
            listener (Callable[[_ProgressData], None]): The callback function to add.

        Returns:
            None
        """

        # Add the listener to the list of listeners
        self.__progress_listeners.append(listener)

    def remove_progress_listener(self, listener: Callable[[_ProgressData], None]) -> None:
        """
        Removes a listener from the progress.

        Args:
            listener (Callable[[_ProgressData], None]): The callback function to remove.

        Returns:
            None
        """

        # Remove the listener from the list of listeners
        self.__progress_listeners.remove(listener)

    def _update_progress(self, status: _ProgressStatus, message: str = None, data: Any = None, progress: float = None, timestamp: datetime = None) -> None:
        """
        Updates the progress and notifies the listeners.

        Args:
            status (_ProgressStatus): The status of the progress.
            message (str, optional): The message to display. Defaults to None.
            data (Any, optional): The data attached to the update. Defaults to None.
            progress (float, optional): The completed fraction. Defaults to None. Range: [0.0, 1.0].
            timestamp (datetime, optional): The timestamp of the progress. Defaults to current datetime.

        Returns:
            None
        """

        # Update the progress
        self.__current_progress = _ProgressData(status, message, data, progress, timestamp, time.perf_counter() - self.__started)

        # Call the listeners
        for listener in self.__progress_listeners:
            listener(self.__current_progress)

def report(progress: Progress | None, status: _ProgressStatus, message: str = None, data: Any = None, fraction: float = None) -> None:
    """
    Forward an update to an optional Progress object.

    Args:
        progress (Progress | None): The progress object, or None to do nothing.
        status (_ProgressStatus): The status of the update.
        message (str) = None: The message to display.
        data (Any) = None: The data attached to the update.
        fraction (float) = None: The completed fraction.

    Returns:
        None
    """

    if progress is not None:
        progress._update_progress(status, message, data, fraction)
