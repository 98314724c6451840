import concurrent.futures
import enum
import logging
import threading
import typing


log = logging.getLogger(__name__)


class ValidationFailure(Exception):
    """
    Signals that the input of an operation is outside its admissible range. The command line reports these with
    exit status 2.
    """
    pass


class NumericalFailure(Exception):
    """
    Signals that a computation could not reach its tolerance: a solver didn't converge, a quadrature failed, or a
    grid couldn't resolve the requested quantity. The command line reports these with exit status 3.
    """
    pass


class TaskCancelledException(Exception):
    """
    Signals that the task was cancelled.
    """
    pass


class Status(enum.IntEnum):
    NOT_STARTED = 0
    WORKING = 1
    SUCCESS = 2
    FAILURE = 3
    CANCELLED = 4


class Task:
    def __init__(self, name: str):
        """
        A single unit of work in an experiment, such as one eigensolve in a parameter sweep. Unlike a plain function
        call, a task records its status, result and failure, so that a sweep can report which elements failed
        without losing the others. Implementation should be defined by overriding ``run_impl()`` instead of
        ``run()``.
        :param name: Name of the task, as shown in the log.
        """
        self.name = name
        self.result: typing.Any = None
        self.error: Exception | None = None

        self._status_lock = threading.Lock()
        self._status: Status = Status.NOT_STARTED

        self._cancel_lock = threading.Lock()
        self._cancelled = False

    def set_status(self, status: Status):
        """
        Sets the status of the task. This method is thread-safe.
        :param status: Status to set.
        """
        log.debug(f'Task "{self.name}": Status = {status.name}')

        with self._status_lock:
            self._status = status

    def get_status(self) -> Status:
        """
        Gets the status of the task. This method is thread-safe.
        :return: Status of the task.
        """
        with self._status_lock:
            return self._status

    def cancel(self):
        """
        Sets the "cancelled" flag of the task. This method is thread-safe. A task that hasn't started yet will finish
        with status ``CANCELLED`` without running.
        """
        log.debug(f'Task "{self.name}": Cancelling')
        with self._cancel_lock:
            self._cancelled = True

    def is_cancelled(self) -> bool:
        with self._cancel_lock:
            return self._cancelled

    def run(self) -> "Task":
        """
        Executes the task, storing its result or failure. Failures never propagate out of this method; use
        ``raise_for_status()`` afterwards to re-raise them.
        :return: This task, for chaining.
        """
        self.set_status(Status.WORKING)
        try:
            if self.is_cancelled():
                raise TaskCancelledException()
            self.result = self.run_impl()
        except TaskCancelledException:
            self.set_status(Status.CANCELLED)
        except (ValidationFailure, NumericalFailure) as e:
            log.warning(f'Task "{self.name}" failed: {e}')
            self.error = e
            self.set_status(Status.FAILURE)
        except Exception as e:
            log.error(f'Exception occurred in task "{self.name}":', exc_info=e)
            self.error = e
            self.set_status(Status.FAILURE)
        else:
            self.set_status(Status.SUCCESS)

        return self

    def run_impl(self) -> typing.Any:
        """
        The implementation of the task. The return value becomes ``result``. Implementations should raise
        ``ValidationFailure`` or ``NumericalFailure`` subclasses for expected failures, and may check
        ``is_cancelled()`` between expensive steps.
        """
        raise NotImplementedError()

    def raise_for_status(self):
        """
        Re-raises the failure recorded by ``run()``, if any.
        """
        status = self.get_status()
        if status == Status.FAILURE and self.error is not None:
            raise self.error
        if status == Status.CANCELLED:
            raise TaskCancelledException(f'Task "{self.name}" was cancelled')


class FunctionTask(Task):
    def __init__(self, name: str, func: typing.Callable[..., typing.Any], *args, **kwargs):
        """
        A task that calls a function with fixed arguments.
        :param name: Name of the task, as shown in the log.
        :param func: Function to call.
        """
        super().__init__(name)
        self.func = func
        self.args = args
        self.kwargs = kwargs

    def run_impl(self):
        return self.func(*self.args, **self.kwargs)


class TaskPool(Task):
    def __init__(self, name: str, threads: int = 1):
        """
        A ``Task`` that runs independent subtasks, on up to ``threads`` worker threads. Results are always assembled in
        the order the subtasks were added. The status follows the subtasks:
         * If every subtask is successful, the pool is successful and its result is the list of subtask results.
         * If a subtask fails, the remaining subtasks are cancelled and the pool fails with the first failure in
           insertion order.
        :param name: Name of the task, as shown in the log.
        :param threads: Maximum number of worker threads.
        """
        super().__init__(name)
        self.threads = max(1, threads)
        self.subtasks: list[Task] = []

    def add_task(self, task: Task):
        self.subtasks.append(task)

    def cancel(self):
        """
        Cancels this task, and all subtasks. See ``Task.cancel()``.
        """
        super().cancel()
        for task in self.subtasks:
            task.cancel()

    def run_impl(self) -> list:
        if self.threads == 1 or len(self.subtasks) <= 1:
            for task in self.subtasks:
                task.run()
                if task.get_status() == Status.FAILURE:
                    self.cancel()
        else:
            log.debug(f'Task "{self.name}": Running {len(self.subtasks)} subtasks on {self.threads} threads')
            with concurrent.futures.ThreadPoolExecutor(max_workers=self.threads) as executor:
                futures = [executor.submit(self._run_subtask, task) for task in self.subtasks]
                concurrent.futures.wait(futures)

        for task in self.subtasks:
            if task.get_status() == Status.FAILURE:
                task.raise_for_status()
        for task in self.subtasks:
            task.raise_for_status()

        return [task.result for task in self.subtasks]

    def _run_subtask(self, task: Task):
        task.run()
        if task.get_status() == Status.FAILURE:
            self.cancel()
