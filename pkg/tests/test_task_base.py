import threading

import pytest

from henon_toolkit.core_params import ParameterError
from henon_toolkit.task_base import FunctionTask, NumericalFailure, Status, Task, TaskCancelledException, TaskPool


class FailingTask(Task):
    def __init__(self, name: str, error: Exception):
        super().__init__(name)
        self.error_to_raise = error

    def run_impl(self):
        raise self.error_to_raise


class TestTask:
    def test_success(self):
        task = FunctionTask("square", lambda x: x * x, 7).run()
        assert task.get_status() == Status.SUCCESS
        assert task.result == 49
        task.raise_for_status()

    def test_expected_failure_is_recorded(self):
        error = ParameterError("bad dimension")
        task = FailingTask("fails", error).run()
        assert task.get_status() == Status.FAILURE
        assert task.error is error
        with pytest.raises(ParameterError):
            task.raise_for_status()

    def test_unexpected_failure_is_recorded(self):
        task = FailingTask("crashes", RuntimeError("boom")).run()
        assert task.get_status() == Status.FAILURE
        assert isinstance(task.error, RuntimeError)

    def test_cancelled_before_start(self):
        calls = []
        task = FunctionTask("never", calls.append, 1)
        task.cancel()
        task.run()
        assert task.get_status() == Status.CANCELLED
        assert calls == []
        with pytest.raises(TaskCancelledException):
            task.raise_for_status()

    def test_run_impl_required(self):
        task = Task("abstract").run()
        assert isinstance(task.error, NotImplementedError)


class TestTaskPool:
    @pytest.mark.parametrize("threads", [1, 4])
    def test_results_in_insertion_order(self, threads):
        pool = TaskPool("squares", threads)
        for i in range(20):
            pool.add_task(FunctionTask(f"square {i}", lambda x: x * x, i))
        pool.run()
        assert pool.get_status() == Status.SUCCESS
        assert pool.result == [i * i for i in range(20)]

    def test_uses_worker_threads(self):
        names = set()

        def record():
            names.add(threading.current_thread().name)

        pool = TaskPool("threads", 2)
        for i in range(2):
            pool.add_task(FunctionTask(f"record {i}", record))
        pool.run()
        assert threading.main_thread().name not in names

    def test_failure_cancels_remaining(self):
        calls = []
        pool = TaskPool("sweep", 1)
        pool.add_task(FunctionTask("first", calls.append, 1))
        pool.add_task(FailingTask("second", NumericalFailure("didn't converge")))
        pool.add_task(FunctionTask("third", calls.append, 3))
        pool.run()

        assert pool.get_status() == Status.FAILURE
        assert isinstance(pool.error, NumericalFailure)
        assert calls == [1]
        assert pool.subtasks[2].get_status() == Status.CANCELLED

