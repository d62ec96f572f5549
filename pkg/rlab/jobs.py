"""Parallel work units.

`Job` runs one worker over a list of tasks, serially for jobs=1 or on a
process pool otherwise, and keeps a small registry of the jobs of a run. The
worker never raises across the process boundary: each task comes back as a
message dict (started/finished/error), and errors are collected on the job
for the command to report.
"""

from __future__ import annotations

import concurrent.futures
import functools
import os
import traceback
import typing


def _guarded(worker, task) -> dict:
    try:
        return {"type": "finished", "result": worker(task)}
    except Exception as e:  # noqa: BLE001 - reported as a message, never raised
        return {
            "type": "error",
            "message": f"{type(e).__name__}: {e}",
            "traceback": traceback.format_exc(),
        }


def resolve_jobs(jobs: int) -> int:
    """0 means one worker per CPU."""
    if jobs < 0:
        raise ValueError(f"--jobs must be >= 0, got {jobs}")
    return jobs or os.cpu_count() or 1


class Job:
    jobs = {}

    @classmethod
    def add_job(cls, id, job):
        cls.jobs[id] = job

    def __init__(self, app, id: str, worker: typing.Callable):
        self.app = app
        self.id = id
        self.worker = worker
        self.running = False
        self.errors: typing.List[typing.Tuple[typing.Any, str]] = []
        Job.add_job(id, self)

    def process_message(self, task, message) -> typing.Any:
        if message["type"] == "error":
            self.errors.append((task, message["message"]))
            self.app.log.error(f"{self.id}: task {task!r} failed: {message['message']}")
            self.app.log.debug(message["traceback"])
            return None
        return message["result"]

    def map(self, tasks: typing.Sequence) -> typing.List[typing.Any]:
        """Results in task order; a failed task yields None and an entry in `errors`."""
        tasks = list(tasks)
        workers = min(resolve_jobs(self.app.jobs), max(len(tasks), 1))
        self.running = True
        self.errors = []
        self.app.log.debug(f"Job started {self.id}: {len(tasks)} tasks, {workers} workers")
        call = functools.partial(_guarded, self.worker)
        if workers == 1:
            messages = [call(t) for t in tasks]
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
                messages = list(pool.map(call, tasks))
        results = [self.process_message(t, m) for t, m in zip(tasks, messages)]
        self.running = False
        self.app.log.debug(f"Job finished {self.id}")
        return results
