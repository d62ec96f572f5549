"""The App struct: the state of one CLI run.

Created once in `main` and passed to each command, which reaches the log,
configuration, manifest and parallelism through it. A plain instance, not a
global.
"""

from __future__ import annotations

import time
import typing

from rlab.config import Manifest, load_config
from rlab.log import Log


class App:
    def __init__(self, config_path: typing.Optional[str] = None):
        self.log = Log(self)
        self.config: dict = load_config(config_path)
        self.log.level = self.config["log"]["level"]
        self.manifest: Manifest = None
        self.jobs = 1
        self.seed: typing.Optional[int] = None
        self._started = time.perf_counter()

    def load_manifest(self):
        if self.manifest is None:
            self.manifest = Manifest.load()
        return self.manifest

    def elapsed(self) -> float:
        return time.perf_counter() - self._started
