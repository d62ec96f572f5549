"""The Log: the run's logger, reached as `app.log`.

Levels 0–5 gate debug/info/success/warning/error. Lines are timestamped and go
to stderr, so stdout carries nothing but the report.
"""

from __future__ import annotations

import datetime
import sys


class Log:
    def __init__(self, app, stream=None):
        self.app = app
        self.stream = stream
        self.level = 4

    def debug(self, txt):
        if self.level > 4:
            self.log("debug", txt)

    def info(self, txt):
        if self.level > 3:
            self.log("info", txt)

    def success(self, txt):
        if self.level > 2:
            self.log("ok", txt)

    def warning(self, txt):
        if self.level > 1:
            self.log("warning", txt)

    def error(self, txt):
        if self.level > 0:
            self.log("error", txt)

    def log(self, tag, txt):
        stream = self.stream or sys.stderr
        now = datetime.datetime.now()
        for line in str(txt).splitlines() or [""]:
            stream.write(f"{now} {tag}: {line}\n")
        stream.flush()
