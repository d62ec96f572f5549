#!/usr/bin/python
"""Entry-point shim: `python3 rigiditylab.py` runs the `rlab` CLI, which is also
the console-script target."""

import sys

from rlab.main import main

if __name__ == "__main__":
    sys.exit(main())
