"""Parse the line-oriented case-spec format.

A spec is a sequence of directives, one per line:

    config    default        # which config/<NAME> template to use
    run       codim-sweep --format csv   # run the CLI with these args
    capture   sweep          # stdout of the last run -> golden/sweep.txt
    keep      sweep_json     # remember stdout of the last run, no golden
    same-as   sweep          # stdout of the last run equals capture `sweep`
    expect-exit 2            # exit status of the last run

Blank lines and `#` comments are ignored. Arguments are split shell-style.
"""

import dataclasses
import shlex


class SpecError(Exception):
    pass


@dataclasses.dataclass
class Directive:
    op: str  # config|run|capture|keep|same-as|expect-exit
    lineno: int
    name: str = ""  # config/capture name
    code: int = 0  # for expect-exit
    args: list = dataclasses.field(default_factory=list)  # CLI argv for `run`


def parse_spec(text: str):
    """Parse spec text into a list[Directive]. Raises SpecError on problems."""
    directives = []
    seen_run = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        head, _, rest = line.strip().partition(" ")
        rest = rest.strip()
        op = head.lower()

        if op == "config":
            if seen_run:
                raise SpecError(f"line {lineno}: config must come before the first run")
            directives.append(Directive("config", lineno, name=rest or "default"))
        elif op in ("run", "args"):
            try:
                args = shlex.split(rest)
            except ValueError as e:
                raise SpecError(f"line {lineno}: bad arguments ({e})")
            if not args:
                raise SpecError(f"line {lineno}: run needs CLI arguments")
            directives.append(Directive("run", lineno, args=args))
            seen_run = True
        elif op in ("capture", "keep", "same-as"):
            if not rest:
                raise SpecError(f"line {lineno}: {op} needs a name")
            if not seen_run:
                raise SpecError(f"line {lineno}: {op} before any run")
            directives.append(Directive(op, lineno, name=rest))
        elif op == "expect-exit":
            try:
                code = int(rest or "0")
            except ValueError:
                raise SpecError(f"line {lineno}: expect-exit takes an integer status")
            if not seen_run:
                raise SpecError(f"line {lineno}: expect-exit before any run")
            directives.append(Directive("expect-exit", lineno, code=code))
        else:
            raise SpecError(f"line {lineno}: unknown directive {head!r}")
    if not seen_run:
        raise SpecError("spec has no run directive")
    return directives
