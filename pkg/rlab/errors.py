"""Exception hierarchy shared by every layer.

Library code raises these; verification failures are never exceptions, they
become report entries. `main` maps ConfigError/SchemaError to exit status 2.
"""

from __future__ import annotations

import typing


class RlabError(Exception):
    pass


class DomainError(RlabError, ValueError):
    """A formula or construction was called outside its stated domain."""


class GenericityError(RlabError):
    pass


class SubspaceError(RlabError, ValueError):
    pass


class GraphError(RlabError, ValueError):
    def __init__(self, violations: typing.List[str]):
        self.violations = list(violations)
        super().__init__("invalid resolution graph: " + "; ".join(self.violations))


class ConfigError(RlabError):
    pass


class SchemaError(RlabError):
    pass
