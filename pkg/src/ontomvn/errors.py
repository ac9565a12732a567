"""Exception hierarchy shared by all goals.

Every error carries the process exit code the CLI reports for it.
"""

from __future__ import annotations


class OntomvnError(Exception):
    exit_code = 5


class ConfigError(OntomvnError):
    """Bad usage, bad descriptor, bad goal parameters."""

    exit_code = 2


class ResolutionError(OntomvnError):
    exit_code = 3


class DocumentParseError(OntomvnError):
    """Base for errors in ontology documents."""

    exit_code = 4


class InternalError(OntomvnError):
    exit_code = 5
