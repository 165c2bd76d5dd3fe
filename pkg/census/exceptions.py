"""
Exceptions raised by the census pipeline.
"""


class CensusError(Exception):
    """A census run, checkpoint or archive cannot be used as asked."""


class ArchiveChecksumError(CensusError):
    """The record section of an archive does not match its footer."""


class InconsistencyError(CensusError):
    """A census result contradicts an invariant the pipeline relies on."""
