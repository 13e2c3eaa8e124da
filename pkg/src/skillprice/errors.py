"""Exception hierarchy shared across the package.

Every error carries a short machine-readable ``code`` that the CLI prints in
its one-line diagnostics and the HTTP layer embeds in error bodies.
"""

from __future__ import annotations


class SkillPriceError(Exception):
    """Base class for all validation-type errors (CLI exit code 1)."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InputFormatError(SkillPriceError):
    """Unreadable stream, unknown format, or schema mismatch."""

    code = "input-format"


class CorruptInputError(SkillPriceError):
    """More than the allowed fraction of rows was rejected."""

    code = "corrupt-input"


class ConfigError(SkillPriceError):
    code = "config"


class ThresholdError(SkillPriceError):
    """No skills survive the popularity threshold."""

    code = "no-skills-above-threshold"


class PartitionError(SkillPriceError):
    """Partition does not cover every graph node."""

    code = "partition-coverage"


class UnknownSkillError(SkillPriceError):
    """Skill slug not present in the data; may carry suggestions."""

    code = "unknown-skill"

    def __init__(self, message: str, suggestions: list[str] | None = None):
        super().__init__(message)
        self.suggestions = suggestions or []


class NoComplementError(SkillPriceError):
    """Skill occurs in every project, so no complement set exists."""

    code = "no-complement-set"


class RegressionError(SkillPriceError):
    code = "regression"


class PriceUnidentifiableError(RegressionError):
    """Skill dummy collinear with other regressors."""

    code = "price-unidentifiable"


class FoldError(SkillPriceError):
    """A cross-validation fold is too small to fit."""

    code = "fold-too-small"


class MissingValueError(SkillPriceError):
    """A node lacks a value required by the value-weighted update."""

    code = "missing-value"


class DegenerateTestError(SkillPriceError):
    """Both cohorts have zero variance and equal means."""

    code = "degenerate-test"


class MissingOccupationError(SkillPriceError):
    """An occupation hosting the skill is absent from the probability table."""

    code = "missing-occupation"


class EmptyBundleError(SkillPriceError):
    code = "empty-bundle"


class ArtifactError(SkillPriceError):
    """Artifact missing, unreadable, or wrong schema version."""

    code = "artifact"
