"""Exception hierarchy.

Two broad families map onto CLI exit codes: DataError (bad or missing input
data, exit 3) and ModelError (classifier/model-file problems, exit 4).
"""

from __future__ import annotations


class RansomriskError(Exception):
    """Base class for every error raised by this package."""


class DataError(RansomriskError):
    """Input data is malformed, inconsistent, or missing. CLI exit code 3."""


class ModelError(RansomriskError):
    """Model training, loading, or scoring failed. CLI exit code 4."""


# --- vocabulary / domain validation -----------------------------------------


class UnknownCountry(DataError):
    def __init__(self, code: str):
        super().__init__(f"unknown ISO 3166-1 alpha-2 country code: {code!r}")
        self.code = code


class UnknownSector(DataError):
    def __init__(self, value: str):
        super().__init__(f"not a STIX 2.1 industry sector: {value!r}")
        self.value = value


class UnknownVocabValue(DataError):
    def __init__(self, vocab: str, value: str):
        super().__init__(f"not a recognized {vocab}: {value!r}")
        self.vocab = vocab
        self.value = value


class MalformedTechniqueId(DataError):
    def __init__(self, value: str, reason: str = "expected T#### or T####.###"):
        super().__init__(f"malformed ATT&CK technique id {value!r}: {reason}")
        self.value = value


class MalformedCveId(DataError):
    def __init__(self, value: str, reason: str = "expected CVE-YYYY-NNNN..."):
        super().__init__(f"malformed CVE id {value!r}: {reason}")
        self.value = value


class InvalidProfile(DataError):
    """A domain object failed one of its own field validators."""


# --- ingestion ----------------------------------------------------------------


class FormatError(DataError):
    """One malformed input row. Collected into rejection reports, not raised."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class IncompleteProfile(DataError):
    def __init__(self, victim: str, missing: list[str]):
        super().__init__(f"victim {victim!r} is missing required fields: {', '.join(missing)}")
        self.victim = victim
        self.missing = list(missing)


class UnknownAdversary(DataError):
    def __init__(self, name: str):
        super().__init__(f"adversary {name!r} is not in the adversary store")
        self.name = name


# --- feature extraction --------------------------------------------------------


class EmptyBundle(DataError):
    pass


class EmptyDocument(DataError):
    pass


class UnknownStandard(DataError):
    def __init__(self, standard: str):
        super().__init__(f"no registered validator for standard {standard!r}")
        self.standard = standard


class PromptTooLarge(DataError):
    def __init__(self, estimate: int, window: int):
        super().__init__(f"prompt estimated at {estimate} tokens exceeds context window of {window}")
        self.estimate = estimate
        self.window = window


class ClientError(DataError):
    """Transport-level failure talking to a completion client."""


class PartLimitExceeded(DataError):
    def __init__(self, parts: int):
        super().__init__(f"response still truncated after {parts} continuation parts")
        self.parts = parts


class NonContiguousParts(DataError):
    def __init__(self, indices: list[int]):
        super().__init__(f"response part indices are not consecutive from 0: {indices}")
        self.indices = indices


class UnparseableUnifiedResponse(DataError):
    pass


class MissingCoreIdentity(DataError):
    pass


class DanglingReference(DataError):
    def __init__(self, rel_id: str, ref: str):
        super().__init__(f"relationship {rel_id} references unknown object {ref}")
        self.rel_id = rel_id
        self.ref = ref


# --- activity -------------------------------------------------------------------


class UnknownGroup(DataError):
    def __init__(self, group: str):
        super().__init__(f"no activity series for group {group!r}")
        self.group = group


# --- synthesis ---------------------------------------------------------------------


class InsufficientData(DataError):
    pass


class ExhaustedPool(DataError):
    def __init__(self, group: str, retries: int):
        super().__init__(
            f"no feature of group {group!r} could be permuted after {retries} attempts"
        )
        self.group = group


class ImbalanceExceeded(DataError):
    def __init__(self, unsafe: int, safe: int, tolerance: float):
        super().__init__(
            f"class imbalance {unsafe} unsafe vs {safe} safe exceeds tolerance {tolerance}"
        )
        self.unsafe = unsafe
        self.safe = safe


# --- forest / model -------------------------------------------------------------------


class ClassTooSmall(ModelError):
    def __init__(self, label: int, count: int):
        super().__init__(f"class {label} has only {count} member(s); cannot split")
        self.label = label
        self.count = count


class DegenerateData(ModelError):
    pass


class EncodingFailure(ModelError):
    pass


class OutOfRange(ModelError):
    def __init__(self, value):
        super().__init__(f"confidence {value!r} is outside [0, 1]")
        self.value = value


class VersionMismatch(ModelError):
    def __init__(self, found, expected):
        super().__init__(f"model file version {found!r} is not supported (expected {expected})")
        self.found = found


class CorruptModel(ModelError):
    pass


# --- pipeline --------------------------------------------------------------------------


class PipelineStageError(DataError):
    def __init__(self, stage: str, path: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed on {path}: {cause}")
        self.stage = stage
        self.path = path
        self.cause = cause
