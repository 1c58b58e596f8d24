"""Prompting, model endpoint client, output parsing, and case sampling."""

from .client import (
    CREDENTIALS_ENV_VAR,
    ChatEndpoint,
    EndpointUnavailable,
    ModelConfig,
    StubEndpointServer,
)
from .output import (
    ClinicalIssue,
    MalformedOutput,
    OutputError,
    RangeViolation,
    ReviewOutput,
    SchemaViolation,
    parse_review_output,
    serialize_review_output,
    strip_code_fence,
)
from .prompt import (
    SYSTEM_PROMPT_SHA256,
    build_prompt,
    load_system_prompt,
    system_prompt_checksum,
    verify_system_prompt,
)
from .run import AllEpochsMalformed, EpochRecord, RunMetadata, run_review
from .sampling import (
    EvaluationSet,
    InsufficientPool,
    MatcherConfig,
    SampleCounts,
    sample_cases,
)
from .variants import make_ethnicity_variants

__all__ = [
    "AllEpochsMalformed",
    "CREDENTIALS_ENV_VAR",
    "ChatEndpoint",
    "ClinicalIssue",
    "EndpointUnavailable",
    "EpochRecord",
    "EvaluationSet",
    "InsufficientPool",
    "MalformedOutput",
    "MatcherConfig",
    "ModelConfig",
    "OutputError",
    "RangeViolation",
    "ReviewOutput",
    "RunMetadata",
    "SYSTEM_PROMPT_SHA256",
    "SampleCounts",
    "SchemaViolation",
    "StubEndpointServer",
    "build_prompt",
    "load_system_prompt",
    "make_ethnicity_variants",
    "parse_review_output",
    "run_review",
    "sample_cases",
    "serialize_review_output",
    "strip_code_fence",
    "system_prompt_checksum",
    "verify_system_prompt",
]
