"""Feature extraction from narrative threat reports.

Prompt specs are compiled into extraction prompts, answered by a pluggable
completion client (fixture replay or HTTP), and the multi-part responses are
serialized, validated against named standards, and synthesized into STIX-style
objects in an embedded document store.
"""

from .client import FixtureClient, HttpChatClient, RawResponse, query
from .process import FeatureResult, ValidatedFeatures, serialize_responses, validate_features
from .prompts import compile_prompt
from .specs import FeatureSpec, load_bundle, load_spec_file, standard_validator
from .store import StixObject, StixStore, query_adversary, synthesize_stix

__all__ = [
    "FeatureSpec",
    "FeatureResult",
    "FixtureClient",
    "HttpChatClient",
    "RawResponse",
    "StixObject",
    "StixStore",
    "ValidatedFeatures",
    "compile_prompt",
    "load_bundle",
    "load_spec_file",
    "query",
    "query_adversary",
    "serialize_responses",
    "standard_validator",
    "synthesize_stix",
    "validate_features",
]
