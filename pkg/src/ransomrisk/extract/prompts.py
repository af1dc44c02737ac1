"""Compile feature specs plus a source document into one extraction prompt."""

from __future__ import annotations

import json
from typing import Iterable

from ..errors import EmptyBundle, EmptyDocument
from .specs import FeatureSpec

PREAMBLE = (
    "You are a cyber threat intelligence analyst. Extract the features listed "
    "below from the document at the end of this prompt."
)

OUTPUT_INSTRUCTION = (
    "Return a single JSON object mapping each feature name to an object "
    '{"value": <answer conforming to the feature\'s standard>, "rationale": '
    '"<short justification grounded in the document>"}. Every feature must '
    "carry a rationale. Respond with JSON only."
)


def _render_answer(answer: object) -> str:
    if isinstance(answer, str):
        return answer
    return json.dumps(answer)


def compile_prompt(specs: Iterable[FeatureSpec], document: str) -> str:
    """Render the prompt: per-feature sections in spec order, document appended once."""
    specs = list(specs)
    if not specs:
        raise EmptyBundle("cannot compile a prompt from zero feature specs")
    if not document or not document.strip():
        raise EmptyDocument("cannot compile a prompt for an empty document")

    lines = [PREAMBLE, ""]
    for spec in specs:
        lines.append(f"## Feature: {spec.name}")
        lines.append(f"Intent: {spec.intent}")
        lines.append(f"Guidance: {spec.guidance}")
        if spec.examples:
            lines.append("Examples:")
            for sample, answer in spec.examples:
                lines.append(f"  - Sample: {sample}")
                lines.append(f"    Answer: {_render_answer(answer)}")
        if spec.process:
            lines.append("Process:")
            for i, step in enumerate(spec.process, start=1):
                lines.append(f"  {i}. {step}")
        lines.append(f"Standard: {spec.standard}")
        lines.append("")
    lines.append(OUTPUT_INSTRUCTION)
    lines.append("")
    lines.append("## Document")
    lines.append(document)
    return "\n".join(lines)


def estimate_tokens(prompt: str) -> int:
    # Heuristic: roughly four characters per token.
    return (len(prompt) + 3) // 4
