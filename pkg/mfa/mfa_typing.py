"""Typing for mfa JSON payloads."""
from typing import Optional, TypedDict


class ErrorPayload(TypedDict):
    """Define the error object of a failed command."""

    code: str
    message: str


class InversionPayload(TypedDict):
    """Define the evidence that the induced endomorphism is invertible."""

    status: str
    map: str
    verified_degree: Optional[int]


class CertificatePayload(TypedDict):
    """Define a serialized wildness certificate."""

    verdict: str
    reason: Optional[str]
    reason_degree: Optional[int]
    ie_level: int
    ideal_min_degree: int
    degree_check: bool
    tangent: str
    divergence: str
    automorphism_evidence: Optional[InversionPayload]
    jacobian_verified: bool
    induced: str
    max_degree: int


class RigidityPayload(TypedDict):
    """Define a serialized rank 2 search report."""

    degree_bound: int
    samples: int
    seed: int
    max_degree: int
    candidates: int
    counterexamples: list[str]
    shape_violations: list[str]
    control_exact: bool
