"""Verification outcomes and the JSON report format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA = "1"

VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"
ILL_FORMED = "ill-formed"
CONFIG_ERROR = "config-error"
ORDER_TOO_SMALL = "order-too-small"

STATUSES = (VERIFIED, COUNTEREXAMPLE, ILL_FORMED, CONFIG_ERROR, ORDER_TOO_SMALL)


@dataclass
class VerificationReport:
    claim_id: str
    status: str
    order: int | None = None
    detail: dict = field(default_factory=dict)
    runtime_ms: float = 0.0
    ring: str = "ZZ"

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def as_dict(self) -> dict:
        return {
            "id": self.claim_id,
            "status": self.status,
            "order": self.order,
            "ring": self.ring,
            "detail": self.detail,
            "runtime_ms": round(self.runtime_ms, 3),
        }

    def summary(self) -> str:
        if self.status == VERIFIED:
            return f"{self.claim_id}: verified to order {self.order} over {self.ring}"
        return f"{self.claim_id}: {self.status} {json.dumps(self.detail, sort_keys=True)}"


def to_json(reports: list[VerificationReport]) -> str:
    doc = {"schema": SCHEMA, "claims": [r.as_dict() for r in reports]}
    return json.dumps(doc, indent=2, sort_keys=False)
