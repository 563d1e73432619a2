"""Result records shared by the verification code and the CLI."""

import math
from dataclasses import asdict, dataclass, field

from .product_engine import DivergenceSuspected

__all__ = [
    "VERIFIED",
    "FALSIFIED",
    "DIVERGES",
    "IdentityReport",
    "SignReport",
    "VerificationReport",
    "compare_identity",
]

VERIFIED = "verified"
FALSIFIED = "falsified"
DIVERGES = "diverges"


@dataclass
class IdentityReport:
    identity_id: str
    lhs: float
    rhs: float
    abs_dev: float
    rel_dev: float
    verdict: str
    tolerance: float
    policy: dict
    lhs_bracket: tuple = None
    note: str = ""

    def as_dict(self):
        out = asdict(self)
        if self.lhs_bracket is not None:
            out["lhs_bracket"] = list(self.lhs_bracket)
        return out


def compare_identity(identity_id, evaluate_lhs, rhs, tolerance, policy, note=""):
    """Run ``evaluate_lhs()`` (a ProductEval, or a float) and compare with ``rhs``.

    A DivergenceSuspected from the left-hand side yields verdict "diverges";
    the deviations are then those of the partial product when the detector
    fired.
    """
    verdict = None
    try:
        lhs_eval = evaluate_lhs()
    except DivergenceSuspected as exc:
        lhs_eval = exc.partial
        verdict = DIVERGES
        note = (note + "; " if note else "") + str(exc)
    if hasattr(lhs_eval, "value"):
        lhs, bracket = lhs_eval.value, lhs_eval.value_bracket
    else:
        lhs, bracket = float(lhs_eval), None
    abs_dev = abs(lhs - rhs)
    rel_dev = abs_dev / abs(rhs) if rhs != 0 else (0.0 if abs_dev == 0 else math.inf)
    if verdict is None:
        verdict = VERIFIED if rel_dev <= tolerance else FALSIFIED
    return IdentityReport(
        identity_id=identity_id,
        lhs=lhs,
        rhs=rhs,
        abs_dev=abs_dev,
        rel_dev=rel_dev,
        verdict=verdict,
        tolerance=tolerance,
        policy=policy.as_dict(),
        lhs_bracket=bracket,
        note=note,
    )


NEGATIVE, ZERO, POSITIVE = "negative", "zero", "positive"


def classify_sign(value, zero_tol):
    if abs(value) <= zero_tol:
        return ZERO
    return POSITIVE if value > 0 else NEGATIVE


@dataclass
class SignReport:
    value: float
    sign: str
    claim_source: str
    agrees_with_paper: bool
    zero_tol: float = 1e-10
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sign != classify_sign(self.value, self.zero_tol):
            raise ValueError(f"sign {self.sign!r} inconsistent with value {self.value!r}")

    def as_dict(self):
        return asdict(self)


@dataclass
class VerificationReport:
    grid: str
    worst_margin: float
    failures: list
    tolerance: float
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def as_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out
