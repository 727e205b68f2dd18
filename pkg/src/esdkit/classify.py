"""Geometric classification of asymptotic sets.

A channel's long-time behaviour is summarized by where its asymptotic set
sits relative to the separable states: a single asymptote is either an
interior separable point (case i), a separable point on a boundary
(case ii) or an entangled point (case iii); a multi-state asymptotic set
additionally admits the mixed case iv containing both separable and
entangled members.  Families are probed at the extreme points of their
constraint polytope (where boundary contact lives) plus seeded random
interior members, so the label is deterministic given (tol, n_samples,
seed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .channels import (
    AsymptoticSet,
    ChannelSpec,
    ExplicitSamples,
    SinglePoint,
    XFamily,
    asymptotic_set,
    is_catalog,
)
from .entanglement import (
    LABEL_BOUNDARY,
    LABEL_ENTANGLED,
    RegionLabel,
    classify_position,
)
from .errors import (
    EmptySetError,
    OutOfRangeError,
    ParseError,
    UnsupportedChannelError,
    ValidationError,
)
from .states import (
    DEFAULT_TOL,
    DensityMatrix,
    ToleranceConfig,
    XState,
    embed_x,
    format_state_literal,
    make_x,
    project_x,
)
from .errors import NotXFormError

__all__ = [
    "FAMILY_ONE",
    "FAMILY_MULTI",
    "CASES",
    "Evidence",
    "ScenarioLabel",
    "sample_asymptotic",
    "classify_set",
    "classify_channel",
    "scenario_to_json",
    "scenario_from_json",
]

FAMILY_ONE = "one"
FAMILY_MULTI = "multi"
CASES = ("i", "ii", "iii", "iv")


@dataclass(frozen=True)
class Evidence:
    """One probed member: its state literal and region label."""

    state: str
    region: RegionLabel


@dataclass(frozen=True, eq=False)
class ScenarioLabel:
    """Scenario assignment with the member evidence that produced it."""

    family: str
    case: str
    evidence: tuple

    def __post_init__(self) -> None:
        if self.family not in (FAMILY_ONE, FAMILY_MULTI):
            raise ValidationError(f"unknown family {self.family!r}")
        if self.case not in CASES:
            raise ValidationError(f"unknown case {self.case!r}")
        if self.case == "iv" and self.family != FAMILY_MULTI:
            raise ValidationError("case iv requires a multi-state asymptotic set")
        object.__setattr__(self, "evidence", tuple(self.evidence))


# deterministic probe populations: simplex vertices and face centers
_THIRD = 1.0 / 3.0
_PROBE_POPULATIONS = (
    (1.0, 0.0, 0.0, 0.0),
    (0.0, 1.0, 0.0, 0.0),
    (0.0, 0.0, 1.0, 0.0),
    (0.0, 0.0, 0.0, 1.0),
    (0.0, _THIRD, _THIRD, _THIRD),
    (_THIRD, 0.0, _THIRD, _THIRD),
    (_THIRD, _THIRD, 0.0, _THIRD),
    (_THIRD, _THIRD, _THIRD, 0.0),
)


def _coherence_extremes(bound: float, frozen: bool) -> tuple[complex, ...]:
    if frozen or bound == 0.0:
        return (0.0 + 0.0j,)
    return (0.0 + 0.0j, complex(bound), complex(-bound))


def _family_members(family: XFamily, n_samples: int, seed: int) -> list[XState]:
    members: list[XState] = []
    for a, b, c, d in _PROBE_POPULATIONS:
        w_bound = float(np.sqrt(a * d))
        z_bound = float(np.sqrt(b * c))
        for w in _coherence_extremes(w_bound, family.w_zero):
            for z in _coherence_extremes(z_bound, family.z_zero):
                members.append(make_x(a, b, c, d, w, z))
    rng = np.random.default_rng(seed)
    for _ in range(n_samples):
        a, b, c, d = rng.dirichlet((1.0, 1.0, 1.0, 1.0))
        w = 0.0 + 0.0j
        z = 0.0 + 0.0j
        if not family.w_zero:
            w = rng.uniform() * np.sqrt(a * d) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        if not family.z_zero:
            z = rng.uniform() * np.sqrt(b * c) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        members.append(make_x(a, b, c, d, w, z))
    return members


def sample_asymptotic(
    aset: AsymptoticSet, n_samples: int = 100, seed: int = 0
) -> list[DensityMatrix]:
    """Concrete members of an asymptotic set.

    Single points and explicit sets return their states as-is; X families
    return the deterministic extreme members (simplex vertices and face
    centers, each with coherences at 0 and at the positivity bound) plus
    ``n_samples`` seeded uniform interior members.
    """
    if n_samples < 0:
        raise OutOfRangeError(f"n_samples must be nonnegative, got {n_samples!r}")
    if isinstance(aset, SinglePoint):
        return [aset.state]
    if isinstance(aset, ExplicitSamples):
        return list(aset.states)
    if isinstance(aset, XFamily):
        return [embed_x(x) for x in _family_members(aset, n_samples, seed)]
    raise ValidationError(f"unknown asymptotic set type {type(aset).__name__}")


def _member_literal(member: DensityMatrix) -> str:
    try:
        return format_state_literal(project_x(member))
    except NotXFormError:
        return format_state_literal(member)


def classify_set(
    aset: AsymptoticSet,
    tol: ToleranceConfig = DEFAULT_TOL,
    n_samples: int = 100,
    seed: int = 0,
) -> ScenarioLabel:
    """Assign the scenario label for an asymptotic set.

    Family is "one" for a single point (or an explicit set of one state)
    and "multi" otherwise.  The case follows the evidence labels: all
    interior -> i; all separable with boundary contact -> ii; all
    entangled -> iii; both entangled and separable members -> iv.
    """
    members = sample_asymptotic(aset, n_samples=n_samples, seed=seed)
    if not members:
        raise EmptySetError("asymptotic set has no members to classify")
    single = isinstance(aset, SinglePoint) or (
        isinstance(aset, ExplicitSamples) and len(members) == 1
    )
    family = FAMILY_ONE if single else FAMILY_MULTI
    evidence = []
    entangled_seen = separable_seen = boundary_seen = False
    for member in members:
        region = classify_position(member, tol)
        evidence.append(Evidence(_member_literal(member), region))
        if region.label == LABEL_ENTANGLED:
            entangled_seen = True
        else:
            separable_seen = True
            boundary_seen = boundary_seen or region.label == LABEL_BOUNDARY
    if entangled_seen and separable_seen:
        case = "iv"
    elif entangled_seen:
        case = "iii"
    elif boundary_seen:
        case = "ii"
    else:
        case = "i"
    return ScenarioLabel(family, case, tuple(evidence))


def classify_channel(
    channel: ChannelSpec,
    tol: ToleranceConfig = DEFAULT_TOL,
    n_samples: int = 100,
    seed: int = 0,
) -> ScenarioLabel:
    """Classify a catalog channel through its asymptotic set.

    Custom channels carry no catalog asymptotics; classify an
    :class:`~esdkit.channels.ExplicitSamples` set instead.
    """
    if not is_catalog(channel):
        raise UnsupportedChannelError(
            "classify_channel requires a catalog channel; "
            "use classify_set with explicit samples instead"
        )
    return classify_set(asymptotic_set(channel), tol=tol, n_samples=n_samples, seed=seed)


def scenario_to_json(label: ScenarioLabel) -> str:
    payload = {
        "family": label.family,
        "case": label.case,
        "evidence": [
            {
                "state": ev.state,
                "label": ev.region.label,
                "margin": ev.region.margin,
            }
            for ev in label.evidence
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def scenario_from_json(text: str) -> ScenarioLabel:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad scenario JSON: {exc}") from None
    if not isinstance(payload, dict) or not {"family", "case", "evidence"} <= set(payload):
        raise ParseError("scenario JSON must contain family, case and evidence")
    evidence = []
    for idx, entry in enumerate(payload["evidence"]):
        if not isinstance(entry, dict) or not {"state", "label", "margin"} <= set(entry):
            raise ParseError(f"evidence entry {idx + 1} needs state, label and margin")
        evidence.append(
            Evidence(str(entry["state"]), RegionLabel(str(entry["label"]), float(entry["margin"])))
        )
    return ScenarioLabel(str(payload["family"]), str(payload["case"]), tuple(evidence))
