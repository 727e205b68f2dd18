"""The four-scenario geometry of dying entanglement.

Where a channel's long-time limit set sits relative to the separable
states predicts how entanglement can end:

    i    single separable interior point   — death always sudden
    ii   single separable boundary point   — sudden or asymptotic death
    iii  entangled asymptote               — sudden *birth* possible
    iv   mixed multi-state set             — any of the above, by member

The classifier decides by probing concrete members of the asymptotic set
and placing each one with the PT-eigenvalue margin.
"""

import json

from esdkit import (
    CollectiveDephasing,
    ExplicitSamples,
    IndependentDecay,
    IndependentDephasing,
    SinglePoint,
    bell,
    classify_channel,
    classify_set,
    embed_x,
    scenario_to_json,
)

# --- the catalog ------------------------------------------------------------

catalog = (
    ("decay, T = 0      ", IndependentDecay(1.0, 1.0, nbar=0.0)),
    ("decay, nbar = 0.5 ", IndependentDecay(1.0, 1.0, nbar=0.5)),
    ("local dephasing   ", IndependentDephasing(1.0, 1.0)),
    ("collective        ", CollectiveDephasing(1.0)),
)
for name, channel in catalog:
    label = classify_channel(channel)
    counts = {}
    for ev in label.evidence:
        counts[ev.region.label] = counts.get(ev.region.label, 0) + 1
    print(f"{name} -> {label.family}/{label.case:3s}  members: {counts}")

# --- scenario iii needs an entangled attractor ------------------------------
# No catalog channel provides one, but a hypothetical reservoir pumping
# into phi+ is classified the same way as any other set.

synthetic = classify_set(SinglePoint(embed_x(bell("phi+"))))
print(f"\nphi+ attractor       -> {synthetic.family}/{synthetic.case}"
      "  (sudden birth territory)")

# --- explicit sample sets work too ------------------------------------------

pair = classify_set(
    ExplicitSamples((embed_x(bell("psi+")), embed_x(bell("phi-"))))
)
print(f"two Bell points      -> {pair.family}/{pair.case}")

# --- the JSON evidence is what the CLI emits --------------------------------

payload = json.loads(scenario_to_json(synthetic))
print("\nCLI-style record:", json.dumps(payload, indent=2)[:220], "...")
