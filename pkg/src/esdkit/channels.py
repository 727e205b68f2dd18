"""Markovian noise channels: catalog, generators and propagation.

Each channel is a Lindblad generator with no Hamiltonian part,

    d rho / dt = sum_k gamma_k ( L_k rho L_k^dag
                                 - (L_k^dag L_k rho + rho L_k^dag L_k) / 2 ).

Catalog
-------
``IndependentDecay(gamma_a, gamma_b, nbar)``
    Each qubit couples to its own thermal reservoir: lowering jumps at
    rate ``gamma_i (nbar + 1)`` and raising jumps at rate ``gamma_i nbar``.
    Writing ``E_i = exp(-Gamma_i t)`` with ``Gamma_i = gamma_i (2 nbar + 1)``
    and ``q = nbar / (2 nbar + 1)``, each qubit's excited weight relaxes as
    ``p -> E p + q (1 - E)``; the joint populations factor through the two
    single-qubit transfer matrices, and both X coherences shrink by
    ``sqrt(E_A E_B)``.

``IndependentDephasing(kappa_a, kappa_b)``
    Local phase noise, jump ``sigma_z`` on each qubit at rate
    ``kappa_i / 2``.  Populations are frozen; a single-qubit coherence
    decays as ``exp(-kappa_i t)``, so the two-qubit coherences ``w`` and
    ``z`` both decay as ``exp(-(kappa_a + kappa_b) t)``.

``CollectiveDephasing(kappa_c)``
    A single shared reservoir couples to the total inversion, jump
    ``(sigma_z (x) I + I (x) sigma_z) / 2 = diag(1, 0, 0, -1)`` at rate
    ``kappa_c``.  An entry ``rho_jk`` decays as
    ``exp(-kappa_c (lam_j - lam_k)^2 t / 2)`` with ``lam = (1, 0, 0, -1)``,
    so ``w`` decays at rate ``2 kappa_c`` while ``z`` and all populations
    are exactly invariant (the inner levels span a decoherence-free
    subspace).

``CustomChannel(jumps)``
    Explicit list of ``(L, rate)`` pairs.  Supported by the numeric
    propagator only; closed forms and asymptotic sets are unavailable.

The closed forms are exact because each catalog generator maps the X
family to itself with decoupled population and coherence flows; the test
suite cross-checks them against the numeric propagator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .errors import (
    OutOfRangeError,
    ParseError,
    StepTooLargeError,
    UnsupportedChannelError,
    ValidationError,
)
from .states import (
    DEFAULT_TOL,
    DensityMatrix,
    IDENTITY_2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    ToleranceConfig,
    XState,
    _frozen,
    _unchecked_density,
    parse_dense_entries,
)

__all__ = [
    "IndependentDecay",
    "IndependentDephasing",
    "CollectiveDephasing",
    "CustomChannel",
    "ChannelSpec",
    "is_catalog",
    "max_rate",
    "jump_operators",
    "generator",
    "liouvillian",
    "propagate_numeric",
    "propagate_x_closed",
    "x_closed_curves",
    "SinglePoint",
    "XFamily",
    "ExplicitSamples",
    "AsymptoticSet",
    "asymptotic_set",
    "set_contains",
    "thermal_product",
    "parse_channel_literal",
    "format_channel_literal",
]


def _require_rates(pairs: dict[str, float]) -> None:
    for name, value in pairs.items():
        if value < 0.0:
            raise OutOfRangeError(f"rate {name}={value!r} must be nonnegative")
    if max(pairs.values()) <= 0.0:
        raise OutOfRangeError("at least one rate must be positive")


@dataclass(frozen=True)
class IndependentDecay:
    """Local amplitude damping into thermal reservoirs of occupation ``nbar``."""

    gamma_a: float
    gamma_b: float
    nbar: float = 0.0

    def __post_init__(self) -> None:
        _require_rates({"gamma_a": self.gamma_a, "gamma_b": self.gamma_b})
        if self.nbar < 0.0:
            raise OutOfRangeError(f"nbar={self.nbar!r} must be nonnegative")


@dataclass(frozen=True)
class IndependentDephasing:
    """Local phase damping at rates ``kappa_a``, ``kappa_b``."""

    kappa_a: float
    kappa_b: float

    def __post_init__(self) -> None:
        _require_rates({"kappa_a": self.kappa_a, "kappa_b": self.kappa_b})


@dataclass(frozen=True)
class CollectiveDephasing:
    """Shared phase damping of the total inversion at rate ``kappa_c``."""

    kappa_c: float

    def __post_init__(self) -> None:
        _require_rates({"kappa_c": self.kappa_c})


@dataclass(frozen=True, eq=False)
class CustomChannel:
    """Explicit jump list ``((L_1, rate_1), ...)`` with 4x4 operators."""

    jumps: tuple = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.jumps) == 0:
            raise ValidationError("custom channel needs at least one jump operator")
        normalized = []
        top = 0.0
        for idx, (op, rate) in enumerate(self.jumps):
            m = np.asarray(op, dtype=complex)
            if m.shape != (4, 4):
                raise ValidationError(
                    f"jump operator {idx + 1} has shape {m.shape}, expected (4, 4)"
                )
            rate = float(rate)
            if rate < 0.0:
                raise OutOfRangeError(f"jump rate {idx + 1} is negative: {rate!r}")
            top = max(top, rate)
            normalized.append((_frozen(m), rate))
        if top <= 0.0:
            raise OutOfRangeError("at least one jump rate must be positive")
        object.__setattr__(self, "jumps", tuple(normalized))


ChannelSpec = Union[
    IndependentDecay, IndependentDephasing, CollectiveDephasing, CustomChannel
]

_CATALOG = (IndependentDecay, IndependentDephasing, CollectiveDephasing)


def is_catalog(channel: ChannelSpec) -> bool:
    """True for channels with closed-form X dynamics and known asymptotics."""
    return isinstance(channel, _CATALOG)


def jump_operators(channel: ChannelSpec) -> list[tuple[np.ndarray, float]]:
    """The ``(L, rate)`` pairs defining the generator (zero rates dropped)."""
    if isinstance(channel, IndependentDecay):
        pairs = [
            (np.kron(SIGMA_MINUS, IDENTITY_2), channel.gamma_a * (channel.nbar + 1.0)),
            (np.kron(IDENTITY_2, SIGMA_MINUS), channel.gamma_b * (channel.nbar + 1.0)),
            (np.kron(SIGMA_PLUS, IDENTITY_2), channel.gamma_a * channel.nbar),
            (np.kron(IDENTITY_2, SIGMA_PLUS), channel.gamma_b * channel.nbar),
        ]
    elif isinstance(channel, IndependentDephasing):
        pairs = [
            (np.kron(SIGMA_Z, IDENTITY_2), channel.kappa_a / 2.0),
            (np.kron(IDENTITY_2, SIGMA_Z), channel.kappa_b / 2.0),
        ]
    elif isinstance(channel, CollectiveDephasing):
        inversion = 0.5 * (np.kron(SIGMA_Z, IDENTITY_2) + np.kron(IDENTITY_2, SIGMA_Z))
        pairs = [(inversion, channel.kappa_c)]
    elif isinstance(channel, CustomChannel):
        pairs = list(channel.jumps)
    else:
        raise UnsupportedChannelError(f"unknown channel type {type(channel).__name__}")
    return [(op, rate) for op, rate in pairs if rate > 0.0]


def max_rate(channel: ChannelSpec) -> float:
    """Largest jump rate; the natural inverse-time scale of the channel."""
    return max(rate for _, rate in jump_operators(channel))


def generator(channel: ChannelSpec, rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """Apply the Lindblad generator to a state; returns d rho / dt."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    for op, rate in jump_operators(channel):
        anti = op.conj().T @ op
        out += rate * (op @ m @ op.conj().T - 0.5 * (anti @ m + m @ anti))
    return out


def liouvillian(channel: ChannelSpec) -> np.ndarray:
    """16x16 matrix acting on row-major vectorized states.

    Uses ``vec(A X B) = (A kron B^T) vec(X)``, so each jump contributes
    ``rate (L kron conj(L) - (L^dag L kron I + I kron (L^dag L)^T) / 2)``.
    """
    eye = np.eye(4, dtype=complex)
    out = np.zeros((16, 16), dtype=complex)
    for op, rate in jump_operators(channel):
        anti = op.conj().T @ op
        out += rate * (
            np.kron(op, op.conj())
            - 0.5 * (np.kron(anti, eye) + np.kron(eye, anti.T))
        )
    return out


def _rk4_step(lv: np.ndarray, v: np.ndarray, h: float) -> np.ndarray:
    k1 = lv @ v
    k2 = lv @ (v + 0.5 * h * k1)
    k3 = lv @ (v + 0.5 * h * k2)
    k4 = lv @ (v + h * k3)
    return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _split_steps(t: float, dt: float) -> tuple[int, float]:
    """Full-step count and remainder, robust to t/dt roundoff."""
    n_full = int(np.floor(t / dt * (1.0 + 1e-12)))
    rem = t - n_full * dt
    if rem < dt * 1e-9:
        rem = 0.0
    return n_full, rem


def _revalidate(matrix: np.ndarray, tol: ToleranceConfig) -> DensityMatrix:
    """Re-check integrator output; renormalize trace, fail on real damage."""
    m = 0.5 * (matrix + matrix.conj().T)
    trace = float(m.trace().real)
    if abs(trace - 1.0) > tol.eps_trace:
        raise StepTooLargeError(
            f"trace drifted to {trace!r} during integration; reduce dt"
        )
    m = m / trace
    lowest = float(np.linalg.eigvalsh(m)[0])
    if lowest < -tol.eps_psd:
        raise StepTooLargeError(
            f"minimum eigenvalue {lowest:.3e} after integration; reduce dt"
        )
    return _unchecked_density(m)


def propagate_numeric(
    rho0: DensityMatrix,
    channel: ChannelSpec,
    t: float,
    dt: float | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> DensityMatrix:
    """Integrate the master equation to time ``t`` with fixed-step RK4.

    ``dt`` defaults to ``1e-3 / max_rate(channel)``.  The trajectory takes
    ``floor(t / dt)`` full steps plus one shorter remainder step, hitting
    ``t`` exactly.  Output is re-validated: the trace is renormalized when
    within ``eps_trace`` of 1 and positivity is required within
    ``eps_psd``; a failed check raises :class:`StepTooLargeError`.
    """
    if t < 0.0:
        raise ValidationError(f"propagation time t={t!r} must be nonnegative")
    if t == 0.0:
        return rho0
    if dt is None:
        dt = 1e-3 / max_rate(channel)
    if not 0.0 < dt <= t:
        raise ValidationError(f"step dt={dt!r} must satisfy 0 < dt <= t={t!r}")
    lv = liouvillian(channel)
    v = rho0.matrix.reshape(16).astype(complex)
    n_full, rem = _split_steps(t, dt)
    for _ in range(n_full):
        v = _rk4_step(lv, v, dt)
    if rem > 0.0:
        v = _rk4_step(lv, v, rem)
    return _revalidate(v.reshape(4, 4), tol)


def x_closed_curves(x: XState, channel: ChannelSpec, times) -> tuple[np.ndarray, ...]:
    """Closed-form X-state evolution sampled on an array of times.

    Returns arrays ``(a, b, c, d, w, z)`` matching the shape of ``times``
    (populations real, coherences complex).  Exact for catalog channels;
    raises :class:`UnsupportedChannelError` otherwise.
    """
    tau = np.asarray(times, dtype=float)
    if tau.size and float(tau.min()) < 0.0:
        raise ValidationError("times must be nonnegative")
    ones = np.ones_like(tau)
    if isinstance(channel, IndependentDecay):
        scale = 2.0 * channel.nbar + 1.0
        q = channel.nbar / scale
        e_a = np.exp(-channel.gamma_a * scale * tau)
        e_b = np.exp(-channel.gamma_b * scale * tau)
        # single-qubit transfer matrices [[stay, gain], [1-stay, 1-gain]]
        stay_a, gain_a = e_a + q * (1.0 - e_a), q * (1.0 - e_a)
        stay_b, gain_b = e_b + q * (1.0 - e_b), q * (1.0 - e_b)
        # mix A first (rows of [[a, b], [c, d]]), then B (columns)
        m00 = stay_a * x.a + gain_a * x.c
        m01 = stay_a * x.b + gain_a * x.d
        m10 = (1.0 - stay_a) * x.a + (1.0 - gain_a) * x.c
        m11 = (1.0 - stay_a) * x.b + (1.0 - gain_a) * x.d
        a = stay_b * m00 + gain_b * m01
        b = (1.0 - stay_b) * m00 + (1.0 - gain_b) * m01
        c = stay_b * m10 + gain_b * m11
        d = (1.0 - stay_b) * m10 + (1.0 - gain_b) * m11
        shrink = np.sqrt(e_a * e_b)
        return a, b, c, d, x.w * shrink, x.z * shrink
    if isinstance(channel, IndependentDephasing):
        shrink = np.exp(-(channel.kappa_a + channel.kappa_b) * tau)
        return (
            x.a * ones, x.b * ones, x.c * ones, x.d * ones,
            x.w * shrink, x.z * shrink,
        )
    if isinstance(channel, CollectiveDephasing):
        shrink = np.exp(-2.0 * channel.kappa_c * tau)
        return (
            x.a * ones, x.b * ones, x.c * ones, x.d * ones,
            x.w * shrink, x.z * (ones + 0.0j),
        )
    raise UnsupportedChannelError(
        f"no closed form for channel type {type(channel).__name__}"
    )


def propagate_x_closed(x: XState, channel: ChannelSpec, t: float) -> XState:
    """Closed-form X-state propagation to a single time ``t``."""
    if t < 0.0:
        raise ValidationError(f"propagation time t={t!r} must be nonnegative")
    a, b, c, d, w, z = x_closed_curves(x, channel, np.array([t]))
    return XState(float(a[0]), float(b[0]), float(c[0]), float(d[0]),
                  complex(w[0]), complex(z[0]))


@dataclass(frozen=True, eq=False)
class SinglePoint:
    """Asymptotic set containing exactly one state."""

    state: DensityMatrix


@dataclass(frozen=True)
class XFamily:
    """Asymptotic set of all X states with the indicated coherences killed.

    Populations range over the full probability simplex; a coherence that
    is not forced to zero ranges over its positivity disk.
    """

    w_zero: bool
    z_zero: bool


@dataclass(frozen=True, eq=False)
class ExplicitSamples:
    """Asymptotic set given by an explicit tuple of states."""

    states: tuple

    def __post_init__(self) -> None:
        for entry in self.states:
            if not isinstance(entry, DensityMatrix):
                raise ValidationError(
                    f"explicit samples must be DensityMatrix, got {type(entry).__name__}"
                )
        object.__setattr__(self, "states", tuple(self.states))


AsymptoticSet = Union[SinglePoint, XFamily, ExplicitSamples]


def thermal_product(nbar: float) -> DensityMatrix:
    """Product of single-qubit thermal states, excited weight
    ``q = nbar / (2 nbar + 1)`` on each qubit."""
    if nbar < 0.0:
        raise OutOfRangeError(f"nbar={nbar!r} must be nonnegative")
    q = nbar / (2.0 * nbar + 1.0)
    single = np.diag([q, 1.0 - q]).astype(complex)
    return _unchecked_density(np.kron(single, single))


def asymptotic_set(channel: ChannelSpec) -> AsymptoticSet:
    """The set of long-time limits of a catalog channel.

    Decay drives every state to the thermal product (the ground state at
    ``nbar = 0``); independent dephasing leaves exactly the diagonal
    states; collective dephasing leaves the X states with ``w = 0``.
    Channels with a vanishing per-qubit rate leave that qubit untouched,
    so these descriptions do not apply and are refused.
    """
    if isinstance(channel, IndependentDecay):
        if channel.gamma_a <= 0.0 or channel.gamma_b <= 0.0:
            raise UnsupportedChannelError(
                "asymptotic set requires both decay rates positive"
            )
        return SinglePoint(thermal_product(channel.nbar))
    if isinstance(channel, IndependentDephasing):
        if channel.kappa_a <= 0.0 or channel.kappa_b <= 0.0:
            raise UnsupportedChannelError(
                "asymptotic set requires both dephasing rates positive"
            )
        return XFamily(w_zero=True, z_zero=True)
    if isinstance(channel, CollectiveDephasing):
        return XFamily(w_zero=True, z_zero=False)
    raise UnsupportedChannelError(
        f"no asymptotic set for channel type {type(channel).__name__}"
    )


def set_contains(
    aset: AsymptoticSet, rho: DensityMatrix, atol: float = 1e-8
) -> bool:
    """Entrywise membership test with absolute tolerance ``atol``."""
    m = rho.matrix
    if isinstance(aset, SinglePoint):
        return float(np.abs(m - aset.state.matrix).max()) <= atol
    if isinstance(aset, XFamily):
        pattern = np.zeros((4, 4), dtype=bool)
        for i, j in ((0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0), (1, 2), (2, 1)):
            pattern[i, j] = True
        if float(np.abs(np.where(pattern, 0.0, m)).max()) > atol:
            return False
        if aset.w_zero and abs(m[0, 3]) > atol:
            return False
        if aset.z_zero and abs(m[1, 2]) > atol:
            return False
        return True
    if isinstance(aset, ExplicitSamples):
        return any(
            float(np.abs(m - member.matrix).max()) <= atol for member in aset.states
        )
    raise ValidationError(f"unknown asymptotic set type {type(aset).__name__}")


def format_channel_literal(channel: ChannelSpec) -> str:
    """Literal form of a catalog channel (custom channels have no literal)."""
    if isinstance(channel, IndependentDecay):
        return f"decay:{channel.gamma_a!r},{channel.gamma_b!r},{channel.nbar!r}"
    if isinstance(channel, IndependentDephasing):
        return f"dephase:{channel.kappa_a!r},{channel.kappa_b!r}"
    if isinstance(channel, CollectiveDephasing):
        return f"collective:{channel.kappa_c!r}"
    raise UnsupportedChannelError(
        f"no literal form for channel type {type(channel).__name__}"
    )


def _parse_rates(body: str, count: int, what: str) -> list[float]:
    items = body.split(",")
    if len(items) != count:
        raise ParseError(f"{what} literal needs {count} fields, got {len(items)}")
    try:
        return [float(item) for item in items]
    except ValueError:
        raise ParseError(f"{what} literal has a non-numeric field in {body!r}") from None


def _load_custom_channel(path: str) -> CustomChannel:
    """Read a jump list from a JSON file.

    Schema: ``{"jumps": [{"matrix": "dense:<16 re:im pairs>", "rate": r}, ...]}``
    where the matrix uses the dense state-literal entry format (row-major).
    """
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read custom channel file {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"custom channel file {path!r} is not valid JSON: {exc}") from None
    if not isinstance(payload, dict) or "jumps" not in payload:
        raise ParseError(f"custom channel file {path!r} lacks a 'jumps' list")
    jumps = []
    for idx, entry in enumerate(payload["jumps"]):
        if not isinstance(entry, dict) or "matrix" not in entry or "rate" not in entry:
            raise ParseError(
                f"jump {idx + 1} in {path!r} needs 'matrix' and 'rate' fields"
            )
        jumps.append((parse_dense_entries(str(entry["matrix"])), float(entry["rate"])))
    return CustomChannel(tuple(jumps))


def parse_channel_literal(text: str) -> ChannelSpec:
    """Parse a channel literal.

    Forms: ``decay:gamma_a,gamma_b,nbar``, ``dephase:kappa_a,kappa_b``,
    ``collective:kappa_c``, ``custom:<path to JSON jump list>``.
    """
    body = text.strip()
    if body.startswith("decay:"):
        ga, gb, nbar = _parse_rates(body[len("decay:"):], 3, "decay")
        return IndependentDecay(ga, gb, nbar)
    if body.startswith("dephase:"):
        ka, kb = _parse_rates(body[len("dephase:"):], 2, "dephase")
        return IndependentDephasing(ka, kb)
    if body.startswith("collective:"):
        (kc,) = _parse_rates(body[len("collective:"):], 1, "collective")
        return CollectiveDephasing(kc)
    if body.startswith("custom:"):
        return _load_custom_channel(body[len("custom:"):])
    raise ParseError(
        "channel literal must start with 'decay:', 'dephase:', 'collective:' "
        f"or 'custom:', got {body[:16]!r}"
    )
