"""Partial transposition, negativity and separability decisions.

For two qubits the positive-partial-transpose test is conclusive: a state
is entangled exactly when its partial transpose has a negative eigenvalue.
On the X family the same decision reduces to comparing each coherence
against the opposite diagonal pair, ``|w|^2 > b c`` or ``|z|^2 > a d``,
because partial transposition swaps the two coherences between the inner
and outer 2x2 blocks.  Positivity of the state itself guarantees at most
one of the two inequalities can hold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitianError
from .states import DEFAULT_TOL, DensityMatrix, ToleranceConfig, XState

__all__ = [
    "LABEL_INTERIOR",
    "LABEL_BOUNDARY",
    "LABEL_ENTANGLED",
    "RegionLabel",
    "XVerdict",
    "partial_transpose",
    "eigenvalues_hermitian",
    "min_pt_eigenvalue",
    "negativity",
    "is_entangled_ppt",
    "x_entangled",
    "classify_position",
]

LABEL_INTERIOR = "interior"
LABEL_BOUNDARY = "boundary"
LABEL_ENTANGLED = "entangled"


@dataclass(frozen=True)
class RegionLabel:
    """Position of a state relative to the separable set.

    ``margin`` is the signed minimum eigenvalue of the partial transpose
    (negative inside the entangled region); ``rank_margin`` is the minimum
    eigenvalue of the state itself, separating full-rank interior points
    from the boundary of the state space.
    """

    label: str
    margin: float
    rank_margin: float | None = None


@dataclass(frozen=True)
class XVerdict:
    """Outcome of the X-state entanglement criterion.

    ``w_margin = |w|^2 - b c`` and ``z_margin = |z|^2 - a d``; the state is
    entangled when either exceeds the decision band, and ``active_block``
    names the coherence responsible (``"w-block"`` or ``"z-block"``).
    """

    entangled: bool
    active_block: str | None
    w_margin: float
    z_margin: float


def partial_transpose(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """Transpose the second qubit's indices.

    A pure entry permutation: with composite indices ``(jA, jB), (kA, kB)``
    the output entry is the input at ``(jA, kB), (kA, jB)``.  Exact,
    involutive, trace- and Hermiticity-preserving.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    return np.ascontiguousarray(
        m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    )


def _partial_transpose_many(stack: np.ndarray) -> np.ndarray:
    """Batched partial transpose over the leading axis of an (n, 4, 4) stack."""
    return np.ascontiguousarray(
        stack.reshape(-1, 2, 2, 2, 2).transpose(0, 1, 4, 3, 2).reshape(-1, 4, 4)
    )


def eigenvalues_hermitian(
    matrix: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    The input is checked against ``eps_psd`` Hermiticity slack and exactly
    symmetrized before diagonalization.
    """
    m = np.asarray(matrix, dtype=complex)
    asym = float(np.abs(m - m.conj().T).max())
    if asym > tol.eps_psd:
        raise NotHermitianError(
            f"matrix deviates from Hermiticity by {asym:.3e} (> {tol.eps_psd:.1e})"
        )
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def min_pt_eigenvalue(rho: DensityMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Minimum eigenvalue of the partial transpose (the signed margin)."""
    return float(eigenvalues_hermitian(partial_transpose(rho), tol)[0])


def negativity(rho: DensityMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Sum of the magnitudes of negative partial-transpose eigenvalues.

    Zero exactly when the state is separable; for two qubits at most one
    eigenvalue can be negative, so this equals ``max(0, -margin)``.
    """
    evals = eigenvalues_hermitian(partial_transpose(rho), tol)
    return float(np.abs(evals[evals < 0.0]).sum())


def is_entangled_ppt(rho: DensityMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Entanglement decision for dense states: margin below ``-eps_ent``."""
    return min_pt_eigenvalue(rho, tol) < -tol.eps_ent


def x_entangled(x: XState, tol: ToleranceConfig = DEFAULT_TOL) -> XVerdict:
    """Entanglement decision on X-state parameters, without diagonalization."""
    w_margin = abs(x.w) ** 2 - x.b * x.c
    z_margin = abs(x.z) ** 2 - x.a * x.d
    w_active = w_margin > tol.eps_ent
    z_active = z_margin > tol.eps_ent
    # valid states cannot violate both bounds at once
    assert not (w_active and z_active), (
        f"both margins positive (w: {w_margin:.3e}, z: {z_margin:.3e}); "
        "state violates positivity"
    )
    if w_active:
        return XVerdict(True, "w-block", w_margin, z_margin)
    if z_active:
        return XVerdict(True, "z-block", w_margin, z_margin)
    return XVerdict(False, None, w_margin, z_margin)


def classify_position(
    rho: DensityMatrix, tol: ToleranceConfig = DEFAULT_TOL
) -> RegionLabel:
    """Locate a state relative to the separable region.

    ``entangled`` when the margin is below ``-eps_ent``; ``interior`` when
    both the margin and the state's own minimum eigenvalue exceed
    ``eps_ent`` (a full-rank separable point); ``boundary`` otherwise.
    """
    margin = min_pt_eigenvalue(rho, tol)
    rank_margin = float(eigenvalues_hermitian(rho.matrix, tol)[0])
    if margin < -tol.eps_ent:
        label = LABEL_ENTANGLED
    elif margin > tol.eps_ent and rank_margin > tol.eps_ent:
        label = LABEL_INTERIOR
    else:
        label = LABEL_BOUNDARY
    return RegionLabel(label, margin, rank_margin)
