"""Independent reference implementations used to cross-check the library.

Everything here works directly on raw matrices with deliberately naive
methods (explicit index loops, characteristic polynomials, hand-assembled
superoperators), so agreement with the library routes is evidence rather
than tautology.
"""

import numpy as np

SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
EYE2 = np.eye(2, dtype=complex)
EYE4 = np.eye(4, dtype=complex)


def pt_entrywise(m):
    """Partial transpose on qubit B by explicit index bookkeeping.

    Basis index i encodes qubit A on i // 2 and qubit B on i % 2, with
    level 0 excited.  Entry <j k|out|l n> = <j n|m|l k>.
    """
    out = np.zeros((4, 4), dtype=complex)
    for j in range(2):
        for k in range(2):
            for l in range(2):
                for n in range(2):
                    out[2 * j + k, 2 * l + n] = m[2 * j + n, 2 * l + k]
    return out


def charpoly_eigs(m):
    """Eigenvalues of a Hermitian 4x4 from characteristic-polynomial roots.

    Coefficients come from the Faddeev-LeVerrier recursion, roots from
    the companion matrix (np.roots); for Hermitian input the imaginary
    parts are pure roundoff.
    """
    coeffs = [1.0]
    mk = np.zeros((4, 4), dtype=complex)
    c = 1.0
    for k in range(1, 5):
        mk = m @ (mk + c * EYE4)
        c = -np.trace(mk).real / k
        coeffs.append(c)
    return np.sort(np.roots(coeffs).real)


def decay_jumps(gamma_a, gamma_b, nbar):
    """Jump list for independent amplitude damping at mean occupation nbar."""
    return [
        (np.kron(SIGMA_MINUS, EYE2), gamma_a * (nbar + 1.0)),
        (np.kron(SIGMA_PLUS, EYE2), gamma_a * nbar),
        (np.kron(EYE2, SIGMA_MINUS), gamma_b * (nbar + 1.0)),
        (np.kron(EYE2, SIGMA_PLUS), gamma_b * nbar),
    ]


def dephase_jumps(kappa_a, kappa_b):
    """Jump list for independent phase damping (sigma_z at kappa / 2)."""
    return [
        (np.kron(SIGMA_Z, EYE2), 0.5 * kappa_a),
        (np.kron(EYE2, SIGMA_Z), 0.5 * kappa_b),
    ]


def collective_jumps(kappa_c):
    """Single shared jump: half the total inversion at rate kappa_c."""
    half_total = 0.5 * (np.kron(SIGMA_Z, EYE2) + np.kron(EYE2, SIGMA_Z))
    return [(half_total, kappa_c)]


def lindblad_matrix(jumps):
    """16x16 generator of drho/dt under row-major vectorization."""
    lmat = np.zeros((16, 16), dtype=complex)
    for op, rate in jumps:
        op = np.asarray(op, dtype=complex)
        anti = op.conj().T @ op
        lmat += rate * (
            np.kron(op, op.conj())
            - 0.5 * np.kron(anti, EYE4)
            - 0.5 * np.kron(EYE4, anti.T)
        )
    return lmat


def rk4_evolve(lmat, rho0, t, dt):
    """Classical fixed-step RK4 on vec(rho); rho0 may be a (n, 4, 4) stack."""
    rho0 = np.asarray(rho0, dtype=complex)
    v = rho0.reshape(-1, 16).T
    n_steps = max(1, int(np.ceil(t / dt - 1e-12)))
    for k in range(n_steps):
        h = min(dt, t - k * dt)
        k1 = lmat @ v
        k2 = lmat @ (v + 0.5 * h * k1)
        k3 = lmat @ (v + 0.5 * h * k2)
        k4 = lmat @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return np.ascontiguousarray(v.T).reshape(rho0.shape)


def random_hermitian(rng, scale=1.0):
    """Dense Hermitian 4x4 with independent Gaussian entries."""
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return scale * 0.5 * (g + g.conj().T)


def random_local_unitary(rng):
    """Haar-ish product unitary U_A (x) U_B from Gaussian + QR."""
    blocks = []
    for _ in range(2):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, r = np.linalg.qr(g)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        blocks.append(q)
    return np.kron(blocks[0], blocks[1])
