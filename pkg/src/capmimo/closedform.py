"""Single-user closed-form optimum and the truncated-SNR diagnostics built
around it. Serves both as a standalone solver for K=1 and as the oracle the
iterative solver is validated against."""

import numpy as np

from .emfield import integrate
from .errors import DegenerateChannelError

_EIG_TIE_REL = 1.0e-12


def gram_matrix(g_samples, grid):
    """M = integrate(G(s) G^H(s)), Hermitian-symmetrized to kill roundoff skew."""
    m = np.einsum("i,iab,icb->ac", grid.weights, g_samples, np.conj(g_samples))
    return 0.5 * (m + m.conj().T)


def top_eigenpair(m):
    """Largest eigenpair of a Hermitian 3x3 with a deterministic eigenvector.

    Ties within 1e-12 relative are broken by the lexicographically largest
    absolute-component tuple; the global phase is fixed so the first
    significant component is real and positive.
    """
    vals, vecs = np.linalg.eigh(m)
    lam = vals[-1]
    candidates = [vecs[:, i] for i in range(vals.size) if vals[i] >= lam - _EIG_TIE_REL * abs(lam)]
    vec = max(candidates, key=lambda v: tuple(np.abs(v)))
    mags = np.abs(vec)
    first = int(np.argmax(mags > 1.0e-12 * mags.max()))
    vec = vec * (np.conj(vec[first]) / mags[first])
    return float(lam), vec / np.linalg.norm(vec)


def single_user_optimum(g_samples, grid, budget):
    """Closed-form K=1 design: combiner, matched pattern, and the optimal SNR.

    Returns (theta, psi, gamma_opt) with psi the unit top-eigenvector of the
    channel Gram matrix, theta(s) = sqrt(P_T) G^H(s) psi normalized to radiate
    exactly P_T, and gamma_opt = (P_T/sigma2) * lambda_max.
    """
    m = gram_matrix(g_samples, grid)
    lam, psi = top_eigenpair(m)
    if lam <= 0.0 or np.real(np.trace(m)) <= 0.0:
        raise DegenerateChannelError("zero channel: no pattern can deliver energy")
    matched = np.einsum("iab,a->ib", np.conj(g_samples), psi)  # G^H(s) psi per point
    norm2 = float(np.real(integrate(np.sum(np.abs(matched) ** 2, axis=-1), grid)))
    theta = np.sqrt(budget.pt_a2 / norm2) * matched
    gamma_opt = (budget.pt_a2 / budget.sigma2) * lam
    return theta, psi, gamma_opt


def truncated_snr(coeffs, omega, sigma2):
    """SNR delivered by a truncated coefficient set: ||sum_n Omega_n w_n||^2 / sigma2."""
    alpha = np.einsum("nab,nb->a", omega, coeffs)
    return float(np.real(np.vdot(alpha, alpha)) / sigma2)


def single_user_coeff_optimum(omega, budget):
    """Band-limited K=1 design computed entirely in the wavenumber domain.

    With M_ref = sum_n Omega_n Omega_n^H, the optimal combiner is its top
    eigenvector, the optimal coefficients are w_n = Omega_n^H psi rescaled to
    spend P_T, and the achievable SNR is (P_T/sigma2) * lambda_max(M_ref).
    Returns (coeffs, psi, gamma_ref).
    """
    m_ref = np.einsum("nab,ncb->ac", omega, np.conj(omega))
    m_ref = 0.5 * (m_ref + m_ref.conj().T)
    lam, psi = top_eigenpair(m_ref)
    if lam <= 0.0:
        raise DegenerateChannelError("band-limited channel carries no energy")
    coeffs = np.einsum("nab,a->nb", np.conj(omega), psi)  # Omega_n^H psi
    norm2 = float(np.sum(np.abs(coeffs) ** 2))
    coeffs = np.sqrt(budget.pt_a2 / norm2) * coeffs
    gamma_ref = (budget.pt_a2 / budget.sigma2) * lam
    return coeffs, psi, gamma_ref


def rate_from_snr(gamma):
    """Spectral efficiency of a single-user link at SNR gamma."""
    return float(np.log2(1.0 + gamma))
