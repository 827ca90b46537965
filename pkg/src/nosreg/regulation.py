"""Output-regulation gain synthesis for decoupled integrator chains.

Per subsystem j the steady-state pair (Pi_j, Gamma_j) solves

    Pi_j S = A_j Pi_j + B_j Gamma_j,      C_j Pi_j = H_j,

the feedback F_j places the chosen poles, the feedforward is
G_j = Gamma_j - F_j Pi_j, and the transient that must not change sign starts
from the nominal initial condition xi0_j - Pi_j w0.  The sign convention
C Pi = H makes e = r - y vanish on the manifold x = Pi w.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .certificates import Certificate, certify
from .chains import ChainSystem, Exosystem, MimoChain, split_state
from .errors import CertificateFailed, DimensionMismatch, NoRegulatorSolution, SingularMatrix
from .linalg import as_matrix, as_vector, kron, lu_solve
from .modal import ModalDecomposition, PoleSet, modal_coeffs, moore_feedback


@dataclass(frozen=True, eq=False)
class SubsystemGains:
    """Design artifacts for one SISO chain: gains, Sylvester pair, poles, certificate."""

    F: np.ndarray
    G: np.ndarray
    Pi: np.ndarray
    Gamma: np.ndarray
    poles: PoleSet
    cert: Certificate
    decomp: ModalDecomposition


@dataclass(frozen=True, eq=False)
class RegulatorGains:
    """Assembled control law v = F xi + G w plus the per-subsystem designs."""

    subsystems: tuple[SubsystemGains, ...]
    F: np.ndarray
    G: np.ndarray

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(s.F.shape[1] for s in self.subsystems)


def solve_sylvester(chain: ChainSystem, exo: Exosystem, H_row) -> tuple[np.ndarray, np.ndarray]:
    """Solve the regulator equations for one chain against the exosystem.

    Stacks the gamma*m + m linear equations in the entries of Pi and Gamma
    (column-major vec, Kronecker identities) and solves them in one shot.

    Returns
    -------
    (Pi, Gamma) : Pi of shape (gamma, m), Gamma of shape (1, m).

    Raises
    ------
    NoRegulatorSolution
        If the stacked system is singular, i.e. an exosystem mode resonates
        with the chain dynamics.
    """
    g = chain.order
    S = exo.S
    m = exo.dim
    H_row = as_matrix(H_row, rows=1, cols=m)
    Ig = np.eye(g)
    Im = np.eye(m)
    # vec(Pi S - A Pi - B Gamma) = 0  and  vec(C Pi) = vec(H_row)
    top = np.hstack([kron(S.T, Ig) - kron(Im, chain.A), -kron(Im, chain.B)])
    bottom = np.hstack([kron(Im, chain.C), np.zeros((m, m))])
    M = np.vstack([top, bottom])
    rhs = np.concatenate([np.zeros(g * m), H_row[0]])
    try:
        z = lu_solve(M, rhs)
    except SingularMatrix as exc:
        raise NoRegulatorSolution(
            f"no (Pi, Gamma) exists for this exosystem: {exc}") from exc
    Pi = z[:g * m].reshape((m, g)).T
    Gamma = z[g * m:].reshape((1, m))
    return Pi, Gamma


def nominal_ic(xi0_j, Pi_j, w0) -> np.ndarray:
    """Offset of the initial condition from the steady-state manifold: xi0 - Pi w0."""
    Pi_j = as_matrix(Pi_j)
    xi0_j = as_vector(xi0_j, length=Pi_j.shape[0])
    w0 = as_vector(w0, length=Pi_j.shape[1])
    return xi0_j - Pi_j @ w0


def design_subsystem(chain: ChainSystem, exo: Exosystem, H_row, xi0_j,
                     poles: PoleSet) -> SubsystemGains:
    """Run the full per-subsystem design: Sylvester, feedback, certificate, feedforward."""
    if poles.n != chain.order:
        raise DimensionMismatch(
            f"need {chain.order} poles for an order-{chain.order} chain, got {poles.n}")
    Pi, Gamma = solve_sylvester(chain, exo, H_row)
    xt0 = nominal_ic(xi0_j, Pi, exo.w0)
    F, _, _ = moore_feedback(poles)
    decomp = modal_coeffs(poles, xt0)
    cert = certify(decomp)
    G = Gamma - F @ Pi
    return SubsystemGains(F=F, G=G, Pi=Pi, Gamma=Gamma, poles=poles,
                          cert=cert, decomp=decomp)


def synthesize(mimo: MimoChain, exo: Exosystem, xi0, pole_sets) -> RegulatorGains:
    """Design nonovershooting regulation gains for every subsystem and assemble them.

    Parameters
    ----------
    mimo : MimoChain
        The decoupled normal-form system.
    exo : Exosystem
        Reference generator; one H row per subsystem output.
    xi0 : array_like, length mimo.order
        Normal-form initial condition, decomposed per subsystem internally.
    pole_sets : sequence of PoleSet
        One pole set per subsystem, sized to its order.

    Raises
    ------
    CertificateFailed
        If any subsystem's certificate rejects its pole set; the exception
        names the subsystem and carries its p-value.
    """
    p = mimo.num_outputs
    if exo.num_outputs != p:
        raise DimensionMismatch(
            f"exosystem generates {exo.num_outputs} references for {p} outputs")
    if len(pole_sets) != p:
        raise DimensionMismatch(f"need {p} pole sets, got {len(pole_sets)}")
    xi_blocks = split_state(xi0, mimo.degrees)

    subs = []
    for j, chain in enumerate(mimo.blocks):
        try:
            sub = design_subsystem(chain, exo, exo.H[j:j + 1], xi_blocks[j],
                                   pole_sets[j])
        except (NoRegulatorSolution, SingularMatrix) as exc:
            raise type(exc)(f"subsystem {j}: {exc}") from exc
        if not sub.cert.passed:
            raise CertificateFailed(j, sub.cert.p_value)
        subs.append(sub)

    gamma = mimo.order
    m = exo.dim
    F = np.zeros((p, gamma))
    G = np.zeros((p, m))
    at = 0
    for j, sub in enumerate(subs):
        g = mimo.degrees[j]
        F[j, at:at + g] = sub.F[0]
        G[j] = sub.G[0]
        at += g
    return RegulatorGains(subsystems=tuple(subs), F=F, G=G)
