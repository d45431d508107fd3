"""Single V-configuration atom decaying into its own vacuum reservoir.

Basis order is (|1>, |2>, |3>): two near-degenerate excited levels and
the shared ground level. Levels |1> and |3> form the qubit; |2> is the
umbrella level whose decay channel interferes with the qubit transition.
Rates follow the half-rate convention (a bare excited population decays
at 2*gamma_k):

    gamma_1 = gamma,  gamma_2 = eta**2 * gamma,  gamma_12 = p * eta * gamma,

where eta >= 0 is the dipole-strength ratio of the two transitions and
p in [0, 1] scales the interference cross-damping. p = 1 is maximal
vacuum-induced coherence, p = 0 switches interference off while keeping
the level structure intact (gamma_12 ** 2 <= gamma_1 * gamma_2 holds for
all p, so the generator stays completely positive).

At p = 1 the dissipator collapses to a single decay channel: the bright
superposition (|1> + eta|2>)/sqrt(1 + eta^2) loses population at
2*gamma*(1 + eta^2) while the orthogonal dark superposition
(eta|1> - |2>)/sqrt(1 + eta^2) is fully decoupled and traps population.
That decomposition yields the closed-form propagator used as the fast
path and as one corner of the three-way propagator cross-check
(closed form / matrix exponential / RK4).

Density matrices are plain complex 3x3 ndarrays; Liouvillians act on
row-major vectorized matrices (see qlinalg).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qlinalg import dagger, expm, hermitize, tensor_product, unvec, vec

EXCITED, UMBRELLA, GROUND = 0, 1, 2

# Default RK4 step: DEFAULT_STEP_SCALE / (gamma * (1 + eta^2)). Keeps the
# accumulated local error far below the 1e-8 cross-validation budget.
DEFAULT_STEP_SCALE = 1e-3
# Steady-state doubling check starts at STEADY_HORIZON_SCALE / (gamma * (1 + eta^2)).
STEADY_HORIZON_SCALE = 100.0
STEADY_TOL = 1e-12


class StepTooLarge(ValueError):
    """Requested integration step violates the RK4 stability guard."""


class UnsupportedParams(ValueError):
    """Parameters outside the validity domain of a closed-form fast path."""


class NoConvergence(ValueError):
    """Time-doubling steady-state search failed to converge."""


@dataclass(frozen=True)
class VParams:
    """Physical parameters of one V-system atom.

    gamma is the decay half-rate of the qubit transition (population
    decays at 2*gamma), eta the dipole ratio of umbrella to qubit
    transition, p the interference factor, omega1/omega2 the transition
    frequencies (equal and zero in the default rotating frame).
    """

    gamma: float = 1.0
    eta: float = 1.0
    p: float = 1.0
    omega1: float = 0.0
    omega2: float = 0.0

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    @property
    def gamma1(self) -> float:
        return self.gamma

    @property
    def gamma2(self) -> float:
        return self.eta**2 * self.gamma

    @property
    def gamma12(self) -> float:
        return self.p * self.eta * self.gamma

    @property
    def bright_rate(self) -> float:
        """Coherence decay rate gamma*(1 + eta^2) of the bright channel."""
        return self.gamma * (1.0 + self.eta**2)


def matrix_unit(i: int, j: int, dim: int = 3) -> np.ndarray:
    """Operator |i><j| as a dense matrix."""
    m = np.zeros((dim, dim), dtype=complex)
    m[i, j] = 1.0
    return m


def basis_ket(i: int, dim: int = 3) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[i] = 1.0
    return v


def pure_state(ket: np.ndarray) -> np.ndarray:
    """Density matrix |ket><ket| (input need not be normalized)."""
    ket = np.asarray(ket, dtype=complex)
    rho = np.outer(ket, ket.conj())
    return rho / np.trace(rho).real


def excited_state() -> np.ndarray:
    return pure_state(basis_ket(EXCITED))


def ground_state() -> np.ndarray:
    return pure_state(basis_ket(GROUND))


def superposition_state() -> np.ndarray:
    """(|1> + |3>)/sqrt(2) as a density matrix."""
    return pure_state(basis_ket(EXCITED) + basis_ket(GROUND))


def dark_vector(eta: float) -> np.ndarray:
    """Decay-free superposition (eta|1> - |2>)/sqrt(1 + eta^2)."""
    return np.array([eta, -1.0, 0.0], dtype=complex) / math.sqrt(1.0 + eta**2)


def bright_vector(eta: float) -> np.ndarray:
    """Decaying superposition (|1> + eta|2>)/sqrt(1 + eta^2)."""
    return np.array([1.0, eta, 0.0], dtype=complex) / math.sqrt(1.0 + eta**2)


def hamiltonian(params: VParams) -> np.ndarray:
    """Free Hamiltonian omega1|1><1| + omega2|2><2| (ground level at zero)."""
    return np.diag([params.omega1, params.omega2, 0.0]).astype(complex)


def decay_terms(params: VParams) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """Dissipator terms as (rate, J, K) with action rate*(2 J rho K^+ - {K^+ J, rho}).

    Diagonal terms carry the two spontaneous channels, the two cross
    terms the interference damping gamma_12.
    """
    a31 = matrix_unit(GROUND, EXCITED)
    a32 = matrix_unit(GROUND, UMBRELLA)
    return [
        (params.gamma1, a31, a31),
        (params.gamma2, a32, a32),
        (params.gamma12, a31, a32),
        (params.gamma12, a32, a31),
    ]


def lindblad_superoperator(
    ham: np.ndarray, terms: list[tuple[float, np.ndarray, np.ndarray]]
) -> np.ndarray:
    """Liouvillian matrix L with vec(rho') = L @ vec(rho), row-major vec."""
    dim = ham.shape[0]
    eye = np.eye(dim, dtype=complex)
    liou = -1j * (tensor_product(ham, eye) - tensor_product(eye, ham.T))
    for rate, jump, partner in terms:
        kj = dagger(partner) @ jump
        liou += rate * (
            2.0 * tensor_product(jump, partner.conj())
            - tensor_product(kj, eye)
            - tensor_product(eye, kj.T)
        )
    return liou


def build_liouvillian(params: VParams) -> np.ndarray:
    """9x9 generator of the single-atom master equation."""
    return lindblad_superoperator(hamiltonian(params), decay_terms(params))


def default_step(params: VParams) -> float:
    return DEFAULT_STEP_SCALE / params.bright_rate


def rk4_evolve(liou: np.ndarray, rho0: np.ndarray, t: float, dt: float) -> np.ndarray:
    """Classical fixed-step RK4 for vec(rho)' = L vec(rho).

    The state is re-Hermitized after every step; trace is preserved by
    construction since the trace functional annihilates L.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    rho0 = np.asarray(rho0, dtype=complex)
    if t == 0:
        return rho0.copy()
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt * np.linalg.norm(liou, 2) > 0.5:
        raise StepTooLarge(f"dt*|L| = {dt * np.linalg.norm(liou, 2):.3e} exceeds 0.5")
    dim = rho0.shape[0]
    steps = max(1, math.ceil(t / dt))
    h = t / steps
    x = rho0.reshape(-1).copy()
    for _ in range(steps):
        k1 = liou @ x
        k2 = liou @ (x + 0.5 * h * k1)
        k3 = liou @ (x + 0.5 * h * k2)
        k4 = liou @ (x + h * k3)
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = x.reshape(dim, dim)
        x = hermitize(rho).reshape(-1)
    return x.reshape(dim, dim)


def propagate_rk4(
    params: VParams, rho0: np.ndarray, t: float, dt: float | None = None
) -> np.ndarray:
    """Evolve a 3x3 state for time t by fixed-step RK4."""
    if dt is None:
        dt = default_step(params)
    return rk4_evolve(build_liouvillian(params), rho0, t, dt)


def propagate_spectral(params: VParams, rho0: np.ndarray, t: float) -> np.ndarray:
    """Evolve a 3x3 state for time t via the exponentiated Liouvillian."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    prop = expm(build_liouvillian(params) * t)
    return hermitize(unvec(prop @ vec(rho0), 3))


def _bare_from_channel_basis(eta: float) -> np.ndarray:
    """Unitary with columns (bright, dark, ground) in the bare basis."""
    u = np.zeros((3, 3), dtype=complex)
    u[:, 0] = bright_vector(eta)
    u[:, 1] = dark_vector(eta)
    u[:, 2] = basis_ket(GROUND)
    return u


def _channel_from_survival(eta: float, x: float, phase: complex) -> np.ndarray:
    """Assemble the 9x9 propagator from bright survival x = exp(-Gamma t).

    In the (bright, dark, ground) basis the action is diagonal except for
    the population routed from bright to ground; ``phase`` carries the
    free rotation exp(-i omega t) of excited-ground coherences.
    """
    s = np.zeros((9, 9), dtype=complex)
    factors = {
        (0, 0): x * x,                 # bright population
        (0, 1): x, (1, 0): x,          # bright-dark coherences
        (0, 2): x * phase, (2, 0): x * np.conj(phase),
        (1, 1): 1.0,                   # dark population is trapped
        (1, 2): phase, (2, 1): np.conj(phase),
        (2, 2): 1.0,
    }
    for (i, j), c in factors.items():
        s[3 * i + j, 3 * i + j] = c
    s[8, 0] = 1.0 - x * x              # lost bright population lands on ground
    u = _bare_from_channel_basis(eta)
    return tensor_product(u, u.conj()) @ s @ tensor_product(dagger(u), u.T)


def dark_bright_channel(params: VParams, t: float) -> np.ndarray:
    """Closed-form 9x9 propagator for maximal interference.

    Valid only for p = 1 with degenerate transition frequencies; raises
    UnsupportedParams otherwise. Trace-preserving and completely
    positive by construction.
    """
    if params.p != 1.0:
        raise UnsupportedParams(f"closed-form channel requires p = 1, got p = {params.p}")
    if params.omega1 != params.omega2:
        raise UnsupportedParams(
            "closed-form channel requires degenerate transition frequencies"
        )
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    x = math.exp(-params.bright_rate * t)
    phase = np.exp(-1j * params.omega1 * t)
    return _channel_from_survival(params.eta, x, phase)


def propagate_channel(params: VParams, t: float) -> np.ndarray:
    """9x9 propagator vec(rho0) -> vec(rho(t)).

    Uses the closed-form dark/bright decomposition when it applies
    (p = 1, degenerate frequencies) and falls back to the exponentiated
    Liouvillian otherwise.
    """
    if params.p == 1.0 and params.omega1 == params.omega2:
        return dark_bright_channel(params, t)
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return expm(build_liouvillian(params) * t)


def apply_channel(channel: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply a vectorized propagator to a density matrix."""
    dim = rho.shape[0]
    return hermitize(unvec(channel @ vec(rho), dim))


def steady_channel(params: VParams) -> np.ndarray:
    """Infinite-time limit of the propagator.

    For p = 1 this is the analytic dark-state projection (a surviving
    dark-ground coherence is reported at its rotating-frame value). For
    p < 1 the limit is taken by exponentiating to a large horizon with a
    time-doubling convergence check.
    """
    if params.p == 1.0:
        return _channel_from_survival(params.eta, 0.0, 1.0)
    horizon = STEADY_HORIZON_SCALE / params.bright_rate
    s1 = expm(build_liouvillian(params) * horizon)
    s2 = s1 @ s1
    if np.max(np.abs(s2 - s1)) > STEADY_TOL:
        raise NoConvergence(
            f"propagator not stationary after t = {horizon:.3e}; "
            "a non-decaying component survives"
        )
    return s2


def steady_state(params: VParams, rho0: np.ndarray) -> np.ndarray:
    """Long-time limit of rho0 under the master equation.

    p = 1: the dark-state population <D|rho0|D> and the dark-ground
    coherence survive, everything else ends on the ground level.
    p < 1: computed from the propagator at a large horizon, with a
    doubling check (raises NoConvergence if rho(T) != rho(2T)).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if params.p == 1.0:
        d = dark_vector(params.eta)
        g = basis_ket(GROUND)
        pop_dark = complex(d.conj() @ rho0 @ d).real
        coh = complex(d.conj() @ rho0 @ g)
        out = pop_dark * np.outer(d, d.conj())
        out += coh * np.outer(d, g.conj())
        out += np.conj(coh) * np.outer(g, d.conj())
        out += (np.trace(rho0).real - pop_dark) * np.outer(g, g.conj())
        return out
    horizon = STEADY_HORIZON_SCALE / params.bright_rate
    prop = expm(build_liouvillian(params) * horizon)
    r1 = prop @ vec(rho0)
    r2 = prop @ r1
    if np.max(np.abs(r2 - r1)) > STEADY_TOL:
        raise NoConvergence(
            f"state not stationary after t = {horizon:.3e}; "
            "a non-decaying component survives"
        )
    return hermitize(unvec(r2, 3))


def alpha_beta(rho0: np.ndarray) -> tuple[float, float]:
    """Symmetric/antisymmetric excited-population weights of the closed forms.

    alpha + beta equals the initial total excited population.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    alpha = 0.5 * (rho0[0, 0] + rho0[1, 1] + rho0[0, 1] + rho0[1, 0]).real
    beta = 0.5 * (rho0[0, 0] + rho0[1, 1] - rho0[0, 1] - rho0[1, 0]).real
    return alpha, beta


class PublishedSingleAtom(NamedTuple):
    """The three single-atom matrix elements given in closed form."""

    rho11: float
    rho33: float
    rho13: complex


def published_single_atom(params: VParams, rho0: np.ndarray, t: float) -> PublishedSingleAtom:
    """Evaluate the published single-atom closed forms verbatim.

    Transcription-faithful: the expressions are reproduced exactly as
    printed for the maximal-interference, degenerate case, with no
    correction applied. They close on the master equation only at
    eta = 1; deviations elsewhere are surfaced by the compare tooling,
    never hidden.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    eta2 = params.eta**2
    x = math.exp(-params.bright_rate * t)
    x2 = x * x
    al, be = alpha_beta(rho0)
    rho11 = (
        0.5 * x * (rho0[0, 0] - rho0[1, 1]).real
        + 0.5 * (2.0 / (1.0 + eta2) * x2 - (1.0 - eta2) / (1.0 + eta2) * x) * al
        + 0.5 * (2.0 * eta2 / (1.0 + eta2) - (1.0 - eta2) / (1.0 + eta2) * x) * be
    )
    rho33 = 1.0 - x2 * al - be
    rho13 = ((eta2 + x) * rho0[0, 2] - params.eta * (1.0 - x) * rho0[1, 2]) / (1.0 + eta2)
    return PublishedSingleAtom(float(rho11), float(rho33), complex(rho13))


def published_rho11_infinity(params: VParams, rho0: np.ndarray) -> float:
    """Long-time limit of the published excited population, eta^2/(1+eta^2) * beta."""
    _, be = alpha_beta(rho0)
    return params.eta**2 / (1.0 + params.eta**2) * be
