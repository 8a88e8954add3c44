"""Noisy two-qubit initial states and the single-mode Unruh acceleration channel.

The model: two qubits start in a noisy mixture built around the partially
entangled ket ``sqrt(1-x^2)|01> + x|10>``, the second qubit is uniformly
accelerated, and the acceleration acts as a channel parametrized by
``r = arctan(exp(-pi*omega*c/a))`` with ``0 <= r <= pi/4``.  In the fermionic
single-mode treatment the accelerated qubit's ``|0>`` populates a pair of
Rindler-wedge modes (``cos r``/``sin r`` split) while ``|1>`` is unaffected;
tracing out the causally disconnected wedge leaves a simple two-Kraus map on
the accelerated qubit.

Both routes to the final state are provided: the generic channel applied to a
constructed initial state, and closed-form assembled states whose
coefficients were simplified by hand.  They must agree to 1e-12 entrywise,
and the verification harness checks exactly that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .qlinalg import HERMITICITY_TOL, hermitian_defect

# Physical upper bound of the acceleration parameter (infinite acceleration).
RINDLER_R_MAX = math.pi / 4

# Basis order |00>, |01>, |10>, |11> everywhere in this package.
KET_00, KET_01, KET_10, KET_11 = 0, 1, 2, 3


class Channel(str, Enum):
    """Which noise is mixed into the initial state."""

    WHITE = "white"
    COLOR = "color"
    WHITE_COLOR = "whitecolor"


@dataclass(frozen=True)
class ModelParams:
    """Scalar knobs indexing one state of the model.

    x : amplitude of the initial ket (0 and 1 are product states, 1/sqrt(2)
        is maximally entangled)
    p : white-noise strength
    q : color-noise strength
    r : acceleration parameter, radians
    """

    x: float
    p: float = 0.0
    q: float = 0.0
    r: float = 0.0
    channel: Channel = Channel.WHITE

    def validate(self, r_max: float = RINDLER_R_MAX) -> None:
        """Raise ``DomainError`` unless every field is inside its domain.

        ``r_max`` widens the acceleration bound; figure presets use it to
        honor printed curves drawn slightly past pi/4.
        """
        if not 0.0 <= self.x <= 1.0:
            raise DomainError(f"x={self.x} outside [0, 1]")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p={self.p} outside [0, 1]")
        if not 0.0 <= self.q <= 1.0:
            raise DomainError(f"q={self.q} outside [0, 1]")
        if self.channel is Channel.WHITE_COLOR and self.p + self.q > 1.0 + 1e-12:
            raise DomainError(f"p+q={self.p + self.q} exceeds 1 for the combined channel")
        if not 0.0 <= self.r <= r_max + 1e-12:
            raise DomainError(f"r={self.r} outside [0, {r_max}]")

    @property
    def strength(self) -> float:
        """The channel's own noise strength (p for white, q for color)."""
        return self.q if self.channel is Channel.COLOR else self.p


@dataclass(frozen=True)
class WhiteCoeffs:
    """Populations/coherence coefficients of the accelerated white-noise state."""

    alpha: float
    beta: float
    gamma: float
    epsilon: float


@dataclass(frozen=True)
class ColorCoeffs:
    """Populations/coherence coefficients of the accelerated color-noise state."""

    alpha_c: float
    beta_c: float
    epsilon_c: float


def phi_ket(x: float) -> np.ndarray:
    """The initial ket sqrt(1-x^2)|01> + x|10> as a length-4 amplitude vector."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")
    v = np.zeros(4, dtype=complex)
    v[KET_01] = math.sqrt(1.0 - x * x)
    v[KET_10] = x
    return v


def initial_state(params: ModelParams) -> np.ndarray:
    """Noisy initial two-qubit density matrix before acceleration.

    White noise mixes toward the maximally mixed state; color noise mixes
    toward the classical equal mixture of |01> and |10| (the only reading of
    the color branch that is a valid density operator).  The combined channel
    spends strength p on white noise, q on color noise, and leaves the
    remaining 1-p-q as the entangled projector's complement budget:
    ``p*P_phi + (q/2)(|01><01| + |10><10|) + ((1-p-q)/4) I``.
    """
    params.validate()
    ket = phi_ket(params.x)
    proj = np.outer(ket, ket.conj())
    flip_mix = np.zeros((4, 4), dtype=complex)
    flip_mix[KET_01, KET_01] = flip_mix[KET_10, KET_10] = 0.5
    eye4 = np.eye(4, dtype=complex)
    if params.channel is Channel.WHITE:
        return params.p * proj + (1.0 - params.p) / 4.0 * eye4
    if params.channel is Channel.COLOR:
        return params.q * proj + (1.0 - params.q) * flip_mix
    return (
        params.p * proj
        + params.q * flip_mix
        + (1.0 - params.p - params.q) / 4.0 * eye4
    )


def unruh_second_qubit(rho: np.ndarray, r: float, r_max: float = RINDLER_R_MAX) -> np.ndarray:
    """Accelerate the second qubit and trace out the hidden Rindler wedge.

    Acting on the second qubit only: |0> -> cos r |0>|0_II> + sin r |1>|1_II>,
    |1> -> |1>|0_II>; discarding the wedge modes leaves the Kraus pair
    K0 = diag(cos r, 1), K1 = sin r |1><0|.  The map is linear, trace
    preserving and completely positive.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError(f"rho must be 4x4, got {rho.shape}")
    if hermitian_defect(rho) > HERMITICITY_TOL:
        raise DomainError("rho is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > 1e-9:
        raise DomainError("rho does not have unit trace")
    if not 0.0 <= r <= r_max + 1e-12:
        raise DomainError(f"r={r} outside [0, {r_max}]")
    k0 = np.kron(np.eye(2), np.diag([math.cos(r), 1.0])).astype(complex)
    k1 = np.kron(np.eye(2), np.array([[0.0, 0.0], [math.sin(r), 0.0]])).astype(complex)
    return k0 @ rho @ k0.conj().T + k1 @ rho @ k1.conj().T


def white_coeffs(x: float, p: float) -> WhiteCoeffs:
    """Hand-simplified coefficients of the accelerated white-noise state.

    alpha + beta + 2*gamma = 1, which is exactly the unit-trace condition of
    the assembled matrix.
    """
    return WhiteCoeffs(
        alpha=(1.0 + p * (3.0 - 4.0 * x * x)) / 4.0,
        beta=(1.0 - p * (1.0 - 4.0 * x * x)) / 4.0,
        gamma=(1.0 - p) / 4.0,
        epsilon=p * x * math.sqrt(1.0 - x * x),
    )


def color_coeffs(x: float, q: float) -> ColorCoeffs:
    """Hand-simplified coefficients of the accelerated color-noise state.

    The color strength is q throughout; alpha_c + beta_c = 1.
    """
    return ColorCoeffs(
        alpha_c=(1.0 + q * (1.0 - 2.0 * x * x)) / 2.0,
        beta_c=(1.0 - q * (1.0 - 2.0 * x * x)) / 2.0,
        epsilon_c=q * x * math.sqrt(1.0 - x * x),
    )


def _white_state(x: float, p: float, r: float) -> np.ndarray:
    # No domain checks: finite-difference stencils probe slightly outside.
    c = white_coeffs(x, p)
    cr = math.cos(r)
    c2, s2 = cr * cr, math.sin(r) ** 2
    m = np.zeros((4, 4), dtype=complex)
    m[KET_00, KET_00] = c.gamma * c2
    m[KET_01, KET_01] = c.alpha + c.gamma * s2
    m[KET_10, KET_10] = c.beta * c2
    m[KET_11, KET_11] = c.beta * s2 + c.gamma
    m[KET_01, KET_10] = m[KET_10, KET_01] = c.epsilon * cr
    return m


def _color_state(x: float, q: float, r: float) -> np.ndarray:
    c = color_coeffs(x, q)
    cr = math.cos(r)
    c2, s2 = cr * cr, math.sin(r) ** 2
    m = np.zeros((4, 4), dtype=complex)
    m[KET_01, KET_01] = c.alpha_c
    m[KET_10, KET_10] = c.beta_c * c2
    m[KET_11, KET_11] = c.beta_c * s2
    m[KET_01, KET_10] = m[KET_10, KET_01] = c.epsilon_c * cr
    return m


def _whitecolor_state(x: float, p: float, q: float, r: float) -> np.ndarray:
    # Linear combination of the channel images of the three mixture parts.
    g = (1.0 - p - q) / 4.0
    b = p * x * x + q / 2.0 + g
    cr = math.cos(r)
    c2, s2 = cr * cr, math.sin(r) ** 2
    m = np.zeros((4, 4), dtype=complex)
    m[KET_00, KET_00] = g * c2
    m[KET_01, KET_01] = p * (1.0 - x * x) + q / 2.0 + g * (1.0 + s2)
    m[KET_10, KET_10] = b * c2
    m[KET_11, KET_11] = b * s2 + g
    m[KET_01, KET_10] = m[KET_10, KET_01] = p * x * math.sqrt(1.0 - x * x) * cr
    return m


def accelerated_white(x: float, p: float, r: float, r_max: float = RINDLER_R_MAX) -> np.ndarray:
    """Closed-form accelerated white-noise state.

    Entrywise equal (to 1e-12) to ``unruh_second_qubit(initial_state(...))``
    with the matching white-channel parameters.
    """
    ModelParams(x=x, p=p, r=r, channel=Channel.WHITE).validate(r_max)
    return _white_state(x, p, r)


def accelerated_color(x: float, q: float, r: float, r_max: float = RINDLER_R_MAX) -> np.ndarray:
    """Closed-form accelerated color-noise state (strength q)."""
    ModelParams(x=x, q=q, r=r, channel=Channel.COLOR).validate(r_max)
    return _color_state(x, q, r)


def accelerated_whitecolor(
    x: float, p: float, q: float, r: float, r_max: float = RINDLER_R_MAX
) -> np.ndarray:
    """Accelerated combined white+color state.

    No independent closed form exists for this channel; the state is the
    channel image of the combined initial mixture.  It reduces entrywise to
    the white state at q=0 and to the color state at p=0.
    """
    ModelParams(x=x, p=p, q=q, r=r, channel=Channel.WHITE_COLOR).validate(r_max)
    return _whitecolor_state(x, p, q, r)


def accelerated_state(params: ModelParams, r_max: float = RINDLER_R_MAX) -> np.ndarray:
    """Closed accelerated state for whichever channel ``params`` selects."""
    if params.channel is Channel.WHITE:
        return accelerated_white(params.x, params.p, params.r, r_max)
    if params.channel is Channel.COLOR:
        return accelerated_color(params.x, params.q, params.r, r_max)
    return accelerated_whitecolor(params.x, params.p, params.q, params.r, r_max)


def r_from_acceleration(acceleration: float, omega_c: float) -> float:
    """Map a proper acceleration to the channel parameter r.

    ``tan r = exp(-pi * omega_c / acceleration)`` where ``omega_c`` bundles
    the mode frequency and the speed of light; r runs from 0 (no
    acceleration) to pi/4 (infinite acceleration).
    """
    if acceleration <= 0.0:
        raise DomainError(f"acceleration must be positive, got {acceleration}")
    if omega_c <= 0.0:
        raise DomainError(f"omega_c must be positive, got {omega_c}")
    return math.atan(math.exp(-math.pi * omega_c / acceleration))
