"""
Single-mode unitaries and two-mode couplings.

Conventions (used everywhere in catgate):
    x = (a + a^dag)/sqrt(2),  p = (a - a^dag)/(i sqrt(2))
    D(alpha) = exp(alpha a^dag - alpha* a)
    S(s) = exp[(s/2)(a^dag^2 - a^2)]          s > 0 squeezes p, stretches x
    beam splitter on ordered pair (i, j):
        a_i^dag -> t a_i^dag + r a_j^dag,   a_j^dag -> t a_j^dag - r a_i^dag
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import expm

from catgate.errors import DimensionError
from catgate.fock.core import ModeOperator, OperatorKind, annihilation

logger = logging.getLogger(__name__)

# Levels added above the cutoff before exponentiating a truncated generator
DEFAULT_PAD = 8


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Amplitude transmittance t and reflectance r on an ordered mode pair"""

    t: float
    r: Optional[float] = None
    modes: tuple = (0, 1)

    def __post_init__(self):
        t = float(self.t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"Beam splitter transmittance must be in [0, 1], got {t}")
        r = float(np.sqrt(max(1.0 - t * t, 0.0))) if self.r is None else float(self.r)
        if abs(t * t + r * r - 1.0) > 1e-12:
            raise ValueError(f"t^2 + r^2 must equal 1, got {t * t + r * r!r}")
        modes = tuple(int(m) for m in self.modes)
        if len(modes) != 2 or modes[0] == modes[1]:
            raise DimensionError(f"Beam splitter needs two distinct modes, got {modes}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "modes", modes)

    @classmethod
    def from_reflectance(cls, reflectance: float, modes=(0, 1)) -> "BeamSplitterSpec":
        """Build from the intensity reflectance r^2"""
        return cls(t=float(np.sqrt(1.0 - reflectance)), r=float(np.sqrt(reflectance)), modes=modes)

    @classmethod
    def from_transmittance(cls, transmittance: float, modes=(0, 1)) -> "BeamSplitterSpec":
        """Build from the intensity transmittance t^2"""
        return cls(t=float(np.sqrt(transmittance)), r=float(np.sqrt(1.0 - transmittance)), modes=modes)


def _padded_expm(generator_fn, D: int, pad: int) -> np.ndarray:
    big = D + max(int(pad), 0)
    a = annihilation(big).matrix
    return expm(generator_fn(a, a.conj().T))[:D, :D]


def displacement(alpha: complex, D: int, pad: int = DEFAULT_PAD) -> ModeOperator:
    """D(alpha), exponentiated on D + pad levels and cropped to D"""
    alpha = complex(alpha)
    mat = _padded_expm(lambda a, ad: alpha * ad - np.conj(alpha) * a, D, pad)
    return ModeOperator(mat, OperatorKind.UNITARY, (D,))


def squeeze(s: float, D: int, pad: int = DEFAULT_PAD) -> ModeOperator:
    """S(s) = exp[(s/2)(a^dag^2 - a^2)], exponentiated on D + pad levels"""
    s = float(s)
    mat = _padded_expm(lambda a, ad: 0.5 * s * (ad @ ad - a @ a), D, pad)
    return ModeOperator(mat, OperatorKind.UNITARY, (D,))


def phase_rotation(phi: float, D: int) -> ModeOperator:
    """exp(i phi n); phi = pi is the parity operator"""
    return ModeOperator(np.diag(np.exp(1j * float(phi) * np.arange(D))), OperatorKind.UNITARY, (D,))


def beam_splitter(spec: BeamSplitterSpec, mode_dims: Sequence[int]) -> ModeOperator:
    """
    Two-mode beam splitter on ``spec.modes`` of a state with ``mode_dims``.

    Built block by block in total photon number N, where the untruncated
    (N+1)-dimensional block is exponentiated exactly; amplitudes that would
    land outside the truncated space are dropped.
    """
    i, j = spec.modes
    if max(i, j) >= len(mode_dims):
        raise DimensionError(f"Beam splitter modes {spec.modes} out of range for {len(mode_dims)} modes")
    di, dj = int(mode_dims[i]), int(mode_dims[j])
    theta = float(np.arctan2(spec.r, spec.t))
    U = np.zeros((di * dj, di * dj), dtype=np.complex128)
    for N in range(di + dj - 1):
        k = np.arange(N + 1)
        gen = np.zeros((N + 1, N + 1))
        # a_i a_j^dag |k, N-k> = sqrt(k (N-k+1)) |k-1, N-k+1>
        gen[k[1:] - 1, k[1:]] = theta * np.sqrt(k[1:] * (N - k[1:] + 1))
        # a_i^dag a_j |k, N-k> = sqrt((k+1)(N-k)) |k+1, N-k-1>
        gen[k[:-1] + 1, k[:-1]] = -theta * np.sqrt((k[:-1] + 1) * (N - k[:-1]))
        block = expm(gen)
        valid = k[(k < di) & (N - k < dj)]
        idx = valid * dj + (N - valid)
        U[np.ix_(idx, idx)] = block[np.ix_(valid, valid)]
    return ModeOperator(U, OperatorKind.UNITARY, (di, dj), (i, j))


def subtraction_operator(t: float, r: float, modes: Sequence[int], mode_dims: Sequence[int]) -> ModeOperator:
    """Non-unitary r a_a + t a_b on modes (a, b)"""
    if abs(t * t + r * r - 1.0) > 1e-12:
        raise ValueError(f"t^2 + r^2 must equal 1, got {t * t + r * r!r}")
    ma, mb = (int(m) for m in modes)
    if max(ma, mb) >= len(mode_dims) or ma == mb:
        raise DimensionError(f"Invalid subtraction modes {tuple(modes)} for {len(mode_dims)} modes")
    da, db = int(mode_dims[ma]), int(mode_dims[mb])
    mat = r * np.kron(annihilation(da).matrix, np.eye(db)) + t * np.kron(np.eye(da), annihilation(db).matrix)
    return ModeOperator(mat, OperatorKind.ANNIHILATION, (da, db), (ma, mb))
