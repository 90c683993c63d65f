"""
Constructors for the states of the gate: coherent states, coherent-state
qubits, even/odd cats, squeezed vacuum, squeezed single photon and the
squeezed thermal resource.

Every constructor checks the truncation leakage of the *untruncated* state,
i.e. the population it would put on Fock levels >= D-2, and raises
TruncationError above ``tol``. Returned kets are renormalized over the cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from catgate.errors import TruncationError
from catgate.fock.core import LEAKAGE_TOL, DensityOperator, FockKet, basis_ket
from catgate.optics.ops import squeeze

# Extra levels used when squeezing a thermal state before cropping
THERMAL_WORK_PAD = 32


def db_to_s(db: float) -> float:
    """Squeezing in dB (-10 log10 V) to s, with V = exp(-2s)"""
    return float(db) * np.log(10.0) / 20.0


def s_to_db(s: float) -> float:
    return 20.0 * float(s) / np.log(10.0)


@dataclass(frozen=True)
class CsqSpec:
    """
    Coherent-state qubit (u|alpha> + v|-alpha>)/sqrt(N) with
    u = cos(theta), v = sin(theta) exp(i phi).
    """

    alpha: float
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"CSQ amplitude must be positive, got {self.alpha}")
        if not -1e-12 <= self.theta <= np.pi / 2 + 1e-12:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "theta", float(min(max(self.theta, 0.0), np.pi / 2)))
        object.__setattr__(self, "phi", float(np.mod(self.phi, 2 * np.pi)))

    @classmethod
    def from_coefficients(cls, u: complex, v: complex, alpha: float) -> "CsqSpec":
        """Bloch angles from arbitrary (u, v); global phase is dropped"""
        norm = np.sqrt(abs(u) ** 2 + abs(v) ** 2)
        theta = float(np.arccos(min(abs(u) / norm, 1.0)))
        phi = float(np.angle(v) - np.angle(u)) if abs(u) > 0 and abs(v) > 0 else 0.0
        return cls(alpha=alpha, theta=theta, phi=phi)

    @property
    def u(self) -> complex:
        return complex(np.cos(self.theta))

    @property
    def v(self) -> complex:
        return complex(np.sin(self.theta) * np.exp(1j * self.phi))

    @property
    def norm(self) -> float:
        """N = |u|^2 + |v|^2 + 2 Re(u* v) exp(-2 alpha^2)"""
        return float(1.0 + 2.0 * np.real(np.conj(self.u) * self.v) * np.exp(-2.0 * self.alpha ** 2))


@dataclass(frozen=True)
class ResourceSpec:
    """
    Ancilla resource of the gate.

    ``kind="squeezed"``: squeezed thermal state S(s) rho_th(nbar) S^dag.
    ``kind="cat"``: ideal even cat of the gate amplitude (the ideal resource).
    """

    s: float = 0.0
    nbar: float = 0.0
    kind: Literal["squeezed", "cat"] = "squeezed"

    def __post_init__(self):
        if self.nbar < 0:
            raise ValueError(f"Thermal occupation must be >= 0, got {self.nbar}")
        if self.kind not in ("squeezed", "cat"):
            raise ValueError(f"Unknown resource kind {self.kind!r}")

    @property
    def variance(self) -> float:
        """Squeezed-quadrature variance V = exp(-2s) relative to vacuum"""
        return float(np.exp(-2.0 * self.s))

    @property
    def db(self) -> float:
        return s_to_db(self.s)

    @classmethod
    def from_db(cls, db: float, nbar: float = 0.0) -> "ResourceSpec":
        return cls(s=db_to_s(db), nbar=nbar)


def _raise_leak(what: str, leak: float, D: int, tol: float):
    if leak >= tol:
        raise TruncationError(
            f"{what}: population {leak:.3g} on levels >= {D - 2} exceeds {tol:g}; raise the cutoff"
        )


def _coherent_amplitudes(alpha: complex, D: int) -> np.ndarray:
    n = np.arange(D)
    mag = abs(alpha)
    if mag == 0.0:
        amps = np.zeros(D, dtype=np.complex128)
        amps[0] = 1.0
        return amps
    log_amp = -0.5 * mag ** 2 + n * np.log(mag) - 0.5 * gammaln(n + 1)
    return np.exp(log_amp) * np.exp(1j * np.angle(alpha) * n)


def _coherent_leakage(alpha: complex, D: int) -> float:
    if abs(alpha) == 0.0:
        return 0.0
    return float(poisson.sf(D - 3, abs(alpha) ** 2)) if D >= 3 else 1.0


def coherent(alpha: complex, D: int, tol: float = LEAKAGE_TOL) -> FockKet:
    """|alpha> with c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), renormalized over D"""
    _raise_leak(f"coherent({alpha})", _coherent_leakage(alpha, D), D, tol)
    return FockKet(_coherent_amplitudes(complex(alpha), D), (D,)).normalize()


def csq(spec: CsqSpec, D: int, tol: float = LEAKAGE_TOL) -> FockKet:
    """(u|alpha> + v|-alpha>)/sqrt(N)"""
    _raise_leak(f"csq(alpha={spec.alpha})", _coherent_leakage(spec.alpha, D), D, tol)
    c = _coherent_amplitudes(spec.alpha, D)
    parity = (-1.0) ** np.arange(D)
    return FockKet(spec.u * c + spec.v * parity * c, (D,)).normalize()


def displaced_csq(spec: CsqSpec, D: int, tol: float = LEAKAGE_TOL) -> FockKet:
    """D(alpha)|psi_in> = (u|2 alpha> + v|0>)/sqrt(N) for real alpha"""
    _raise_leak(f"displaced csq(alpha={spec.alpha})", _coherent_leakage(2 * spec.alpha, D), D, tol)
    c = _coherent_amplitudes(2 * spec.alpha, D)
    vac = np.zeros(D, dtype=np.complex128)
    vac[0] = 1.0
    return FockKet(spec.u * c + spec.v * vac, (D,)).normalize()


def cat(alpha: float, sign: int, D: int, tol: float = LEAKAGE_TOL) -> FockKet:
    """(|alpha> +/- |-alpha>)/sqrt(N+/-); parity is exact"""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    _raise_leak(f"cat({alpha}, {sign:+d})", _coherent_leakage(alpha, D), D, tol)
    n = np.arange(D)
    mask = (n % 2 == 0) if sign > 0 else (n % 2 == 1)
    amps = np.where(mask, 2.0 * _coherent_amplitudes(alpha, D), 0.0)
    return FockKet(amps, (D,)).normalize()


def cat_norm(alpha: float, sign: int) -> float:
    """N+/- = 2(1 +/- exp(-2 alpha^2))"""
    return float(2.0 * (1.0 + sign * np.exp(-2.0 * alpha ** 2)))


def hadamard_image(spec: CsqSpec, D: int, alpha: Optional[float] = None, tol: float = LEAKAGE_TOL) -> FockKet:
    """Ideal gate output u cat+ + v cat- (normalized), optionally at another amplitude"""
    a = spec.alpha if alpha is None else float(alpha)
    return (spec.u * cat(a, +1, D, tol) + spec.v * cat(a, -1, D, tol)).normalize()


def _squeezed_series(s: float, D: int, odd: bool) -> tuple:
    lam = np.tanh(s)
    size = D + 64
    amps = np.zeros(size)
    if odd:
        amps[1] = np.cosh(s) ** -1.5
        for n in range(1, size - 2, 2):
            amps[n + 2] = amps[n] * lam * np.sqrt((n + 1) * (n + 2)) / (n + 1)
    else:
        amps[0] = np.cosh(s) ** -0.5
        for n in range(0, size - 2, 2):
            amps[n + 2] = amps[n] * lam * np.sqrt((n + 1) * (n + 2)) / (n + 2)
    leak = max(1.0 - float(np.sum(amps[: max(D - 2, 0)] ** 2)), 0.0)
    return amps[:D], leak


def squeezed_vacuum(s: float, D: int, tol: float = LEAKAGE_TOL) -> FockKet:
    """S(s)|0>: c_2m = (cosh s)^-1/2 (tanh s)^m sqrt((2m)!)/(2^m m!)"""
    amps, leak = _squeezed_series(float(s), D, odd=False)
    _raise_leak(f"squeezed_vacuum({s})", leak, D, tol)
    return FockKet(amps, (D,)).normalize()


def squeezed_single_photon(s: float, D: int, tol: float = LEAKAGE_TOL) -> FockKet:
    """S(s) a^dag|0>: c_2m+1 = (cosh s)^-3/2 (tanh s)^m sqrt((2m+1)!)/(2^m m!)"""
    amps, leak = _squeezed_series(float(s), D, odd=True)
    _raise_leak(f"squeezed_single_photon({s})", leak, D, tol)
    return FockKet(amps, (D,)).normalize()


def thermal(nbar: float, D: int, tol: float = LEAKAGE_TOL) -> DensityOperator:
    """Diagonal p_n = nbar^n / (1 + nbar)^(n+1), renormalized over D"""
    n = np.arange(D)
    p = (1.0 / (1.0 + nbar)) * (nbar / (1.0 + nbar)) ** n if nbar > 0 else (n == 0).astype(float)
    leak = float((nbar / (1.0 + nbar)) ** max(D - 2, 0)) if nbar > 0 else 0.0
    _raise_leak(f"thermal({nbar})", leak, D, tol)
    deficit = 1.0 - float(p.sum())
    return DensityOperator(np.diag(p / p.sum()), (D,), deficit)


def squeezed_thermal(spec: ResourceSpec, D: int, tol: float = LEAKAGE_TOL) -> DensityOperator:
    """S(s) rho_th(nbar) S^dag(s); nbar = 0 reduces to the squeezed vacuum projector"""
    if spec.nbar == 0.0:
        return squeezed_vacuum(spec.s, D, tol).to_density()
    if spec.s == 0.0:
        return thermal(spec.nbar, D, tol)
    work = D + THERMAL_WORK_PAD
    th = thermal(spec.nbar, work, tol=1.0)
    p = np.diag(th.matrix).real * (1.0 - th.trace_deficit)
    S = squeeze(spec.s, work).matrix
    wide = (S * p) @ S.conj().T
    pops = np.real(np.diag(wide))
    leak = max(1.0 - float(pops[: max(D - 2, 0)].sum()), 0.0)
    _raise_leak(f"squeezed_thermal(s={spec.s}, nbar={spec.nbar})", leak, D, tol)
    cropped = wide[:D, :D]
    cropped = 0.5 * (cropped + cropped.conj().T)
    tr = float(np.trace(cropped).real)
    return DensityOperator(cropped / tr, (D,), 1.0 - tr)


def fock(n: int, D: int) -> FockKet:
    return basis_ket(n, D)
