"""
Dense linear algebra over truncated single- and multi-mode Fock spaces.

Mode ordering is fixed: for modes (m1, m2, ..., mk) the joint basis index of
|n1 n2 ... nk> is C-ordered, i.e. the first mode varies slowest. This is the
ordering produced by ``np.kron(A1, A2, ...)`` and by ``tensor.reshape(dims)``.
"""

from __future__ import annotations

import logging
import string
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from catgate.errors import CapacityError, DimensionError, TruncationWarning

logger = logging.getLogger(__name__)

# Largest joint Hilbert-space dimension a dense operand may have
DEFAULT_MAX_DIM = 4096

# Population allowed in the two highest retained levels of any mode
LEAKAGE_TOL = 1e-6

HERMITIAN_TOL = 1e-10
POSITIVITY_TOL = 1e-8


def _frozen(array, dtype=np.complex128) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def _dims(mode_dims: Iterable[int]) -> tuple:
    dims = tuple(int(d) for d in mode_dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"Mode cutoffs must be positive integers, got {dims}")
    return dims


@dataclass(frozen=True)
class FockKet:
    """Pure state amplitude vector over a truncated Fock basis"""

    amplitudes: np.ndarray
    mode_dims: tuple = ()

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        dims = _dims(self.mode_dims or (amps.size,))
        if int(np.prod(dims)) != amps.size:
            raise DimensionError(
                f"Amplitude vector of length {amps.size} does not match mode_dims {dims}"
            )
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "mode_dims", dims)

    @property
    def cutoff(self) -> int:
        """Cutoff D of a single-mode ket (joint dimension for multimode kets)"""
        return int(self.amplitudes.size)

    @property
    def num_modes(self) -> int:
        return len(self.mode_dims)

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def normalize(self) -> "FockKet":
        n2 = self.norm2
        if n2 <= 0.0:
            raise DimensionError("Cannot normalize the zero vector")
        return FockKet(self.amplitudes / np.sqrt(n2), self.mode_dims)

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.mode_dims)

    def to_density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.mode_dims)

    def overlap(self, other: "FockKet") -> complex:
        """<self|other>"""
        if self.mode_dims != other.mode_dims:
            raise DimensionError(f"Overlap of kets with dims {self.mode_dims} and {other.mode_dims}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __add__(self, other: "FockKet") -> "FockKet":
        if self.mode_dims != other.mode_dims:
            raise DimensionError(f"Cannot add kets with dims {self.mode_dims} and {other.mode_dims}")
        return FockKet(self.amplitudes + other.amplitudes, self.mode_dims)

    def __mul__(self, scalar: complex) -> "FockKet":
        return FockKet(self.amplitudes * scalar, self.mode_dims)

    __rmul__ = __mul__


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian matrix over a truncated (multi-mode) Fock basis"""

    matrix: np.ndarray
    mode_dims: tuple = ()
    trace_deficit: float = 0.0

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"Density matrix must be square, got shape {mat.shape}")
        dims = _dims(self.mode_dims or (mat.shape[0],))
        if int(np.prod(dims)) != mat.shape[0]:
            raise DimensionError(f"Matrix of size {mat.shape[0]} does not match mode_dims {dims}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "mode_dims", dims)
        object.__setattr__(self, "trace_deficit", float(max(self.trace_deficit, 0.0)))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def num_modes(self) -> int:
        return len(self.mode_dims)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix.conj().T, self.matrix))) / self.trace ** 2

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))

    def is_valid(self, herm_tol: float = HERMITIAN_TOL, pos_tol: float = POSITIVITY_TOL) -> bool:
        """Hermitian, positive to tolerance, trace in (0, 1]"""
        tr = self.trace
        return (
            self.hermiticity_error() <= herm_tol
            and 0.0 < tr <= 1.0 + herm_tol
            and float(self.eigenvalues().min()) >= -pos_tol
        )

    def normalize(self) -> "DensityOperator":
        tr = self.trace
        if tr <= 0.0:
            raise DimensionError("Cannot normalize an operator with non-positive trace")
        return DensityOperator(self.matrix / tr, self.mode_dims, self.trace_deficit)

    def as_tensor(self) -> np.ndarray:
        return self.matrix.reshape(self.mode_dims + self.mode_dims)

    def populations(self) -> np.ndarray:
        """Diagonal in the Fock basis (single mode) or joint basis"""
        return np.real(np.diag(self.matrix)).copy()


class OperatorKind(str, Enum):
    UNITARY = "unitary"
    ANNIHILATION = "annihilation"
    POVM = "povm"
    GENERIC = "generic"


@dataclass(frozen=True)
class ModeOperator:
    """
    Operator acting on a subset of modes.

    ``mode_dims`` are the cutoffs of the modes the matrix acts on. ``modes``
    names the target modes inside a larger state; ``None`` means the operator
    acts on the full state (its own mode list).
    """

    matrix: np.ndarray
    kind: OperatorKind = OperatorKind.GENERIC
    mode_dims: tuple = ()
    modes: Optional[tuple] = None

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"Operator matrix must be square, got shape {mat.shape}")
        dims = _dims(self.mode_dims or (mat.shape[0],))
        if int(np.prod(dims)) != mat.shape[0]:
            raise DimensionError(f"Operator of size {mat.shape[0]} does not match mode_dims {dims}")
        modes = None if self.modes is None else tuple(int(m) for m in self.modes)
        if modes is not None and (len(modes) != len(dims) or len(set(modes)) != len(modes)):
            raise DimensionError(f"Target modes {modes} inconsistent with mode_dims {dims}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "kind", OperatorKind(self.kind))
        object.__setattr__(self, "mode_dims", dims)
        object.__setattr__(self, "modes", modes)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def dagger(self) -> "ModeOperator":
        kind = self.kind if self.kind in (OperatorKind.UNITARY, OperatorKind.POVM) else OperatorKind.GENERIC
        return ModeOperator(self.matrix.conj().T, kind, self.mode_dims, self.modes)

    def on(self, *modes: int) -> "ModeOperator":
        """Same operator, targeted at ``modes`` of a larger state"""
        return ModeOperator(self.matrix, self.kind, self.mode_dims, tuple(modes))

    def __matmul__(self, other: "ModeOperator") -> "ModeOperator":
        if self.mode_dims != other.mode_dims or self.modes != other.modes:
            raise DimensionError("Operator product requires identical mode layout")
        kind = self.kind if self.kind == other.kind == OperatorKind.UNITARY else OperatorKind.GENERIC
        return ModeOperator(self.matrix @ other.matrix, kind, self.mode_dims, self.modes)

    def unitarity_error(self, block: Optional[int] = None) -> float:
        """
        max |U^dag U - I| restricted to basis states whose every mode index is
        below ``block`` (default: ceil(D/2) per mode)
        """
        gram = self.matrix.conj().T @ self.matrix - np.eye(self.dim)
        grids = np.indices(self.mode_dims).reshape(len(self.mode_dims), -1)
        limits = np.array(
            [(-(-d // 2) if block is None else block) for d in self.mode_dims]
        )[:, None]
        keep = np.all(grids < limits, axis=0)
        return float(np.max(np.abs(gram[np.ix_(keep, keep)]))) if keep.any() else 0.0

    def embed(self, full_dims: Sequence[int]) -> np.ndarray:
        """Dense matrix of this operator on the full mode list ``full_dims``"""
        full_dims = _dims(full_dims)
        if self.modes is None:
            if full_dims != self.mode_dims:
                raise DimensionError(f"Operator dims {self.mode_dims} differ from state dims {full_dims}")
            return np.array(self.matrix)
        _check_targets(self.modes, self.mode_dims, full_dims)
        total = int(np.prod(full_dims))
        if total > DEFAULT_MAX_DIM:
            raise CapacityError(f"Embedding into dimension {total} exceeds budget {DEFAULT_MAX_DIM}")
        eye = np.eye(total, dtype=np.complex128).reshape(full_dims + full_dims)
        out = _contract(self.matrix, eye, self.modes, self.mode_dims)
        return out.reshape(total, total)


def _check_targets(modes: Sequence[int], op_dims: Sequence[int], full_dims: Sequence[int]):
    for m, d in zip(modes, op_dims):
        if not 0 <= m < len(full_dims):
            raise DimensionError(f"Mode index {m} out of range for {len(full_dims)} modes")
        if full_dims[m] != d:
            raise DimensionError(f"Mode {m} has cutoff {full_dims[m]}, operator expects {d}")


def _contract(matrix: np.ndarray, state: np.ndarray, modes: Sequence[int], op_dims: Sequence[int]) -> np.ndarray:
    """Apply ``matrix`` (acting on ``modes``) to the leading axes of a state tensor"""
    n = len(modes)
    op = np.asarray(matrix).reshape(tuple(op_dims) + tuple(op_dims))
    out = np.tensordot(op, state, axes=(list(range(n, 2 * n)), list(modes)))
    return np.moveaxis(out, list(range(n)), list(modes))


def _as_operator_matrix(x) -> tuple:
    if isinstance(x, DensityOperator):
        return x.matrix, x.mode_dims
    if isinstance(x, ModeOperator):
        if x.modes is not None:
            raise DimensionError("tensor() expects operators on their own mode list")
        return x.matrix, x.mode_dims
    raise TypeError(f"Unsupported operand type {type(x).__name__}")


def tensor(a, b, max_dim: int = DEFAULT_MAX_DIM):
    """
    Tensor product a (x) b; the modes of ``a`` come first.

    Works on pairs of kets, density operators or mode operators.
    """
    if isinstance(a, FockKet) and isinstance(b, FockKet):
        dims = a.mode_dims + b.mode_dims
        if int(np.prod(dims)) > max_dim:
            raise CapacityError(f"Joint dimension {int(np.prod(dims))} exceeds budget {max_dim}")
        return FockKet(np.kron(a.amplitudes, b.amplitudes), dims)
    if type(a) is not type(b):
        raise TypeError(f"Cannot tensor {type(a).__name__} with {type(b).__name__}")
    ma, da = _as_operator_matrix(a)
    mb, db = _as_operator_matrix(b)
    total = ma.shape[0] * mb.shape[0]
    if total > max_dim:
        raise CapacityError(f"Joint dimension {total} exceeds budget {max_dim}")
    if isinstance(a, DensityOperator):
        # trace deficits combine like lost probabilities of independent parts
        deficit = 1.0 - (1.0 - a.trace_deficit) * (1.0 - b.trace_deficit)
        return DensityOperator(np.kron(ma, mb), da + db, deficit)
    kind = a.kind if a.kind == b.kind else OperatorKind.GENERIC
    return ModeOperator(np.kron(ma, mb), kind, da + db)


def tensor_all(items: Sequence, max_dim: int = DEFAULT_MAX_DIM):
    out = items[0]
    for item in items[1:]:
        out = tensor(out, item, max_dim=max_dim)
    return out


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Trace out every mode not in ``keep``; kept modes stay in ascending order"""
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise DimensionError("partial_trace needs at least one mode to keep")
    k = rho.num_modes
    if any(m < 0 or m >= k for m in keep):
        raise DimensionError(f"Keep set {keep} out of range for {k} modes")
    if len(keep) == k:
        return rho
    letters = string.ascii_letters
    rows = [letters[i] for i in range(k)]
    cols = [letters[i] if i not in keep else letters[k + i] for i in range(k)]
    out = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    reduced = np.einsum(f"{''.join(rows)}{''.join(cols)}->{out}", rho.as_tensor())
    dims = tuple(rho.mode_dims[i] for i in keep)
    size = int(np.prod(dims))
    return DensityOperator(reduced.reshape(size, size), dims, rho.trace_deficit)


def apply_operator(op: ModeOperator, ket: FockKet) -> FockKet:
    """op|ket> for any (possibly non-unitary) operator"""
    if op.modes is None:
        if op.mode_dims != ket.mode_dims:
            raise DimensionError(f"Operator dims {op.mode_dims} differ from ket dims {ket.mode_dims}")
        return FockKet(op.matrix @ ket.amplitudes, ket.mode_dims)
    _check_targets(op.modes, op.mode_dims, ket.mode_dims)
    out = _contract(op.matrix, ket.as_tensor(), op.modes, op.mode_dims)
    return FockKet(out.reshape(-1), ket.mode_dims)


def conjugate_by(op: ModeOperator, rho: DensityOperator) -> np.ndarray:
    """Matrix of op rho op^dag for any operator (no trace bookkeeping)"""
    dims = rho.mode_dims
    if op.modes is None:
        if op.mode_dims != dims:
            raise DimensionError(f"Operator dims {op.mode_dims} differ from state dims {dims}")
        return op.matrix @ rho.matrix @ op.matrix.conj().T
    _check_targets(op.modes, op.mode_dims, dims)
    k = len(dims)
    t = _contract(op.matrix, rho.as_tensor(), op.modes, op.mode_dims)
    t = _contract(op.matrix.conj(), t, [k + m for m in op.modes], op.mode_dims)
    return t.reshape(rho.dim, rho.dim)


def apply_unitary(U: ModeOperator, state: Union[FockKet, DensityOperator]):
    """
    U|psi> for kets, U rho U^dag for density operators.

    Population pushed out of the truncated space is added to ``trace_deficit``.
    """
    if isinstance(state, FockKet):
        return apply_operator(U, state)
    if not isinstance(state, DensityOperator):
        raise TypeError(f"Unsupported state type {type(state).__name__}")
    dims = state.mode_dims
    mat = conjugate_by(U, state)
    before = state.trace
    after = float(np.trace(mat).real)
    deficit = state.trace_deficit + max(before - after, 0.0)
    return DensityOperator(mat, dims, deficit)


def expect(rho: DensityOperator, O: ModeOperator) -> complex:
    """tr(rho O)"""
    if O.modes is None:
        if O.mode_dims != rho.mode_dims:
            raise DimensionError(f"Operator dims {O.mode_dims} differ from state dims {rho.mode_dims}")
        return complex(np.einsum("ij,ji->", rho.matrix, O.matrix))
    _check_targets(O.modes, O.mode_dims, rho.mode_dims)
    order = np.argsort(O.modes)
    reduced = partial_trace(rho, O.modes)
    n = len(O.modes)
    op = O.matrix.reshape(O.mode_dims + O.mode_dims)
    op = np.transpose(op, list(order) + [n + i for i in order])
    return complex(np.einsum("ij,ji->", reduced.matrix, op.reshape(reduced.dim, reduced.dim)))


def mode_populations(state: Union[FockKet, DensityOperator]) -> list:
    """Per-mode photon-number distributions of a (multi-mode) state"""
    if isinstance(state, FockKet):
        probs = np.abs(state.as_tensor()) ** 2
    else:
        probs = np.real(np.diagonal(state.matrix)).reshape(state.mode_dims)
    k = len(state.mode_dims)
    return [probs.sum(axis=tuple(j for j in range(k) if j != i)) for i in range(k)]


def truncation_leakage(state: Union[FockKet, DensityOperator]) -> float:
    """Largest population of Fock levels >= D-2 over all modes (relative to trace)"""
    return population_leakage(mode_populations(state))


def population_leakage(pops: Sequence[np.ndarray]) -> float:
    """
    Leakage monitor on per-mode populations, so weighted mixtures of kets can
    be summed before the check.
    """
    total = float(np.sum(pops[0]))
    if total <= 0.0:
        return 0.0
    worst = 0.0
    for p in pops:
        top = float(p[max(len(p) - 2, 0):].sum()) if len(p) > 2 else 0.0
        worst = max(worst, top / total)
    return worst


def check_leakage(state, tol: float = LEAKAGE_TOL, label: str = "state") -> bool:
    """Warn with TruncationWarning if the leakage monitor trips; returns the flag"""
    leak = truncation_leakage(state)
    if leak >= tol:
        warnings.warn(
            f"{label}: population {leak:.3g} in top two Fock levels exceeds {tol:g}",
            TruncationWarning,
            stacklevel=2,
        )
        return True
    return False


def basis_ket(n: int, D: int) -> FockKet:
    """Fock state |n> with cutoff D"""
    if not 0 <= n < D:
        raise DimensionError(f"Fock level {n} outside cutoff {D}")
    amps = np.zeros(D, dtype=np.complex128)
    amps[n] = 1.0
    return FockKet(amps, (D,))


def annihilation(D: int) -> ModeOperator:
    """Truncated a with <n-1|a|n> = sqrt(n)"""
    return ModeOperator(np.diag(np.sqrt(np.arange(1, D)), k=1), OperatorKind.ANNIHILATION, (D,))


def number_operator(D: int) -> ModeOperator:
    return ModeOperator(np.diag(np.arange(D, dtype=float)), OperatorKind.GENERIC, (D,))


def identity(D: int) -> ModeOperator:
    return ModeOperator(np.eye(D), OperatorKind.UNITARY, (D,))
