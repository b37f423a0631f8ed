"""Finite-dimensional operators, states, and measurements.

Plain numpy arrays do the arithmetic; thin frozen wrappers carry the
validation (hermiticity, positivity, normalization) so invalid objects
fail at construction instead of deep inside an experiment.  All
tolerances are explicit parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HermiticityError, NormalizationError, PositivityError, ValidationError
from .rng import SeededRng

__all__ = [
    "HermitianOperator",
    "DensityOperator",
    "Povm",
    "tensor",
    "partial_trace",
    "eig_hermitian",
    "pretty_good_measurement",
    "measure",
    "hayashi_nagaoka_check",
    "real_trace",
    "pinv_sqrt",
    "matrix_to_json",
    "matrix_from_json",
    "HERMITICITY_TOL",
    "POVM_TOL",
]

HERMITICITY_TOL = 1e-10
POVM_TOL = 1e-9
# relative eigenvalue cutoff below which a direction counts as outside the support
SUPPORT_RCUT = 1e-12


def _square_complex(matrix) -> np.ndarray:
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {arr.shape}")
    return arr


def real_trace(a, b=None) -> float:
    """Tr[a b] (or Tr[a]) with the imaginary part discarded."""
    a = np.asarray(a)
    if b is None:
        return float(np.trace(a).real)
    return float(np.einsum("ij,ji->", a, np.asarray(b)).real)


@dataclass(frozen=True)
class HermitianOperator:
    """A validated Hermitian matrix."""

    matrix: np.ndarray
    tol: float = HERMITICITY_TOL

    def __post_init__(self):
        arr = _square_complex(self.matrix)
        dev = float(np.max(np.abs(arr - arr.conj().T), initial=0.0))
        if dev > self.tol:
            raise HermiticityError(f"matrix deviates from Hermitian by {dev:.3e} > {self.tol}")
        arr = (arr + arr.conj().T) / 2.0
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eig(self):
        return eig_hermitian(self.matrix, tol=self.tol)


@dataclass(frozen=True)
class DensityOperator(HermitianOperator):
    """A validated quantum state: Hermitian, PSD, unit trace."""

    def __post_init__(self):
        super().__post_init__()
        low = float(np.linalg.eigvalsh(self.matrix)[0])
        if low < -self.tol:
            raise PositivityError(f"state has eigenvalue {low:.3e} < -{self.tol}")
        tr = real_trace(self.matrix)
        if abs(tr - 1.0) > max(self.tol, 1e-10):
            raise NormalizationError(f"state trace {tr!r} differs from 1")

    @classmethod
    def pure(cls, vector) -> "DensityOperator":
        v = np.asarray(vector, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))


def tensor(*ops):
    """Kronecker product of operators or arrays, left to right."""
    if not ops:
        raise ValidationError("tensor needs at least one operand")
    mats = [op.matrix if isinstance(op, HermitianOperator) else np.asarray(op, dtype=complex) for op in ops]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    if all(isinstance(op, DensityOperator) for op in ops):
        return DensityOperator(out)
    if all(isinstance(op, HermitianOperator) for op in ops):
        return HermitianOperator(out)
    return out


def partial_trace(op, dims, keep):
    """Trace out all subsystems not listed in ``keep``.

    Parameters
    ----------
    op : array or HermitianOperator
        Operator on the tensor product of subsystems with dimensions ``dims``.
    dims : sequence of int
        Subsystem dimensions, in tensor order.
    keep : sequence of int
        Indices of the subsystems to keep, in their original order.

    Returns
    -------
    Same kind as the input (array in, array out; state in, state out).
    """
    wrap = type(op) if isinstance(op, HermitianOperator) else None
    arr = op.matrix if wrap else np.asarray(op, dtype=complex)
    dims = tuple(int(d) for d in dims)
    keep = tuple(int(k) for k in keep)
    n = len(dims)
    total = int(np.prod(dims))
    if arr.shape != (total, total):
        raise ValidationError(f"operator shape {arr.shape} does not match dims {dims}")
    if sorted(set(keep)) != sorted(keep) or any(k < 0 or k >= n for k in keep):
        raise ValidationError(f"keep={keep} is not a valid subset of range({n})")
    if keep != tuple(sorted(keep)):
        raise ValidationError("keep must be in increasing order (no implicit permutation)")
    tens = arr.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out_axes = [i for i in keep] + [i + n for i in keep]
    reduced = np.einsum(tens, row + col, out_axes)
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    reduced = reduced.reshape(kept_dim, kept_dim)
    return wrap(reduced) if wrap else reduced


def eig_hermitian(matrix, tol: float = HERMITICITY_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(values, vectors)`` with values sorted descending and
    ``vectors[:, i]`` the eigenvector of ``values[i]``.
    """
    arr = _square_complex(matrix)
    dev = float(np.max(np.abs(arr - arr.conj().T), initial=0.0))
    if dev > tol:
        raise HermiticityError(f"matrix deviates from Hermitian by {dev:.3e} > {tol}")
    vals, vecs = np.linalg.eigh((arr + arr.conj().T) / 2.0)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def pinv_sqrt(matrix: np.ndarray, rcut: float = SUPPORT_RCUT):
    """Pseudo-inverse square root and support projector of a PSD matrix."""
    vals, vecs = np.linalg.eigh(matrix)
    top = float(vals[-1]) if vals.size else 0.0
    mask = vals > max(top, 0.0) * rcut
    if top <= 0.0:
        mask = np.zeros_like(vals, dtype=bool)
    inv = np.zeros_like(vals)
    inv[mask] = vals[mask] ** -0.5
    v = vecs
    return (v * inv) @ v.conj().T, (v * mask.astype(float)) @ v.conj().T


class Povm:
    """A positive operator valued measure.

    Elements must be PSD and sum to the identity, both within ``tol``.
    """

    def __init__(self, elements, tol: float = POVM_TOL):
        mats = []
        for i, e in enumerate(elements):
            arr = _square_complex(e.matrix if isinstance(e, HermitianOperator) else e)
            arr = (arr + arr.conj().T) / 2.0
            low = float(np.linalg.eigvalsh(arr)[0])
            if low < -tol:
                raise PositivityError(f"POVM element {i} has eigenvalue {low:.3e} < -{tol}")
            arr.setflags(write=False)
            mats.append(arr)
        if not mats:
            raise ValidationError("POVM needs at least one element")
        total = np.sum(mats, axis=0)
        dev = float(np.max(np.abs(total - np.eye(total.shape[0]))))
        if dev > tol:
            raise NormalizationError(f"POVM elements sum to identity only within {dev:.3e} > {tol}")
        self.elements = tuple(mats)
        self.tol = tol

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def outcome_probabilities(self, state) -> np.ndarray:
        """Born probabilities of each outcome on ``state``."""
        rho = state.matrix if isinstance(state, HermitianOperator) else np.asarray(state, dtype=complex)
        probs = np.array([real_trace(e, rho) for e in self.elements])
        if float(probs.min()) < -1e-9:
            raise PositivityError(f"outcome probability {probs.min():.3e} below -1e-9")
        probs = np.clip(probs, 0.0, None)
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-6:
            raise NormalizationError(f"outcome probabilities sum to {total!r}, off by more than 1e-6")
        return probs / total


def pretty_good_measurement(operators, tol: float = POVM_TOL, rcut: float = SUPPORT_RCUT) -> Povm:
    """Pretty good measurement built from PSD operators.

    Element k is ``S^{-1/2} A_k S^{-1/2}`` with ``S`` the sum of all
    operators and the inverse square root taken on the support of ``S``.
    A completion element ``I - P_supp(S)`` is appended last, so the POVM
    has ``len(operators) + 1`` outcomes and the last index means failure.
    """
    mats = []
    for i, a in enumerate(operators):
        arr = _square_complex(a.matrix if isinstance(a, HermitianOperator) else a)
        low = float(np.linalg.eigvalsh((arr + arr.conj().T) / 2.0)[0])
        if low < -tol:
            raise PositivityError(f"operator {i} has eigenvalue {low:.3e} < -{tol}")
        mats.append((arr + arr.conj().T) / 2.0)
    if not mats:
        raise ValidationError("pretty_good_measurement needs at least one operator")
    s = np.sum(mats, axis=0)
    inv_sqrt, supp = pinv_sqrt(s, rcut)
    elements = [inv_sqrt @ a @ inv_sqrt for a in mats]
    elements.append(np.eye(s.shape[0]) - supp)
    return Povm(elements, tol=tol)


def measure(state, povm: Povm, rng: SeededRng, size=None):
    """Sample outcome indices of ``povm`` on ``state``."""
    probs = povm.outcome_probabilities(state)
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return rng.choice_index(cdf, size)


def hayashi_nagaoka_check(s, t, rcut: float = SUPPORT_RCUT) -> float:
    """Smallest eigenvalue of the operator-inequality slack.

    For ``0 <= S <= I`` and ``T >= 0`` the inequality
    ``I - (S+T)^{-1/2} S (S+T)^{-1/2} <= 2(I-S) + 4T`` holds, with the
    inverse square root taken on the support of ``S+T``.  Returns the
    minimum eigenvalue of ``2(I-S) + 4T - (I - (S+T)^{-1/2} S (S+T)^{-1/2})``,
    which should only be negative at the level of rounding error.
    """
    s_arr = _square_complex(s.matrix if isinstance(s, HermitianOperator) else s)
    t_arr = _square_complex(t.matrix if isinstance(t, HermitianOperator) else t)
    if s_arr.shape != t_arr.shape:
        raise ValidationError("S and T must have the same shape")
    s_arr = (s_arr + s_arr.conj().T) / 2.0
    t_arr = (t_arr + t_arr.conj().T) / 2.0
    eye = np.eye(s_arr.shape[0])
    s_eigs = np.linalg.eigvalsh(s_arr)
    if float(s_eigs[0]) < -POVM_TOL or float(s_eigs[-1]) > 1.0 + POVM_TOL:
        raise ValidationError(f"S must satisfy 0 <= S <= I, eigenvalues span [{s_eigs[0]:.3e}, {s_eigs[-1]:.3e}]")
    if float(np.linalg.eigvalsh(t_arr)[0]) < -POVM_TOL:
        raise PositivityError("T must be positive semidefinite")
    inv_sqrt, _ = pinv_sqrt(s_arr + t_arr, rcut)
    pinched = inv_sqrt @ s_arr @ inv_sqrt
    slack = 2.0 * (eye - s_arr) + 4.0 * t_arr - (eye - pinched)
    return float(np.linalg.eigvalsh(slack)[0])


def matrix_to_json(matrix) -> dict:
    """Serialize a complex matrix as nested [re, im] pairs."""
    arr = _square_complex(matrix.matrix if isinstance(matrix, HermitianOperator) else matrix)
    return {
        "dim": arr.shape[0],
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in arr],
    }


def matrix_from_json(data: dict) -> np.ndarray:
    if not isinstance(data, dict) or "dim" not in data or "entries" not in data:
        raise ValidationError("matrix JSON must carry 'dim' and 'entries'")
    dim = int(data["dim"])
    rows = data["entries"]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ValidationError(f"matrix entries do not form a {dim}x{dim} grid")
    try:
        arr = np.array([[complex(c[0], c[1]) for c in row] for row in rows])
    except (TypeError, IndexError) as exc:
        raise ValidationError(f"matrix entries must be [re, im] pairs: {exc}") from None
    return arr
