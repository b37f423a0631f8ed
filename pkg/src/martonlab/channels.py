"""Broadcast channels and input designs.

A broadcast channel carries one input to two receivers.  The classical
kind stores p(y, z | x); the classical-quantum kind stores a bipartite
state on B tensor C per input symbol.  An input design fixes the
auxiliary joint p(u, v) and the deterministic map f(u, v) to channel
inputs; together with a channel it induces every joint object the
coding layer needs.  Symbols are strings everywhere so designs and
channels serialize to JSON losslessly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, PositivityError, ValidationError
from .prob import DEFAULT_ATOL, JointPmf, Pmf
from .quantum import DensityOperator, matrix_from_json, matrix_to_json, partial_trace
from .rng import SeededRng

__all__ = [
    "ClassicalBroadcastChannel",
    "CqBroadcastChannel",
    "InputDesign",
    "ProductClassicalChannel",
    "build_classical_joints",
    "build_joint_state",
    "bob_ensemble",
    "charlie_ensemble",
    "nfold",
    "product_design",
    "channel_from_json",
    "NFOLD_CELL_CAP",
    "NFOLD_DIM_CAP",
]

NFOLD_CELL_CAP = 1_000_000
NFOLD_DIM_CAP = 1024


def _check_alphabet(labels, what: str) -> tuple:
    labels = tuple(labels)
    if not labels:
        raise ValidationError(f"{what} alphabet is empty")
    if any(not isinstance(x, str) for x in labels):
        raise ValidationError(f"{what} alphabet labels must be strings")
    if len(set(labels)) != len(labels):
        raise ValidationError(f"{what} alphabet has duplicate labels")
    return labels


@dataclass(frozen=True)
class ClassicalBroadcastChannel:
    """One sender, two receivers, transition p(y, z | x)."""

    x_alphabet: tuple
    y_alphabet: tuple
    z_alphabet: tuple
    probs: np.ndarray
    atol: float = DEFAULT_ATOL

    def __post_init__(self):
        object.__setattr__(self, "x_alphabet", _check_alphabet(self.x_alphabet, "X"))
        object.__setattr__(self, "y_alphabet", _check_alphabet(self.y_alphabet, "Y"))
        object.__setattr__(self, "z_alphabet", _check_alphabet(self.z_alphabet, "Z"))
        arr = np.asarray(self.probs, dtype=float)
        shape = (len(self.x_alphabet), len(self.y_alphabet), len(self.z_alphabet))
        if arr.shape != shape:
            raise ValidationError(f"transition shape {arr.shape} does not match alphabets {shape}")
        if float(arr.min(initial=0.0)) < -self.atol:
            raise PositivityError(f"negative transition probability {arr.min():.3e}")
        sums = arr.sum(axis=(1, 2))
        bad = np.abs(sums - 1.0) > self.atol
        if np.any(bad):
            x = self.x_alphabet[int(np.argmax(bad))]
            raise NormalizationError(f"p(y,z|x={x}) sums to {sums[np.argmax(bad)]!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    def x_index(self, x: str) -> int:
        try:
            return self.x_alphabet.index(x)
        except ValueError:
            raise ValidationError(f"unknown input symbol {x!r}") from None

    def joint_yz(self, x: str) -> JointPmf:
        return JointPmf(self.y_alphabet, self.z_alphabet, self.probs[self.x_index(x)], self.atol)

    def marginal_y(self) -> np.ndarray:
        """p(y | x) as an (X, Y) matrix."""
        return self.probs.sum(axis=2)

    def marginal_z(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    def sample_output(self, x: str, rng: SeededRng):
        """One (y, z) label pair drawn from p(y, z | x)."""
        flat = np.cumsum(self.probs[self.x_index(x)].ravel())
        flat[-1] = 1.0
        idx = int(rng.choice_index(flat))
        nz = len(self.z_alphabet)
        return self.y_alphabet[idx // nz], self.z_alphabet[idx % nz]

    def to_json(self) -> dict:
        return {
            "type": "classical",
            "x_alphabet": list(self.x_alphabet),
            "y_alphabet": list(self.y_alphabet),
            "z_alphabet": list(self.z_alphabet),
            "p": [[[float(v) for v in row] for row in plane] for plane in self.probs],
        }

    @classmethod
    def from_json(cls, data: dict, atol: float = DEFAULT_ATOL) -> "ClassicalBroadcastChannel":
        needed = {"x_alphabet", "y_alphabet", "z_alphabet", "p"}
        if not isinstance(data, dict) or not needed.issubset(data):
            raise ValidationError("classical channel JSON needs x/y/z alphabets and 'p'")
        return cls(tuple(data["x_alphabet"]), tuple(data["y_alphabet"]), tuple(data["z_alphabet"]),
                   np.asarray(data["p"], dtype=float), atol)


@dataclass(frozen=True)
class CqBroadcastChannel:
    """One classical input, a bipartite quantum state on B tensor C per symbol."""

    x_alphabet: tuple
    dim_b: int
    dim_c: int
    states: tuple

    def __post_init__(self):
        object.__setattr__(self, "x_alphabet", _check_alphabet(self.x_alphabet, "X"))
        db, dc = int(self.dim_b), int(self.dim_c)
        if db < 1 or dc < 1:
            raise ValidationError("dim_b and dim_c must be positive")
        object.__setattr__(self, "dim_b", db)
        object.__setattr__(self, "dim_c", dc)
        states = tuple(s if isinstance(s, DensityOperator) else DensityOperator(s) for s in self.states)
        if len(states) != len(self.x_alphabet):
            raise ValidationError(f"{len(states)} states for {len(self.x_alphabet)} input symbols")
        for x, s in zip(self.x_alphabet, states):
            if s.dim != db * dc:
                raise ValidationError(f"state for {x!r} has dim {s.dim}, expected {db * dc}")
        object.__setattr__(self, "states", states)

    def x_index(self, x: str) -> int:
        try:
            return self.x_alphabet.index(x)
        except ValueError:
            raise ValidationError(f"unknown input symbol {x!r}") from None

    def state(self, x: str) -> DensityOperator:
        return self.states[self.x_index(x)]

    def rho_b(self, x: str) -> np.ndarray:
        return partial_trace(self.state(x).matrix, (self.dim_b, self.dim_c), (0,))

    def rho_c(self, x: str) -> np.ndarray:
        return partial_trace(self.state(x).matrix, (self.dim_b, self.dim_c), (1,))

    def to_json(self) -> dict:
        return {
            "type": "cq",
            "x_alphabet": list(self.x_alphabet),
            "dim_b": self.dim_b,
            "dim_c": self.dim_c,
            "states": {x: matrix_to_json(s.matrix) for x, s in zip(self.x_alphabet, self.states)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "CqBroadcastChannel":
        needed = {"x_alphabet", "dim_b", "dim_c", "states"}
        if not isinstance(data, dict) or not needed.issubset(data):
            raise ValidationError("cq channel JSON needs 'x_alphabet', 'dim_b', 'dim_c', 'states'")
        xs = tuple(data["x_alphabet"])
        missing = [x for x in xs if x not in data["states"]]
        if missing:
            raise ValidationError(f"states missing for symbols {missing}")
        states = tuple(DensityOperator(matrix_from_json(data["states"][x])) for x in xs)
        return cls(xs, int(data["dim_b"]), int(data["dim_c"]), states)


def channel_from_json(data: dict):
    """Dispatch on the 'type' tag."""
    if not isinstance(data, dict) or "type" not in data:
        raise ValidationError("channel JSON needs a 'type' tag")
    if data["type"] == "classical":
        return ClassicalBroadcastChannel.from_json(data)
    if data["type"] == "cq":
        return CqBroadcastChannel.from_json(data)
    raise ValidationError(f"unknown channel type {data['type']!r}")


@dataclass(frozen=True)
class InputDesign:
    """Auxiliary joint p(u, v) and deterministic input map f(u, v)."""

    joint: JointPmf
    f: dict

    def __post_init__(self):
        fmap = {}
        for key, x in dict(self.f).items():
            if not (isinstance(key, tuple) and len(key) == 2):
                raise ValidationError(f"f keys must be (u, v) pairs, got {key!r}")
            if not isinstance(x, str):
                raise ValidationError(f"f values must be input symbols, got {x!r}")
            fmap[key] = x
        p = self.joint.probs
        for i, u in enumerate(self.joint.row_labels):
            for j, v in enumerate(self.joint.col_labels):
                if p[i, j] > 0.0 and (u, v) not in fmap:
                    raise ValidationError(f"f undefined on support cell ({u!r}, {v!r})")
        object.__setattr__(self, "f", fmap)

    def x_of(self, u: str, v: str) -> str:
        try:
            return self.f[(u, v)]
        except KeyError:
            raise ValidationError(f"f undefined at ({u!r}, {v!r})") from None

    def marginals(self):
        return self.joint.marginals()

    def to_json(self) -> dict:
        for u, v in self.f:
            if "," in u or "," in v:
                raise ValidationError("labels containing ',' cannot use the 'u,v' key encoding")
        return {
            "uv": self.joint.to_json(),
            "f": {f"{u},{v}": x for (u, v), x in self.f.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "InputDesign":
        if not isinstance(data, dict) or "uv" not in data or "f" not in data:
            raise ValidationError("design JSON needs 'uv' and 'f'")
        fmap = {}
        for key, x in data["f"].items():
            parts = key.split(",")
            if len(parts) != 2:
                raise ValidationError(f"f key {key!r} is not 'u,v'")
            fmap[(parts[0], parts[1])] = x
        return cls(JointPmf.from_json(data["uv"]), fmap)


def _x_indices(design: InputDesign, channel) -> np.ndarray:
    """f as an index matrix over the design's (u, v) grid; -1 off support."""
    joint = design.joint
    out = np.full(joint.shape, -1, dtype=np.int64)
    for i, u in enumerate(joint.row_labels):
        for j, v in enumerate(joint.col_labels):
            if joint.probs[i, j] > 0.0 or (u, v) in design.f:
                out[i, j] = channel.x_index(design.x_of(u, v))
    return out


def build_classical_joints(channel: ClassicalBroadcastChannel, design: InputDesign):
    """Joints p(u, y) and p(v, z) induced by a design on a classical channel."""
    joint = design.joint
    fx = _x_indices(design, channel)
    py_x = channel.marginal_y()
    pz_x = channel.marginal_z()
    p_uy = np.zeros((joint.shape[0], py_x.shape[1]))
    p_vz = np.zeros((joint.shape[1], pz_x.shape[1]))
    for i in range(joint.shape[0]):
        for j in range(joint.shape[1]):
            mass = joint.probs[i, j]
            if mass > 0.0:
                p_uy[i] += mass * py_x[fx[i, j]]
                p_vz[j] += mass * pz_x[fx[i, j]]
    return (
        JointPmf(joint.row_labels, channel.y_alphabet, p_uy, atol=1e-9),
        JointPmf(joint.col_labels, channel.z_alphabet, p_vz, atol=1e-9),
    )


def bob_ensemble(channel: CqBroadcastChannel, design: InputDesign):
    """Register distribution p(u) and conditional B states, averaged over v."""
    joint = design.joint
    fx = _x_indices(design, channel)
    pu = joint.probs.sum(axis=1)
    rho_b = [channel.rho_b(x) for x in channel.x_alphabet]
    db = channel.dim_b
    states = []
    for i in range(joint.shape[0]):
        acc = np.zeros((db, db), dtype=complex)
        for j in range(joint.shape[1]):
            if joint.probs[i, j] > 0.0:
                acc += joint.probs[i, j] * rho_b[fx[i, j]]
        states.append(acc / pu[i] if pu[i] > 0.0 else acc)
    return pu, states


def charlie_ensemble(channel: CqBroadcastChannel, design: InputDesign):
    """Register distribution p(v) and conditional C states, averaged over u."""
    joint = design.joint
    fx = _x_indices(design, channel)
    pv = joint.probs.sum(axis=0)
    rho_c = [channel.rho_c(x) for x in channel.x_alphabet]
    dc = channel.dim_c
    states = []
    for j in range(joint.shape[1]):
        acc = np.zeros((dc, dc), dtype=complex)
        for i in range(joint.shape[0]):
            if joint.probs[i, j] > 0.0:
                acc += joint.probs[i, j] * rho_c[fx[i, j]]
        states.append(acc / pv[j] if pv[j] > 0.0 else acc)
    return pv, states


def build_joint_state(channel: CqBroadcastChannel, design: InputDesign, dim_cap: int = 4096):
    """Classical-quantum state on U, V, B, C induced by a design.

    Returns ``(state, dims)`` with dims ``(|U|, |V|, dim_b, dim_c)``.
    """
    joint = design.joint
    nu, nv = joint.shape
    db, dc = channel.dim_b, channel.dim_c
    total = nu * nv * db * dc
    if total > dim_cap:
        raise ValidationError(f"joint state dimension {total} exceeds cap {dim_cap}")
    fx = _x_indices(design, channel)
    out = np.zeros((total, total), dtype=complex)
    block = db * dc
    for i in range(nu):
        for j in range(nv):
            mass = joint.probs[i, j]
            if mass > 0.0:
                off = (i * nv + j) * block
                out[off:off + block, off:off + block] = mass * channel.states[fx[i, j]].matrix
    return DensityOperator(out), (nu, nv, db, dc)


# ---------------------------------------------------------------------------
# iid products


def _product_labels(labels, n: int) -> tuple:
    single = all(len(x) == 1 for x in labels)
    sep = "" if single else ","
    out = list(labels)
    for _ in range(n - 1):
        out = [a + sep + b for a in out for b in labels]
    return tuple(out)


def nfold(channel, n: int, cell_cap: int = NFOLD_CELL_CAP, dim_cap: int = NFOLD_DIM_CAP):
    """Dense n-fold product of a channel.

    Materializes the full product alphabets, so it is guarded by caps;
    use :class:`ProductClassicalChannel` for large blocklengths.
    """
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    if isinstance(channel, ClassicalBroadcastChannel):
        cells = (len(channel.x_alphabet) * len(channel.y_alphabet) * len(channel.z_alphabet)) ** n
        if cells > cell_cap:
            raise ValidationError(f"n-fold transition would hold {cells} cells, cap {cell_cap}")
        probs = channel.probs
        out = probs
        for _ in range(n - 1):
            out = np.einsum("xyz,abc->xaybzc", out.reshape(out.shape), probs).reshape(
                out.shape[0] * probs.shape[0], out.shape[1] * probs.shape[1], out.shape[2] * probs.shape[2])
        return ClassicalBroadcastChannel(
            _product_labels(channel.x_alphabet, n),
            _product_labels(channel.y_alphabet, n),
            _product_labels(channel.z_alphabet, n),
            out, atol=max(channel.atol, 1e-9))
    if isinstance(channel, CqBroadcastChannel):
        dim = (channel.dim_b * channel.dim_c) ** n
        if dim > dim_cap:
            raise ValidationError(f"n-fold state dimension {dim} exceeds cap {dim_cap}")
        # B and C registers must stay contiguous: reorder (b1 c1 b2 c2) to (b1 b2 c1 c2)
        labels = _product_labels(channel.x_alphabet, n)
        db, dc = channel.dim_b ** n, channel.dim_c ** n
        states = []
        perm_dims = []
        for _ in range(n):
            perm_dims += [channel.dim_b, channel.dim_c]
        order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
        for lab in labels:
            parts = lab.split(",") if "," in lab else list(lab)
            mat = channel.states[channel.x_index(parts[0])].matrix
            for p in parts[1:]:
                mat = np.kron(mat, channel.states[channel.x_index(p)].matrix)
            tens = mat.reshape(perm_dims + perm_dims)
            tens = np.transpose(tens, order + [2 * n + o for o in order])
            states.append(DensityOperator(tens.reshape(db * dc, db * dc)))
        return CqBroadcastChannel(labels, db, dc, tuple(states))
    raise ValidationError(f"unsupported channel type {type(channel).__name__}")


def product_design(design: InputDesign, n: int, cell_cap: int = NFOLD_CELL_CAP) -> InputDesign:
    """Dense n-fold product of a design: iid joint, symbol-wise map."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    joint = design.joint
    cells = (joint.shape[0] * joint.shape[1]) ** n
    if cells > cell_cap:
        raise ValidationError(f"n-fold joint would hold {cells} cells, cap {cell_cap}")
    probs = joint.probs
    out = probs
    for _ in range(n - 1):
        out = np.kron(out, probs)
    rows = _product_labels(joint.row_labels, n)
    cols = _product_labels(joint.col_labels, n)
    usep = "," if any(len(x) > 1 for x in joint.row_labels) else ""
    vsep = "," if any(len(x) > 1 for x in joint.col_labels) else ""
    xsep = "," if any(len(x) > 1 for x in design.f.values()) else ""
    fmap = {}
    big = JointPmf(rows, cols, out, atol=1e-9)
    for i, u in enumerate(rows):
        for j, v in enumerate(cols):
            if big.probs[i, j] > 0.0:
                us = u.split(",") if usep else list(u)
                vs = v.split(",") if vsep else list(v)
                fmap[(u, v)] = xsep.join(design.x_of(a, b) for a, b in zip(us, vs))
    return InputDesign(big, fmap)


class ProductClassicalChannel:
    """Lazy per-symbol view of an n-fold classical channel.

    Never materializes product alphabets; inputs and outputs are arrays
    of per-symbol indices into the base alphabets.
    """

    def __init__(self, base: ClassicalBroadcastChannel, n: int):
        if n < 1:
            raise ValidationError(f"n must be positive, got {n}")
        self.base = base
        self.n = int(n)
        flat = base.probs.reshape(len(base.x_alphabet), -1)
        self._cdf = np.cumsum(flat, axis=1)
        self._cdf[:, -1] = 1.0
        self._nz = len(base.z_alphabet)

    def sample_outputs(self, x_indices: np.ndarray, rng: SeededRng):
        """Per-symbol (y, z) index arrays for one block of inputs."""
        x_indices = np.asarray(x_indices)
        u = rng.random(x_indices.shape)
        flat = np.empty(x_indices.shape, dtype=np.int64)
        for xi in np.unique(x_indices):
            mask = x_indices == xi
            flat[mask] = np.searchsorted(self._cdf[xi], u[mask], side="right")
        return flat // self._nz, flat % self._nz
