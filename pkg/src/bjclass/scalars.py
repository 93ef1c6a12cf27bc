"""Arithmetic over R, C and H on real coordinate arrays.

A scalar of kind K is stored as its real coordinates: 1 for R, 2 for C
(re, im) and 4 for H (w, x, y, z) with the Hamilton product i*j = k.
Vectorized helpers act on the trailing axis of numpy arrays, so a whole
matrix of quaternions is just an array of shape (n, n, 4).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class Kind(str, enum.Enum):
    R = "R"
    C = "C"
    H = "H"

    @property
    def dim(self) -> int:
        return _DIMS[self.value]

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, Kind):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown scalar kind {value!r}") from None

    def __str__(self) -> str:
        return self.value


_DIMS = {"R": 1, "C": 2, "H": 4}

# product table of the units 1, i, j, k: _UNITS[a][b] = (sign, index)
_UNITS = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
]


def _structure_tensor(d: int) -> np.ndarray:
    # T[c, a, b]: coefficient of unit c in (unit a) * (unit b)
    t = np.zeros((d, d, d))
    for a in range(d):
        for b in range(d):
            sign, c = _UNITS[a][b]
            t[c, a, b] = sign
    return t


MULT = {1: _structure_tensor(1), 2: _structure_tensor(2), 4: _structure_tensor(4)}
_CONJ = {d: np.array([1.0, -1.0, -1.0, -1.0][:d]) for d in (1, 2, 4)}


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product of coordinate arrays (broadcast over leading axes)."""
    d = a.shape[-1]
    if b.shape[-1] != d:
        raise ValueError("scalar kind mismatch")
    return np.einsum("cab,...a,...b->...c", MULT[d], a, b)


def conj(a: np.ndarray) -> np.ndarray:
    return a * _CONJ[a.shape[-1]]


def modulus(a: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.asarray(a, dtype=float) ** 2, axis=-1))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of (..., n, m, d) and (..., m, p, d) coordinate arrays."""
    d = a.shape[-1]
    if b.shape[-1] != d:
        raise ValueError("scalar kind mismatch")
    if d == 1:
        return (a[..., 0] @ b[..., 0])[..., None]
    return np.einsum("cab,...ika,...kjb->...ijc", MULT[d], a, b)


def matvec(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """(..., n, m, d) times (..., m, d)."""
    return matmul(a, x[..., :, None, :])[..., 0, :]


def adjoint(a: np.ndarray) -> np.ndarray:
    return conj(np.swapaxes(a, -2, -3))


def vdot(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """y* x for coordinate vectors of shape (..., n, d), returned as (..., d)."""
    return mul(conj(y), x).sum(axis=-2)


def to_complex(a: np.ndarray) -> np.ndarray:
    """Complex view of C coordinates (..., 2); R coordinates are cast."""
    if a.shape[-1] == 1:
        return a[..., 0].astype(complex)
    if a.shape[-1] != 2:
        raise ValueError("quaternions have no complex form")
    return a[..., 0] + 1j * a[..., 1]


def from_complex(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z)
    return np.stack([z.real, z.imag], axis=-1).astype(float)


@dataclass(frozen=True)
class Scalar:
    kind: Kind
    coords: tuple

    def __post_init__(self):
        kind = Kind.parse(self.kind)
        coords = tuple(float(c) for c in self.coords)
        if len(coords) != kind.dim:
            raise ValueError(f"{kind.value} scalar needs {kind.dim} coordinates")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, kind, *coords) -> "Scalar":
        kind = Kind.parse(kind)
        c = list(coords) + [0.0] * (kind.dim - len(coords))
        return cls(kind, tuple(c))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    def _check(self, other: "Scalar"):
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.kind != self.kind:
            raise ValueError(f"kind mismatch: {self.kind.value} vs {other.kind.value}")

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Scalar(self.kind, tuple(other * c for c in self.coords))
        self._check(other)
        return Scalar(self.kind, tuple(mul(self.array, other.array)))

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __add__(self, other):
        self._check(other)
        return Scalar(self.kind, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return Scalar(self.kind, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Scalar(self.kind, tuple(-c for c in self.coords))

    def conj(self) -> "Scalar":
        return Scalar(self.kind, tuple(conj(self.array)))

    @property
    def modulus(self) -> float:
        return math.sqrt(sum(c * c for c in self.coords))

    def __abs__(self) -> float:
        return self.modulus

    @property
    def real(self) -> float:
        return self.coords[0]

    def isclose(self, other: "Scalar", tol: float = 1e-9) -> bool:
        self._check(other)
        return (self - other).modulus <= tol

    def to_json(self):
        return encode_scalar(self.array)

    @classmethod
    def from_json(cls, value, kind) -> "Scalar":
        return cls(Kind.parse(kind), tuple(decode_scalar(value, kind)))


def quat_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def quat_conj(a: Scalar) -> Scalar:
    return a.conj()


def encode_scalar(coords: np.ndarray):
    coords = [float(c) for c in np.asarray(coords).ravel()]
    return coords[0] if len(coords) == 1 else coords


def decode_scalar(value, kind) -> np.ndarray:
    kind = Kind.parse(kind)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        out = np.zeros(kind.dim)
        out[0] = value
        return out
    if isinstance(value, (list, tuple)) and len(value) in (1, 2, 4):
        if len(value) > kind.dim:
            raise ValueError(f"entry {value!r} does not fit a {kind.value} block")
        out = np.zeros(kind.dim)
        out[: len(value)] = [float(v) for v in value]
        return out
    raise ValueError(f"cannot decode scalar {value!r}")


@dataclass(frozen=True, eq=False)
class BlockVector:
    """A vector in the direct sum of K_k^{n_k}; blocks[k] has shape (n_k, d_k)."""

    kinds: tuple
    blocks: tuple

    def __post_init__(self):
        kinds = tuple(Kind.parse(k) for k in self.kinds)
        blocks = tuple(np.asarray(b, dtype=float) for b in self.blocks)
        if len(kinds) != len(blocks):
            raise ValueError("one coordinate array per block required")
        for k, b in zip(kinds, blocks):
            if b.ndim != 2 or b.shape[1] != k.dim:
                raise ValueError(f"block of kind {k.value} needs shape (n, {k.dim})")
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "blocks", blocks)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(float(np.sum(b * b)) for b in self.blocks))

    def scaled(self, c: float) -> "BlockVector":
        return BlockVector(self.kinds, tuple(c * b for b in self.blocks))

    def right_mul(self, lams: Sequence[np.ndarray]) -> "BlockVector":
        """Multiply block k on the right by the scalar lams[k]."""
        return BlockVector(self.kinds, tuple(mul(b, np.asarray(l, dtype=float))
                                             for b, l in zip(self.blocks, lams)))


def inner_product_F(x: BlockVector, y: BlockVector, field) -> float | complex:
    """<x, y>_F: Re(y* x) summed over blocks for F = R, y* x for F = C."""
    field = Kind.parse(field)
    if field == Kind.H:
        raise ValueError("base field must be R or C")
    if x.kinds != y.kinds or any(a.shape != b.shape for a, b in zip(x.blocks, y.blocks)):
        raise ValueError("block vectors have different shapes")
    total = np.zeros(2)
    for kind, xb, yb in zip(x.kinds, x.blocks, y.blocks):
        if field == Kind.C and kind != Kind.C:
            raise ValueError(f"complex inner product on a {kind.value} block")
        s = vdot(yb, xb)
        total[: min(2, kind.dim)] += s[:2]
    if field == Kind.R:
        return float(total[0])
    return complex(total[0], total[1])
