"""Finite-dimensional C*-algebras as direct sums of matrix blocks.

An algebra over F (R or C) is M_{n_1}(K_1) + ... + M_{n_l}(K_l) with each
K_k in {R, C, H}.  Elements keep one coordinate array of shape
(n_k, n_k, d_k) per block.  Numerical work goes through the complex adjoint
embedding (quaternion Q = A + B j maps to [[A, B], [-conj B, conj A]]),
which is a *-homomorphism and an isometry for operator norms; real blocks
stay real so that their singular vectors are real too.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import scalars as sc
from .scalars import Kind

DEFAULT_TOL = 1e-9
# relative gap below which quaternionic singular values are treated as one cluster
CLUSTER_TOL = 1e-9
# duplicate pairs of the complex adjoint embedding must agree to this (relative)
PAIR_TOL = 1e-8


class SvdError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Block:
    n: int
    kind: Kind

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"block size must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def d(self) -> int:
        return self.kind.dim

    @property
    def real_dim(self) -> int:
        return self.d * self.n * self.n

    @property
    def shape(self) -> tuple:
        return (self.n, self.n, self.d)

    def __str__(self) -> str:
        return self.kind.value if self.n == 1 else f"M{self.n}({self.kind.value})"


@dataclass(frozen=True)
class Algebra:
    field: Kind
    blocks: tuple

    def __post_init__(self):
        field = Kind.parse(self.field)
        if field == Kind.H:
            raise ValueError("the base field must be R or C")
        blocks = tuple(b if isinstance(b, Block) else Block(*b) for b in self.blocks)
        if not blocks:
            raise ValueError("an algebra needs at least one block")
        if field == Kind.C:
            for b in blocks:
                if b.kind != Kind.C:
                    raise ValueError(f"complex algebras only have complex blocks, got {b}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, field, *blocks) -> "Algebra":
        """Algebra.of("R", "R", "C", (2, "H"))"""
        out = []
        for b in blocks:
            if isinstance(b, Block):
                out.append(b)
            elif isinstance(b, (str, Kind)):
                out.append(Block(1, Kind.parse(b)))
            else:
                out.append(Block(*b))
        return cls(Kind.parse(field), tuple(out))

    @classmethod
    def parse(cls, text) -> "Algebra":
        from .formats import parse_algebra
        return parse_algebra(text)

    def __str__(self) -> str:
        return f"field={self.field.value}; " + " + ".join(str(b) for b in self.blocks)

    def to_json(self) -> dict:
        return {"field": self.field.value,
                "blocks": [{"n": b.n, "k": b.kind.value} for b in self.blocks]}

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def real_dim(self) -> int:
        return sum(b.real_dim for b in self.blocks)

    @property
    def dim(self) -> int:
        """Dimension over the base field."""
        return self.real_dim // self.field.dim

    @cached_property
    def offsets(self) -> tuple:
        """Start of each block in the flattened real coordinate vector."""
        out, pos = [], 0
        for b in self.blocks:
            out.append(pos)
            pos += b.real_dim
        return tuple(out)

    @property
    def pseudo_indices(self) -> tuple:
        return tuple(i for i, b in enumerate(self.blocks) if b.n == 1)

    @property
    def nonpseudo_indices(self) -> tuple:
        return tuple(i for i, b in enumerate(self.blocks) if b.n > 1)

    @property
    def is_pseudo_abelian(self) -> bool:
        return all(b.n == 1 for b in self.blocks)

    def canonical(self) -> "Algebra":
        order = {Kind.R: 0, Kind.C: 1, Kind.H: 2}
        return Algebra(self.field, tuple(sorted(self.blocks, key=lambda b: (b.n, order[b.kind]))))

    def sub(self, indices: Sequence[int]) -> "Algebra":
        return Algebra(self.field, tuple(self.blocks[i] for i in indices))


# ---------------------------------------------------------------- embeddings

def complex_embed(m: np.ndarray, kind) -> np.ndarray:
    """Natural coordinates (..., n, n, d) to a real (R) or complex matrix."""
    kind = Kind.parse(kind)
    m = np.asarray(m, dtype=float)
    if kind == Kind.R:
        return m[..., 0]
    if kind == Kind.C:
        return m[..., 0] + 1j * m[..., 1]
    a = m[..., 0] + 1j * m[..., 1]
    b = m[..., 2] + 1j * m[..., 3]
    top = np.concatenate([a, b], axis=-1)
    bottom = np.concatenate([-b.conj(), a.conj()], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def complex_unembed(z: np.ndarray, kind) -> np.ndarray:
    """Inverse of complex_embed (reads the defining entries only)."""
    kind = Kind.parse(kind)
    z = np.asarray(z)
    if kind == Kind.R:
        return np.real(z)[..., None].astype(float)
    if kind == Kind.C:
        return sc.from_complex(z)
    n = z.shape[-1] // 2
    a = z[..., :n, :n]
    b = z[..., :n, n:]
    return np.stack([a.real, a.imag, b.real, b.imag], axis=-1)


def embed_vector(x: np.ndarray, kind) -> np.ndarray:
    """Natural vector (..., n, d) to its image under the embedding (first column)."""
    kind = Kind.parse(kind)
    x = np.asarray(x, dtype=float)
    if kind == Kind.R:
        return x[..., 0]
    if kind == Kind.C:
        return x[..., 0] + 1j * x[..., 1]
    top = x[..., 0] + 1j * x[..., 1]
    bottom = -x[..., 2] + 1j * x[..., 3]
    return np.concatenate([top, bottom], axis=-1)


def unembed_vector(v: np.ndarray, kind) -> np.ndarray:
    kind = Kind.parse(kind)
    v = np.asarray(v)
    if kind == Kind.R:
        return np.real(v)[..., None].astype(float)
    if kind == Kind.C:
        return sc.from_complex(v)
    n = v.shape[-1] // 2
    top, bottom = v[..., :n], v[..., n:]
    return np.stack([top.real, top.imag, -bottom.real, bottom.imag], axis=-1)


def quaternion_partner(v: np.ndarray) -> np.ndarray:
    """For v = embed(x) returns embed(x j), the second column of the 2x2 image."""
    n = v.shape[-1] // 2
    return np.concatenate([-v[..., n:].conj(), v[..., :n].conj()], axis=-1)


def real_embed(m: np.ndarray, kind) -> np.ndarray:
    """Standard real form: each entry becomes its d x d left-multiplication matrix."""
    kind = Kind.parse(kind)
    m = np.asarray(m, dtype=float)
    n, d = m.shape[-2], kind.dim
    big = np.einsum("cab,...ija->...icjb", sc.MULT[d], m)
    return big.reshape(m.shape[:-3] + (n * d, n * d))


# ---------------------------------------------------------------- elements

def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Element:
    algebra: Algebra
    blocks: tuple

    def __post_init__(self):
        if len(self.blocks) != len(self.algebra.blocks):
            raise ValueError("one matrix per block required")
        blocks = []
        for blk, m in zip(self.algebra.blocks, self.blocks):
            m = np.asarray(m, dtype=float)
            if m.shape == (blk.n, blk.n) and blk.d == 1:
                m = m[..., None]
            if m.shape != blk.shape:
                raise ValueError(f"block {blk} needs shape {blk.shape}, got {m.shape}")
            blocks.append(_frozen(m))
        object.__setattr__(self, "blocks", tuple(blocks))

    # construction
    @classmethod
    def zeros(cls, algebra: Algebra) -> "Element":
        return cls(algebra, tuple(np.zeros(b.shape) for b in algebra.blocks))

    @classmethod
    def identity(cls, algebra: Algebra) -> "Element":
        out = []
        for b in algebra.blocks:
            m = np.zeros(b.shape)
            m[np.arange(b.n), np.arange(b.n), 0] = 1.0
            out.append(m)
        return cls(algebra, tuple(out))

    @classmethod
    def from_embedded(cls, algebra: Algebra, mats: Sequence[np.ndarray]) -> "Element":
        return cls(algebra, tuple(complex_unembed(z, b.kind) for b, z in zip(algebra.blocks, mats)))

    @classmethod
    def from_vec(cls, algebra: Algebra, vec: np.ndarray) -> "Element":
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (algebra.real_dim,):
            raise ValueError("coordinate vector has the wrong length")
        return cls(algebra, tuple(vec[o:o + b.real_dim].reshape(b.shape)
                                  for o, b in zip(algebra.offsets, algebra.blocks)))

    @classmethod
    def single_block(cls, algebra: Algebra, k: int, m: np.ndarray) -> "Element":
        blocks = [np.zeros(b.shape) for b in algebra.blocks]
        blocks[k] = np.asarray(m, dtype=float).reshape(algebra.blocks[k].shape)
        return cls(algebra, tuple(blocks))

    # derived data
    @cached_property
    def emb(self) -> tuple:
        return tuple(complex_embed(m, b.kind) for b, m in zip(self.algebra.blocks, self.blocks))

    @cached_property
    def vec(self) -> np.ndarray:
        return np.concatenate([m.ravel() for m in self.blocks])

    @cached_property
    def block_norms(self) -> np.ndarray:
        return np.array([np.linalg.norm(z, 2) if z.size else 0.0 for z in self.emb])

    @property
    def norm(self) -> float:
        return float(self.block_norms.max())

    @cached_property
    def svd(self) -> "SvdResult":
        return svd(self)

    def frame(self, tol: float = DEFAULT_TOL) -> "NormFrame":
        return norm_frame(self, tol)

    def is_zero(self) -> bool:
        return not any(np.any(m) for m in self.blocks)

    # arithmetic
    def _same(self, other: "Element"):
        if not isinstance(other, Element) or other.algebra != self.algebra:
            raise ValueError("elements live in different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.algebra, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple(-a for a in self.blocks))

    def scale(self, lam) -> "Element":
        """Multiply by a base-field scalar."""
        lam = complex(lam)
        if lam.imag == 0:
            return Element(self.algebra, tuple(lam.real * a for a in self.blocks))
        if self.algebra.field != Kind.C:
            raise ValueError("non-real scalar on a real algebra")
        c = np.array([lam.real, lam.imag])
        return Element(self.algebra, tuple(sc.mul(a, c) for a in self.blocks))

    def __mul__(self, lam) -> "Element":
        if isinstance(lam, (int, float, complex, np.number)):
            return self.scale(lam)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.algebra, tuple(sc.matmul(a, b) for a, b in zip(self.blocks, other.blocks)))

    def adjoint(self) -> "Element":
        return Element(self.algebra, tuple(sc.adjoint(a) for a in self.blocks))

    def apply(self, x: sc.BlockVector) -> sc.BlockVector:
        return sc.BlockVector(x.kinds, tuple(sc.matvec(a, v) for a, v in zip(self.blocks, x.blocks)))

    def allclose(self, other: "Element", tol: float = 1e-9) -> bool:
        self._same(other)
        return all(np.max(np.abs(a - b), initial=0.0) <= tol for a, b in zip(self.blocks, other.blocks))

    def with_block_zeroed(self, k: int) -> "Element":
        blocks = list(self.blocks)
        blocks[k] = np.zeros_like(blocks[k])
        return Element(self.algebra, tuple(blocks))

    def to_json(self) -> list:
        return [[[sc.encode_scalar(m[i, j]) for j in range(m.shape[1])] for i in range(m.shape[0])]
                for m in self.blocks]

    @classmethod
    def from_json(cls, algebra: Algebra, data) -> "Element":
        if not isinstance(data, list) or len(data) != len(algebra.blocks):
            raise ValueError(f"expected a list of {len(algebra.blocks)} matrices")
        out = []
        for k, (b, rows) in enumerate(zip(algebra.blocks, data)):
            if not isinstance(rows, list) or len(rows) != b.n or any(
                    not isinstance(r, list) or len(r) != b.n for r in rows):
                raise ValueError(f"block {k} must be a {b.n}x{b.n} list of rows")
            try:
                out.append(np.array([[sc.decode_scalar(v, b.kind) for v in r] for r in rows]))
            except ValueError as exc:
                raise ValueError(f"block {k}: {exc}") from None
        return cls(algebra, tuple(out))

    def __repr__(self) -> str:
        return f"Element({self.algebra}, norm={self.norm:.6g})"


def block_vector_zeros(algebra: Algebra) -> sc.BlockVector:
    return sc.BlockVector(tuple(b.kind for b in algebra.blocks),
                          tuple(np.zeros((b.n, b.d)) for b in algebra.blocks))


# ---------------------------------------------------------------- Gram-Schmidt over K

def _project_out(v: np.ndarray, basis: Sequence[np.ndarray]) -> np.ndarray:
    # v - sum u (u* v), scalars acting on the right
    for u in basis:
        v = v - sc.mul(u, sc.vdot(u, v)[..., None, :])
    return v


def gram_schmidt(columns: np.ndarray) -> np.ndarray:
    """Orthonormalize the columns of (..., n, m, d) over K (right scalars).

    Batched over leading axes; assumes the columns are in general position.
    """
    cols = []
    for j in range(columns.shape[-2]):
        v = _project_out(columns[..., :, j, :], cols)
        v = _project_out(v, cols)
        v = v / np.sqrt(np.sum(v * v, axis=(-2, -1), keepdims=True))
        cols.append(v)
    return np.stack(cols, axis=-2)


def _pivoted_completion(cands: list, basis: list, needed: int) -> list:
    """Add `needed` orthonormal vectors from the span of cands to basis."""
    cands = [_project_out(_project_out(c, basis), basis) for c in cands]
    added = []
    for _ in range(needed):
        norms = [float(np.sqrt(np.sum(c * c))) for c in cands]
        if not norms or max(norms) < 1e-6:
            raise SvdError("could not extract an orthonormal frame over the quaternions")
        j = int(np.argmax(norms))
        u = cands.pop(j) / norms[j]
        added.append(u)
        cands = [_project_out(_project_out(c, [u]), [u]) for c in cands]
    return added


def random_unitary(n: int, kind, rng: np.random.Generator, batch: tuple = ()) -> np.ndarray:
    kind = Kind.parse(kind)
    return gram_schmidt(rng.standard_normal(batch + (n, n, kind.dim)))


def is_unitary(u: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    u = np.asarray(u, dtype=float)
    prod = sc.matmul(sc.adjoint(u), u)
    eye = np.zeros_like(prod)
    eye[..., np.arange(u.shape[-2]), np.arange(u.shape[-2]), 0] = 1.0
    return float(np.max(np.abs(prod - eye), initial=0.0)) <= tol


# ---------------------------------------------------------------- SVD

@dataclass(frozen=True, eq=False)
class BlockSvd:
    """values[i] with left[:, i] = y_i and right[:, i] = x_i (natural coordinates)."""

    kind: Kind
    values: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return sc.matmul(self.left * self.values[None, :, None], sc.adjoint(self.right))


@dataclass(frozen=True, eq=False)
class SvdResult:
    blocks: tuple

    @property
    def values(self) -> tuple:
        return tuple(b.values for b in self.blocks)

    def reconstruct(self, algebra: Algebra) -> Element:
        return Element(algebra, tuple(b.reconstruct() for b in self.blocks))


def _cluster_bounds(values: np.ndarray) -> list:
    top = values[0] if values.size else 0.0
    bounds, start = [], 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i - 1] - values[i] > CLUSTER_TOL * max(top, 1e-300):
            bounds.append((start, i))
            start = i
    return bounds


def _svd_quaternion(m: np.ndarray) -> BlockSvd:
    n = m.shape[0]
    z = complex_embed(m, Kind.H)
    try:
        _, s, vh = np.linalg.svd(z)
    except np.linalg.LinAlgError as exc:
        raise SvdError(f"SVD failed to converge: {exc}") from exc
    top = s[0]
    for i in range(n):
        if abs(s[2 * i] - s[2 * i + 1]) > PAIR_TOL * max(top, 1e-300):
            raise SvdError(f"complex adjoint singular values do not pair up: {s[2 * i]} vs {s[2 * i + 1]}")
    values = 0.5 * (s[0::2] + s[1::2])
    v = vh.conj().T
    right: list = []
    for lo, hi in _cluster_bounds(values):
        cands = [unembed_vector(v[:, c], Kind.H) for c in range(2 * lo, 2 * hi)]
        right += _pivoted_completion(cands, right, hi - lo)
    right_arr = np.stack(right, axis=1)
    left: list = []
    cutoff = 1e-12 * max(top, 1e-300)
    for i in range(n):
        if values[i] > cutoff:
            y = sc.matvec(m, right_arr[:, i]) / values[i]
            y = _project_out(_project_out(y, left), left)
            left.append(y / np.sqrt(np.sum(y * y)))
        else:
            basis = [np.zeros((n, 4)) for _ in range(n)]
            for j in range(n):
                basis[j][j, 0] = 1.0
            left += _pivoted_completion(basis, left, n - i)
            break
    return BlockSvd(Kind.H, values, np.stack(left, axis=1), right_arr)


def svd_block(m: np.ndarray, kind) -> BlockSvd:
    kind = Kind.parse(kind)
    m = np.asarray(m, dtype=float)
    if kind == Kind.H:
        return _svd_quaternion(m)
    z = complex_embed(m, kind)
    try:
        u, s, vh = np.linalg.svd(z)
    except np.linalg.LinAlgError as exc:
        raise SvdError(f"SVD failed to converge: {exc}") from exc
    if kind == Kind.R:
        return BlockSvd(kind, s, u[..., None], vh.T[..., None])
    return BlockSvd(kind, s, sc.from_complex(u), sc.from_complex(vh.conj().T))


def svd(a: Element) -> SvdResult:
    return SvdResult(tuple(svd_block(m, b.kind) for b, m in zip(a.algebra.blocks, a.blocks)))


# ---------------------------------------------------------------- norm frames

@dataclass(frozen=True, eq=False)
class NormFrame:
    """Orthonormal K-bases (columns, natural coordinates) of M_0*(A_k) per block."""

    algebra: Algebra
    norm: float
    frames: tuple

    @property
    def dims(self) -> tuple:
        return tuple(f.shape[1] for f in self.frames)

    @property
    def attaining(self) -> tuple:
        return tuple(k for k, f in enumerate(self.frames) if f.shape[1] > 0)

    def vector(self, coeffs: Sequence[np.ndarray]) -> sc.BlockVector:
        """Combination sum_j f_j c_j per block (coeffs[k] has shape (r_k, d_k))."""
        out = []
        for b, f, c in zip(self.algebra.blocks, self.frames, coeffs):
            if f.shape[1] == 0:
                out.append(np.zeros((b.n, b.d)))
            else:
                out.append(sc.matvec(f, np.asarray(c, dtype=float)))
        return sc.BlockVector(tuple(b.kind for b in self.algebra.blocks), tuple(out))

    def contains(self, x: sc.BlockVector, tol: float = 1e-8) -> bool:
        res = 0.0
        for f, v in zip(self.frames, x.blocks):
            if f.shape[1]:
                p = sc.matvec(f, sc.matvec(sc.adjoint(f), v))
                v = v - p
            res += float(np.sum(v * v))
        return np.sqrt(res) <= tol * x.norm


def norm_frame(a: Element, tol: float = DEFAULT_TOL) -> NormFrame:
    norm = a.norm
    frames = []
    if norm == 0.0:
        for b in a.algebra.blocks:
            eye = np.zeros((b.n, b.n, b.d))
            eye[np.arange(b.n), np.arange(b.n), 0] = 1.0
            frames.append(eye)
        return NormFrame(a.algebra, 0.0, tuple(frames))
    cut = (1.0 - tol) * norm
    for b, s in zip(a.algebra.blocks, a.svd.blocks):
        keep = s.values >= cut
        frames.append(s.right[:, keep])
    return NormFrame(a.algebra, norm, tuple(frames))


# ---------------------------------------------------------------- isometries

def apply_isometry(a: Element, u: Sequence[np.ndarray], v: Sequence[np.ndarray],
                   tol: float = DEFAULT_TOL) -> Element:
    """Blockwise U_k A_k V_k* for block unitaries U, V."""
    if len(u) != len(a.blocks) or len(v) != len(a.blocks):
        raise ValueError("one unitary per block required")
    out = []
    for b, m, uk, vk in zip(a.algebra.blocks, a.blocks, u, v):
        uk = np.asarray(uk, dtype=float)
        vk = np.asarray(vk, dtype=float)
        if uk.shape != b.shape or vk.shape != b.shape:
            raise ValueError(f"unitary for block {b} has the wrong shape")
        if not (is_unitary(uk, tol) and is_unitary(vk, tol)):
            raise ValueError("isometry factors must be unitary")
        out.append(sc.matmul(sc.matmul(uk, m), sc.adjoint(vk)))
    return Element(a.algebra, tuple(out))


def random_isometry(algebra: Algebra, rng: np.random.Generator) -> tuple:
    u = tuple(random_unitary(b.n, b.kind, rng) for b in algebra.blocks)
    v = tuple(random_unitary(b.n, b.kind, rng) for b in algebra.blocks)
    return u, v


def block_permute(a: Element, perm: Sequence[int]) -> Element:
    """New block i is old block perm[i]; only equal blocks may trade places."""
    perm = list(perm)
    if sorted(perm) != list(range(len(a.blocks))):
        raise ValueError(f"{perm} is not a permutation of the blocks")
    for i, j in enumerate(perm):
        if a.algebra.blocks[i] != a.algebra.blocks[j]:
            raise ValueError(f"cannot move block {a.algebra.blocks[j]} to a {a.algebra.blocks[i]} slot")
    return Element(a.algebra, tuple(a.blocks[j] for j in perm))


def random_legal_permutation(algebra: Algebra, rng: np.random.Generator) -> list:
    perm = list(range(len(algebra)))
    groups: dict = {}
    for i, b in enumerate(algebra.blocks):
        groups.setdefault(b, []).append(i)
    for idx in groups.values():
        shuffled = list(rng.permutation(idx))
        for i, j in zip(idx, shuffled):
            perm[i] = int(j)
    return perm


# ---------------------------------------------------------------- random elements

def _with_values(b: Block, values: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    u = random_unitary(b.n, b.kind, rng)
    v = random_unitary(b.n, b.kind, rng)
    return sc.matmul(u * np.asarray(values, dtype=float)[None, :, None], sc.adjoint(v))


def _unimodular(kind: Kind, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal(kind.dim)
    return x / np.linalg.norm(x)


def _law_gaussian(alg, rng):
    return [rng.standard_normal(b.shape) for b in alg.blocks]


def _law_sparse(alg, rng):
    blocks = _law_gaussian(alg, rng)
    keep = rng.random(len(blocks)) < 0.5
    keep[rng.integers(len(blocks))] = True
    return [m if k else np.zeros_like(m) for m, k in zip(blocks, keep)]


def _law_single(alg, rng):
    blocks = [np.zeros(b.shape) for b in alg.blocks]
    k = rng.integers(len(blocks))
    blocks[k] = rng.standard_normal(alg.blocks[k].shape)
    return blocks


def _law_left(alg, rng):
    ones = alg.pseudo_indices
    if not ones:
        return _law_single(alg, rng)
    blocks = [np.zeros(b.shape) for b in alg.blocks]
    k = ones[rng.integers(len(ones))]
    blocks[k] = rng.standard_normal(alg.blocks[k].shape)
    return blocks


def _law_unitary(alg, rng):
    # c * (U_1, ..., U_l); with probability 1/3 one block is spoiled
    c = rng.uniform(0.2, 3.0)
    blocks = [c * random_unitary(b.n, b.kind, rng) for b in alg.blocks]
    if rng.random() < 1 / 3:
        k = rng.integers(len(blocks))
        b = alg.blocks[k]
        vals = np.full(b.n, c)
        vals[rng.integers(b.n)] *= rng.choice([0.0, 0.5, 1.5])
        blocks[k] = _with_values(b, vals, rng)
    return blocks


def _law_tied(alg, rng):
    blocks = _law_gaussian(alg, rng)
    norms = [np.linalg.norm(complex_embed(m, b.kind), 2) for b, m in zip(alg.blocks, blocks)]
    top = max(norms)
    chosen = rng.choice(len(blocks), size=min(len(blocks), rng.integers(2, 4)), replace=False)
    for k in chosen:
        if norms[k] > 0:
            blocks[k] = blocks[k] * (top / norms[k])
    return blocks


def _law_degenerate(alg, rng):
    blocks = [np.zeros(b.shape) for b in alg.blocks]
    for k, b in enumerate(alg.blocks):
        vals = np.sort(rng.uniform(0.0, 1.0, b.n))[::-1]
        if b.n >= 2 and rng.random() < 0.7:
            mult = rng.integers(2, b.n + 1)
            vals[:mult] = 1.0
        elif rng.random() < 0.5:
            vals[0] = 1.0
        if rng.random() < 0.3:
            vals[-1] = 0.0
        blocks[k] = _with_values(b, vals, rng)
    return blocks


def _law_near(alg, rng):
    blocks = _law_degenerate(alg, rng)
    big = [k for k, b in enumerate(alg.blocks) if b.n >= 2]
    if big:
        k = big[rng.integers(len(big))]
        b = alg.blocks[k]
        vals = np.sort(rng.uniform(0.0, 0.5, b.n))[::-1]
        vals[0], vals[1] = 1.0, 1.0 - 1e-12
        blocks[k] = _with_values(b, vals, rng)
    return blocks


def _law_rank_one(alg, rng):
    blocks = [np.zeros(b.shape) for b in alg.blocks]
    k = rng.integers(len(blocks))
    b = alg.blocks[k]
    u = rng.standard_normal((b.n, 1, b.d))
    v = rng.standard_normal((b.n, 1, b.d))
    blocks[k] = sc.matmul(u, sc.adjoint(v))
    return blocks


def _law_zero(alg, rng):
    return [np.zeros(b.shape) for b in alg.blocks]


LAWS = {
    "gaussian": _law_gaussian,
    "sparse": _law_sparse,
    "single": _law_single,
    "left": _law_left,
    "unitary": _law_unitary,
    "tied": _law_tied,
    "degenerate": _law_degenerate,
    "near": _law_near,
    "rank_one": _law_rank_one,
    "zero": _law_zero,
}

MIXED_WEIGHTS = {
    "gaussian": 0.22, "sparse": 0.08, "single": 0.1, "left": 0.12, "unitary": 0.14,
    "tied": 0.1, "degenerate": 0.1, "near": 0.04, "rank_one": 0.08, "zero": 0.02,
}


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_element(algebra: Algebra, seed=None, law: str = "mixed") -> Element:
    """Random element; law is one of LAWS or "mixed" (a weighted blend)."""
    rng = _rng(seed)
    if law == "mixed":
        names = list(MIXED_WEIGHTS)
        p = np.array([MIXED_WEIGHTS[k] for k in names])
        law = names[rng.choice(len(names), p=p / p.sum())]
    if law not in LAWS:
        raise ValueError(f"unknown law {law!r}")
    blocks = LAWS[law](algebra, rng)
    scale = np.exp(rng.uniform(-1.0, 1.0))
    return Element(algebra, tuple(scale * m for m in blocks))
