"""Recovering the block structure of an algebra from orthogonality alone.

The pipeline only asks BJ questions (is A ⊥ B, are two outgoing
neighbourhoods equal, is A left-symmetric or smooth) and intersects
hyperplanes A^⊥ of smooth elements.  From that it recovers

* L^⊥ and L^⊥⊥ (nonpseudo-abelian and pseudo-abelian summands),
* on the pseudo-abelian part: s, the block count ℓ, the field, r and h,
* the abelian summand (1x1 real and complex blocks).

A structural ground truth read off the block list is kept alongside for
comparison.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg

from . import orthogonality as orth
from . import symmetry as sym
from .blockalg import (Algebra, Element, DEFAULT_TOL, apply_isometry, block_permute,
                       random_isometry, random_legal_permutation)
from .scalars import Kind

RANK_TOL = 1e-9
ANGLE_TOL = 1e-8
FL_SAMPLES = 50
DICT_RANDOM = 8
LEFT_TRIALS = 64


class FieldUndecidable(ValueError):
    pass


class InconsistentSignature(ArithmeticError):
    pass


class NotBlockDecomposable(ValueError):
    pass


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


# ---------------------------------------------------------------- subspaces

def _orthonormal_rows(vectors: np.ndarray, size: int) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=float).reshape(-1, size)
    if vectors.shape[0] == 0:
        return np.zeros((0, size))
    u, s, _ = np.linalg.svd(vectors.T, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((0, size))
    keep = s > RANK_TOL * s[0]
    return u[:, keep].T


@dataclass(frozen=True, eq=False)
class Subspace:
    """Real-linear subspace of an algebra; rows of `basis` are orthonormal vec coordinates."""

    algebra: Algebra
    basis: np.ndarray

    @classmethod
    def full(cls, algebra: Algebra) -> "Subspace":
        return cls(algebra, np.eye(algebra.real_dim))

    @classmethod
    def zero(cls, algebra: Algebra) -> "Subspace":
        return cls(algebra, np.zeros((0, algebra.real_dim)))

    @classmethod
    def blocks(cls, algebra: Algebra, indices: Sequence[int]) -> "Subspace":
        """Sum of the listed blocks."""
        rows = []
        for k in indices:
            o, d = algebra.offsets[k], algebra.blocks[k].real_dim
            rows.append(np.eye(algebra.real_dim)[o:o + d])
        return cls(algebra, np.concatenate(rows) if rows else np.zeros((0, algebra.real_dim)))

    @classmethod
    def span(cls, algebra: Algebra, vectors) -> "Subspace":
        return cls(algebra, _orthonormal_rows(vectors, algebra.real_dim))

    @property
    def dim(self) -> int:
        """Real dimension."""
        return int(self.basis.shape[0])

    def _block_rank(self, k: int) -> int:
        o, d = self.algebra.offsets[k], self.algebra.blocks[k].real_dim
        part = self.basis[:, o:o + d]
        if part.size == 0:
            return 0
        s = np.linalg.svd(part, compute_uv=False)
        return int(np.sum(s > RANK_TOL * max(s[0], 1.0))) if s.size else 0

    @property
    def block_dims(self) -> tuple:
        """Real dimension of the projection onto each block."""
        return tuple(self._block_rank(k) for k in range(len(self.algebra.blocks)))

    @property
    def support(self) -> tuple:
        return tuple(k for k, d in enumerate(self.block_dims) if d > 0)

    @property
    def is_block_decomposable(self) -> bool:
        return sum(self.block_dims) == self.dim

    def component(self, k: int) -> "Subspace":
        """Intersection with block k."""
        return self.intersect(Subspace.blocks(self.algebra, [k]))

    def project(self, vec: np.ndarray) -> np.ndarray:
        return (vec @ self.basis.T) @ self.basis

    def contains(self, vec: np.ndarray, tol: float = ANGLE_TOL) -> bool:
        vec = np.asarray(vec, dtype=float)
        return float(np.linalg.norm(vec - self.project(vec))) <= tol * float(np.linalg.norm(vec))

    def complement(self) -> "Subspace":
        if self.dim == 0:
            return Subspace.full(self.algebra)
        return Subspace(self.algebra, linalg.null_space(self.basis, rcond=RANK_TOL).T)

    def with_rows(self, rows) -> "Subspace":
        """Intersection with the common kernel of the given real functionals."""
        rows = np.asarray(rows, dtype=float).reshape(-1, self.algebra.real_dim)
        if rows.shape[0] == 0 or self.dim == 0:
            return self
        # rank is judged against the stacked functionals themselves, so a row
        # already implied by the subspace (projection ~1e-17) counts as zero
        cut = RANK_TOL * np.linalg.norm(rows, 2)
        m = rows @ self.basis.T
        _, sv, vh = np.linalg.svd(m, full_matrices=True)
        rank = int(np.sum(sv > cut))
        return Subspace(self.algebra, vh[rank:] @ self.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        return self.with_rows(other.complement().basis)

    def angle_residual(self, other: "Subspace") -> float:
        """Largest sine of a principal angle (inf when the dimensions differ)."""
        if self.dim != other.dim:
            return float("inf")
        if self.dim == 0:
            return 0.0
        return float(np.max(np.sin(linalg.subspace_angles(self.basis.T, other.basis.T))))

    def equals(self, other: "Subspace", tol: float = ANGLE_TOL) -> bool:
        return self.angle_residual(other) <= tol

    def element(self, coeffs: np.ndarray) -> Element:
        return Element.from_vec(self.algebra, np.asarray(coeffs) @ self.basis)

    def random_element(self, rng: np.random.Generator) -> Element:
        return self.element(rng.standard_normal(self.dim))

    def embed(self, algebra: Algebra, indices: Sequence[int]) -> "Subspace":
        """Carry a subspace of algebra.sub(indices) into algebra."""
        out = np.zeros((self.dim, algebra.real_dim))
        for j, k in enumerate(indices):
            o_small, d = self.algebra.offsets[j], self.algebra.blocks[j].real_dim
            o_big = algebra.offsets[k]
            out[:, o_big:o_big + d] = self.basis[:, o_small:o_small + d]
        return Subspace(algebra, out)

    def to_json(self) -> dict:
        return {"dim": self.dim, "block_dims": list(self.block_dims),
                "basis": [[float(x) for x in row] for row in self.basis]}


def perp_of_smooth(elements: Sequence[Element], within: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    """within ∩ ⋂ A^⊥ for smooth A, each A^⊥ being the kernel of its supporting functional."""
    rows = [sym.supporting_functional(a, tol).real_rows() for a in elements]
    if not rows:
        return within
    return within.with_rows(np.concatenate(rows))


# ---------------------------------------------------------------- probes

class Probe:
    """Builds the test elements the pipeline uses.

    The default probe is the identity; a transformed probe pushes every
    element through a BJ isomorphism (block unitaries and a legal block
    permutation), which must leave every verdict unchanged.
    """

    def __init__(self, algebra: Algebra, u=None, v=None, perm=None):
        self.algebra = algebra
        self.u, self.v, self.perm = u, v, perm

    @classmethod
    def random(cls, algebra: Algebra, seed) -> "Probe":
        rng = _rng(seed)
        u, v = random_isometry(algebra, rng)
        return cls(algebra, u, v, random_legal_permutation(algebra, rng))

    def __call__(self, a: Element) -> Element:
        if self.u is not None:
            a = apply_isometry(a, self.u, self.v)
        if self.perm is not None:
            a = block_permute(a, self.perm)
        return a

    def scalar(self, k: int, coords) -> Element:
        """The scalar `coords` placed in the 1x1 block k."""
        b = self.algebra.blocks[k]
        m = np.zeros(b.shape)
        m[0, 0, :] = coords
        return self(Element.single_block(self.algebra, k, m))

    def sub(self, indices: Sequence[int]) -> "Probe":
        alg = self.algebra.sub(indices)
        if self.u is None and self.perm is None:
            return Probe(alg)
        pos = {k: j for j, k in enumerate(indices)}
        perm = None
        if self.perm is not None:
            perm = [pos[self.perm[k]] for k in indices]
        u = None if self.u is None else tuple(self.u[k] for k in indices)
        v = None if self.v is None else tuple(self.v[k] for k in indices)
        return Probe(alg, u, v, perm)


def _unit(d: int, i: int) -> np.ndarray:
    e = np.zeros(d)
    e[i] = 1.0
    return e


def _unimodular(d: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal(d)
    return x / np.linalg.norm(x)


def unit_dictionary(probe: Probe, rng: np.random.Generator, extra: int = DICT_RANDOM) -> list:
    """Per 1x1 block: the units {1, i, j, k} ∩ K and `extra` random unimodular scalars."""
    out = []
    for k, b in enumerate(probe.algebra.blocks):
        if b.n != 1:
            continue
        for i in range(b.d):
            out.append(probe.scalar(k, _unit(b.d, i)))
        for _ in range(extra):
            out.append(probe.scalar(k, _unimodular(b.d, rng)))
    return out


def _decoys(probe: Probe) -> list:
    """Elements that look like generators but are not left-symmetric."""
    alg = probe.algebra
    out = []
    for k, b in enumerate(alg.blocks):
        if b.n > 1:
            m = np.zeros(b.shape)
            m[0, 0, 0] = 1.0
            out.append(probe(Element.single_block(alg, k, m)))
    ones = alg.pseudo_indices
    for k1, k2 in zip(ones, ones[1:]):
        out.append(probe.scalar(k1, _unit(alg.blocks[k1].d, 0)) + probe.scalar(k2, _unit(alg.blocks[k2].d, 0)))
    return out


# ---------------------------------------------------------------- neighbourhood classes

def distinct_neighborhoods(elements: Sequence[Element], tol: float = DEFAULT_TOL) -> int:
    """Number of distinct outgoing neighbourhoods among the elements."""
    reps: list = []
    for a in elements:
        if not any(orth.neighborhood_equal(a, r, tol) for r in reps):
            reps.append(a)
    return len(reps)


def _component_samples(space: Subspace, rng: np.random.Generator, per_block: int, blocks=None) -> list:
    out = []
    for k in (space.support if blocks is None else blocks):
        comp = space.component(k)
        for _ in range(per_block if comp.dim else 0):
            out.append(comp.random_element(rng))
    return out


# ---------------------------------------------------------------- left-symmetric summands

@dataclass(frozen=True, eq=False)
class LeftSummands:
    left_symmetric: tuple
    rejected: int
    perp: Subspace
    perp_perp: Subspace


def perp_of_subspace(space: Subspace, rng: np.random.Generator, tol: float = DEFAULT_TOL) -> Subspace:
    """⋂_{A ∈ space} A^⊥, from smooth elements of the block components of `space`.

    A non-smooth A has A^⊥ containing B^⊥ for a compression B of A, so
    smooth elements suffice as long as the compressions stay in `space`,
    which holds for the full-block subspaces this is used on.
    """
    full = Subspace.full(space.algebra)
    if space.dim == 0:
        return full
    samples = []
    for k in space.support:
        comp = space.component(k)
        count = comp.dim + 4 if comp.dim else 0
        samples += [comp.random_element(rng) for _ in range(count)]
    if not space.is_block_decomposable:
        samples += [space.random_element(rng) for _ in range(space.dim + 8)]
    smooth = [a for a in samples if sym.is_smooth_bj(a, tol) and sym.is_smooth(a, tol)]
    return perp_of_smooth(smooth, full, tol)


def left_summands(algebra: Algebra, seed=0, probe: Probe | None = None,
                  trials: int = LEFT_TRIALS, tol: float = DEFAULT_TOL) -> LeftSummands:
    rng = _rng(seed)
    probe = probe or Probe(algebra)
    cands = unit_dictionary(probe, rng) + _decoys(probe)
    left, rejected = [], 0
    for a in cands:
        if sym.is_left_symmetric_sampled(a, trials, rng, tol) and sym.is_smooth_bj(a, tol):
            left.append(a)
        else:
            rejected += 1
    perp = perp_of_smooth(left, Subspace.full(algebra), tol)
    return LeftSummands(tuple(left), rejected, perp, perp_of_subspace(perp, rng, tol))


def pseudo_abelian_summand(algebra: Algebra, seed=0, probe: Probe | None = None,
                           tol: float = DEFAULT_TOL) -> tuple:
    """(L^⊥, L^⊥⊥): the nonpseudo-abelian and pseudo-abelian summands."""
    s = left_summands(algebra, seed, probe, tol=tol)
    return s.perp, s.perp_perp


# ---------------------------------------------------------------- property FL

def has_property_FL(space: Subspace) -> bool:
    """Finitely many outgoing neighbourhoods among the left-symmetric elements of `space`.

    Left-symmetric elements live in single 1x1 blocks; the family is finite
    exactly when each such block meets `space` in at most one F-line.
    """
    if not space.is_block_decomposable:
        raise NotBlockDecomposable("property FL is only decided for block-decomposable subspaces")
    alg = space.algebra
    return all(d <= alg.field.dim for b, d in zip(alg.blocks, space.block_dims) if b.n == 1)


def fl_crosscheck(space: Subspace, seed=0, samples: int = FL_SAMPLES, tol: float = DEFAULT_TOL) -> bool:
    """Sampled FL: draw single-block elements and call the family finite when it
    shows no more distinct neighbourhoods than blocks."""
    rng = _rng(seed)
    alg = space.algebra
    blocks = [k for k in space.support if alg.blocks[k].n == 1]
    if not blocks:
        return True
    comps = {k: space.component(k) for k in blocks}
    blocks = [k for k in blocks if comps[k].dim]
    if not blocks:
        return True
    elems = [comps[k].random_element(rng) for k in rng.choice(blocks, size=samples)]
    return distinct_neighborhoods(elems, tol) <= len(blocks)


# ---------------------------------------------------------------- pseudo-abelian invariants

def _require_pseudo(algebra: Algebra):
    if not algebra.is_pseudo_abelian:
        raise ValueError(f"{algebra} is not pseudo-abelian")


@dataclass(frozen=True, eq=False)
class FLSet:
    elements: tuple
    space: Subspace
    leave_one_out: tuple
    lower_bound: int

    @property
    def s(self) -> int:
        return len(self.elements)

    @property
    def certified(self) -> bool:
        return has_property_FL(self.space) and not any(self.leave_one_out) and self.s == self.lower_bound


def minimal_fl_set(algebra: Algebra, probe: Probe | None = None, tol: float = DEFAULT_TOL) -> FLSet:
    """Smooth A_1..A_s with ⋂ A_k^⊥ having property FL, s minimal.

    One element per imaginary unit of K beyond F in each block; minimality is
    certified by leave-one-out and the dimension count: each A^⊥ removes
    dim_R F real dimensions and a block of real dimension d must drop to dim_R F.
    """
    _require_pseudo(algebra)
    probe = probe or Probe(algebra)
    f = algebra.field.dim
    elems = []
    for k, b in enumerate(algebra.blocks):
        for i in range(f, b.d):
            elems.append(probe.scalar(k, _unit(b.d, i)))
    full = Subspace.full(algebra)
    space = perp_of_smooth(elems, full, tol)
    loo = tuple(has_property_FL(perp_of_smooth(elems[:i] + elems[i + 1:], full, tol))
                for i in range(len(elems)))
    bound = sum(-(-max(0, b.d - f) // f) for b in algebra.blocks)
    return FLSet(tuple(elems), space, loo, bound)


def count_blocks(algebra: Algebra, fl: FLSet | None = None, seed=0, tol: float = DEFAULT_TOL) -> int:
    """ℓ: distinct neighbourhoods of nonzero left-symmetric elements of ⋂ A_k^⊥."""
    _require_pseudo(algebra)
    fl = fl or minimal_fl_set(algebra, tol=tol)
    return _count_left_classes(fl.space, _rng(seed), tol)


def _count_left_classes(space: Subspace, rng: np.random.Generator, tol: float) -> int:
    elems = _component_samples(space, rng, 2)
    elems = [a for a in elems if not a.is_zero() and sym.is_left_symmetric_sampled(a, 32, rng, tol)]
    return distinct_neighborhoods(elems, tol)


def dimension_bj(algebra: Algebra, seed=0, tol: float = DEFAULT_TOL) -> int:
    fl = minimal_fl_set(algebra, tol=tol)
    return fl.s + count_blocks(algebra, fl, seed, tol)


def detect_field(algebra: Algebra, seed=0, probe: Probe | None = None, dim: int | None = None,
                 samples: int = FL_SAMPLES, tol: float = DEFAULT_TOL) -> Kind:
    """ℂ iff left-symmetric neighbourhoods are finitely many and right-symmetric ones are not."""
    _require_pseudo(algebra)
    rng = _rng(seed)
    probe = probe or Probe(algebra)
    if dim is None:
        dim = dimension_bj(algebra, rng, tol)
    if dim < 2:
        raise FieldUndecidable("field undecidable: R and C are BJ isomorphic in dimension 1")
    nb = len(algebra.blocks)
    per_block = max(6, -(-samples // nb))
    ones = [probe.scalar(k, _unit(b.d, 0)) for k, b in enumerate(algebra.blocks)]
    base = ones[0]
    for x in ones[1:]:
        base = base + x
    left_finite = right_finite = True
    for k, b in enumerate(algebra.blocks):
        # left-symmetric: nonzero scalars of block k, one class if finite
        left = [probe.scalar(k, _unimodular(b.d, rng) * np.exp(rng.uniform(-1, 1))) for _ in range(per_block)]
        left_finite &= distinct_neighborhoods(left, tol) <= 1
        # right-symmetric: unimodular tuples differing in block k, at most ±1 if finite
        right = [base - ones[k] + probe.scalar(k, _unimodular(b.d, rng)) for _ in range(per_block)]
        right_finite &= distinct_neighborhoods(right, tol) <= 2
    if left_finite and not right_finite:
        return Kind.C
    if left_finite == right_finite:
        return Kind.R
    raise InconsistentSignature("finitely many right-symmetric but infinitely many left-symmetric neighbourhoods")


def count_real_blocks(algebra: Algebra, fl: FLSet | None = None, seed=0, probe: Probe | None = None,
                      tol: float = DEFAULT_TOL) -> int:
    """r for F = R: neighbourhood classes of left-symmetric elements of Ω = ⋂_{A ∈ Ξ} A^⊥,
    Ξ being the left-symmetric A that can stand in for some member of the FL set."""
    _require_pseudo(algebra)
    if algebra.field != Kind.R:
        raise ValueError("count_real_blocks needs the real field")
    rng = _rng(seed)
    probe = probe or Probe(algebra)
    fl = fl or minimal_fl_set(algebra, probe, tol)
    full = Subspace.full(algebra)
    rest = [perp_of_smooth(fl.elements[:m] + fl.elements[m + 1:], full, tol) for m in range(fl.s)]
    xi = []
    for a in unit_dictionary(probe, rng):
        if any(has_property_FL(perp_of_smooth([a], r, tol)) for r in rest):
            xi.append(a)
    omega = perp_of_smooth(xi, full, tol)
    return _count_left_classes(omega, rng, tol)


# ---------------------------------------------------------------- abelian summand

def _abelian_in_pseudo(algebra: Algebra, probe: Probe, rng: np.random.Generator, tol: float) -> Subspace:
    """Triple search for the abelian summand of a pseudo-abelian algebra over R."""
    full = Subspace.full(algebra)
    omega = list(minimal_fl_set(algebra, probe, tol).elements)
    if len(omega) < 3:
        return full
    rows = [sym.supporting_functional(a, tol).real_rows() for a in omega]
    cands = [a for a in unit_dictionary(probe, rng)]
    cand_rows = [sym.supporting_functional(a, tol).real_rows() for a in cands]
    keep_rows = []
    for trio in itertools.combinations(range(len(omega)), 3):
        without = []
        for i in trio:
            others = [rows[j] for j in range(len(omega)) if j != i]
            without.append(full.with_rows(np.concatenate(others)))
        chosen = [cr for cr in cand_rows if all(has_property_FL(w.with_rows(cr)) for w in without)]
        if chosen:
            keep_rows += [rows[i] for i in trio] + chosen
    if not keep_rows:
        return full
    return full.with_rows(np.concatenate(keep_rows))


def abelian_summand(algebra: Algebra, seed=0, probe: Probe | None = None,
                    summands: LeftSummands | None = None, tol: float = DEFAULT_TOL) -> Subspace:
    """1x1 real and complex blocks, extracted inside L^⊥⊥."""
    rng = _rng(seed)
    probe = probe or Probe(algebra)
    summands = summands or left_summands(algebra, rng, probe, tol=tol)
    pseudo = summands.perp_perp
    idx = pseudo.support
    if not idx or algebra.field == Kind.C:
        return pseudo
    sub = algebra.sub(idx)
    inner = _abelian_in_pseudo(sub, probe.sub(idx), rng, tol)
    return inner.embed(algebra, idx).intersect(pseudo)


# ---------------------------------------------------------------- signatures

@dataclass
class Signature:
    field: str
    blocks: int
    s: int
    dim: int
    r: int
    c: int
    h: int
    nonpseudo: tuple

    def key(self) -> tuple:
        return (self.field, self.r, self.c, self.h, self.nonpseudo)

    def to_json(self) -> dict:
        return {"field": self.field, "l": self.blocks, "s": self.s, "dim": self.dim,
                "r": self.r, "c": self.c, "h": self.h, "nonpseudo": list(self.nonpseudo)}


def _nonpseudo_multiset(algebra: Algebra) -> tuple:
    return tuple(sorted(str(b) for b in algebra.blocks if b.n > 1))


def structural_signature(algebra: Algebra) -> Signature:
    """Ground truth read off the block list.

    r counts 1x1 blocks whose scalars are the base field itself, so over C
    every block is counted in r and c = h = 0.
    """
    ones = [algebra.blocks[k] for k in algebra.pseudo_indices]
    f = algebra.field
    r = sum(1 for b in ones if b.kind == f)
    h = sum(1 for b in ones if b.kind == Kind.H)
    c = len(ones) - r - h
    s = c + 3 * h
    dim = sum(b.d for b in ones) // f.dim
    return Signature(f.value, len(ones), s, dim, r, c, h, _nonpseudo_multiset(algebra))


@dataclass
class ClassificationReport:
    algebra: Algebra
    mode: str
    signature: Signature | None
    structural: Signature | None
    pseudo_abelian: Subspace | None = None
    nonpseudo_abelian: Subspace | None = None
    abelian: Subspace | None = None
    field_decided: bool = True
    provenance: dict = field(default_factory=dict)

    @property
    def matches(self) -> bool | None:
        if self.signature is None or self.structural is None:
            return None
        return self.signature.to_json() == self.structural.to_json()

    def to_json(self) -> dict:
        out = {"algebra": str(self.algebra), "mode": self.mode}
        sig = self.signature or self.structural
        out.update(sig.to_json())
        if not self.field_decided and self.signature is not None:
            out["field"] = "undecidable"
        out["field_decided"] = self.field_decided
        if self.signature is not None and self.structural is not None:
            out["structural"] = self.structural.to_json()
            out["matches_structural"] = self.matches
        for name in ("pseudo_abelian", "nonpseudo_abelian", "abelian"):
            sp = getattr(self, name)
            if sp is not None:
                out[name] = {"dim": sp.dim, "block_dims": list(sp.block_dims)}
        out["provenance"] = self.provenance
        return out

    def table_rows(self) -> list:
        data = self.to_json()
        return [(k, v) for k, v in data.items() if not isinstance(v, dict)]


def bj_signature(algebra: Algebra, seed=0, probe: Probe | None = None,
                 tol: float = DEFAULT_TOL) -> ClassificationReport:
    rng = _rng(seed)
    probe = probe or Probe(algebra)
    summands = left_summands(algebra, rng, probe, tol=tol)
    idx = summands.perp_perp.support
    prov = {k: "bj" for k in ("field", "l", "s", "dim", "r", "c", "h")}
    prov["nonpseudo"] = "structural"
    decided = True
    if not idx:
        sig = Signature(algebra.field.value, 0, 0, 0, 0, 0, 0, _nonpseudo_multiset(algebra))
        prov["field"] = "structural"
        decided = False
    else:
        sub = algebra.sub(idx)
        sp = probe.sub(idx)
        fl = minimal_fl_set(sub, sp, tol)
        if not fl.certified:
            raise InconsistentSignature(f"FL set of size {fl.s} for {sub} is not certified minimal")
        ell = count_blocks(sub, fl, rng, tol)
        dim = fl.s + ell
        try:
            fld = detect_field(sub, rng, sp, dim, tol=tol)
        except FieldUndecidable:
            # dimension one: the single block is the base field either way
            fld = algebra.field
            prov["field"] = "structural"
            decided = False
        r = count_real_blocks(sub, fl, rng, sp, tol) if fld == Kind.R else ell
        twice_h = fl.s - (ell - r)
        if twice_h % 2 or twice_h < 0:
            raise InconsistentSignature(f"s={fl.s}, l={ell}, r={r} give a non-integer h")
        h = twice_h // 2
        c = ell - r - h
        if c < 0:
            raise InconsistentSignature(f"s={fl.s}, l={ell}, r={r} give c < 0")
        sig = Signature(fld.value, ell, fl.s, dim, r, c, h, _nonpseudo_multiset(algebra))
    abel = abelian_summand(algebra, rng, probe, summands, tol)
    return ClassificationReport(algebra, "bj", sig, None, summands.perp_perp, summands.perp, abel,
                                decided, prov)


def signature(algebra: Algebra, mode: str = "both", seed=0, probe: Probe | None = None,
              tol: float = DEFAULT_TOL) -> ClassificationReport:
    if mode not in ("structural", "bj", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    truth = structural_signature(algebra)
    if mode == "structural":
        return ClassificationReport(
            algebra, mode, None, truth,
            Subspace.blocks(algebra, algebra.pseudo_indices),
            Subspace.blocks(algebra, algebra.nonpseudo_indices),
            Subspace.blocks(algebra, structural_abelian_indices(algebra)),
            provenance={"all": "structural"})
    report = bj_signature(algebra, seed, probe, tol)
    if mode == "both":
        report.structural = truth
        report.mode = "both"
    return report


def structural_abelian_indices(algebra: Algebra) -> tuple:
    return tuple(k for k, b in enumerate(algebra.blocks) if b.n == 1 and b.kind != Kind.H)


def signatures_equal(a: ClassificationReport, b: ClassificationReport) -> bool:
    """Same pseudo-abelian signature (F, r, c, h) and the same nonpseudo blocks.

    When the field could not be decided (one-dimensional pseudo-abelian part)
    the field is not compared, since R and C are then BJ isomorphic.
    """
    sa = a.signature or a.structural
    sb = b.signature or b.structural
    if (sa.r, sa.c, sa.h, sa.nonpseudo) != (sb.r, sb.c, sb.h, sb.nonpseudo):
        return False
    if a.field_decided and b.field_decided:
        return sa.field == sb.field
    if sa.nonpseudo:
        # the nonpseudo part is compared structurally, field included
        return a.algebra.field == b.algebra.field
    return True


def block_counts(algebra: Algebra) -> Counter:
    return Counter(str(b) for b in algebra.blocks)
