"""Left/right symmetric and smooth elements, and supporting functionals.

A is left-symmetric when A^⊥ ⊆ ^⊥A (every B with A ⊥ B also has B ⊥ A) and
right-symmetric when ^⊥A ⊆ A^⊥.  Structurally, left-symmetric elements are
those living in a single 1x1 block, right-symmetric ones are scalar multiples
of unitaries, and smooth ones attain their norm on a single K-line of a single
block.  The sampled tests below decide the same properties from
orthogonality alone and are expected to agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import orthogonality as orth
from . import scalars as sc
from .blockalg import Algebra, Element, DEFAULT_TOL, gram_schmidt
from .scalars import Kind

LEFT_CHUNK = 24


class NotSmooth(ValueError):
    pass


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


# ---------------------------------------------------------------- left symmetry

def nonzero_blocks(a: Element, tol: float = DEFAULT_TOL) -> list:
    norm = a.norm
    if norm == 0.0:
        return []
    return [k for k, v in enumerate(a.block_norms) if v > tol * norm]


def is_left_symmetric_structural(a: Element, tol: float = DEFAULT_TOL) -> bool:
    ks = nonzero_blocks(a, tol)
    if not ks:
        return True
    return len(ks) == 1 and a.algebra.blocks[ks[0]].n == 1


def left_symmetry_counterexample(a: Element, trials: int = 300, seed=0,
                                 tol: float = DEFAULT_TOL) -> Element | None:
    """Some B with A ⊥ B but not B ⊥ A, searched among `trials` random B in A^⊥."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if a.is_zero():
        return None
    rng = _rng(seed)
    field_ = a.algebra.field
    done = 0
    chunk = min(LEFT_CHUNK, trials)
    while done < trials:
        size = min(chunk, trials - done)
        sample = orth.sample_outgoing(a, rng, size, tol)
        back = orth.orthogonal_batch(field_, sample.mats, a.emb, tol)
        if not back.all():
            return sample.element(int(np.argmin(back)))
        done += size
        chunk = 4 * chunk
    return None


def is_left_symmetric_sampled(a: Element, trials: int = 300, seed=0, tol: float = DEFAULT_TOL) -> bool:
    return left_symmetry_counterexample(a, trials, seed, tol) is None


# ---------------------------------------------------------------- right symmetry

def is_right_symmetric(a: Element, tol: float = DEFAULT_TOL) -> bool:
    """A_k* A_k = c I in every block with c = ||A||^2."""
    c = a.norm ** 2
    for z in a.emb:
        gram = np.conj(z).T @ z
        if np.max(np.abs(gram - c * np.eye(z.shape[0]))) > tol * c:
            return False
    return True


def unitary_extension(a: Element) -> Element:
    """||A|| * sum_i y_i x_i* over full singular frames: agrees with A on M_0(A)."""
    norm = a.norm
    blocks = []
    for s in a.svd.blocks:
        blocks.append(norm * sc.matmul(s.left, sc.adjoint(s.right)))
    return Element(a.algebra, tuple(blocks))


def right_symmetry_candidate(a: Element, tol: float = DEFAULT_TOL) -> Element | None:
    """C with A^⊥ ⊊ C^⊥ from the structured family, or None if there is none."""
    if a.is_zero():
        return None
    c = unitary_extension(a)
    if orth.strictly_contained(a, c, tol):
        return c
    return None


def is_right_symmetric_bj(a: Element, tol: float = DEFAULT_TOL) -> bool:
    return right_symmetry_candidate(a, tol) is None


def _f_dot(u: np.ndarray, a: np.ndarray, field_: Kind) -> np.ndarray:
    """<u, a>_F = a* u summed over the vector axis; (..., n, d) inputs."""
    s = sc.vdot(a, u)
    if field_ == Kind.R:
        return s[..., 0].astype(complex)
    return s[..., 0] + 1j * s[..., 1]


def sample_incoming(a: Element, rng: np.random.Generator, count: int) -> list:
    """Random W with W ⊥ A (natural coordinates, one (T, n, n, d) array per block).

    W attains its norm 1 exactly on ŷ_k in one or two chosen blocks, with
    W ŷ_k = u_k picked so that some positive combination of <u_k, A ŷ_k>_F
    vanishes (one block: projected; two blocks: rotated to opposite phases).
    """
    alg = a.algebra
    fld = alg.field
    nb = len(alg.blocks)
    two = (rng.random(count) < 0.5) & (nb > 1)
    k1 = rng.integers(nb, size=count)
    k2 = (k1 + 1 + rng.integers(max(nb - 1, 1), size=count)) % nb
    vs, us, us_proj, vals = [], [], [], []
    for k, b in enumerate(alg.blocks):
        v = gram_schmidt(rng.standard_normal((count,) + b.shape))
        y = v[:, :, 0, :]
        av = sc.matvec(np.broadcast_to(a.blocks[k], (count,) + b.shape), y)
        u = rng.standard_normal((count, b.n, b.d))
        u /= np.sqrt(np.sum(u * u, axis=(-2, -1), keepdims=True))
        # single-block variant: make <u, A y>_F vanish
        an2 = np.sum(av * av, axis=(-2, -1))
        safe = np.where(an2 > 0, an2, 1.0)
        coef = _f_dot(u, av, fld) / safe
        if fld == Kind.R:
            proj = u - coef.real[:, None, None] * av
        else:
            proj = u - sc.mul(av, np.stack([coef.real, coef.imag], axis=-1)[:, None, :])
        pn = np.sqrt(np.sum(proj * proj, axis=(-2, -1)))
        proj = proj / np.where(pn > 1e-8, pn, 1.0)[:, None, None]
        vs.append(v)
        us.append(u)
        us_proj.append((proj, pn > 1e-8))
        vals.append(_f_dot(u, av, fld))
    idx = np.arange(count)
    v1 = np.array([vals[k1[t]][t] for t in idx])
    v2 = np.array([vals[k2[t]][t] for t in idx])
    # rotate u at k2 so that v2 points against v1
    if fld == Kind.R:
        rot = np.where(v1.real * v2.real > 0, -1.0, 1.0).astype(complex)
    else:
        rot = np.exp(1j * (np.angle(v1) + np.pi - np.angle(v2)))
    out = []
    valid = np.ones(count, dtype=bool)
    for k, b in enumerate(alg.blocks):
        proj, ok = us_proj[k]
        if fld == Kind.R:
            rotated = us[k] * rot.real[:, None, None]
        else:
            rotated = sc.mul(us[k], np.stack([rot.real, rot.imag], axis=-1)[:, None, :])
        chosen_single = (~two) & (k1 == k)
        chosen_two = two & ((k1 == k) | (k2 == k))
        is_k2 = two & (k2 == k)
        first = np.where(is_k2[:, None, None], rotated, us[k])
        first_single = np.where(ok[:, None, None], proj, us[k])
        first = np.where(chosen_single[:, None, None], first_single, first)
        valid &= ~(chosen_single & ~ok)
        cols = rng.standard_normal((count,) + b.shape)
        cols[:, :, 0, :] = first
        u_mat = gram_schmidt(cols)
        top = chosen_single | chosen_two
        s = rng.uniform(0.0, 0.98, size=(count, b.n))
        s[:, 0] = np.where(top, 1.0, s[:, 0])
        rho = np.where(top, 1.0, np.where(rng.random(count) < 0.2, 0.0, rng.uniform(0.0, 0.95, count)))
        s = s * rho[:, None]
        if b.n > 1:
            s[:, 1:] = np.minimum(s[:, 1:], 0.98 * s[:, :1])
        w = sc.matmul(u_mat * s[:, None, :, None], sc.adjoint(vs[k]))
        out.append(w)
    return [m[valid] for m in out]


def right_symmetry_counterexample(a: Element, trials: int = 64, seed=0,
                                  tol: float = DEFAULT_TOL) -> Element | None:
    """Some W with W ⊥ A but not A ⊥ W among `trials` random incoming W."""
    if a.is_zero():
        return None
    rng = _rng(seed)
    alg = a.algebra
    nat = sample_incoming(a, rng, trials)
    if nat[0].shape[0] == 0:
        return None
    emb = orth.embed_batch(alg, nat)
    incoming = orth.orthogonal_batch(alg.field, emb, a.emb, tol)
    forward = orth.orthogonal_batch(alg.field, a.emb, emb, tol)
    bad = incoming & ~forward
    if bad.any():
        t = int(np.argmax(bad))
        return Element(alg, tuple(m[t] for m in nat))
    return None


def is_right_symmetric_sampled(a: Element, trials: int = 64, seed=0, tol: float = DEFAULT_TOL) -> bool:
    """No incoming counterexample and no strict-containment candidate."""
    if right_symmetry_candidate(a, tol) is not None:
        return False
    return right_symmetry_counterexample(a, trials, seed, tol) is None


# ---------------------------------------------------------------- smoothness

@dataclass(frozen=True, eq=False)
class SupportingFunctional:
    """X -> <X_i x_i, A_i x_i>_F / ||A_i|| for the unique norming line x_i of block i."""

    algebra: Algebra
    block: int
    x: np.ndarray
    direction: np.ndarray

    def __call__(self, other: Element):
        xv = sc.matvec(other.blocks[self.block], self.x)
        s = sc.vdot(self.direction, xv)
        if self.algebra.field == Kind.R:
            return float(s[0])
        return complex(s[0], s[1])

    def gradient(self) -> Element:
        """G with f(X) = <X, G> (real Frobenius pairing for F = R)."""
        g = sc.matmul(self.direction[:, None, :], sc.adjoint(self.x[:, None, :]))
        return Element.single_block(self.algebra, self.block, g)

    def real_rows(self) -> np.ndarray:
        """Rows r with Re f(X) = r . vec(X) (and Im f for F = C)."""
        g = self.gradient()
        if self.algebra.field == Kind.R:
            return g.vec[None, :]
        return np.stack([g.vec, g.scale(1j).vec])

    def compression(self) -> Element:
        """(A_i x_i) x_i* in block i: an element with the same outgoing neighbourhood."""
        g = self.gradient()
        return g

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.direction ** 2)) * np.sqrt(np.sum(self.x ** 2)))


def is_smooth(a: Element, tol: float = DEFAULT_TOL) -> bool:
    if a.is_zero():
        return False
    dims = a.frame(tol).dims
    return sum(1 for r in dims if r > 0) == 1 and max(dims) == 1


def supporting_functional(a: Element, tol: float = DEFAULT_TOL) -> SupportingFunctional:
    if not is_smooth(a, tol):
        raise NotSmooth("not smooth")
    return _functional_at(a, a.frame(tol).attaining[0], 0, tol)


def _functional_at(a: Element, k: int, j: int, tol: float) -> SupportingFunctional:
    fr = a.frame(tol)
    x = fr.frames[k][:, j, :]
    d = sc.matvec(a.blocks[k], x) / a.block_norms[k]
    return SupportingFunctional(a.algebra, k, np.array(x), np.array(d))


def norming_functionals(a: Element, tol: float = DEFAULT_TOL) -> list:
    """One supporting functional per norming frame vector."""
    fr = a.frame(tol)
    return [_functional_at(a, k, j, tol) for k in fr.attaining for j in range(fr.frames[k].shape[1])]


def smooth_candidates(a: Element, tol: float = DEFAULT_TOL) -> list:
    """Single-block compressions (A x) x* over frame vectors, and per-block truncations."""
    alg = a.algebra
    if a.is_zero():
        k = 0
        unit = np.zeros(alg.blocks[k].shape)
        unit[0, 0, 0] = 1.0
        return [Element.single_block(alg, k, unit)]
    out = [f.compression() for f in norming_functionals(a, tol)]
    for k in a.frame(tol).attaining:
        out.append(Element.single_block(alg, k, a.blocks[k]))
    return out


def smooth_counterexample(a: Element, tol: float = DEFAULT_TOL) -> Element | None:
    """B with B^⊥ ⊊ A^⊥ from the candidate family, if any."""
    for b in smooth_candidates(a, tol):
        if orth.strictly_contained(b, a, tol):
            return b
    return None


def is_smooth_bj(a: Element, tol: float = DEFAULT_TOL) -> bool:
    return smooth_counterexample(a, tol) is None


def functional_kernel_test(a: Element, seed=0, kernel: int = 200, off: int = 50,
                           tol: float = DEFAULT_TOL) -> dict:
    """Check A^⊥ = ker f for the functional f at the first norming vector.

    `kernel` random elements of ker f must all be ⊥-successors of A, and of
    `off` further candidates every one lying outside ker f must fail.  Holds exactly when the
    supporting functional is unique, i.e. when A is smooth.
    """
    if a.is_zero():
        return {"unique": False, "reason": "every norm-one functional supports 0"}
    rng = _rng(seed)
    alg = a.algebra
    f = norming_functionals(a, tol)[0]
    rows = f.real_rows()
    norm = a.norm

    def project(nat):
        raw = np.concatenate([m.reshape(m.shape[0], -1) for m in nat], axis=1)
        if alg.field == Kind.R:
            vec = raw - np.outer(raw @ rows[0] / norm, a.vec)
        else:
            c = (raw @ rows[0] + 1j * (raw @ rows[1])) / norm
            vec = raw - np.outer(c.real, a.vec) - np.outer(c.imag, a.scale(1j).vec)
        # X parallel to A projects to rounding noise, which is really 0
        size = np.linalg.norm(raw, axis=1)
        noise = np.linalg.norm(vec, axis=1) <= 1e-12 * np.maximum(size, norm)
        return np.where(noise[:, None], 0.0, vec)

    def to_blocks(vec):
        out = []
        for o, b in zip(alg.offsets, alg.blocks):
            out.append(vec[:, o:o + b.real_dim].reshape((vec.shape[0],) + b.shape))
        return out

    kern = project(orth.random_natural(alg, rng, kernel))
    ok_kernel = orth.orthogonal_batch(alg.field, a.emb, orth.embed_batch(alg, to_blocks(kern)), tol)
    # half shifted kernel elements, half drawn from A^⊥ itself; every one
    # that is outside ker f must fail to be a ⊥-successor
    half = off // 2
    base = project(orth.random_natural(alg, rng, off - half))
    mag = 10.0 ** rng.uniform(-3.0, 0.0, off - half) * rng.choice([-1.0, 1.0], off - half)
    if alg.field == Kind.R:
        shift = np.outer(mag, a.vec)
    else:
        ph = np.exp(1j * rng.uniform(0, 2 * np.pi, off - half)) * mag
        shift = np.outer(ph.real, a.vec) + np.outer(ph.imag, a.scale(1j).vec)
    shifted = orth.embed_batch(alg, to_blocks(base + shift))
    drawn = orth.sample_outgoing(a, rng, half, tol)
    cand = [np.concatenate([np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)])
            for x, y in zip(shifted, drawn.mats)]
    vals = [abs(f(drawn.element(t))) for t in range(half)]
    sizes = orth._batch_norms(drawn.mats)
    outside = np.concatenate([np.ones(off - half, dtype=bool),
                              np.array(vals, dtype=float).reshape(-1) > 1e-7 * norm * sizes])
    ok_off = orth.orthogonal_batch(alg.field, a.emb, cand, tol) & outside
    unique = bool(ok_kernel.all() and not ok_off.any())
    return {"unique": unique, "kernel_orthogonal": int(ok_kernel.sum()), "kernel_samples": kernel,
            "off_kernel_orthogonal": int(ok_off.sum()), "off_kernel_samples": int(outside.sum())}


# ---------------------------------------------------------------- verdicts

@dataclass
class SymmetryVerdict:
    left: bool
    right: bool
    smooth: bool
    mode: str
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"left": self.left, "right": self.right, "smooth": self.smooth,
                "mode": self.mode, "evidence": self.evidence}


def structural_verdict(a: Element, tol: float = DEFAULT_TOL) -> SymmetryVerdict:
    return SymmetryVerdict(is_left_symmetric_structural(a, tol), is_right_symmetric(a, tol),
                           is_smooth(a, tol), "structural")


def sampled_verdict(a: Element, trials: int = 300, seed=0, tol: float = DEFAULT_TOL) -> SymmetryVerdict:
    rng = _rng(seed)
    evidence: dict[str, Any] = {"trials": trials}
    lc = left_symmetry_counterexample(a, trials, rng, tol)
    if lc is not None:
        evidence["left_counterexample"] = lc.to_json()
    rc = right_symmetry_candidate(a, tol)
    if rc is not None:
        evidence["right_strict_superset"] = rc.to_json()
    else:
        rw = right_symmetry_counterexample(a, min(trials, 64), rng, tol)
        if rw is not None:
            evidence["right_counterexample"] = rw.to_json()
            rc = rw
    sc_ = smooth_counterexample(a, tol)
    if sc_ is not None:
        evidence["smooth_strict_subset"] = sc_.to_json()
    return SymmetryVerdict(lc is None, rc is None, sc_ is None, "sampled", evidence)
