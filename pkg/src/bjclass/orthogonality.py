"""Birkhoff-James orthogonality A ⊥ B: spectral test, brute-force oracle, witnesses.

A ⊥ B iff ||A + λB|| >= ||A|| for every scalar λ.  On block sums this holds
iff some unit x in M_0(A) (the span of the norm-attaining right singular
vectors of the blocks that attain ||A||) has <Ax, Bx>_F = 0.  With D the
compression of A*B to M_0(A), that means 0 lies in the range of
Re x*Dx (F = R, an interval) or in the numerical range W(D) (F = C).

Most functions here work on batches of embedded block matrices of shape
(T, m, m): real for R blocks, complex adjoint images for C and H blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np
from scipy import optimize

from . import scalars as sc
from .blockalg import Algebra, Element, DEFAULT_TOL, complex_unembed, embed_vector, unembed_vector
from .scalars import Kind

THETA_SAMPLES = 64
REFINE_PEAKS = 4
REFINE_STEPS = 48
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class DescriptorMismatch(ValueError):
    pass


def _check_pair(a: Element, b: Element):
    if a.algebra != b.algebra:
        raise DescriptorMismatch(f"{a.algebra} vs {b.algebra}")


def _herm(d: np.ndarray) -> np.ndarray:
    return 0.5 * (d + np.conj(np.swapaxes(d, -1, -2)))


def _skew(d: np.ndarray) -> np.ndarray:
    # (D - D*) / 2i, the "imaginary part" of D; zero for real D
    return (d - np.conj(np.swapaxes(d, -1, -2))) / 2j


# ---------------------------------------------------------------- frames

@dataclass
class Frames:
    """Norm-attaining data of a batch of elements.

    vecs[k] holds the first rmax[k] right singular vectors of block k
    (columns), and count[k][t] how many of them span M_0*(A_k) for item t.
    """

    norms: np.ndarray
    vecs: list
    count: list

    @property
    def size(self) -> int:
        return self.norms.shape[0]


def compute_frames(mats: Sequence[np.ndarray], tol: float = DEFAULT_TOL) -> Frames:
    mats = [m if m.ndim == 3 else m[None] for m in mats]
    svals, vs = [], []
    for m in mats:
        _, s, vh = np.linalg.svd(m)
        svals.append(s)
        vs.append(np.conj(np.swapaxes(vh, -1, -2)))
    norms = np.max(np.stack([s[:, 0] for s in svals], axis=1), axis=1)
    cut = ((1.0 - tol) * norms)[:, None]
    zero = norms == 0.0
    vecs, count = [], []
    for s, v in zip(svals, vs):
        c = np.where(zero, s.shape[1], np.sum(s >= cut, axis=1))
        r = int(c.max())
        vecs.append(v[:, :, :r])
        count.append(c)
    return Frames(norms, vecs, count)


def embed_element(a: Element) -> list:
    return [z[None] for z in a.emb]


def embed_batch(algebra: Algebra, natural: Sequence[np.ndarray]) -> list:
    from .blockalg import complex_embed
    return [complex_embed(m, b.kind) for b, m in zip(algebra.blocks, natural)]


def _compressions(frames: Frames, a_mats, b_mats) -> list:
    out = []
    for v, a, b in zip(frames.vecs, a_mats, b_mats):
        if v.shape[2] == 0:
            out.append(None)
            continue
        a = a if a.ndim == 3 else a[None]
        b = b if b.ndim == 3 else b[None]
        av = a @ v
        bv = b @ v
        out.append(np.conj(np.swapaxes(av, -1, -2)) @ bv)
    return out


def _masked(h: np.ndarray, count: np.ndarray, big: np.ndarray) -> np.ndarray:
    # keep the leading count x count corner, push the rest of the spectrum to +big
    r = h.shape[-1]
    idx = np.arange(r)
    keep = idx[None, :] < count[:, None]
    out = np.where(keep[:, :, None] & keep[:, None, :], h, 0.0)
    diag = np.where(keep, 0.0, big[:, None])
    out = out + diag[:, :, None] * np.eye(r)[None]
    return out


def _bounds(frames: Frames, comps: list, scale: np.ndarray):
    """Per item min of λ_min and max of λ_max of Herm(D_k) over attaining blocks."""
    t = frames.size
    lo = np.full(t, np.inf)
    hi = np.full(t, -np.inf)
    big = 4.0 * (scale + 1.0)
    for d, c in zip(comps, frames.count):
        if d is None:
            continue
        c = np.broadcast_to(c, (max(t, d.shape[0]),))
        big_b = np.broadcast_to(big, c.shape)
        ev = np.linalg.eigvalsh(_masked(_herm(d), c, big_b))
        has = c > 0
        top = np.take_along_axis(ev, np.maximum(c - 1, 0)[:, None], axis=1)[:, 0]
        lo = np.where(has, np.minimum(lo, ev[:, 0]), lo)
        hi = np.where(has, np.maximum(hi, top), hi)
    return lo, hi


def _gmin(frames: Frames, herms: list, skews: list, theta: np.ndarray, big: np.ndarray) -> np.ndarray:
    """g(θ) = min_k λ_min(cos θ H_k - sin θ K_k) restricted to frames; theta (T, P)."""
    t, p = theta.shape
    out = np.full((t, p), np.inf)
    cos = np.cos(theta)[:, :, None, None]
    sin = np.sin(theta)[:, :, None, None]
    for h, s, c in zip(herms, skews, frames.count):
        if h is None:
            continue
        r = h.shape[-1]
        m = cos * h[:, None] - sin * s[:, None]
        keep = np.arange(r)[None, :] < c[:, None]
        mask2 = (keep[:, :, None] & keep[:, None, :])[:, None]
        m = np.where(mask2, m, 0.0) + (np.where(keep, 0.0, big[:, None])[:, None, :, None] * np.eye(r))
        ev = np.linalg.eigvalsh(m)[..., 0]
        ev = np.where((c > 0)[:, None], ev, np.inf)
        out = np.minimum(out, ev)
    return out


def _max_g(frames: Frames, comps: list, scale: np.ndarray, thr: np.ndarray) -> np.ndarray:
    """Refined max over θ of g(θ); rows whose sampled max already exceeds thr are not refined."""
    t = frames.size
    big = 4.0 * (scale + 1.0)
    herms = [None if d is None else np.broadcast_to(_herm(d), (t,) + d.shape[1:]) for d in comps]
    skews = [None if d is None else np.broadcast_to(_skew(d), (t,) + d.shape[1:]) for d in comps]
    grid = np.linspace(0.0, 2.0 * math.pi, THETA_SAMPLES, endpoint=False)
    g = _gmin(frames, herms, skews, np.broadcast_to(grid, (t, THETA_SAMPLES)), big)
    best = g.max(axis=1)
    todo = np.nonzero(best <= thr)[0]
    if todo.size == 0:
        return best
    # local maxima of the sampled circle, best REFINE_PEAKS of them per row
    sub = g[todo]
    is_peak = (sub >= np.roll(sub, 1, axis=1)) & (sub >= np.roll(sub, -1, axis=1))
    ranked = np.argsort(np.where(is_peak, -sub, np.inf), axis=1)[:, :REFINE_PEAKS]
    step = 2.0 * math.pi / THETA_SAMPLES
    rows = np.repeat(todo, REFINE_PEAKS)
    centre = grid[ranked.ravel()]
    sub_frames = Frames(frames.norms[rows], frames.vecs, [c[rows] for c in frames.count])
    sh = [None if h is None else h[rows] for h in herms]
    ss = [None if s is None else s[rows] for s in skews]
    bb = big[rows]

    def f(th):
        return _gmin(sub_frames, sh, ss, th[:, None], bb)[:, 0]

    neg, _ = _golden_min(lambda th: -f(th), centre - step, centre + step, REFINE_STEPS)
    peak = -neg
    refined = peak.reshape(todo.size, REFINE_PEAKS).max(axis=1)
    best = best.copy()
    best[todo] = np.maximum(best[todo], refined)
    return best


def orthogonal_batch(field, a_mats: Sequence[np.ndarray], b_mats: Sequence[np.ndarray],
                     tol: float = DEFAULT_TOL, frames: Frames | None = None) -> np.ndarray:
    """Vectorized A_t ⊥ B_t.  A may be a single element (arrays without batch axis)."""
    field = Kind.parse(field)
    if frames is None:
        frames = compute_frames(a_mats, tol)
    b3 = [b if b.ndim == 3 else b[None] for b in b_mats]
    t = max(frames.size, b3[0].shape[0])
    if frames.size != t:
        frames = Frames(np.broadcast_to(frames.norms, (t,)), frames.vecs,
                        [np.broadcast_to(c, (t,)) for c in frames.count])
    bnorm = np.max(np.stack([np.linalg.norm(b, ord=2, axis=(-2, -1)) for b in b3], axis=1), axis=1)
    bnorm = np.broadcast_to(bnorm, (t,))
    scale = frames.norms * bnorm
    thr = tol * scale
    comps = _compressions(frames, a_mats, b3)
    comps = [None if d is None else np.broadcast_to(d, (t,) + d.shape[1:]) for d in comps]
    if field == Kind.R:
        lo, hi = _bounds(frames, comps, scale)
        ok = (lo <= thr) & (hi >= -thr)
    else:
        ok = _max_g(frames, comps, scale, thr) <= thr
    return ok | (frames.norms == 0.0) | (bnorm == 0.0)


# ---------------------------------------------------------------- witnesses

@dataclass
class OrthWitness:
    """Either a unit x in M_0(A) with <Ax, Bx>_F ~ 0, or an oracle minimizer λ."""

    vector: sc.BlockVector | None = None
    value: complex | float | None = None
    lam: complex | None = None
    min_norm: float | None = None

    def verify(self, a: Element, b: Element, tol: float = 1e-8) -> bool:
        if self.vector is not None:
            x = self.vector
            if abs(x.norm - 1.0) > 1e-8:
                return False
            ax, bx = a.apply(x), b.apply(x)
            ip = sc.inner_product_F(ax, bx, a.algebra.field)
            ok = abs(ip) <= tol * a.norm * b.norm
            return ok and ax.norm >= (1.0 - 1e-7) * a.norm
        if self.lam is not None:
            m = (a + b.scale(self.lam)).norm
            return m >= a.norm * (1.0 - tol)
        return a.is_zero() or b.is_zero()

    def to_json(self) -> dict:
        out: dict = {}
        if self.vector is not None:
            out["x"] = [[sc.encode_scalar(e) for e in v] for v in self.vector.blocks]
            out["inner_product"] = _jsonable(self.value)
        if self.lam is not None:
            out["lambda"] = _jsonable(self.lam)
            out["min_norm"] = self.min_norm
        return out


def _jsonable(z):
    if z is None:
        return None
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _frame_columns(a: Element, tol: float):
    """Embedded frame columns per block plus the global block-diagonal layout."""
    fr = a.frame(tol)
    cols = []
    for b, f in zip(a.algebra.blocks, fr.frames):
        if f.shape[1] == 0:
            cols.append(np.zeros((a.emb[len(cols)].shape[0], 0)))
            continue
        e = np.stack([embed_vector(f[:, j], b.kind) for j in range(f.shape[1])], axis=1)
        if b.kind == Kind.H:
            from .blockalg import quaternion_partner
            partners = np.stack([quaternion_partner(e[:, j]) for j in range(e.shape[1])], axis=1)
            e = np.concatenate([e, partners], axis=1)
        cols.append(e)
    return cols


def _global_compression(a: Element, b: Element, tol: float):
    cols = _frame_columns(a, tol)
    pieces, owners = [], []
    for k, (f, za, zb) in enumerate(zip(cols, a.emb, b.emb)):
        if f.shape[1] == 0:
            continue
        pieces.append(np.conj(za @ f).T @ (zb @ f))
        owners.append((k, f))
    size = sum(p.shape[0] for p in pieces)
    dtype = complex if any(np.iscomplexobj(p) for p in pieces) else float
    d = np.zeros((size, size), dtype=dtype)
    pos = 0
    for p in pieces:
        r = p.shape[0]
        d[pos:pos + r, pos:pos + r] = p
        pos += r
    return d, owners


def _to_block_vector(a: Element, owners, c: np.ndarray) -> sc.BlockVector:
    blocks = [np.zeros((blk.n, blk.d)) for blk in a.algebra.blocks]
    pos = 0
    for k, f in owners:
        r = f.shape[1]
        v = f @ c[pos:pos + r]
        blocks[k] = unembed_vector(v, a.algebra.blocks[k].kind)
        pos += r
    return sc.BlockVector(tuple(blk.kind for blk in a.algebra.blocks), tuple(blocks))


def _hit(d: np.ndarray, c1: np.ndarray, c2: np.ndarray, z: complex) -> np.ndarray:
    """Unit c in span{c1, c2} with c* D c = z, for z on the segment [w1, w2]."""
    w1 = np.vdot(c1, d @ c1)
    w2 = np.vdot(c2, d @ c2)
    if abs(w1 - z) <= 1e-15 * (1 + abs(z)):
        return c1
    if abs(w2 - z) <= 1e-15 * (1 + abs(z)):
        return c2
    rot = np.exp(-1j * np.angle(w1 - z))
    dd = rot * (d - z * np.eye(d.shape[0]))
    h, k = _herm(dd), _skew(dd)
    kk = np.vdot(c1, k @ c2)
    phase = np.exp(1j * (math.pi / 2 - np.angle(kk))) if abs(kk) > 0 else 1.0
    h11 = np.vdot(c1, h @ c1).real
    h22 = np.vdot(c2, h @ c2).real
    bb = (phase * np.vdot(c1, h @ c2)).real
    if h22 >= 0 or h11 <= 0:
        # degenerate segment; fall back to the better endpoint
        return c1 if abs(w1 - z) <= abs(w2 - z) else c2
    t = (-bb - math.sqrt(max(bb * bb - h11 * h22, 0.0))) / h22
    x = c1 + t * phase * c2
    return x / np.linalg.norm(x)


def _closest_on_segment(p: complex, q: complex) -> tuple:
    d = q - p
    if d == 0:
        return 0.0, p
    s = min(max(-(np.conj(d) * p).real / abs(d) ** 2, 0.0), 1.0)
    return s, p + s * d


def _witness_real(d: np.ndarray):
    h = _herm(d)
    ev, vecs = np.linalg.eigh(h)
    a, b = ev[0], ev[-1]
    xmin, xmax = vecs[:, 0], vecs[:, -1]
    if b - a <= 0:
        return xmin
    t2 = min(max(b / (b - a), 0.0), 1.0)
    return math.sqrt(t2) * xmin + math.sqrt(1.0 - t2) * xmax


def _witness_complex(d: np.ndarray):
    n = d.shape[0]
    if n == 1:
        return np.ones(1, dtype=complex)
    thetas = np.linspace(0.0, 2.0 * math.pi, 256, endpoint=False)
    vecs, pts = [], []
    for th in thetas:
        _, v = np.linalg.eigh(_herm(np.exp(1j * th) * d))
        c = v[:, 0]
        vecs.append(c)
        pts.append(np.vdot(c, d @ c))
    pts = np.array(pts)
    # fan from pts[0]
    p0 = pts[0]
    for i in range(1, len(pts) - 1):
        tri = np.array([p0, pts[i], pts[i + 1]])
        lam = _barycentric(tri, 0.0)
        if lam is not None:
            la, lb, lc = lam
            if la + lb > 1e-15:
                z_ab = (la * tri[0] + lb * tri[1]) / (la + lb)
                x_ab = _hit(d, vecs[0], vecs[i], z_ab)
            else:
                x_ab = vecs[0]
            return _hit(d, x_ab, vecs[i + 1], 0.0)
    # no triangle holds 0: use the closest boundary point
    best = (np.inf, None)
    for i in range(len(pts)):
        j = (i + 1) % len(pts)
        _, z = _closest_on_segment(pts[i], pts[j])
        if abs(z) < best[0]:
            best = (abs(z), (i, j, z))
    i, j, z = best[1]
    return _hit(d, vecs[i], vecs[j], z)


def _barycentric(tri: np.ndarray, z: complex):
    a, b, c = tri
    z = complex(z)
    m = np.array([[a.real - c.real, b.real - c.real], [a.imag - c.imag, b.imag - c.imag]])
    if abs(np.linalg.det(m)) < 1e-300:
        return None
    la, lb = np.linalg.solve(m, [z.real - c.real, z.imag - c.imag])
    lc = 1.0 - la - lb
    if min(la, lb, lc) < -1e-12:
        return None
    return max(la, 0.0), max(lb, 0.0), max(lc, 0.0)


def orthogonality_witness(a: Element, b: Element, tol: float = DEFAULT_TOL) -> OrthWitness | None:
    """Unit x in M_0(A) with <Ax, Bx>_F ≈ 0, or None when A is not orthogonal to B."""
    _check_pair(a, b)
    if a.is_zero() or b.is_zero():
        return OrthWitness()
    if not is_bj_orthogonal(a, b, tol):
        return None
    # the relation is homogeneous; unit scales keep tiny inputs away from underflow
    d, owners = _global_compression(a.scale(1.0 / a.norm), b.scale(1.0 / b.norm), tol)
    if a.algebra.field == Kind.R:
        c = _witness_real(d)
    else:
        c = _witness_complex(d)
    x = _to_block_vector(a, owners, c)
    x = x.scaled(1.0 / x.norm)
    value = sc.inner_product_F(a.apply(x), b.apply(x), a.algebra.field)
    return OrthWitness(vector=x, value=value)


def is_bj_orthogonal(a: Element, b: Element, tol: float = DEFAULT_TOL) -> bool:
    _check_pair(a, b)
    return bool(orthogonal_batch(a.algebra.field, a.emb, b.emb, tol)[0])


def bj_orthogonal(a: Element, b: Element, tol: float = DEFAULT_TOL):
    """(verdict, witness) pair."""
    w = orthogonality_witness(a, b, tol)
    return w is not None, w


# ---------------------------------------------------------------- brute-force oracle

def top_eigenvalue(m: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of a batch of small Hermitian matrices (closed form up to 2x2)."""
    n = m.shape[-1]
    if n == 1:
        return m[..., 0, 0].real
    if n == 2:
        a, d = m[..., 0, 0].real, m[..., 1, 1].real
        return 0.5 * (a + d) + np.hypot(0.5 * (a - d), np.abs(m[..., 0, 1]))
    return np.linalg.eigvalsh(m)[..., -1]


def _adj(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


class _ShiftedGram:
    """h0(λ) = ||A + λB||² - ||A||² as max_k λ_max(A_k*A_k - ||A||² I + λ A_k*B_k + conj(λ) B_k*A_k + |λ|² B_k*B_k).

    Expanding the Gram matrix keeps h0(0) = 0 to rounding in ||A||², where taking
    a norm and squaring it leaves noise of a few ulps of ||A||² that can mask
    genuine gaps of order 1e-14.
    """

    def __init__(self, a3, b3):
        grams = [_adj(a) @ a for a in a3]
        self.anorm2 = np.max(np.stack([top_eigenvalue(g) for g in grams], axis=1), axis=1)
        self.p = [g - self.anorm2[:, None, None] * np.eye(g.shape[-1]) for g in grams]
        self.q = [_adj(a) @ b for a, b in zip(a3, b3)]
        self.r = [_adj(b) @ b for b in b3]

    def __call__(self, lam: np.ndarray) -> np.ndarray:
        lam = lam[:, None, None]
        out = None
        for p, q, r in zip(self.p, self.q, self.r):
            lq = lam * q
            v = top_eigenvalue(p + lq + _adj(lq) + (np.abs(lam) ** 2) * r)
            out = v if out is None else np.maximum(out, v)
        return out


def _golden_min(f, lo: np.ndarray, hi: np.ndarray, steps: int):
    """Batched golden-section minimization; returns the best value seen per row."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best = np.minimum(f1, f2)
    arg = np.where(f1 <= f2, x1, x2)
    for _ in range(steps):
        left = f1 < f2  # minimum lies in [lo, x2]
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        nx = np.where(left, hi - GOLDEN * (hi - lo), lo + GOLDEN * (hi - lo))
        fx = f(nx)
        x1, x2, f1, f2 = (np.where(left, nx, x2), np.where(left, x1, nx),
                          np.where(left, fx, f2), np.where(left, f1, fx))
        better = fx < best
        arg = np.where(better, nx, arg)
        best = np.minimum(best, fx)
    return best, arg


ROUNDING_SLACK = 2e-15
OUTER_STEPS = 90
INNER_STEPS = 70


def _pad(mats, t):
    mats = [m if m.ndim == 3 else m[None] for m in mats]
    return [np.broadcast_to(m, (t,) + m.shape[1:]) for m in mats]


def oracle_minimum_batch(field, a_mats, b_mats, tol: float = 0.0, radius=None):
    """Minimize h(λ) = ||A + λB||² - ||A||² + 2 tol ||A|| ||B|| |λ| over |λ| <= radius
    (default 4 ||A|| / ||B||, twice the largest possible minimizer).

    At tol = 0 this is the defining quantity of A ⊥ B (min h >= 0).  For tol > 0
    the linear term is the usual ε-approximate orthogonality allowance, which
    gives the same tolerance meaning as the spectral test.  h is convex in λ.
    Returns (min h, argmin, ||A||, ||B||).
    """
    field = Kind.parse(field)
    t = max((m if m.ndim == 3 else m[None]).shape[0] for m in list(a_mats) + list(b_mats))
    a3, b3 = _pad(a_mats, t), _pad(b_mats, t)
    if field != Kind.R:
        a3 = [a.astype(complex) for a in a3]
        b3 = [b.astype(complex) for b in b3]
    # search over μ = λ ||B|| with B scaled to norm one, so |μ|² stays finite for tiny B
    bnorm = _batch_norms(b3)
    unit = np.where(bnorm > 0, bnorm, 1.0)
    h0 = _ShiftedGram(a3, [b / unit[:, None, None] for b in b3])
    anorm = np.sqrt(np.maximum(h0.anorm2, 0.0))
    if radius is None:
        radius = 4.0 * anorm
    else:
        radius = np.asarray(radius, dtype=float) * bnorm
    radius = np.broadcast_to(np.asarray(radius, dtype=float), (t,)).copy()
    slope = 2.0 * tol * anorm

    def h(lam):
        return h0(lam) + slope * np.abs(lam)

    if field == Kind.R:
        best, arg = _golden_min(h, -radius, radius.copy(), OUTER_STEPS)
    else:
        # g(x) = min_y h(x + iy) is convex in x, so nested golden sections are exact

        def g(x):
            return _golden_min(lambda y: h(x + 1j * y), -radius, radius.copy(), INNER_STEPS)[0]

        best, xarg = _golden_min(g, -radius, radius.copy(), OUTER_STEPS)
        _, yarg = _golden_min(lambda yy: h(xarg + 1j * yy), -radius, radius.copy(), INNER_STEPS)
        arg = xarg + 1j * yarg
    at0 = best >= 0.0
    arg = np.where(at0, 0.0, arg / unit).astype(complex)
    return np.where(at0, 0.0, best), arg, anorm, bnorm


def oracle_batch(field, a_mats, b_mats, tol: float = DEFAULT_TOL, radius=None) -> np.ndarray:
    best, _, anorm, bnorm = oracle_minimum_batch(field, a_mats, b_mats, tol, radius)
    return (best >= -ROUNDING_SLACK * anorm ** 2) | (bnorm == 0.0)


def bj_oracle(a: Element, b: Element, tol: float = DEFAULT_TOL, radius: float | None = None) -> bool:
    _check_pair(a, b)
    if b.is_zero():
        return True
    if radius is not None and radius < 2.0 * a.norm / max(b.norm, 1e-300):
        raise ValueError("search radius too small to contain the minimizer")
    return bool(oracle_batch(a.algebra.field, a.emb, b.emb, tol, radius)[0])


EXTENDED_DPS = 40
EXTENDED_STEPS = 110


def _mp_matrix(z: np.ndarray, ctx):
    return ctx.matrix([[ctx.mpc(complex(v)) for v in row] for row in z])


def _mp_top(m, ctx):
    n = m.rows
    if n == 1:
        return ctx.re(m[0, 0])
    if n == 2:
        a, d = ctx.re(m[0, 0]), ctx.re(m[1, 1])
        return (a + d) / 2 + ctx.sqrt(((a - d) / 2) ** 2 + abs(m[0, 1]) ** 2)
    return max(ctx.eighe(m, eigvals_only=True))


def _mp_golden(f, lo, hi, steps: int, ctx):
    g = (ctx.sqrt(5) - 1) / 2
    x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best = min(f1, f2)
    for _ in range(steps):
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = f(x1)
            best = min(best, f1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = f(x2)
            best = min(best, f2)
    return best


def _mp_lift_band(g, band, top, ctx):
    """Raise the eigenvalues of the Gram matrix g lying in [band, top] to top.

    This is the Gram matrix of an A' within tol·‖A‖ of A whose near-top
    singular values all equal ‖A‖, matching the norming band of the spectral test.
    """
    if g.rows == 1:
        return ctx.matrix([[top]]) if ctx.re(g[0, 0]) >= band else g
    vals, vecs = ctx.eighe(g)
    out = g.copy()
    for i, v in enumerate(vals):
        if v >= band:
            col = vecs[:, i]
            out += (top - v) * (col * col.transpose_conj())
    return out


def bj_oracle_extended(a: Element, b: Element, tol: float = DEFAULT_TOL, dps: int = EXTENDED_DPS) -> bool:
    """bj_oracle with h evaluated and minimized in `dps`-digit arithmetic.

    In double precision h resolves a gap of δ (relative distance of 0 from the
    numerical range) only down to δ² ~ 1e-15, while the spectral test decides
    at δ ~ tol.  Pairs that fall between the two are settled here.  Singular
    values within tol of ‖A‖ are treated as norming, as in the spectral test.
    """
    _check_pair(a, b)
    if b.is_zero():
        return True
    ctx = mpmath.mp.clone()
    ctx.dps = dps
    complex_field = a.algebra.field == Kind.C
    unit = b.norm
    blocks = []
    anorm2 = ctx.mpf(0)
    for za, zb in zip(a.emb, b.emb):
        ma, mb = _mp_matrix(za, ctx), _mp_matrix(zb, ctx) / unit
        ah = ma.transpose_conj()
        gram = ah * ma
        anorm2 = max(anorm2, _mp_top(gram, ctx))
        blocks.append((gram, ah * mb, mb.transpose_conj() * mb))
    band = (1 - ctx.mpf(tol)) ** 2 * anorm2
    blocks = [(_mp_lift_band(g, band, anorm2, ctx), q, r) for g, q, r in blocks]
    eye = [ctx.eye(g.rows) for g, _, _ in blocks]
    slope = 2 * ctx.mpf(tol) * ctx.sqrt(anorm2)

    def h(mu):
        out = None
        for (g, q, r), e in zip(blocks, eye):
            mq = q * mu
            v = _mp_top(g - anorm2 * e + mq + mq.transpose_conj() + r * abs(mu) ** 2, ctx)
            out = v if out is None else max(out, v)
        return out + slope * abs(mu)

    radius = 4 * ctx.sqrt(anorm2)
    if complex_field:
        best = _mp_golden(lambda x: _mp_golden(lambda y: h(ctx.mpc(x, y)), -radius, radius, EXTENDED_STEPS, ctx),
                          -radius, radius, EXTENDED_STEPS, ctx)
    else:
        best = _mp_golden(h, -radius, radius, EXTENDED_STEPS, ctx)
    return bool(best >= -ctx.mpf(10) ** (10 - dps) * anorm2)


def oracle_witness(a: Element, b: Element, tol: float = DEFAULT_TOL) -> OrthWitness:
    _check_pair(a, b)
    _, arg, _, _ = oracle_minimum_batch(a.algebra.field, a.emb, b.emb, tol)
    lam = complex(arg[0])
    if a.algebra.field == Kind.R:
        lam = lam.real
    return OrthWitness(lam=lam, min_norm=float((a + b.scale(lam)).norm))


# ---------------------------------------------------------------- neighbourhoods

def _embedded_frames(a: Element, tol: float) -> list:
    fr = compute_frames(a.emb, tol)
    return [v[0, :, :int(c[0])] for v, c in zip(fr.vecs, fr.count)]


def containment_scalar(a: Element, b: Element, tol: float = DEFAULT_TOL):
    """The α with A x = α B x on M_0(A) when A^⊥ ⊆ B^⊥ (A, B normalized), else None."""
    _check_pair(a, b)
    if b.is_zero():
        return 1.0
    if a.is_zero():
        return None
    an = a.scale(1.0 / a.norm)
    bn = b.scale(1.0 / b.norm)
    fa = _embedded_frames(an, tol)
    fb = _embedded_frames(bn, tol)
    num, den, cols = 0.0 + 0.0j, 0.0, []
    for f, g, za, zb in zip(fa, fb, an.emb, bn.emb):
        if f.shape[1] == 0:
            continue
        if g.shape[1] == 0:
            return None
        resid = f - g @ (np.conj(g).T @ f)
        if np.linalg.norm(resid, 2) > tol:
            return None
        af, bf = za @ f, zb @ f
        num += np.vdot(bf, af)
        den += np.vdot(bf, bf).real
        cols.append((af, bf))
    if den <= 0:
        return None
    alpha = num / den
    if a.algebra.field == Kind.R:
        alpha = alpha.real
    width = sum(af.shape[1] for af, _ in cols)
    resid = math.sqrt(sum(np.linalg.norm(af - alpha * bf) ** 2 for af, bf in cols) / width)
    if resid > tol or abs(abs(alpha) - 1.0) > tol:
        return None
    return alpha


def neighborhood_contained(a: Element, b: Element, tol: float = DEFAULT_TOL) -> bool:
    """A^⊥ ⊆ B^⊥."""
    return containment_scalar(a, b, tol) is not None


def neighborhood_equal(a: Element, b: Element, tol: float = DEFAULT_TOL) -> bool:
    return neighborhood_contained(a, b, tol) and neighborhood_contained(b, a, tol)


def strictly_contained(a: Element, b: Element, tol: float = DEFAULT_TOL) -> bool:
    """A^⊥ ⊊ B^⊥ (contained and not equal at the same tolerance)."""
    return neighborhood_contained(a, b, tol) and not neighborhood_contained(b, a, tol)


# ---------------------------------------------------------------- sampling A^⊥

@dataclass
class OutgoingSample:
    """A batch of elements B_t with A ⊥ B_t, kept in embedded form."""

    algebra: Algebra
    mats: list
    count: int = field(default=0)

    def element(self, t: int) -> Element:
        return Element.from_embedded(self.algebra, [m[t] for m in self.mats])


def random_natural(algebra: Algebra, rng: np.random.Generator, count: int, sparse: bool = True) -> list:
    out = []
    for b in algebra.blocks:
        m = rng.standard_normal((count,) + b.shape)
        if sparse:
            scale = np.where(rng.random(count) < 0.75, np.exp(rng.normal(0.0, 0.7, count)), 0.0)
            m = m * scale[:, None, None, None]
        out.append(m)
    return out


def sample_outgoing(a: Element, rng: np.random.Generator, count: int, tol: float = DEFAULT_TOL) -> OutgoingSample:
    """Random B with A ⊥ B: project random X onto the hyperplane {<Ax, Xx>_F = 0}
    for a random unit x in M_0(A)."""
    alg = a.algebra
    fr = compute_frames(a.emb, tol)
    x_emb = _random_frame_vectors(alg, fr, rng, count)
    x_nat = random_natural(alg, rng, count)
    xs = embed_batch(alg, x_nat)
    if a.is_zero():
        return OutgoingSample(alg, xs, count)
    f = np.zeros(count, dtype=complex)
    for za, zx, v in zip(a.emb, xs, x_emb):
        av = za @ v[..., None]
        xv = zx @ v[..., None]
        f += np.sum(np.conj(av) * xv, axis=(-2, -1))
    if alg.field == Kind.R:
        f = f.real
    coef = f / a.norm ** 2
    mats = []
    for za, zx in zip(a.emb, xs):
        c = coef[:, None, None]
        if not np.iscomplexobj(zx) and np.iscomplexobj(c):
            zx = zx.astype(complex)
        mats.append(zx - c * za[None])
    # X nearly parallel to A leaves pure rounding noise; that B is 0 exactly
    xn = _batch_norms(xs)
    bn = _batch_norms(mats)
    noise = bn <= 1e-12 * np.maximum(xn, a.norm)
    mats = [np.where(noise[:, None, None], 0.0, m) for m in mats]
    return OutgoingSample(alg, mats, count)


def _batch_norms(mats) -> np.ndarray:
    return np.max(np.stack([np.linalg.norm(m, ord=2, axis=(-2, -1)) for m in mats], axis=1), axis=1)


def _random_frame_vectors(alg: Algebra, fr: Frames, rng: np.random.Generator, count: int) -> list:
    """Random unit vectors of M_0(A), embedded, one per sample: (T, m_k) per block."""
    nblocks = len(alg.blocks)
    counts = [int(c[0]) for c in fr.count]
    attaining = [k for k in range(nblocks) if counts[k] > 0]
    weights = np.zeros((count, nblocks))
    mode = rng.random(count)
    for t in range(count):
        if mode[t] < 0.5:
            weights[t, attaining[rng.integers(len(attaining))]] = 1.0
        else:
            for k in attaining:
                weights[t, k] = rng.random() + 0.05
    out = []
    for k, b in enumerate(alg.blocks):
        v = fr.vecs[k][0]
        r = counts[k]
        m = v.shape[0]
        if r == 0:
            dtype = float if b.kind == Kind.R else complex
            out.append(np.zeros((count, m), dtype=dtype))
            continue
        if b.kind == Kind.R:
            c = rng.standard_normal((count, r))
        else:
            c = rng.standard_normal((count, r)) + 1j * rng.standard_normal((count, r))
        single = rng.random(count) < 0.3
        pick = rng.integers(r, size=count)
        onehot = np.zeros((count, r))
        onehot[np.arange(count), pick] = 1.0
        c = np.where(single[:, None], onehot, c)
        c = c / np.linalg.norm(c, axis=1, keepdims=True)
        out.append((c @ v[:, :r].T) * weights[:, k, None])
    total = np.sqrt(sum(np.sum(np.abs(x) ** 2, axis=1) for x in out))
    return [x / total[:, None] for x in out]
