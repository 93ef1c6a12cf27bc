"""Seeded verification suites over the catalog.

Every check has a stable id, a pass flag, a short detail string and, on
failure, a JSON counterexample.  Reports carry no timestamps, so two runs
with the same seed produce identical JSON.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import classify as cl
from . import orthogonality as orth
from . import symmetry as sym
from .blockalg import (Algebra, Element, DEFAULT_TOL, LAWS, MIXED_WEIGHTS, apply_isometry,
                       block_permute, random_element, random_isometry, random_legal_permutation)
from .catalog import catalog
from .scalars import Kind

SUITES = ("orthogonality", "symmetry", "neighborhoods", "classify")

# the near law puts two singular values 1e-12 apart, far inside the tolerance,
# where the fast test and the exact minimization are meant to differ
PAIR_LAWS = {k: v for k, v in MIXED_WEIGHTS.items() if k != "near"}


def threads() -> int:
    env = os.environ.get("BJCLASS_THREADS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def _map(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    workers = workers or threads()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _rng_for(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng([seed, *keys])


def random_elements(alg: Algebra, rng: np.random.Generator, count: int, weights: dict | None = None) -> list:
    weights = weights or MIXED_WEIGHTS
    names = list(weights)
    p = np.array([weights[k] for k in names], dtype=float)
    laws = rng.choice(len(names), size=count, p=p / p.sum())
    return [random_element(alg, rng, names[i]) for i in laws]


# ---------------------------------------------------------------- checks

@dataclass
class Check:
    id: str
    passed: bool
    detail: str = ""
    counterexample: dict | None = None
    stats: object = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        out = {"id": self.id, "passed": self.passed, "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class VerificationSuite:
    name: str
    trials: int
    seed: int
    tol: float
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"suite": self.name, "trials": self.trials, "seed": self.seed, "tol": self.tol,
                "passed": self.passed, "checks": len(self.checks), "failed": len(self.failures),
                "results": [c.to_json() for c in self.checks]}

    def to_text(self) -> str:
        width = max((len(c.id) for c in self.checks), default=10)
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.id.ljust(width)}  {c.detail}" for c in self.checks]
        lines.append(f"{self.name}: {len(self.checks) - len(self.failures)}/{len(self.checks)} checks passed")
        return "\n".join(lines)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _pair_json(alg: Algebra, a: Element, b: Element | None = None) -> dict:
    out = {"algebra": str(alg), "a": a.to_json()}
    if b is not None:
        out["b"] = b.to_json()
    return out


# ---------------------------------------------------------------- reusable agreement runs

@dataclass
class PairBatch:
    algebra: Algebra
    a: list
    b: list

    def pair(self, t: int) -> tuple:
        return (Element.from_embedded(self.algebra, [m[t] for m in self.a]),
                Element.from_embedded(self.algebra, [m[t] for m in self.b]))


def random_pairs(alg: Algebra, rng: np.random.Generator, count: int) -> PairBatch:
    """A from the mixed laws (near excluded); B a random element, an element of A^⊥,
    or an element of A^⊥ nudged off it."""
    elems = random_elements(alg, rng, count, PAIR_LAWS)
    others = random_elements(alg, rng, count, PAIR_LAWS)
    a_mats = [np.stack([e.emb[k] for e in elems]) for k in range(len(alg.blocks))]
    b_mats = [np.stack([e.emb[k] for e in others]) for k in range(len(alg.blocks))]
    kind = rng.random(count)
    for t in range(count):
        if kind[t] < 0.35:
            continue
        s = orth.sample_outgoing(elems[t], rng, 1)
        size = float(orth._batch_norms(s.mats)[0])
        nudge = 0.0
        if kind[t] >= 0.8 and size > 0.0 and not others[t].is_zero():
            nudge = 10.0 ** rng.uniform(-5, -2) * size / others[t].norm
        for k in range(len(alg.blocks)):
            b_mats[k][t] = s.mats[k][0] + nudge * b_mats[k][t]
    return PairBatch(alg, a_mats, b_mats)


@dataclass
class OracleAgreement:
    total: int = 0
    agree: int = 0
    disagreements: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.agree / self.total if self.total else 1.0

    def merge(self, other: "OracleAgreement") -> "OracleAgreement":
        return OracleAgreement(self.total + other.total, self.agree + other.agree,
                               self.disagreements + other.disagreements, self.unresolved + other.unresolved)


def oracle_agreement(alg: Algebra, count: int, seed, tol: float = DEFAULT_TOL) -> OracleAgreement:
    """Fast predicate against brute-force minimization.

    Disagreements are re-run at tol/10 with the oracle in extended precision.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    batch = random_pairs(alg, rng, count)
    fast = orth.orthogonal_batch(alg.field, batch.a, batch.b, tol)
    slow = orth.oracle_batch(alg.field, batch.a, batch.b, tol)
    bad = np.nonzero(fast != slow)[0]
    out = OracleAgreement(count, int(count - bad.size))
    for t in bad:
        a, b = batch.pair(int(t))
        out.disagreements.append(_pair_json(alg, a, b))
        tight = tol / 10
        if orth.is_bj_orthogonal(a, b, tight) != orth.bj_oracle_extended(a, b, tight):
            out.unresolved.append(_pair_json(alg, a, b))
    return out


def witness_failures(alg: Algebra, count: int, seed, tol: float = DEFAULT_TOL) -> list:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    batch = random_pairs(alg, rng, count)
    fast = orth.orthogonal_batch(alg.field, batch.a, batch.b, tol)
    out = []
    for t in np.nonzero(fast)[0]:
        a, b = batch.pair(int(t))
        w = orth.orthogonality_witness(a, b, tol)
        if w is None or not w.verify(a, b):
            out.append(_pair_json(alg, a, b))
    return out


def left_disagreements(alg: Algebra, count: int, trials: int, seed, tol: float = DEFAULT_TOL) -> list:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    out = []
    for a in random_elements(alg, rng, count):
        if sym.is_left_symmetric_structural(a, tol) != sym.is_left_symmetric_sampled(a, trials, rng, tol):
            out.append(_pair_json(alg, a))
    return out


def right_disagreements(alg: Algebra, count: int, seed, incoming: int = 16, tol: float = DEFAULT_TOL,
                        weights: dict | None = None) -> list:
    """Structural A*A = cI against the BJ candidate test; the incoming sampler must never refute a
    scalar multiple of a unitary."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    out = []
    for a in random_elements(alg, rng, count, weights):
        structural = sym.is_right_symmetric(a, tol)
        ok = structural == sym.is_right_symmetric_bj(a, tol)
        if ok and structural and incoming:
            ok = sym.right_symmetry_counterexample(a, incoming, rng, tol) is None
        if not ok:
            out.append(_pair_json(alg, a))
    return out


def smooth_disagreements(alg: Algebra, count: int, seed, tol: float = DEFAULT_TOL) -> list:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    out = []
    for a in random_elements(alg, rng, count):
        s = sym.is_smooth(a, tol)
        if s != sym.is_smooth_bj(a, tol) or s != sym.functional_kernel_test(a, rng, tol=tol)["unique"]:
            out.append(_pair_json(alg, a))
    return out


def _random_bj_map(alg: Algebra, rng: np.random.Generator):
    u, v = random_isometry(alg, rng)
    perm = random_legal_permutation(alg, rng)
    return lambda x: block_permute(apply_isometry(x, u, v), perm)


# ---------------------------------------------------------------- per-algebra suites

def _first(items: list):
    return items[0] if items else None


def _orthogonality_checks(alg: Algebra, rng: np.random.Generator, trials: int, tol: float) -> list:
    name = str(alg)
    res = oracle_agreement(alg, trials, rng, tol)
    checks = [Check(f"orthogonality-oracle/{name}", not res.unresolved,
                    f"{res.agree}/{res.total} agree, {len(res.unresolved)} unresolved after tightening",
                    _first(res.unresolved), stats=res)]
    wf = witness_failures(alg, max(trials // 2, 1), rng, tol)
    checks.append(Check(f"orthogonality-witness/{name}", not wf, f"{len(wf)} witness failures", _first(wf)))
    # BJ isomorphisms and scalar homogeneity preserve the relation
    phi = _random_bj_map(alg, rng)
    bad = None
    batch = random_pairs(alg, rng, max(trials // 4, 1))
    for t in range(len(batch.a[0])):
        a, b = batch.pair(t)
        v = orth.is_bj_orthogonal(a, b, tol)
        lam = rng.uniform(0.3, 3.0) * rng.choice([-1.0, 1.0])
        if v != orth.is_bj_orthogonal(phi(a), phi(b), tol) or v != orth.is_bj_orthogonal(a.scale(lam), b.scale(1 / lam), tol):
            bad = _pair_json(alg, a, b)
            break
    checks.append(Check(f"orthogonality-invariance/{name}", bad is None, "isometry, permutation and scaling", bad))
    return checks


def _symmetry_checks(alg: Algebra, rng: np.random.Generator, trials: int, tol: float) -> list:
    name = str(alg)
    left = left_disagreements(alg, trials, 300, rng, tol)
    right = right_disagreements(alg, trials, rng, tol=tol)
    smooth = smooth_disagreements(alg, max(trials // 2, 1), rng, tol)
    phi = _random_bj_map(alg, rng)
    bad = None
    for a in random_elements(alg, rng, max(trials // 4, 1)):
        b = phi(a)
        if (sym.is_left_symmetric_structural(a, tol) != sym.is_left_symmetric_sampled(b, 100, rng, tol)
                or sym.is_right_symmetric_bj(a, tol) != sym.is_right_symmetric_bj(b, tol)
                or sym.is_smooth_bj(a, tol) != sym.is_smooth_bj(b, tol)):
            bad = _pair_json(alg, a)
            break
    return [
        Check(f"left-symmetry/{name}", not left, f"{len(left)} disagreements over {trials}", _first(left)),
        Check(f"right-symmetry/{name}", not right, f"{len(right)} disagreements over {trials}", _first(right)),
        Check(f"smoothness/{name}", not smooth, f"{len(smooth)} disagreements", _first(smooth)),
        Check(f"symmetry-invariance/{name}", bad is None, "verdicts preserved by BJ isomorphisms", bad),
    ]


def _neighborhood_checks(alg: Algebra, rng: np.random.Generator, trials: int, tol: float) -> list:
    """A^⊥ = (λA)^⊥; smooth A has the same neighbourhood as its one-block compression;
    a non-smooth A strictly contains the neighbourhood of such a compression; a reported
    containment B^⊥ ⊆ A^⊥ is never contradicted by sampled elements of B^⊥."""
    name = str(alg)
    bad_scale = bad_comp = bad_sample = None
    for a in random_elements(alg, rng, trials):
        if a.is_zero():
            continue
        lam = rng.uniform(0.2, 5.0) * rng.choice([-1.0, 1.0])
        if alg.field == Kind.C:
            lam = lam * np.exp(1j * rng.uniform(0, 2 * np.pi))
        if bad_scale is None and not orth.neighborhood_equal(a, a.scale(lam), tol):
            bad_scale = _pair_json(alg, a)
        comp = sym.norming_functionals(a, tol)[0].compression()
        smooth = sym.is_smooth(a, tol)
        ok = orth.neighborhood_equal(comp, a, tol) if smooth else orth.strictly_contained(comp, a, tol)
        if bad_comp is None and not ok:
            bad_comp = _pair_json(alg, a, comp)
        if bad_sample is None and orth.neighborhood_contained(comp, a, tol):
            s = orth.sample_outgoing(comp, rng, 16, tol)
            if not orth.orthogonal_batch(alg.field, a.emb, s.mats, tol).all():
                bad_sample = _pair_json(alg, a, comp)
    return [
        Check(f"neighborhood-scaling/{name}", bad_scale is None, "(λA)^⊥ = A^⊥", bad_scale),
        Check(f"neighborhood-compression/{name}", bad_comp is None, "(A x)x* has A's neighbourhood iff A smooth", bad_comp),
        Check(f"neighborhood-containment/{name}", bad_sample is None, "sampled B^⊥ ⊆ A^⊥", bad_sample),
    ]


def _classify_checks(alg: Algebra, rng: np.random.Generator, trials: int, tol: float) -> list:
    name = str(alg)
    checks = []
    report = cl.signature(alg, "both", rng, tol=tol)
    sig, truth = report.signature, report.structural
    checks.append(Check(f"signature/{name}", bool(report.matches),
                        json.dumps(sig.to_json()), None if report.matches else report.to_json()))
    checks.append(Check(f"dimension-formula/{name}", sig.dim == sig.s + sig.blocks and sig.dim == truth.dim,
                        f"dim={sig.dim} s={sig.s} l={sig.blocks}"))
    checks.append(Check(f"fl-count/{name}", sig.s == sig.c + 3 * sig.h and sig.r + sig.c + sig.h == sig.blocks,
                        f"s={sig.s} c={sig.c} h={sig.h}"))
    pseudo = cl.Subspace.blocks(alg, alg.pseudo_indices)
    nonpseudo = cl.Subspace.blocks(alg, alg.nonpseudo_indices)
    ok = report.pseudo_abelian.equals(pseudo) and report.nonpseudo_abelian.equals(nonpseudo)
    checks.append(Check(f"left-summands/{name}", ok,
                        f"L^⊥⊥ dims {report.pseudo_abelian.block_dims}, L^⊥ dims {report.nonpseudo_abelian.block_dims}"))
    full = cl.Subspace.full(alg)
    checks.append(Check(f"pseudo-abelian-iff-full/{name}",
                        report.pseudo_abelian.equals(full) == alg.is_pseudo_abelian, ""))
    abel = cl.Subspace.blocks(alg, cl.structural_abelian_indices(alg))
    checks.append(Check(f"abelian-summand/{name}", report.abelian.equals(abel),
                        f"abelian dims {report.abelian.block_dims}"))
    dim_one = sig.dim == 1
    checks.append(Check(f"field-detection/{name}", report.field_decided != dim_one or sig.blocks == 0,
                        "undecidable" if not report.field_decided else sig.field))
    for i in range(trials):
        moved = cl.signature(alg, "bj", rng, cl.Probe.random(alg, rng), tol)
        if not cl.signatures_equal(moved, report) or moved.signature.to_json() != sig.to_json():
            checks.append(Check(f"signature-invariance/{name}", False, f"copy {i}", moved.to_json()))
            break
    else:
        checks.append(Check(f"signature-invariance/{name}", True, f"{trials} transformed copies"))
    return checks


_SUITE_FUNCS = {
    "orthogonality": (_orthogonality_checks, 64),
    "symmetry": (_symmetry_checks, 24),
    "neighborhoods": (_neighborhood_checks, 24),
    "classify": (_classify_checks, 1),
}


def default_trials(name: str) -> int:
    if name == "all":
        return 0
    return _SUITE_FUNCS[name][1]


def run_suite(name: str, trials: int | None = None, seed: int = 0, tol: float = DEFAULT_TOL,
              algebras: Sequence[Algebra] | None = None, workers: int | None = None) -> VerificationSuite:
    """Run one suite (or "all") over the catalog; deterministic for a fixed seed."""
    if name not in SUITES and name != "all":
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    if trials is not None and trials < 1:
        raise ValueError("trials must be positive")
    algebras = tuple(algebras or catalog())
    names = SUITES if name == "all" else (name,)
    suite = VerificationSuite(name, trials or 0, seed, tol)
    for sname in names:
        fn, default = _SUITE_FUNCS[sname]
        n = trials or default

        def job(item, fn=fn, n=n, key=SUITES.index(sname)):
            i, alg = item
            return fn(alg, _rng_for(seed, key, i), n, tol)

        results = _map(job, list(enumerate(algebras)), workers)
        for checks in results:
            suite.checks.extend(checks)
        if sname == "orthogonality":
            total = OracleAgreement()
            for c in suite.checks:
                if isinstance(c.stats, OracleAgreement):
                    total = total.merge(c.stats)
            suite.checks.append(Check("orthogonality-oracle-rate", total.rate >= 0.999,
                                      f"{total.agree}/{total.total} = {total.rate:.5f}"))
    return suite
