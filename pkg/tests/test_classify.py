import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bjclass import classify as cl
from bjclass.blockalg import Algebra, Element
from bjclass.scalars import Kind

from conftest import algebras, seeds


def alg(text):
    return Algebra.parse(text)


# ---------------------------------------------------------------- subspaces

@given(algebras, seeds)
def test_subspace_complement_and_intersection(a, seed):
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((3, a.real_dim))
    s = cl.Subspace.span(a, vecs)
    assert s.dim == min(3, a.real_dim)
    c = s.complement()
    assert s.dim + c.dim == a.real_dim
    assert s.intersect(c).dim == 0
    assert s.complement().complement().equals(s)
    for v in vecs:
        assert s.contains(v)


def test_block_subspaces():
    a = alg("field=R; R + M2(R) + H")
    s = cl.Subspace.blocks(a, (0, 2))
    assert s.block_dims == (1, 0, 4)
    assert s.support == (0, 2)
    assert s.is_block_decomposable
    diag = cl.Subspace.span(a, [np.r_[1.0, np.zeros(4), 1.0, np.zeros(3)]])
    assert not diag.is_block_decomposable
    assert s.angle_residual(cl.Subspace.blocks(a, (2, 0))) <= 1e-12


def test_with_rows_ignores_rounding_noise():
    a = alg("field=R; R + R")
    rows = np.array([[1.0, 1e-17]])
    s = cl.Subspace.full(a).with_rows(rows)
    assert s.dim == 1 and s.is_block_decomposable


# ---------------------------------------------------------------- summands and FL

@pytest.mark.parametrize("text", ["field=R; R + M2(R)", "field=C; C + C + M2(C)", "field=R; H + M3(R) + C",
                                  "field=C; M2(C)"])
def test_left_summands(text):
    a = alg(text)
    perp, pp = cl.pseudo_abelian_summand(a, seed=2)
    assert pp.equals(cl.Subspace.blocks(a, a.pseudo_indices))
    assert perp.equals(cl.Subspace.blocks(a, a.nonpseudo_indices))


@pytest.mark.parametrize("text,dims,expected", [
    ("field=R; R + R", (1, 1), True),
    ("field=R; C", (2,), False),
    ("field=R; C + R", (1, 1), True),
    ("field=C; C + C", (2, 2), True),
    ("field=R; H", (1,), True),
    ("field=R; H", (2,), False),
])
def test_property_fl(text, dims, expected):
    a = alg(text)
    rows = []
    for k, (b, d) in enumerate(zip(a.blocks, dims)):
        for i in range(d):
            v = np.zeros(a.real_dim)
            v[a.offsets[k] + i] = 1.0
            rows.append(v)
    space = cl.Subspace.span(a, rows)
    assert cl.has_property_FL(space) is expected
    assert cl.fl_crosscheck(space, seed=1) is expected


def test_property_fl_needs_block_decomposable():
    a = alg("field=R; R + R")
    with pytest.raises(cl.NotBlockDecomposable):
        cl.has_property_FL(cl.Subspace.span(a, [[1.0, 1.0]]))


@pytest.mark.parametrize("text,s", [
    ("field=R; R + R + R", 0),
    ("field=R; C + C", 2),
    ("field=R; H", 3),
    ("field=R; R + C + H", 4),
    ("field=C; C + C", 0),
])
def test_minimal_fl_set(text, s):
    fl = cl.minimal_fl_set(alg(text))
    assert fl.s == s
    assert fl.certified


def test_minimal_fl_set_rejects_non_pseudo():
    with pytest.raises(ValueError):
        cl.minimal_fl_set(alg("field=R; M2(R)"))


@pytest.mark.parametrize("text,ell,dim", [
    ("field=R; R + R", 2, 2),
    ("field=R; C + H", 2, 6),
    ("field=C; C + C + C", 3, 3),
])
def test_blocks_and_dimension(text, ell, dim):
    a = alg(text)
    assert cl.count_blocks(a, seed=3) == ell
    assert cl.dimension_bj(a, seed=3) == dim


@pytest.mark.parametrize("text,field", [
    ("field=R; R + R", Kind.R),
    ("field=R; C", Kind.R),
    ("field=R; H", Kind.R),
    ("field=C; C + C", Kind.C),
    ("field=C; C + C + C + C", Kind.C),
])
def test_detect_field(text, field):
    assert cl.detect_field(alg(text), seed=4) == field


@pytest.mark.parametrize("text", ["field=R; R", "field=C; C"])
def test_detect_field_dimension_one(text):
    with pytest.raises(cl.FieldUndecidable):
        cl.detect_field(alg(text), seed=4)


@pytest.mark.parametrize("text,r", [("field=R; R + R + C", 2), ("field=R; H + C", 0), ("field=R; R + H", 1)])
def test_count_real_blocks(text, r):
    assert cl.count_real_blocks(alg(text), seed=5) == r


def test_count_real_blocks_needs_real_field():
    with pytest.raises(ValueError):
        cl.count_real_blocks(alg("field=C; C + C"))


@pytest.mark.parametrize("text", ["field=R; R + H + C", "field=R; H + H", "field=R; C + H + M2(R)"])
def test_abelian_summand(text):
    a = alg(text)
    got = cl.abelian_summand(a, seed=6)
    assert got.equals(cl.Subspace.blocks(a, cl.structural_abelian_indices(a)))


# ---------------------------------------------------------------- signatures

def test_signature_example():
    rep = cl.signature(alg("field=R; R + R + C + H"), "both", seed=0)
    assert rep.matches
    assert rep.signature.to_json() == {"field": "R", "l": 4, "s": 4, "dim": 8, "r": 2, "c": 1, "h": 1,
                                       "nonpseudo": []}


def test_complex_signature_counts_every_block_in_r():
    sig = cl.structural_signature(alg("field=C; C + C + M2(C)"))
    assert (sig.r, sig.c, sig.h, sig.nonpseudo) == (2, 0, 0, ("M2(C)",))


def test_nonpseudo_only_algebra():
    rep = cl.signature(alg("field=R; M2(R)"), "bj", seed=0)
    assert rep.signature.blocks == 0 and not rep.field_decided
    assert rep.pseudo_abelian.dim == 0


@pytest.mark.parametrize("a,b,equal", [
    ("field=R; R", "field=C; C", True),
    ("field=R; R + R", "field=C; C + C", False),
    ("field=R; C + R", "field=R; R + C", True),
    ("field=R; C + C", "field=R; H", False),
    ("field=R; R + M2(R)", "field=R; R + M2(C)", False),
])
def test_signatures_equal(a, b, equal):
    ra = cl.signature(alg(a), "bj", seed=1)
    rb = cl.signature(alg(b), "bj", seed=1)
    assert cl.signatures_equal(ra, rb) is equal


@settings(max_examples=12)
@given(st.sampled_from(["field=R; R + C + H", "field=C; C + C", "field=R; C + C + M2(R)"]), seeds)
def test_signature_invariant_under_bj_isomorphisms(text, seed):
    a = alg(text)
    base = cl.signature(a, "bj", seed=0)
    moved = cl.signature(a, "bj", seed=seed, probe=cl.Probe.random(a, seed))
    assert cl.signatures_equal(base, moved)
    assert moved.signature.to_json() == base.signature.to_json()


def test_unknown_mode():
    with pytest.raises(ValueError):
        cl.signature(alg("field=R; R"), "fast")


def test_probe_is_a_bj_isomorphism():
    from bjclass import orthogonality as orth
    from bjclass.blockalg import random_element
    a = alg("field=R; C + C + M2(H)")
    p = cl.Probe.random(a, 3)
    rng = np.random.default_rng(3)
    for _ in range(20):
        x, y = random_element(a, rng), random_element(a, rng)
        assert orth.is_bj_orthogonal(x, y) == orth.is_bj_orthogonal(p(x), p(y))
    assert p(Element.identity(a)).norm == pytest.approx(1.0)
