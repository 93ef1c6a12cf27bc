import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bjclass import scalars as sc
from bjclass.blockalg import (Algebra, Element, apply_isometry, block_permute, complex_embed,
                              complex_unembed, is_unitary, norm_frame, random_element, random_isometry,
                              random_legal_permutation, random_unitary, svd_block)

from conftest import algebras, elements, seeds


def test_parse_and_format():
    alg = Algebra.parse("field=R;  R+M2(H) + C")
    assert str(alg) == "field=R; R + M2(H) + C"
    assert alg.real_dim == 1 + 16 + 2
    assert alg.pseudo_indices == (0, 2)
    assert alg.nonpseudo_indices == (1,)
    assert not alg.is_pseudo_abelian
    assert str(alg.canonical()) == "field=R; R + C + M2(H)"


def test_complex_algebra_rejects_real_blocks():
    with pytest.raises(ValueError):
        Algebra.parse("field=C; R + C")


@given(elements())
def test_embedding_round_trip(a):
    for b, m in zip(a.algebra.blocks, a.blocks):
        assert np.allclose(complex_unembed(complex_embed(m, b.kind), b.kind), m)


@given(algebras, seeds)
def test_embedding_is_star_homomorphism(alg, seed):
    rng = np.random.default_rng(seed)
    a = random_element(alg, rng, "gaussian")
    b = random_element(alg, rng, "gaussian")
    for z, x, y, w in zip((a @ b).emb, a.emb, b.emb, a.adjoint().emb):
        assert np.allclose(z, x @ y, atol=1e-9)
        assert np.allclose(w, x.conj().T, atol=1e-12)


@given(elements())
def test_vec_round_trip(a):
    assert Element.from_vec(a.algebra, a.vec).allclose(a, 0.0)
    assert Element.from_json(a.algebra, a.to_json()).allclose(a, 0.0)


@given(elements())
def test_svd_reconstructs(a):
    r = a.svd.reconstruct(a.algebra)
    assert r.allclose(a, 1e-9 * max(a.norm, 1.0))
    for b, s in zip(a.algebra.blocks, a.svd.blocks):
        assert np.all(np.diff(s.values) <= 1e-12)
        assert is_unitary(s.left, 1e-9) and is_unitary(s.right, 1e-9)


def test_quaternion_svd_known_values():
    # [[1, i], [j, k]] has singular values sqrt(2), sqrt(2): its columns are orthogonal of length sqrt(2)
    m = np.zeros((2, 2, 4))
    m[0, 0, 0] = m[0, 1, 1] = m[1, 0, 2] = m[1, 1, 3] = 1.0
    s = svd_block(m, "H")
    assert np.allclose(s.values, [np.sqrt(2), np.sqrt(2)])
    # diag(3, 1) scaled by unit quaternions keeps its singular values
    d = np.zeros((2, 2, 4))
    d[0, 0] = [0, 3, 0, 0]
    d[1, 1] = [0, 0, 0, -1]
    assert np.allclose(svd_block(d, "H").values, [3, 1])


@given(elements())
def test_norm_matches_embedding(a):
    for z, n in zip(a.emb, a.block_norms):
        assert n == pytest.approx(np.linalg.svd(z, compute_uv=False)[0] if z.size else 0.0, abs=1e-12)


@given(elements())
def test_norm_frame_attains_norm(a):
    fr = norm_frame(a)
    if a.norm == 0:
        return
    assert fr.attaining
    for k in fr.attaining:
        f = fr.frames[k]
        for j in range(f.shape[1]):
            x = f[:, j]
            y = sc.matvec(a.blocks[k], x)
            assert np.linalg.norm(y) == pytest.approx(a.norm, rel=1e-8)


@given(algebras, seeds)
def test_isometry_and_permutation_preserve_norm(alg, seed):
    rng = np.random.default_rng(seed)
    a = random_element(alg, rng)
    u, v = random_isometry(alg, rng)
    moved = block_permute(apply_isometry(a, u, v), random_legal_permutation(alg, rng))
    assert moved.norm == pytest.approx(a.norm, rel=1e-10, abs=1e-14)
    assert sorted(moved.block_norms) == pytest.approx(sorted(a.block_norms), rel=1e-10, abs=1e-14)


def test_illegal_permutation_rejected():
    alg = Algebra.parse("field=R; R + C")
    with pytest.raises(ValueError):
        block_permute(Element.identity(alg), [1, 0])
    with pytest.raises(ValueError):
        block_permute(Element.identity(alg), [0, 0])


def test_apply_isometry_rejects_non_unitary(rng):
    alg = Algebra.parse("field=R; M2(R)")
    u = random_unitary(2, "R", rng)
    with pytest.raises(ValueError):
        apply_isometry(Element.identity(alg), [2 * u], [u])


def test_scale_rules():
    real = Element.identity(Algebra.parse("field=R; C"))
    with pytest.raises(ValueError):
        real.scale(1j)
    cplx = Element.identity(Algebra.parse("field=C; C"))
    assert np.allclose(cplx.scale(1j).blocks[0], [[[0, 1]]])


@pytest.mark.parametrize("law", ["gaussian", "sparse", "single", "left", "unitary", "tied",
                                 "degenerate", "near", "rank_one", "zero"])
def test_laws_are_seeded(law):
    alg = Algebra.parse("field=R; R + H + M2(C)")
    a = random_element(alg, 7, law)
    assert a.allclose(random_element(alg, 7, law), 0.0)
    with pytest.raises(ValueError):
        random_element(alg, 7, "nope")


@given(st.integers(0, 1000))
def test_unitary_law_spoils_at_most_one_block(seed):
    alg = Algebra.parse("field=R; H + M2(R) + C")
    a = random_element(alg, seed, "unitary")
    off = 0
    for m in a.blocks:
        prod = sc.matmul(sc.adjoint(m), m)
        eye = np.eye(m.shape[0])
        c = prod[0, 0, 0]
        off += not np.allclose(prod[..., 0], c * eye, atol=1e-9 * max(c, 1.0))
    assert off <= 1
