import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bjclass import scalars as sc
from bjclass.scalars import BlockVector, Kind, Scalar, inner_product_F, quat_conj, quat_mul

coord = st.floats(min_value=-10, max_value=10, allow_nan=False)
quats = arrays(np.float64, (4,), elements=coord)


def test_quaternion_units():
    i, j, k = (Scalar.of("H", 0, 1), Scalar.of("H", 0, 0, 1), Scalar.of("H", 0, 0, 0, 1))
    minus_one = Scalar.of("H", -1)
    assert (i * i).isclose(minus_one) and (j * j).isclose(minus_one) and (k * k).isclose(minus_one)
    assert (i * j).isclose(k)
    assert (j * i).isclose(-k)
    assert (i * j * k).isclose(minus_one)


def test_complex_matches_python():
    a, b = 1.5 - 2j, -0.25 + 3j
    got = sc.mul(sc.from_complex(a), sc.from_complex(b))
    assert complex(*got) == pytest.approx(a * b)


@given(quats, quats, quats)
def test_quaternion_associative(a, b, c):
    left = sc.mul(sc.mul(a, b), c)
    right = sc.mul(a, sc.mul(b, c))
    assert np.allclose(left, right, atol=1e-9 * (1 + np.abs(left).max()))


@given(quats, quats)
def test_conjugation_reverses_products(a, b):
    assert np.allclose(sc.conj(sc.mul(a, b)), sc.mul(sc.conj(b), sc.conj(a)), atol=1e-9)


@given(quats, quats)
def test_modulus_multiplicative(a, b):
    assert sc.modulus(sc.mul(a, b)) == pytest.approx(sc.modulus(a) * sc.modulus(b), rel=1e-9, abs=1e-9)


@given(quats)
def test_inverse_via_conjugate(a):
    n2 = float(np.dot(a, a))
    if n2 < 1e-6:
        return
    prod = sc.mul(a, sc.conj(a) / n2)
    assert np.allclose(prod, [1, 0, 0, 0], atol=1e-9)


def test_scalar_wrappers():
    q = Scalar.of("H", 1, 2, 3, 4)
    assert quat_conj(q).coords == (1, -2, -3, -4)
    assert quat_mul(q, quat_conj(q)).isclose(Scalar.of("H", 30))
    assert abs(q) == pytest.approx(np.sqrt(30))
    with pytest.raises(ValueError):
        Scalar.of("R", 1) + Scalar.of("C", 1)
    with pytest.raises(ValueError):
        Scalar(Kind.C, (1.0,))


@pytest.mark.parametrize("value,kind", [(2.5, "R"), ([1, -2], "C"), ([0, 1, 2, 3], "H"), (3, "H")])
def test_scalar_json_round_trip(value, kind):
    s = Scalar.from_json(value, kind)
    assert Scalar.from_json(s.to_json(), kind) == s


def test_decode_rejects_oversized():
    with pytest.raises(ValueError):
        sc.decode_scalar([1, 2, 3, 4], "C")
    with pytest.raises(ValueError):
        sc.decode_scalar("x", "R")


def test_inner_product_real_and_complex():
    x = BlockVector(("C",), (np.array([[1.0, 0.0]]),))
    y = BlockVector(("C",), (np.array([[0.0, 1.0]]),))
    # y* x = (-i)(1) = -i
    assert inner_product_F(x, y, "C") == pytest.approx(-1j)
    assert inner_product_F(x, y, "R") == pytest.approx(0.0)
    with pytest.raises(ValueError):
        inner_product_F(x, y, "H")


def test_right_mul_by_quaternion():
    x = BlockVector(("H",), (np.array([[1.0, 0, 0, 0]]),))
    out = x.right_mul([np.array([0, 1.0, 0, 0])])
    assert np.allclose(out.blocks[0], [[0, 1, 0, 0]])
    assert out.norm == pytest.approx(1.0)
