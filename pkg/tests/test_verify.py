import numpy as np
import pytest

from bjclass import orthogonality as orth
from bjclass import verify
from bjclass.blockalg import Algebra

SUBSET = tuple(Algebra.parse(t) for t in ("field=R; R + C", "field=R; H + M2(R)", "field=C; C + M2(C)"))


def test_random_pairs_shapes():
    alg = SUBSET[1]
    batch = verify.random_pairs(alg, np.random.default_rng(0), 12)
    a, b = batch.pair(3)
    assert a.algebra == alg and b.algebra == alg
    assert len(batch.a) == len(alg.blocks)


def test_oracle_agreement_on_subset():
    res = verify.oracle_agreement(SUBSET[2], 40, 0)
    assert res.total == 40 and not res.unresolved and res.rate >= 0.95


@pytest.mark.parametrize("name", verify.SUITES)
def test_suites_pass_on_subset(name):
    suite = verify.run_suite(name, trials=4, seed=3, algebras=SUBSET)
    assert suite.passed, suite.to_text()
    assert {c.id.split("/")[0] for c in suite.checks}


def test_check_ids_name_the_property():
    suite = verify.run_suite("symmetry", trials=2, seed=0, algebras=SUBSET[:1])
    ids = {c.id.split("/")[0] for c in suite.checks}
    assert ids == {"left-symmetry", "right-symmetry", "smoothness", "symmetry-invariance"}


def test_deterministic_under_seed():
    a = verify.run_suite("neighborhoods", trials=3, seed=11, algebras=SUBSET).dumps()
    b = verify.run_suite("neighborhoods", trials=3, seed=11, algebras=SUBSET, workers=2).dumps()
    assert a == b


def test_bad_arguments():
    with pytest.raises(ValueError):
        verify.run_suite("everything")
    with pytest.raises(ValueError):
        verify.run_suite("orthogonality", trials=0)


def test_corrupted_predicate_is_caught(monkeypatch):
    real = orth.orthogonal_batch

    def flipped(*args, **kwargs):
        return ~real(*args, **kwargs)

    monkeypatch.setattr(orth, "orthogonal_batch", flipped)
    suite = verify.run_suite("orthogonality", trials=8, seed=0, algebras=SUBSET[:2])
    assert not suite.passed
    bad = [c for c in suite.failures if c.counterexample is not None]
    assert bad and "a" in bad[0].counterexample and "b" in bad[0].counterexample
