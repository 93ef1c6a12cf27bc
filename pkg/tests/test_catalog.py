from collections import Counter

from bjclass.catalog import MAX_REAL_DIM, catalog, complex_algebras, extra_algebras, pseudo_abelian, real_algebras
from bjclass.scalars import Kind


def test_catalog_sizes():
    assert len(real_algebras()) == 146
    assert len(complex_algebras()) == 9
    assert len(extra_algebras()) == 5
    assert len(catalog()) == 160
    assert len(pseudo_abelian()) == 89


def test_catalog_entries_are_distinct_and_bounded():
    algs = real_algebras() + complex_algebras()
    assert len(set(algs)) == len(algs)
    assert all(a.real_dim <= MAX_REAL_DIM for a in algs)
    assert all(a == a.canonical() for a in algs)


def test_both_fields_and_every_block_kind_present():
    kinds = Counter(b.kind for a in catalog() for b in a.blocks)
    assert set(kinds) == {Kind.R, Kind.C, Kind.H}
    assert {a.field for a in pseudo_abelian()} == {Kind.R, Kind.C}
    assert any(b.n == 3 for a in catalog() for b in a.blocks)
