"""Catalog contents, ordering, and level filtering."""

from __future__ import annotations

from collections import Counter

import pytest

from chainsig.schemes import (
    FAMILY_ORDER,
    VALID_LEVELS,
    by_variant,
    catalog,
    filter_by_levels,
)
from golden_catalog import GOLDEN_FAMILY_ORDER, GOLDEN_LEVEL_COUNTS, GOLDEN_ROWS


def test_catalog_has_exactly_46_variants():
    assert len(catalog()) == 46


def test_catalog_matches_golden_table():
    live = [(d.family, d.variant, d.level, d.is_pqc) for d in catalog()]
    assert live == list(GOLDEN_ROWS)


def test_family_order_matches_golden():
    assert FAMILY_ORDER == GOLDEN_FAMILY_ORDER
    assert len(set(FAMILY_ORDER)) == 16


def test_level_histogram():
    counts = Counter(d.level for d in catalog())
    assert dict(counts) == GOLDEN_LEVEL_COUNTS
    assert 4 not in counts


def test_variant_names_unique():
    names = [d.variant for d in catalog()]
    assert len(names) == len(set(names))


def test_pqc_flag_only_false_for_ecdsa():
    for descriptor in catalog():
        assert descriptor.is_pqc == (descriptor.family != "ECDSA")


def test_levels_are_valid():
    for descriptor in catalog():
        assert descriptor.level in VALID_LEVELS


def test_catalog_is_deterministic():
    first = catalog()
    second = catalog()
    assert first == second
    assert [repr(d) for d in first] == [repr(d) for d in second]


def test_by_variant_round_trips():
    index = by_variant()
    assert len(index) == 46
    for descriptor in catalog():
        assert index[descriptor.variant] == descriptor


def test_provider_key_assigned_everywhere():
    for descriptor in catalog():
        assert descriptor.provider_key


def test_provider_env_override_applies_to_all(monkeypatch):
    monkeypatch.setenv("CHAINSIG_PROVIDER", "stub")
    assert {d.provider_key for d in catalog()} == {"stub"}


def test_filter_by_levels_subset_and_order():
    full = catalog()
    subset = filter_by_levels(full, {1, 5})
    assert [d.variant for d in subset] == [
        d.variant for d in full if d.level in {1, 5}
    ]
    assert len(subset) == GOLDEN_LEVEL_COUNTS[1] + GOLDEN_LEVEL_COUNTS[5]


def test_filter_by_levels_level_4_is_empty():
    assert filter_by_levels(catalog(), {4}) == []


def test_filter_by_levels_level_2():
    variants = {d.variant for d in filter_by_levels(catalog(), {2})}
    assert variants == {"ML-DSA-44", "Dilithium2"}


def test_filter_by_levels_empty_selection():
    assert filter_by_levels(catalog(), set()) == []


def test_filter_by_levels_all_levels_is_identity():
    full = catalog()
    assert filter_by_levels(full, {1, 2, 3, 4, 5}) == full


@pytest.mark.parametrize("family", GOLDEN_FAMILY_ORDER)
def test_family_variants_sorted_by_level(family):
    levels = [d.level for d in catalog() if d.family == family]
    assert levels == sorted(levels)
