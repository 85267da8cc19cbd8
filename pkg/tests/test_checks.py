import pytest

import oracles
from torelli.checks import SUITES, kirchhoff_tree_count


def test_kirchhoff_matches_deletion_contraction(genus3):
    for g in genus3:
        assert kirchhoff_tree_count(g) == oracles.deletion_contraction_trees(g)


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_suites_pass_in_genus_2(suite):
    res = SUITES[suite](2)
    assert res.passed and res.checked > 0
