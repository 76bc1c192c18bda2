import numpy as np
import pytest

from app.core.exceptions import EnumerationCapExceeded, NotASubgroupError
from app.models.schemas import CheckStatus, SuiteOptions
from app.services.exactmath import Quaternion, quaternion_mul
from app.services.group_registry import group_registry
from app.services.permgroup import (
    GroupAction, PermGroup, alternating_group, automorphism_count, class_split_under, close_generators,
    coset_action, extend_homomorphism, find_isomorphism, format_cycles, from_cycles, is_even, natural_action,
    orbit_partition, pair_action, perm_identity, perm_inverse, perm_mul, perm_order, subgroup_classes,
    symmetric_group,
)
from app.services.suites import verification_service


@pytest.fixture(scope="module")
def alt6():
    return group_registry.get("alt6")


@pytest.fixture(scope="module")
def alt5_point(alt6):
    return alt6.subgroup_from_elements([g for g in alt6.elements if g[5] == 5], name="Alt(5) fixing 6")


def test_composition_applies_right_factor_first():
    swap01 = (1, 0, 2)
    swap12 = (0, 2, 1)
    assert perm_mul(swap01, swap12) == (1, 2, 0)
    assert perm_mul(swap12, swap01) == (2, 0, 1)
    assert perm_mul(swap01, perm_inverse(swap01)) == perm_identity(3)


def test_cycle_notation():
    p = from_cycles([(0, 1, 2)], range(4))
    assert p == (1, 2, 0, 3)
    assert format_cycles(p) == "(1,2,3)"
    assert format_cycles(perm_identity(3)) == "()"
    assert perm_order(from_cycles([(0, 1), (2, 3, 4)], range(5))) == 6
    with pytest.raises(ValueError):
        from_cycles([(0, 1), (1, 2)], range(3))


def test_group_orders():
    assert symmetric_group(4).order == 24
    assert alternating_group(5).order == 60
    assert group_registry.get("alt6").order == 360
    assert group_registry.get("2alt4-quaternion").order == 24


def test_close_generators_with_a_product_rule():
    i = Quaternion.unit("i")
    j = Quaternion.unit("j")
    elements = close_generators([i, j], quaternion_mul, Quaternion.unit("1"), name="Q8")
    assert len(elements) == 8
    assert elements[0] == Quaternion.unit("1")
    assert close_generators([from_cycles([(0, 1, 2)], range(3))]).order == 3
    with pytest.raises(EnumerationCapExceeded):
        close_generators([i, j], quaternion_mul, Quaternion.unit("1"), cap=4)


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        PermGroup(symmetric_group(6).generators, cap=100)


def test_sym4_classes_and_parity():
    data = symmetric_group(4).classes
    assert sorted(data.sizes) == [1, 3, 6, 6, 8]
    even = sorted(s for r, s in zip(data.representatives, data.sizes) if is_even(r))
    assert even == [1, 3, 8]
    assert data.order_census() == {1: 1, 2: 9, 3: 8, 4: 6}


def test_binary_tetrahedral_census():
    census = group_registry.get("2alt4-quaternion").classes.order_census()
    assert census == {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}


def test_sym4_split_under_point_stabilizer():
    G = symmetric_group(4)
    S = G.subgroup_from_elements([g for g in G.elements if g[3] == 3], name="Sym(3)")
    assert class_split_under(G, S) == [[1], [3], [3, 3], [2, 6], [6]]


def test_subgroup_membership_is_checked():
    G = alternating_group(4)
    H = PermGroup([from_cycles([(0, 1)], range(4))])
    with pytest.raises(NotASubgroupError):
        coset_action(G, H)
    with pytest.raises(NotASubgroupError):
        G.subgroup_from_elements(H.elements)


def test_point_stabilizer_coset_action_is_natural(alt6, alt5_point):
    act = coset_action(alt6, alt5_point)
    assert act.degree == 6
    assert act.is_transitive()
    assert act.is_homomorphism(np.random.default_rng(3))
    assert act.stabilizer_order(act.points[0]) == 60


def test_alt6_subgroup_classes(alt6):
    for order, count in {60: 2, 24: 2, 6: 2, 8: 1}.items():
        search = subgroup_classes(alt6, order)
        assert not search.partial
        assert search.count == count, order


def test_alt5_classes_act_differently_on_letters(alt6):
    act = natural_action(alt6)
    shapes = sorted(orbit_partition(act, H) for H in subgroup_classes(alt6, 60).representatives)
    assert shapes == [[1, 5], [6]]


def test_pairs_under_point_stabilizer(alt6, alt5_point):
    assert orbit_partition(pair_action(alt6), alt5_point) == [5, 10]


def test_sign_homomorphism_extends():
    G = symmetric_group(3)
    sign = {g: (0, 1) if is_even(g) else (1, 0) for g in G.generators}
    phi = extend_homomorphism(G, [sign[g] for g in G.generators], perm_mul, (0, 1))
    assert phi is not None
    assert sum(1 for v in phi.values() if v == (1, 0)) == 3


def test_inconsistent_images_are_rejected():
    G = symmetric_group(3)
    images = [(1, 0)] * len(G.generators)
    assert extend_homomorphism(G, images, perm_mul, (0, 1)) is None


def test_isomorphism_and_automorphisms():
    assert find_isomorphism(symmetric_group(3), group_registry.get("sym3")) is not None
    assert find_isomorphism(symmetric_group(3), alternating_group(4)) is None
    assert automorphism_count(symmetric_group(3)) == 6
    assert automorphism_count(group_registry.get("2alt4-quaternion")) == 24
    assert automorphism_count(alternating_group(4)) == 24
    assert find_isomorphism(alternating_group(4), alternating_group(4)) is not None


def test_signed_points_action_is_an_action():
    G = group_registry.get("2alt4-quaternion")
    points = ["W", "X", "Y", "Z", "-W", "-X", "-Y", "-Z"]
    images = [from_cycles([("W", "X", "-W", "-X"), ("Y", "-Z", "-Y", "Z")], points),
              from_cycles([("X", "Y", "Z"), ("-X", "-Y", "-Z")], points)]
    phi = extend_homomorphism(G, images, perm_mul, perm_identity(8))
    assert phi is not None
    act = GroupAction(G, range(8), lambda g, x: phi[g][x])
    assert act.is_homomorphism(np.random.default_rng(11))
    assert len(act.orbits()) == 1


def test_groups_suite_passes():
    report = verification_service.run_suite("groups", SuiteOptions())
    failed = [(r.id, r.summary) for r in report.records if r.status == CheckStatus.FAIL]
    assert not failed
    assert "groups.alt6.alt5-refinement" in {r.id for r in report.records}
