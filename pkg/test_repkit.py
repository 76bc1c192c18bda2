import json

import pytest

from app.core.config import settings
from app.core.exceptions import CharacterTableError
from app.models.schemas import CheckStatus, SuiteOptions
from app.services import repkit
from app.services.exactmath import Cyclotomic
from app.services.group_registry import group_registry
from app.services.permgroup import natural_action
from app.services.suites import VerificationService
from app.services.table_cache import TableCache


@pytest.fixture(scope="module")
def cache_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("tables"))


@pytest.fixture(scope="module")
def tables(cache_dir):
    return TableCache(cache_dir)


def degrees_of(T, mult):
    return sorted(T[name].degree for name, m in mult.items() for _ in range(m))


def test_alt5_table(tables):
    T = tables.get("alt5")
    assert T.degrees == [1, 3, 3, 4, 5]
    assert T.names == ["1", "3a", "3b", "4", "5"]
    assert T.check_orthogonality(columns=True)


def test_binary_tetrahedral_degrees_and_indicators(tables):
    T = tables.get("2alt4-quaternion")
    assert sorted(T.degrees) == [1, 1, 1, 2, 2, 2, 3]
    assert T.names[0] == "1a"
    ind = repkit.fs_indicator(T)
    assert sorted(ind[ch.name] for ch in T.characters if ch.degree == 2) == [-1, 0, 0]
    assert ind["3"] == 1


def test_real_wedderburn_labels(tables):
    summands = repkit.real_wedderburn(tables.get("2alt4-quaternion"))
    assert repkit.wedderburn_label(summands) == "R + C + M3(R) + H + M2(C)"
    assert repkit.lie_label(summands) == "U(1) × SL(3,R) × SU(2) × SL(2,C)"
    summands = repkit.real_wedderburn(tables.get("2sym4"))
    assert repkit.wedderburn_label(summands) == "2R + M2(R) + 2M3(R) + 2H + M2(H)"


def test_binary_icosahedral_summands(tables):
    summands = repkit.real_wedderburn(tables.get("2alt5"))
    assert sorted(s.size for s in summands if s.division == "R") == [1, 3, 3, 4, 5]
    assert sorted(s.size for s in summands if s.division == "H") == [1, 1, 2, 3]
    assert not [s for s in summands if s.division == "C"]
    assert sum(s.real_dimension for s in summands) == 120


def test_complex_summary(tables):
    parts = repkit.complex_wedderburn(tables.get("2alt4-quaternion"))
    assert sorted(parts) == sorted(["C"] * 3 + ["M2(C)"] * 3 + ["M3(C)"])


def test_symmetric_and_alternating_squares(tables):
    T = tables.get("alt5")
    sym, alt = repkit.sym_alt_square(T, T["4"].values)
    assert degrees_of(T, T.decompose(sym)) == [1, 4, 5]
    assert T.decompose(alt) == {"3a": 1, "3b": 1}
    square = repkit.tensor(T["3a"].values, T["3a"].values)
    assert degrees_of(T, T.decompose(square)) == [1, 3, 5]


def test_restriction_to_point_stabilizer(tables):
    G = group_registry.get("alt5")
    H = G.subgroup_from_elements([g for g in G.elements if g[4] == 4], name="Alt(4)")
    T_H = repkit.character_table(H)
    result = repkit.branch(tables.get("alt5"), tables.get("alt5")["4"].values, T_H)
    assert degrees_of(T_H, result.multiplicities) == [1, 3]
    assert result.dimension_balanced(T_H)


def test_natural_character_of_sym4(tables):
    T = tables.get("sym4")
    mult = repkit.decompose_permutation_character(natural_action(group_registry.get("sym4")), T)
    assert degrees_of(T, mult) == [1, 3]
    assert mult[T.names[0]] == 1


def test_non_character_is_rejected(tables):
    T = tables.get("alt5")
    delta = [Cyclotomic.rational(1)] + [Cyclotomic.rational(0)] * (len(T.classes) - 1)
    with pytest.raises(CharacterTableError):
        T.decompose(delta)


def test_order_limit(monkeypatch):
    monkeypatch.setattr(settings, "character_table_max_order", 10)
    with pytest.raises(CharacterTableError):
        repkit.character_table(group_registry.get("sym4"))


def test_galois_partner_in_triple_cover(tables):
    T = tables.get("3alt6-gf4")
    centre = next(j for j, (o, s) in enumerate(zip(T.classes.orders, T.classes.sizes)) if o == 3 and s == 1)
    a = next(ch for ch in T.characters if ch.degree == 3 and not ch.values[centre] == 3)
    b = T.find(a.galois(37))
    assert b is not None and b != a.name
    assert degrees_of(T, T.decompose(repkit.tensor(a.values, a.conjugate()))) == [1, 8]
    assert degrees_of(T, T.decompose(repkit.tensor(a.values, T[b].conjugate()))) == [9]


def test_table_cache_reuses_and_invalidates(cache_dir):
    first = TableCache(cache_dir)
    table = first.get("sym3")
    second = TableCache(cache_dir)
    loaded = second.load("sym3")
    assert loaded is not None
    assert [ch.values for ch in loaded.characters] == [ch.values for ch in table.characters]

    path = second._path("sym3")
    payload = json.loads(path.read_text())
    payload["hash"] = "sha256:stale"
    path.write_text(json.dumps(payload))
    assert TableCache(cache_dir).load("sym3") is None


def test_edited_cache_entry_is_recomputed(tmp_path):
    expected = TableCache(str(tmp_path)).get("sym3")
    path = tmp_path / "sym3.json"
    payload = json.loads(path.read_text())
    payload["table"]["characters"][-1]["values"][1] = Cyclotomic.rational(7).to_json()
    path.write_text(json.dumps(payload))

    fresh = TableCache(str(tmp_path))
    assert fresh.load("sym3") is None
    table = fresh.get("sym3")
    assert table.check_orthogonality()
    assert [ch.values for ch in table.characters] == [ch.values for ch in expected.characters]
    assert fresh.load("sym3") is not None


def test_repkit_suite_passes(cache_dir):
    report = VerificationService().run_suite("repkit", SuiteOptions(cache_dir=cache_dir))
    failed = [(r.id, r.summary) for r in report.records if r.status == CheckStatus.FAIL]
    assert not failed
    regular = next(r for r in report.records if r.id == "repkit.2alt4.regular")
    assert regular.witness["multiplicities"] == {"T": 1, "U": 1, "V": 3, "R": 1, "S": 2}
