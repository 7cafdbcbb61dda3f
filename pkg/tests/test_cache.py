import json

import pytest

from tripletfusion import cache
from tripletfusion.catalog import AlgebraParams, enumerate_basis
from tripletfusion.errors import CacheCorruption
from tripletfusion.fusion_engine import compute_structure_table, structure_constants
from tripletfusion.grothendieck import k_structure_constants


def test_path_layout(p23):
    path = cache.table_path(p23, "P")
    fp = cache.basis_fingerprint(enumerate_basis(p23, "P"))
    assert path.name == f"fusion-P-2-3-{fp}.json"
    assert len(fp) == 16
    assert cache.table_path(p23, "K").name.startswith("fusion-K-2-3-")


def test_env_var(tmp_path, monkeypatch, p23):
    monkeypatch.setenv("FUSION_CACHE_DIR", str(tmp_path / "x"))
    assert cache.cache_dir() == tmp_path / "x"


def test_round_trip(p23):
    table = structure_constants(p23)
    assert cache.table_path(p23, "P").exists()
    assert cache.load_table(p23, "P") == table == compute_structure_table(p23)


def test_schema(p23):
    structure_constants(p23)
    doc = json.loads(cache.table_path(p23, "P").read_text())
    assert set(doc) == {"p_plus", "p_minus", "basis", "constants"}
    assert len(doc["basis"]) == 32
    assert len(doc["constants"]) == 32 * 33 // 2
    assert all(int(k.split(",")[0]) <= int(k.split(",")[1]) for k in doc["constants"])
    assert doc["constants"]["4,4"] == {"2": 1}


def test_canonical_bytes(p23):
    structure_constants(p23)
    path = cache.table_path(p23, "P")
    first = path.read_bytes()
    cache.save_table(compute_structure_table(p23))
    assert path.read_bytes() == first


def test_k_table_cached(p34):
    table = k_structure_constants(p34)
    assert cache.load_table(p34, "K") == table


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(basis=list(reversed(d["basis"]))),
        lambda d: d.update(p_plus=5),
        lambda d: d["constants"].pop("0,0"),
        lambda d: d["constants"].update({"0,0": {"99": 1}}),
    ],
)
def test_corruption_detected(p23, mutate):
    structure_constants(p23)
    path = cache.table_path(p23, "P")
    doc = json.loads(path.read_text())
    mutate(doc)
    path.write_text(json.dumps(doc))
    with pytest.raises(CacheCorruption):
        cache.load_table(p23, "P")


def test_garbage_detected(p23):
    structure_constants(p23)
    cache.table_path(p23, "P").write_text("{not json")
    with pytest.raises(CacheCorruption):
        structure_constants(p23)


def test_missing_is_none():
    assert cache.load_table(AlgebraParams(5, 7), "K") is None
