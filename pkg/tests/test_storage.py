from __future__ import annotations

import pytest

from siegel_volume import storage
from siegel_volume.errors import DomainError


def test_atomic_write_keeps_backup(tmp_path):
    path = tmp_path / "table.txt"
    storage.atomic_write_text(path, "first\n")
    assert not (tmp_path / "backup").exists()
    storage.atomic_write_text(path, "second\n")
    assert path.read_text(encoding="utf-8") == "second\n"
    backups = list((tmp_path / "backup").iterdir())
    assert len(backups) == 1
    assert backups[0].read_text(encoding="utf-8") == "first\n"
    assert not (tmp_path / "table.txt.tmp").exists()


def test_int_rows_round_trip(tmp_path):
    path = tmp_path / "rows.txt"
    storage.write_int_rows(path, [(1, -2, 3), (0, 0, 7)], header="demo version 1")
    header, rows = storage.read_int_rows(path, width=3)
    assert header == "demo version 1"
    assert rows == [(1, -2, 3), (0, 0, 7)]


def test_int_rows_errors_name_the_line(tmp_path):
    path = tmp_path / "rows.txt"
    path.write_text("# header\n1 2 3\n\n4 five 6\n", encoding="utf-8")
    with pytest.raises(DomainError, match=r"rows.txt:4: expected integers"):
        storage.read_int_rows(path, width=3)
    path.write_text("1 2\n", encoding="utf-8")
    with pytest.raises(DomainError, match=r":1: expected 3 integers, got 2"):
        storage.read_int_rows(path, width=3)


def test_missing_file(tmp_path):
    with pytest.raises(DomainError, match="cannot read"):
        storage.read_lines(tmp_path / "missing.txt")


def test_json_round_trip(tmp_path):
    path = tmp_path / "report.json"
    storage.atomic_write_json(path, {"value": "1/3", "items": [1, 2]})
    assert storage.read_json(path) == {"value": "1/3", "items": [1, 2]}
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(DomainError, match="expected a JSON object"):
        storage.read_json(path)
    path.write_text("{", encoding="utf-8")
    with pytest.raises(DomainError, match="cannot parse JSON"):
        storage.read_json(path)
