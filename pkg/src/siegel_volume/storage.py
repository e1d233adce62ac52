"""Plain-text and JSON persistence for derived tables and reports."""

from __future__ import annotations

from datetime import datetime
import json
import logging
from pathlib import Path
import shutil
from typing import TYPE_CHECKING, cast

from .errors import DomainError

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

log = logging.getLogger(__name__)

type JSONValue = str | int | float | bool | None | dict[str, "JSONValue"] | list["JSONValue"]
type JSONObject = dict[str, JSONValue]


def backup(path: Path) -> Path | None:
    """Create a timestamped backup of a file."""

    if not path.exists():
        return None
    ts = datetime.now().strftime("%Y%m%d%H%M%S")
    backup_dir = path.parent / "backup"
    backup_dir.mkdir(parents=True, exist_ok=True)
    dst = backup_dir / f"{path.name}.bak.{ts}"
    shutil.copy2(path, dst)
    log.debug("backed up %s to %s", path, dst)
    return dst


def atomic_write_text(path: Path, text: str) -> None:
    """Write text atomically, keeping a backup of the previous file."""

    backup(path)
    tmp_path = Path(f"{path}.tmp")
    path.parent.mkdir(parents=True, exist_ok=True)
    with tmp_path.open("w", encoding="utf-8") as f:
        f.write(text)
    tmp_path.replace(path)


def read_lines(path: Path) -> list[str]:
    try:
        return path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc


# ---------- integer row tables ----------
def write_int_rows(path: Path, rows: Iterable[Sequence[int]], header: str | None = None) -> None:
    """Write whitespace-separated integer rows, with an optional ``# header`` line."""

    lines = [f"# {header}"] if header else []
    lines.extend(" ".join(str(v) for v in row) for row in rows)
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_int_rows(path: Path, width: int) -> tuple[str | None, list[tuple[int, ...]]]:
    """Return the first comment line (without ``#``) and the integer rows of ``path``.

    Blank lines and later comments are skipped. A row that is not ``width``
    integers raises DomainError naming the file and line.
    """

    header: str | None = None
    rows: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(read_lines(path), start=1):
        line = raw.strip()
        if line.startswith("#"):
            if header is None and not rows:
                header = line.lstrip("#").strip()
            continue
        if not line:
            continue
        try:
            values = tuple(int(v) for v in line.split())
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: expected integers, got {line!r}") from exc
        if len(values) != width:
            raise DomainError(f"{path}:{lineno}: expected {width} integers, got {len(values)}")
        rows.append(values)
    return header, rows


# ---------- JSON ----------
def read_json(path: Path) -> JSONObject:
    try:
        with path.open("r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}:{exc.lineno}: cannot parse JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise DomainError(f"{path}: expected a JSON object")
    return cast("JSONObject", data)


def atomic_write_json(path: Path, data: JSONObject) -> None:
    atomic_write_text(path, json.dumps(data, indent=2, ensure_ascii=False) + "\n")
