"""File formats: match lists, query counts, ground truth, rankings, sweep CSV.

All text formats are tab-separated with ``#`` comments, written with sorted
keys and fixed float formatting so regeneration is byte-identical. Readers
raise ParseError naming the offending file and line; OS-level failures
surface as IoError.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Sequence
from pathlib import Path

from .errors import IoError, ParseError, RelpropError
from .evaluation import EvalTruth, SweepRow
from .graph import MatchRecord

RANKING_QUERY_PREFIX = "# query:"

SWEEP_CSV_HEADER = (
    "root_size",
    "depth",
    "alpha",
    "gamma",
    "iters",
    "map",
    "mean_recall",
    "mean_subgraph_order",
)


def _data_lines(path: Path) -> Iterable[tuple[int, str]]:
    """Yield (1-based line number, stripped text) skipping blanks and comments."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_matches(path: str | Path) -> list[MatchRecord]:
    """Parse a match file of `u<TAB>v<TAB>inlier_count` lines."""
    path = Path(path)
    records: list[MatchRecord] = []
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(fields)}")
        u, v, raw_count = fields
        try:
            count = int(raw_count)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: inlier count {raw_count!r} is not an integer") from None
        try:
            records.append(MatchRecord(u, v, count))
        except RelpropError as exc:
            raise type(exc)(f"{path}:{lineno}: {exc}") from None
    return records


def write_matches(path: str | Path, records: Iterable[MatchRecord]) -> None:
    lines = [f"{rec.u}\t{rec.v}\t{rec.inliers}" for rec in records]
    _write_text(Path(path), "".join(line + "\n" for line in lines))


def read_queries(path: str | Path) -> dict[str, dict[str, int]]:
    """Parse a query file of `query_id<TAB>vertex_id<TAB>inlier_count` lines."""
    path = Path(path)
    queries: dict[str, dict[str, int]] = {}
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(fields)}")
        query_id, vertex_id, raw_count = fields
        if not query_id or not vertex_id:
            raise ParseError(f"{path}:{lineno}: empty id field")
        try:
            count = int(raw_count)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: inlier count {raw_count!r} is not an integer") from None
        if count < 0:
            raise ParseError(f"{path}:{lineno}: inlier count must be >= 0, got {count}")
        counts = queries.setdefault(query_id, {})
        if vertex_id in counts:
            raise ParseError(f"{path}:{lineno}: duplicate entry for {query_id!r} / {vertex_id!r}")
        counts[vertex_id] = count
    return queries


def write_queries(path: str | Path, queries: dict[str, dict[str, int]]) -> None:
    lines = [
        f"{query_id}\t{vertex_id}\t{counts[vertex_id]}"
        for query_id in sorted(queries)
        for counts in [queries[query_id]]
        for vertex_id in sorted(counts)
    ]
    _write_text(Path(path), "".join(line + "\n" for line in lines))


def read_truths(path: str | Path) -> dict[str, EvalTruth]:
    """Parse a ground-truth JSON file mapping query_id to relevant/ignore lists."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ParseError(f"{path}: top level must be an object of query ids")
    truths: dict[str, EvalTruth] = {}
    for query_id, entry in payload.items():
        if not isinstance(entry, dict):
            raise ParseError(f"{path}: entry for {query_id!r} must be an object")
        unknown = set(entry) - {"relevant", "ignore"}
        if unknown:
            raise ParseError(f"{path}: entry for {query_id!r} has unknown keys {sorted(unknown)}")
        relevant = entry.get("relevant", [])
        ignore = entry.get("ignore", [])
        for name, ids in (("relevant", relevant), ("ignore", ignore)):
            if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
                raise ParseError(f"{path}: {name} list for {query_id!r} must hold strings")
        try:
            truths[query_id] = EvalTruth(
                query_id=query_id,
                relevant=frozenset(relevant),
                ignore=frozenset(ignore),
            )
        except RelpropError as exc:
            raise ParseError(f"{path}: entry for {query_id!r}: {exc}") from None
    return truths


def write_truths(path: str | Path, truths: dict[str, EvalTruth]) -> None:
    payload = {
        query_id: {
            "relevant": sorted(truths[query_id].relevant),
            "ignore": sorted(truths[query_id].ignore),
        }
        for query_id in sorted(truths)
    }
    _write_text(Path(path), json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_ranking(path: str | Path, query_id: str, ranking: Sequence[tuple[str, float]]) -> None:
    """Write `rank<TAB>vertex_id<TAB>score` lines under a query header comment."""
    lines = [f"{RANKING_QUERY_PREFIX} {query_id}"]
    lines += [
        f"{position}\t{vertex_id}\t{score:.17g}"
        for position, (vertex_id, score) in enumerate(ranking, start=1)
    ]
    _write_text(Path(path), "".join(line + "\n" for line in lines))


def read_ranking(path: str | Path) -> tuple[str, list[tuple[str, float]]]:
    """Read a ranking file back as (query_id, [(vertex_id, score), ...])."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    query_id: str | None = None
    ranking: list[tuple[str, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(RANKING_QUERY_PREFIX):
            declared = line[len(RANKING_QUERY_PREFIX):].strip()
            if not declared:
                raise ParseError(f"{path}:{lineno}: empty query id in header")
            if query_id is not None:
                raise ParseError(f"{path}:{lineno}: repeated query header")
            query_id = declared
            continue
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(fields)}")
        raw_position, vertex_id, raw_score = fields
        try:
            position = int(raw_position)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: rank {raw_position!r} is not an integer") from None
        if position != len(ranking) + 1:
            raise ParseError(f"{path}:{lineno}: rank {position} out of sequence")
        try:
            score = float(raw_score)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: score {raw_score!r} is not a number") from None
        ranking.append((vertex_id, score))
    if query_id is None:
        raise ParseError(f"{path}: missing `{RANKING_QUERY_PREFIX}` header line")
    return query_id, ranking


def write_sweep_csv(path: str | Path, rows: Iterable[SweepRow]) -> None:
    """Write sweep results with the fixed header and floats at 6 decimals."""
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(SWEEP_CSV_HEADER)
            for row in rows:
                writer.writerow(
                    [
                        row.root_size,
                        row.depth,
                        f"{row.alpha:.6f}",
                        f"{row.gamma:.6f}",
                        row.iters,
                        f"{row.map:.6f}",
                        f"{row.mean_recall:.6f}",
                        f"{row.mean_subgraph_order:.6f}",
                    ]
                )
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_sweep_csv(path: str | Path) -> list[SweepRow]:
    """Read a sweep CSV back into rows, validating the header."""
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise ParseError(f"{path}: empty sweep file") from None
            if tuple(header) != SWEEP_CSV_HEADER:
                raise ParseError(f"{path}: unexpected header {header}")
            rows: list[SweepRow] = []
            for lineno, fields in enumerate(reader, start=2):
                if not fields:
                    continue
                if len(fields) != len(SWEEP_CSV_HEADER):
                    raise ParseError(
                        f"{path}:{lineno}: expected {len(SWEEP_CSV_HEADER)} fields, got {len(fields)}"
                    )
                try:
                    rows.append(
                        SweepRow(
                            root_size=int(fields[0]),
                            depth=int(fields[1]),
                            alpha=float(fields[2]),
                            gamma=float(fields[3]),
                            iters=int(fields[4]),
                            map=float(fields[5]),
                            mean_recall=float(fields[6]),
                            mean_subgraph_order=float(fields[7]),
                        )
                    )
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: {exc}") from None
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return rows
