"""Read Hadamard matrices from Sloane's catalog, with a local cache and vendored fixtures."""

import hashlib
import logging
import os
import tempfile
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Optional, Union

import httpx

from .config import Config
from .database import Database
from .errors import (
    ChecksumError,
    EmptyInputError,
    InvalidHadamardError,
    MalformedLineError,
    NetworkUnreachableError,
    OrderMismatchError,
    UnknownCatalogOrderError,
)
from .gf2 import SignMatrix, is_hadamard

logger = logging.getLogger(__name__)

_SIGN_CHARS = frozenset("+-")


class CatalogSource(str, Enum):
    """Where a catalog entry was read from."""

    REMOTE_URL = "remote-url"
    LOCAL_FILE = "local-file"
    VENDORED = "vendored"


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog matrix: a representative of an equivalence class."""

    order: int
    class_label: str
    source: CatalogSource
    matrix: SignMatrix

    def __post_init__(self):
        if self.matrix.order != self.order:
            raise OrderMismatchError(
                f"{self.class_label}: matrix has order {self.matrix.order}, expected {self.order}"
            )


def parse_sign_matrices(
    text: Union[str, Iterable[str]], expected_order: Optional[int] = None
) -> List[SignMatrix]:
    """Parse every '+'/'-' matrix block in a catalog file.

    A block is m consecutive rows of m signs (whitespace inside a row is
    ignored). Lines holding anything other than signs and whitespace are
    headers and are skipped between blocks; inside a block they are errors.

    Raises:
        MalformedLineError: wrong row length, illegal character or truncated block.
        OrderMismatchError: a block's order differs from ``expected_order``.
        EmptyInputError: no block was found.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    matrices: List[SignMatrix] = []
    current: List[str] = []
    width = 0
    number = 0

    for number, raw in enumerate(lines, 1):
        compact = "".join(raw.split())
        if not compact:
            if current:
                raise MalformedLineError(number, f"block truncated after {len(current)} of {width} rows")
            continue

        if not set(compact) <= _SIGN_CHARS:
            if current:
                raise MalformedLineError(number, f"illegal character in matrix row {raw.strip()!r}")
            continue

        if not current:
            width = len(compact)
        elif len(compact) != width:
            raise MalformedLineError(number, f"expected {width} entries, got {len(compact)}")
        current.append(compact)

        if len(current) == width:
            if expected_order is not None and width != expected_order:
                raise OrderMismatchError(
                    f"block ending at line {number} has order {width}, expected {expected_order}"
                )
            matrices.append(SignMatrix([[1 if c == "+" else -1 for c in row] for row in current]))
            current = []

    if current:
        raise MalformedLineError(number, f"block truncated after {len(current)} of {width} rows")
    if not matrices:
        raise EmptyInputError("no matrix block found in input")
    return matrices


def format_sign_matrix(h: SignMatrix) -> str:
    """Serialize back to the catalog's '+'/'-' grid."""
    return "".join(
        "".join("+" if v > 0 else "-" for v in row) + "\n" for row in h.entries.tolist()
    )


def content_hash(text: str) -> str:
    """Calculate the SHA256 hash of catalog text."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _atomic_write(path: Path, text: str):
    """Write via a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def entry_labels(file_name: str, count: int) -> List[str]:
    """Label the blocks of one catalog file: the stem, numbered when there are several."""
    stem = file_name[:-4] if file_name.endswith(".txt") else file_name
    if count == 1:
        return [stem]
    return [f"{stem}.{i}" for i in range(1, count + 1)]


def load_catalog_file(
    path: Path, expected_order: Optional[int] = None, validate: Optional[bool] = None
) -> List[CatalogEntry]:
    """Parse a local catalog file into validated entries."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    matrices = parse_sign_matrices(text, expected_order)
    labels = entry_labels(path.name, len(matrices))
    return _to_entries(matrices, labels, CatalogSource.LOCAL_FILE, validate)


def _to_entries(
    matrices: List[SignMatrix],
    labels: List[str],
    source: CatalogSource,
    validate: Optional[bool],
) -> List[CatalogEntry]:
    check = Config.VALIDATE_HADAMARD if validate is None else validate
    entries = []
    for label, matrix in zip(labels, matrices):
        if check and not is_hadamard(matrix):
            raise InvalidHadamardError(label)
        entries.append(CatalogEntry(matrix.order, label, source, matrix))
    return entries


class CatalogFetcher:
    """Fetch catalog orders: cache first, then vendored fixtures, then HTTP."""

    def __init__(
        self,
        cache_dir: Optional[Path] = None,
        fixtures_dir: Optional[Path] = None,
        base_url: Optional[str] = None,
        client: Optional[httpx.Client] = None,
        index_path: Optional[str] = None,
    ):
        self.cache_dir = Path(cache_dir or Config.CACHE_DIR)
        self.fixtures_dir = Path(fixtures_dir or Config.FIXTURES_DIR)
        self.base_url = base_url or Config.CATALOG_BASE_URL
        self.index_path = index_path
        self.client = client
        self.db = Database(self.cache_dir / "manifest.db")

    def catalog_files(self, order: int) -> List[str]:
        """Return the pinned file list for an order."""
        try:
            return Config.catalog_files(order, self.index_path)
        except KeyError:
            raise UnknownCatalogOrderError(order) from None

    def fetch_order(
        self, order: int, validate: Optional[bool] = None, vendor: bool = False
    ) -> List[CatalogEntry]:
        """Return every catalog entry of an order, touching the network only on a cache miss."""
        entries: List[CatalogEntry] = []
        for file_name in self.catalog_files(order):
            entries.extend(self._fetch_file(order, file_name, validate, vendor))
        logger.debug("order %d: %d entries", order, len(entries))
        return entries

    def _fetch_file(
        self, order: int, file_name: str, validate: Optional[bool], vendor: bool
    ) -> List[CatalogEntry]:
        url = self.base_url + file_name
        cached = self._read_cache(order, url, validate)
        if cached is not None:
            return cached

        fixture = self.fixtures_dir / f"order-{order}" / file_name
        if fixture.is_file():
            text = fixture.read_text(encoding="utf-8")
            source = CatalogSource.VENDORED
        else:
            text = self._download(url)
            source = CatalogSource.REMOTE_URL
            if vendor:
                _atomic_write(fixture, text)

        matrices = parse_sign_matrices(text, expected_order=order)
        labels = entry_labels(file_name, len(matrices))
        entries = _to_entries(matrices, labels, source, validate)
        self._write_cache(order, url, entries)
        return entries

    def _download(self, url: str) -> str:
        client = self.client or httpx.Client(timeout=Config.HTTP_TIMEOUT, follow_redirects=True)
        try:
            response = client.get(url)
            response.raise_for_status()
        except httpx.HTTPStatusError as e:
            raise NetworkUnreachableError(
                f"catalog file {url} returned HTTP {e.response.status_code}"
            ) from e
        except httpx.TransportError as e:
            raise NetworkUnreachableError(
                f"cannot reach {url} ({e}); populate {self.fixtures_dir} with "
                "`fuglede fetch --vendor` on a connected machine or set FUGLEDE_FIXTURES_DIR"
            ) from e
        finally:
            if self.client is None:
                client.close()
        logger.debug("downloaded %s (%d bytes)", url, len(response.content))
        return response.text

    def _cache_path(self, order: int, class_label: str) -> Path:
        return self.cache_dir / f"order-{order}" / class_label

    def _write_cache(self, order: int, url: str, entries: List[CatalogEntry]):
        # every cache file lands on disk before any manifest row refers to it
        rows = []
        for entry in entries:
            text = format_sign_matrix(entry.matrix)
            path = self._cache_path(order, entry.class_label)
            _atomic_write(path, text)
            rows.append({
                "order": order,
                "class_label": entry.class_label,
                "url": url,
                "content_hash": content_hash(text),
                "path": str(path),
                "block_count": len(entries),
            })
        self.db.upsert_catalog_entries(rows)

    def _read_cache(
        self, order: int, url: str, validate: Optional[bool]
    ) -> Optional[List[CatalogEntry]]:
        records = [r for r in self.db.get_catalog_entries(order) if r["url"] == url]
        if not records:
            return None
        if any(r["block_count"] != len(records) for r in records):
            logger.warning(
                "refreshing cache for %s: %d of %d entries recorded",
                url, len(records), records[0]["block_count"],
            )
            return None
        try:
            matrices = [self.read_cached_entry(r) for r in records]
        except (ChecksumError, OSError) as e:
            logger.warning("refreshing cache for %s: %s", url, e)
            return None
        labels = [r["class_label"] for r in records]
        # numbered labels sort lexically; restore file order
        order_key = {label: i for i, label in enumerate(_natural_sorted(labels))}
        pairs = sorted(zip(labels, matrices), key=lambda p: order_key[p[0]])
        return _to_entries(
            [m for _, m in pairs], [label for label, _ in pairs], CatalogSource.LOCAL_FILE, validate
        )

    def read_cached_entry(self, record: dict) -> SignMatrix:
        """Load one cached entry and check it against the manifest hash.

        Raises:
            ChecksumError: if the file content changed since it was cached.
        """
        text = Path(record["path"]).read_text(encoding="utf-8")
        if content_hash(text) != record["content_hash"]:
            raise ChecksumError(f"{record['path']} does not match its manifest hash")
        return parse_sign_matrices(text, expected_order=record["order"])[0]


def _natural_key(label: str):
    head, _, tail = label.rpartition(".")
    return (head, int(tail)) if tail.isdigit() else (label, -1)


def _natural_sorted(labels: Iterable[str]) -> List[str]:
    return sorted(labels, key=_natural_key)


def fetch_order(
    order: int,
    cache_dir: Optional[Path] = None,
    validate: Optional[bool] = None,
    client: Optional[httpx.Client] = None,
    fixtures_dir: Optional[Path] = None,
) -> List[CatalogEntry]:
    """Fetch all catalog entries for one order (see CatalogFetcher)."""
    fetcher = CatalogFetcher(cache_dir=cache_dir, fixtures_dir=fixtures_dir, client=client)
    return fetcher.fetch_order(order, validate=validate)
