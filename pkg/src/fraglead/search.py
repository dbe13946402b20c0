"""Uniform query interface over pluggable search backends.

Two backend kinds exist: ``corpus`` (the offline substring index, fully
reproducible) and ``web`` (any HTTP search API that returns a hit count in
its JSON response).  The web backend is entirely config-driven — a URL
template plus a dot-separated path to the count field — so no engine is
hard-coded.  Results can be cached on disk, and ``sweep`` runs the whole
fragment-size experiment in one call.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
import urllib.parse
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import requests

from fraglead import corpus as corpus_mod
from fraglead.analysis import ResultRow, ResultTable, make_row
from fraglead.errors import (
    BackendUnavailable,
    CacheIo,
    CountFieldMissing,
    NetworkError,
    RateLimited,
    SearchError,
)
from fraglead.fragments import SizeSchedule, sample
from fraglead.smiles import tokenize

_RETRY_ATTEMPTS = 3
_BACKOFF_BASE_SECONDS = 0.5
_CACHE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class BackendConfig:
    """Declarative description of a search backend.

    Web settings: ``url_template`` must contain exactly one ``{query}``
    placeholder and may contain ``{api_key}``, filled from the environment
    variable named by ``api_key_env``; ``count_path`` is a dot-separated
    path to the hit-count field of the JSON response; ``exact_phrase``
    wraps queries in double quotes.  Corpus settings: ``corpus_path``
    points at a document directory or a line-delimited file.
    """

    kind: str
    url_template: str | None = None
    count_path: str | None = None
    api_key_env: str | None = None
    qps_limit: float = 1.0
    exact_phrase: bool = False
    corpus_path: str | None = None

    def __post_init__(self):
        if self.kind == "web":
            if not self.url_template:
                raise ValueError("web backend needs url_template")
            if self.url_template.count("{query}") != 1:
                raise ValueError("url_template must contain exactly one {query}")
            if not self.count_path:
                raise ValueError("web backend needs count_path")
            if self.qps_limit <= 0:
                raise ValueError("qps_limit must be positive")
        elif self.kind == "corpus":
            if not self.corpus_path:
                raise ValueError("corpus backend needs corpus_path")
        else:
            raise ValueError(f"unknown backend kind {self.kind!r}")

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "BackendConfig":
        """Load a JSON config file holding the fields above."""
        with open(path, encoding="utf-8") as fp:
            raw = json.load(fp)
        known = {
            "kind", "url_template", "count_path", "api_key_env",
            "qps_limit", "exact_phrase", "corpus_path",
        }
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)

    def backend_id(self) -> str:
        """Stable identifier used as the cache namespace."""
        if self.kind == "corpus":
            return f"corpus:{self.corpus_path}"
        return f"web:{self.url_template}"


@dataclass(frozen=True)
class QueryResult:
    query: str
    result_set_size: int
    backend: str
    timestamp: str
    from_cache: bool = False


class CorpusBackend:
    """Counts documents in a local corpus containing the query."""

    def __init__(self, config: BackendConfig):
        self.id = config.backend_id()
        try:
            loaded = corpus_mod.load_corpus(config.corpus_path)
        except OSError as exc:
            raise BackendUnavailable(f"cannot load corpus: {exc}") from exc
        self._index = corpus_mod.build(loaded)

    def result_count(self, query: str) -> int:
        return self._index.count(query)

    def matching_documents(self, query: str) -> list[str]:
        return self._index.documents(query)


class WebBackend:
    """HTTP search API client with rate limiting and bounded retries.

    ``session``, ``sleep`` and ``monotonic`` are injectable for tests; the
    defaults talk to the real world.  The API key is read from the
    environment on demand and never stored or logged.
    """

    def __init__(self, config: BackendConfig, session=None,
                 sleep=time.sleep, monotonic=time.monotonic):
        self._config = config
        self.id = config.backend_id()
        self._session = session if session is not None else requests.Session()
        self._sleep = sleep
        self._monotonic = monotonic
        self._lock = threading.Lock()
        self._next_allowed = 0.0

    def _build_url(self, query: str) -> str:
        config = self._config
        text = f'"{query}"' if config.exact_phrase else query
        url = config.url_template.replace(
            "{query}", urllib.parse.quote(text, safe="")
        )
        if "{api_key}" in url:
            if not config.api_key_env:
                raise BackendUnavailable(
                    "url_template references {api_key} but api_key_env is unset"
                )
            key = os.environ.get(config.api_key_env)
            if not key:
                raise BackendUnavailable(
                    f"environment variable {config.api_key_env} is not set"
                )
            url = url.replace("{api_key}", urllib.parse.quote(key, safe=""))
        return url

    def _throttle(self) -> None:
        with self._lock:
            now = self._monotonic()
            wait = self._next_allowed - now
            if wait > 0:
                self._sleep(wait)
                now = self._next_allowed
            self._next_allowed = now + 1.0 / self._config.qps_limit

    def result_count(self, query: str) -> int:
        url = self._build_url(query)
        last_error: SearchError | None = None
        for attempt in range(_RETRY_ATTEMPTS):
            if attempt:
                self._sleep(_BACKOFF_BASE_SECONDS * 2 ** (attempt - 1))
            self._throttle()
            try:
                response = self._session.get(url, timeout=30)
            except requests.RequestException as exc:
                last_error = NetworkError(f"transport failure: {exc}")
                continue
            if response.status_code == 429:
                last_error = RateLimited(
                    f"remote returned 429 ({_RETRY_ATTEMPTS} attempts)"
                )
                continue
            if response.status_code != 200:
                raise BackendUnavailable(
                    f"remote returned HTTP {response.status_code}"
                )
            try:
                body = response.json()
            except ValueError as exc:
                raise BackendUnavailable("response body is not JSON") from exc
            return self._extract_count(body)
        raise last_error  # type: ignore[misc]

    def _extract_count(self, body) -> int:
        node = body
        path = self._config.count_path
        for segment in path.split("."):
            if isinstance(node, dict) and segment in node:
                node = node[segment]
            elif isinstance(node, list) and segment.isdigit() and int(segment) < len(node):
                node = node[int(segment)]
            else:
                raise CountFieldMissing(
                    f"count_path {path!r} missing at segment {segment!r}"
                )
        try:
            count = int(node)
        except (TypeError, ValueError) as exc:
            raise CountFieldMissing(
                f"count_path {path!r} points at non-numeric value {node!r}"
            ) from exc
        if count < 0:
            raise CountFieldMissing(f"negative hit count {count}")
        return count


def open_backend(config: BackendConfig, **kwargs):
    """Instantiate the backend described by a config.

    Keyword arguments (session, sleep, monotonic) are forwarded to
    :class:`WebBackend` for testing.
    """
    if config.kind == "corpus":
        return CorpusBackend(config)
    return WebBackend(config, **kwargs)


def _as_backend(backend_or_config):
    if isinstance(backend_or_config, BackendConfig):
        return open_backend(backend_or_config)
    return backend_or_config


class QueryCache:
    """Disk-backed map (backend id, query) -> QueryResult.

    The file is JSON with a ``format_version`` field, written atomically
    on every store so it survives process restarts.  Reads of a corrupt
    or incompatible file raise :class:`~fraglead.errors.CacheIo`.
    """

    def __init__(self, path: str | os.PathLike):
        self._path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, dict[str, dict]] | None = None

    def _load(self) -> dict[str, dict[str, dict]]:
        if self._entries is not None:
            return self._entries
        if not self._path.exists():
            self._entries = {}
            return self._entries
        try:
            raw = json.loads(self._path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise CacheIo(f"cannot read cache {self._path}: {exc}") from exc
        if not isinstance(raw, dict) or raw.get("format_version") != _CACHE_FORMAT_VERSION:
            raise CacheIo(
                f"cache {self._path} has unsupported format "
                f"{raw.get('format_version') if isinstance(raw, dict) else raw!r}"
            )
        entries = raw.get("entries", {})
        if not isinstance(entries, dict):
            raise CacheIo(f"cache {self._path} entries are not a map")
        self._entries = entries
        return entries

    def _save(self) -> None:
        payload = {
            "format_version": _CACHE_FORMAT_VERSION,
            "entries": self._entries or {},
        }
        try:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            fd, temp_name = tempfile.mkstemp(
                dir=self._path.parent, prefix=self._path.name, suffix=".tmp"
            )
            with os.fdopen(fd, "w", encoding="utf-8") as fp:
                json.dump(payload, fp, indent=2, sort_keys=True)
                fp.write("\n")
            os.replace(temp_name, self._path)
        except OSError as exc:
            raise CacheIo(f"cannot write cache {self._path}: {exc}") from exc

    def get(self, backend_id: str, query: str) -> QueryResult | None:
        with self._lock:
            stored = self._load().get(backend_id, {}).get(query)
        if stored is None:
            return None
        return QueryResult(**stored)

    def put(self, backend_id: str, query: str, result: QueryResult) -> None:
        record = {
            "query": result.query,
            "result_set_size": result.result_set_size,
            "backend": result.backend,
            "timestamp": result.timestamp,
            "from_cache": False,
        }
        with self._lock:
            self._load().setdefault(backend_id, {})[query] = record
            self._save()


def execute(backend, query: str) -> QueryResult:
    """Run one query against a backend (or a config describing one)."""
    if not query:
        raise ValueError("query must be non-empty")
    backend = _as_backend(backend)
    count = backend.result_count(query)
    return QueryResult(
        query=query,
        result_set_size=count,
        backend=backend.id,
        timestamp=datetime.now(timezone.utc).isoformat(),
        from_cache=False,
    )


def cached_execute(cache: QueryCache, backend, query: str,
                   refresh: bool = False) -> QueryResult:
    """Like :func:`execute` but consulting the cache first.

    A hit returns the stored result marked ``from_cache`` without touching
    the backend; a miss (or ``refresh``) queries and stores.
    """
    backend = _as_backend(backend)
    if not refresh:
        hit = cache.get(backend.id, query)
        if hit is not None:
            return replace(hit, from_cache=True)
    result = execute(backend, query)
    cache.put(backend.id, query, result)
    return result


def sweep(smiles: str, schedule: SizeSchedule, seed: int, backend,
          cache: QueryCache | None = None, refresh: bool = False) -> ResultTable:
    """Query one sampled fragment per schedule size and tabulate the sizes.

    Per-query backend failures do not abort the sweep; the affected row
    keeps the fragment but records the error instead of a count.
    """
    tokens = tokenize(smiles)
    backend = _as_backend(backend)
    rows: list[ResultRow] = []
    for fragment in sample(tokens, schedule, seed):
        query = fragment.text
        try:
            if cache is not None:
                result = cached_execute(cache, backend, query, refresh=refresh)
            else:
                result = execute(backend, query)
        except SearchError as exc:
            rows.append(make_row(query, fragment.length, None, error=f"{exc.code}: {exc}"))
            continue
        rows.append(make_row(query, fragment.length, result.result_set_size))
    return ResultTable(tuple(rows))
