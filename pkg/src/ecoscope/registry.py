"""HTTP clients that turn registry metadata into PackageRecords.

Endpoints are configured per ecosystem, usually from a JSON file::

    {
      "npm":  {"base_url": "https://registry.npmjs.org",
               "counts_url": "https://api.npmjs.org/downloads/point/last-year/{name}",
               "counts_field": "downloads", "rate_limit": 5, "timeout": 10},
      "pypi": {"base_url": "https://pypi.org/pypi", "rate_limit": 2}
    }

``counts_url`` is a template with a ``{name}`` placeholder; ``counts_field`` is
a dotted path into the JSON it returns. No credentials are used.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import requests

from .errors import NotFoundError, RateLimitedError, TransportError
from .snapshot import Ecosystem, PackageRecord, Snapshot, requirement_name

log = logging.getLogger(__name__)

TRANSIENT_STATUS = {429, 500, 502, 503, 504}


@dataclass
class RegistryConfig:
    base_url: str
    counts_url: str | None = None
    counts_field: str = "downloads"
    rate_limit: float = 5.0
    timeout: float = 10.0
    max_retries: int = 5
    backoff_base: float = 0.5


DEFAULT_CONFIGS = {
    Ecosystem.NPM: RegistryConfig(
        base_url="https://registry.npmjs.org",
        counts_url="https://api.npmjs.org/downloads/point/last-year/{name}",
    ),
    Ecosystem.PYPI: RegistryConfig(base_url="https://pypi.org/pypi", rate_limit=2.0),
}


def load_registry_config(path) -> dict[Ecosystem, RegistryConfig]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    configs = dict(DEFAULT_CONFIGS)
    for key, values in raw.items():
        configs[Ecosystem.parse(key)] = RegistryConfig(**values)
    return configs


class RateLimiter:
    """Spaces calls at least ``1/rate`` seconds apart. Thread safe; share one per endpoint."""

    def __init__(self, rate, clock=time.monotonic, sleep=time.sleep):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.interval = 1.0 / rate
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next = 0.0

    def acquire(self):
        with self._lock:
            now = self._clock()
            wait = self._next - now
            self._next = max(now, self._next) + self.interval
        if wait > 0:
            self._sleep(wait)


_limiters: dict[str, RateLimiter] = {}
_limiters_lock = threading.Lock()


def shared_limiter(base_url, rate) -> RateLimiter:
    with _limiters_lock:
        limiter = _limiters.get(base_url)
        if limiter is None:
            limiter = _limiters[base_url] = RateLimiter(rate)
        return limiter


def _to_epoch(stamp):
    if stamp is None:
        return None
    return datetime.fromisoformat(stamp.replace("Z", "+00:00")).astimezone(timezone.utc).timestamp()


def _dig(obj, dotted):
    for part in dotted.split("."):
        obj = obj[part]
    return obj


@dataclass
class RegistryClient:
    """Base client: rate limiting, retries with exponential backoff, JSON fetch."""

    config: RegistryConfig
    session: requests.Session = field(default_factory=requests.Session)
    limiter: RateLimiter | None = None
    sleep: object = time.sleep

    ecosystem = None

    def __post_init__(self):
        if self.limiter is None:
            self.limiter = shared_limiter(self.config.base_url, self.config.rate_limit)

    def get_json(self, url, name):
        last = None
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                delay = self.config.backoff_base * 2 ** (attempt - 1)
                log.warning("retry %d/%d for %s after %s (sleeping %.2fs)",
                            attempt, self.config.max_retries, url, last, delay)
                self.sleep(delay)
            self.limiter.acquire()
            try:
                resp = self.session.get(url, timeout=self.config.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                last = exc
                continue
            except requests.RequestException as exc:
                raise TransportError(str(exc)) from exc
            if resp.status_code == 404:
                raise NotFoundError(name)
            if resp.status_code in TRANSIENT_STATUS:
                last = f"HTTP {resp.status_code}"
                continue
            if resp.status_code >= 400:
                raise TransportError(f"HTTP {resp.status_code} from {url}")
            try:
                return resp.json()
            except ValueError as exc:
                raise TransportError(f"invalid JSON from {url}") from exc
        if last == "HTTP 429":
            raise RateLimitedError(f"rate limited on {url} after {self.config.max_retries} retries")
        raise TransportError(f"{last} (after {self.config.max_retries} retries)")

    def fetch_downloads(self, name):
        if not self.config.counts_url:
            return 0
        data = self.get_json(self.config.counts_url.format(name=name), name)
        try:
            return int(_dig(data, self.config.counts_field) or 0)
        except (KeyError, TypeError, ValueError) as exc:
            raise TransportError(f"download count missing for {name!r}") from exc

    def fetch(self, name) -> PackageRecord:
        raise NotImplementedError


class NpmClient(RegistryClient):
    ecosystem = Ecosystem.NPM

    def fetch(self, name):
        doc = self.get_json(f"{self.config.base_url.rstrip('/')}/{name.replace('/', '%2F')}", name)
        latest = (doc.get("dist-tags") or {}).get("latest", "")
        meta = (doc.get("versions") or {}).get(latest, {})
        times = doc.get("time") or {}
        released = _to_epoch(times.get(latest) or times.get("modified")) or 0.0
        deps = [d for d in (meta.get("dependencies") or {}) if d != name]
        return PackageRecord(
            name=doc.get("name", name),
            ecosystem=Ecosystem.NPM,
            latest_version=latest,
            dependencies=tuple(dict.fromkeys(deps)),
            last_release=released,
            downloads=self.fetch_downloads(name),
        )


class PypiClient(RegistryClient):
    ecosystem = Ecosystem.PYPI

    def fetch(self, name):
        doc = self.get_json(f"{self.config.base_url.rstrip('/')}/{name}/json", name)
        info = doc.get("info") or {}
        version = info.get("version", "")
        deps = []
        for spec in info.get("requires_dist") or []:
            # optional extras are not install-time dependencies
            if ";" in spec and "extra" in spec.split(";", 1)[1]:
                continue
            dep = requirement_name(spec)
            if dep and dep != name and dep not in deps:
                deps.append(dep)
        files = doc.get("urls") or (doc.get("releases") or {}).get(version) or []
        stamps = [_to_epoch(f.get("upload_time_iso_8601") or f.get("upload_time")) for f in files]
        stamps = [s for s in stamps if s is not None]
        digests = [f["digests"]["sha256"] for f in files if (f.get("digests") or {}).get("sha256")]
        return PackageRecord(
            name=info.get("name", name),
            ecosystem=Ecosystem.PYPI,
            latest_version=version,
            dependencies=tuple(deps),
            last_release=max(stamps) if stamps else 0.0,
            downloads=self.fetch_downloads(name),
            file_hashes=frozenset(digests) or None,
        )


CLIENTS = {Ecosystem.NPM: NpmClient, Ecosystem.PYPI: PypiClient}


def make_client(ecosystem, config: RegistryConfig | None = None, **kwargs) -> RegistryClient:
    ecosystem = Ecosystem.parse(ecosystem)
    return CLIENTS[ecosystem](config or DEFAULT_CONFIGS[ecosystem], **kwargs)


def fetch_package_metadata(client: RegistryClient, name: str) -> PackageRecord:
    """Fetch one package. Raises NotFoundError, RateLimitedError or TransportError."""
    return client.fetch(name)


def build_snapshot(client: RegistryClient, names, captured_at=None, skip_missing=True) -> Snapshot:
    """Fetch every name sequentially and assemble a snapshot."""
    captured_at = time.time() if captured_at is None else captured_at
    records = []
    for name in names:
        try:
            rec = fetch_package_metadata(client, name)
        except NotFoundError:
            if not skip_missing:
                raise
            log.warning("skipping %s: not found", name)
            continue
        records.append(rec)
    return Snapshot.from_records(client.ecosystem, captured_at, records)
