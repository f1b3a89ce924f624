"""Normalized registry snapshot model and its line-delimited file format.

A snapshot file is UTF-8 JSON Lines. The first non-blank line is a header::

    {"ecosystem": "npm", "captured_at": 1544832000}

and every following line is one package record::

    {"name": "cross-env", "latest_version": "5.2.0", "dependencies": ["cross-spawn"],
     "last_release": 1530000000, "downloads": 10000000, "modules": [], "file_hashes": null}

Timestamps are UTC seconds. ``ecosystem`` may be repeated on a record but must
then match the header.
"""

from __future__ import annotations

import ast
import enum
import io
import json
import re
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Mapping

from .errors import DuplicateNameError, MalformedLineError, MissingHeaderError


class Ecosystem(str, enum.Enum):
    NPM = "npm"
    PYPI = "pypi"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown ecosystem {value!r}") from None


@dataclass(frozen=True)
class PackageRecord:
    """Metadata for the latest version of one package."""

    name: str
    ecosystem: Ecosystem
    latest_version: str = ""
    dependencies: tuple[str, ...] = ()
    last_release: float = 0.0
    downloads: int = 0
    modules: tuple[str, ...] = ()
    file_hashes: frozenset[str] | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ecosystem": self.ecosystem.value,
            "latest_version": self.latest_version,
            "dependencies": list(self.dependencies),
            "last_release": self.last_release,
            "downloads": self.downloads,
            "modules": list(self.modules),
            "file_hashes": None if self.file_hashes is None else sorted(self.file_hashes),
        }


@dataclass(frozen=True)
class Snapshot:
    ecosystem: Ecosystem
    captured_at: float
    records: Mapping[str, PackageRecord]
    # self-edges and duplicate dependencies dropped while ingesting
    warnings: int = field(default=0, compare=False)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records.values())

    def __contains__(self, name):
        return name in self.records

    def __getitem__(self, name) -> PackageRecord:
        return self.records[name]

    @classmethod
    def from_records(cls, ecosystem, captured_at, records: Iterable[PackageRecord]):
        """Build a snapshot in memory, applying the same ingest rules as the parser."""
        ecosystem = Ecosystem.parse(ecosystem)
        out = {}
        warnings = 0
        for i, rec in enumerate(records):
            if rec.name in out:
                raise DuplicateNameError(rec.name, i + 2)
            deps, dropped = _clean_dependencies(rec.name, rec.dependencies)
            warnings += dropped
            if rec.ecosystem != ecosystem:
                raise MalformedLineError(i + 2, f"record ecosystem {rec.ecosystem.value} != {ecosystem.value}")
            if dropped:
                rec = replace(rec, dependencies=deps)
            out[rec.name] = rec
        return cls(ecosystem, float(captured_at), out, warnings)


def _clean_dependencies(name, deps):
    seen = []
    dropped = 0
    for dep in deps:
        if dep == name or dep in seen:
            dropped += 1
            continue
        seen.append(dep)
    return tuple(seen), dropped


def _record_from_obj(obj, ecosystem, captured_at, lineno):
    if not isinstance(obj, dict):
        raise MalformedLineError(lineno, "record is not an object")
    name = obj.get("name")
    if not isinstance(name, str) or not name.strip():
        raise MalformedLineError(lineno, "missing or empty name")
    if "ecosystem" in obj and obj["ecosystem"] is not None:
        try:
            eco = Ecosystem.parse(obj["ecosystem"])
        except ValueError as exc:
            raise MalformedLineError(lineno, str(exc)) from None
        if eco != ecosystem:
            raise MalformedLineError(lineno, f"record ecosystem {eco.value} != header {ecosystem.value}")

    deps = obj.get("dependencies") or []
    modules = obj.get("modules") or []
    hashes = obj.get("file_hashes")
    if not isinstance(deps, list) or not all(isinstance(d, str) for d in deps):
        raise MalformedLineError(lineno, "dependencies must be a list of strings")
    if not isinstance(modules, list) or not all(isinstance(m, str) for m in modules):
        raise MalformedLineError(lineno, "modules must be a list of strings")
    if hashes is not None and (not isinstance(hashes, list) or not all(isinstance(h, str) for h in hashes)):
        raise MalformedLineError(lineno, "file_hashes must be null or a list of strings")

    downloads = obj.get("downloads", 0)
    if isinstance(downloads, bool) or not isinstance(downloads, int) or downloads < 0:
        raise MalformedLineError(lineno, "downloads must be a non-negative integer")
    last_release = obj.get("last_release")
    if isinstance(last_release, bool) or not isinstance(last_release, (int, float)):
        raise MalformedLineError(lineno, "last_release must be a number of UTC seconds")
    if last_release > captured_at:
        raise MalformedLineError(lineno, "last_release is after the snapshot's captured_at")
    version = obj.get("latest_version", "")
    if not isinstance(version, str):
        raise MalformedLineError(lineno, "latest_version must be a string")

    return PackageRecord(
        name=name,
        ecosystem=ecosystem,
        latest_version=version,
        dependencies=tuple(deps),
        last_release=last_release,
        downloads=downloads,
        modules=tuple(modules),
        file_hashes=None if hashes is None else frozenset(hashes),
    )


def parse_snapshot(stream: IO[bytes] | IO[str] | bytes | str) -> Snapshot:
    """Parse a line-delimited snapshot.

    Accepts a binary or text stream, or the raw bytes/str content. Raises
    MissingHeaderError, MalformedLineError or DuplicateNameError.
    """
    if isinstance(stream, (bytes, str)):
        stream = io.BytesIO(stream.encode("utf-8") if isinstance(stream, str) else stream)

    ecosystem = None
    captured_at = None
    records: dict[str, PackageRecord] = {}
    warnings = 0

    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError:
                raise MalformedLineError(lineno, "not valid UTF-8") from None
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedLineError(lineno, f"invalid JSON ({exc.msg})") from None

        if ecosystem is None:
            if not isinstance(obj, dict) or "name" in obj or "captured_at" not in obj or "ecosystem" not in obj:
                raise MissingHeaderError()
            try:
                ecosystem = Ecosystem.parse(obj["ecosystem"])
            except ValueError as exc:
                raise MalformedLineError(lineno, str(exc)) from None
            captured_at = obj["captured_at"]
            if isinstance(captured_at, bool) or not isinstance(captured_at, (int, float)):
                raise MalformedLineError(lineno, "captured_at must be a number of UTC seconds")
            continue

        rec = _record_from_obj(obj, ecosystem, captured_at, lineno)
        if rec.name in records:
            raise DuplicateNameError(rec.name, lineno)
        deps, dropped = _clean_dependencies(rec.name, rec.dependencies)
        if dropped:
            warnings += dropped
            rec = replace(rec, dependencies=deps)
        records[rec.name] = rec

    if ecosystem is None:
        raise MissingHeaderError()
    return Snapshot(ecosystem, captured_at, records, warnings)


def read_snapshot(path) -> Snapshot:
    with open(path, "rb") as fh:
        return parse_snapshot(fh)


def serialize_snapshot(snapshot: Snapshot) -> str:
    lines = [json.dumps({"ecosystem": snapshot.ecosystem.value, "captured_at": snapshot.captured_at})]
    for name in sorted(snapshot.records):
        lines.append(json.dumps(snapshot.records[name].to_dict(), sort_keys=True))
    return "\n".join(lines) + "\n"


def write_snapshot(snapshot: Snapshot, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_snapshot(snapshot))


# --- PyPI manifest extraction ------------------------------------------------


class ParseStatus(str, enum.Enum):
    COMPLETE = "complete"
    PARTIAL_DYNAMIC = "partial-dynamic"


@dataclass(frozen=True)
class DependencyExtraction:
    declared: tuple[str, ...]
    parse_status: ParseStatus


# a requirement's distribution name is everything before extras, markers,
# version specifiers or a direct URL
_REQ_NAME = re.compile(r"^\s*([A-Za-z0-9](?:[A-Za-z0-9._-]*[A-Za-z0-9])?)")


def requirement_name(spec: str) -> str | None:
    """Return the bare project name of a requirement string, e.g. ``"flask>=1.0"`` -> ``"flask"``."""
    spec = spec.split("#", 1)[0]
    m = _REQ_NAME.match(spec)
    return m.group(1) if m else None


def _is_setup_call(node):
    func = node.func
    if isinstance(func, ast.Name):
        return func.id == "setup"
    if isinstance(func, ast.Attribute):
        return func.attr == "setup"
    return False


def _literal_strings(node):
    """Return (strings, complete) for a list/tuple/set display."""
    found = []
    complete = True
    for elt in node.elts:
        if isinstance(elt, ast.Constant) and isinstance(elt.value, str):
            found.append(elt.value)
        else:
            complete = False
    return found, complete


def extract_pypi_dependencies(manifest_text: str) -> DependencyExtraction:
    """Statically read ``install_requires`` from a setup.py-style manifest.

    The manifest is never executed. Anything other than a literal sequence of
    string literals is reported as PARTIAL_DYNAMIC; names that can still be
    read statically (literal elements, or a module-level name bound once to a
    literal list) are returned.
    """
    try:
        tree = ast.parse(manifest_text)
    except (SyntaxError, ValueError):
        return DependencyExtraction((), ParseStatus.PARTIAL_DYNAMIC)

    # module-level NAME = [literal, ...] bindings; names bound twice are ambiguous
    bindings: dict[str, ast.AST | None] = {}
    for stmt in tree.body:
        if isinstance(stmt, ast.Assign):
            for target in stmt.targets:
                if isinstance(target, ast.Name):
                    bindings[target.id] = stmt.value if target.id not in bindings else None

    raw: list[str] = []
    status = ParseStatus.COMPLETE
    for node in ast.walk(tree):
        if not (isinstance(node, ast.Call) and _is_setup_call(node)):
            continue
        value = None
        for kw in node.keywords:
            if kw.arg == "install_requires":
                value = kw.value
            elif kw.arg is None:
                # setup(**kwargs) may smuggle in install_requires
                status = ParseStatus.PARTIAL_DYNAMIC
        if value is None:
            continue
        if isinstance(value, (ast.List, ast.Tuple, ast.Set)):
            found, complete = _literal_strings(value)
            raw.extend(found)
            if not complete:
                status = ParseStatus.PARTIAL_DYNAMIC
        elif isinstance(value, ast.Constant) and isinstance(value.value, str):
            raw.extend(value.value.splitlines())
        else:
            status = ParseStatus.PARTIAL_DYNAMIC
            bound = bindings.get(value.id) if isinstance(value, ast.Name) else None
            if isinstance(bound, (ast.List, ast.Tuple, ast.Set)):
                raw.extend(_literal_strings(bound)[0])

    declared = []
    for spec in raw:
        name = requirement_name(spec)
        if name and name not in declared:
            declared.append(name)
    return DependencyExtraction(tuple(declared), status)
