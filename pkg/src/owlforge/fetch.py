"""Client for pulling ontologies from a REST repository.

The endpoint must serve ``GET {base}/ontologies`` returning a JSON list of
``{"id": ..., "url": ...}`` entries (urls may be relative) and the listed
urls must return the ontology documents. Downloads are checksummed into a
manifest; re-running skips files whose checksum already matches, so an
interrupted fetch resumes where it stopped. Requests are rate limited and
retried with exponential backoff.

The API key is read from the OWLFORGE_API_KEY environment variable unless
passed explicitly; acceptance tests run against a local stub server only.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path

API_KEY_ENV = "OWLFORGE_API_KEY"


class AuthError(RuntimeError):
    """No API key available; nothing was fetched."""


@dataclass(frozen=True)
class HttpError(RuntimeError):
    url: str
    attempts: int
    last_error: str

    def __str__(self) -> str:
        return f"{self.url} failed after {self.attempts} attempts: {self.last_error}"


def _get(url: str, api_key: str, retries: int, backoff_s: float) -> bytes:
    last = ""
    for attempt in range(retries):
        try:
            request = urllib.request.Request(url, headers={"Authorization": f"apikey {api_key}"})
            with urllib.request.urlopen(request, timeout=30) as response:
                return response.read()
        except (urllib.error.URLError, OSError) as exc:
            last = str(exc)
            if attempt + 1 < retries:
                time.sleep(backoff_s * (2**attempt))
    raise HttpError(url=url, attempts=retries, last_error=last)


def fetch(
    endpoint: str,
    out_dir: str | Path,
    api_key: str | None = None,
    rate_limit_s: float = 0.05,
    retries: int = 3,
    backoff_s: float = 0.2,
) -> dict:
    """Download every listed ontology; returns the manifest dict."""
    api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
    if not api_key:
        raise AuthError(f"no API key: set {API_KEY_ENV} or pass one explicitly")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest_path = out / "manifest.json"
    previous: dict[str, dict] = {}
    if manifest_path.exists():
        for entry in json.loads(manifest_path.read_text())["fetched"]:
            previous[entry["id"]] = entry

    listing = json.loads(_get(endpoint.rstrip("/") + "/ontologies", api_key, retries, backoff_s))
    fetched: list[dict] = []
    for item in listing:
        ontology_id = str(item["id"])
        url = str(item["url"])
        if url.startswith("/"):
            base = endpoint.split("/", 3)
            url = f"{base[0]}//{base[2]}{url}"
        file_path = out / f"{ontology_id}.omn"
        prior = previous.get(ontology_id)
        if prior is not None and file_path.exists():
            digest = hashlib.sha256(file_path.read_bytes()).hexdigest()
            if digest == prior["sha256"]:
                fetched.append(prior | {"skipped": True})
                continue
        time.sleep(rate_limit_s)
        payload = _get(url, api_key, retries, backoff_s)
        file_path.write_bytes(payload)
        fetched.append(
            {
                "id": ontology_id,
                "file": file_path.name,
                "bytes": len(payload),
                "sha256": hashlib.sha256(payload).hexdigest(),
            }
        )
    manifest = {"schema": "owlforge/fetch-manifest/v1", "endpoint": endpoint, "fetched": fetched}
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest
