"""Access to the bundled transcriptions of published reference values."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    return Path(str(resources.files("hypercluster") / "reference_data" / name))


def load_json(name: str) -> dict:
    with open(data_path(name), encoding="utf-8") as fh:
        return json.load(fh)
