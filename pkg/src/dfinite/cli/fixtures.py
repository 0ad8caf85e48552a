"""Golden-file runner.

Each fixture is a JSON file ``{"name", "argv", "exit", "expected"}``; the command's
text report must equal ``expected`` exactly (or contain every line of
``"contains"`` when that key is used instead).
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURE_DIR = Path(__file__).with_name("fixtures")


def load_fixtures(directory=None) -> list[dict]:
    d = Path(directory) if directory else FIXTURE_DIR
    out = []
    for path in sorted(d.glob("*.json")):
        with open(path) as fh:
            fx = json.load(fh)
        fx.setdefault("name", path.stem)
        out.append(fx)
    return out


def check_fixture(fx: dict) -> dict:
    from .main import run_command

    code, text = run_command(list(fx["argv"]))
    ok = code == fx.get("exit", 0)
    if "expected" in fx:
        ok = ok and text == fx["expected"]
    for piece in fx.get("contains", []):
        ok = ok and piece in text
    return {"name": fx["name"], "ok": ok, "exit": code, "output": text}


def run_fixtures(directory=None, only=None) -> list[dict]:
    results = []
    for fx in load_fixtures(directory):
        if only and only not in fx["name"]:
            continue
        results.append(check_fixture(fx))
    return results
