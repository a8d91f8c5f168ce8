import json
import os
from pathlib import Path

import jsonschema
import pytest

import lethargy

ROOT = Path(__file__).resolve().parents[2]
CONFIG_DIR = Path(os.environ.get("LETHARGY_CONFIG_DIR", ROOT / "configs"))
SCHEMA = json.loads((ROOT / "docs" / "config.schema.json").read_text())


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.json")), ids=lambda p: p.name)
def test_shipped_configs_match_schema(path):
    jsonschema.validate(json.loads(path.read_text()), SCHEMA)


@pytest.mark.parametrize(
    "doc",
    [
        {"mode": "exact", "space": {"type": "lp", "p": 2, "q": 1}, "chain": {"type": "linear"},
         "sequence": {"type": "harmonic"}},
        {"mode": "exact", "space": {"type": "lp", "p": 2}, "chain": {"type": "linear"},
         "sequence": {"type": "geometric", "ratio": "one third"}},
        {"mode": "sandwich", "space": {"type": "lp", "p": 2}, "chain": {"type": "linear"},
         "sequence": {"type": "harmonic"}, "factor": 4},
    ],
)
def test_schema_and_parser_reject_the_same_documents(doc):
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, SCHEMA)
    with pytest.raises(lethargy.ConfigError):
        lethargy.run_config(json.dumps(doc))
