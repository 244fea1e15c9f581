"""Validates the shipped scenario configs against the JSON schema."""
import json
import pathlib
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])
schema = json.loads((root / "schema" / "scenario.schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

failures = 0
valid = sorted((root / "configs").glob("*.json"))
valid += [root / "tests/data/faults/invalid_parameters.json", root / "tests/data/faults/indefinite_law.json"]
for path in valid:
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    for e in errors:
        print(f"FAIL {path.name}: {e.message}")
    failures += bool(errors)
    if not errors:
        print(f"PASS {path.name}")

try:
    json.loads((root / "tests/data/faults/malformed.json").read_text())
    print("FAIL malformed.json parsed")
    failures += 1
except json.JSONDecodeError:
    print("PASS malformed.json rejected")

sys.exit(1 if failures else 0)
