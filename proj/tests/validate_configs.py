"""Validate every shipped config against the JSON schema."""

import json
import pathlib
import sys

import jsonschema


def main():
    schema = json.loads(pathlib.Path(sys.argv[1]).read_text())
    jsonschema.Draft7Validator.check_schema(schema)
    validator = jsonschema.Draft7Validator(schema)
    bad = 0
    files = sorted(pathlib.Path(sys.argv[2]).glob("*.json"))
    for path in files:
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        for e in errors:
            print(f"{path.name}: /{'/'.join(map(str, e.absolute_path))}: {e.message}")
        bad += bool(errors)
    print(f"{len(files) - bad}/{len(files)} configs valid")
    return 1 if bad or not files else 0


if __name__ == "__main__":
    sys.exit(main())
