#!/usr/bin/env python3
"""Validate run configs against schema/run_config.schema.json."""
import argparse
import json
import pathlib
import sys

import jsonschema


def main() -> int:
    root = pathlib.Path(__file__).resolve().parent.parent
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("configs", nargs="*", type=pathlib.Path)
    args = parser.parse_args()

    schema = json.loads((root / "schema" / "run_config.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    paths = args.configs or sorted((root / "configs").rglob("*.json"))
    failed = 0
    for path in paths:
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        for e in errors:
            print(f"{path}: /{'/'.join(str(p) for p in e.absolute_path)}: {e.message}")
        failed += bool(errors)
    print(f"{len(paths) - failed}/{len(paths)} configs valid")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
