#
# This script validates the integrity of the qmi repository.
# It checks that the configuration and schema files are present and are
# valid JSON, that the schemas are themselves valid JSON Schema documents,
# and that every bundled scenario passes schema validation and resolves
# into valid effects, observables and instruments.
# This is the first step in the CI/CD pipeline.
#
import json
import sys
from pathlib import Path

import jsonschema

ROOT = Path(__file__).resolve().parent

REQUIRED_FILES = [
    'config/defaults.json',
    'schemas/report.schema.json',
    'schemas/scenario.schema.json',
]
SCENARIO_DIR = 'scenarios'


def load_json(path: Path):
    """Safely loads a JSON file."""
    with path.open(encoding='utf-8') as f:
        return json.load(f)


def validate_json(path: Path) -> bool:
    """Validates that a file is well-formed JSON."""
    try:
        load_json(path)
        return True
    except json.JSONDecodeError as e:
        print(f"[FAIL] JSON decode error in {path}: {e}")
        return False


def validate_schema_document(path: Path) -> bool:
    """Validates that a schema file is a well-formed draft-07 schema."""
    try:
        jsonschema.Draft7Validator.check_schema(load_json(path))
        return True
    except jsonschema.SchemaError as e:
        print(f"[FAIL] Invalid schema {path.name}: {e.message}")
        return False


def validate_defaults(path: Path) -> bool:
    """Checks the sections and positive tolerances of config/defaults.json."""
    data = load_json(path)
    ok = True
    for section in ('run', 'numerics', 'suites', 'outcomes'):
        if section not in data:
            print(f"[FAIL] Missing section '{section}' in {path.name}")
            ok = False
    for key in ('eps', 'commutation_tol', 'feasibility_tol'):
        value = data.get('numerics', {}).get(key)
        if not isinstance(value, (int, float)) or value <= 0:
            print(f"[FAIL] numerics.{key} must be a positive number, found {value!r}")
            ok = False
    return ok


def validate_scenario(path: Path) -> bool:
    """Parses, schema-checks and resolves one scenario file."""
    from src.errors import QMIError
    from src.scenario import load_scenario

    try:
        scenario = load_scenario(path)
    except QMIError as e:
        print(f"[FAIL] {path.name}: {e}")
        return False
    print(f"[OK] {path.name}: {len(scenario.observables)} observable(s), "
          f"{len(scenario.instruments)} instrument(s)")
    return True


def main(root: Path = ROOT) -> int:
    """Main validation function to run all checks."""
    print("--- Running Repository Validation ---")
    if str(root) not in sys.path:
        sys.path.insert(0, str(root))
    all_valid = True

    print("\nStep 1: Checking for file presence and JSON format...")
    for filename in REQUIRED_FILES:
        path = root / filename
        if not path.exists():
            print(f"[FAIL] Missing required file: {filename}")
            all_valid = False
            continue
        if not validate_json(path):
            all_valid = False

    print("\nStep 2: Checking schemas and defaults...")
    for filename in REQUIRED_FILES:
        path = root / filename
        if not path.exists():
            continue
        if filename.startswith('schemas/') and not validate_schema_document(path):
            all_valid = False
        if filename == 'config/defaults.json' and not validate_defaults(path):
            all_valid = False

    print("\nStep 3: Validating bundled scenarios...")
    scenarios = sorted((root / SCENARIO_DIR).glob('*.json'))
    if not scenarios:
        print(f"[WARN] No scenarios found in {SCENARIO_DIR}/")
    for path in scenarios:
        if not validate_scenario(path):
            all_valid = False

    print("\n--- Validation Complete ---")
    if all_valid:
        print("[OK] All repository configuration files are valid.")
        return 0
    print("\n[FAIL] Repository validation failed. Please fix the errors listed above.")
    return 1


if __name__ == '__main__':
    sys.exit(main())
