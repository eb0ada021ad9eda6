"""Validates verify reports against the published JSON schema."""
import json
import os
import subprocess
import sys

import jsonschema


def main() -> int:
    verify, schema_path, work = sys.argv[1:4]
    os.makedirs(work, exist_ok=True)
    with open(schema_path) as f:
        schema = json.load(f)
    runs = [
        (["all", "--timing"], 0),
        (["reproducing-kernel", "--modes", "3", "--cases", "2"], 1),
        (["husimi", "--cases", "2", "--tol", "0"], 1),
    ]
    for i, (args, want) in enumerate(runs):
        out = os.path.join(work, f"schema_{i}.json")
        code = subprocess.run([verify, *args, "--report", out], stderr=subprocess.DEVNULL).returncode
        if code != want:
            print(f"{args}: exit {code}, expected {want}")
            return 1
        with open(out) as f:
            report = json.load(f)
        jsonschema.validate(report, schema)
        if report["pass"] != (want == 0):
            print(f"{args}: pass flag disagrees with exit code")
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
