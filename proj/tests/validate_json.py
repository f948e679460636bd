"""Runs the CLI with --format json and validates every output against docs/result.schema.json."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

MATRIX = "matrix n=3\na(1,1) = e2\na(1,2) = -1*e3\na(2,2) = e1\na(2,3) = e3\na(3,3) = e2\n"
REP = "rep n=3\ne1 = [[0,1,0,0],[0,0,1,0],[0,0,0,1],[0,0,0,0]]\ne2 = [[0,1,0,0],[0,0,1,0],[0,0,0,1],[0,0,0,0]]\n"


def main():
    schema_path, binary = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    with tempfile.TemporaryDirectory() as tmp:
        matrix, rep = Path(tmp, "a.txt"), Path(tmp, "r.txt")
        matrix.write_text(MATRIX)
        rep.write_text(REP)
        runs = [
            ["eval", "e2; e1; e2"],
            ["eval", "e2; e1; e1; e1", "--algebra", "L1"],
            ["eval", "e1; e2; e2; e1", "--cutoff", "8"],
            ["eval", "e2; e1; e2; e1", "--cutoff", "10"],
            ["classify", "e1; e2+1*e1; e1; e1"],
            ["classify", "e2; e1; e2"],
            ["betti", "--algebra", "L1", "--cutoff", "8"],
            ["check", "goncharova", "--cutoff", "8"],
            ["check", "identities", "--cutoff", "8", "--count", "20"],
            ["verify", str(matrix)],
            ["rep", str(rep), "--cutoff", "6"],
        ]
        failures = 0
        for args in runs:
            proc = subprocess.run([binary, *args, "--format", "json"], capture_output=True, text=True)
            if proc.returncode != 0:
                print(f"FAIL {' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
                failures += 1
                continue
            errors = list(validator.iter_errors(json.loads(proc.stdout)))
            status = "ok" if not errors else "FAIL"
            print(f"{status} {' '.join(args)}")
            for e in errors:
                print("   ", e.message[:300])
            failures += bool(errors)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
