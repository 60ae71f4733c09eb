#!/usr/bin/env python3
"""Runs `opquot verify` on fixture and generated instances and validates every
report against the shipped JSON schema plus its semantic invariants."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def run_verify(binary, a, b, mode, seed=None):
    args = [binary, "verify", str(a), str(b), "--mode", mode]
    if seed is not None:
        args += ["--seed", str(seed)]
    proc = subprocess.run(args, capture_output=True, text=True)
    return proc.returncode, json.loads(proc.stdout)


def semantic_errors(report):
    errors = []
    for check in report["checks"]:
        residual = check["residual"]
        within = residual is not None and residual <= check["tolerance"]
        if within != check["pass"]:
            errors.append(f"check {check['name']}: pass={check['pass']} but residual {residual} vs {check['tolerance']}")
    passed = sum(1 for c in report["checks"] if c["pass"])
    if report["summary"] != {"passed": passed, "failed": len(report["checks"]) - passed}:
        errors.append(f"summary {report['summary']} disagrees with {passed}/{len(report['checks'])}")
    return errors


def main():
    binary, schema_path, data = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    validator = jsonschema.Draft202012Validator(json.loads(schema_path.read_text()))

    cases = [
        (data / "e1_A.mm", data / "e1_B.mm", "left", 0),
        (data / "e2_A.mm", data / "e2_B.mm", "left", 0),
        (data / "col_e2.mm", data / "col_e1.mm", "left", 1),
        (data / "diag10.csv", data / "I2.mm", "right", 0),
        (data / "I2.mm", data / "diag10.csv", "right", 1),
    ]
    with tempfile.TemporaryDirectory() as tmp:
        for mode, gen_mode in (("left", "range_included"), ("right", "kernel_included")):
            for seed in range(3):
                prefix = Path(tmp) / f"{gen_mode}_{seed}"
                subprocess.run([binary, "gen", "--mode", gen_mode, "--m", "4", "--n", "3", "--p", "5",
                                "--rank", str(seed + 1), "--seed", str(seed), "--out-prefix", str(prefix)],
                               check=True, capture_output=True)
                cases.append((f"{prefix}_A.mm", f"{prefix}_B.mm", mode, 0))

        failures = 0
        for a, b, mode, expected_code in cases:
            code, report = run_verify(binary, a, b, mode, seed=7)
            problems = [e.message for e in validator.iter_errors(report)] + semantic_errors(report)
            if code != expected_code:
                problems.append(f"exit code {code}, expected {expected_code}")
            if (code == 0) != (report["summary"]["failed"] == 0):
                problems.append("exit code disagrees with summary")
            status = "ok  " if not problems else "FAIL"
            print(f"{status} {mode:5} {Path(a).name} {Path(b).name}: "
                  f"{report['summary']['passed']} passed, {report['summary']['failed']} failed")
            for p in problems:
                print(f"     {p}")
            failures += bool(problems)

    # Determinism: identical inputs and seed give identical reports.
    first = run_verify(binary, data / "e1_A.mm", data / "e1_B.mm", "left", seed=3)
    second = run_verify(binary, data / "e1_A.mm", data / "e1_B.mm", "left", seed=3)
    if first != second:
        print("FAIL verify output is not deterministic")
        failures += 1

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
