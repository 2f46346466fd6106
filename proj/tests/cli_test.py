#!/usr/bin/env python3
"""End-to-end checks of the prolong command line on the corpus."""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

CLI, CORPUS, SCHEMA = sys.argv[1:4]
EXPECTED = {
    "hrushovski.dsys": 1,
    "periodic_shifted.dsys": 1,
    "periodic.dsys": 0,
    "fgh.dsys": 0,
    "single_leader.dsys": 0,
    "charp2.dsys": 0,
    "charp3.dsys": 0,
    "charp5.dsys": 0,
}

with open(SCHEMA) as f:
    validator = jsonschema.Draft202012Validator(json.load(f))
failures = []


def run(*args):
    p = subprocess.run([CLI, *args], capture_output=True, text=True, timeout=300)
    return p.returncode, p.stdout, p.stderr


def expect(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL", what)


def valid(doc, what):
    errors = sorted(validator.iter_errors(doc), key=str)
    expect(not errors, f"{what}: schema: {errors[0].message if errors else ''}")


def corpus(name):
    return os.path.join(CORPUS, name)


with tempfile.TemporaryDirectory() as tmp:
    for name, code in sorted(EXPECTED.items()):
        for variant in ("thm1", "thm2", "thm3"):
            rc, out, _ = run("check", corpus(name), "--variant", variant, "--format", "json")
            expect(rc == code, f"check {name} {variant}: exit {rc}, want {code}")
            rep = json.loads(out)
            valid(rep, f"check {name} {variant}")
            path = os.path.join(tmp, f"{name}.{variant}.json")
            with open(path, "w") as f:
                f.write(out)
            rc, out, _ = run("replay", path)
            expect(rc == 0 and json.loads(out)["ok"], f"replay {name} {variant}")
            cert = rep["certificate"]
            cert["bindings"].append(cert["bindings"][0] if cert["bindings"] else {"relation": [], "round": 0, "layer": 0})
            with open(path, "w") as f:
                json.dump(cert, f)
            rc, out, _ = run("replay", path)
            expect(rc == 1 and not json.loads(out)["ok"], f"tampered replay {name} {variant}")
        rc, out, _ = run("leaders", corpus(name))
        valid(json.loads(out), f"leaders {name}")
        rc, out, _ = run("saturate", corpus(name), "--height", "4")
        valid(json.loads(out), f"saturate {name}")

    rc, out, _ = run("check", corpus("hrushovski.dsys"), "--format", "text")
    expect(out.strip().splitlines()[-1] == "so ∂1∂0c = 2 but ∂0∂1c = 0", "hrushovski narrative")
    expect("value: ∂0c = 2*c" in out and "value: ∂1c = 1" in out, "hrushovski values")

    rc, out, _ = run("saturate", corpus("periodic.dsys"), "--height", "5", "--format", "text")
    expect(rc == 0 and "a b c a b c\nd e f d e\nb c a b\ne f d\nc a\nf\n" in out, "periodic triangle")
    rc, out, _ = run("saturate", corpus("periodic_shifted.dsys"), "--height", "6")
    expect(rc == 1 and not json.loads(out)["ok"], "periodic_shifted saturation fails")

    rc, out, _ = run("leaders", corpus("fgh.dsys"))
    minimal = [(m["index"], m["unknown"]) for m in json.loads(out)["leaders"]["minimal"]]
    expect(minimal == [([1, 1], "x"), ([0, 3], "x"), ([3, 0], "x")], "fgh leaders")

    rc, out, _ = run("bound", "--m", "2", "--n", "1", "--r", "1")
    rep = json.loads(out)
    valid(rep, "bound")
    expect(rc == 0 and rep["t"] == "6" and rep["s"] == "64", "bound values")
    rc, _, err = run("bound", "--m", "3", "--n", "1", "--r", "1")
    expect(rc == 70 and err, "bound overflow exit code")

    rc, out, _ = run("forms", "commutation", corpus("hrushovski.dsys"))
    rep = json.loads(out)
    valid(rep, "forms commutation")
    expect(rc == 0 and rep["consistent"] and rep["rows"] == ["∂0(c) + (-2*c)*∂1(c) = 0", "∂0(c) = 2*c"], "hrushovski commutation")
    rc, _, _ = run("forms", "commutation", corpus("charp3.dsys"))
    expect(rc == 2, "commutation on a nonlinear leader is unsupported")

    bad = os.path.join(tmp, "bad.dsys")
    with open(bad, "w") as f:
        f.write("char: 0\nderivations: 2\nunknowns: x\nD0 x = x +* x\n")
    rc, _, err = run("check", bad)
    expect(rc == 65 and "4:" in err, f"parse error exit {rc}")
    rc, _, _ = run("check", os.path.join(tmp, "missing.dsys"))
    expect(rc == 66, f"missing file exit {rc}")
    rc, _, _ = run()
    expect(rc == 64, f"usage exit {rc}")
    rc, _, _ = run("check", corpus("fgh.dsys"), "--max-height", "3")
    expect(rc == 2, f"undecided exit {rc}")

    a = run("check", corpus("fgh.dsys"))
    b = run("check", corpus("fgh.dsys"))
    expect(a == b, "check output is deterministic")

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
