#!/usr/bin/env python3
"""End-to-end exercise of the command-line interface contract."""

import json
import os
import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET

SCV = sys.argv[1] if len(sys.argv) > 1 else "build/tools/scv"
failures = []


def run(args, expect_exit=0):
    proc = subprocess.run([SCV] + args, capture_output=True, text=True)
    if proc.returncode != expect_exit:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}, expected {expect_exit}\n"
                        f"{proc.stdout}{proc.stderr}")
    return proc


with tempfile.TemporaryDirectory() as tmp:
    # verification: pass, reports byte-identical for a fixed seed
    r1 = os.path.join(tmp, "r1.json")
    r2 = os.path.join(tmp, "r2.json")
    run(["verify", "--dim", "2", "--seed", "7", "--report", r1])
    run(["verify", "--dim", "2", "--seed", "7", "--report", r2])
    if open(r1, "rb").read() != open(r2, "rb").read():
        failures.append("reports differ between identical runs")
    report = json.load(open(r1))
    if not report["pass"]:
        failures.append("dimension-2 report does not pass")
    names = {c["name"] for c in report["checks"]}
    if "eta-closed" not in names or "gamma-separation" not in names:
        failures.append("registry entries missing from the report")
    for check in report["checks"]:
        if "ms" in check:
            failures.append("timings leaked into a default report")

    # a single check by name; unknown names are usage errors
    run(["verify", "--dim", "2", "--checks", "eta-closed"])
    run(["verify", "--dim", "1", "--checks", "nosuch"], expect_exit=2)
    run(["verify", "--dim", "0"], expect_exit=2)

    # evaluation
    ev = run(["eval", "--chain", "ell_plus:n=1", "--t", "0"])
    if "[1/4,3/4]x[-1/4,1/4]" not in ev.stdout:
        failures.append(f"loop midpoint evaluation wrong: {ev.stdout}")
    ev = run(["eval", "--chain", "beta:n=1:star=+", "--t", "-1", "--format", "json"])
    parsed = json.loads(ev.stdout)
    if parsed[0]["configuration"]["boxes"][0]["intervals"][0] != ["0", "1/2"]:
        failures.append("json evaluation schema mismatch")
    run(["eval", "--chain", "mu:n=2", "--t", ""])
    run(["eval", "--chain", "mu:n=2", "--t", "0"], expect_exit=1)  # arity mismatch
    run(["eval", "--chain", "nosuch:n=1", "--t", "0"], expect_exit=1)

    # export: schema and expected sizes
    out = os.path.join(tmp, "eta.json")
    run(["export", "--chain", "eta_plus:n=1", "--out", out])
    eta = json.load(open(out))
    if eta["arity"] != 1 or len(eta["terms"]) != 6:
        failures.append("exported chain has the wrong shape")
    ops = json.dumps(eta)
    if '"op": "max"' not in ops:
        failures.append("expression trees missing from the export")
    run(["export", "--chain", "nosuch"], expect_exit=1)

    # render: frame counts, valid XML, hatched open inputs
    frames = os.path.join(tmp, "frames")
    run(["render", "--chain", "eta_glued:n=1", "--frames", "8", "--out", frames])
    files = sorted(os.listdir(frames))
    if len(files) != 8:
        failures.append(f"expected 8 frames, found {len(files)}")
    for name in files:
        tree = ET.parse(os.path.join(frames, name))
        if not tree.getroot().tag.endswith("svg"):
            failures.append(f"{name} is not an svg document")
    body = open(os.path.join(frames, files[0])).read()
    if "hatch" not in body:
        failures.append("open inputs are not hatched")
    lattice = os.path.join(tmp, "lattice")
    run(["render", "--chain", "beta:n=2:star=++", "--frames", "9", "--project", "1,2",
         "--out", lattice])
    if len(os.listdir(lattice)) != 9:
        failures.append("expected a 3x3 frame lattice")
    run(["render", "--chain", "gamma:n=3", "--frames", "4", "--out", tmp], expect_exit=1)

if failures:
    print("FAIL")
    for f in failures:
        print(" -", f)
    sys.exit(1)
print("cli end-to-end: all interactions behave as documented")
