#!/usr/bin/env python3
"""End-to-end checks of the cylhypo CLI: report schemas, determinism, exit codes."""
import argparse
import filecmp
import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

# (command, config) pairs covering every report shape
RUNS = [
    ("classify", "tube_sign_change"),
    ("classify", "tube_gh"),
    ("classify", "family_c05"),
    ("classify", "split_growth"),
    ("classify", "first_order_vanishing"),
    ("zeros", "family_c1"),
    ("zeros", "first_order_vanishing"),
    ("solve", "tube_gh"),
    ("solve", "first_order_gh"),
    ("solve", "first_order_vanishing"),
    ("spectrum", "poisson_spectrum"),
    ("fit-decay", "poisson_spectrum"),
    ("counterexample", "tube_sign_change"),
    ("counterexample", "first_order_vanishing"),
    ("counterexample", "tube_zero"),
    ("reduce", "tube_real"),
    ("verify-lemmas", None),
]

failures = []


def fail(msg):
    failures.append(msg)
    print("FAIL", msg)


def run(tool, cmd, cfg, root, out, extra=(), text=None):
    args = [str(tool), cmd, "--out", str(out), *extra]
    if text is not None:
        path = out.parent / (out.name + ".yaml")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        args += ["--config", str(path)]
    elif cfg:
        args += ["--config", str(root / "configs" / (cfg + ".yaml"))]
    p = subprocess.run(args, capture_output=True, text=True, timeout=600)
    return p.returncode, p.stdout, p.stderr


def load_schema(root, name):
    return json.loads((root / "schemas" / (name + ".schema.json")).read_text())


def mode_schemas(tool, root, work):
    meta = load_schema(root, "meta")
    err = load_schema(root, "error")
    for cmd, cfg in RUNS:
        out = work / f"{cmd}_{cfg}"
        code, stdout, stderr = run(tool, cmd, cfg, root, out)
        tag = f"{cmd} {cfg}"
        try:
            body = json.loads(stdout)
        except json.JSONDecodeError as e:
            fail(f"{tag}: stdout is not JSON ({e}); stderr: {stderr.strip()}")
            continue
        if "error" in body:
            schema = err
            written = out / f"{cmd}.error.json"
        else:
            schema = load_schema(root, cmd)
            written = out / f"{cmd}.json"
        try:
            jsonschema.validate(body, schema)
        except jsonschema.ValidationError as e:
            fail(f"{tag}: {e.message} at {list(e.absolute_path)}")
            continue
        if not written.exists() or written.read_text() != stdout:
            fail(f"{tag}: {written.name} missing or differs from stdout")
        if "error" not in body:
            if code != 0:
                fail(f"{tag}: exit {code}")
            sidecar = out / f"{cmd}.meta.json"
            try:
                m = json.loads(sidecar.read_text())
                jsonschema.validate(m, meta)
                for a in m["artifacts"]:
                    if not (out / a).exists():
                        fail(f"{tag}: artifact {a} listed but missing")
            except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as e:
                fail(f"{tag}: bad sidecar: {e}")
        print("ok  ", tag)
    # the schemas must reject damaged reports
    body = json.loads((work / "classify_tube_gh" / "classify.json").read_text())
    for damage in (lambda b: b.pop("verdict"), lambda b: b.update(verdict="maybe"), lambda b: b.update(extra=1)):
        broken = json.loads(json.dumps(body))
        damage(broken)
        try:
            jsonschema.validate(broken, load_schema(root, "classify"))
            fail("classify schema accepted a damaged report")
        except jsonschema.ValidationError:
            pass


def mode_determinism(tool, root, work):
    for cmd, cfg in RUNS:
        a, b = work / f"{cmd}_{cfg}_a", work / f"{cmd}_{cfg}_b"
        ca, sa, _ = run(tool, cmd, cfg, root, a)
        cb, sb, _ = run(tool, cmd, cfg, root, b)
        tag = f"{cmd} {cfg}"
        if ca != cb or sa != sb:
            fail(f"{tag}: stdout or exit code differs between runs")
            continue
        files = sorted(p.name for p in a.iterdir() if ".meta." not in p.name)
        other = sorted(p.name for p in b.iterdir() if ".meta." not in p.name)
        if files != other:
            fail(f"{tag}: artifact sets differ")
            continue
        _, mismatch, errors = filecmp.cmpfiles(a, b, files, shallow=False)
        if mismatch or errors:
            fail(f"{tag}: differing artifacts {mismatch + errors}")
            continue
        print("ok  ", tag, f"({len(files)} files identical)")


def mode_exit_codes(tool, root, work):
    def expect(tag, want, got, cond=True, why=""):
        if got != want or not cond:
            fail(f"{tag}: exit {got} (want {want}) {why}")
        else:
            print("ok  ", tag)

    code, out, _ = run(tool, "classify", "tube_sign_change", root, work / "c1")
    body = json.loads(out)
    expect("classify sign-changing tube", 0, code, body["verdict"] == "NotGH" and body["mu_validity"] == "(1,inf)",
           f"verdict {body.get('verdict')} {body.get('mu_validity')}")

    code, out, _ = run(tool, "solve", "first_order_vanishing", root, work / "c2")
    body = json.loads(out)
    e = body.get("error", {})
    expect("solve with vanishing symbol", 1, code,
           e.get("kind") == "refusal" and e.get("code") == "vanishing_symbol"
           and e["details"].get("k") == -1 and abs(e["details"].get("xi", 0) - 1) < 1e-9
           and (work / "c2" / "solve.error.json").exists(), json.dumps(e))

    code, out, _ = run(tool, "verify-lemmas", None, root, work / "c3")
    body = json.loads(out)
    expect("verify-lemmas", 0, code, body["summary"]["all_pass"], json.dumps(body.get("summary")))

    code, out, _ = run(tool, "classify", None, root, work / "c4",
                       text="operator: {kind: first_order_t, c1: [1, 0], c2: [1, 0], c3: [1, 0]}\nbudgets: {k_budget: 0}\n")
    e = json.loads(out).get("error", {})
    expect("k_budget = 0", 2, code, e.get("kind") == "usage" and any("k_budget" in p for p in e.get("problems", [])))

    code, out, err = run(tool, "classify", None, root, work / "c5", text="operator: {kind: heat}\n")
    e = json.loads(out).get("error", {})
    expect("unknown operator kind", 2, code,
           all(k in e.get("message", "") for k in ("const_split", "first_order_t", "tube")) and "heat" in err,
           e.get("message", ""))

    code, out, _ = run(tool, "classify", None, root, work / "c6",
                       text="grid: {M: 48, N: 100}\nbudgets: {k_budget: -1}\noperator: {kind: tube, b: 3}\n")
    e = json.loads(out).get("error", {})
    expect("aggregated problems", 2, code, len(e.get("problems", [])) >= 4, json.dumps(e.get("problems")))

    code, out, _ = run(tool, "frobnicate", None, root, work / "c7")
    expect("unknown command", 2, code, json.loads(out or "{}").get("error", {}).get("kind") == "usage")

    code, out, _ = run(tool, "classify", None, root, work / "c8", extra=["--config", str(work / "missing.yaml")])
    expect("missing config file", 2, code)

    code, out, _ = run(tool, "classify", "poisson_spectrum", root, work / "c9")
    expect("command needs an operator", 2, code)

    code, out, _ = run(tool, "reduce", "tube_gh", root, work / "c10")
    e = json.loads(out).get("error", {})
    expect("reduce with b != 0", 1, code, e.get("kind") == "precondition")

    code, out, _ = run(tool, "solve", "first_order_gh", root, work / "c11", extra=["--grid", "64x100"])
    expect("--grid override validated", 2, code)

    code, out, _ = run(tool, "counterexample", "tube_gh", root, work / "c12")
    expect("no counterexample for a GH operator", 1, code)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tool", required=True, type=Path)
    ap.add_argument("--root", required=True, type=Path)
    ap.add_argument("--work", required=True, type=Path)
    ap.add_argument("--mode", required=True, choices=["schemas", "determinism", "exit-codes"])
    a = ap.parse_args()
    shutil.rmtree(a.work, ignore_errors=True)
    a.work.mkdir(parents=True)
    {"schemas": mode_schemas, "determinism": mode_determinism, "exit-codes": mode_exit_codes}[a.mode](
        a.tool.resolve(), a.root.resolve(), a.work.resolve())
    if failures:
        print(f"{len(failures)} failure(s)")
        return 1
    print("all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
