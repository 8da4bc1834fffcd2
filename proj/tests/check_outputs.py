#!/usr/bin/env python3
"""Runs the sfwm CLI over the shipped configs and checks every JSON output against its schema."""
import copy
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

SCHEMA_OF_FORMAT = {
    "sfwm-jsa": "jsa",
    "sfwm-jsi": "jsi",
    "sfwm-reconstruction": "reconstruction",
    "sfwm-candidates": "candidates",
    "sfwm-schmidt": "schmidt",
    "sfwm-negativity": "negativity",
    "sfwm-dispersion": "dispersion",
    "sfwm-critical-power": "critical-power",
    "sfwm-ultrabroadband": "ultrabroadband",
}


def load_schema(root, name):
    return json.loads((root / "schema" / f"{name}.schema.json").read_text())


def run(sfwm, command, config, out):
    p = subprocess.run([sfwm, command, "--config", str(config), "--out", str(out), "--quiet"],
                       capture_output=True, text=True, timeout=600)
    return p.returncode, p.stdout, p.stderr


def variants(base):
    """Extra configurations covering the design tasks and simulator methods."""
    out = []
    for task, extra in [
        ("factorable", {"pump_min_rad_per_fs": 2.22, "pump_max_rad_per_fs": 2.58, "pump_samples": 61,
                        "detuning_min_rad_per_fs": 0.01, "detuning_max_rad_per_fs": 0.8, "detuning_samples": 401}),
        ("symmetric", {}),
        ("tuning", {"scales": [0.99, 1.0, 1.01], "pump_lambda_um": 0.7848,
                    "detuning_min_rad_per_fs": 0.01, "detuning_max_rad_per_fs": 0.8}),
    ]:
        c = copy.deepcopy(base)
        c["design"] = {"task": task, **extra}
        out.append(("design", c))
    for method, extra in [
        ("monochromator", {"steps_s": 16, "steps_i": 16, "pair_budget": 1e5}),
        ("ft", {"mode": "twoD"}),
        ("dispersive", {"dispersion_ps_per_nm_km": -120, "length_km": 0.4}),
    ]:
        c = copy.deepcopy(base)
        c["charsim"] = {"method": method, **extra}
        out.append(("charsim", c))
    return out


def main():
    sfwm, root = sys.argv[1], pathlib.Path(sys.argv[2])
    config_schema = load_schema(root, "config")
    summary_schema = load_schema(root, "summary")
    failures = 0
    checked = 0
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        jobs = []
        for cfg in sorted((root / "configs").glob("*.json")):
            doc = json.loads(cfg.read_text())
            jsonschema.validate(doc, config_schema)
            commands = [c for c in ("dispersion", "contour", "jsa", "schmidt", "design", "charsim") if c in doc
                        or c in ("jsa", "schmidt")]
            jobs += [(cfg.stem, c, cfg) for c in commands]
            if cfg.stem == "two_zdw":
                for k, (command, v) in enumerate(variants(doc)):
                    jsonschema.validate(v, config_schema)
                    path = tmp / f"variant_{k}.json"
                    path.write_text(json.dumps(v))
                    jobs.append((f"{cfg.stem}_variant{k}", command, path))
        for name, command, cfg in jobs:
            out = tmp / f"{name}_{command}"
            code, stdout, stderr = run(sfwm, command, cfg, out)
            lines = stdout.strip().splitlines()
            if code != 0 or len(lines) != 1:
                print(f"FAIL {name} {command}: exit {code}\n{stdout}{stderr}")
                failures += 1
                continue
            jsonschema.validate(json.loads(lines[0]), summary_schema)
            for f in sorted(out.glob("*.json")):
                doc = json.loads(f.read_text())
                schema = SCHEMA_OF_FORMAT.get(doc.get("format"))
                if schema is None:
                    print(f"FAIL {f}: unknown format {doc.get('format')}")
                    failures += 1
                    continue
                try:
                    jsonschema.validate(doc, load_schema(root, schema))
                    checked += 1
                except jsonschema.ValidationError as e:
                    print(f"FAIL {f}: {e.message}")
                    failures += 1
    print(f"{checked} sidecars validated, {failures} failures")
    return 1 if failures or checked == 0 else 0


if __name__ == "__main__":
    sys.exit(main())
