#!/usr/bin/env python3
"""End-to-end checks of the plrec command line driver."""

import json
import math
import struct
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = Path(sys.argv[1])
CONFIGS = Path(sys.argv[2])

failures = []


def run(*args, expect=0):
    proc = subprocess.run([str(CLI), *args], capture_output=True, text=True)
    if expect is not None and proc.returncode != expect:
        failures.append(
            f"{' '.join(args)}: exit {proc.returncode} != {expect}\n{proc.stderr}"
        )
    return proc


def check(cond, what):
    if not cond:
        failures.append(what)


def loglog_slope(xs, ys):
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    n = len(xs)
    sx, sy = sum(lx), sum(ly)
    sxx = sum(v * v for v in lx)
    sxy = sum(a * b for a, b in zip(lx, ly))
    return (n * sxy - sx * sy) / (n * sxx - sx * sx)


def parse_csv(text):
    lines = [l for l in text.strip().splitlines() if l]
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return rows


# --- every shipped example config validates --------------------------------
for config in sorted(CONFIGS.glob("*.json")):
    run("times", "--config", str(config))

# --- times: harmonic -> infinite revival time, regime harmonic --------------
out = run("times", "--config", str(CONFIGS / "harmonic.json"))
doc = json.loads(out.stdout)
check(doc["T0_Q"] == "inf", f"harmonic T0_Q: {doc['T0_Q']!r}")
check(doc["regime"] == "harmonic", f"harmonic regime: {doc['regime']}")
check(abs(doc["T0_cl"] - 2 * math.pi) < 1e-10, "harmonic T0_cl != 2 pi")

# determinism: identical invocations are byte-identical
out2 = run("times", "--config", str(CONFIGS / "harmonic.json"))
check(out.stdout == out2.stdout, "times output not deterministic")

# --- spectrum: spacing trends ------------------------------------------------
def spacing_column(config, *overrides):
    args = ["spectrum", "--config", str(config)]
    for o in overrides:
        args += ["--set", o]
    rows = parse_csv(run(*args).stdout)
    return [float(r["dE_n"]) for r in rows if r["dE_n"]]

harm = spacing_column(CONFIGS / "harmonic.json")
check(max(harm) - min(harm) < 1e-9, "harmonic spacing not constant")
tight = spacing_column(CONFIGS / "harmonic.json", "potential.k=4", "potential.V0=1")
check(all(b > a for a, b in zip(tight, tight[1:])), "k=4 spacing not increasing")
loose = spacing_column(CONFIGS / "bouncer.json")
check(all(b < a for a, b in zip(loose, loose[1:])), "k=1 spacing not decreasing")

# --- mathieu ------------------------------------------------------------------
doc = json.loads(run("mathieu", "--nu", "2", "--q", "0").stdout)
check(abs(doc["a_nu"] - 4.0) < 1e-10, f"a_2(0) = {doc['a_nu']}")
doc = json.loads(run("mathieu", "--nu", "0", "--q", "1").stdout)
check(abs(doc["a_nu"] + 0.455139) < 1e-6, f"a_0(1) = {doc['a_nu']}")
doc = json.loads(run("mathieu", "--nu", "1", "--q", "0.1").stdout)
check(abs(doc["a_nu"] - 1.09875) < 1e-4, f"a_1(0.1) = {doc['a_nu']}")

# --- config errors: exit 2 with the offending key echoed ----------------------
bad = run("times", "--config", str(CONFIGS / "harmonic.json"),
          "--set", "potental.k=3", expect=2)
check("potental" in bad.stderr, "unknown key not echoed")

# singular parameter point: exit 3 (harmonic omega = 1 = omega_N at N = 1)
run("times", "--config", str(CONFIGS / "harmonic.json"),
    "--set", "drive.lambda=0.1", "--set", "drive.V=1", "--set", "drive.N=1",
    expect=3)

# --- sweeps --------------------------------------------------------------------
rows = parse_csv(run("sweep", "--config", str(CONFIGS / "bouncer_driven.json"),
                     "--jobs", "4").stdout)
t_cl = [abs(float(r["Tlam_cl"])) for r in rows]
t_q = [float(r["Tlam_Q"]) for r in rows]
check(all(b > a for a, b in zip(t_cl, t_cl[1:])), "lambda sweep: Tlam_cl not rising")
check(all(b < a for a, b in zip(t_q, t_q[1:])), "lambda sweep: Tlam_Q not falling")

sweep2 = run("sweep", "--config", str(CONFIGS / "bouncer_driven.json"),
             "--jobs", "4")
base = run("sweep", "--config", str(CONFIGS / "bouncer_driven.json"), "--jobs", "1")
check(sweep2.stdout == base.stdout, "sweep output depends on --jobs")

# n_bar sweep of the undriven bouncer: T0_Q ~ n^(4/3), T0_cl ~ n^(1/3)
values = ",".join(str(v) for v in range(10, 201, 10))
rows = parse_csv(run("sweep", "--config", str(CONFIGS / "bouncer.json"),
                     "--set", f"sweep={{\"parameter\":\"n_bar\",\"values\":[{values}]}}",
                     ).stdout)
ns = [float(r["value"]) + 0.75 for r in rows]
check(abs(loglog_slope(ns, [float(r["T0_Q"]) for r in rows]) - 4 / 3) < 0.05,
      "n_bar sweep: T0_Q slope")
check(abs(loglog_slope(ns, [float(r["T0_cl"]) for r in rows]) - 1 / 3) < 0.05,
      "n_bar sweep: T0_cl slope")

# kbar sweep at k = 4: T0_cl ~ kbar^(-1/3)
kvals = ",".join(str(0.5 + 0.125 * i) for i in range(13))
rows = parse_csv(run("sweep", "--config", str(CONFIGS / "harmonic.json"),
                     "--set", "potential.k=4", "--set", "potential.V0=1",
                     "--set", "n_bar=30",
                     "--set", f"sweep={{\"parameter\":\"kbar\",\"values\":[{kvals}]}}",
                     ).stdout)
kb = [float(r["value"]) for r in rows]
check(abs(loglog_slope(kb, [float(r["T0_cl"]) for r in rows]) + 1 / 3) < 0.02,
      "kbar sweep: T0_cl slope")

# --- evolve ----------------------------------------------------------------------
with tempfile.TemporaryDirectory() as tmp:
    out = run("evolve", "--config", str(CONFIGS / "harmonic.json"),
              "--out-dir", tmp)
    report = json.loads(out.stdout)
    check(report["T_cl_status"] == "found", "harmonic classical peak missing")
    check(abs(report["T_cl_detected"] - 2 * math.pi) / (2 * math.pi) < 0.005,
          f"harmonic T_cl {report['T_cl_detected']}")
    check(report["T_Q_status"] == "degenerate-linear-spectrum",
          f"harmonic revival status {report['T_Q_status']}")
    check(report["T_Q_prediction_infinite"] is True, "harmonic T0_Q not infinite")
    check((Path(tmp) / "trajectory.csv").exists(), "trajectory.csv missing")
    check((Path(tmp) / "report.json").exists(), "report.json missing")
    saved = json.loads((Path(tmp) / "report.json").read_text())
    check(saved == report, "stdout and report.json differ")
    header = (Path(tmp) / "trajectory.csv").read_text().splitlines()[0]
    check(header == "t,re_A,im_A,abs2_A,norm", f"trajectory header: {header}")

# no recurrence inside a slow shallow well: exit 4
with tempfile.TemporaryDirectory() as tmp:
    out = run("evolve", "--config", str(CONFIGS / "shallow_well.json"),
              "--out-dir", tmp, expect=4)
    report = json.loads(out.stdout)
    check(report["T_cl_status"] == "no-recurrence",
          f"shallow well status {report['T_cl_status']}")

# driven bouncer: classical shift up, revival shift down in the report
with tempfile.TemporaryDirectory() as tmp:
    out = run("evolve", "--config", str(CONFIGS / "bouncer_driven.json"),
              "--out-dir", tmp)
    report = json.loads(out.stdout)
    check(report["classical_shift_sign"] == 1, "driven classical shift sign")
    check(report["revival_shift_sign"] == -1, "driven revival shift sign")
    check(report["T_cl_status"] == "found", "driven classical peak missing")

# wavefunction snapshots: binary records (n_points, x_min, x_max, t, re/im)
with tempfile.TemporaryDirectory() as tmp:
    run("evolve", "--config", str(CONFIGS / "harmonic.json"),
        "--set", "outputs.snapshots=psi.bin", "--set", "run.snapshot_stride=16",
        "--out-dir", tmp)
    blob = (Path(tmp) / "psi.bin").read_bytes()
    offset, records = 0, []
    while offset < len(blob):
        n, x_min, x_max, t = struct.unpack_from("<qddd", blob, offset)
        offset += 8 + 24
        psi = struct.unpack_from(f"<{2 * n}d", blob, offset)
        offset += 16 * n
        records.append((n, x_min, x_max, t, psi))
    check(len(records) >= 3, f"snapshot count {len(records)}")
    check(records[0][3] == 0.0, "first snapshot not at t = 0")
    n, x_min, x_max, _, psi = records[-1]
    check(n == 256 and x_max == 14.0, "snapshot header fields")
    dx = (x_max - x_min) / n
    norm = sum(psi[2 * j] ** 2 + psi[2 * j + 1] ** 2 for j in range(n)) * dx
    check(abs(norm - 1.0) < 1e-8, f"snapshot norm {norm}")
    times = [r[3] for r in records]
    check(all(b > a for a, b in zip(times, times[1:])), "snapshot times not increasing")

# output format variants
rows = json.loads(run("spectrum", "--config", str(CONFIGS / "bouncer.json"),
                      "--format", "json").stdout)
for row in rows:
    if row["n"] >= 5:
        check(abs(row["E_wkb"] - row["E_numeric"]) / row["E_numeric"] < 0.02,
              f"WKB vs numeric at n={row['n']}")
csv_times = run("times", "--config", str(CONFIGS / "harmonic.json"),
                "--format", "csv").stdout
check(csv_times.splitlines()[0].startswith("k,rho,kbar"), "times csv header")
check(",inf" in csv_times.splitlines()[1], "times csv infinity")
json.loads(run("sweep", "--config", str(CONFIGS / "bouncer_driven.json"),
               "--format", "json").stdout)

print(f"{len(failures)} failure(s)")
for f in failures:
    print("FAIL:", f)
sys.exit(1 if failures else 0)
