"""Desk-scale benchmark: all variants over a thread sweep plus a shared-frame F sweep.

Writes results/bench.csv, results/bench_frames.csv and results/bench_report.md.
"""

import argparse
import csv
import sys
from pathlib import Path

from parads.cli import available_cores, main, throughput_note
from parads.generators import gnm
from parads.graph import format_edge_list

ROOT = Path(__file__).resolve().parent.parent


def run(argv):
    code = main(argv)
    if code:
        sys.exit(code)


def main_bench():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--edges", type=int, default=100_000)
    ap.add_argument("--epsilon", type=float, default=0.02)
    ap.add_argument("--threads", default="1,2,4")
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--out", type=Path, default=ROOT / "results")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    graph_path = args.out / f"gnm_{args.edges}.txt"
    if not graph_path.exists():
        graph_path.write_text(format_edge_list(gnm(args.edges // 5, args.edges, seed=1)))

    common = ["--graph", str(graph_path), "--epsilon", str(args.epsilon), "--reps", str(args.reps)]
    table = args.out / "bench.csv"
    run(["bench", *common, "--variant", "sequential", "--threads", "1"] + ["--output", str(table) + ".seq"])
    run(["bench", *common, "--variant", "barrier,local,shared,indexed", "--threads", args.threads,
         "--output", str(table)])
    frames = args.out / "bench_frames.csv"
    tmax = max(int(x) for x in args.threads.split(","))
    fs = ",".join(str(f) for f in (1, 2, 4) if f <= tmax)
    run(["bench", *common, "--variant", "shared", "--threads", str(tmax), "--frames", fs, "--output", str(frames)])

    with open(str(table) + ".seq") as fh:
        seq_rows = list(csv.DictReader(fh))
    with open(table) as fh:
        rows = list(csv.DictReader(fh))
    for r in rows + seq_rows:
        r["threads"] = int(r["threads"])
    with open(table, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(seq_rows[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(seq_rows + rows)
    Path(str(table) + ".seq").unlink()

    cores = available_cores()
    note = throughput_note(seq_rows + rows, cores) or "no local-frame T=4 row in this sweep"
    report = [
        "# Desk benchmark",
        "",
        f"graph: {graph_path.name}, epsilon={args.epsilon}, reps={args.reps}, cores available: {cores}",
        "",
        "Speedups are on ADS time only, relative to the sequential loop.",
        "",
        "```",
        table.read_text().rstrip(),
        "```",
        "",
        "Shared-frame F sweep:",
        "",
        "```",
        frames.read_text().rstrip(),
        "```",
        "",
        f"Throughput target: {note}.",
        "",
    ]
    (args.out / "bench_report.md").write_text("\n".join(report))
    print("\n".join(report))


if __name__ == "__main__":
    main_bench()
