"""Write the bundled sample graphs to data/ (and optionally a benchmark graph)."""

import argparse
from pathlib import Path

from parads.generators import cycle_graph, erdos_renyi, gnm, path_graph, star_graph
from parads.graph import format_edge_list

ER_SEED = 20190901

SAMPLES = {
    "p3.txt": lambda: path_graph(3),
    "s5.txt": lambda: star_graph(5),
    "c4.txt": lambda: cycle_graph(4),
    "er100.txt": lambda: erdos_renyi(100, 0.05, ER_SEED),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--bench-edges", type=int, default=0, help="also write gnm_<m>.txt with about this many edges")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, make in SAMPLES.items():
        (args.out / name).write_text(format_edge_list(make()))
        print(args.out / name)
    if args.bench_edges:
        m = args.bench_edges
        g = gnm(m // 5, m, seed=1)
        path = args.out / f"gnm_{m}.txt"
        path.write_text(format_edge_list(g))
        print(path, g.num_vertices, g.num_edges)


if __name__ == "__main__":
    main()
