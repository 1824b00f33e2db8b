"""Runtime comparison of the tripling coverability solver against exact
cover-function matrix powering, with CSV output and a rendered figure."""

from __future__ import annotations

import csv
import io
import os
import random
import time
from dataclasses import dataclass

from .automaton import WeightedAutomaton, automaton
from .coverfun import cover_table, exact_cover_matrix


@dataclass(frozen=True)
class BenchRow:
    states: int
    trial: int
    tripling_seconds: float
    exact_seconds: float | None


def random_acyclic(states: int, rng: random.Random,
                   weight_bits: int = 63) -> WeightedAutomaton:
    """A random DAG on a topological order with roughly 3 edges per state."""
    edges = []
    for i in range(states - 1):
        edges.append((i, _weight(rng, weight_bits), i + 1))
        for _ in range(2):
            j = rng.randint(i + 1, states - 1)
            edges.append((i, _weight(rng, weight_bits), j))
    return automaton(states, edges, 0, states - 1)


def _weight(rng: random.Random, bits: int) -> int:
    magnitude = rng.getrandbits(bits)
    return magnitude if rng.random() < 0.5 else -magnitude


def run_bench(states_list: list[int], trials: int, seed: int,
              exact_budget: float = 5.0,
              weight_bits: int = 63) -> list[BenchRow]:
    rng = random.Random(seed)
    warmup = random_acyclic(8, rng, weight_bits)
    cover_table(warmup, warmup.initial, warmup.final)  # jit warm-up
    rows: list[BenchRow] = []
    exact_enabled = True
    for states in states_list:
        for trial in range(trials):
            a = random_acyclic(states, rng, weight_bits)
            start = time.perf_counter()
            cover_table(a, a.initial, a.final)
            tripling = time.perf_counter() - start
            exact: float | None = None
            if exact_enabled:
                start = time.perf_counter()
                exact_cover_matrix(a)
                exact = time.perf_counter() - start
                if exact > exact_budget:
                    exact_enabled = False  # larger sizes would only be slower
            rows.append(BenchRow(states, trial, tripling, exact))
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["states", "trial", "tripling_seconds", "exact_seconds"])
    for row in rows:
        writer.writerow([row.states, row.trial,
                         f"{row.tripling_seconds:.6f}",
                         "" if row.exact_seconds is None
                         else f"{row.exact_seconds:.6f}"])
    return buf.getvalue()


def render_figure(rows: list[BenchRow], path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by_states: dict[int, list[BenchRow]] = {}
    for row in rows:
        by_states.setdefault(row.states, []).append(row)
    states = sorted(by_states)
    trip = [sum(r.tripling_seconds for r in by_states[s]) / len(by_states[s])
            for s in states]
    exact_pts = [(s, sum(r.exact_seconds for r in by_states[s]) /
                  len(by_states[s]))
                 for s in states
                 if all(r.exact_seconds is not None for r in by_states[s])]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(states, trip, "o-", label="amplitude tripling")
    if exact_pts:
        ax.plot([p[0] for p in exact_pts], [p[1] for p in exact_pts],
                "s--", label="exact matrix power")
    ax.set_xlabel("states")
    ax.set_ylabel("seconds (mean per table)")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("coverability table runtimes")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_outputs(rows: list[BenchRow], out_dir: str) -> tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "bench.csv")
    png_path = os.path.join(out_dir, "bench.png")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows))
    render_figure(rows, png_path)
    return csv_path, png_path
