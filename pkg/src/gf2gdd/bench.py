"""Timing comparison of the compiled and pure-Python search kernels.

Run as `python -m gf2gdd.bench [--m M --k K --repeat N]`.  Both
backends execute the same counts; the results are asserted equal before
any timing is reported.
"""

from __future__ import annotations

import argparse
import time

from .construction import sample_pair_contexts
from .field import build_field
from .kernels import backends


def _best_of(fn, repeat: int) -> tuple[float, int]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def run_bench(m: int, k: int, repeat: int, seed: int) -> list[dict]:
    ctx = build_field(m)
    pc = sample_pair_contexts(ctx, 1, seed)[0]
    cases = [
        ("count_all_blocks", (m, k, ())),
        ("count_through_pair", (m, k, (pc.u, pc.v))),
    ]
    rows = []
    for name, call_args in cases:
        row: dict = {"case": f"{name}[m={m},k={k}]"}
        counts = {}
        for backend_name, mod in backends():
            took, got = _best_of(lambda: mod.count_completions(*call_args), repeat)
            row[backend_name] = took
            counts[backend_name] = got
        if len(set(counts.values())) != 1:
            raise AssertionError(f"backends disagree on {name}: {counts}")
        row["result"] = counts.popitem()[1]
        rows.append(row)
    return rows


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rows = run_bench(args.m, args.k, args.repeat, args.seed)
    names = [n for n, _ in backends()]
    if "compiled" not in names:
        print("compiled backend not importable; timing the fallback alone")
    width = max(len(r["case"]) for r in rows)
    header = f"{'case':<{width}}  result      " + "".join(f"{n:>12}" for n in names)
    print(header)
    for r in rows:
        line = f"{r['case']:<{width}}  {r['result']:<10}"
        for n in names:
            line += f"{r[n] * 1e3:>10.2f}ms"
        if "compiled" in r and "python" in r and r["compiled"] > 0:
            line += f"  x{r['python'] / r['compiled']:.0f}"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
