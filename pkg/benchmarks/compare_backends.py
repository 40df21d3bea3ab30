#!/usr/bin/env python3
"""Throughput comparison of the compiled and pure-Python backends.

Both backends run the same table-driven kernel contract, so the rates below
are the only difference a caller can observe. Step counts are scaled per
backend to keep wall time reasonable; steps/s is comparable regardless.
"""

from __future__ import annotations

import argparse

from tilecast import backend_name, make_env, set_backend, throughput_probe


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--env", default="my-way-home")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    spec = make_env(args.env)
    # (batch size, steps for the compiled backend, steps for the python one)
    grid = [(1, 3000, 300), (64, 250, 25)]
    rates: dict[tuple[str, int], float] = {}

    for name in ("compiled", "python"):
        try:
            set_backend(name)
        except RuntimeError as err:
            print(f"{name}: skipped ({err})")
            continue
        assert backend_name() == name
        for n, compiled_steps, python_steps in grid:
            steps = compiled_steps if name == "compiled" else python_steps
            rate = throughput_probe(spec, n, steps, args.seed,
                                    n_threads=args.threads)
            rates[(name, n)] = rate
            print(f"{name:<9} n={n:<4} steps={steps:<5} "
                  f"{rate:>12,.0f} steps/s")
    set_backend("auto")

    for n, _, _ in grid:
        if ("compiled", n) in rates and ("python", n) in rates:
            ratio = rates[("compiled", n)] / rates[("python", n)]
            print(f"compiled/python speedup at n={n}: {ratio:.1f}x")


if __name__ == "__main__":
    main()
