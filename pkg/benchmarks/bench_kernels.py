"""Time the compiled search kernel against the pure-Python one.

    python benchmarks/bench_kernels.py [--states 14] [--repeat 3]

Both backends run the same ∀∃ search on the same tables; the script checks
that they agree before reporting timings.
"""

import argparse
import random
import statistics
import time

from dstl import checker
from dstl.computation import ComputationDecl, build

# A mix of formulas that hold (full scan) and fail (early exit).
FORMULAS = [
    "<m>p leads_to <m>p | <n>q",
    "<n>q because <n>q | <m>p",
    "<m>p leads_to_c <m>p | <n>q",
    "<m>p unless <m>p & <n>q",
    "<m>true leads_to <n>true",
    "p leads_to q",
]


def chain_model(states: int):
    """Two components trading messages back and forth; deterministic labels."""
    half = states // 2
    lengths = {"m": states - half, "n": half}
    rng = random.Random(states)
    labels = {}
    for comp, n in lengths.items():
        for k in range(n):
            labels[(comp, k)] = frozenset(x for x in "pq" if rng.random() < 0.5)
    messages = []
    for k in range(1, min(lengths.values()) - 1, 2):
        messages.append((("m", k), ("n", k + 1)))
    decl = ComputationDecl(list(lengths.items()), labels, messages)
    return build(decl)


def time_one(c, phi, pure, repeat):
    out = []
    verdict = None
    for _ in range(repeat):
        t = time.perf_counter()
        verdict = checker.check(c, phi, pure=pure)
        out.append(time.perf_counter() - t)
    return verdict, statistics.median(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=14)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    c = chain_model(args.states)
    print(f"backend available: {checker.BACKEND}; model: {c.size} states, "
          f"{2 ** c.size - 1} distributed states")
    if checker.BACKEND != "compiled":
        print("compiled kernel not built; only the pure-Python timings are shown")
    print(f"{'formula':<32} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for text in FORMULAS:
        v_py, t_py = time_one(c, text, True, args.repeat)
        if checker.BACKEND == "compiled":
            v_c, t_c = time_one(c, text, False, args.repeat)
            assert v_c == v_py, f"backends disagree on {text}"
            print(f"{text:<32} {t_py:>10.3f} {t_c:>11.3f} {t_py / t_c:>7.1f}x")
        else:
            print(f"{text:<32} {t_py:>10.3f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
