"""Compare the compiled firing kernel with the pure-Python fallback.

Runs a full state-space exploration of generated models with each backend
and reports the time per explored marking.

    python benchmarks/bench_kernel.py [--repeat N]
"""
import argparse
import time
from collections import deque

from stubgame import kernel
from stubgame.generators import gen_chain, gen_choice_workflow, gen_nim


def explore(k, m0):
    seen = {m0}
    queue = deque([m0])
    edges = 0
    while queue:
        m = queue.popleft()
        for _, m2 in k.successors(m):
            edges += 1
            if m2 not in seen:
                seen.add(m2)
                queue.append(m2)
    return len(seen), edges


def build(cls, net):
    return cls(*net.kernel_args)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    models = [("chain-14", gen_chain(14)), ("workflow-8", gen_choice_workflow(8)),
              ("nim-3-400", gen_nim(3, 400))]
    backends = [("python", kernel.PyNetKernel)]
    if kernel.BACKEND == "cython":
        backends.insert(0, ("cython", kernel.NetKernel))
    else:
        print("compiled kernel not available; only the fallback is measured")
    print(f"{'model':<12} {'backend':<8} {'markings':>9} {'edges':>9} {'best s':>8} {'us/marking':>11}")
    for name, mf in models:
        base = None
        for bname, cls in backends:
            k = build(cls, mf.net)
            best = float("inf")
            for _ in range(args.repeat):
                t = time.perf_counter()
                n, e = explore(k, mf.initial)
                best = min(best, time.perf_counter() - t)
            speed = "" if base is None else f"  x{best / base:.1f} vs {backends[0][0]}"
            base = base or best
            print(f"{name:<12} {bname:<8} {n:>9} {e:>9} {best:>8.3f} {1e6 * best / n:>11.2f}{speed}")


if __name__ == "__main__":
    main()
