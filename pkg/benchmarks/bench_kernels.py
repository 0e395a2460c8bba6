"""Compiled versus pure-Python kernels.

Times the blade-element load evaluation, a 10-step RK4 control tick and a
full settled ``set_propeller`` call with each backend, and checks that the
two backends agree.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import timeit
from contextlib import contextmanager

from pitchopt import config, kernels


@contextmanager
def backend(module):
    saved = kernels.bet_loads, kernels.rk4_advance
    kernels.bet_loads, kernels.rk4_advance = module.bet_loads, module.rk4_advance
    try:
        yield
    finally:
        kernels.bet_loads, kernels.rk4_advance = saved


def cases(cfg):
    hover = config.build_model(cfg)
    cruise = config.build_model(cfg, airspeed=3.0)
    motor = config.build_motor(cfg).as_array()
    beta = math.radians(10)

    def loads(m):
        return lambda mod: mod.bet_loads(m.nodes, m.chords, m.weights, beta,
                                         600.0, m.aero_vector)

    def tick(mod):
        return mod.rk4_advance(600.0, 2.0, 6.0, beta, 1e-4, 10, motor,
                               hover.nodes, hover.chords, hover.weights,
                               hover.aero_vector)

    return {"bet_loads V=0": loads(hover), "bet_loads V=3": loads(cruise),
            "rk4 tick (10 steps)": tick}


def best_time(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        raise SystemExit("compiled extension not built; "
                         "run pip install -e . --no-build-isolation")
    cfg = config.load_config()
    fast, slow = kernels.compiled_backend, kernels.python_backend
    print(f"{'kernel':<24}{'compiled':>12}{'python':>12}{'speed-up':>10}"
          f"{'max rel diff':>14}")
    for name, case in cases(cfg).items():
        a, b = case(fast), case(slow)
        diff = max(abs(x - y) / max(abs(y), 1e-300) for x, y in zip(a, b))
        tf = best_time(lambda: case(fast), args.repeat)
        ts = best_time(lambda: case(slow), args.repeat)
        print(f"{name:<24}{tf * 1e6:>10.2f}us{ts * 1e6:>10.2f}us"
              f"{ts / tf:>9.1f}x{diff:>14.1e}")

    def settle():
        return config.build_plant(cfg).set_propeller(math.radians(9), 0.52)

    times = {}
    for label, mod in (("compiled", fast), ("python", slow)):
        with backend(mod):
            times[label] = best_time(settle, 1) if label == "compiled" \
                else timeit.timeit(settle, number=1)
    print(f"{'set_propeller (settled)':<24}{times['compiled'] * 1e3:>10.1f}ms"
          f"{times['python'] * 1e3:>10.0f}ms"
          f"{times['python'] / times['compiled']:>9.1f}x")


if __name__ == "__main__":
    main()
