"""Benchmark the compiled stepping kernel against its pure-Python twin.

Both backends run the same seeded workload; outputs are digested each tick
so the comparison also proves the two kernels stay bit-identical. Run as:

    python3 benchmarks/bench_step.py [--vehicles N] [--ticks K]
"""

import argparse
import hashlib
import random
import time
from array import array

from drivebench.traffic.backend import compiled_step, pure_step, stepping_backend

SPEED_LIMIT = 13.89
ACCEL_CAP = 0.9 * 9.81


def build_arrays(n_vehicles: int, seed: int):
    rng = random.Random(seed)
    lane = array("i", (rng.randrange(4) for _ in range(n_vehicles)))
    s = array("d", sorted(rng.uniform(0.0, 40.0 * n_vehicles) for _ in range(n_vehicles)))
    speed = array("d", (rng.uniform(0.0, SPEED_LIMIT) for _ in range(n_vehicles)))
    length = array("d", (4.5 for _ in range(n_vehicles)))
    return lane, s, speed, length


def run_backend(kernel, n_vehicles: int, ticks: int, seed: int):
    """Advance the workload ``ticks`` times; returns (seconds, digest)."""
    lane, s, speed, length = build_arrays(n_vehicles, seed)
    out_s = array("d", bytes(8 * n_vehicles))
    out_speed = array("d", bytes(8 * n_vehicles))
    out_accel = array("d", bytes(8 * n_vehicles))
    digest = hashlib.sha256()
    start = time.perf_counter()
    for tick in range(ticks):
        pairs = kernel(
            lane,
            s,
            speed,
            length,
            0,
            0.5,
            ACCEL_CAP,
            SPEED_LIMIT,
            1.5,
            1.5,
            2.0,
            2.0,
            0.1,
            out_s,
            out_speed,
            out_accel,
        )
        s, out_s = out_s, s
        speed, out_speed = out_speed, speed
        digest.update(s.tobytes())
        digest.update(speed.tobytes())
        digest.update(out_accel.tobytes())
        digest.update(repr(sorted(pairs)).encode())
    elapsed = time.perf_counter() - start
    return elapsed, digest.hexdigest()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--vehicles", type=int, default=64)
    parser.add_argument("--ticks", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    print(f"active backend: {stepping_backend()}")
    print(f"workload: {args.vehicles} vehicles, {args.ticks} ticks, seed {args.seed}")

    pure_time, pure_digest = run_backend(pure_step(), args.vehicles, args.ticks, args.seed)
    print(f"python   : {args.ticks / pure_time:>12.0f} ticks/s  ({pure_time:.3f} s)")

    compiled = compiled_step()
    if compiled is None:
        print("compiled : extension not built, skipping")
        return 0
    comp_time, comp_digest = run_backend(compiled, args.vehicles, args.ticks, args.seed)
    print(f"compiled : {args.ticks / comp_time:>12.0f} ticks/s  ({comp_time:.3f} s)")
    print(f"speedup  : {pure_time / comp_time:.1f}x")

    if pure_digest != comp_digest:
        print("MISMATCH: backends diverged, trajectories are not bit-identical")
        return 1
    print(f"parity   : trajectories bit-identical (sha256 {pure_digest[:16]})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
