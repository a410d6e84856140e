"""Walk through the random graph process: nested snapshots and hitting times.

Samples seeded edge-arrival processes, shows the nesting G_0 <= G_1 <= ...,
and compares the measured hitting times tau_1 (no isolated vertex), tau_conn
(connected), tau_2, tau_2-conn against the (n/2) log n growth scale.
"""

import math

from process_resilience import (
    graph_at,
    hitting_time_k_connectivity,
    hitting_time_min_degree,
    sample_process,
)


def main():
    print("Nested snapshots of one seeded process (n = 12)")
    print("=" * 60)
    trace = sample_process(12, seed=7)
    for m in (0, 6, 12, 24, 48, 66):
        g = graph_at(trace, m)
        print(f"  m = {m:3d}: {g.m:3d} edges, min degree {g.min_degree()}")

    print()
    print("Hitting times vs the (n/2) log n scale, 5 seeds each")
    print("=" * 60)
    print(f"{'n':>6} {'tau_1':>8} {'tau_conn':>9} {'tau_2':>8} "
          f"{'tau_2conn':>10} {'(n/2)ln n':>10}")
    for n in (64, 256, 1024):
        for seed in range(5):
            trace = sample_process(n, seed)
            t1 = hitting_time_min_degree(trace, 1)
            tc = hitting_time_k_connectivity(trace, 1)
            t2 = hitting_time_min_degree(trace, 2)
            t2c = hitting_time_k_connectivity(trace, 2)
            scale = 0.5 * n * math.log(n)
            mark = "" if t1 == tc else "   <- tau_1 != tau_conn"
            print(f"{n:>6} {t1:>8} {tc:>9} {t2:>8} {t2c:>10} {scale:>10.0f}{mark}")
    print()
    print("Equality tau_1 = tau_conn (and tau_2 = tau_2-conn) is the typical")
    print("behaviour: the last low-degree vertex is the last obstruction.")


if __name__ == "__main__":
    main()
