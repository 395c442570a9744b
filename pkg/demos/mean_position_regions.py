"""Trace the mean-position law and its two special times.

The tagged particle's mean distance per particle, A(u) with u = t/M,
stays at zero until u = 1/(1-q), follows a square-root law through the
bulk, and switches to a straight line with slope 1-qbar once the slowest
defect captures the tagged particle at u = u_c. This demo prints the two
boundary points and samples the curve around them.

Usage: python3 demos/mean_position_regions.py [out_dir]
"""

import sys

from steptasep.harness import resolve_config, run_fig3
from steptasep.system import (
    critical_scaled_time,
    mean_position_theory,
)


def main(out_dir="/tmp/mean_position_demo"):
    q, qbar = 0.1, 0.2
    cfg = resolve_config("fig3", out=out_dir)
    files = run_fig3(cfg)
    print(f"curve: {files['curve']}")
    print(f"markers: {files['markers']}")

    onset = 1.0 / (1.0 - q)
    uc = critical_scaled_time(q, qbar)
    print(f"\nmotion starts at u = {onset:.6f}")
    print(f"defect captures the tagged particle at u_c = {uc:.6f}")
    print(f"A at the capture point: {mean_position_theory(uc, q, qbar):.6f}")

    print("\n   u      A(u)     branch")
    for u in (1.0, onset, 2.0, 5.0, uc, 12.0, 20.0):
        a = mean_position_theory(u, q, qbar)
        branch = ("flat" if u <= onset else
                  "square root" if u < uc else "linear")
        print(f"{u:6.3f}  {a:8.5f}   {branch}")


if __name__ == "__main__":
    main(*sys.argv[1:])
