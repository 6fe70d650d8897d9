#!/usr/bin/env python3
"""Growth series of the preset generating sets with their fitted recurrences."""

import argparse
import time

from heisengrowth import preset
from heisengrowth.ball import bfs_ball
from heisengrowth.fitting import fit_recurrence, gf_from_recurrence

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--radius", type=int, default=40)
p.add_argument("--sets", nargs="*", default=["std", "std3", "hex"])
args = p.parse_args()

for name in args.sets:
    t = time.perf_counter()
    sigma = bfs_ball(preset(name), args.radius, store_pred=False).sigma
    rec = fit_recurrence(sigma, 24)
    print(f"{name}: sigma[0..10] = {sigma[:11]}  ({time.perf_counter() - t:.1f}s)")
    if rec is None:
        print("   no recurrence of order <= 24 on this window")
        continue
    gf = gf_from_recurrence(sigma, rec)
    print(f"   recurrence order {rec.order} from n = {rec.threshold}")
    print(f"   numerator   {list(gf.numerator)}")
    print(f"   denominator {list(gf.denominator)}")
