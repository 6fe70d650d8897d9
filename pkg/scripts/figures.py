#!/usr/bin/env python3
"""Write SVG figures: hull, dual and isoperimetrix per preset, and a few CC geodesic shadows."""

import argparse
from pathlib import Path

from heisengrowth import GroupElement, preset
from heisengrowth.cc import CCMetric
from heisengrowth.planar import isoperimetrix
from heisengrowth.svg import Figure

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--outdir", type=Path, default=Path("figures"))
args = p.parse_args()
args.outdir.mkdir(parents=True, exist_ok=True)

for name in ("std", "hex", "abAB"):
    iso = isoperimetrix(preset(name))
    fig = Figure()
    fig.polygon(iso.hull.vertices, fill="none").label(iso.hull.vertices[0], "L")
    fig.polygon(iso.dual.vertices, fill="none", stroke="#7f7f7f")
    fig.polygon(iso.vertices, fill="#f5e0db", stroke="#b03a2e").label(iso.vertices[2], "I")
    print(fig.save(args.outdir / f"{name}_polygons.svg"))

    metric = CCMetric(iso)
    fig = Figure()
    for g in (GroupElement(4, 0, 4), GroupElement(4, 2, 20), GroupElement(0, 0, 16), GroupElement(3, 1, -9)):
        fig.polyline(metric.shadow(g))
        fig.label((g.a, g.b), f"({g.a},{g.b},{g.c2})")
    print(fig.save(args.outdir / f"{name}_shadows.svg"))
