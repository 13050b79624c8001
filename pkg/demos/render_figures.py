"""Render the basin pictures for the five figure configurations.

Writes fifteen PPM files into ``figures/`` (or the directory given as the
first argument) and prints how many pixels went to each root.
The palette is our own, so these are analogues of the reference pictures
rather than pixel copies.
"""

import sys
from pathlib import Path

from multiroot.basins import FIGURES, figure_panels, render, write_ppm
from multiroot.problems import get_problem

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out_dir.mkdir(parents=True, exist_ok=True)

for number in FIGURES:
    for name, spec in figure_panels(number):
        img = render(get_problem(name), spec, workers=4)
        path = write_ppm(img, out_dir / f"fig{number}_{name}_{spec.kind}.ppm")
        counts = img.counts()
        print(f"figure {number}  {name:7} {spec.label():12} diverged {counts.pop('diverged'):5}  "
              + " ".join(f"{v:6}" for v in counts.values()) + f"  -> {path}")
