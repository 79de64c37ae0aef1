#!/usr/bin/env python3
"""Geometric factor xi versus trapping parameter for several overtones.

Writes plot-ready CSV (one block per mode family) to stdout or a file:

    python scripts/xi_vs_trapping.py > xi_curves.csv
"""

import sys

from bawcav import CavityGeometry, ModeIndex, effective_mass, load_material
from bawcav.material import bundled_material_path

OVERTONES = (1, 3, 5, 15)
ETAS = [0.1 * k for k in range(1, 51)]  # 0.1 .. 5.0


def main(out=sys.stdout):
    mat = load_material(bundled_material_path("quartz"))
    geo = CavityGeometry(L=0.015, h0=5e-4, R=0.3)
    out.write("family,n,eta,xi\n")
    for mp in ((0, 0), (2, 2)):
        for n in OVERTONES:
            mode = ModeIndex(n, *mp)
            for eta in ETAS:
                _, _, xi = effective_mass(mat, geo, mode, eta, eta)
                out.write(f"({mp[0]}{mp[1]}),{n},{eta:.9g},{xi:.9g}\n")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as fh:
            main(fh)
    else:
        main()
