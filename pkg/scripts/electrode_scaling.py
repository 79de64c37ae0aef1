#!/usr/bin/env python3
"""Optimal electrode size and parasitic figures across overtones.

Shows the electrode shrinking as 1/sqrt(n) while the derived shunt
impedance stays constant.  Usage:

    python scripts/electrode_scaling.py [eta] > electrode_scaling.csv
"""

import sys

from bawcav import CavityGeometry, load_material, optimal_electrode, shunt_impedance
from bawcav.material import bundled_material_path

OVERTONES = (1, 3, 7, 15, 37, 65, 227, 501)


def main(eta: float, out=sys.stdout):
    mat = load_material(bundled_material_path("quartz-piezo"))
    geo = CavityGeometry(L=0.015, h0=5e-4, R=0.3)
    out.write("n,f_GHz_leading,L_tilde_opt_m,C0_pF,Z_closed_form_kohm,Z_derived_kohm\n")
    f1 = 3.1514910079535783e6  # leading-order fundamental of this plate
    for n in OVERTONES:
        lt = optimal_electrode(geo, eta, n)
        c0, z_closed, z_derived = shunt_impedance(mat, geo, eta, n)
        out.write(
            f"{n},{n * f1 / 1e9:.9g},{lt:.9g},{c0 * 1e12:.9g},"
            f"{z_closed / 1e3:.9g},{z_derived / 1e3:.9g}\n"
        )


if __name__ == "__main__":
    main(float(sys.argv[1]) if len(sys.argv) > 1 else 10.7)
