#!/usr/bin/env python3
"""Generate the singlet-fidelity surface of the maximally entangled family.

Writes a CSV of (a, theta, F, in_region_E, on_quarter_curve) and, with
--plot, renders a heat map with the F = 1/4 curve overlaid.
"""

import argparse

import numpy as np

from twoatom.cli import cmd_surface
from twoatom.closed_form import quarter_curve_theta


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid-a", type=int, default=201)
    ap.add_argument("--grid-theta", type=int, default=201)
    ap.add_argument("--out", default="fidelity_surface.csv")
    ap.add_argument("--plot", metavar="PNG", default=None,
                    help="also render a heat map to this file")
    args = ap.parse_args()

    code = cmd_surface(args.grid_a, args.grid_theta, args.out)
    if code != 0:
        return code
    print(f"wrote {args.out}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        data = np.genfromtxt(args.out, delimiter=",", skip_header=1,
                             usecols=(0, 1, 2))
        a = np.unique(data[:, 0])
        theta = np.unique(data[:, 1])
        fid = data[:, 2].reshape(len(a), len(theta))

        fig, ax = plt.subplots(figsize=(6, 4.5))
        mesh = ax.pcolormesh(a, theta, fid.T, shading="auto", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="singlet fidelity F")
        curve_a = np.linspace(0.0, np.sqrt(3.0) / 2.0, 200)
        curve_th = [quarter_curve_theta(x) for x in curve_a]
        ax.plot(curve_a, curve_th, "w:", lw=1.5, label="F = 1/4")
        ax.plot(curve_a, 2.0 * np.pi - np.array(curve_th), "w:", lw=1.5)
        ax.set_xlabel("a")
        ax.set_ylabel(r"$\theta_1-\theta_2$")
        ax.legend(loc="upper right")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
