#!/usr/bin/env python3
"""Accuracy ladder of the mixed-domain operator variants.

For each variant (commuting, third, fourth) the single-substep output is
compared against the dense matrix exponential of diag(c2 N) D_t over a
range of substep sizes; the printed slopes should approach 2, 3, and 4.

Usage: python scripts/alpha2_ladder.py [--nt 64] [--c2 -0.8]
"""

import argparse

import numpy as np

from ssfm3d import (
    Alpha2Order,
    EquationModel,
    apply_exp_alpha2,
    build_grid,
    dense_alpha2_expm,
    forward,
    make_field,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nt", type=int, default=64)
    parser.add_argument("--c2", type=float, default=-0.8)
    parser.add_argument("--dz", default="1e-2,5e-3,2.5e-3")
    args = parser.parse_args()

    grid = build_grid(1, 1, args.nt, 1.0, 1.0, 0.25, dzeta=1e-2, n_steps=1)
    tau = grid.t_axis
    u_line = np.exp(-(tau**2) / 2.0) * np.exp(-1j * tau)
    n_line = 2.0 * np.exp(-(tau**2) / 4.0)
    spectral = forward(make_field(grid, u_line[None, None, :]), ("t",))
    frozen = n_line[None, None, :].astype(complex)
    steps = sorted((float(s) for s in args.dz.split(",")), reverse=True)

    header = "variant    " + "".join(f"{f'dz={dz:g}':>14}" for dz in steps) + "   slope"
    print(header)
    for order in Alpha2Order:
        errs = []
        for dz in steps:
            ref = dense_alpha2_expm(n_line, args.c2, dz, u_line, grid.dt)
            model = EquationModel(
                c1=0.0,
                c2=args.c2,
                beta=lambda u, aux, g: np.zeros_like(u),
                alpha2_order=order,
            )
            out = apply_exp_alpha2(spectral, model, frozen, dz)
            errs.append(np.linalg.norm(out.values[0, 0] - ref) / np.linalg.norm(ref))
        slope = np.polyfit(np.log(steps), np.log(errs), 1)[0]
        row = f"{order.value:<10}" + "".join(f"{e:>14.3e}" for e in errs) + f"   {slope:.2f}"
        print(row)


if __name__ == "__main__":
    main()
