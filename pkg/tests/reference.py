"""Independent reference computations used as test oracles.

Everything in this module is deliberately brute force (direct summations,
dense stencils, closed-form solutions) and never calls into the package's
own transform or operator code.
"""

import numpy as np


def direct_dft(values, spacing):
    """O(N^2) forward transform: F_k = spacing * sum_n u_n exp(+2 pi i k n / N)."""
    values = np.asarray(values, dtype=complex)
    n = len(values)
    k = np.arange(n)
    kernel = np.exp(2j * np.pi * np.outer(k, k) / n)
    return spacing * kernel @ values


def direct_idft(values, spacing):
    """O(N^2) inverse: u_n = (1/(N spacing)) * sum_k F_k exp(-2 pi i k n / N)."""
    values = np.asarray(values, dtype=complex)
    n = len(values)
    k = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return kernel @ values / (n * spacing)


def dft_frequencies(n, spacing):
    """Signed angular DFT frequencies 2*pi*j/(N*spacing) in transform order."""
    j = np.empty(n, dtype=float)
    half = (n - 1) // 2
    j[: half + 1] = np.arange(half + 1)
    j[half + 1 :] = np.arange(half + 1 - n, 0)
    return j * (1.0 / (n * spacing)) * 2 * np.pi


def dispersing_gaussian(tau, zeta):
    """Closed-form solution of du/dz = (i/2) d^2u/dt^2 with u(t, 0) = exp(-t^2/2)."""
    sigma = 1.0 + 1j * zeta
    return np.exp(-(tau**2) / (2.0 * sigma)) / np.sqrt(sigma)


def circular_convolve(f, u, dt):
    """dt-weighted circular convolution (f o u)_l = dt * sum_j f_j u_{l-j}."""
    f = np.asarray(f, dtype=complex)
    u = np.asarray(u, dtype=complex)
    n = len(f)
    out = np.zeros(n, dtype=complex)
    for j in range(n):
        out += f[j] * np.roll(u, j)
    return dt * out


def central_diff_8(values, spacing):
    """8th-order central first derivative on a periodic 1D array."""
    c = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
    out = np.zeros_like(np.asarray(values, dtype=complex))
    for offset, coeff in zip(range(-4, 5), c):
        if coeff != 0:
            out += coeff * np.roll(values, -offset)
    return out / spacing


def series_apply_direct(coeffs, grid, values):
    """Term-by-term derivative-series application via O(N^2) transforms.

    Applies sum c_nj (d^n/dx^n + d^n/dy^n)(d/dt)^j using the derivative
    identity on each axis separately; the zeroth del power counts both
    transverse axes.
    """
    out = np.zeros_like(values, dtype=complex)
    for (n, j), c in coeffs.items():
        term = values
        if j > 0:
            term = np.stack(
                [
                    np.stack(
                        [
                            direct_idft(
                                (-1j * grid.w_axis) ** j * direct_dft(term[ix, iy], grid.dt),
                                grid.dt,
                            )
                            for iy in range(grid.ny)
                        ]
                    )
                    for ix in range(grid.nx)
                ]
            )
        if n == 0:
            trans = 2.0 * term
        else:
            dx_part = np.stack(
                [
                    np.stack(
                        [
                            direct_idft(
                                (-1j * grid.kx_axis) ** n * direct_dft(term[:, iy, it], grid.dx),
                                grid.dx,
                            )
                            for it in range(grid.nt)
                        ],
                        axis=-1,
                    )
                    for iy in range(grid.ny)
                ],
                axis=1,
            )
            dy_part = np.stack(
                [
                    np.stack(
                        [
                            direct_idft(
                                (-1j * grid.ky_axis) ** n * direct_dft(term[ix, :, it], grid.dy),
                                grid.dy,
                            )
                            for it in range(grid.nt)
                        ],
                        axis=-1,
                    )
                    for ix in range(grid.nx)
                ]
            )
            trans = dx_part + dy_part
        out += c * trans
    return out


def loglog_slope(steps, errors):
    return float(np.polyfit(np.log(np.asarray(steps)), np.log(np.asarray(errors)), 1)[0])


def rel_l2(got, expected):
    got = np.asarray(got)
    expected = np.asarray(expected)
    return float(np.linalg.norm(got - expected) / np.linalg.norm(expected))
