"""Displayed theta-matrices (basis beta), transcribed for comparison."""

import numpy as np

s2, s5, s6, s30 = np.sqrt(2), np.sqrt(5), np.sqrt(6), np.sqrt(30)
Z = [0, 0, 0, 0, 0, 0]


def _m(scale, rows):
    return scale * np.array(rows, dtype=float)


def theta_A_rt(r, t):
    return _m(1 / 3, [[0, 0, 0, 1, 0, 0], [0, 0, r + 2 * t, 0, 0, 0], [0, -r - 2 * t, 0, 0, 0, 0],
                      [1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, -r], [0, 0, 0, 0, r, 0]])


DISPLAYED = {
    ("mu_M2", "A"): _m(1 / 3, [[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, -1, 0], Z, [1, 0, 0, 0, 0, 0], [0, -1, 0, 0, 0, 0], Z]),
    ("mu_M2", "B"): _m(1 / 3, [[0, 0, 0, 0, 1, 0], [0, 0, 0, -1, 0, 0], [0, 0, 0, 0, 0, 1],
                               [0, -1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]),
    ("mu_M2", "C"): _m(1 / 3, [[0, 0, 0, 0, 0, 1], [0, 0, -1, 0, 0, 0], [0, 1, 0, 0, 1, 0],
                               [0, 0, 0, 0, 0, 1], [0, 0, 1, 0, 0, 0], [1, 0, 0, -1, 0, 0]]),
    ("mu_M3", "A"): _m(1 / 6, [[0, 0, 0, 2, 0, 0], Z, [0, 0, 0, s2, 0, 0], [2, 0, s2, 0, 0, 0], Z, Z]),
    ("mu_M3", "B"): _m(1 / 3, [[0, 0, 0, 0, 1, 0], Z, [0, 0, 0, 0, -s2, 0], Z, [1, 0, -s2, 0, 0, 0], Z]),
    ("mu_M3", "C"): _m(1 / 6, [[0, 0, 0, 0, 0, 2], Z, [0, 0, 0, 0, 0, s2], [0, 0, 0, 0, 0, s6], Z,
                               [2, 0, s2, -s6, 0, 0]]),
    ("mu_M1", "A"): _m(1 / 30, [[0, 0, 0, 10, 0, 0], [0, 0, 0, 0, -s30, 0], [0, 0, 0, 2 * s5, 0, 0],
                                [10, 0, 2 * s5, 0, 0, 0], [0, -s30, 0, 0, 0, 0], Z]),
    ("mu_M1", "B"): _m(1 / 30, [[0, 0, 0, 0, 10, 0], [0, 0, 6 * s5, -s30, 0, 0], [0, -6 * s5, 0, 0, -4 * s5, 0],
                                [0, -s30, 0, 0, s30, 0], [10, 0, -4 * s5, -s30, 0, 0], Z]),
    ("mu_M1", "C"): _m(1 / 15, [[0, 0, 0, 0, 0, 5], Z, [0, 0, 0, 0, 0, s5], [0, 0, 0, 0, 0, s30], Z,
                                [5, 0, s5, -s30, 0, 0]]),
    ("mu_B", "A"): _m(1 / 3, [[0, 0, 0, 1, 0, 0], Z, Z, [1, 0, 0, 0, 0, 0], Z, Z]),
    ("mu_B", "B"): _m(1 / 3, [[0, 0, 0, 0, 1, 0], Z, Z, [0, 0, 0, 0, 1, 0], [1, 0, 0, -1, 0, 0], Z]),
    ("mu_B", "C"): _m(1 / 3, [[0, 0, 0, 0, 0, 1], Z, Z, [0, 0, 0, 0, 0, 1], Z, [1, 0, 0, -1, 0, 0]]),
}
