"""Hand-coded symbol lists and curvature displays for the planar examples.

``pi`` holds ``(P, P_1, P_2, P_11, P_22)``: the bivector component and its
first and pure second partials at the point.
"""

import math

import numpy as np


def christoffel_h2(pi):
    P, P1, P2, *_ = pi
    G = np.zeros((2, 2, 2))  # [k][i][j]
    G[0, 0, 1] = P1
    G[0, 1, 1] = -P2
    G[1, 0, 0] = P1
    G[1, 1, 0] = -P2
    return G


def christoffel_e2(pi):
    P, P1, P2, *_ = pi
    G = np.zeros((2, 2, 2))
    G[0, 0, 1] = P1
    G[0, 1, 1] = P2
    G[1, 0, 0] = -P1
    G[1, 1, 0] = -P2
    return G


def christoffel_s2(pi, theta):
    P, P1, P2, *_ = pi
    s, c = math.sin(theta), math.cos(theta)
    G = np.zeros((2, 2, 2))
    G[0, 0, 1] = P1
    G[0, 1, 1] = P2 / s**2
    G[1, 0, 0] = -(s**2) * P1
    G[1, 1, 0] = -P2
    G[1, 1, 1] = c / s * P
    return G


def sectional_h2(pi):
    P, P1, P2, P11, P22 = pi
    return P * (P11 - P22) - P1**2 + P2**2


def sectional_e2(pi):
    P, P1, P2, P11, P22 = pi
    return P1**2 + P2**2 - P * (P11 + P22)


def sectional_s2_printed(pi, theta):
    """The sphere display with the sign of its middle first-order term as printed."""
    P, P1, P2, P11, P22 = pi
    s = math.sin(theta)
    return P * (s**2 * P11 + P22 - math.sin(2 * theta) / 2 * P1) - (s**2 * P1**2 + P2**2)


def sectional_s2(pi, theta):
    """Same display with that term's sign flipped, which is what the connection yields."""
    P, P1, P2, P11, P22 = pi
    s = math.sin(theta)
    return P * (s**2 * P11 + P22 + math.sin(2 * theta) / 2 * P1) - (s**2 * P1**2 + P2**2)
