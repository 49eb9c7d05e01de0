#!/usr/bin/env python3
"""Decay-law experiment: fit the t-power of |q - background| along a ray.

Synthetic reflection data with prescribed Im v at the three saddles makes the
dominant exponent -1/2 + max of the per-saddle shifts; the fitted log-log
slope should match it.
"""

import argparse
import sys

import numpy as np

from steplpd.asymptotics import q_asymptotic
from steplpd.phase import stationary_points
from steplpd.scattering import SyntheticReflectionData


def build_data(A, gamma, mu, targets, width=0.35):
    geom = stationary_points(mu, gamma)
    lams = np.array(geom.lambdas)
    G = np.exp(-((lams[:, None] - lams[None, :]) / width) ** 2)
    coef = np.linalg.solve(G, np.asarray(targets, dtype=complex))

    def g(z):
        return np.sum(coef * np.exp(-((np.real(z) - lams) / width) ** 2))

    def r2(z):
        zr = np.real(z)
        return (0.1 + 3.0 * np.exp(-((zr - lams[0]) / width) ** 2)
                + 1.2 * np.exp(-((zr - lams[1]) / width) ** 2)
                + 0.6 * np.exp(-((zr - lams[2]) / width) ** 2))

    def r1(z):
        return (np.exp(-2 * np.pi * g(z)) - 1.0) / r2(z)

    return SyntheticReflectionData(A=A, gamma=gamma, r1=r1, r2=r2, xi1=A / 2)


def run(mu: float, im_v: tuple[float, float, float]) -> int:
    A, gamma = 2.0, 1.0 / 27.0
    data = build_data(A, gamma, mu, tuple(1j * v for v in im_v))
    res = q_asymptotic(mu * 100.0, 100.0, data)
    print(f"branch: {res.branch.value}")
    print("terms (Re exponent, |coef|):")
    for tm in sorted(res.leading_terms, key=lambda tm: -tm.exponent.real):
        print(f"  {tm.exponent.real:+.4f}   {abs(tm.coef):.4f}")
    ts = np.logspace(2, 6, 61)
    vals = np.array([abs(res.value(mu * t, t) - res.background) for t in ts])
    slope = np.polyfit(np.log(ts), np.log(vals), 1)[0]
    dominant = max(tm.exponent.real for tm in res.leading_terms)
    print(f"fitted slope {slope:+.4f} vs dominant exponent {dominant:+.4f} "
          f"(difference {abs(slope - dominant):.4f})")
    print(f"predicted error orders: {res.error_order[0]}, {res.error_order[1]}")
    return 0 if abs(slope - dominant) < 0.05 else 2


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mu", type=float, default=0.5)
    ap.add_argument("--im-v", type=float, nargs=3, default=[0.1, -0.05, 0.08])
    args = ap.parse_args()
    sys.exit(run(args.mu, tuple(args.im_v)))
