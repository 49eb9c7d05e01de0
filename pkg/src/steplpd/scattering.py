"""Direct scattering for step-like profiles of the focusing nonlocal LPD flow.

The x-part of the Lax pair is phi_x = (-i*xi*sigma3 + Q) phi with the
nonlocal potential

    Q(x) = [[0, q0(x)], [-conj(q0(-x)), 0]],

so a profile that equals the pure step q0A (0 for x<0, A for x>0) outside
[-ell, ell] makes Q *exactly* equal to its limits Q-+ outside that window:
the mirrored entry couples the right tail of q0 to the left tail.  Jost
solutions are therefore seeded exactly,

    phi_-+(x) = L_-+(xi) exp(-i*xi*sigma3*x)   for -+x >= ell,

and carried to x = 0 by ODE integration; the scattering matrix is
S = phi_+(0)^(-1) phi_-(0) with entries a1, b, -conj(b(-conj(xi))), a2.

The discrete eigenvalue i*xi1 (zero of a1 in the upper half-plane) follows
from the trace formulas: a principal-value log integral of
1 - b(th)*conj(b(-th)) in case 1 (a2(0) != 0), and the quadratic closed form
built on F1, F2 in case 2 (a2(0) = 0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np

from steplpd.kernels import (
    ContourInterval,
    QuadratureSpec,
    ode_integrate,
    pv_integrate,
)
from steplpd.kernels.quadrature import DEFAULT_SPEC

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class CaseTag(Enum):
    CASE1 = 1   # a2 has no zero in the closed lower half-plane
    CASE2 = 2   # a2(0) = 0 with a2'(0) != 0 and lim xi*a1 != 0


class SingularNormalizationError(ZeroDivisionError):
    """Jost normalization matrices L+- blow up at xi = 0."""


class DegeneracyError(RuntimeError):
    """Neither case applies: a2(0) and a2'(0) both below threshold."""


class InconsistentDataError(RuntimeError):
    """Trace-formula xi1 and the actual zero of a1 disagree."""


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def _zero(x: float) -> complex:
    return 0.0 + 0.0j


@dataclass(frozen=True)
class InitialProfile:
    """Step of height A plus a compactly supported perturbation.

    q0(x) = perturbation(x) for x < 0 and A + perturbation(x) for x > 0;
    the perturbation must vanish (numerically) outside [-support, support].
    """

    A: float
    gamma: float
    perturbation: Callable[[float], complex] = _zero
    support: float = 0.0

    def __post_init__(self):
        if self.A <= 0:
            raise ValueError("step height A must be positive")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.support < 0:
            raise ValueError("support must be >= 0")
        for xp in (self.support + 0.5, self.support + 2.0):
            if abs(self.perturbation(xp)) > 1e-10 * (1 + self.A) or \
               abs(self.perturbation(-xp)) > 1e-10 * (1 + self.A):
                raise ValueError("perturbation does not vanish outside its support")

    @property
    def is_pure_step(self) -> bool:
        return self.support == 0.0

    def q0(self, x: float) -> complex:
        base = self.A if x > 0 else 0.0
        if abs(x) > self.support:
            return complex(base)
        return base + self.perturbation(x)

    def lax_q(self, x: float) -> np.ndarray:
        return np.array([[0.0, self.q0(x)],
                         [-np.conj(self.q0(-x)), 0.0]], dtype=complex)

    # -- construction from the JSON document used by the CLI ---------------

    @classmethod
    def pure_step(cls, A: float, gamma: float) -> "InitialProfile":
        return cls(A=A, gamma=gamma)

    @classmethod
    def gaussian_bump(cls, A: float, gamma: float, amplitude: complex,
                      center: float, width: float,
                      support: float | None = None) -> "InitialProfile":
        if support is None:
            support = abs(center) + 6.5 * width
        amp = complex(amplitude)

        def bump(x: float) -> complex:
            if abs(x) > support:
                return 0.0 + 0.0j
            return amp * np.exp(-((x - center) / width) ** 2)

        return cls(A=A, gamma=gamma, perturbation=bump, support=support)

    @classmethod
    def from_table(cls, A: float, gamma: float, xs, values) -> "InitialProfile":
        xs = np.asarray(xs, dtype=float)
        vals = np.asarray(values, dtype=complex)
        if xs.ndim != 1 or xs.shape != vals.shape or len(xs) < 2:
            raise ValueError("table perturbation needs matching 1-d x and value arrays")
        support = float(max(abs(xs[0]), abs(xs[-1])))

        def interp(x: float) -> complex:
            if x <= xs[0] or x >= xs[-1]:
                return 0.0 + 0.0j
            re = np.interp(x, xs, vals.real)
            im = np.interp(x, xs, vals.imag)
            return complex(re, im)

        return cls(A=A, gamma=gamma, perturbation=interp, support=support)

    @classmethod
    def from_dict(cls, doc: dict) -> "InitialProfile":
        A = float(doc["A"])
        gamma = float(doc["gamma"])
        pert = doc.get("perturbation", {"kind": "none"})
        kind = pert.get("kind", "none")
        if kind == "none":
            return cls.pure_step(A, gamma)
        if kind == "gaussian-bump":
            amp = pert["amplitude"]
            if isinstance(amp, (list, tuple)):
                amp = complex(amp[0], amp[1])
            return cls.gaussian_bump(A, gamma, amp, float(pert.get("center", 0.0)),
                                     float(pert["width"]),
                                     support=doc.get("support"))
        if kind == "table":
            xs = pert["x"]
            vals = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
                    for v in pert["values"]]
            return cls.from_table(A, gamma, xs, vals)
        raise ValueError(f"unknown perturbation kind {kind!r}")

    @classmethod
    def from_json(cls, path: str) -> "InitialProfile":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def normalization_matrices(A: float, xi: complex) -> tuple[np.ndarray, np.ndarray]:
    """L-(xi), L+(xi) diagonalizing the asymptotic Lax matrices."""
    if xi == 0:
        raise SingularNormalizationError("L+- are singular at xi = 0")
    r = A / (2j * xi)
    L_minus = np.array([[1.0, 0.0], [r, 1.0]], dtype=complex)
    L_plus = np.array([[1.0, r], [0.0, 1.0]], dtype=complex)
    return L_minus, L_plus


# ---------------------------------------------------------------------------
# Jost solutions
# ---------------------------------------------------------------------------

_JOST_SPEC = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12, max_depth=30)


def _propagate_column(profile: InitialProfile, xi: complex, col: np.ndarray,
                      x_from: float, scale_sign: int,
                      spec: QuadratureSpec) -> np.ndarray:
    """Integrate one Jost column from x_from to 0 in scaled variables.

    scale_sign=+1 propagates y = phi_col * exp(+i*xi*x) (exp(-i*xi*x)-type
    columns); scale_sign=-1 the other type.  Scaling keeps the seeds O(1)
    and removes the oscillatory stiffness of the free evolution.
    """
    if x_from == 0.0:
        return col.astype(complex)

    s = 1j * xi * scale_sign

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        q = profile.lax_q(x)
        m = np.array([[s - 1j * xi, q[0, 1]],
                      [q[1, 0], s + 1j * xi]], dtype=complex)
        return m @ y

    return ode_integrate(rhs, col, (x_from, 0.0), spec)


def jost_at_origin(profile: InitialProfile, xi: complex,
                   spec: QuadratureSpec = _JOST_SPEC) -> tuple[np.ndarray, np.ndarray]:
    """(phi_-(0,0,xi), phi_+(0,0,xi)) by exact seeding outside the support.

    For the pure step the seeds already live at x = 0 and no integration
    happens; S then reproduces the closed form exactly.
    """
    xi = complex(xi)
    L_minus, L_plus = normalization_matrices(profile.A, xi)
    ell = profile.support
    margin = 0.0 if ell == 0.0 else 1e-8 * (1.0 + ell)
    x_left = -(ell + margin)
    x_right = +(ell + margin)

    # phi_-: columns (exp(-i xi x), exp(+i xi x)) types seeded at x_left
    m1 = _propagate_column(profile, xi, L_minus[:, 0].copy(), x_left, +1, spec)
    m2 = _propagate_column(profile, xi, L_minus[:, 1].copy(), x_left, -1, spec)
    phi_minus = np.column_stack([m1, m2])

    p1 = _propagate_column(profile, xi, L_plus[:, 0].copy(), x_right, +1, spec)
    p2 = _propagate_column(profile, xi, L_plus[:, 1].copy(), x_right, -1, spec)
    phi_plus = np.column_stack([p1, p2])
    return phi_minus, phi_plus


def scattering_matrix(profile: InitialProfile, xi: complex,
                      spec: QuadratureSpec = _JOST_SPEC) -> np.ndarray:
    """S(xi) = phi_+(0,0,xi)^(-1) phi_-(0,0,xi) for real nonzero xi."""
    xi = complex(xi)
    if xi == 0:
        raise SingularNormalizationError("S(0) undefined: L+- singular")
    phi_minus, phi_plus = jost_at_origin(profile, xi, spec)
    return np.linalg.solve(phi_plus, phi_minus)


def _wronskian(u: np.ndarray, v: np.ndarray) -> complex:
    return u[0] * v[1] - u[1] * v[0]


# ---------------------------------------------------------------------------
# scattering data
# ---------------------------------------------------------------------------

@dataclass
class ScatteringData:
    """Evaluable scattering data of a step-like profile.

    a1 lives on the closed upper half-plane minus 0, a2 on the closed lower
    half-plane, b on the reals (all three continue meromorphically for the
    compact-perturbation class, which the callables exploit off the axis).
    kappa is the unimodular norming constant of the discrete eigenvalue; it
    is free data here (default 1).
    """

    A: float
    gamma: float
    a1: Callable[[complex], complex]
    a2: Callable[[complex], complex]
    b: Callable[[complex], complex]
    case_tag: CaseTag | None = None
    xi1: float | None = None
    a11: complex | None = None
    a2dot0: complex | None = None
    kappa: complex = 1.0 + 0.0j
    profile: InitialProfile | None = None
    label: str = "generic"

    def __post_init__(self):
        if abs(abs(self.kappa) - 1.0) > 1e-12:
            raise ValueError("norming constant kappa must be unimodular")

    # reflection coefficients --------------------------------------------

    def b_mirror(self, xi: complex) -> complex:
        """conj(b(-conj(xi))): the Schwarz-reflected partner entering r1."""
        return np.conj(self.b(-np.conj(xi)))

    def r1(self, xi: complex) -> complex:
        return self.b_mirror(xi) / self.a1(xi)

    def r2(self, xi: complex) -> complex:
        return self.b(xi) / self.a2(xi)

    def one_plus_r1r2(self, xi: complex) -> complex:
        return 1.0 + self.r1(xi) * self.r2(xi)

    def a1dot_at_pole(self, h_rel: float = 1e-5) -> complex:
        """da1/dxi at i*xi1 by a central difference along the imaginary axis."""
        if self.xi1 is None:
            raise ValueError("xi1 not located yet")
        h = h_rel * self.xi1
        up = self.a1(1j * (self.xi1 + h))
        dn = self.a1(1j * (self.xi1 - h))
        return (up - dn) / (2j * h)

    # constructors ---------------------------------------------------------

    @classmethod
    def pure_step(cls, A: float, gamma: float, kappa: complex = 1.0) -> "ScatteringData":
        """Closed forms: a1 = 1 + A^2/(4 xi^2), a2 = 1, b = iA/(2 xi)."""
        def a1(xi):
            return 1.0 + A * A / (4.0 * complex(xi) ** 2)

        def a2(xi):
            return 1.0 + 0.0j

        def b(xi):
            return 1j * A / (2.0 * complex(xi))

        return cls(A=A, gamma=gamma, a1=a1, a2=a2, b=b, case_tag=CaseTag.CASE1,
                   xi1=A / 2.0, kappa=kappa,
                   profile=InitialProfile.pure_step(A, gamma), label="pure-step")

    @classmethod
    def reflectionless(cls, A: float, gamma: float,
                       alpha: float = 0.0) -> "ScatteringData":
        """b == 0 case-2 data of the exact one-soliton, kappa = exp(i*alpha)."""
        def a1(xi):
            xi = complex(xi)
            return (xi - 0.5j * A) / xi

        def a2(xi):
            xi = complex(xi)
            return xi / (xi - 0.5j * A)

        def b(xi):
            return 0.0 + 0.0j

        return cls(A=A, gamma=gamma, a1=a1, a2=a2, b=b, case_tag=CaseTag.CASE2,
                   xi1=A / 2.0, a11=-0.5j * A, a2dot0=2j / A,
                   kappa=np.exp(1j * alpha), label="reflectionless")

    @classmethod
    def from_profile(cls, profile: InitialProfile, analyze: bool = True,
                     kappa: complex = 1.0) -> "ScatteringData":
        """Numerical scattering data; a1/a2 continue off the axis by the
        Wronskian representations, every evaluation one ODE sweep per column."""
        if profile.is_pure_step:
            data = cls.pure_step(profile.A, profile.gamma, kappa=kappa)
            return data

        @lru_cache(maxsize=50_000)
        def smatrix(xi: complex) -> tuple:
            return tuple(scattering_matrix(profile, xi).reshape(-1))

        @lru_cache(maxsize=50_000)
        def jost(xi: complex) -> tuple:
            pm, pp = jost_at_origin(profile, xi)
            return tuple(pm.reshape(-1)) + tuple(pp.reshape(-1))

        def a1(xi):
            xi = complex(xi)
            if xi.imag == 0.0:
                return smatrix(xi)[0]
            j = jost(xi)
            phi_m = np.array(j[:4]).reshape(2, 2)
            phi_p = np.array(j[4:]).reshape(2, 2)
            return _wronskian(phi_m[:, 0], phi_p[:, 1])

        def a2(xi):
            xi = complex(xi)
            if xi == 0:
                # seeds of the two clean columns are finite at xi = 0
                pm1 = _propagate_column(profile, 0.0, np.array([1.0, 0.0 + 0.0j]),
                                        profile.support + 1e-8, +1, _JOST_SPEC)
                pm2 = _propagate_column(profile, 0.0, np.array([0.0 + 0.0j, 1.0]),
                                        -(profile.support + 1e-8), -1, _JOST_SPEC)
                return _wronskian(pm1, pm2)
            if xi.imag == 0.0:
                return smatrix(xi)[3]
            j = jost(xi)
            phi_m = np.array(j[:4]).reshape(2, 2)
            phi_p = np.array(j[4:]).reshape(2, 2)
            return _wronskian(phi_p[:, 0], phi_m[:, 1])

        def b(xi):
            xi = complex(xi)
            if xi.imag == 0.0 and xi != 0:
                return smatrix(xi)[1]
            j = jost(xi)
            phi_m = np.array(j[:4]).reshape(2, 2)
            phi_p = np.array(j[4:]).reshape(2, 2)
            return _wronskian(phi_p[:, 0], phi_m[:, 0])

        data = cls(A=profile.A, gamma=profile.gamma, a1=a1, a2=a2, b=b,
                   kappa=kappa, profile=profile, label="profile")
        if analyze:
            data.case_tag = classify_case(data)
            data.xi1 = locate_xi1(data)
        return data

def soliton_profile(A: float, gamma: float, alpha: float = 0.0,
                    cutoff: float = 40.0) -> InitialProfile:
    """Initial profile of the exact one-soliton at t = 0 (for f1/f2 tests).

    Exponential tails are cut where they reach ~1e-17 of the step; alpha must
    stay away from 0 mod 2*pi or the profile has a pole at the origin.
    """
    ell = cutoff / A

    def pert(x: float) -> complex:
        if abs(x) > ell:
            return 0.0 + 0.0j
        q = A / (1.0 - np.exp(-A * x + 1j * alpha))
        return q - (A if x > 0 else 0.0)

    return InitialProfile(A=A, gamma=gamma, perturbation=pert, support=ell)


@dataclass(frozen=True)
class SyntheticReflectionData:
    """Minimal reflection-data stand-in for factor/asymptotics experiments.

    Carries just the surface the delta/exponent machinery consumes: r1, r2
    callables on the line plus step height and dispersion parameters.
    """

    A: float
    gamma: float
    r1: Callable[[complex], complex]
    r2: Callable[[complex], complex]
    xi1: float | None = None
    kappa: complex = 1.0 + 0.0j
    label: str = "synthetic"

    def one_plus_r1r2(self, xi: complex) -> complex:
        return 1.0 + self.r1(xi) * self.r2(xi)


def synthetic_from_v_targets(A: float, gamma: float, mu: float,
                             v_targets: tuple[complex, complex, complex],
                             width: float = 0.35,
                             r2_const: complex = 0.9) -> SyntheticReflectionData:
    """Reflection data whose saddle exponents hit prescribed v(lam_s).

    Writes 1 + r1 r2 = exp(-2 pi g) with g a sum of Gaussians centered at the
    saddles of the ray mu; the 3x3 cross-talk system is solved exactly so
    v(lam_s) = v_targets[s-1].  r2 is a nonvanishing constant and r1 carries
    the profile.
    """
    from steplpd.phase import stationary_points

    geometry = stationary_points(mu, gamma)
    lams = np.array(geometry.lambdas)
    G = np.exp(-((lams[:, None] - lams[None, :]) / width) ** 2)
    coef = np.linalg.solve(G, np.asarray(v_targets, dtype=complex))

    def g(z: complex) -> complex:
        return np.sum(coef * np.exp(-((complex(z).real - lams) / width) ** 2))

    def r1(z: complex) -> complex:
        return (np.exp(-2.0 * np.pi * g(z)) - 1.0) / r2_const

    def r2(z: complex) -> complex:
        return r2_const

    # a nominal discrete eigenvalue so the BP-regularized quantities exist
    return SyntheticReflectionData(A=A, gamma=gamma, r1=r1, r2=r2, xi1=A / 2.0)


def reflection_coefficients(data: ScatteringData, xi: float) -> tuple[complex, complex]:
    """(r1, r2) at real nonzero xi; denominator zeros raise."""
    xi = complex(xi)
    if xi == 0:
        raise ZeroDivisionError("reflection coefficients undefined at xi = 0")
    a1v, a2v = data.a1(xi), data.a2(xi)
    if a1v == 0 or a2v == 0:
        raise ZeroDivisionError("a1 or a2 vanishes at this xi")
    return data.b_mirror(xi) / a1v, data.b(xi) / a2v


def classify_case(data: ScatteringData, threshold_rel: float = 1e-6) -> CaseTag:
    """Case 1 iff |a2(0)| exceeds threshold_rel*(1+A); otherwise case 2,
    provided a2'(0) and lim xi*a1(xi) are healthy (else degenerate)."""
    thr = threshold_rel * (1.0 + data.A)
    a20 = data.a2(0.0)
    if abs(a20) > thr:
        data.case_tag = CaseTag.CASE1
        return CaseTag.CASE1

    h = 1e-5 * (1.0 + data.A)
    a2dot0 = (data.a2(h) - data.a2(-h)) / (2.0 * h)
    if abs(a2dot0) <= thr:
        raise DegeneracyError("both a2(0) and a2'(0) vanish: unsupported data")
    b0 = data.b(0.0)
    a11 = -data.A**2 * a2dot0 / 4.0 + 1j * data.A * np.real(b0)
    if abs(a11) <= thr:
        raise DegeneracyError("lim xi*a1(xi) vanishes: unsupported data")
    data.case_tag = CaseTag.CASE2
    data.a2dot0 = a2dot0
    data.a11 = a11
    return CaseTag.CASE2


_XI1_SPEC = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-10, max_depth=30)


def locate_xi1(data: ScatteringData, spec: QuadratureSpec = _XI1_SPEC,
               check_tol: float = 1e-6) -> float:
    """The positive xi1 with a1(i*xi1) = 0, from the trace formulas.

    Case 1:  xi1 = (A/2) exp{ -(1/2 pi i) pv int ln[ th^2/(th^2+1) *
             (1 - b(th) conj(b(-th))) ] / th dth }.
    Case 2:  xi1 = A (sqrt(Re b(0)^2 + F2^2) - Re b(0)) / (2 F1 F2) with
             F1 the exponentiated pv log integral of 1 - b conj(b(-.)) and
             F2 = sqrt(1 - |b(0)|^2).

    The value is cross-checked against a1 at i*xi1; disagreement raises.
    """
    if data.case_tag is None:
        classify_case(data)

    A = data.A
    line = ContourInterval(-np.inf, np.inf, decay_hint=1.0)

    def one_minus_bb(th: float) -> complex:
        return 1.0 - data.b(th) * np.conj(data.b(-th))

    if data.case_tag is CaseTag.CASE1:
        def integrand(th: float) -> complex:
            w = (th * th / (th * th + 1.0)) * one_minus_bb(th)
            return np.log(w) / th

        pv = pv_integrate(integrand, 0.0, line, spec)
        xi1 = (A / 2.0) * np.exp(-pv / (2j * np.pi))
    else:
        b0 = data.b(0.0)
        mod2 = abs(b0) ** 2
        if mod2 >= 1.0:
            raise InconsistentDataError("case 2 requires |b(0)| < 1")
        F2 = np.exp(0.5 * np.log(1.0 - mod2))
        if all(data.b(th) == 0 for th in (0.37, -1.91, 5.3)):
            F1 = 1.0 + 0.0j   # b == 0: the log integrand vanishes identically
        else:
            def integrand2(th: float) -> complex:
                return np.log(one_minus_bb(th)) / th

            F1 = np.exp(pv_integrate(integrand2, 0.0, line, spec) / (2j * np.pi))
        xi1 = A * (np.sqrt(np.real(b0) ** 2 + F2**2) - np.real(b0)) / (2.0 * F1 * F2)

    if abs(np.imag(xi1)) > 1e-8 * (1.0 + abs(xi1)):
        raise InconsistentDataError(f"xi1 came out non-real: {xi1}")
    xi1 = float(np.real(xi1))
    if xi1 <= 0:
        raise InconsistentDataError(f"xi1 must be positive, got {xi1}")

    scale = max(abs(data.a1(1j * xi1 * (1.0 + 1e-3))), 1e-6)
    if abs(data.a1(1j * xi1)) > check_tol * max(1.0, scale):
        raise InconsistentDataError(
            f"a1(i*xi1) = {data.a1(1j * xi1):.3e} does not vanish at xi1 = {xi1:.8g}")
    data.xi1 = xi1
    return xi1


# ---------------------------------------------------------------------------
# auxiliary functions f1, f2 (xi -> 0 structure of the eigenfunctions)
# ---------------------------------------------------------------------------

def auxiliary_f(profile: InitialProfile, x: float,
                spec: QuadratureSpec = _JOST_SPEC) -> tuple[complex, complex]:
    """(f1(x), f2(x)) at t = 0 from the coupled Volterra system

        f1' = q0(x) f2,    f2' = -conj(q0(-x)) f1,

    integrated forward from below the support with seed (0, A/(2i)).

    The f2-kernel is the mirrored-conjugate potential alone: adding the
    asymptotic offset A (the raw 21-entry of Q - Q_-) breaks both the b == 0
    closed form for f1 and the relation a2(0) = (4/A^2)(|f2(0)|^2-|f1(0)|^2),
    and makes f grow exponentially for x > 0.
    """
    A = profile.A
    seed = np.array([0.0, A / 2j], dtype=complex)
    x_start = -(profile.support + 1e-8 * (1 + profile.support))
    if x <= x_start:
        return complex(seed[0]), complex(seed[1])

    def rhs(y_x: float, y: np.ndarray) -> np.ndarray:
        return np.array([profile.q0(y_x) * y[1],
                         -np.conj(profile.q0(-y_x)) * y[0]], dtype=complex)

    out = ode_integrate(rhs, seed, (x_start, x), spec)
    return complex(out[0]), complex(out[1])
