"""Parabolic-cylinder local models at the three stationary points.

After rescaling xi = lam_s + tau/sqrt(4 t |48 gamma lam_s^2 - 1|), the jump
matrices near a saddle freeze to constants and the local Riemann-Hilbert
problem is solved exactly by Weber-equation functions.  For s = 1, 3 the
model has the asymptotics

    mhat(tau) = I + (1/tau) [[0, -i*beta], [-i*gamma_c, 0]] + O(tau^-2),

with

    beta    = -sqrt(2 pi) e^{-pi v/2} e^{+i pi/4} / (r1r * Gamma(-i v)),
    gamma_c = -sqrt(2 pi) e^{-pi v/2} e^{-i pi/4} / (r2r * Gamma(+i v)),

v = -(1/2 pi) Log(1 + r1r*r2r) (so beta*gamma_c = -v).  The matrix m with the
constant jump [[1+pq, -q], [-p, 1]] across the real line is assembled from
D_{iv} and D_{iv-1} at the rotated arguments tau*e^{-3 i pi/4} (upper) and
tau*e^{+i pi/4} (lower); the s = 2 model is the conjugate reflection
tau -> -conj(tau) of an s = 1 model built on the conjugated data.

Sector factors, jump matrices on the four rays, the Wronskian identities
recovering -r1r and -r2r, and the entry ODEs are all exercised by the test
suite; the conventions here are the unique self-consistent completion of the
set (the printed sources disagree among themselves in three signs).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from steplpd.kernels import complex_gamma, parabolic_cylinder_D
from steplpd.kernels.special import reciprocal_gamma
from steplpd.phase import PhaseGeometry
from steplpd.rhfactors import SaddleExponents

_SQRT2PI = np.sqrt(2.0 * np.pi)


class PhiMode(Enum):
    TAYLOR_CONSISTENT = "consistent"
    PAPER_FAITHFUL = "paper"


@dataclass(frozen=True)
class LocalModelData:
    """Frozen inputs of one saddle's local model."""

    s: int
    v: complex
    r1r: complex
    r2r: complex
    chi: complex = 0.0 + 0.0j
    curvature: float = 1.0
    phi_mode: PhiMode = PhiMode.TAYLOR_CONSISTENT

    @property
    def beta(self) -> complex:
        return pc_coefficients(self.s, self.r1r, self.r2r, self.v)[0]

    @property
    def gamma_coef(self) -> complex:
        return pc_coefficients(self.s, self.r1r, self.r2r, self.v)[1]


def model_order(r1r: complex, r2r: complex) -> complex:
    """v = -(1/2 pi) Log(1 + r1r r2r), principal branch."""
    return -np.log(1.0 + complex(r1r) * complex(r2r)) / (2.0 * np.pi)


def local_model_data(s: int, exponents: SaddleExponents,
                     data, geometry: PhaseGeometry,
                     phi_mode: PhiMode = PhiMode.TAYLOR_CONSISTENT) -> LocalModelData:
    """Assemble a saddle's model data from scattering data and exponents."""
    from steplpd.rhfactors import regularized_reflections

    lam = geometry.lam(s)
    r1r, r2r = regularized_reflections(data, lam)
    return LocalModelData(s=s, v=exponents.v[s - 1], r1r=r1r, r2r=r2r,
                          chi=exponents.chi0(s), curvature=geometry.curvature(s),
                          phi_mode=phi_mode)


# ---------------------------------------------------------------------------
# scaling maps and the local phase
# ---------------------------------------------------------------------------

def _scale_factor(s: int, geometry: PhaseGeometry, t: float) -> float:
    """sqrt(4 t (48 gamma lam_s^2 - 1)) with the sign pattern of the regime."""
    if t <= 0:
        raise ValueError("the scaling map needs t > 0")
    c = geometry.curvature(s)
    rad = 4.0 * t * (c if s in (1, 3) else -c)
    if rad <= 0:
        raise ValueError(f"negative radicand at saddle {s}: wrong regime")
    return float(np.sqrt(rad))


def scaling_map(s: int, geometry: PhaseGeometry, t: float, tau: complex) -> complex:
    """xi(tau) = lam_s + tau / sqrt(4 t |48 gamma lam_s^2 - 1|)."""
    return geometry.lam(s) + complex(tau) / _scale_factor(s, geometry, t)


def scaling_map_inverse(s: int, geometry: PhaseGeometry, t: float, xi: complex) -> complex:
    return (complex(xi) - geometry.lam(s)) * _scale_factor(s, geometry, t)


def saddle_sign(s: int) -> int:
    """sigma_s: +1 at the outer saddles, -1 at the middle one."""
    return +1 if s in (1, 3) else -1


def local_phase_phi(s: int, geometry: PhaseGeometry, t: float, tau: complex,
                    mode: PhiMode = PhiMode.TAYLOR_CONSISTENT) -> complex:
    """phi_s(mu, tau): the conjugation phase of the local model.

    TAYLOR_CONSISTENT returns i*t*theta(xi(tau)) - sigma_s*i*tau^2/4 computed
    from the exact quartic phase, so that exp(2 i t theta) =
    exp(2 phi) exp(sigma_s i tau^2/2) holds identically.  PAPER_FAITHFUL
    evaluates the printed quartic-in-tau expressions verbatim (kept for
    comparison; their tau^2/(4t .) and tau-linear terms are incompatible with
    a stationary-point expansion).
    """
    tau = complex(tau)
    lam = geometry.lam(s)
    c = geometry.curvature(s)
    cpos = c if s in (1, 3) else -c
    if mode is PhiMode.TAYLOR_CONSISTENT:
        xi = scaling_map(s, geometry, t, tau)
        return 1j * t * geometry.theta(xi) - saddle_sign(s) * 1j * tau**2 / 4.0
    gam = geometry.gamma
    return (-1j * gam * tau**4 / (2.0 * t * cpos**2)
            - 4j * gam * lam * tau**3 / np.sqrt(t * cpos**3)
            + 1j * tau**2 / (4.0 * t * cpos)
            - 1j * (16.0 * gam * lam**2 - t) * lam * tau / np.sqrt(t * cpos)
            - 4.0 * gam * lam**4 + 0.5 * lam**2)


def lambda_conjugator(s: int, exponents: SaddleExponents, geometry: PhaseGeometry,
                      t: float, tau: complex,
                      mode: PhiMode = PhiMode.TAYLOR_CONSISTENT,
                      t_free_base: bool = False) -> complex:
    """Scalar exponent eta_s with Lambda_s = exp(eta_s sigma3).

    eta_s = chi_s + phi_s(tau) + (i/2) * (power-factor logarithms); with
    t_free_base the 4t(...) bases lose their t (the split used by the
    leading-order coefficients, which carry the t-powers explicitly).
    """
    v1, v2, v3 = exponents.v
    c1, c2, c3 = geometry.curvatures
    c2p = -c2
    tt = 1.0 if t_free_base else t
    xi = scaling_map(s, geometry, t, tau)
    chi = exponents.chi(s, xi) if abs(tau) > 1e-12 else exponents.chi0(s)
    phi = local_phase_phi(s, geometry, t, tau, mode)
    if s == 1:
        power = 0.5j * v1 * np.log(c2p / (4.0 * tt * c1 * c3))
    elif s == 2:
        power = (-0.5j * v3 * np.log(1.0 / (4.0 * tt * c3))
                 - 0.5j * v2 * np.log(c2p / c1))
    elif s == 3:
        power = 0.5j * v3 * np.log(c2p / (4.0 * tt * c3 * c1))
    else:
        raise ValueError("saddle index must be 1, 2 or 3")
    return chi + phi + power


# ---------------------------------------------------------------------------
# the explicit Weber-function solution
# ---------------------------------------------------------------------------

def pc_coefficients(s: int, r1r: complex, r2r: complex,
                    v: complex) -> tuple[complex, complex]:
    """The 1/tau coefficients (beta, gamma_c) of the local model at saddle s.

    v = 0 returns (0, 0) exactly through the Gamma poles (1/Gamma(0) = 0
    beats any finite denominator).  The s = 2 saddle carries the
    conjugate-reflected convention (phases and Gamma arguments swapped),
    matching its reversed quadratic phase.
    """
    if v == 0:
        return 0.0 + 0.0j, 0.0 + 0.0j
    if s in (1, 3):
        beta = -_SQRT2PI * np.exp(-np.pi * v / 2.0) * np.exp(1j * np.pi / 4.0) \
            * reciprocal_gamma(-1j * v) / r1r
        gam = -_SQRT2PI * np.exp(-np.pi * v / 2.0) * np.exp(-1j * np.pi / 4.0) \
            * reciprocal_gamma(1j * v) / r2r
    elif s == 2:
        beta = -_SQRT2PI * np.exp(-np.pi * v / 2.0) * np.exp(-1j * np.pi / 4.0) \
            * reciprocal_gamma(1j * v) / r1r
        gam = -_SQRT2PI * np.exp(-np.pi * v / 2.0) * np.exp(1j * np.pi / 4.0) \
            * reciprocal_gamma(-1j * v) / r2r
    else:
        raise ValueError("saddle index must be 1, 2 or 3")
    return beta, gam


def _m_entries_s13(v: complex, r1r: complex, r2r: complex,
                   tau: complex, upper: bool) -> np.ndarray:
    """The entire solution m(tau) of dm/dtau = (-(i/2) tau sigma3 + B) m.

    ``upper`` selects the branch recessive in the upper half-plane.  The
    off-diagonal coefficients are written pole-free through Gamma(1 -+ i v),
    so v -> 0 collapses them smoothly.
    """
    tau = complex(tau)
    iv = 1j * v
    e = np.exp
    # i v / beta and i v / gamma_c without the Gamma poles:
    iv_over_beta = r1r * complex_gamma(1.0 - iv) * e(np.pi * v / 2.0) \
        * e(-1j * np.pi / 4.0) / _SQRT2PI
    iv_over_gamc = -r2r * complex_gamma(1.0 + iv) * e(np.pi * v / 2.0) \
        * e(1j * np.pi / 4.0) / _SQRT2PI
    if upper:
        z13, z24 = tau * e(-3j * np.pi / 4.0), tau * e(-1j * np.pi / 4.0)
        m11 = e(-3.0 * np.pi * v / 4.0) * parabolic_cylinder_D(iv, z13)
        m21 = iv_over_beta * e(-3.0 * np.pi * (v + 1j) / 4.0) \
            * parabolic_cylinder_D(iv - 1.0, z13)
        m12 = iv_over_gamc * e(np.pi * (v - 1j) / 4.0) \
            * parabolic_cylinder_D(-iv - 1.0, z24)
        m22 = e(np.pi * v / 4.0) * parabolic_cylinder_D(-iv, z24)
    else:
        z13, z24 = tau * e(1j * np.pi / 4.0), tau * e(3j * np.pi / 4.0)
        m11 = e(np.pi * v / 4.0) * parabolic_cylinder_D(iv, z13)
        m21 = iv_over_beta * e(np.pi * (v + 1j) / 4.0) \
            * parabolic_cylinder_D(iv - 1.0, z13)
        m12 = iv_over_gamc * e(-3.0 * np.pi * (v - 1j) / 4.0) \
            * parabolic_cylinder_D(-iv - 1.0, z24)
        m22 = e(-3.0 * np.pi * v / 4.0) * parabolic_cylinder_D(-iv, z24)
    return np.array([[m11, m12], [m21, m22]], dtype=complex)


def _sector_factor_s13(r1r: complex, r2r: complex, tau: complex) -> np.ndarray:
    """Piecewise unwinding factor P of mhat = m P tau^{-iv sigma3} e^{i tau^2 sigma3/4}."""
    opq = 1.0 + r1r * r2r
    a = np.angle(complex(tau))
    if 0 <= a < np.pi / 4.0:
        return np.array([[1.0, 0.0], [r1r, 1.0]], dtype=complex)
    if np.pi / 4.0 < a < 3.0 * np.pi / 4.0:
        return np.eye(2, dtype=complex)
    if 3.0 * np.pi / 4.0 < a <= np.pi:
        return np.array([[1.0, r2r / opq], [0.0, 1.0]], dtype=complex)
    if -np.pi / 4.0 < a < 0:
        return np.array([[1.0, -r2r], [0.0, 1.0]], dtype=complex)
    if -3.0 * np.pi / 4.0 < a < -np.pi / 4.0:
        return np.eye(2, dtype=complex)
    return np.array([[1.0, 0.0], [-r1r / opq, 1.0]], dtype=complex)


def m_matrix(s: int, model: LocalModelData, tau: complex) -> np.ndarray:
    """The constant-jump Weber solution m at the given saddle."""
    tau = complex(tau)
    if s in (1, 3):
        return _m_entries_s13(model.v, model.r1r, model.r2r, tau,
                              upper=tau.imag >= 0)
    inner = _m_entries_s13(np.conj(model.v), np.conj(model.r1r),
                           np.conj(model.r2r), -np.conj(tau),
                           upper=(-np.conj(tau)).imag >= 0)
    return np.conj(inner)


def _scaled_columns(v: complex, r1r: complex, r2r: complex, tau: complex,
                    upper: bool) -> tuple[np.ndarray, np.ndarray]:
    """(col1 * e^{+i tau^2/4}, col2 * e^{-i tau^2/4}) of m, overflow-free.

    The growth of m's columns sits entirely in e^{-+ i tau^2/4}; multiplying
    it away leaves the polynomially bounded combinations e^{z^2/4} D_a(z).
    """
    from steplpd.kernels.special import parabolic_cylinder_D_scaled as Ds

    tau = complex(tau)
    iv = 1j * v
    e = np.exp
    iv_over_beta = r1r * complex_gamma(1.0 - iv) * e(np.pi * v / 2.0) \
        * e(-1j * np.pi / 4.0) / _SQRT2PI
    iv_over_gamc = -r2r * complex_gamma(1.0 + iv) * e(np.pi * v / 2.0) \
        * e(1j * np.pi / 4.0) / _SQRT2PI
    if upper:
        z13, z24 = tau * e(-3j * np.pi / 4.0), tau * e(-1j * np.pi / 4.0)
        c11 = e(-3.0 * np.pi * v / 4.0) * Ds(iv, z13)
        c21 = iv_over_beta * e(-3.0 * np.pi * (v + 1j) / 4.0) * Ds(iv - 1.0, z13)
        c12 = iv_over_gamc * e(np.pi * (v - 1j) / 4.0) * Ds(-iv - 1.0, z24)
        c22 = e(np.pi * v / 4.0) * Ds(-iv, z24)
    else:
        z13, z24 = tau * e(1j * np.pi / 4.0), tau * e(3j * np.pi / 4.0)
        c11 = e(np.pi * v / 4.0) * Ds(iv, z13)
        c21 = iv_over_beta * e(np.pi * (v + 1j) / 4.0) * Ds(iv - 1.0, z13)
        c12 = iv_over_gamc * e(-3.0 * np.pi * (v - 1j) / 4.0) * Ds(-iv - 1.0, z24)
        c22 = e(-3.0 * np.pi * v / 4.0) * Ds(-iv, z24)
    return np.array([c11, c21], dtype=complex), np.array([c12, c22], dtype=complex)


def pc_model_matrix(s: int, model: LocalModelData, tau: complex,
                    side: int | None = None) -> np.ndarray:
    """mhat^pc(tau): identity-normalized local model solution.

    On the rays and the real axis the sector is ambiguous; ``side`` (+1/-1)
    nudges the argument by that sign times a tiny angle.  Assembled from
    exponentially scaled columns so that large |tau| stays finite.
    """
    tau = complex(tau)
    if tau == 0:
        raise ValueError("the model normalization is singular at tau = 0")
    a = np.angle(tau)
    on_boundary = any(abs(((a - b) + np.pi) % (2 * np.pi) - np.pi) < 1e-13
                      for b in (0.0, np.pi, np.pi / 4, 3 * np.pi / 4,
                                -np.pi / 4, -3 * np.pi / 4))
    if on_boundary:
        if side not in (-1, +1):
            raise ValueError("tau lies on the jump contour: side flag required")
        tau = tau * np.exp(1j * side * 1e-12)

    if s == 2:
        inner_model = LocalModelData(s=1, v=np.conj(model.v), r1r=np.conj(model.r1r),
                                     r2r=np.conj(model.r2r))
        inner = pc_model_matrix(1, inner_model, -np.conj(tau))
        return np.conj(inner)

    col1s, col2s = _scaled_columns(model.v, model.r1r, model.r2r, tau,
                                   upper=tau.imag >= 0)
    P = _sector_factor_s13(model.r1r, model.r2r, tau)
    tpm = tau ** (-1j * model.v)
    tpp = tau ** (1j * model.v)
    out = np.empty((2, 2), dtype=complex)
    if P[1, 0] != 0:      # lower-triangular mixing, |e^{i tau^2/2}| <= 1 here
        mix = P[1, 0] * np.exp(1j * tau**2 / 2.0)
        out[:, 0] = (col1s + mix * col2s) * tpm
        out[:, 1] = col2s * tpp
    elif P[0, 1] != 0:    # upper-triangular mixing, |e^{-i tau^2/2}| <= 1 here
        mix = P[0, 1] * np.exp(-1j * tau**2 / 2.0)
        out[:, 0] = col1s * tpm
        out[:, 1] = (col2s + mix * col1s) * tpp
    else:
        out[:, 0] = col1s * tpm
        out[:, 1] = col2s * tpp
    return out


def pc_jump_matrix(s: int, model: LocalModelData, tau: complex) -> np.ndarray:
    """The ray jump J^pc of the local model at the point tau.

    Orientation: the '+' side of every ray is the sector containing the
    imaginary axis, so mhat(axial sector) = mhat(real-adjacent sector) J^pc.
    """
    tau = complex(tau)
    p, q, v = model.r1r, model.r2r, model.v
    opq = 1.0 + p * q
    a = np.angle(tau)
    e2 = np.exp(1j * tau**2 / 2.0)
    em2 = np.exp(-1j * tau**2 / 2.0)
    tv = tau ** (2j * v)
    tvm = tau ** (-2j * v)
    if s in (1, 3):
        if abs(a - np.pi / 4) < 1e-9:
            return np.array([[1.0, 0.0], [-p * e2 * tvm, 1.0]], dtype=complex)
        if abs(a - 3 * np.pi / 4) < 1e-9:
            return np.array([[1.0, -(q / opq) * em2 * tv], [0.0, 1.0]], dtype=complex)
        if abs(a + np.pi / 4) < 1e-9:
            return np.array([[1.0, q * em2 * tv], [0.0, 1.0]], dtype=complex)
        if abs(a + 3 * np.pi / 4) < 1e-9:
            return np.array([[1.0, 0.0], [(p / opq) * e2 * tvm, 1.0]], dtype=complex)
        raise ValueError("tau is not on one of the four rays")
    # s = 2: conjugate reflection of the s = 1 picture
    inner_model = LocalModelData(s=1, v=np.conj(v), r1r=np.conj(p), r2r=np.conj(q))
    return np.conj(pc_jump_matrix(1, inner_model, -np.conj(tau)))


def xi_leading(s: int, model: LocalModelData, exponents: SaddleExponents,
               geometry: PhaseGeometry, t: float,
               mode: PhiMode = PhiMode.TAYLOR_CONSISTENT) -> np.ndarray:
    """The leading circle-residue matrix Xi_s (off-diagonal).

    Xi_s = -(i / 2 sqrt(c_s^+)) [[0, beta e^{2[chi+phi]} F^{i v}],
                                 [-gamma_c e^{-2[chi+phi]} F^{-i v}, 0]]
    with the printed F bases; xi_leading_r returns Xi_s^r = -Xi_s/sqrt(t).
    """
    beta, gamc = pc_coefficients(s, model.r1r, model.r2r, model.v)
    v1, v2, v3 = exponents.v
    c1, c2, c3 = geometry.curvatures
    c2p = -c2
    chi_phi = model.chi + local_phase_phi(s, geometry, t, 0.0, mode)
    e_plus = np.exp(2.0 * chi_phi)
    e_minus = np.exp(-2.0 * chi_phi)
    if s == 1:
        F = c2p / (4.0 * t * c1 * c3)
        up = beta * e_plus * F ** (1j * v1)
        dn = -gamc * e_minus * F ** (-1j * v1)
        pref = -0.5j / np.sqrt(c1)
    elif s == 2:
        F2 = 1.0 / (4.0 * t * c2p)
        Ft = (4.0 * t * c1) ** (1j * v2) * (1.0 / (4.0 * t * c3)) ** (-1j * v3)
        up = beta * e_plus * F2 ** (-1j * v2) / Ft
        dn = -gamc * e_minus * F2 ** (1j * v2) * Ft
        pref = -0.5j / np.sqrt(c2p)
    elif s == 3:
        F = c2p / (4.0 * t * c3 * c1)
        up = beta * e_plus * F ** (1j * v3)
        dn = -gamc * e_minus * F ** (-1j * v3)
        pref = -0.5j / np.sqrt(c3)
    else:
        raise ValueError("saddle index must be 1, 2 or 3")
    return pref * np.array([[0.0, up], [dn, 0.0]], dtype=complex)


def xi_leading_r(s: int, model: LocalModelData, exponents: SaddleExponents,
                 geometry: PhaseGeometry, t: float,
                 mode: PhiMode = PhiMode.TAYLOR_CONSISTENT) -> np.ndarray:
    """Xi_s^r = -Xi_s / sqrt(t), the form entering the defect-vector algebra."""
    return -xi_leading(s, model, exponents, geometry, t, mode) / np.sqrt(t)
