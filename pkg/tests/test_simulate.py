"""PDE residual checker and the short-time integrator."""

import numpy as np
import pytest

from steplpd.asymptotics import q_soliton
from steplpd.simulate import (
    FieldGrid,
    SolitonField,
    evolve,
    fd_weights,
    pde_residual,
    stable_dt,
)

GAMMA = 1.0 / 27.0


class TestFdWeights:
    def test_first_derivative_moments(self):
        w = fd_weights(np.arange(-4, 5), 1)
        assert abs(w.sum()) < 1e-12
        assert abs(np.dot(w, np.arange(-4, 5)) - 1.0) < 1e-12

    def test_reproduces_polynomial(self):
        offs = np.arange(-5, 6)
        w = fd_weights(offs, 4)
        h = 0.1
        x = offs * h
        vals = x**6
        d4 = np.dot(w, vals) / h**4
        assert abs(d4 - 360 * 0.0**2) < 1e-8   # (x^6)'''' = 360 x^2 at 0


class TestSolitonField:
    def test_derivative_consistency(self):
        f = SolitonField(1.3, 0.7, 0.08)
        h = 1e-5
        x, t = 0.4, 0.6
        fd1 = (f(x + h, t) - f(x - h, t)) / (2 * h)
        assert abs(fd1 - f.dx(x, t, 1)) < 1e-8
        fd2 = (f(x + h, t) - 2 * f(x, t) + f(x - h, t)) / h**2
        assert abs(fd2 - f.dx(x, t, 2)) < 5e-6   # roundoff floor eps/h^2
        h3 = 1e-3
        fd3 = (f(x + 2 * h3, t) - 2 * f(x + h3, t) + 2 * f(x - h3, t)
               - f(x - 2 * h3, t)) / (2 * h3**3)
        assert abs(fd3 - f.dx(x, t, 3)) < 1e-3
        fd4 = (f(x + 2 * h3, t) - 4 * f(x + h3, t) + 6 * f(x, t)
               - 4 * f(x - h3, t) + f(x - 2 * h3, t)) / h3**4
        assert abs(fd4 - f.dx(x, t, 4)) < 1e-2
        fdt = (f(x, t + h) - f(x, t - h)) / (2 * h)
        assert abs(fdt - f.dt(x, t)) < 1e-8


class TestResidual:
    def test_zero_field(self):
        zero = lambda x, t: 0.0 + 0.0j
        assert pde_residual(zero, 0.3, 0.2, 0.1) == 0

    @pytest.mark.parametrize("A,gam,al", [(2.0, 0.1, np.pi / 3), (1.0, GAMMA, 0.0)])
    def test_soliton_annihilates_analytic(self, A, gam, al):
        f = SolitonField(A, al, gam)
        rng = np.random.default_rng(2)
        for _ in range(20):
            x = float(rng.uniform(-2.5, 2.5))
            t = float(rng.uniform(0.05, 1.0))
            if abs(f(x, t)) > 3 * A:    # pole guard
                continue
            assert abs(pde_residual(f, x, t, gam, analytic=True)) < 1e-10

    def test_soliton_annihilates_fd(self):
        f = SolitonField(2.0, np.pi / 3, 0.1)
        assert abs(pde_residual(f, 0.7, 0.4, 0.1)) < 1e-6

    def test_term_isolation(self):
        # dropping the higher-order bracket leaves gamma * |H| > 0
        gam = 0.1
        f = SolitonField(2.0, np.pi / 3, gam)
        r_full = pde_residual(f, 0.7, 0.4, gam, analytic=True)
        r_nog = pde_residual(f, 0.7, 0.4, 0.0, analytic=True)
        assert abs(r_full) < 1e-10
        assert abs(r_nog) > 1e-2   # = gamma * |H[q]| at a generic point

    def test_h_convergence_order(self):
        # truncation-dominated window: log-log slope equals the stencil order
        f = SolitonField(2.0, np.pi / 3, 0.1)
        hs = np.array([0.22, 0.19, 0.16, 0.14, 0.12])
        res = np.array([abs(pde_residual(f, 0.7, 0.4, 0.1, hx=h, ht=h))
                        for h in hs])
        slope = np.polyfit(np.log(hs), np.log(res), 1)[0]
        assert abs(slope - 8.0) < 0.3


class TestFieldGrid:
    def test_symmetry_enforced(self):
        with pytest.raises(ValueError):
            FieldGrid(x=np.array([0.0, 1.0, 2.0]),
                      values=np.zeros(3, dtype=complex), h=1.0)

    def test_even_interval_count(self):
        with pytest.raises(ValueError):
            FieldGrid(x=np.array([-1.0, 0.0, 0.5, 1.0]),
                      values=np.zeros(4, dtype=complex), h=0.5)

    def test_from_function(self):
        g = FieldGrid.from_function(lambda x: complex(x), 2.0, 0.5)
        assert len(g.x) == 9
        assert g.x[0] == -2.0 and g.x[-1] == 2.0

    def test_mirror_conj(self):
        g = FieldGrid.from_function(lambda x: complex(x, 1.0), 1.0, 0.5)
        m = g.mirror_conj()
        assert m[1] == -np.conj(g.values[-2])

    def test_smoothed_step(self):
        g = FieldGrid.smoothed_step(2.0, 10.0, 0.05)
        assert abs(g.values[0]) < 1e-12
        assert abs(g.values[-1] - 2.0) < 1e-12


class TestEvolve:
    def test_zero_stays_zero(self):
        g = FieldGrid.from_function(lambda x: 0.0, 5.0, 0.05)
        out = evolve(g, 0.2, GAMMA)
        assert np.abs(out.values).max() == 0

    def test_soliton_oracle_coarse(self):
        A, gam, al = 1.0, GAMMA, np.pi
        g0 = FieldGrid.from_function(lambda x: q_soliton(x, 0.0, A, al, gam), 10.0, 0.05)
        g1 = evolve(g0, 0.1, gam)
        exact = np.array([q_soliton(float(x), 0.1, A, al, gam) for x in g1.x])
        assert np.abs(g1.values - exact).max() < 1e-3

    def test_time_reversal_round_trip(self):
        A, gam, al = 1.0, GAMMA, np.pi
        g0 = FieldGrid.from_function(lambda x: q_soliton(x, 0.0, A, al, gam), 10.0, 0.05)
        g1 = evolve(g0, 0.08, gam)
        g2 = evolve(g1, 0.0, gam)
        assert np.abs(g2.values - g0.values).max() < 1e-3
        assert g2.time == 0.0

    def test_far_field_conservation(self):
        A, gam, al = 2.0, GAMMA, np.pi
        g0 = FieldGrid.from_function(lambda x: q_soliton(x, 0.0, A, al, gam), 10.0, 0.05)
        g1 = evolve(g0, 0.5, gam)
        assert np.abs(g1.values[:4]).max() < 1e-8
        assert np.abs(g1.values[-4:] - g0.values[-1]).max() < 1e-6

    def test_step_profile_runs(self):
        g = FieldGrid.smoothed_step(1.0, 8.0, 0.05)
        out = evolve(g, 0.2, GAMMA)
        assert np.all(np.isfinite(out.values))
        assert np.abs(out.values).max() < 3.0

    def test_stable_dt_scale(self):
        g = FieldGrid.smoothed_step(2.0, 10.0, 0.02)
        dt = stable_dt(g, 0.1)
        assert 1e-6 < dt < 1e-4
