import math

import numpy as np
import pytest

from rwa_lab.atoms import WeightScheme
from rwa_lab.dists import (
    Dist,
    arcsin,
    point_mass,
    power_dist,
    power_semicircle,
    semicircle,
    uniform,
)
from rwa_lab.errors import QuadratureAccuracyError, SupportDomainError
from rwa_lab.mc import Ecdf, RngState, sample_rwa
from rwa_lab.stieltjes import (
    closed_form_transform,
    eq31_residual,
    remark1_residual,
    theorem1_residual,
    transform_deriv,
    transform_term,
)

ZS = [2.0, 1.5 + 0.5j, 3.0j, -2.5]


class TestTransformDeriv:
    def test_arcsin_closed_value(self):
        got = transform_deriv(arcsin(), 2.0, 1)
        assert got == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-10)

    def test_semicircle_closed_value(self):
        got = transform_deriv(semicircle(), 2.0, 1)
        assert got == pytest.approx(2.0 * (2.0 - math.sqrt(3.0)), rel=1e-10)

    def test_total_mass_asymptotics(self):
        for d in (arcsin(), semicircle(), uniform(-1, 1), power_dist(2.0)):
            z = 1e6
            assert z * transform_deriv(d, z, 1) == pytest.approx(1.0, abs=1e-5)

    def test_point_mass_exact(self):
        got = transform_deriv(point_mass(0.0), 1.0, 2)
        assert got == pytest.approx(-1.0, rel=1e-12)  # d/dz 1/z = -1/z^2 at z=1

    def test_domain_guard(self):
        with pytest.raises(SupportDomainError):
            transform_deriv(arcsin(), 0.5, 1)
        with pytest.raises(SupportDomainError):
            transform_deriv(arcsin(), 1.0 + 1e-8, 1)

    def test_accuracy_error_carries_estimate(self):
        # a hostile quantile that adaptive quadrature cannot resolve
        wild = Dist(
            "wild",
            pdf=lambda x: x, cdf=lambda x: x,
            quantile=lambda u: np.sin(5e4 * np.asarray(u) ** 2) * np.sign(np.sin(3e5 * np.asarray(u))),
            sampler=lambda gen, size: gen.random(size),
            support=(-1.0, 1.0),
        )
        with pytest.raises(QuadratureAccuracyError) as exc:
            transform_term(wild, 1.5 + 0.1j, 2)
        assert exc.value.estimate is not None
        assert exc.value.achieved_error > 1e-10

    def test_herglotz_sign(self):
        for d in (arcsin(), semicircle(), power_semicircle(1.5), uniform(-1, 1), power_dist(0.5)):
            for z in (0.3 + 1.0j, -0.7 + 0.4j, 2.0 + 2.0j):
                assert transform_deriv(d, z, 1).imag < 0.0

    def test_conjugate_symmetry(self):
        for d in (arcsin(), semicircle(), uniform(-1, 1)):
            for m in (1, 2, 3):
                z = 1.2 + 0.9j
                a = transform_deriv(d, z, m)
                b = transform_deriv(d, np.conj(z), m)
                assert abs(np.conj(a) - b) < 1e-12

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_derivative_order_consistency(self, m):
        # 4th-order central difference of the (m-1) level reproduces level m
        d = semicircle()
        z0, h = 1.8 + 0.3j, 0.01
        fd = (8.0 * (transform_deriv(d, z0 + h, m - 1) - transform_deriv(d, z0 - h, m - 1))
              - (transform_deriv(d, z0 + 2 * h, m - 1) - transform_deriv(d, z0 - 2 * h, m - 1))) / (12.0 * h)
        exact = transform_deriv(d, z0, m)
        assert abs(fd - exact) / abs(exact) < 1e-6


class TestClosedForm:
    def test_matches_quadrature_on_grid(self):
        pts = [1.5 + 0.5j, -2.0 + 0.1j, 3.0j, 2.0, -2.5, 0.5 + 2.0j, -0.3 - 1.5j,
               4.0, 1.2 + 0.2j, -1.7 - 0.4j]
        for name, d in (("arcsin", arcsin()), ("semicircle", semicircle())):
            for z in pts:
                cf = closed_form_transform(name, z)
                qd = transform_deriv(d, z, 1)
                assert abs(cf - qd) < 1e-9 * max(1.0, abs(cf))

    def test_large_z_normalization(self):
        for name in ("arcsin", "semicircle"):
            z = 1e8
            assert z * closed_form_transform(name, z) == pytest.approx(1.0, abs=1e-6)

    def test_on_cut_raises(self):
        with pytest.raises(SupportDomainError):
            closed_form_transform("arcsin", 0.3)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            closed_form_transform("gauss", 2.0)

    def test_branch_below_axis(self):
        z = 2.0 - 0.5j
        assert abs(np.conj(closed_form_transform("arcsin", np.conj(z)))
                   - closed_form_transform("arcsin", z)) < 1e-14


class TestTheorem1:
    def test_two_arcsin_gives_uniform(self):
        rep = theorem1_residual(WeightScheme((1, 1)), [arcsin()] * 2, uniform(-1, 1), ZS)
        assert rep.max_rel < 1e-8

    def test_three_arcsin_gives_semicircle(self):
        rep = theorem1_residual(WeightScheme((1, 1, 1)), [arcsin()] * 3, semicircle(),
                                [1.5 + 0.5j])
        assert rep.max_rel < 1e-8

    def test_point_masses_trivial(self):
        rep = theorem1_residual(WeightScheme((1, 1)), [point_mass(0.0)] * 2,
                                point_mass(0.0), [1.0])
        assert rep.max_abs < 1e-12

    @pytest.mark.parametrize("scheme,margs,mix", [
        ((1, 1, 2), [arcsin()] * 3, semicircle()),
        ((1, 1, 1), [semicircle()] * 3, power_semicircle(2.5)),
        ((1, 1, 1), [semicircle(), semicircle(), arcsin()], power_semicircle(1.5)),
        ((3, 1, 1), [semicircle(), arcsin(), arcsin()], power_semicircle(1.5)),
    ])
    def test_characterization_identities(self, scheme, margs, mix):
        rep = theorem1_residual(WeightScheme(scheme), margs, mix, ZS)
        assert rep.max_rel < 1e-8

    def test_empirical_mixture_within_3se(self):
        scheme = WeightScheme((1, 2))
        samples = sample_rwa(scheme, [arcsin()] * 2, 200_000, RngState(42))
        rep = theorem1_residual(scheme, [arcsin()] * 2, samples, ZS)
        for p in rep.points:
            assert p.lhs_stderr is not None
            assert p.abs_residual <= 3.0 * p.lhs_stderr

    def test_report_json_schema(self):
        rep = theorem1_residual(WeightScheme((1, 1)), [arcsin()] * 2, uniform(-1, 1), [2.0])
        d = rep.to_json_dict()
        assert set(d) == {"identity", "points"}
        assert set(d["points"][0]) == {"z_re", "z_im", "lhs_re", "lhs_im",
                                       "rhs_re", "rhs_im", "abs_res", "rel_res"}


class TestRemark1:
    def test_first_order_van_assche(self):
        rep = remark1_residual(1, 1, arcsin(), arcsin(), uniform(-1, 1), [2.0])
        assert rep.max_rel < 1e-8
        # S'_uniform(2) = -1/3 balances -S_arcsin(2)^2
        assert abs(rep.points[0].lhs - (-1.0 / 3.0)) < 1e-10
        eq = eq31_residual(arcsin(), uniform(-1, 1), [2.0])
        assert abs(eq.points[0].lhs - 1.0 / 3.0) < 1e-10

    def test_point_mass_sign_convention(self):
        rep = remark1_residual(1, 1, point_mass(0.0), point_mass(0.0), point_mass(0.0), [1.0])
        p = rep.points[0]
        assert p.lhs == pytest.approx(-1.0, rel=1e-12)
        assert p.rhs == pytest.approx(-1.0, rel=1e-12)
        assert p.abs_residual < 1e-12

    def test_mixed_orders_analytic(self):
        # the (1,2)-cut mixture of a common marginal has the same law as the
        # (1,1) one, so the uniform closes the identity at n1=1, n2=2 too
        rep = remark1_residual(1, 2, arcsin(), arcsin(), uniform(-1, 1), ZS)
        assert rep.max_rel < 1e-8

    def test_mixed_orders_empirical(self):
        scheme = WeightScheme((1, 2))
        fz = Ecdf(sample_rwa(scheme, [arcsin()] * 2, 200_000, RngState(43)))
        rep = remark1_residual(1, 2, arcsin(), arcsin(), fz, [3.0])
        assert rep.max_rel < 1e-2

    def test_reduces_to_classical_first_order_identity(self):
        shared = [2.0, 1.5 + 0.5j, -3.0]
        a = remark1_residual(1, 1, arcsin(), arcsin(), uniform(-1, 1), shared)
        b = eq31_residual(arcsin(), uniform(-1, 1), shared)
        for pa, pb in zip(a.points, b.points):
            assert abs(pa.abs_residual - pb.abs_residual) <= 1e-12
            assert abs(pa.rel_residual - pb.rel_residual) <= 1e-12

    def test_invalid_orders(self):
        with pytest.raises(ValueError):
            remark1_residual(0, 1, arcsin(), arcsin(), uniform(-1, 1), [2.0])


class TestEmpiricalTransform:
    def test_se_shrinks_with_sample_size(self):
        gen = RngState(9).generator()
        small = transform_term(gen.uniform(-1, 1, 2_000), 2.0, 1)
        big = transform_term(RngState(9).generator().uniform(-1, 1, 200_000), 2.0, 1)
        assert big.stderr < small.stderr / 5.0

    def test_matches_quadrature(self):
        s = arcsin().sample(RngState(10), 400_000)
        emp = transform_term(s, 2.0, 1)
        exact = transform_deriv(arcsin(), 2.0, 1)
        assert abs(emp.value - exact) < 4.0 * emp.stderr

    def test_domain_guard_for_samples(self):
        with pytest.raises(SupportDomainError):
            transform_term(np.array([0.0, 1.0]), 1.0, 1)
