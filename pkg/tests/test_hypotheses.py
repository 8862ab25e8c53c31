import numpy as np
import pytest

from aniso_levy.core.errors import InfeasibleError, InputError
from aniso_levy.numerics.hypotheses import (Inequality, TheoremKind, check_corollary_no_delta,
                                            check_corollary_presets, check_diagonal, check_general,
                                            check_z1_preset, check_z2_diagonal_preset, check_z2_preset,
                                            derive_lambda, kappa_diag, kappa_ge1, kappa_lt1)
from aniso_levy.numerics.levy_models import compute_anisotropy


class TestKappa:
    def test_ge1(self):
        assert kappa_ge1(1.5, 1.2, 1.0, 0.8) == pytest.approx(1.2)

    def test_ge1_diffusion_bound(self):
        assert kappa_ge1(2.0, 0.2, 0.1, 0.9) == pytest.approx(min(1.05, 0.5 + 0.1 / 2.0))

    def test_lt1(self):
        assert kappa_lt1(0.5, 0.5, 0.5) == pytest.approx(2.0)

    def test_lt1_domain(self):
        with pytest.raises(InputError):
            kappa_lt1(1.0, 0.5, 0.5)

    def test_diag_matches_general_when_uniform(self):
        value = kappa_diag(0, [1.5, 1.5], 1.2, None, 1.0, 0.8, 0.8)
        assert value == pytest.approx(kappa_ge1(1.5, 1.2, 1.0, 0.8))

    @pytest.mark.parametrize("beta,chi", [(1.2, 0.5), (0.5, 1.0), (0.5, 0.0)])
    def test_holder_domains(self, beta, chi):
        with pytest.raises(InputError):
            kappa_ge1(1.5, 1.2, beta, chi)


class TestGeneral:
    def test_z2_example_passes(self):
        report = check_z2_preset([1.2, 1.5], 1.0, 0.8)
        assert report.theorem == TheoremKind.Z2_LIMIT_GENERAL
        assert report.overall
        values = {item.name: item.lhs for item in report.inequalities}
        assert values["a.1"] == pytest.approx(2.0)
        assert values["a.2"] == pytest.approx(1.44)

    def test_small_alpha_fails(self):
        report = check_z1_preset(0.5, 0.0, 0.1)
        assert report.theorem == TheoremKind.GENERAL_LT1
        assert not report.overall

    def test_zero_drift_relaxes(self):
        with_drift = check_general([1.0], 1.5, 1.0, 0.1, 0.5)
        without = check_general([1.0], 1.5, 1.0, 0.1, 0.5, zero_drift=True)
        assert [i.name for i in with_drift.inequalities] == ["a.1", "a.2"]
        assert [i.name for i in without.inequalities] == ["a.2"]
        assert without.zero_drift

    def test_lt1_lists(self):
        full = check_general([0.9], 0.8, 0.5, 0.5, 0.5)
        relaxed = check_general([0.9], 0.8, 0.5, 0.5, 0.5, zero_drift=True)
        assert [i.name for i in full.inequalities] == ["b.1", "b.2", "b.3"]
        assert [i.name for i in relaxed.inequalities] == ["b.2", "b.3"]

    def test_strict_inequality(self):
        assert not Inequality("edge", 1.0, 1.0).satisfied
        assert Inequality("inside", 1.0 + 1e-6, 1.0).satisfied

    def test_no_delta_corollary(self):
        report = check_corollary_no_delta([1.5], 1.6, 1.0, 0.5)
        assert report.theorem == TheoremKind.COROLLARY_NO_DELTA
        assert report.overall

    def test_report_dict(self):
        data = check_z2_preset([1.2, 1.5], 1.0, 0.8).to_dict()
        assert data["overall"] is True
        assert data["theorem"] == "z2_limit_general"
        assert {"name", "lhs", "rhs", "margin", "satisfied"} <= set(data["inequalities"][0])


BETA_GRID = np.linspace(0.0, 1.0, 100)
CHI_GRID = np.linspace(0.01, 0.99, 100)


class TestStablePresetGrid:
    @pytest.mark.parametrize("alpha", [1.0, 1.2, 1.5, 1.9])
    def test_large_alpha_passes_for_positive_beta(self, alpha):
        failures = [(beta, chi) for beta in BETA_GRID[1:] for chi in CHI_GRID
                    if not check_z1_preset(alpha, float(beta), float(chi)).overall]
        assert failures == []

    @pytest.mark.parametrize("alpha", [1.2, 1.5, 1.9])
    def test_large_alpha_passes_at_zero_beta(self, alpha):
        report = check_z1_preset(alpha, 0.0, 0.5)
        assert report.overall
        assert report.notes == []

    def test_unit_alpha_zero_beta_is_boundary(self):
        report = check_z1_preset(1.0, 0.0, 0.5)
        assert not report.overall
        assert [i.name for i in report.inequalities if not i.satisfied] == ["a.1"]
        assert report.inequalities[0].lhs == 1.0
        assert len(report.notes) == 1
        assert report.to_dict()["notes"] == report.notes
        assert check_z1_preset(1.0, 0.0, 0.5, zero_drift=True).overall

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7, 0.9])
    def test_small_alpha_passes_iff_sum_exceeds_one(self, alpha):
        mismatches = []
        for beta in BETA_GRID:
            for chi in CHI_GRID:
                margin = alpha + min(beta, chi) - 1.0
                if abs(margin) < 1e-9:
                    continue
                if check_z1_preset(alpha, float(beta), float(chi)).overall != (margin > 0):
                    mismatches.append((beta, chi))
        assert mismatches == []



class TestDiagonal:
    def test_theorem_selection(self):
        ge1 = check_diagonal([1.5, 1.5], [1.6, 1.6], [1.4, 1.4], [1.0, 1.0], [0.5, 0.5])
        mixed = check_diagonal([1.5, 0.8], [1.6, 0.9], [0.5, 0.5], [1.0, 1.0], [0.5, 0.5])
        low = check_diagonal([0.8, 0.8], [0.9, 0.9], [0.5, 0.5], [1.0, 1.0], [0.5, 0.5])
        no_delta = check_diagonal([1.5, 1.5], [1.6, 1.6], None, [1.0, 1.0], [0.5, 0.5])
        assert ge1.theorem == TheoremKind.DIAGONAL_GE1
        assert mixed.theorem == TheoremKind.DIAGONAL_MIXED
        assert low.theorem == TheoremKind.DIAGONAL_LT1
        assert no_delta.theorem == TheoremKind.COROLLARY_NO_DELTA

    def test_per_component_names(self):
        report = check_diagonal([1.5, 0.8], [1.6, 0.9], [0.5, 0.5], [1.0, 1.0], [0.5, 0.5])
        names = [i.name for i in report.inequalities]
        assert names == ["b.0", "k0.a.1", "k0.a.2", "k1.b.1", "k1.b.2"]

    def test_z2_diagonal_preset(self):
        report = check_z2_diagonal_preset([1.2, 1.5], [1.0, 1.0], [0.8, 0.8])
        assert report.theorem == TheoremKind.Z2_LIMIT_DIAGONAL
        assert report.overall

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            check_diagonal([1.5, 1.5], [1.6], [1.4], [1.0, 1.0], [0.5, 0.5])


class TestCorollaries:
    def test_elliptic_ratio(self):
        assert check_corollary_presets("elliptic", [1.5, 1.5], 0.5).overall
        assert not check_corollary_presets("elliptic", [0.5, 1.5], 0.5).overall

    def test_elliptic_below_one(self):
        report = check_corollary_presets("elliptic", [0.8, 0.9], 0.5)
        assert [i.name for i in report.inequalities] == ["alpha_min"]
        assert report.overall

    def test_elliptic_diagonal(self):
        assert check_corollary_presets("elliptic-diagonal", [1.2, 1.8], [0.3, 0.3]).inequalities == []
        assert not check_corollary_presets("elliptic-diagonal", [0.4, 0.5], [0.5, 0.5]).overall

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            check_corollary_presets("parabolic", [1.5], 0.5)


class TestLambda:
    def test_isotropic_pair(self):
        plan = derive_lambda(compute_anisotropy([1.5, 1.5]), [1.5, 1.5], 1.2, 0.8, 1.2, 1.5)
        assert plan.eta == pytest.approx(2.0 / 9.0)
        assert plan.c == pytest.approx((1.0, 1.0))
        assert plan.lam == pytest.approx(2.0 / 9.0 * 0.2)

    def test_anisotropic_lambda_is_admissible(self):
        a = compute_anisotropy([1.0, 1.5])
        kappa = kappa_ge1(1.5, 1.0, 1.0, 0.9)
        plan = derive_lambda(a, [1.0, 1.5], kappa, 0.9, 1.0, 1.5)
        assert plan.lam > 0
        assert all(plan.lam / w < 1.0 for w in a.weights)

    def test_infeasible(self):
        with pytest.raises(InfeasibleError) as info:
            derive_lambda(compute_anisotropy([1.5, 1.5]), [1.5, 1.5], 0.5, 0.8, 1.2, 1.5)
        assert info.value.index == 0

    def test_explicit_c_outside_interval(self):
        with pytest.raises(InputError):
            derive_lambda(compute_anisotropy([1.5, 1.5]), [1.5, 1.5], 1.2, 0.8, 1.2, 1.5, c=[0.5])
