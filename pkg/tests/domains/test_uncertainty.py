import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from valleyqubit.core.constants import BOUND_TOL
from valleyqubit.core.exceptions import DomainError
from valleyqubit.domains.qubit.models.qstate import DensityMatrix, pure_state, von_neumann_entropy
from valleyqubit.domains.qubit.schemas.results import ObservablePair
from valleyqubit.domains.qubit.services.tomography_service import reconstruct
from valleyqubit.domains.qubit.services.uncertainty_service import (
    coherence_bound,
    entropic_bound,
    entropic_uncertainty,
    maximal_overlap,
    relative_entropy_of_coherence,
    robertson_uncertainty,
    shannon_entropy_of_measurement,
    sweep_min_slack,
    uncertainty_report,
    uncertainty_sweep,
)
from valleyqubit.utils.validators import degrees_to_radians, parse_grid

EQUATOR = pure_state((math.pi / 2, 0.0))
SIXTY = pure_state((math.pi / 3, 0.0))
POLE = pure_state((0.0, 0.0))
MIXED = DensityMatrix.maximally_mixed()
QUARTER = ObservablePair(r_angle=0.0, q_angle=math.pi / 4)


def random_state(rng):
    r = rng.uniform(0.0, 1.0) ** (1.0 / 3.0)
    v = rng.normal(size=3)
    x, y, z = r * v / np.linalg.norm(v)
    return DensityMatrix.from_bloch(x, y, z)


class TestMeasurementEntropy:
    def test_eigenbasis(self):
        assert shannon_entropy_of_measurement(EQUATOR, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_unbiased_basis(self):
        assert shannon_entropy_of_measurement(EQUATOR, math.pi / 4) == pytest.approx(1.0, abs=1e-12)

    def test_sixty_degrees(self):
        assert shannon_entropy_of_measurement(SIXTY, 0.0) == pytest.approx(0.35458, abs=1e-5)


class TestEntropicBound:
    @pytest.mark.parametrize(
        "delta,expected",
        [(0.0, 0.0), (math.pi / 4, 1.0), (math.pi / 6, 0.41504), (math.pi / 2, 0.0), (3 * math.pi / 4, 1.0)],
    )
    def test_values(self, delta, expected):
        assert entropic_bound(ObservablePair(r_angle=0.0, q_angle=delta)) == pytest.approx(expected, abs=1e-5)

    @given(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
    def test_overlap_closed_form(self, r, q):
        pair = ObservablePair(r_angle=r, q_angle=q)
        delta = pair.delta
        assert maximal_overlap(pair) == pytest.approx(max(math.cos(delta) ** 2, math.sin(delta) ** 2), abs=1e-9)

    def test_saturation_on_r_eigenstate(self):
        total, bound = entropic_uncertainty(EQUATOR, QUARTER)
        assert total == pytest.approx(1.0, abs=1e-9)
        assert total - bound <= BOUND_TOL

    def test_pole_state(self):
        total, _ = entropic_uncertainty(POLE, ObservablePair(r_angle=0.3, q_angle=1.1))
        assert total == pytest.approx(2.0)

    def test_sixty_degrees(self):
        total, bound = entropic_uncertainty(SIXTY, QUARTER)
        assert total == pytest.approx(1.35458, abs=1e-5)
        assert bound == pytest.approx(1.0)


class TestRobertson:
    def test_saturation_at_sixty_degrees(self):
        product, bound = robertson_uncertainty(SIXTY, QUARTER)
        assert product == pytest.approx(0.5, abs=1e-9)
        assert bound == pytest.approx(0.5, abs=1e-9)

    @given(st.floats(0.0, math.pi))
    def test_equatorial_state_nulls_commutator(self, alpha):
        _, bound = robertson_uncertainty(EQUATOR, ObservablePair(q_angle=alpha))
        assert bound == pytest.approx(0.0, abs=1e-12)

    def test_pole_state_saturates(self):
        product, bound = robertson_uncertainty(POLE, QUARTER)
        assert product == pytest.approx(1.0)
        assert bound == pytest.approx(1.0)

    @given(st.floats(0.0, math.pi), st.floats(0.0, 6.28), st.floats(-3.0, 3.0))
    def test_commutator_closed_form(self, theta, phi, alpha):
        rho = pure_state((theta, phi))
        _, bound = robertson_uncertainty(rho, ObservablePair(q_angle=alpha))
        assert bound == pytest.approx(abs(math.sin(2 * alpha) * math.cos(theta)), abs=1e-9)


class TestCoherence:
    def test_unbiased_basis(self):
        assert relative_entropy_of_coherence(EQUATOR, math.pi / 4) == pytest.approx(1.0)

    def test_eigenbasis(self):
        assert relative_entropy_of_coherence(EQUATOR, 0.0) == pytest.approx(0.0, abs=1e-12)

    @given(st.floats(-3.0, 3.0))
    def test_maximally_mixed_has_none(self, alpha):
        assert relative_entropy_of_coherence(MIXED, alpha) == pytest.approx(0.0, abs=1e-12)

    def test_bound_equals_entropic_bound_on_pure_states(self):
        assert coherence_bound(SIXTY, QUARTER) == pytest.approx(entropic_bound(QUARTER), abs=1e-9)

    def test_bound_subtracts_state_entropy(self):
        rho = DensityMatrix.from_bloch(0.3, 0.0, 0.4)
        assert coherence_bound(rho, QUARTER) == pytest.approx(1.0 - von_neumann_entropy(rho))

    def test_doubled_entropy_form_fails_for_mixed_state(self):
        report = uncertainty_report(MIXED, QUARTER)
        assert report.coherence_sum == pytest.approx(0.0, abs=1e-12)
        assert report.coherence_sum < entropic_bound(QUARTER) + 2.0 * von_neumann_entropy(MIXED)
        assert report.coherence_slack >= -BOUND_TOL


class TestReports:
    def test_random_states_respect_all_bounds(self):
        rng = np.random.default_rng(1234)
        for _ in range(1000):
            rho = random_state(rng)
            pair = ObservablePair(r_angle=rng.uniform(0, math.pi), q_angle=rng.uniform(0, math.pi))
            report = uncertainty_report(rho, pair)
            assert report.entropic_slack >= -BOUND_TOL
            assert report.robertson_slack >= -BOUND_TOL
            assert report.coherence_slack >= -BOUND_TOL

    @hyp_settings(max_examples=100)
    @given(st.floats(0.0, math.pi), st.floats(0.0, 6.28), st.floats(0.0, 3.0), st.floats(0.0, 3.0))
    def test_shift_by_pi_symmetry(self, theta, phi, r, q):
        rho = pure_state((theta, phi))
        a = uncertainty_report(rho, ObservablePair(r_angle=r, q_angle=q))
        b = uncertainty_report(rho, ObservablePair(r_angle=r + math.pi, q_angle=q + math.pi))
        assert b.entropy_sum == pytest.approx(a.entropy_sum, abs=1e-9)
        assert b.deviation_product == pytest.approx(a.deviation_product, abs=1e-9)
        assert b.robertson_bound == pytest.approx(a.robertson_bound, abs=1e-9)
        assert b.coherence_bound == pytest.approx(a.coherence_bound, abs=1e-9)

    def test_report_alpha(self):
        assert uncertainty_report(SIXTY, QUARTER).alpha == math.pi / 4


class TestSweep:
    def test_equator_three_points(self):
        reports = uncertainty_sweep(EQUATOR, 0.0, [0.0, math.pi / 4, math.pi / 2])
        assert [r.entropy_sum for r in reports] == pytest.approx([0.0, 1.0, 0.0], abs=1e-9)
        assert [r.entropic_bound for r in reports] == pytest.approx([0.0, 1.0, 0.0], abs=1e-9)

    def test_maximally_mixed(self):
        reports = uncertainty_sweep(MIXED, 0.0, degrees_to_radians(parse_grid("0:180:30")))
        assert all(r.entropy_sum == pytest.approx(2.0) for r in reports)

    def test_min_slack_at_saturation(self):
        reports = uncertainty_sweep(EQUATOR, 0.0, degrees_to_radians(parse_grid("0:180:2.5")))
        assert len(reports) == 73
        slack, alpha = sweep_min_slack(reports)
        assert slack == pytest.approx(0.0, abs=1e-9)
        # every multiple of 45 degrees saturates; rounding picks among them
        assert math.remainder(math.degrees(alpha), 45.0) == pytest.approx(0.0, abs=1e-6)

    def test_reconstructed_state_stays_above_bound(self, make_scan):
        rho = reconstruct(make_scan(60), make_scan(90)).density_matrix()
        reports = uncertainty_sweep(rho, 0.0, degrees_to_radians(parse_grid("0:180:2.5")))
        assert len(reports) == 73
        assert all(r.entropic_slack >= -BOUND_TOL for r in reports)

    def test_empty_grid(self):
        with pytest.raises(DomainError):
            uncertainty_sweep(EQUATOR, 0.0, [])
