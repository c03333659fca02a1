"""Tests for grid construction, bin integration, and state preparation."""

import math

import numpy as np
import pytest

from qwell import grid
from qwell.errors import ConfigurationError, InvalidStateError, ShapeError


@pytest.fixture
def paper_grid():
    return grid.make_grid(4, 0.5)


@pytest.fixture
def paper_well():
    return grid.WellSpec(100.0, 0.25)


class TestMakeGrid:
    def test_midpoint_formula(self, paper_grid):
        # x_k = -d + 2d(k + 1/2)/N
        k = np.arange(16)
        expected = -0.5 + (k + 0.5) / 16
        assert np.abs(paper_grid.x_points - expected).max() < 1e-15

    def test_symmetry_about_origin(self, paper_grid):
        assert np.abs(paper_grid.x_points + paper_grid.x_points[::-1]).max() < 1e-15

    def test_spacing(self, paper_grid):
        assert paper_grid.dx == pytest.approx(1 / 16, rel=1e-15)
        assert np.diff(paper_grid.x_points) == pytest.approx(paper_grid.dx)

    def test_rejects_bad_sizes(self):
        with pytest.raises(ConfigurationError):
            grid.make_grid(0, 0.5)
        with pytest.raises(ConfigurationError):
            grid.make_grid(25, 0.5)
        with pytest.raises(ConfigurationError):
            grid.make_grid(4, -1.0)


class TestWellSpec:
    def test_accepts_zero_depth(self):
        grid.WellSpec(0.0, 0.25)

    def test_rejects_negative_depth(self):
        with pytest.raises(ConfigurationError):
            grid.WellSpec(-5.0, 0.25)

    def test_rejects_nonpositive_width(self):
        with pytest.raises(ConfigurationError):
            grid.WellSpec(100.0, 0.0)


class TestPotentialOnGrid:
    def test_window_bins(self, paper_grid, paper_well):
        """Depth -V0 exactly on the middle eight bins for the default well."""
        v = grid.potential_on_grid(paper_grid, paper_well)
        assert np.array_equal(v[4:12], np.full(8, -100.0))
        assert np.array_equal(v[:4], np.zeros(4))
        assert np.array_equal(v[12:], np.zeros(4))

    def test_zero_depth_gives_zero(self, paper_grid):
        v = grid.potential_on_grid(paper_grid, grid.WellSpec(0.0, 0.25))
        assert np.array_equal(v, np.zeros(16))

    def test_wide_well_fills_grid(self, paper_grid):
        v = grid.potential_on_grid(paper_grid, grid.WellSpec(7.0, 0.49))
        assert np.array_equal(v, np.full(16, -7.0))


class TestAdaptiveSimpson:
    def test_polynomial(self):
        # Simpson is exact on cubics; the adaptive wrapper should agree
        val = grid.adaptive_simpson(lambda x: x ** 3 - x, 0.0, 2.0, 1e-12)
        assert val == pytest.approx(2.0, abs=1e-12)

    def test_gaussian_against_erf(self):
        val = grid.adaptive_simpson(lambda x: math.exp(-(x ** 2)), -1.0, 1.0, 1e-12)
        assert val == pytest.approx(math.sqrt(math.pi) * math.erf(1.0), abs=1e-10)

    def test_oscillatory(self):
        val = grid.adaptive_simpson(math.sin, 0.0, math.pi, 1e-12)
        assert val == pytest.approx(2.0, abs=1e-10)

    def test_reversed_limits_negate(self):
        a = grid.adaptive_simpson(lambda x: x, 0.0, 1.0, 1e-12)
        b = grid.adaptive_simpson(lambda x: x, 1.0, 0.0, 1e-12)
        assert a == pytest.approx(-b, abs=1e-13)


class TestBinProbability:
    def test_bins_partition_unit_mass(self, paper_grid):
        """Bin masses of a normalized density on the box sum to one."""
        norm = grid.adaptive_simpson(lambda x: math.exp(-20 * x * x), -0.5, 0.5, 1e-12)
        psi = lambda x: math.exp(-10 * x * x) / math.sqrt(norm)
        total = sum(grid.bin_probability(psi, paper_grid, k) for k in range(16))
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_uniform_density(self, paper_grid):
        p = grid.bin_probability(lambda x: 1.0, paper_grid, 7)
        assert p == pytest.approx(paper_grid.dx, abs=1e-12)


class TestPrepareAmplitudes:
    def test_trial_ground_normalized_and_even(self, paper_grid, paper_well):
        amps = grid.prepare_amplitudes(
            grid.WaveFunctionSpec("trial_ground"), paper_grid, paper_well
        )
        assert np.linalg.norm(amps) == pytest.approx(1.0, abs=1e-12)
        assert np.abs(amps - amps[::-1]).max() < 1e-12
        assert np.all(amps > 0)

    def test_trial_excited_odd(self, paper_grid, paper_well):
        amps = grid.prepare_amplitudes(
            grid.WaveFunctionSpec("trial_excited"), paper_grid, paper_well
        )
        assert np.linalg.norm(amps) == pytest.approx(1.0, abs=1e-12)
        assert np.abs(amps + amps[::-1]).max() < 1e-12
        assert amps[8] > 0 > amps[7]

    def test_exact_states_match_parity(self, paper_grid, paper_well):
        even = grid.prepare_amplitudes(
            grid.WaveFunctionSpec("exact_ground"), paper_grid, paper_well
        )
        odd = grid.prepare_amplitudes(
            grid.WaveFunctionSpec("exact_excited"), paper_grid, paper_well
        )
        assert np.abs(even - even[::-1]).max() < 1e-9
        assert np.abs(odd + odd[::-1]).max() < 1e-9

    def test_exact_ground_concentrated_in_well(self, paper_grid, paper_well):
        amps = grid.prepare_amplitudes(
            grid.WaveFunctionSpec("exact_ground"), paper_grid, paper_well
        )
        inside = float(np.sum(np.abs(amps[4:12]) ** 2))
        assert inside > 0.9

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigurationError):
            grid.WaveFunctionSpec("bogus")

    def test_custom_requires_table(self):
        with pytest.raises(ConfigurationError):
            grid.WaveFunctionSpec("custom")


def table_text(grid_spec, amps):
    lines = []
    for x, a in zip(grid_spec.x_points, amps):
        lines.append(f"{float(x)!r} {complex(a)!r}".replace("(", "").replace(")", ""))
    return "\n".join(lines)


class TestCustomTable:
    def test_round_trip(self, paper_grid):
        target = np.zeros(16, dtype=complex)
        target[3] = 0.6
        target[12] = 0.8j
        amps = grid.load_custom_table(table_text(paper_grid, target), paper_grid)
        assert np.abs(amps - target).max() < 1e-12

    def test_prepare_renormalizes(self, paper_grid):
        target = np.zeros(16, dtype=complex)
        target[0] = 2.0
        loaded = grid.load_custom_table(table_text(paper_grid, target), paper_grid)
        amps = grid.prepare_amplitudes(
            grid.WaveFunctionSpec("custom", loaded), paper_grid
        )
        assert np.linalg.norm(amps) == pytest.approx(1.0, abs=1e-12)
        assert amps[0] == pytest.approx(1.0)

    def test_wrong_length_rejected(self, paper_grid):
        with pytest.raises(ShapeError):
            grid.load_custom_table("0.03125 1.0\n", paper_grid)

    def test_zero_vector_rejected(self, paper_grid):
        loaded = grid.load_custom_table(
            table_text(paper_grid, np.zeros(16)), paper_grid
        )
        with pytest.raises(InvalidStateError):
            grid.prepare_amplitudes(
                grid.WaveFunctionSpec("custom", loaded), paper_grid
            )

    def test_bad_literal_rejected(self, paper_grid):
        bad = "\n".join(f"{x!r} apple" for x in paper_grid.x_points)
        with pytest.raises(InvalidStateError):
            grid.load_custom_table(bad, paper_grid)

    def test_mismatched_grid_rejected(self, paper_grid):
        target = np.ones(16)
        text = table_text(paper_grid, target).replace("0.03125", "0.11111", 1)
        with pytest.raises(InvalidStateError):
            grid.load_custom_table(text, paper_grid)
