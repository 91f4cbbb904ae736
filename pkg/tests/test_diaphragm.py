import math

import numpy as np
import pytest

from conftest import BLEND_SEPARATION_HEAT, LN2, P_MINUS, P_PLUS
from qgas import linalg, spin
from qgas.diaphragm import classical_mix, classical_separate, mix, separate
from qgas.errors import (
    NotOrthogonalError,
    NotQuantumError,
    TemperatureMismatchError,
    UnknownSpeciesError,
)
from qgas.statistics import DensityMatrix, ProjectiveInstrument, mixture_eigen_instrument
from qgas.thermo import ClassicalContents, GasChamber, QuantumContents, contents_equal


def quantum_chamber(volume, mixture, particles=None, label="") -> GasChamber:
    contents = QuantumContents(tuple((w, DensityMatrix(m)) for w, m in mixture))
    n = particles if particles is not None else volume
    return GasChamber(volume, 1.0, n, contents, label)


def classical_chamber(volume, bag, particles=None, label="") -> GasChamber:
    n = particles if particles is not None else volume
    return GasChamber(volume, 1.0, n, ClassicalContents(tuple(bag)), label)


def z_instrument() -> ProjectiveInstrument:
    return ProjectiveInstrument((("up", spin.z_plus()), ("down", spin.z_minus())))


def alpha_instrument() -> ProjectiveInstrument:
    return ProjectiveInstrument(
        (("plus", spin.alpha_plus()), ("minus", spin.alpha_minus()))
    )


class TestSeparate:
    def test_distinguishable_blend_halves(self):
        parent = quantum_chamber(1.0, [(0.5, spin.z_plus()), (0.5, spin.z_minus())])
        result = separate(parent, z_instrument())
        assert len(result.chambers) == 2
        assert [c.volume for c in result.chambers] == [0.5, 0.5]
        assert [c.particles for c in result.chambers] == [0.5, 0.5]
        assert result.heat == pytest.approx(-LN2, abs=1e-12)

    def test_nondistinguishable_blend_eigenbasis(self):
        parent = quantum_chamber(1.0, [(0.5, spin.z_plus()), (0.5, spin.x_plus())])
        result = separate(parent, alpha_instrument())
        volumes = [c.volume for c in result.chambers]
        assert volumes[0] == pytest.approx(P_PLUS, abs=1e-12)
        assert volumes[1] == pytest.approx(P_MINUS, abs=1e-12)
        assert result.heat == pytest.approx(BLEND_SEPARATION_HEAT, abs=1e-12)
        assert result.heat == pytest.approx(-0.41650, abs=1e-5)
        plus_contents = result.chambers[0].contents
        assert contents_equal(
            plus_contents, QuantumContents(((1.0, DensityMatrix(spin.alpha_plus())),))
        )

    def test_pure_gas_passes_through(self):
        parent = quantum_chamber(1.0, [(1.0, spin.z_plus())])
        result = separate(parent, z_instrument())
        assert len(result.chambers) == 1
        assert result.chambers[0].volume == pytest.approx(1.0)
        assert result.heat == 0.0

    def test_conservation(self):
        rng = np.random.default_rng(37)
        from conftest import random_density

        for _ in range(25):
            rho = random_density(rng, 2)
            parent = GasChamber(
                0.8, 1.0, 0.6, QuantumContents(((1.0, rho),)), "parent"
            )
            result = separate(parent, alpha_instrument())
            assert sum(c.volume for c in result.chambers) == pytest.approx(0.8, abs=1e-12)
            assert sum(c.particles for c in result.chambers) == pytest.approx(0.6, abs=1e-12)

    def test_heat_matches_probability_formula(self):
        rng = np.random.default_rng(39)
        from conftest import random_density

        for _ in range(25):
            rho = random_density(rng, 2)
            parent = GasChamber(1.0, 1.0, 1.0, QuantumContents(((1.0, rho),)))
            result = separate(parent, z_instrument())
            expected = sum(
                o.probability * math.log(o.probability)
                for o in result.per_outcome
                if o.probability > 1e-12
            )
            assert result.heat == pytest.approx(expected, abs=1e-12)

    def test_requires_quantum(self):
        with pytest.raises(NotQuantumError):
            separate(classical_chamber(1.0, [(1.0, "argon")]), z_instrument())


class TestMix:
    def test_orthogonal_four_level_gases(self):
        upper = quantum_chamber(
            0.5, [(1.0, linalg.tensor(spin.z_plus(), spin.z_plus()))], label="upper"
        )
        lower = quantum_chamber(
            0.5, [(1.0, linalg.tensor(spin.x_plus(), spin.z_minus()))], label="lower"
        )
        merged, heat = mix([upper, lower], distinguishing=True)
        assert heat == pytest.approx(LN2, abs=1e-12)
        assert merged.volume == pytest.approx(1.0)
        assert merged.particles == pytest.approx(1.0)
        tau = linalg.make_hermitian(
            0.5 * linalg.tensor(spin.z_plus(), spin.z_plus()).entries
            + 0.5 * linalg.tensor(spin.x_plus(), spin.z_minus()).entries
        )
        assert contents_equal(merged.contents, QuantumContents(((1.0, DensityMatrix(tau)),)))

    def test_non_orthogonal_gases_rejected(self):
        upper = quantum_chamber(0.5, [(1.0, spin.z_plus())], label="upper")
        lower = quantum_chamber(0.5, [(1.0, spin.x_plus())], label="lower")
        with pytest.raises(NotOrthogonalError):
            mix([upper, lower], distinguishing=True)

    def test_free_mixing_extracts_nothing(self):
        upper = quantum_chamber(0.5, [(1.0, spin.z_plus())])
        lower = quantum_chamber(0.5, [(1.0, spin.x_plus())])
        merged, heat = mix([upper, lower], distinguishing=False)
        assert heat == 0.0
        assert merged.volume == pytest.approx(1.0)

    def test_single_chamber_is_noop(self):
        only = quantum_chamber(0.7, [(1.0, spin.z_plus())], label="only")
        merged, heat = mix([only], distinguishing=True)
        assert merged is only
        assert heat == 0.0

    def test_temperature_mismatch(self):
        a = quantum_chamber(0.5, [(1.0, spin.z_plus())])
        b = GasChamber(0.5, 2.0, 0.5, QuantumContents(((1.0, DensityMatrix(spin.z_minus())),)))
        with pytest.raises(TemperatureMismatchError):
            mix([a, b], distinguishing=True)

    def test_round_trip_is_heat_neutral(self):
        # Separating along the mixture's own eigenbasis and re-mixing with the
        # same diaphragms restores the chamber at zero net heat.
        z_plus = DensityMatrix(spin.z_plus())
        x_plus = DensityMatrix(spin.x_plus())
        _, instrument = mixture_eigen_instrument([0.5, 0.5], [z_plus, x_plus])
        parent = quantum_chamber(
            1.0, [(0.5, spin.z_plus()), (0.5, spin.x_plus())], label="parent"
        )
        result = separate(parent, instrument)
        merged, mixing_heat = mix(list(result.chambers), distinguishing=True, label="parent")
        assert merged.volume == pytest.approx(parent.volume, abs=1e-12)
        assert merged.particles == pytest.approx(parent.particles, abs=1e-12)
        assert contents_equal(merged.contents, parent.contents, tol=1e-9)
        assert result.heat + mixing_heat == pytest.approx(0.0, abs=1e-12)


class TestClassical:
    def test_separation_heat(self):
        parent = classical_chamber(
            1.0, [(0.5, "argon_a"), (0.5, "argon_b")], label="main"
        )
        result = classical_separate(
            parent, {"argon_a": "reflected", "argon_b": "transmitted"}
        )
        assert result.heat == pytest.approx(-LN2, abs=1e-12)
        assert {c.label for c in result.chambers} == {"main/transmitted", "main/reflected"}
        for c in result.chambers:
            assert c.volume == pytest.approx(0.5)
            assert len(c.contents.weight_map()) == 1

    def test_mixing_separated_species(self):
        a = classical_chamber(0.5, [(1.0, "argon_a")], label="upper")
        b = classical_chamber(0.5, [(1.0, "argon_b")], label="lower")
        merged, heat = classical_mix([a, b], distinguishing=True)
        assert heat == pytest.approx(LN2, abs=1e-12)
        assert merged.contents.weight_map() == pytest.approx(
            {"argon_a": 0.5, "argon_b": 0.5}
        )

    def test_single_species_chamber_unchanged(self):
        only = classical_chamber(1.0, [(1.0, "argon")], label="main")
        result = classical_separate(only, {"argon": "transmitted"})
        assert len(result.chambers) == 1
        assert result.chambers[0].volume == pytest.approx(1.0)
        assert result.heat == 0.0

    def test_unknown_species(self):
        parent = classical_chamber(1.0, [(0.5, "argon_a"), (0.5, "argon_b")])
        with pytest.raises(UnknownSpeciesError):
            classical_separate(parent, {"argon_a": "transmitted"})

    def test_mixing_same_species_cannot_distinguish(self):
        a = classical_chamber(0.5, [(1.0, "argon")], label="upper")
        b = classical_chamber(0.5, [(1.0, "argon")], label="lower")
        with pytest.raises(NotOrthogonalError):
            classical_mix([a, b], distinguishing=True)
        merged, heat = classical_mix([a, b], distinguishing=False)
        assert heat == 0.0
        assert merged.contents.weight_map() == pytest.approx({"argon": 1.0})
