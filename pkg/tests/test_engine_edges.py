"""Engine edge paths: bad chamber bookkeeping and guarded merges."""

import pytest

from qgas.errors import ExecutionError, IncompatibleReductionError
from qgas.observers import Observer, run_scenario
from qgas.protocol.interpreter import execute
from qgas.protocol.parser import parse

PRELUDE = (
    "HEADER dim=2 temperature=1.0 particles=1.0\n"
    "OBSERVER lab full\n"
    "DEFINE_STATE zp ket(1, 0)\n"
    "DEFINE_STATE zm ket(0, 1)\n"
    "DEFINE_STATE zs proj(zp)\n"
    "DEFINE_STATE ms proj(zm)\n"
)


def test_duplicate_chamber_position():
    text = PRELUDE + "CHAMBER main 0.5 zs\nCHAMBER main 0.5 ms\n"
    with pytest.raises(ExecutionError) as err:
        execute(parse(text))
    assert "already exists" in str(err.value)
    assert err.value.line == 8


def test_remove_partition_between_different_gases_refused():
    text = PRELUDE + (
        "CHAMBER upper 0.5 zs\n"
        "CHAMBER lower 0.5 ms\n"
        "REMOVE_PARTITION -> whole\n"
    )
    with pytest.raises(ExecutionError) as err:
        execute(parse(text))
    assert "irreversible" in str(err.value)
    assert err.value.line == 9


def test_rotate_unknown_unitary_dim():
    text = PRELUDE + (
        "CHAMBER main 1.0 zs\n"
        "ROTATE main tensor(rotate_to(zp, zm), identity(2))\n"
    )
    with pytest.raises(ExecutionError) as err:
        execute(parse(text))
    assert "dimension" in str(err.value)


def test_rotate_accepts_pure_state_endpoints():
    # rotate_to endpoints may be rank-1 states, not just kets.
    text = PRELUDE + (
        "CHAMBER main 1.0 zs\n"
        "ROTATE main rotate_to(zs, ms)\n"
    )
    report = execute(parse(text))
    final = report.result.final_chambers[0]
    from qgas import spin
    from qgas.statistics import DensityMatrix
    from qgas.thermo import QuantumContents, contents_equal

    assert contents_equal(
        final.contents, QuantumContents(((1.0, DensityMatrix(spin.z_minus())),))
    )


def test_rotate_rejects_mixed_state_endpoint():
    text = PRELUDE + (
        "DEFINE_STATE blend mix(0.5*zs + 0.5*ms)\n"
        "CHAMBER main 1.0 blend\n"
        "ROTATE main rotate_to(blend, zs)\n"
    )
    with pytest.raises(ExecutionError) as err:
        execute(parse(text))
    assert "pure" in str(err.value)


def test_wrong_instrument_dimension_reports_step_line():
    text = (
        "HEADER dim=4 temperature=1.0 particles=1.0\n"
        "OBSERVER lab full\n"
        "DEFINE_STATE zp ket(1, 0)\n"
        "DEFINE_STATE zm ket(0, 1)\n"
        "DEFINE_STATE zz proj(tensor(zp, zp))\n"
        "DEFINE_INSTRUMENT small a=proj(zp) b=proj(zm)\n"
        "CHAMBER main 1.0 zz\n"
        "SEPARATE small\n"
    )
    with pytest.raises(ExecutionError) as err:
        execute(parse(text))
    assert err.value.line == 8


def test_quantum_observer_on_classical_scenario_rejected():
    text = (
        "HEADER classical temperature=1.0 particles=1.0\n"
        "CLASSICAL_CHAMBER main 1.0 argon=1\n"
    )
    with pytest.raises(IncompatibleReductionError):
        run_scenario(parse(text), observers=[Observer.quantum("lab")])


def test_expect_verdict_for_absent_observer_fails_cleanly():
    text = PRELUDE + (
        "CHAMBER main 1.0 zs\n"
        "CLAIM_CYCLE\n"
        "EXPECT verdict lab satisfied\n"
    )
    report = execute(parse(text), observers=[Observer.quantum("someone_else")])
    assert not report.all_expectations_passed
    assert report.expectations[0].observed == "observer absent from this run"


def test_mix_unknown_position_lists_available():
    text = PRELUDE + (
        "CHAMBER upper 0.5 zs\n"
        "CHAMBER lower 0.5 ms\n"
        "MIX distinguishing upper missing -> whole\n"
    )
    with pytest.raises(ExecutionError) as err:
        execute(parse(text))
    assert "missing" in str(err.value)
    assert "lower" in str(err.value)
