import json
import math

import numpy as np
import pytest

from oscillator_purity.config import RunConfig
from oscillator_purity.model import QuantumNumbers
from oscillator_purity.purity import Route
from oscillator_purity.sweep import AxisRange, SweepRequest, run_sweep, write_table

HEADER = "eta,theta,route,n1,n2,purity,linear_entropy,error_estimate"


@pytest.fixture
def config():
    return RunConfig(workers=2)


@pytest.mark.parametrize(
    ("low", "high", "steps"), [(0.0, 1.0, 1), (1.0, 1.0, 3), (2.0, 1.0, 5), (0, 1, 0)]
)
def test_axis_range_validation(low, high, steps):
    with pytest.raises(ValueError):
        AxisRange(low, high, steps)


def test_axis_range_values():
    axis = AxisRange(-1.0, 1.0, 5)
    assert axis.values() == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert axis.step == 0.5
    fixed = AxisRange(0.3, 0.3, 1)
    assert fixed.values() == [0.3]
    assert fixed.step == 0.0


def test_request_validation():
    axis = AxisRange(0.0, 1.0, 2)
    with pytest.raises(ValueError, match="format"):
        SweepRequest(axis, axis, format="xlsx")
    with pytest.raises(ValueError, match="route"):
        SweepRequest(axis, axis, routes=())
    with pytest.raises(ValueError):
        SweepRequest(axis, axis, routes=("taylor",))
    request = SweepRequest(axis, axis, routes=("appendix-a", Route.CLOSED_FORM))
    assert request.routes == (Route.APPENDIX_A, Route.CLOSED_FORM)
    assert len(request) == 8


def test_theta_endpoints_move_inward_only_where_needed():
    thetas = AxisRange(0.0, math.pi, 5)
    eta = AxisRange(0.5, 0.5, 1)
    coherent = SweepRequest(eta, thetas)
    assert coherent.thetas(Route.CLOSED_FORM) == thetas.values()
    assert coherent.thetas(Route.APPENDIX_A)[0] == pytest.approx(math.pi / 4)

    number = SweepRequest(eta, thetas, n=QuantumNumbers(0, 1))
    clipped = number.thetas(Route.CLOSED_FORM)
    assert clipped[0] == pytest.approx(math.pi / 4)
    assert clipped[-1] == pytest.approx(3 * math.pi / 4)
    assert clipped[1:-1] == thetas.values()[1:-1]


def test_default_output_name():
    request = SweepRequest(
        AxisRange(-4.0, 4.0, 81),
        AxisRange(0.5, 1.5, 3),
        n=QuantumNumbers(1, 1),
        format="json",
    )
    assert request.default_output_name() == "sweep_n11_etam4_4_theta0p5_1p5.json"


def test_coherent_sweep_at_half_angle(config):
    half = AxisRange(math.pi / 2, math.pi / 2, 1)
    request = SweepRequest(AxisRange(-4.0, 4.0, 81), half)
    table = run_sweep(request, config)
    assert len(table) == 81
    expected = 1 / np.cosh(table["eta"])
    assert np.allclose(table["purity"], expected, rtol=1e-12)
    assert np.allclose(table["linear_entropy"], 1 - expected, atol=1e-12)
    assert np.allclose(table["purity"], table["purity"][::-1].to_numpy(), rtol=1e-12)
    assert table["n1"].isna().all()


def test_decoupled_coherent_sweep_is_pure(config):
    request = SweepRequest(AxisRange(0.0, 0.0, 1), AxisRange(0.0, math.pi, 13))
    table = run_sweep(request, config)
    assert np.allclose(table["purity"], 1.0, atol=1e-12)
    assert table["theta"].iloc[0] == 0.0


def test_number_state_sweep_decays_and_approaches_one(config):
    request = SweepRequest(
        AxisRange(0.0, 3.0, 13),
        AxisRange(math.pi / 2, math.pi / 2, 1),
        n=QuantumNumbers(1, 1),
        routes=(Route.CLOSED_FORM, Route.APPENDIX_A),
    )
    table = run_sweep(request, config)
    for _, rows in table.groupby("route"):
        assert rows["purity"].iloc[0] == pytest.approx(0.5, abs=1e-12)
        assert np.all(np.diff(rows["purity"]) < 0)
    assert list(table["route"].unique()) == ["closed-form", "appendix-a"]

    edge = SweepRequest(
        AxisRange(1.0, 1.0, 1), AxisRange(0.0, 1e-3, 2), n=QuantumNumbers(0, 1)
    )
    limit = run_sweep(edge, config)
    assert limit["theta"].tolist() == [1e-3, 1e-3]
    assert limit["purity"].iloc[0] == pytest.approx(1, abs=1e-3)


def test_failed_points_are_reported(config):
    request = SweepRequest(
        AxisRange(0.0, 1.0, 2), AxisRange(1.0, 1.0, 1), n=QuantumNumbers(2, 0)
    )
    table = run_sweep(request, config)
    assert table["purity"].isna().all()
    assert table["error"].str.contains("No closed form").all()
    text = write_table(table, None)
    assert text.splitlines()[0] == HEADER + ",error"


def test_csv_output(tmp_path, config):
    request = SweepRequest(
        AxisRange(-1.0, 1.0, 3), AxisRange(0.5, 2.5, 3), n=QuantumNumbers(0, 1)
    )
    path = tmp_path / request.default_output_name()
    text = write_table(run_sweep(request, config), path)
    lines = text.splitlines()
    assert lines[0] == HEADER
    assert len(lines) == 10
    assert lines[1].startswith("-1,0.5,closed-form,0,1,")
    assert path.read_bytes() == text.encode()
    assert b"\r\n" not in path.read_bytes()


def test_sweeps_are_deterministic():
    request = SweepRequest(
        AxisRange(-2.0, 2.0, 9),
        AxisRange(0.2, 2.9, 7),
        n=QuantumNumbers(1, 1),
        routes=(Route.CLOSED_FORM, Route.GENERATING_FUNCTION),
    )
    first = write_table(run_sweep(request, RunConfig(workers=1)), None)
    second = write_table(run_sweep(request, RunConfig(workers=4)), None)
    assert first == second


def test_json_output(config):
    request = SweepRequest(
        AxisRange(0.0, 1.0, 2), AxisRange(1.0, 1.0, 1), format="json"
    )
    records = json.loads(write_table(run_sweep(request, config), None, "json"))
    assert len(records) == 2
    assert list(records[0]) == HEADER.split(",")
    assert records[0]["n1"] is None
    assert records[0]["purity"] == pytest.approx(1.0)
    assert isinstance(records[1]["purity"], float)


def test_write_table_rejects_unknown_format(config):
    table = run_sweep(SweepRequest(AxisRange(0, 1, 2), AxisRange(1, 2, 2)), config)
    with pytest.raises(ValueError, match="format"):
        write_table(table, None, "xml")
