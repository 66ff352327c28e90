import json

import numpy as np
import pytest

from melinlab.errors import MelinLabError
from melinlab.models import quartic_model
from melinlab.sweep import (
    CSV_HEADER,
    ModelSpec,
    SweepReport,
    emit_report,
    lambda_sweep,
    melin_phase_diagram,
    parse_report,
    quadratic_form_symbol,
    render_report,
)
from melinlab.symbols import GradedSymbol, PolynomialSymbol, eta, y


def quartic_spec(sub_coeff=1.0, sextic=0.0, lambdas=(16.0, 64.0, 256.0),
                 truncations=(16, 32)):
    return ModelSpec(quartic_model(sub_coeff=sub_coeff, sextic=sextic),
                     lambdas=list(lambdas), truncations=list(truncations))


def test_model_spec_validation():
    g = quartic_model()
    with pytest.raises(ValueError):
        ModelSpec(g, lambdas=[], truncations=[16, 32])
    with pytest.raises(ValueError):
        ModelSpec(g, lambdas=[0.5, 2.0], truncations=[16, 32])
    with pytest.raises(ValueError):
        ModelSpec(g, lambdas=[4.0, 4.0], truncations=[16, 32])
    with pytest.raises(ValueError):
        ModelSpec(g, lambdas=[4.0, 16.0], truncations=[])
    with pytest.raises(ValueError):
        ModelSpec(g, lambdas=[4.0, 16.0], truncations=[1, 2])
    with pytest.raises(ValueError):
        ModelSpec(g, lambdas=[4.0, 16.0], truncations=[16, 16])


def test_sweep_exact_quartic_scaling():
    # for the pure quartic model the rescaled eigenvalue is Lambda-free
    rep = lambda_sweep(quartic_spec())
    assert rep.verdict == "pass"
    assert rep.hypothesis_ok
    assert rep.k == 2
    assert rep.reference == pytest.approx(3.0, abs=1e-10)
    for row in rep.rows:
        assert row.scaled == pytest.approx(3.0, rel=1e-9)
        assert row.reference == rep.reference
    assert rep.slope == pytest.approx(-2.0, abs=1e-9)
    assert rep.reasons == []


def test_sweep_perturbed_quartic_converges_to_reference():
    rep = lambda_sweep(quartic_spec(sextic=0.5,
                                    lambdas=(64.0, 256.0, 1024.0, 4096.0)))
    assert rep.verdict == "pass"
    errs = [abs(r.scaled / rep.reference - 1.0) for r in rep.rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3
    assert rep.slope == pytest.approx(-2.0, abs=0.01)


def test_sweep_negative_control_fails_with_reasons():
    rep = lambda_sweep(quartic_spec(sub_coeff=-3.0))
    assert rep.verdict == "fail"
    assert not rep.hypothesis_ok
    assert rep.reference == pytest.approx(-1.0, abs=1e-10)
    assert rep.rows[-1].scaled == pytest.approx(-1.0, rel=1e-9)
    assert any(r.startswith("hypothesis failure") for r in rep.reasons)
    assert any("localized positivity" in r for r in rep.reasons)


def test_sweep_normalizes_overall_order():
    plain = lambda_sweep(quartic_spec())
    shifted = ModelSpec(
        GradedSymbol(1, 2, dict(quartic_model().levels), m=2),
        lambdas=[16.0, 64.0, 256.0], truncations=[16, 32],
    )
    rep = lambda_sweep(shifted)
    for a, b in zip(plain.rows, rep.rows):
        assert a.lambda_min == b.lambda_min
        assert a.scaled == b.scaled


def test_sweep_escalates_past_parity_plateau():
    # y^4 + eta^4 couples Fock levels four apart, so a (2, 3) ladder
    # plateaus; escalation must push through it
    g = GradedSymbol(1, 2, {0: y() ** 4 + eta() ** 4})
    rep = lambda_sweep(ModelSpec(g, lambdas=[16.0, 64.0], truncations=[2, 3]))
    assert rep.verdict == "pass"
    for row in rep.rows:
        assert row.n_used > 3
        assert row.scaled == pytest.approx(rep.reference, rel=1e-9)


def test_sweep_workers_do_not_change_results():
    spec = quartic_spec(sextic=0.25)
    a = lambda_sweep(spec, workers=1)
    b = lambda_sweep(spec, workers=3)
    assert a.to_json_dict() == b.to_json_dict()


def test_csv_rendering_is_fixed_format():
    rep = lambda_sweep(quartic_spec())
    data = render_report(rep, "csv")
    lines = data.split(b"\n")
    assert lines[0] == b"lambda,n_used,lambda_min,scaled,reference"
    assert lines[0].decode().split(",") == CSV_HEADER
    assert len(lines) == len(rep.rows) + 2 and lines[-1] == b""
    assert b"\r" not in data
    first = lines[1].decode().split(",")
    assert float(first[0]) == rep.rows[0].lam
    assert int(first[1]) == rep.rows[0].n_used
    assert float(first[2]) == rep.rows[0].lambda_min
    assert float(first[3]) == rep.rows[0].scaled
    assert float(first[4]) == rep.rows[0].reference


def test_render_rejects_unknown_format():
    rep = lambda_sweep(quartic_spec(lambdas=(4.0, 16.0)))
    with pytest.raises(MelinLabError):
        render_report(rep, "xml")


def test_json_report_round_trip():
    rep = lambda_sweep(quartic_spec(sub_coeff=-3.0))
    data = render_report(rep, "json")
    back = parse_report(data)
    assert back == rep
    parsed = json.loads(data)
    assert set(parsed["rows"][0]) == {"lambda", "n_used", "lambda_min",
                                      "scaled", "reference"}


def test_emit_report_is_byte_deterministic(tmp_path):
    spec = quartic_spec()
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_report(lambda_sweep(spec), "csv", str(p1))
    emit_report(lambda_sweep(spec, workers=2), "csv", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_quadratic_form_symbol():
    sym = quadratic_form_symbol(1.5, 0.25, 0.75)
    assert sym == (1.5 * y() ** 2 + 0.5 * (y() * eta()) + 0.75 * eta() ** 2)


def test_phase_diagram_small_grid():
    rep = melin_phase_diagram([1.0, 2.0], [0.0], [1.0], [-1.0, 0.0],
                              truncation=32)
    assert len(rep.points) == 4
    assert rep.skipped == []
    assert rep.max_error < 1e-9
    marginal = [p for p in rep.points if p.alpha == 1.0 and p.s == -1.0]
    assert len(marginal) == 1
    assert marginal[0].melin == pytest.approx(0.0, abs=1e-12)
    assert marginal[0].lambda_min == pytest.approx(0.0, abs=1e-10)


def test_phase_diagram_skips_indefinite_points():
    rep = melin_phase_diagram([1.0], [1.1], [1.0], [0.0], truncation=16)
    assert rep.points == []
    assert len(rep.skipped) == 1
    assert "indefinite" in rep.skipped[0]
    assert rep.max_error == 0.0


def test_phase_diagram_workers_and_json():
    a = melin_phase_diagram([1.0, 1.5], [0.0, 0.25], [1.0], [0.0],
                            truncation=24, workers=1)
    b = melin_phase_diagram([1.0, 1.5], [0.0, 0.25], [1.0], [0.0],
                            truncation=24, workers=3)
    assert a.to_json_dict() == b.to_json_dict()
    assert {"points", "skipped", "max_error"} == set(a.to_json_dict())
