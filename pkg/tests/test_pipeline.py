import json
import logging
from fractions import Fraction

import pytest

from fdconvex import cli, pipeline
from fdconvex.multigraphs import Multigraph, enumerate_multigraphs
from fdconvex.pipeline import RunConfig, emit_report, observe_extremes, verify_degree
from fdconvex.reduction import scaling_factor
from reference_data import REFERENCE_BLOCKS, LAMBDA_MIN_BY_DEGREE


@pytest.fixture(scope="module")
def report4():
    return verify_degree(4, RunConfig(degree=4, dump_blocks=True))


def test_run_config_validation(monkeypatch):
    with pytest.raises(ValueError):
        RunConfig(degree=2)
    with pytest.raises(ValueError):
        RunConfig(degree=4, to_degree=3)
    with pytest.raises(ValueError):
        RunConfig(degree=4, jobs=0)
    with pytest.raises(ValueError):
        RunConfig(degree=4, fmt="xml")
    monkeypatch.setenv("COEFF_CACHE_MODE", "private")
    assert RunConfig(degree=3).cache_mode == "private"
    monkeypatch.setenv("COEFF_CACHE_MODE", "bogus")
    with pytest.raises(ValueError):
        RunConfig(degree=3)


def test_d3_report():
    r = verify_degree(3, RunConfig(degree=3))
    assert r.count == 1 and r.verdict == "CONVEX"
    assert abs(r.lambda_min - LAMBDA_MIN_BY_DEGREE[3]) < 1e-8
    assert "3 | 1 | 0.00357563" in emit_report(r, "text").splitlines()
    body = json.loads(emit_report(r, "json"))
    assert body["records"][0]["scalar"] == "1/24"
    assert set(body) >= {"degree", "count", "lambda_min", "verdict", "records"}
    assert set(body["records"][0]) >= {"edges", "k", "scalar", "b1_lambda_min", "b2_lambda_min",
                                       "b1_pivots", "b2_pivots", "verdict"}
    assert emit_report(r, "csv").splitlines() == ["d,multigraphs,lambda_min,verdict", "3,1,0.00357563,CONVEX"]


def test_dump_blocks_embed_reference_blocks(report4):
    body = json.loads(emit_report(report4, "json"))
    for rec in body["records"]:
        _, B1, B2, _, _ = REFERENCE_BLOCKS[rec["edges"]]
        assert rec["B1"] == B1.to_strings()
        assert rec["B2"] == B2.to_strings()
    assert "B1:" in emit_report(report4, "text")


def test_min_pivots_reported_both_ways(report4):
    assert report4.min_pivot == Fraction(17, 21232) == report4.min_pivot_blocks
    assert report4.lambda_min == report4.lambda_min_blocks


def test_observe_extremes(report4):
    obs = observe_extremes(report4)
    assert obs.argmin_edges == "1-2,3-4" and obs.argmin_is_matching
    assert obs.all_min_in_b1
    r3 = verify_degree(3, RunConfig(degree=3))
    assert observe_extremes(r3).argmin_is_matching


def test_observe_extremes_d5():
    r = verify_degree(5, RunConfig(degree=5))
    obs = observe_extremes(r)
    assert obs.argmin_edges == "1-2,3-4,5-6"
    best = next(rec for rec in r.records if rec.edges == obs.argmin_edges)
    assert abs(best.lambda_min - LAMBDA_MIN_BY_DEGREE[5]) < 1e-8


def test_parallel_and_cache_modes_are_byte_identical():
    base = emit_report(verify_degree(5, RunConfig(degree=5, cache_mode="shared")), "json")
    private = emit_report(verify_degree(5, RunConfig(degree=5, cache_mode="private")), "json")
    parallel = emit_report(verify_degree(5, RunConfig(degree=5, jobs=2, cache_mode="private")), "json")
    assert base == private == parallel


def test_cross_scaling_consistency():
    scaled = verify_degree(5, RunConfig(degree=5))
    plain = verify_degree(5, RunConfig(degree=5, scaled=False))
    assert scaled.verdict == plain.verdict
    for a, b in zip(scaled.records, plain.records):
        assert a.edges == b.edges and a.verdict == b.verdict
        f = scaling_factor(Multigraph.parse(a.edges))
        assert a.scalar == f * b.scalar
        assert a.b1_lambda_min == pytest.approx(f * b.b1_lambda_min, rel=1e-9)
        assert a.b2_lambda_min == pytest.approx(f * b.b2_lambda_min, rel=1e-9)


def test_certificates_written(tmp_path):
    verify_degree(4, RunConfig(degree=4, certificate_dir=tmp_path))
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["d4_1-2_1-2.json", "d4_1-2_1-3.json", "d4_1-2_3-4.json"]
    cert = json.loads((tmp_path / "d4_1-2_3-4.json").read_text())
    assert cert["scalar"] == "1/48" and cert["verdict"] == "PSD"
    assert all("/" in p for p in cert["b1_pivots"] + cert["b2_pivots"])


def test_not_proven_when_a_block_fails(monkeypatch):
    from fdconvex.matrices import RationalSymMatrix
    from fdconvex.reduction import ReductionBlocks, reduced_blocks

    def broken(g, scaled=True, cache=None):
        b = reduced_blocks(g, scaled, cache)
        return ReductionBlocks(b.k, b.B1, RationalSymMatrix([[-1]]), b.scalar, b.classes)

    monkeypatch.setattr(pipeline, "reduced_blocks", broken)
    r = verify_degree(3, RunConfig(degree=3))
    assert r.verdict == "NOT_PROVEN" and r.records[0].verdict == "NOT_PSD"


def test_large_degree_is_flagged(monkeypatch, caplog):
    monkeypatch.setattr(pipeline, "enumerate_multigraphs", lambda m: enumerate_multigraphs(m)[:1])
    with caplog.at_level(logging.WARNING):
        r = verify_degree(10, RunConfig(degree=10))
    assert "extended runtime expected" in caplog.text
    assert r.records[0].edges == ",".join(["1-2"] * 8)


def test_cli_verify_exit_codes(capsys, monkeypatch):
    assert cli.main(["verify", "--degree", "3", "--to", "4", "--format", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["d,multigraphs,lambda_min,verdict", "3,1,0.00357563,CONVEX", "4,3,0.00059703,CONVEX"]
    assert cli.main(["verify", "--degree", "2"]) == 1
    assert "degree must be >= 3" in capsys.readouterr().err

    bad = pipeline.MultigraphRecord("1-2", 2, Fraction(-1), 0.1, 0.1, (Fraction(1),), (Fraction(1),), pipeline.Verdict.PSD,
                                    pipeline.Verdict.PSD)
    monkeypatch.setattr(pipeline, "_task", lambda args: bad)
    assert cli.main(["verify", "--degree", "3"]) == 2


def test_cli_other_subcommands(capsys):
    assert cli.main(["enumerate", "--edges", "2"]) == 0
    assert capsys.readouterr().out.split() == ["3", "1-2,1-2", "1-2,1-3", "1-2,3-4"]
    assert cli.main(["enumerate", "--edges", "3", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 8

    assert cli.main(["orbit-count", "--k", "1", "--n", "6"]) == 0
    assert capsys.readouterr().out.split("\n")[:2] == ["formula: 9", "brute force: 9"]

    assert cli.main(["blocks", "--multigraph", "5-7,5-9", "--format", "json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["multigraph"] == "1-2,1-3" and body["scalar"] == "1/36"
    assert body["B2"] == REFERENCE_BLOCKS["1-2,1-3"][2].to_strings()

    assert cli.main(["hessian-check", "--degree", "3", "--n", "3", "--samples", "2", "--seed", "5"]) == 0
    first = capsys.readouterr().out
    cli.main(["hessian-check", "--degree", "3", "--n", "3", "--samples", "2", "--seed", "5"])
    assert capsys.readouterr().out == first
    assert first.count("sample") == 2
