import json
from fractions import Fraction

import pytest

from congestds.cds import is_dominating
from congestds.errors import DomainError, PreconditionError
from congestds.generators import complete, generate_graph, petersen
from congestds.graph import Graph
from congestds.oracles import brute_force_mds
from congestds.pipeline import (
    PipelineParams,
    run_cds,
    run_mds_delta,
    run_mds_n,
)
from congestds.values import ln_upper


class TestParams:
    def test_schedule(self):
        g = petersen()
        p = PipelineParams.from_graph(g, Fraction(1, 2))
        assert p.eps1 == Fraction(1, 32)
        assert p.rho == 3  # ceil(log2(3 / 0.5))
        assert p.eps2 == p.eps1 / (100 * p.rho)
        assert p.delta_tilde == 4
        assert p.F >= 256 * 32**3  # eps1^-3 factor dominates

    def test_eps_range(self):
        g = complete(3)
        with pytest.raises(DomainError):
            PipelineParams.from_graph(g, 0)
        with pytest.raises(DomainError):
            PipelineParams.from_graph(g, 2)


@pytest.mark.parametrize("runner", [run_mds_n, run_mds_delta])
class TestMdsPipelines:
    def test_complete_graph(self, runner):
        g = complete(5)
        ds, report = runner(g, Fraction(1, 2))
        assert is_dominating(g, ds)
        assert len(ds) <= 2  # bound allows slack over OPT = 1
        assert report.valid

    def test_single_node(self, runner):
        ds, report = runner(Graph(1, []), Fraction(1, 2))
        assert ds == [0]
        assert report.final_size == 1 and report.ratio == 1

    def test_edgeless(self, runner):
        ds, report = runner(Graph(3, []), Fraction(1, 2))
        assert ds == [0, 1, 2]
        assert report.stages[0].name == "trivial"

    def test_star(self, runner):
        g = generate_graph("star", {"m": 9})
        ds, report = runner(g, Fraction(1, 2))
        assert is_dominating(g, ds)
        bound = (1 + Fraction(1, 2)) * (2 + ln_upper(10)) * 1
        assert len(ds) <= bound

    def test_ratio_bound_holds(self, runner):
        for seed in range(3):
            g = generate_graph("gnp", {"n": 9, "p": 0.35}, seed=seed)
            ds, report = runner(g, Fraction(1, 2))
            opt, _ = brute_force_mds(g)
            bound = (1 + Fraction(1, 2)) * (2 + ln_upper(g.delta_tilde)) * opt
            assert len(ds) <= bound
            assert report.ratio == Fraction(len(ds), opt)

    def test_report_json_reproducible(self, runner):
        g = petersen()
        _, r1 = runner(g, Fraction(1, 2))
        _, r2 = runner(g, Fraction(1, 2))
        assert r1.to_json() == r2.to_json()
        obj = json.loads(r1.to_json())
        assert obj["graph"]["n"] == 10
        assert obj["stages"][0]["name"] == "initial-lp"
        assert obj["stages"][-1]["name"] == "one-shot"
        assert obj["final"]["valid"] is True

    def test_empty_graph_rejected(self, runner):
        with pytest.raises(DomainError):
            runner(Graph(0, []), Fraction(1, 2))


class TestCdsPipeline:
    def test_petersen(self):
        g = petersen()
        sbar, report = run_cds(g, Fraction(1, 2))
        assert is_dominating(g, sbar)
        assert g.subgraph_is_connected(sbar)
        assert report.connected and report.valid
        assert report.stages[-1].name == "cds-extension"
        assert report.extras["ds_size"] <= len(sbar)

    def test_grid(self):
        g = generate_graph("grid", {"rows": 3, "cols": 3})
        sbar, report = run_cds(g, Fraction(1, 2))
        assert is_dominating(g, sbar)
        assert g.subgraph_is_connected(sbar)

    def test_disconnected_rejected(self):
        with pytest.raises(PreconditionError):
            run_cds(Graph(2, []), Fraction(1, 2))

    def test_text_report(self):
        g = complete(4)
        _, report = run_cds(g, Fraction(1, 2))
        text = report.to_text()
        assert "final: size=" in text
        assert "connected: True" in text
