import json
import math

import numpy as np
import pytest

from flaglab import (ExperimentConfig, RngSpec,
                     SimplicialComplex, betti_numbers, clique_complex,
                     counts_to_histogram, disjoint_union, poisson_gof,
                     run_experiment, run_trial, sample_gnp, threshold_scan,
                     torsion_search)
from flaglab.cli import main as cli_main
from flaglab.experiments import result_to_csv, result_to_json, write_result
from flaglab import textio
from conftest import RP2_FACES


class TestRunTrial:
    def test_p_zero(self):
        cfg = ExperimentConfig(n=9, d=2, p=0.0, census=True, collapse=True)
        rec = run_trial(cfg, 0)
        assert rec.f == (9, 0, 0, 0, 0)
        assert rec.cp_count == 0
        assert rec.collapse_status == "collapsed_below_d"
        x = clique_complex(sample_gnp(9, 0.0, RngSpec(0, 0)), 2)
        assert betti_numbers(x, 2, degrees=[0])[0] == 9

    def test_k6_trial(self):
        cfg = ExperimentConfig(n=6, d=2, p=1.0, dim_cap=5, census=True,
                               collapse=True, betti_rational=True)
        rec = run_trial(cfg, 3)
        assert rec.cp_count == 15
        assert rec.cp_induced == 0
        assert rec.betti_d_q == 0
        assert rec.collapse_status == "collapsed_below_d"

    def test_repeatability(self):
        from dataclasses import replace
        cfg = ExperimentConfig(n=60, d=2, c=1.0, census=True, collapse=True,
                               betti_gf2=True)
        a = run_trial(cfg, 11)
        b = run_trial(cfg, 11)
        # identical up to the measured wall time
        assert replace(a, wall_ms=None) == replace(b, wall_ms=None)

    def test_morse_slack_nonnegative(self):
        cfg = ExperimentConfig(n=40, d=2, c=1.2, betti_rational=True)
        for s in range(5):
            rec = run_trial(cfg, s)
            assert rec.morse_slack is not None and rec.morse_slack >= 0


class TestRunExperiment:
    def test_single_trial_aggregates(self):
        cfg = ExperimentConfig(n=30, d=2, c=1.0, trials=1, census=True,
                               collapse=True)
        res = run_experiment(cfg)
        assert len(res.records) == 1
        assert res.aggregates["trials"] == 1
        assert res.aggregates["cp_count_mean"] == res.records[0].cp_count

    def test_worker_count_independence(self, tmp_path):
        kw = dict(n=70, d=2, c=1.1, trials=18, master_seed=5, census=True,
                  collapse=True, betti_gf2=True, betti_rational=True)
        r1 = run_experiment(ExperimentConfig(workers=1, **kw))
        r3 = run_experiment(ExperimentConfig(workers=3, **kw))
        assert result_to_csv(r1) == result_to_csv(r3)
        assert result_to_json(r1) == result_to_json(r3)
        p1 = write_result(r1, str(tmp_path / "a"), "both")
        p3 = write_result(r3, str(tmp_path / "b"), "both")
        for a, b in zip(p1, p3):
            assert open(a, "rb").read() == open(b, "rb").read()

    def test_csv_columns(self):
        cfg = ExperimentConfig(n=20, d=2, c=1.0, trials=2, census=True)
        res = run_experiment(cfg)
        header = result_to_csv(res).splitlines()[0]
        assert header == ("stream,f0,f1,f2,f3,f4,betti_d_gf2,betti_d_q,"
                          "cp_count,cp_induced,collapse_status,surviving,"
                          "max_deg_i1,torsion_max,wall_ms")

    def test_timing_column_only_when_asked(self):
        cfg = ExperimentConfig(n=20, d=2, c=1.0, trials=2, timing=True)
        line = result_to_csv(run_experiment(cfg)).splitlines()[1]
        assert line.rsplit(",", 1)[1] != ""
        cfg2 = ExperimentConfig(n=20, d=2, c=1.0, trials=2)
        line2 = result_to_csv(run_experiment(cfg2)).splitlines()[1]
        assert line2.rsplit(",", 1)[1] == ""

    def test_per_trial_failure_is_contained(self):
        # degree above the materialized cap errors inside the trial
        cfg = ExperimentConfig(n=12, d=4, c=1.0, dim_cap=3, trials=3,
                               betti_gf2=True)
        res = run_experiment(cfg)
        assert res.aggregates["failed"] == 3
        assert all(r.error for r in res.records)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(n=10, d=2, p=0.1, c=1.0)
        with pytest.raises(ValueError):
            ExperimentConfig(n=10, d=2)
        with pytest.raises(ValueError):
            ExperimentConfig(n=10, d=2, p=0.1, trials=0)


class TestPoissonGof:
    def test_zero_counts_zero_mean(self):
        rep = poisson_gof([5000], 0.0)
        assert rep.tv_distance == 0.0
        assert rep.p_value == 1.0

    def test_exact_poisson_self_fit(self):
        mean = 1.0
        probs = [math.exp(-mean) * mean ** k / math.factorial(k) for k in range(12)]
        hist = [p * 1e6 for p in probs]
        rep = poisson_gof(hist, mean)
        assert rep.chi_square < 1e-3
        assert rep.p_value > 0.99
        assert rep.tv_distance < 1e-6

    def test_wrong_mean_is_rejected(self):
        rng = np.random.default_rng(123)   # independent generator
        sample = rng.poisson(2.0, size=10000)
        rep = poisson_gof(counts_to_histogram(sample), 1.0)
        assert rep.p_value < 0.01

    def test_right_mean_is_accepted(self):
        rng = np.random.default_rng(124)
        sample = rng.poisson(0.05, size=20000)
        rep = poisson_gof(counts_to_histogram(sample), 0.05)
        assert rep.p_value > 0.01

    def test_bin_merging_floor(self):
        # tiny mean: bins 1,2,>=3 all fall below the floor and merge
        rep = poisson_gof([19990, 10], 0.0005)
        assert len(rep.bins) == 2

    def test_empirical_moments(self):
        rep = poisson_gof([10, 0, 10], 1.0)
        assert rep.empirical_mean == 1.0
        assert rep.sample_size == 20


class TestThresholdScan:
    def test_structure_and_annotation(self):
        cfg = ExperimentConfig(n=40, d=2, c=1.0, trials=4, master_seed=2,
                               collapse=True, census=True, fvector=False,
                               betti_gf2=True)
        grid = [1.0, 1.66, 2.754]
        res = threshold_scan(cfg, grid)
        assert [r.c for r in res.rows] == grid
        assert all(r.frac_almost_collapsible is not None for r in res.rows)
        assert "c_d" in res.rows[2].annotation
        # 1.66 ~ sqrt(2.754): the conjectured homology threshold for the
        # flag model; the row should carry the annotation
        assert "c_d^(1/d)" in res.rows[1].annotation

    def test_monotonicity_required(self):
        cfg = ExperimentConfig(n=20, d=2, c=1.0, trials=1, collapse=True)
        with pytest.raises(ValueError):
            threshold_scan(cfg, [2.0, 1.0])

    def test_d1_cycle_fraction(self):
        cfg = ExperimentConfig(n=400, d=1, c=0.5, trials=60, master_seed=8,
                               fvector=False, cycle=True)
        res = threshold_scan(cfg, [0.5])
        frac = res.rows[0].frac_with_cycle
        assert frac is not None and 0.0 <= frac <= 0.3


class TestTorsionSearch:
    def test_p_zero_no_torsion(self):
        cfg = ExperimentConfig(n=15, d=2, p=0.0, trials=4)
        rep = torsion_search(cfg, 1)
        assert rep.largest_divisor is None
        assert all(not ds for _, ds in rep.per_trial)

    def test_planted_projective_plane_always_detected(self):
        plant = SimplicialComplex.from_faces(6, RP2_FACES, 3)
        cfg = ExperimentConfig(n=25, d=2, c=1.0, trials=6, master_seed=3)
        rep = torsion_search(cfg, 1, plant=plant)
        assert rep.largest_divisor is not None
        assert rep.largest_divisor % 2 == 0
        for _, divisors in rep.per_trial:
            assert any(dv % 2 == 0 for dv in divisors)

    def test_empty_report_is_valid(self):
        cfg = ExperimentConfig(n=20, d=2, c=1.5, trials=5, master_seed=6)
        rep = torsion_search(cfg, 1)
        assert len(rep.per_trial) == 5


class TestDisjointUnion:
    def test_shifts_labels(self, octahedron_complex, rp2_complex):
        u = disjoint_union(octahedron_complex, rp2_complex)
        assert u.n == 12
        assert len(u.faces_of_dim(2)) == 8 + 10
        u.validate()


class TestCli:
    def test_sample_graph_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        rc = cli_main(["sample", "--kind", "graph", "--n", "30", "--p", "0.2",
                       "--seed", "5", "--out", str(out)])
        assert rc == 0
        g = textio.read_graph(out.read_text())
        assert g.n == 30

    def test_density_subcommand(self, tmp_path, capsys):
        from flaglab.models import crosspolytope_graph
        gfile = tmp_path / "oct.txt"
        gfile.write_text(textio.write_graph(crosspolytope_graph(2)))
        rc = cli_main(["density", "--input", str(gfile)])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rho_numerator"] == 2
        assert payload["rho_denominator"] == 1
        assert payload["strictly_balanced"] is True
        assert payload["below_collapse_threshold"] is True

    def test_census_subcommand(self, capsys):
        rc = cli_main(["census", "--n", "6", "--p", "1.0", "--d", "2"])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.startswith("copies: 15")

    def test_collapse_with_trace(self, tmp_path, capsys):
        trace = tmp_path / "trace.txt"
        rc = cli_main(["collapse", "--n", "30", "--c", "1.0", "--seed", "4",
                       "--emit-trace", str(trace)])
        assert rc == 0
        steps = textio.read_trace(trace.read_text())
        x = clique_complex(sample_gnp(30, 1.0 / math.sqrt(30), RngSpec(4, 0)), 4)
        from flaglab import replay_steps
        replay_steps(x, steps)   # must be a legal sequence

    def test_homology_subcommand(self, capsys):
        rc = cli_main(["homology", "--n", "12", "--p", "0.3", "--seed", "1",
                       "--field", "rationals"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert "betti" in payload

    def test_experiment_writes_files(self, tmp_path, capsys):
        out = tmp_path / "exp"
        rc = cli_main(["experiment", "--n", "30", "--c", "1.0", "--trials", "4",
                       "--seed", "2", "--out", str(out), "--format", "both",
                       "--observables", "fvector,census,collapse"])
        assert rc == 0
        assert (tmp_path / "exp.csv").exists()
        assert (tmp_path / "exp.json").exists()
        blob = json.loads((tmp_path / "exp.json").read_text())
        assert blob["config"]["trials"] == 4

    def test_scan_subcommand(self, tmp_path):
        out = tmp_path / "scan.csv"
        rc = cli_main(["scan", "--n", "25", "--c", "1.0", "--trials", "2",
                       "--seed", "3", "--c-grid", "0.8,1.2", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("c,frac_almost_collapsible")
        assert len(lines) == 3

    def test_check_pi1_subcommand(self, capsys):
        rc = cli_main(["check-pi1", "--n", "15", "--p", "0.2", "--seed", "2",
                       "--dim-cap", "4"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "not evaluated" in out    # condition (5)

    def test_torsion_subcommand(self, capsys):
        rc = cli_main(["torsion", "--n", "15", "--c", "1.2", "--trials", "2",
                       "--degree", "1"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["degree"] == 1

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli_main(["experiment", "--n", "10"])    # missing probability spec
        assert exc.value.code == 1

    def test_unknown_command_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli_main(["frobnicate"])
        assert exc.value.code == 1
