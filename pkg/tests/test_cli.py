import json

import numpy as np
import pytest

from holomotion.cli import main, run_scenario


def write(path, payload):
    path.write_text(json.dumps(payload))
    return path


def load_report(out_dir, stem):
    return json.loads((out_dir / f"{stem}_report.json").read_text())


class TestWordsScenario:
    def test_basic_run(self, tmp_path):
        scenario = write(
            tmp_path / "w.json",
            {
                "kind": "words",
                "rank": 2,
                "word": "g1 g0 g1^-1 g0^-1",
                "operations": [
                    {"op": "reduce"},
                    {"op": "is_trivial"},
                    {"op": "exponent_sums"},
                    {"op": "delete_generator", "index": 0},
                ],
            },
        )
        assert run_scenario(scenario, out_dir=tmp_path / "out") == 0
        report = load_report(tmp_path / "out", "w")
        steps = {s["op"]: s["output"] for s in report["results"]["steps"]}
        assert steps["is_trivial"] is False
        assert steps["exponent_sums"] == [0, 0]
        assert steps["delete_generator"] == ""

    def test_bad_word_names_key(self, tmp_path, capsys):
        scenario = write(
            tmp_path / "w.json", {"kind": "words", "rank": 2, "word": "h3"}
        )
        assert run_scenario(scenario, out_dir=tmp_path) == 1
        assert "word" in capsys.readouterr().err

    def test_missing_rank_names_key(self, tmp_path, capsys):
        scenario = write(tmp_path / "w.json", {"kind": "words", "word": "g0"})
        assert run_scenario(scenario, out_dir=tmp_path) == 1
        assert "rank" in capsys.readouterr().err


class TestMonodromyScenario:
    def test_spec_file_schema(self, tmp_path):
        scenario = write(
            tmp_path / "m.json",
            {
                "kind": "monodromy",
                "n": 1,
                "z0": [-1.0, 0.0],
                "points": [[3.0, 0.0]],
                "word": "g1 g0 g1^-1 g0^-1",
                "quadruples": [["z0", "0", "1", "inf"]],
                "subsets": [["z0", "0", "1", "inf"]],
            },
        )
        assert run_scenario(scenario, out_dir=tmp_path / "out") == 0
        report = load_report(tmp_path / "out", "m")
        assert report["results"]["monodromy_trivial"] is False
        # the plain commutator word survives dropping z1, unlike the
        # nested-commutator counterexample family
        assert report["results"]["trace_monodromy"]["0|1|inf|z0"] is False
        assert report["results"]["restrictions"]["0|1|inf|z0"]["trivial"] is False

    def test_wrong_point_count(self, tmp_path, capsys):
        scenario = write(
            tmp_path / "m.json",
            {"kind": "monodromy", "n": 2, "z0": [-1, 0], "points": [[3, 0]], "word": ""},
        )
        assert run_scenario(scenario, out_dir=tmp_path) == 1
        assert "points" in capsys.readouterr().err


class TestCounterexampleScenario:
    def test_trace_family_passes(self, tmp_path):
        scenario = write(tmp_path / "ce.json", {"kind": "counterexample", "n": 2})
        assert run_scenario(scenario, out_dir=tmp_path / "out") == 0
        report = load_report(tmp_path / "out", "ce")
        assert report["certificates"]["property_A"] is True
        assert report["certificates"]["all_proper_subsets_trivial"] is True
        assert report["results"]["proper_subsets_checked"] == 31
        csv = (tmp_path / "out" / "ce_results.csv").read_text().splitlines()
        assert csv[0] == "case,trivial"
        assert "full word,False" in csv

    def test_chirka_family(self, tmp_path):
        scenario = write(
            tmp_path / "ch.json", {"kind": "counterexample", "family": "chirka", "n": 0}
        )
        assert run_scenario(scenario, out_dir=tmp_path / "out") == 0
        report = load_report(tmp_path / "out", "ch")
        assert report["certificates"]["chirka_condition_holds"] is True
        assert report["results"]["monodromy_trivial"] is False


class TestGeometryScenario:
    def test_derived_quantities(self, tmp_path):
        scenario = write(
            tmp_path / "g.json", {"kind": "geometry", "ellE": np.pi, "R": 2.0}
        )
        assert run_scenario(scenario, out_dir=tmp_path / "out") == 0
        report = load_report(tmp_path / "out", "g")
        results = report["results"]
        assert abs(results["length_bound"] - 0.5 * np.log(2)) < 1e-12
        assert abs(results["core_length"] - np.pi**2 / np.log(2)) < 1e-12
        assert results["annulus_extends_everything"] is False
        assert report["certificates"]["quadrature_matches_core_length"] is True

    def test_inline_overrides(self, tmp_path):
        scenario = write(tmp_path / "g.json", {"kind": "geometry"})
        code = main(
            [
                "geometry",
                "--scenario",
                str(scenario),
                "--out",
                str(tmp_path / "out"),
                "--ellE",
                "3.141592653589793",
                "--R",
                "2.0",
            ]
        )
        assert code == 0


class TestExtendScenario:
    def test_small_extension(self, tmp_path):
        scenario = write(
            tmp_path / "e.json",
            {
                "kind": "extend",
                "traces": [[[3.0, 0.0], [0.2, 0.0]]],
                "samples": 64,
                "rays": 8,
                "injectivity_pairs": 60,
            },
        )
        assert run_scenario(scenario, out_dir=tmp_path / "out", svg=True) == 0
        report = load_report(tmp_path / "out", "e")
        assert all(report["certificates"].values())
        assert report["results"]["agreement_residual"] < 1e-4
        assert (tmp_path / "out" / "e_figure.svg").exists()

    def test_bare_traces_file(self, tmp_path):
        scenario = write(tmp_path / "t.json", [[[3.0, 0.0], [0.2, 0.0]]])
        code = run_scenario(
            scenario,
            out_dir=tmp_path / "out",
            kind="extend",
            overrides={"samples": 64, "rays": 8, "injectivity_pairs": 40},
        )
        assert code == 0

    def test_certificate_failure_exit_code(self, tmp_path, capsys):
        scenario = write(
            tmp_path / "e.json",
            {
                "kind": "extend",
                "traces": [[[3.0, 0.0], [0.2, 0.0]]],
                "samples": 64,
                "rays": 8,
                "injectivity_pairs": 20,
                "agreement_tol": 1e-18,
            },
        )
        assert run_scenario(scenario, out_dir=tmp_path / "out") == 2
        assert "agreement" in capsys.readouterr().err

    def test_invalid_traces(self, tmp_path, capsys):
        scenario = write(tmp_path / "e.json", {"kind": "extend", "traces": [[[0.1, 0.0], [-0.1, 0.0]]]})
        assert run_scenario(scenario, out_dir=tmp_path) == 1
        assert "traces" in capsys.readouterr().err


class TestBarycenterScenario:
    def test_csv_boundary_map(self, tmp_path):
        n = 128
        grid = 2 * np.pi * np.arange(n) / n
        theta = grid + 0.05 * np.sin(2 * grid)
        lines = ["k,theta_k"] + [f"{k},{float(t)!r}" for k, t in enumerate(theta)]
        (tmp_path / "bmap.csv").write_text("\n".join(lines) + "\n")
        scenario = write(
            tmp_path / "b.json",
            {
                "kind": "barycenter",
                "boundary_map": "bmap.csv",
                "points": [[0.0, 0.0], [0.3, 0.2]],
                "beltrami_step": 1e-3,
            },
        )
        assert run_scenario(scenario, out_dir=tmp_path / "out", svg=True) == 0
        report = load_report(tmp_path / "out", "b")
        assert report["certificates"]["values_inside_disk"] is True
        assert len(report["results"]["extension_values"]) == 2
        assert len(report["results"]["beltrami"]) == 2

    def test_missing_boundary(self, tmp_path, capsys):
        scenario = write(
            tmp_path / "b.json", {"kind": "barycenter", "points": [[0.0, 0.0]]}
        )
        assert run_scenario(scenario, out_dir=tmp_path) == 1
        assert "boundary_map" in capsys.readouterr().err


class TestRunnerPlumbing:
    def test_malformed_json_exit_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run_scenario(bad, out_dir=tmp_path) == 1
        assert "scenario" in capsys.readouterr().err

    def test_unknown_kind(self, tmp_path, capsys):
        scenario = write(tmp_path / "u.json", {"kind": "frobnicate"})
        assert run_scenario(scenario, out_dir=tmp_path) == 1
        assert "kind" in capsys.readouterr().err

    def test_report_echoes_inputs_and_runtime(self, tmp_path):
        scenario = write(tmp_path / "g.json", {"kind": "geometry", "ellE": 1.0, "R": 3.0})
        run_scenario(scenario, out_dir=tmp_path / "out")
        report = load_report(tmp_path / "out", "g")
        assert report["inputs"] == {"kind": "geometry", "ellE": 1.0, "R": 3.0}
        assert report["runtime_ms"] >= 0
        assert set(report).issuperset({"scenario", "inputs", "results", "certificates", "runtime_ms"})

    def test_determinism_modulo_runtime(self, tmp_path):
        payload = {"kind": "counterexample", "n": 1}
        s1 = write(tmp_path / "a.json", payload)
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        run_scenario(s1, out_dir=out1, svg=True)
        run_scenario(s1, out_dir=out2, svg=True)
        r1, r2 = load_report(out1, "a"), load_report(out2, "a")
        r1.pop("runtime_ms"), r2.pop("runtime_ms")
        assert r1 == r2
        assert (out1 / "a_figure.svg").read_bytes() == (out2 / "a_figure.svg").read_bytes()
        assert (out1 / "a_results.csv").read_bytes() == (out2 / "a_results.csv").read_bytes()

    def test_figure_for_unsupported_kind_errors(self, tmp_path, capsys):
        scenario = write(tmp_path / "w.json", {"kind": "words", "rank": 1, "word": "g0"})
        assert run_scenario(scenario, out_dir=tmp_path / "out", svg=True) == 1
        assert "figure" in capsys.readouterr().err

    def test_cli_main_run_dispatch(self, tmp_path):
        scenario = write(tmp_path / "g.json", {"kind": "geometry", "ellE": 1.0, "R": 9.0})
        code = main(["run", "--scenario", str(scenario), "--out", str(tmp_path / "out")])
        assert code == 0


class TestExtendExtras:
    def test_trivial_traces_identity_certificates(self, tmp_path):
        scenario = write(
            tmp_path / "tid.json",
            {"kind": "extend", "traces": [[[1.0, 0.0]]], "samples": 64, "rays": 8,
             "injectivity_pairs": 30, "dump_structure": True},
        )
        assert run_scenario(scenario, out_dir=tmp_path / "out", svg=True) == 0
        report = load_report(tmp_path / "out", "tid")
        assert all(report["certificates"].values())
        assert report["results"]["basepoint_deviation"] < 1e-8
        dump = report["results"]["structure"]
        assert dump["radii"] == {"r": 1 / 3, "R": 2.0}
        assert len(dump["displacement"]) == 8
        flat = [v for per_rho in dump["displacement"] for row in per_rho for v in row]
        assert max(abs(v) for v in flat) == 0.0

    def test_empty_figure_payload_errors(self):
        from holomotion.figures import render_figure

        with pytest.raises(ValueError, match="curves"):
            render_figure({"figure_data": {"curves": []}}, "extend", "/tmp/x.svg")
