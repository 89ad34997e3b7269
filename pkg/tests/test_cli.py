"""End-to-end CLI: JSON in, JSON out, deterministic, correct exit codes."""

import json

from click.testing import CliRunner

from latred.cli import main


def run_cli(args, payload=None):
    runner = CliRunner()
    stdin = json.dumps(payload) if isinstance(payload, (dict, list)) else payload
    return runner.invoke(main, args, input=stdin, catch_exceptions=False)


DIAG14 = {"n": 2, "gram": [["1", "0"], ["0", "4"]]}
VS_T2 = {"q": 2, "n": 2, "S_basis": [["1", "0"], ["0", "t^2"]]}
STD_VERTEX = {"matrix": [["1", "0"], ["0", "1"]]}


class TestVerbExamples:
    def test_canfilt_split_form(self):
        res = run_cli(["canfilt", "--ring", "z"], DIAG14)
        assert res.exit_code == 0
        data = json.loads(res.output)
        assert data["c_values"]["1"]["c_sq_ratio"] == "4/1"
        assert [c["rank"] for c in data["chain"]] == [0, 1, 2]
        assert data["chain"][1]["basis"] == [[1, 0]]

    def test_ff_invariants(self):
        res = run_cli(["ff-invariants"], VS_T2)
        assert res.exit_code == 0
        assert json.loads(res.output)["r"] == [-2, 0]

    def test_building_neighbors_both_spellings(self):
        for args in (["building-neighbors", "--p", "2", "--n", "2"],
                     ["building", "neighbors", "--p", "2", "--n", "2"]):
            res = run_cli(args, STD_VERTEX)
            assert res.exit_code == 0
            data = json.loads(res.output)
            assert data["count"] == 3
            assert all(nb["label_difference"] == 1 for nb in data["neighbors"])

    def test_volume_and_cvalue(self):
        res = run_cli(["volume", "--ring", "z"],
                      {"x": DIAG14, "summand": {"basis": [[0, 1]]}})
        assert json.loads(res.output)["vol_sq"] == "4/1"
        res = run_cli(["volume", "--ring", "ff"],
                      {"x": VS_T2, "summand": {"basis": [[[], [1]]]}})
        assert json.loads(res.output)["logvol"] == -2
        res = run_cli(["cvalue", "--ring", "z"],
                      {"x": DIAG14, "summand": {"basis": [[1, 0]]}})
        assert json.loads(res.output)["c"]["c_sq_ratio"] == "4/1"
        res = run_cli(["cvalue", "--ring", "ff"],
                      {"x": VS_T2, "summand": {"basis": [[[], [1]]]}})
        assert json.loads(res.output)["c"] == "2"
        res = run_cli(["cvalue", "--ring", "ff"],
                      {"x": VS_T2, "summand": {"basis": [[[1], []]]}})
        assert json.loads(res.output)["c"] == "-2"

    def test_diagonal_basis(self):
        res = run_cli(["diagonal-basis"], VS_T2)
        data = json.loads(res.output)
        assert data["r"] == [-2, 0]

    def test_intersect_and_loc_volume(self):
        doc = {
            "ring": "z", "T": [2],
            "B": {"n": 2, "basis": [["1/2", "0"], ["0", "1"]]},
            "summand": {"basis": [["1", "0"], ["0", "1"]]},
        }
        res = run_cli(["intersect"], doc)
        assert json.loads(res.output)["basis"] == [["1/2", "0"], ["0", "1"]]
        doc["x"] = {"n": 2, "gram": [["1", "0"], ["0", "1"]]}
        res = run_cli(["loc-volume"], doc)
        assert json.loads(res.output)["logvol"]["vol_sq"] == "1/4"

    def test_factorize(self):
        doc = {"ring": "z", "T": [2], "A": [["1", "1/6"], ["0", "1"]],
               "mode": "GL"}
        res = run_cli(["factorize"], doc)
        data = json.loads(res.output)
        assert "B" in data and "C" in data

    def test_chamber_count(self):
        res = run_cli(["chamber-count", "--n", "3", "--r", "2", "--k", "1"])
        assert json.loads(res.output) == {"count": 3, "verified": True}

    def test_apartment_and_triangulate(self):
        res = run_cli(["apartment"], {"m": [1, 0]})
        assert json.loads(res.output)["coords"] == ["1/2", "-1/2"]
        res = run_cli(["triangulate"], {"x": ["1/2", "1/4"]})
        data = json.loads(res.output)
        assert data["points"] == [[0, 0], [1, 0], [1, 1]]
        assert data["coeffs"] == ["1/2", "1/4", "1/4"]

    def test_label_diff(self):
        doc = {"v1": STD_VERTEX, "v2": {"matrix": [["1", "0"], ["0", "1/2"]]}}
        res = run_cli(["label-diff", "--p", "2", "--n", "2"], doc)
        assert json.loads(res.output)["label_difference"] == 1

    def test_cover_membership_and_core(self):
        doc = {"side": "z", "x": DIAG14, "threshold": 0}
        res = run_cli(["cover-membership"], doc)
        data = json.loads(res.output)
        assert len(data["members"]) == 1
        assert data["members"][0]["summand"]["basis"] == [[1, 0]]
        res = run_cli(["core-test"],
                      {"side": "z", "x": {"n": 2, "gram": [["1", "0"], ["0", "1"]]},
                       "threshold": 0})
        assert json.loads(res.output)["in_core"] is True

    def test_cover_membership_ff_vertex(self):
        doc = {"side": "ff", "q": 2, "n": 2, "threshold": 8,
               "x": {"matrix": [["t^5", "0"], ["0", "1/t^5"]]}}
        res = run_cli(["cover-membership"], doc)
        data = json.loads(res.output)
        assert len(data["members"]) == 1
        assert data["members"][0]["c"] == "10"

    def test_core_reps(self):
        res = run_cli(["core-reps", "--n", "2", "--theta", "1"])
        assert json.loads(res.output)["reps"] == [[0, 0], [0, 1]]

    def test_selfcheck(self):
        res = run_cli(["selfcheck", "--seed", "3", "--scale", "3"])
        data = json.loads(res.output)
        assert data["ok"] is True
        assert all(c["ok"] for c in data["checks"])


class TestContract:
    def test_determinism(self):
        a = run_cli(["canfilt", "--ring", "z"], DIAG14).output
        b = run_cli(["canfilt", "--ring", "z"], DIAG14).output
        assert a == b

    def test_round_trip(self):
        from latred import jsonio
        res = run_cli(["canfilt", "--ring", "z"], DIAG14)
        data = json.loads(res.output)
        for item in data["chain"]:
            w = jsonio.z_summand_from_json(item, 2)
            assert jsonio.z_summand_to_json(w) == item
        res = run_cli(["ff-invariants"], VS_T2)
        data = json.loads(res.output)
        for item in data["filtration"]["chain"]:
            w = jsonio.ff_summand_from_json(item, 2, 2)
            assert jsonio.ff_summand_to_json(w) == item

    def test_shape_errors_exit_2(self):
        for verb, payload in [
            (["canfilt", "--ring", "z"], {}),
            (["volume", "--ring", "z"], {"x": 1}),
            (["apartment"], {"m": "x"}),
            (["triangulate"], []),
            (["intersect"], {"T": [2]}),
        ]:
            res = run_cli(verb, payload)
            assert res.exit_code == 2, (verb, res.output)
            assert json.loads(res.output)["kind"] == "validation"

    def test_malformed_json_exits_2(self):
        res = run_cli(["canfilt", "--ring", "z"], "{not json")
        assert res.exit_code == 2
        assert json.loads(res.output)["kind"] == "validation"

    def test_domain_error_exits_3(self):
        res = run_cli(["canfilt", "--ring", "z"],
                      {"n": 2, "gram": [["1", "2"], ["2", "1"]]})
        assert res.exit_code == 3
        assert json.loads(res.output)["kind"] == "domain"

    def test_sl_mode_determinant_error(self):
        doc = {"ring": "z", "T": [2], "A": [["2", "0"], ["0", "1"]], "mode": "SL"}
        res = run_cli(["factorize"], doc)
        assert res.exit_code == 3
