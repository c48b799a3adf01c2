from pathlib import Path

import pytest

from prevpoly import fileio
from prevpoly.catalog import PRESETS, run_pipeline
from prevpoly.cli import main
from prevpoly.gambles import GambleSet, PossibilitySpace
from prevpoly.polytope import AdjacencyGraph, HRep, VRep

TOY_GMB = """\
space a b c
gamble f 1 1/2 0
gamble g 0 2/3 1
"""

# The point evaluation at b, extended to the indicator coordinates.
TOY_LPV = """\
f 1/2
g 2/3
I_a 0
I_b 1
I_c 0
"""


@pytest.fixture
def toy_files(tmp_path):
    gmb = tmp_path / "toy.gmb"
    gmb.write_text(TOY_GMB)
    lpv = tmp_path / "p.lpv"
    lpv.write_text(TOY_LPV)
    return gmb, lpv


class TestFormats:
    def test_gamble_set_round_trip(self, toy_gambles):
        text = fileio.write_gamble_set(toy_gambles)
        again = fileio.read_gamble_set(text)
        assert again == toy_gambles
        assert fileio.write_gamble_set(again) == text

    def test_prevision_round_trip(self):
        values = fileio.read_prevision_values(TOY_LPV)
        text = fileio.write_prevision_values(values)
        assert fileio.read_prevision_values(text) == values

    def test_hrep_round_trip(self, toy_hrep):
        text = fileio.write_hrep(toy_hrep)
        again = fileio.read_hrep(text)
        assert again == toy_hrep
        assert fileio.write_hrep(again) == text

    def test_vrep_round_trip(self):
        v = VRep(2, ((0, 0), (1, 0), (0, 1)), ("f", "g"))
        text = fileio.write_vrep(v)
        assert fileio.read_vrep(text) == v
        assert fileio.write_vrep(fileio.read_vrep(text)) == text

    def test_adjacency_round_trip(self):
        g = AdjacencyGraph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
        text = fileio.write_adjacency(g)
        assert tuple(fileio.read_adjacency(text)) == g.edges

    def test_comments_ignored(self):
        text = "# a comment\nspace a b\ngamble f 1 0  # trailing\n"
        k = fileio.read_gamble_set(text)
        assert k.names == ("f",)

    def test_malformed_rejected(self):
        with pytest.raises(Exception):
            fileio.read_gamble_set("gamble f 1 0\n")
        with pytest.raises(Exception):
            fileio.read_hrep("H 2 1\n0 1\n")


class TestCommands:
    def test_gen_reduce_project_vertices(self, toy_files, tmp_path, capsys):
        gmb, _ = toy_files
        raw = tmp_path / "toy.hrep"
        assert main(["gen", "--gambles", str(gmb), "--out", str(raw)]) == 0
        h = fileio.read_hrep(raw.read_text())
        assert h.names == ("f", "g", "I_a", "I_b", "I_c")
        assert len(h.constraints) == 15

        red = tmp_path / "toy-red.hrep"
        assert main(["reduce", "--in", str(raw), "--out", str(red)]) == 0
        assert len(fileio.read_hrep(red.read_text()).constraints) == 8

        proj = tmp_path / "toy-proj.hrep"
        assert main(
            ["project", "--in", str(red), "--keep", "f,g", "--out", str(proj)]
        ) == 0
        projected = fileio.read_hrep(proj.read_text())
        assert projected.names == ("f", "g")
        assert len(projected.constraints) == 4

        vrep_path = tmp_path / "toy.vrep"
        adj_path = tmp_path / "toy.adj"
        assert main(
            ["vertices", "--in", str(proj), "--out", str(vrep_path), "--adjacency", str(adj_path)]
        ) == 0
        v = fileio.read_vrep(vrep_path.read_text())
        assert len(v.vertices) == 4
        assert len(fileio.read_adjacency(adj_path.read_text())) == 4

    def test_check_constraint_route(self, toy_files, capsys):
        gmb, lpv = toy_files
        assert main(["check", "--gambles", str(gmb), "--prevision", str(lpv)]) == 0
        assert capsys.readouterr().out.strip() == "coherent"

    def test_check_direct_and_envelope(self, toy_files, capsys):
        gmb, lpv = toy_files
        assert main(["check", "--gambles", str(gmb), "--prevision", str(lpv), "--direct"]) == 0
        assert main(["check", "--gambles", str(gmb), "--prevision", str(lpv), "--envelope"]) == 0

    def test_check_incoherent_exit_code(self, toy_files, tmp_path, capsys):
        gmb, _ = toy_files
        bad = tmp_path / "bad.lpv"
        bad.write_text("f 1\ng 1\nI_a 0\nI_b 0\nI_c 0\n")
        assert main(["check", "--gambles", str(gmb), "--prevision", str(bad)]) == 1
        assert capsys.readouterr().out.startswith("incoherent")

    def test_check_missing_indicator_values(self, toy_files, tmp_path, capsys):
        gmb, _ = toy_files
        short = tmp_path / "short.lpv"
        short.write_text("f 1/2\ng 2/3\n")
        assert main(["check", "--gambles", str(gmb), "--prevision", str(short)]) == 1

    def test_credal_and_plotdata(self, toy_files, tmp_path):
        gmb, lpv = toy_files
        out = tmp_path / "credal.vrep"
        assert main(["credal", "--gambles", str(gmb), "--prevision", str(lpv), "--out", str(out)]) == 0
        v = fileio.read_vrep(out.read_text())
        assert v.names == ("a", "b", "c")
        flat = tmp_path / "plot.tsv"
        assert main(
            ["plotdata", "--gambles", str(gmb), "--prevision", str(lpv), "--out", str(flat)]
        ) == 0
        lines = flat.read_text().splitlines()
        assert lines[0] == "a\tb\tc"
        assert len(lines) == len(v.vertices) + 1

    def test_extend(self, toy_files, capsys):
        gmb, lpv = toy_files
        assert main(
            ["extend", "--gambles", str(gmb), "--prevision", str(lpv), "--target", "0,1,0"]
        ) == 0
        # The point evaluation at b gives exactly 1 for the indicator of b.
        assert capsys.readouterr().out.strip() == "1"

    def test_pipeline_outputs(self, tmp_path):
        out = tmp_path / "toyrun"
        assert main(["pipeline", "--preset", "toy", "--out", str(out)]) == 0
        summary = (out / "summary.txt").read_text()
        assert "irredundant 4" in summary and "vertices 4" in summary
        assert (out / "constraints.hrep").exists()
        assert (out / "vertices.vrep").exists()
        assert (out / "adjacency.adj").exists()

    def test_pipeline_family(self, tmp_path):
        out = tmp_path / "lu4"
        assert main(["pipeline", "--family", "lumass", "--omega", "4", "--out", str(out)]) == 0
        summary = (out / "summary.txt").read_text()
        assert "irredundant 16" in summary and "vertices 20" in summary

    def test_check_no_augment_envelope(self, toy_files, tmp_path, capsys):
        gmb, _ = toy_files
        raw = tmp_path / "raw.lpv"
        raw.write_text("f 1/2\ng 2/3\n")
        code = main(
            ["check", "--gambles", str(gmb), "--prevision", str(raw), "--no-augment", "--envelope"]
        )
        assert code == 0
        assert capsys.readouterr().out.strip() == "coherent"

    def test_table_command(self, tmp_path, capsys):
        out = tmp_path / "lmass.tsv"
        assert main(["table", "--family", "lmass", "--params", "2,3", "--out", str(out)]) == 0
        body = out.read_text().splitlines()
        assert body[-1].startswith("3\t3\t4\t4\t4\tok")

    def test_usage_error_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["gen"])  # missing required arguments
        assert exc.value.code == 2

    def test_unknown_preset_domain_error(self, tmp_path, capsys):
        assert main(["pipeline", "--preset", "nope", "--out", str(tmp_path / "x")]) == 1

    def test_missing_file_io_error(self, tmp_path):
        assert main(["reduce", "--in", str(tmp_path / "none.hrep"), "--out", str(tmp_path / "o")]) == 1


class TestDeterminism:
    def test_byte_identical_runs_and_jobs(self, tmp_path):
        outputs = []
        for tag, jobs in (("one", "1"), ("two", "1"), ("par", "2")):
            out = tmp_path / tag
            assert main(["--jobs", jobs, "pipeline", "--preset", "2on3", "--out", str(out)]) == 0
            outputs.append(
                {
                    p.name: p.read_bytes()
                    for p in sorted(out.iterdir())
                }
            )
        assert outputs[0] == outputs[1] == outputs[2]
