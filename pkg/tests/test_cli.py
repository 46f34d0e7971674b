import json

from contracta import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out


class TestWordProblem:
    def test_trivial_word_exits_zero(self, capsys):
        code, out = run(capsys, "wp", "--group", "grigorchuk", "--word", "")
        assert code == 0 and out.strip() == "trivial"

    def test_nontrivial_word_exits_one(self, capsys):
        code, out = run(capsys, "wp", "--group", "grigorchuk", "--word", "a b")
        assert code == 1 and out.strip() == "nontrivial"

    def test_relator(self, capsys):
        code, _ = run(capsys, "wp", "--group", "grigorchuk", "--word", "b c d")
        assert code == 0

    def test_eq(self, capsys):
        code, _ = run(capsys, "eq", "--group", "grigorchuk", "--word", "b", "--other", "d c")
        assert code == 0

    def test_file_input(self, capsys, tmp_path):
        path = tmp_path / "flip.rec"
        path.write_text("alphabet 2\ngen a = perm(1 0) sections(1, 1)\n")
        code, out = run(capsys, "wp", "--file", str(path), "--word", "a a")
        assert code == 0


class TestStructure:
    def test_nucleus_listing(self, capsys):
        code, out = run(capsys, "nucleus", "--group", "grigorchuk")
        assert code == 0
        assert "nucleus size 5" in out
        assert out.strip().splitlines()[1:] == ["1", "a", "b", "c", "d"]

    def test_cover(self, capsys):
        code, out = run(capsys, "cover", "--group", "basilica", "--prune")
        assert code == 0
        assert "gens a b" in out

    def test_standard_cover(self, capsys):
        code, out = run(capsys, "standard-cover", "--group", "gupta_sidki")
        assert code == 0
        assert "already self-replicating" in out

    def test_act_and_section(self, capsys):
        code, out = run(capsys, "act", "--group", "grigorchuk", "--word", "b", "--vertex", "01")
        assert code == 0 and out.strip() == "00"
        code, out = run(capsys, "section", "--group", "grigorchuk", "--word", "b", "--vertex", "0")
        assert code == 0 and out.strip() == "a"


class TestKernelCommands:
    def test_kernel_member(self, capsys):
        code, _ = run(capsys, "kernel-member", "--group", "grigorchuk",
                      "--word", "a d a d a d a d", "--level", "1")
        assert code == 0
        code, _ = run(capsys, "kernel-member", "--group", "grigorchuk",
                      "--word", "a d a d a d a d", "--level", "0")
        assert code == 1

    def test_chain_profile(self, capsys):
        code, out = run(capsys, "chain-profile", "--group", "grigorchuk",
                        "--word", "a d a d a d a d", "--max-level", "4")
        assert code == 0 and out.strip() == "1"
        code, out = run(capsys, "chain-profile", "--group", "grigorchuk",
                        "--word", "a b", "--max-level", "4")
        assert code == 1 and out.strip() == "none"


class TestPresentationCommands:
    def test_tc_with_preset(self, capsys):
        code, out = run(capsys, "tc", "--gn", "0", "--subgroup", "k0")
        assert code == 0 and out.strip() == "index 16"

    def test_tc_with_alias_words(self, capsys, tmp_path):
        pres = tmp_path / "gn0.pres"
        code, out = run(capsys, "gn-pres", "--n", "0")
        pres.write_text(out)
        code, out = run(capsys, "tc", "--pres", str(pres), "--subgroup", "t,v,w")
        assert code == 0 and out.strip() == "index 16"

    def test_tc_dump(self, capsys):
        code, out = run(capsys, "tc", "--gn", "0", "--subgroup", "xi0", "--dump")
        assert code == 0
        assert "coset 0:" in out

    def test_kb(self, capsys, tmp_path):
        pres = tmp_path / "v.pres"
        pres.write_text("pres\ngens a b c d\nrel a a\nrel b b\nrel c c\nrel d d\nrel b c d\n")
        code, out = run(capsys, "kb", "--pres", str(pres))
        assert code == 0
        assert out.startswith("complete")
        assert "b c -> d" in out

    def test_rank(self, capsys):
        code, out = run(capsys, "rank", "--orders", "2,4", "--index", "8")
        assert code == 0 and out.strip() == "3"

    def test_lysenok_and_hn(self, capsys):
        code, out = run(capsys, "lysenok", "--kind", "u", "--n", "1")
        assert code == 0 and out.strip() == "a c a c a c a c a c a c a c a c"
        code, out = run(capsys, "hn-gens", "--n", "1")
        assert code == 0 and len(out.strip().splitlines()) == 6


class TestFamilies:
    def test_gomega_wp(self, capsys):
        code, _ = run(capsys, "gomega-wp", "--omega", ":012",
                      "--word", "a d a d a d a d")
        assert code == 0

    def test_dist(self, capsys):
        code, out = run(capsys, "dist", "--group-a", "grigorchuk@0",
                        "--group-b", "grigorchuk", "--radius", "8")
        assert code == 0 and "v = 7" in out

    def test_converge_json(self, capsys):
        code, out = run(capsys, "--json", "converge", "--chain", "bs:2:3",
                        "--radius", "4", "--n-max", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        assert doc["non_decreasing"] is True
        assert len(doc["rows"]) == 3

    def test_bs_met_wreath(self, capsys):
        witness = "t^-1 s t s t^-1 s^-1 t s^-1"
        code, _ = run(capsys, "bs", "--params", "2:3", "--word", witness)
        assert code == 1
        code, _ = run(capsys, "bs", "--params", "2:3", "--word", witness, "--phi", "1")
        assert code == 0
        code, out = run(capsys, "met", "--params", "2:3", "--word", witness)
        assert code == 0
        code, out = run(capsys, "wreath", "--base", "z", "--word", "s t s t^-1")
        assert code == 1 and "shift 0" in out

    def test_growth_csv(self, capsys):
        code, out = run(capsys, "growth", "--group", "gupta_sidki", "--n-max", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,gamma,elapsed_ms"
        assert [int(l.split(",")[1]) for l in lines[1:]] == [1, 5, 13, 29]


class TestJsonDeterminism:
    def test_same_invocation_same_bytes(self, capsys):
        _, first = run(capsys, "--json", "nucleus", "--group", "grigorchuk")
        _, second = run(capsys, "--json", "nucleus", "--group", "grigorchuk")
        assert first == second

    def test_byte_identical_across_processes(self):
        import subprocess
        import sys

        argv = [sys.executable, "-m", "contracta.cli", "--json",
                "converge", "--chain", "bs:2:3", "--radius", "3", "--n-max", "1"]
        first = subprocess.run(argv, capture_output=True, text=True)
        second = subprocess.run(argv, capture_output=True, text=True)
        assert first.returncode == 0
        assert first.stdout == second.stdout

    def test_every_subcommand_emits_valid_json(self, capsys, tmp_path):
        pres = tmp_path / "gn0.pres"
        _, out = run(capsys, "gn-pres", "--n", "0")
        pres.write_text(out)
        invocations = [
            ["wp", "--group", "grigorchuk", "--word", "a a"],
            ["eq", "--group", "grigorchuk", "--word", "b", "--other", "d c"],
            ["act", "--group", "grigorchuk", "--word", "a", "--vertex", "0"],
            ["section", "--group", "grigorchuk", "--word", "b", "--vertex", "1"],
            ["nucleus", "--group", "hanoi3"],
            ["cover", "--group", "gupta_sidki"],
            ["standard-cover", "--group", "img_z2_plus_i"],
            ["kernel-member", "--group", "grigorchuk", "--word", "a a", "--level", "2"],
            ["chain-profile", "--group", "grigorchuk", "--word", "a a", "--max-level", "2"],
            ["tc", "--pres", str(pres), "--subgroup", "b0"],
            ["kb", "--pres", str(pres)],
            ["rank", "--orders", "3,3", "--index", "9"],
            ["lysenok", "--kind", "v", "--n", "1"],
            ["gn-pres", "--n", "1"],
            ["hn-gens", "--n", "0"],
            ["gomega-wp", "--omega", ":01", "--word", "b b"],
            ["dist", "--group-a", "bs:2:3@0", "--group-b", "met:2:3", "--radius", "4"],
            ["converge", "--chain", "bs:2:3", "--radius", "3", "--n-max", "1"],
            ["growth", "--group", "basilica", "--n-max", "3", "--probe"],
            ["bs", "--params", "2:3", "--word", "t^-1 s^2 t s^-3"],
            ["met", "--params", "2:3", "--word", "s s^-1"],
            ["wreath", "--base", "z", "--word", "s s^-1"],
        ]
        for argv in invocations:
            code, out = run(capsys, "--json", *argv)
            assert code in (0, 1), argv
            doc = json.loads(out)
            assert doc["schema_version"] == 1
            assert doc["command"] == argv[0]

    def test_error_exit_code(self, capsys):
        code = cli.main(["wp", "--group", "nonexistent", "--word", "a"])
        assert code == 2
