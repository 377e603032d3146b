import json
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from resonant_filter import cli, states

SMALL = {
    "fig2": ["--points", "5"],
    "fig3": ["--points", "5"],
    "fig4": ["--N", "4"],
    "fig5": ["--N", "4"],
    "fig6": ["--points", "3", "--nodes", "8", "--panels", "2"],
    "fig7": ["--N", "4", "--nodes", "8", "--panels", "2"],
}


def invoke(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    """Blocks as (params, header, rows) from the commented CSV layout."""
    blocks = []
    for line in text.splitlines():
        if line.startswith("# block"):
            params = dict(kv.split("=") for kv in line[len("# block "):].split())
            blocks.append((params, None, []))
        elif line.startswith("#"):
            continue
        elif blocks and blocks[-1][1] is None:
            blocks[-1] = (blocks[-1][0], line.split(","), [])
        elif blocks:
            blocks[-1][2].append([float(x) for x in line.split(",")])
    return blocks


class TestFigures:
    @pytest.mark.parametrize("name", cli.FIGURES)
    def test_runs(self, capsys, name):
        code, out, _ = invoke(capsys, name, *SMALL[name])
        assert code == 0
        assert out.startswith(f"# resonant-filter {name}\n")
        assert parse_csv(out)

    def test_fig2_three_presets(self, capsys):
        _, out, _ = invoke(capsys, "fig2", "--g", "1.0", "--points", "4")
        blocks = parse_csv(out)
        assert [b[0]["g"] for b in blocks] == ["0.5", "1.0", "2.0"]
        assert blocks[0][1] == ["kd_over_pi", "transmission"]
        # the last grid point kd = 4 pi is resonant
        assert all(b[2][-1][1] == pytest.approx(1, abs=1e-12) for b in blocks)

    def test_fig2_extra_coupling(self, capsys):
        _, out, _ = invoke(capsys, "fig2", "--g", "0.7", "--points", "2")
        assert [b[0]["g"] for b in parse_csv(out)] == ["0.5", "1.0", "2.0", "0.7"]

    def test_fig4_panel_a(self, capsys):
        _, out, _ = invoke(capsys, "fig4", "--panel", "a")
        blocks = parse_csv(out)
        assert [b[0]["kd_over_pi"] for b in blocks] == ["1.0", "2.0", "3.0"]
        for _, header, rows in blocks:
            assert header == ["N", "F", "P"]
            rows = np.array(rows)
            assert_allclose(rows[:, 0], np.arange(31))
            assert rows[0, 1] == pytest.approx(0.25)
            assert rows[-1, 2] == pytest.approx(0.25, abs=1e-6)

    def test_fig4_panel_b(self, capsys):
        _, out, _ = invoke(capsys, "fig4", "--panel", "b", "--N", "3")
        assert [b[0]["g"] for b in parse_csv(out)] == ["0.5", "1.0", "2.0"]

    def test_fig5_three_schemes(self, capsys):
        _, out, _ = invoke(capsys, "fig5", "--N", "3")
        assert "updown" in out
        assert len(parse_csv(out)) == 3

    def test_json_mirrors_csv(self, capsys):
        _, csv_out, _ = invoke(capsys, "fig4", "--N", "3")
        _, json_out, _ = invoke(capsys, "fig4", "--N", "3", "--format", "json")
        doc = json.loads(json_out)
        assert doc["figure"] == "fig4"
        blocks = parse_csv(csv_out)
        assert len(doc["blocks"]) == len(blocks)
        assert doc["blocks"][0]["columns"] == blocks[0][1]
        assert_allclose(np.array(doc["blocks"][1]["rows"]), np.array(blocks[1][2]), rtol=0, atol=0)

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "f.csv"
        code, out, _ = invoke(capsys, "fig3", "--points", "3", "--out", str(target))
        assert code == 0 and out == ""
        assert target.read_text().startswith("# resonant-filter fig3")

    def test_deterministic(self, capsys):
        first = invoke(capsys, "fig6", *SMALL["fig6"])[1]
        assert invoke(capsys, "fig6", *SMALL["fig6"])[1] == first


class TestRho0:
    def test_presets(self):
        assert_allclose(cli.rho0_preset("mixed").mat, np.eye(4) / 4)
        assert_allclose(cli.rho0_preset("updown").mat, np.diag([0, 1, 0, 0]))
        assert_allclose(cli.rho0_preset("singlet").mat, states.singlet().mat)

    def test_custom_file(self, capsys, tmp_path):
        path = tmp_path / "rho.txt"
        np.savetxt(path, states.singlet().mat)
        assert_allclose(cli.rho0_preset(str(path)).mat, states.singlet().mat, atol=1e-15)
        _, out, _ = invoke(capsys, "fig4", "--N", "3", "--rho0", str(path))
        rows = np.array(parse_csv(out)[0][2])
        assert_allclose(rows[:, 1:], 1, atol=1e-12)

    def test_custom_without_file(self):
        with pytest.raises(cli.DomainError):
            cli.rho0_preset("custom")

    def test_invalid_file(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        np.savetxt(path, np.diag([1.0, 1.0, 0, 0]))
        assert invoke(capsys, "fig4", "--rho0", str(path))[0] == cli.EXIT_DOMAIN


class TestExitCodes:
    def test_unknown_flag(self, capsys):
        code, _, err = invoke(capsys, "fig2", "--bogus")
        assert code == cli.EXIT_USAGE
        assert "error" in err

    def test_missing_subcommand(self, capsys):
        assert invoke(capsys)[0] == cli.EXIT_USAGE

    @pytest.mark.parametrize("argv", [["fig2", "--kd", "-1"], ["fig4", "--N", "0"], ["fig6", "--epsilon", "-0.1"],
                                      ["fig4", "--rho0", "nonsense"], ["fig6", "--nodes", "1"]])
    def test_domain(self, capsys, argv):
        assert invoke(capsys, *argv)[0] == cli.EXIT_DOMAIN

    def test_io(self, capsys, tmp_path):
        assert invoke(capsys, "fig3", "--points", "2", "--out", str(tmp_path / "no" / "x.csv"))[0] == cli.EXIT_IO
        assert invoke(capsys, "sweep", str(tmp_path / "missing.cfg"))[0] == cli.EXIT_IO

    def test_verify_failure_code(self, capsys, monkeypatch):
        failing = cli.verify.CheckResult("x", False, "forced")
        monkeypatch.setattr(cli.verify, "run_all", lambda: [failing])
        assert invoke(capsys, "verify")[0] == cli.EXIT_VERIFY


class TestVerify:
    def test_passes(self, capsys, tmp_path):
        report = tmp_path / "report.txt"
        code, out, _ = invoke(capsys, "verify", "--out", str(report))
        assert code == 0
        assert report.read_text() == out
        assert len(out.splitlines()) == len(cli.verify.CHECKS)
        assert all(line.startswith("PASS") for line in out.splitlines())


SWEEP_CFG = """\
# two couplings, three wave vectors, two widths
g = 0.5, 1.0
kd = 1, 2, 3   # resonances
epsilon = 0, 0.05
N = 5, 10
nodes = 8
panels = 4
"""


class TestSweep:
    def write(self, tmp_path, text=SWEEP_CFG):
        path = tmp_path / "sweep.cfg"
        path.write_text(text)
        return str(path)

    def test_row_count_and_determinism(self, capsys, tmp_path):
        cfg = self.write(tmp_path)
        code, one, _ = invoke(capsys, "sweep", cfg, "--jobs", "1")
        assert code == 0
        _, two, _ = invoke(capsys, "sweep", cfg, "--jobs", "2")
        assert one == two
        rows = parse_csv(one)[0][2]
        assert len(rows) == 2 * 3 * 2 * 2

    def test_resonant_rows(self, capsys, tmp_path):
        cfg = self.write(tmp_path, "g = 1\nkd = 1\nN = 40\n")
        _, out, _ = invoke(capsys, "sweep", cfg, "--jobs", "1")
        (row,) = parse_csv(out)[0][2]
        g, kd, eps, n, f, p, l0, l1 = row
        assert f == pytest.approx(1, abs=1e-10)
        assert p == pytest.approx(0.25, abs=1e-10)
        assert l0 == pytest.approx(1, abs=1e-10)
        assert l1 < 1

    @pytest.mark.parametrize("text", ["color = red\n", "g 1\n", "kd = 0\n", "g = x\n", "scheme = magic\n",
                                      "scheme = transmission_and_spin\nepsilon = 0.1\n"])
    def test_bad_config(self, capsys, tmp_path, text):
        assert invoke(capsys, "sweep", self.write(tmp_path, text))[0] == cli.EXIT_DOMAIN

    def test_read_config_comments(self, tmp_path):
        cfg = cli.read_config(self.write(tmp_path))
        assert cfg["kd"] == "1, 2, 3"
        assert "#" not in "".join(cfg.values())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "resonant_filter", "fig3", "--points", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("# resonant-filter fig3")
