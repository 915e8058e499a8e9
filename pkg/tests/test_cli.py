import json

import pytest

from dirichlet_forge import cli
from dirichlet_forge.arith import sieve_primes


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestCommands:
    def test_zeta(self, capsys):
        rec = run_json(capsys, "zeta", "--sigma", "2")
        assert rec["re"] == pytest.approx(1.6449340668, abs=1e-10)
        assert rec["op"] == "zeta" and rec["im"] == 0

    def test_hurwitz(self, capsys):
        assert run_json(capsys, "zeta", "--sigma", "2", "--x", "0.5")["re"] == pytest.approx(4.934802200544681, rel=1e-11)

    def test_lfunction(self, capsys):
        assert run_json(capsys, "lfunction", "--character", "4:1", "--sigma", "1")["re"] == pytest.approx(0.785398163397)

    def test_dirichlet(self, capsys):
        rec = run_json(capsys, "dirichlet", "--coeff", "liouville", "--sigma", "2", "--terms", "100000")
        assert rec["re"] == pytest.approx(0.6579736, abs=1e-4)

    def test_beurling(self, capsys):
        rec = run_json(capsys, "beurling", "--system", "quadratic:-1", "--sigma", "2")
        assert rec["re"] == pytest.approx(1.5067030, abs=1e-4)

    def test_beurling_probes(self, capsys):
        assert run_json(capsys, "beurling", "--probe", "prime-sum", "--sigma", "2")["value"] == pytest.approx(0.4522474, abs=1e-4)
        assert run_json(capsys, "beurling", "--probe", "divergence", "--terms", "10000")["passed"]
        assert run_json(capsys, "beurling", "--probe", "identity", "--system", "quadratic:-1", "--terms", "10000")["passed"]

    def test_custom_coefficient_file(self, capsys, tmp_path):
        table = tmp_path / "lam.txt"
        table.write_text("# liouville by hand\n" + "".join(f"{p} -1 0\n" for p in sieve_primes(1000).primes))
        custom = run_json(capsys, "dirichlet", "--coeff", f"custom:{table}", "--sigma", "2", "--terms", "1000")
        builtin = run_json(capsys, "dirichlet", "--coeff", "liouville", "--sigma", "2", "--terms", "1000")
        assert custom["re"] == pytest.approx(builtin["re"], abs=1e-12)

    def test_custom_coefficient_file_incomplete(self, capsys, tmp_path):
        table = tmp_path / "short.txt"
        table.write_text("2 -1 0\n3 -1 0\n")
        code, _, err = run(capsys, "dirichlet", "--coeff", f"custom:{table}", "--sigma", "2", "--terms", "100")
        assert code == 2 and "5" in err

    def test_custom_system_file(self, capsys, tmp_path):
        table = tmp_path / "classical.txt"
        table.write_text("#beta0=2 degree=1\n" + "".join(f"{p} {p}\n" for p in sieve_primes(1000).primes))
        custom = run_json(capsys, "beurling", "--system", f"custom:{table}", "--sigma", "3", "--terms", "1000")
        builtin = run_json(capsys, "beurling", "--system", "classical", "--sigma", "3", "--terms", "1000")
        assert custom["re"] == pytest.approx(builtin["re"], abs=1e-12)

    def test_exp_identity(self, capsys):
        rec = run_json(capsys, "exp-identity", "--coeff", "character:5:1", "--terms", "10000")
        assert rec["passed"] and rec["params"]["sigma"] == 3.0

    def test_monotone_pass_and_fail(self, capsys):
        assert run_json(capsys, "monotone")["passed"]
        code, out, _ = run(capsys, "monotone", "--function", "linear")
        assert code == 1 and json.loads(out)["failed_order"] == 1
        code, _, _ = run(capsys, "monotone", "--function", "linear", "--expect-fail")
        assert code == 0

    def test_radius(self, capsys, tmp_path):
        rec = run_json(capsys, "radius", "--terms", "100000", "--export", str(tmp_path / "s.csv"))
        assert rec["radius"] == pytest.approx(1.0, rel=0.1)
        rec = run_json(capsys, "radius", "--input", str(tmp_path / "s.csv"), "--exp-check")
        assert rec["op"] == "radius_equality"
        assert run_json(capsys, "radius", "--series", "z", "--exp-check")["radius_f"] == "beyond window"

    def test_zerofree(self, capsys):
        rec = run_json(capsys, "zerofree", "--check", "minimum", "--grid", "400")
        assert rec["minimum"] == pytest.approx(-1.125)
        assert run_json(capsys, "zerofree", "--check", "toy", "--t0", "1", "--sigma", "2", "--terms", "100000")["passed"]
        assert run_json(capsys, "zerofree", "--check", "liouville", "--sigma", "2", "--terms", "100000")["passed"]
        assert run_json(capsys, "zerofree", "--check", "chain", "--character", "4:1", "--sigma", "1", "--terms", "1000")["passed"]

    def test_pingpong(self, capsys):
        rec = run_json(capsys, "pingpong", "--seed-b", "1")
        assert 3.0 in rec["A"] and 3.0 in rec["B"]
        rec = run_json(capsys, "pingpong", "--disjoint")
        assert rec["A"] == [0.0] and rec["B"] == [] and rec["contradiction"] is False
        assert run_json(capsys, "pingpong", "--seed-a", "1", "--disjoint")["contradiction"] is True

    def test_verify_all(self, capsys):
        rec = run_json(capsys, "verify-all", "--max-n", "1000")
        assert rec["failures"] == 0 and rec["total"] == len(rec["checks"])


class TestOutput:
    def test_float_formatting(self, capsys):
        _, out, _ = run(capsys, "zeta", "--sigma", "3")
        assert '"re": 1.20205690316,' in out
        assert out == json.dumps(json.loads(out), sort_keys=True) + "\n"

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "zeta", "--sigma", "2", "--format", "csv")
        header, row = out.strip().splitlines()
        assert code == 0
        assert header.split(",") == sorted(header.split(","))
        assert "1.64493406685" in row

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "o.json"
        code, out, _ = run(capsys, "zeta", "--output", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["op"] == "zeta"

    def test_deterministic(self, capsys):
        outs = {run(capsys, "verify-all", "--max-n", "1000", "--threads", t)[1] for t in ("1", "4", "4")}
        assert len(outs) == 1


class TestUsage:
    @pytest.mark.parametrize("argv", [
        ["zeta", "--sigma", "abc"],
        ["zeta", "--bogus"],
        ["nope"],
        [],
        ["zeta", "--threads", "0"],
        ["zerofree", "--grid", "10"],
        ["lfunction", "--character", "4"],
        ["dirichlet", "--coeff", "weird"],
        ["dirichlet", "--terms", "2000000"],
        ["dirichlet", "--system", "nowhere"],
        ["exp-identity", "--sigma", "1"],
        ["zeta", "--sigma", "1"],
        ["pingpong", "--seed-a", "99"],
    ])
    def test_exit_two(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2 and out == "" and err


class TestConfig:
    def test_file_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("# defaults\nsigma = 2\n")
        assert run(capsys, "zeta", "--config", str(cfg))[1] == run(capsys, "zeta", "--sigma", "2")[1]

    def test_empty_file(self, capsys, tmp_path):
        cfg = tmp_path / "e.cfg"
        cfg.write_text("")
        assert run(capsys, "zeta", "--config", str(cfg))[1] == run(capsys, "zeta")[1]

    def test_flag_wins(self, capsys, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("sigma = 3\n")
        assert run_json(capsys, "zeta", "--config", str(cfg), "--sigma", "2")["params"]["sigma"] == 2.0

    def test_env_var(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("sigma = 4\nformat = csv\n")
        monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
        code, out, _ = run(capsys, "zeta")
        assert code == 0 and out.startswith("error_bound,") and ",4.0," in out

    @pytest.mark.parametrize("text", ["nonsense\n", "sigma 2\n", "unknown_key = 1\n", "sigma = x\n"])
    def test_bad_files(self, capsys, tmp_path, text):
        cfg = tmp_path / "b.cfg"
        cfg.write_text(text)
        assert run(capsys, "zeta", "--config", str(cfg))[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "zeta", "--config", str(tmp_path / "none.cfg"))[0] == 2
