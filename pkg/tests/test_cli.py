from __future__ import annotations

import io
import json
import sys

import pytest

from orbitk import cli
from orbitk.core.models import VerificationReport
from orbitk.rules import expected_violations


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_orbit_text(clean_env, capsys):
    code, out = run(capsys, "orbit", "--x0", "8", "--k", "2", "--n", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "S(8,2) = 8, [2, 4], 2, 4, ..."
    assert "loop: 2 4" in lines
    assert "preperiod: 1" in lines
    assert "period: 2" in lines
    assert "stopping time: 3" in lines


def test_orbit_json(clean_env, capsys):
    code, out = run(capsys, "orbit", "--x0", "17", "--k", "15", "--n", "4", "--format", "json")
    assert code == 0
    document = json.loads(out)
    assert document["loop"] == [2, 17, 32]
    assert document["terms"] == [17, 32, 2, 17]
    assert document["period"] == 3


@pytest.mark.parametrize("argv", [("orbit", "--x0", "1", "--k", "2"), ("orbit", "--x0", "8", "--k", "0"), ("loops", "--k", "-3")])
def test_domain_errors_exit_1(clean_env, capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 1
    assert out == ""


def test_bad_flags_exit_1(clean_env):
    with pytest.raises(SystemExit) as exc:
        cli.main(["orbit", "--k", "2"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "collatz"])
    assert exc.value.code == 1


def test_loops_csv(clean_env, capsys):
    code, out = run(capsys, "loops", "--k", "2")
    assert code == 0
    assert out == "loop_id,period,min_element,elements\n0,2,2,2 4\n1,4,3,3 5 7 9\n"


def test_loops_json(clean_env, capsys):
    code, out = run(capsys, "loops", "--k", "1", "--format", "json")
    assert code == 0
    assert json.loads(out) == [{"loop_id": 0, "period": 3, "min_element": 2, "elements": "2 3 4"}]


def test_loops_paper_mode(clean_env, capsys):
    code, out = run(capsys, "loops", "--k", "2", "--mode", "paper")
    assert code == 0
    assert out == "loop_id,period,min_element,elements\n0,2,2,2 4\n"


def test_sweep_loops(clean_env, capsys):
    code, out = run(capsys, "sweep-loops", "--k-max", "3")
    assert code == 0
    assert out == "k,num_loops\n1,1\n2,2\n3,2\n"


def test_sweep_loops_same_bytes_for_any_thread_count(clean_env):
    single = clean_env / "one.csv"
    multi = clean_env / "two.csv"
    assert cli.main(["sweep-loops", "--k-max", "12", "--threads", "1", "--output", str(single)]) == 0
    assert cli.main(["sweep-loops", "--k-max", "12", "--threads", "2", "--output", str(multi)]) == 0
    assert single.read_bytes() == multi.read_bytes()


def test_threads_from_environment(clean_env, monkeypatch, capsys):
    monkeypatch.setenv("ORBITK_THREADS", "2")
    code, out = run(capsys, "sweep-loops", "--k-max", "3")
    assert code == 0
    assert out == "k,num_loops\n1,1\n2,2\n3,2\n"
    monkeypatch.setenv("ORBITK_THREADS", "many")
    code, _ = run(capsys, "sweep-loops", "--k-max", "3")
    assert code == 1


def test_sweep_periods(clean_env, capsys):
    code, out = run(capsys, "sweep-periods", "--l-max", "6", "--k-max", "3")
    assert code == 0
    assert out == "period,least_k\n2,2\n3,1\n4,2\n5,\n6,\n"


def test_long_sweeps_need_opt_in(clean_env, capsys):
    code, out = run(capsys, "sweep-loops", "--k-max", "5000")
    assert code == 1
    assert out == ""


def test_resource_limit_exit_2(clean_env, capsys):
    config = clean_env / "config"
    config.mkdir()
    (config / "orbitk.json").write_text(json.dumps({"sieve_max_bytes": 16}), encoding="utf-8")
    code, _ = run(capsys, "loops", "--k", "3")
    assert code == 2


def test_verify_odd(clean_env, capsys):
    code, out = run(capsys, "verify", "odd", "--k-max", "21", "--p-max", "20000")
    assert code == 0
    assert out == "claim,instance\n"


def test_verify_even_reports_allowlisted_pair(clean_env, capsys):
    code, out = run(capsys, "verify", "even", "--k-max", "20", "--p-max", "10000")
    assert code == 0
    assert out == "claim,instance\neven,k=2 p=3\n"


def test_verify_even_json(clean_env, capsys):
    code, out = run(capsys, "verify", "even", "--k-max", "10", "--p-max", "1000", "--format", "json")
    assert code == 0
    document = json.loads(out)
    assert document["violations"] == [{"k": 2, "p": 3}]
    assert document["unexpected"] == []


def test_verify_primorial_with_given_progressions(clean_env, capsys):
    code, out = run(capsys, "verify", "primorial", "--ap", "5,6,5", "--ap", "199,210,10")
    assert code == 0
    assert out == "claim,instance\n"


def test_verify_primorial_rejects_non_prime_progression(clean_env, capsys):
    code, _ = run(capsys, "verify", "primorial", "--ap", "4,6,5")
    assert code == 1


def test_verify_loop_bound(clean_env, capsys):
    code, out = run(capsys, "verify", "loop-bound", "--k-max", "8")
    assert code == 0
    assert "loop-bound,k=2 bound=paper min_prime=3 loop=3 5 7 9" in out.splitlines()


def test_unexpected_violations_exit_3(clean_env, capsys, monkeypatch):
    monkeypatch.setitem(expected_violations.SMALL_K_LIMITS, "loop-bound", 0)
    code, _ = run(capsys, "verify", "loop-bound", "--k-max", "3")
    assert code == 3


def test_verify_two_power(clean_env, capsys):
    code, out = run(capsys, "verify", "two-power", "--n-max", "20")
    assert code == 0
    assert out == "claim,instance\n"
    code, _ = run(capsys, "verify", "two-power", "--n-max", "64")
    assert code == 1


def test_verify_prime_run(clean_env, capsys):
    code, out = run(capsys, "verify", "prime-run", "--k-max", "6", "--x-max", "200")
    assert code == 0
    ks = {line.split()[0] for line in out.splitlines()[1:]}
    assert ks == {"prime-run,k=1", "prime-run,k=2"}


def test_find_ap(clean_env, capsys):
    code, out = run(capsys, "find-ap", "--length", "4")
    assert code == 0
    assert out == "first,difference,length,stopping_time\n5,6,4,10\n"


def test_find_ap_nothing_in_box(clean_env, capsys):
    code, out = run(capsys, "find-ap", "--length", "10", "--d-max", "100")
    assert code == 0
    assert out == "first,difference,length,stopping_time\n"


def test_repeated_runs_survive_a_closed_stderr(clean_env, monkeypatch, capsys):
    first = io.StringIO()
    monkeypatch.setattr(sys, "stderr", first)
    assert cli.main(["loops", "--k", "1"]) == 0
    first.close()
    second = io.StringIO()
    monkeypatch.setattr(sys, "stderr", second)
    assert cli.main(["loops", "--k", "1", "--log-level", "info"]) == 0
    assert "loops from" in second.getvalue()
    capsys.readouterr()


def test_verify_even_fails_when_known_counterexample_disappears(clean_env, capsys, monkeypatch):
    def no_violations(k_values, p_limit, table, s_cap, threads):
        return VerificationReport(
            claim="even",
            grid="even k",
            checked=1,
            scope={"k_values": list(k_values), "p_limit": p_limit},
        )

    monkeypatch.setattr(cli, "verify_even_descent", no_violations)
    code, _ = run(capsys, "verify", "even", "--k-max", "10", "--p-max", "1000")
    assert code == 3


def test_verify_even_without_k2_needs_no_counterexample(clean_env, capsys):
    code, out = run(capsys, "verify", "even", "--k-min", "4", "--k-max", "12", "--p-max", "2000")
    assert code == 0
    assert out == "claim,instance\n"


def test_verify_empty_grid_is_a_usage_error(clean_env, capsys):
    code, out = run(capsys, "verify", "odd", "--k-min", "4", "--k-max", "4")
    assert code == 1
    assert out == ""


def test_malformed_config_exit_1(clean_env, capsys):
    config = clean_env / "config"
    config.mkdir()
    (config / "orbitk.json").write_text("{not json", encoding="utf-8")
    code, out = run(capsys, "loops", "--k", "3")
    assert code == 1
    assert out == ""
