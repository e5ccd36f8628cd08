"""Command-line front end: parsing, subcommands, exit codes, determinism."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qconsensus.cli import (
    TopologyError,
    load_topology,
    main,
    parse_topology,
    resolve_weights,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- topology parsing ---


def test_presets_all_load():
    for name in ("g1-3", "g2-3", "g3-3", "g1-4"):
        spec = load_topology(name)
        assert spec.name == name
        assert spec.budget == 1.0
        assert len(spec.gens) >= 2


def test_preset_single_cycle_shape():
    spec = load_topology("g1-3")
    assert spec.n == 3 and spec.d == 2
    assert spec.gens.labels == ("w123", "w12")
    assert spec.gens.perms == ((2, 3, 1), (2, 1, 3))


def test_parse_topology_full_file():
    text = """
# a two-site toy
name: pair
N: 2
d: 3
budget: 0.5
generator: (1 2) weight wswap
"""
    spec = parse_topology(text)
    assert spec.name == "pair"
    assert spec.n == 2
    assert spec.d == 3
    assert spec.budget == 0.5
    assert spec.gens.labels == ("wswap",)
    assert spec.fixed == {}


def test_parse_topology_fixed_weights():
    text = (
        "name: t\nN: 3\n"
        "generator: (1 2 3) weight 0.25\n"
        "generator: (1 2) weight 0.1\n"
    )
    spec = parse_topology(text)
    assert spec.gens.labels == ("w1", "w2")
    assert spec.fixed == {"w1": 0.25, "w2": 0.1}


def test_parse_topology_mixed_fixed_and_symbolic():
    text = (
        "name: t\nN: 3\n"
        "generator: (1 2 3) weight wc\n"
        "generator: (1 2) weight 0.1\n"
    )
    spec = parse_topology(text)
    assert spec.gens.labels == ("wc", "w2")
    assert spec.fixed == {"w2": 0.1}


def test_parse_topology_disjoint_cycles_one_generator():
    text = "name: t\nN: 4\ngenerator: (1 2)(3 4) weight wd\n"
    spec = parse_topology(text)
    assert spec.gens.perms == ((2, 1, 4, 3),)


def test_parse_topology_errors_carry_line_numbers():
    with pytest.raises(TopologyError, match=r"bad\.topo:2"):
        parse_topology("name: t\nNN: 3\n", source="bad.topo")
    with pytest.raises(TopologyError, match=r":3:.*out of range"):
        parse_topology("name: t\nN: 3\ngenerator: (1 5) weight w\n")
    with pytest.raises(TopologyError, match="missing 'weight"):
        parse_topology("name: t\nN: 3\ngenerator: (1 2) w\n")
    with pytest.raises(TopologyError, match="'N'"):
        parse_topology("name: t\ngenerator: (1 2) weight w\n")


def test_negative_weights_rejected_at_resolve_time():
    spec = parse_topology("name: t\nN: 3\ngenerator: (1 2) weight -0.5\n")
    with pytest.raises(TopologyError, match="nonnegative"):
        resolve_weights(spec, None)
    with pytest.raises(TopologyError, match="nonnegative"):
        resolve_weights(load_topology("g1-3"), "-0.1,0.2")


def test_resolve_weights_fills_symbolic_labels():
    spec = load_topology("g1-3")
    w = resolve_weights(spec, "0.3,0.1")
    assert_allclose(w, [0.3, 0.1])


def test_resolve_weights_count_mismatch():
    spec = load_topology("g1-3")
    with pytest.raises(TopologyError, match="2"):
        resolve_weights(spec, "0.3")


def test_resolve_weights_requires_values_for_symbolic():
    spec = load_topology("g1-3")
    with pytest.raises(TopologyError):
        resolve_weights(spec, None)


# --- rates ---


def test_rates_balanced_single_cycle(capsys):
    code, out, _ = run(capsys, "rates", "g1-3", "--weights", "0.2,0.2")
    assert code == 0
    assert "lambda_cons: 0.4" in out
    assert "lambda_synch: 0.4" in out
    assert "aldous: true" in out
    assert "(2,1):" in out and "(1,1,1):" in out


def test_rates_directed_asymmetry(capsys):
    code, out, _ = run(capsys, "rates", "g1-3", "--weights", "0.3,0.1")
    assert code == 0
    assert "aldous: false" in out
    assert "lambda_cons: 0.2" in out


def test_rates_both_directions(capsys):
    code, out, _ = run(capsys, "rates", "g2-3", "--weights", "0.2,0.2,0.2")
    assert code == 0
    assert "lambda_synch: 0.6" in out
    assert "lambda_cons: 0.4" in out


def test_rates_output_is_deterministic(capsys):
    _, out1, _ = run(capsys, "rates", "g1-4", "--weights", "0.11,0.13,0.17")
    _, out2, _ = run(capsys, "rates", "g1-4", "--weights", "0.11,0.13,0.17")
    assert out1 == out2


def test_rates_from_topology_file(tmp_path, capsys):
    topo = tmp_path / "ring.topo"
    topo.write_text("name: ring4\nN: 4\nbudget: 2\ngenerator: (1 2 3 4) weight wr\n")
    code, out, _ = run(capsys, "rates", str(topo), "--weights", "0.25")
    assert code == 0
    assert "topology: ring4" in out


def test_rates_fixed_weight_file(tmp_path, capsys):
    topo = tmp_path / "fixed.topo"
    topo.write_text(
        "name: t\nN: 3\n"
        "generator: (1 2 3) weight 0.2\n"
        "generator: (1 2) weight 0.2\n"
    )
    code, out, _ = run(capsys, "rates", str(topo))
    assert code == 0
    assert "lambda_cons: 0.4" in out


# --- exit codes ---


def test_unknown_preset_is_config_error(capsys):
    code, _, err = run(capsys, "rates", "nope-7")
    assert code == 2
    assert "error" in err


def test_bad_weight_count_is_config_error(capsys):
    code, _, err = run(capsys, "rates", "g1-3", "--weights", "0.1")
    assert code == 2


def test_group_cap_exit_code(tmp_path, capsys):
    topo = tmp_path / "big.topo"
    topo.write_text(
        "name: big\nN: 8\n"
        "generator: (1 2 3 4 5 6 7 8) weight wc\n"
        "generator: (1 2) weight wt\n"
    )
    code, _, err = run(capsys, "rates", str(topo), "--weights", "0.1,0.1")
    assert code == 4
    assert "cap" in err.lower()


def test_step_size_failure_exit_code(capsys, tmp_path):
    out = tmp_path / "t.csv"
    code, _, err = run(
        capsys, "simulate", "g1-3", "--weights", "1.0,1.0",
        "--t", "60", "--dt", "5.0", "--out", str(out),
    )
    assert code == 3
    assert "numerical failure" in err


# --- optimize ---


def grab(out, prefix):
    for line in out.splitlines():
        if line.startswith(prefix):
            return line[len(prefix):].strip()
    raise AssertionError(f"no line starting with {prefix!r} in output")


def test_optimize_consensus(capsys):
    code, out, _ = run(capsys, "optimize", "g1-3")
    assert code == 0
    assert_allclose(float(grab(out, "best value:")), 0.4, atol=1e-6)
    weights_line = grab(out, "weights:")
    vals = dict(tok.split("=") for tok in weights_line.split())
    assert_allclose(float(vals["w123"]), 0.2, atol=1e-4)
    assert_allclose(float(vals["w12"]), 0.2, atol=1e-4)


def test_optimize_synchronization(capsys):
    code, out, _ = run(capsys, "optimize", "g1-4", "--objective", "synchronization")
    assert code == 0
    assert_allclose(float(grab(out, "best value:")), 0.25, atol=1e-6)


# --- pareto ---


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
    return header, rows


def test_pareto_writes_csv(tmp_path, capsys):
    out = tmp_path / "cloud.csv"
    code, text, _ = run(
        capsys, "pareto", "g1-3", "--resolution", "25", "--out", str(out)
    )
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["w123", "w12", "lambda_cons", "lambda_synch", "on_front"]
    assert len(rows) == 26
    for w1, w2, cons, synch, flag in rows:
        assert_allclose(3 * w1 + 2 * w2, 1.0, atol=1e-12)
        assert flag in (0.0, 1.0)
    assert "points: 26" in text
    # the balanced optimum sits on this grid
    best = max(r[2] for r in rows)
    assert_allclose(best, 0.4, atol=1e-9)


def test_pareto_reruns_are_byte_identical(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run(capsys, "pareto", "g1-3", "--resolution", "30", "--out", str(a))
    run(capsys, "pareto", "g1-3", "--resolution", "30", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


# --- simulate ---


def test_simulate_writes_trajectory(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code, text, _ = run(
        capsys, "simulate", "g1-3", "--weights", "0.2,0.2",
        "--t", "2", "--store-every", "100", "--out", str(out),
    )
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["t", "sync_distance", "distance_to_consensus"]
    assert rows[0][0] == 0.0
    assert rows[-1][0] == 2.0
    # distances shrink over a couple of time units
    assert rows[-1][1] < rows[0][1]
    assert rows[-1][2] < rows[0][2]
    assert "wrote:" in text


def test_simulate_short_run_reports_unavailable_fits(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code, text, _ = run(
        capsys, "simulate", "g1-3", "--weights", "0.2,0.2",
        "--t", "1", "--out", str(out),
    )
    assert code == 0
    assert "unavailable" in text


def test_simulate_rho0_from_file(tmp_path, capsys):
    rho_file = tmp_path / "rho.txt"
    # two-site topology: a product state with site asymmetry
    rho_file.write_text(
        "0.45 0 0.15 0\n0 0.05 0 0.01666666666666667\n"
        "0.15 0 0.45 0\n0 0.01666666666666667 0 0.05\n"
    )
    topo = tmp_path / "pair.topo"
    topo.write_text("name: pair\nN: 2\ngenerator: (1 2) weight w\n")
    out = tmp_path / "traj.csv"
    code, text, _ = run(
        capsys, "simulate", str(topo), "--weights", "0.5",
        "--rho0", str(rho_file), "--t", "2", "--out", str(out),
    )
    assert code == 0


def test_simulate_rejects_bad_rho0(tmp_path, capsys):
    rho_file = tmp_path / "rho.txt"
    rho_file.write_text("1 0\n0 1\n")  # trace 2
    topo = tmp_path / "one.topo"
    topo.write_text("name: one\nN: 2\ngenerator: (1 2) weight w\n")
    code, _, err = run(
        capsys, "simulate", str(topo), "--weights", "0.5", "--rho0", str(rho_file)
    )
    assert code == 2
    assert "bad initial state" in err


# --- spectrum ---


def test_spectrum_single_partition(capsys):
    code, out, _ = run(
        capsys, "spectrum", "g1-3", "--weights", "0.2,0.2", "--partition", "2,1"
    )
    assert code == 0
    assert "partition: (2,1)  vertices: 3" in out
    assert "laplacian:" in out and "spectrum:" in out


def test_spectrum_rejects_trivial_partition(capsys):
    code, _, err = run(
        capsys, "spectrum", "g1-3", "--weights", "0.2,0.2", "--partition", "3"
    )
    assert code == 2
    assert "one-part partition" in err


def test_spectrum_all_prints_verdict(capsys):
    code, out, _ = run(capsys, "spectrum", "g1-4", "--weights", "0.1,0.2,0.15", "--all")
    assert code == 0
    assert "intertwining:" in out
    assert "verdict: all inclusions hold" in out


def test_spectrum_needs_partition_or_all(capsys):
    code, _, err = run(capsys, "spectrum", "g1-3", "--weights", "0.2,0.2")
    assert code == 2
