# tests/test_config.py
# -*- coding: utf-8 -*-
import pytest

from common.config import (
    SimulationConfig,
    build_parser,
    get_settings,
    load_init_values,
    log_level_from,
    parse_cli,
    parse_config,
)
from common.errors import EXIT_RUNTIME, EXIT_USAGE, DisconnectedTopologyError, UsageError, exit_code_for


def test_defaults_and_flags():
    cfg = parse_config(["--topology", "complete", "--nodes", "10", "--seed", "42"])
    assert (cfg.topology, cfg.n, cfg.seed) == ("complete", 10, 42)
    assert cfg.bits == 16
    assert cfg.swap_enabled is True
    assert cfg.max_iterations == 100_000
    assert cfg.record_every == 1
    assert cfg.trials == 1
    assert cfg.stop_at_consensus is True
    assert cfg.quantizer().step == pytest.approx(1 / 65535)


def test_rgg_flags():
    cfg = parse_config(["--topology", "rgg", "--nodes", "10", "--radius", "0.8", "--box", "1.0"])
    spec = cfg.topology_spec
    assert (spec.name, spec.n, spec.box_side, spec.radius, spec.max_attempts) == ("rgg", 10, 1.0, 0.8, 100)


def test_nodes_below_two_names_key():
    with pytest.raises(UsageError) as info:
        parse_config(["--nodes", "1"])
    assert info.value.key == "nodes"
    assert "nodes" in str(info.value)


def test_ring_needs_three_nodes():
    with pytest.raises(UsageError):
        parse_config(["--topology", "ring", "--nodes", "2"])


def test_unknown_flag_is_usage_error():
    with pytest.raises(UsageError):
        parse_config(["--colour", "red"])


def test_real_mode_tolerance_defaults_to_step():
    cfg = parse_config(["--mode", "real", "--bits", "4"])
    assert cfg.quantizer() is None
    assert cfg.effective_tol() == pytest.approx(1 / 15)
    assert parse_config(["--mode", "real", "--tol", "1e-6"]).effective_tol() == 1e-6
    assert parse_config([]).effective_tol() is None


def test_bool_flags():
    cfg = parse_config(["--no-swap", "--run-to-cap", "--full-state"])
    assert cfg.swap_enabled is False
    assert cfg.stop_at_consensus is False
    assert cfg.full_state is True


def test_file_values_and_flag_override(tmp_path):
    f = tmp_path / "exp.env"
    f.write_text("topology=ring\nnodes=12\nseed=5\nmax_iters=500\nswap=false\n", encoding="utf-8")
    cfg = parse_config(["--seed", "9"], file=str(f))
    assert (cfg.topology, cfg.n, cfg.max_iterations, cfg.swap_enabled) == ("ring", 12, 500, False)
    assert cfg.seed == 9


def test_config_flag_points_to_file(tmp_path):
    f = tmp_path / "exp.env"
    f.write_text("trials=7\n", encoding="utf-8")
    assert parse_config(["--config", str(f)]).trials == 7


def test_file_rejects_unknown_key(tmp_path):
    f = tmp_path / "exp.env"
    f.write_text("nodes=10\nwarp_speed=9\n", encoding="utf-8")
    with pytest.raises(UsageError) as info:
        parse_config([], file=str(f))
    assert info.value.key == "warp_speed"


def test_file_rejects_bad_value(tmp_path):
    f = tmp_path / "exp.env"
    f.write_text("nodes=ten\n", encoding="utf-8")
    with pytest.raises(UsageError) as info:
        parse_config([], file=str(f))
    assert info.value.key == "nodes"


def test_env_defaults(monkeypatch):
    monkeypatch.setenv("GOSSIP_SEED", "77")
    monkeypatch.setenv("GOSSIP_BITS", "8")
    monkeypatch.setenv("GOSSIP_OUT_DIR", "resultados")
    cfg = parse_config([])
    assert (cfg.seed, cfg.bits, cfg.out_dir) == (77, 8, "resultados")
    assert parse_config(["--seed", "1"]).seed == 1
    assert get_settings() is get_settings()


def test_env_bad_integer(monkeypatch):
    monkeypatch.setenv("GOSSIP_MAX_ITERS", "mucho")
    with pytest.raises(UsageError) as info:
        parse_config([])
    assert info.value.key == "GOSSIP_MAX_ITERS"


def test_init_file_json_and_text(tmp_path):
    j = tmp_path / "init.json"
    j.write_text("[0.1, 0.2, 0.3]", encoding="utf-8")
    t = tmp_path / "init.txt"
    t.write_text("0.1, 0.2\n0.3\n", encoding="utf-8")
    assert load_init_values(str(j)) == (0.1, 0.2, 0.3)
    assert load_init_values(str(t)) == (0.1, 0.2, 0.3)

    cfg = parse_config(["--nodes", "3", "--init", f"file:{j}"])
    assert cfg.init_values == (0.1, 0.2, 0.3)


def test_init_file_length_and_range(tmp_path):
    j = tmp_path / "init.json"
    j.write_text("[0.1, 0.2, 1.3]", encoding="utf-8")
    with pytest.raises(UsageError) as info:
        parse_config(["--nodes", "4", "--init", f"file:{j}"])
    assert info.value.key == "init"
    with pytest.raises(UsageError):
        parse_config(["--nodes", "3", "--init", f"file:{j}"])
    # en modo real no hay rango que respetar
    assert parse_config(["--nodes", "3", "--mode", "real", "--init", f"file:{j}"]).init_values[2] == 1.3


@pytest.mark.parametrize("content", ['[1, "a"]', "[1, null]", "[[1, 2]]", "0.1 abc"])
def test_init_file_non_numeric_is_usage_error(tmp_path, content):
    f = tmp_path / "init.json"
    f.write_text(content, encoding="utf-8")
    with pytest.raises(UsageError) as info:
        load_init_values(str(f))
    assert info.value.key == "init"
    assert exit_code_for(info.value) == EXIT_USAGE


def test_init_bad_spec():
    with pytest.raises(UsageError):
        parse_config(["--init", "gaussian"])


def test_echo_drops_output_location():
    a = parse_config(["--out", "dir_a"]).echo()
    b = parse_config(["--out", "dir_b"]).echo()
    assert a == b
    assert "out_dir" not in a


def test_with_nodes_revalidates():
    cfg = SimulationConfig(topology="ring", n=10)
    assert cfg.with_nodes(20, 3).n == 20
    with pytest.raises(UsageError):
        cfg.with_nodes(2, 3)


def test_log_level_flags():
    ap = build_parser()
    _, ns = parse_cli(["-v"], parser=ap)
    assert log_level_from(ns) == "DEBUG"
    _, ns = parse_cli(["--quiet"], parser=build_parser())
    assert log_level_from(ns) == "WARNING"
    _, ns = parse_cli([], parser=build_parser())
    assert log_level_from(ns) is None


def test_exit_codes():
    assert exit_code_for(UsageError("x", key="nodes")) == EXIT_USAGE
    assert exit_code_for(DisconnectedTopologyError("sin conexión", attempts=3)) == EXIT_RUNTIME
