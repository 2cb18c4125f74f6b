import pytest

from minsurf.cli import main
from minsurf.config import SECTION_NAMES, build_family, load_config, parse_config
from minsurf.errors import ConfigError
from minsurf.surfaces import LogSinh, TimeShifted


def test_defaults():
    cfg = load_config(None)
    assert cfg.families == ["arctan", "logsinh"]
    assert cfg.sections == list(SECTION_NAMES)
    assert cfg.solve_h_list == [1 / 16, 1 / 32, 1 / 64]


def test_parse_all_sections():
    cfg = parse_config("""
[audit]
family = logsinh        ; alias
k = 2
T = 3.5
nt = 5
sections = residuals, ode
[reduce]
profiles = 7
[ode]
C = 2
step = 1/500
[solve]
rect = 0.5, 1.5, -0.5, 0.5
h_list = 1/8, 1/16, 1/32
[singularity]
T = 4
[coeffs]
k = 0.5
""")
    assert cfg.families == ["logsinh"] and cfg.k == 2.0 and cfg.T == 3.5 and cfg.nt == 5
    assert cfg.sections == ["residuals", "ode"]
    assert cfg.reduce_profiles == 7 and cfg.ode_C == 2.0 and cfg.ode_step == pytest.approx(0.002)
    assert cfg.solve_rect == (0.5, 1.5, -0.5, 0.5) and cfg.solve_h_list[-1] == 1 / 32
    assert cfg.singularity_T == 4.0 and cfg.coeffs_k == 0.5
    assert build_family(cfg, "logsinh") == TimeShifted(LogSinh(2.0), 3.5)


@pytest.mark.parametrize("text,key", [
    ("[audit]\nt_min = 0\n", "t_min"),
    ("[audit]\nfamilies = helicoid\n", "families"),
    ("[audit]\nsections = everything\n", "sections"),
    ("[audit]\nT = -1\n", "T"),
    ("[audit]\nk = 0\n", "k"),
    ("[audit]\nnt = many\n", "nt"),
    ("[audit]\nbogus = 1\n", "bogus"),
    ("[nowhere]\nk = 1\n", "nowhere"),
    ("[solve]\nh_list = 1/8, 1/16\n", "h_list"),
    ("[ode]\nrho_min = 1\n", "rho_min"),
])
def test_config_errors_name_the_key(text, key):
    with pytest.raises(ConfigError, match=key):
        parse_config(text)


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/minsurf.ini")


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[audit]\nt_min = -1\n")
    assert main(["curvature", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "t_min" in capsys.readouterr().err


def test_cli_subcommands(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[audit]\nnt = 3\nnx = 3\n[reduce]\nprofiles = 5\n[ode]\nrho_min = -2\nrho_max = 2\nstep = 1e-2\n"
                   "[solve]\nh_list = 1/4, 1/8, 1/16\n[singularity]\nn = 5\n")
    out = tmp_path / "out"
    for cmd in ("curvature", "reduce", "solve", "singularity", "compare-coeffs", "ode"):
        assert main([cmd, "--config", str(cfg), "--out", str(out)]) == 0, cmd
    names = {p.name for p in out.iterdir()}
    assert {"curvature-arctan(k=1).csv", "reduction.csv", "convergence-logsinh(k=1).csv",
            "singularity-arctan(k=1).csv", "compare-coeffs.csv", "profile-paper.csv", "profile-alt.csv"} <= names
    assert "order" in capsys.readouterr().out


def test_cli_audit_sections(tmp_path, capsys):
    out = tmp_path / "a"
    assert main(["audit", "--sections", "singularity,reduction", "--out", str(out), "--workers", "2"]) == 0
    text = capsys.readouterr().out
    assert "singular-trace:arctan(k=1)" in text and "reduced-equation" in text
    assert any(p.name.startswith("audit-") and p.suffix == ".json" for p in out.iterdir())


def test_cli_unknown_section_is_config_error(tmp_path):
    assert main(["audit", "--sections", "nope", "--out", str(tmp_path)]) == 2
