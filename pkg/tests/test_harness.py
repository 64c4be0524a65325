import numpy as np
import pytest

from friedrichs import ConvergenceError, ParameterError
from friedrichs.harness import ConfigError, load_config
from friedrichs.harness import cli
from friedrichs.harness.config import parse_dt_policy
from friedrichs.harness.output import read_metrics, read_series
from friedrichs.harness.scenarios import fitted_decay_rate, front_position, local_peaks, uniform_grid


def write_ini(tmp_path, text):
    path = tmp_path / "run.ini"
    path.write_text(text)
    return str(path)


def test_defaults(cfg):
    assert (cfg.omega1, cfg.lam, cfg.cutoff_M, cfg.box_L, cfg.n_modes) == (2.0, 0.1, 5.0, 100.0, 1200)
    assert cfg.x_step == pytest.approx(100.0 / 1200)
    assert "[model]\nomega1 = 2.0\nlambda = 0.1" in cfg.echo()


def test_ini_overrides_and_keywords(tmp_path):
    path = write_ini(tmp_path, "[model]\nlambda = 0.05\n[evolution]\ndt_policy = fixed:0.01\n")
    cfg = load_config(path)
    assert cfg.lam == 0.05 and cfg.dt_policy == "fixed:0.01"
    assert load_config(path, dt_policy="auto", tolerance=None).dt_policy == "auto"


@pytest.mark.parametrize(
    "text",
    [
        "[modle]\nomega1 = 2\n",
        "[model]\nomega = 2\n",
        "[model]\nlambda = abc\n",
        "[model]\nlambda = 0.6\n",
        "[discretization]\nn_modes = 0\n",
        "[survival]\nt_min = 5\nt_max = 1\n",
        "[evolution]\ndt_policy = adaptive\n",
        "[evolution]\ndt_policy = fixed:-1\n",
        "not an ini file",
    ],
)
def test_bad_configs(tmp_path, text):
    with pytest.raises(ConfigError):
        load_config(write_ini(tmp_path, text))


def test_config_error_is_parameter_error():
    assert issubclass(ConfigError, ParameterError)
    with pytest.raises(ConfigError):
        load_config("/nonexistent/run.ini")
    assert parse_dt_policy("auto") is None
    assert parse_dt_policy("fixed:0.5") == 0.5


def test_helpers():
    np.testing.assert_array_equal(uniform_grid(-1.0, 1.0, 0.5), [-1, -0.5, 0, 0.5, 1])
    t = np.linspace(0, 10, 11)
    assert fitted_decay_rate(t, np.exp(-0.3 * t)) == pytest.approx(0.3)
    x = np.linspace(-5, 5, 101)
    assert front_position(x, np.where(np.abs(x) < 2.05, 1.0, 0.0)) == pytest.approx(2.0)
    y = np.exp(-((x - 3) ** 2)) + 2 * np.exp(-((x + 1) ** 2))
    np.testing.assert_allclose(np.sort(local_peaks(x, y, 2)), [-1, 3])


def test_selftest_suites(cfg):
    from friedrichs.harness import run_selftests

    summary = run_selftests(cfg)
    assert summary.passed, summary.table()
    assert {c.suite for c in summary.checks} >= {"hardy", "restriction"}
    assert all(line.startswith("PASS") for line in summary.table().splitlines())


@pytest.fixture(scope="module")
def survival_runs(tmp_path_factory):
    dirs = [tmp_path_factory.mktemp(f"run{i}") for i in range(2)]
    codes = [cli.main(["survival", "--out", str(d)]) for d in dirs]
    return codes, dirs


def test_cli_survival_outputs(survival_runs):
    codes, (a, b) = survival_runs
    assert codes == [0, 0]
    for name in ("config.echo", "metrics.txt", "series_survival.csv", "series_survival_cn4.csv",
                 "plot_survival.gp", "plot_survival_cn4.gp"):
        assert (a / name).is_file()
    # reproducible to the byte
    for name in ("series_survival.csv", "series_survival_cn4.csv", "config.echo"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert "set terminal pngcairo" in (a / "plot_survival.gp").read_text()


def test_metrics_recomputable_from_csv(survival_runs, cfg):
    _, (out, _) = survival_runs
    m = read_metrics(out / "metrics.txt")
    s = read_series(out / "series_survival.csv")
    assert m["scenario"] == "survival"
    t, p_tot, p_res = s["grid"], s["abs2_total"], s["abs2_restr"]
    win = (t >= cfg.fit_t_min) & (t <= cfg.fit_t_max)
    assert fitted_decay_rate(t[win], p_tot[win]) == pytest.approx(m["fitted_decay_rate"], rel=1e-9)
    l2 = np.linalg.norm(p_tot[win] - p_res[win]) / np.linalg.norm(p_tot[win])
    assert l2 == pytest.approx(m["l2_error"], rel=1e-6)
    np.testing.assert_allclose(s["abs2_total"], s["re_total"] ** 2 + s["im_total"] ** 2, rtol=1e-13, atol=1e-300)


def test_cli_pole(tmp_path, capsys):
    assert cli.main(["pole", "--out", str(tmp_path)]) == 0
    stdout = capsys.readouterr().out
    assert "z_re = 1.93637150074798" in stdout
    m = read_metrics(tmp_path / "metrics.txt")
    assert m["decay_rate"] == pytest.approx(0.191443880875049, rel=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        [],
        ["pole", "--tolerance", "x"],
        ["pole", "--dt-policy", "fixed:x"],
        ["pole", "--preset", "nope"],
    ],
)
def test_cli_usage_errors(argv, tmp_path):
    try:
        code = cli.main(argv + (["--out", str(tmp_path)] if argv and argv[0] == "pole" else []))
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_cli_bad_config_is_usage_error(tmp_path):
    path = write_ini(tmp_path, "[model]\nlambda = 0.6\n")
    assert cli.main(["pole", "--config", path, "--out", str(tmp_path)]) == 1


def test_cli_numerical_failure(tmp_path, monkeypatch):
    def boom(cfg):
        raise ConvergenceError("no root")

    monkeypatch.setattr(cli, "report_pole", boom)
    assert cli.main(["pole", "--out", str(tmp_path)]) == 2


def test_cli_selftest_failure(tmp_path):
    assert cli.main(["selftest", "--tolerance", "1e-20", "--out", str(tmp_path)]) == 3
    text = (tmp_path / "selftest.txt").read_text()
    assert "FAIL" in text
