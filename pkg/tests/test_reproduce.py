import numpy as np
import pytest

from ungd import io, reproduce, signals


@pytest.mark.parametrize("figure", [f for f in reproduce.FIGURES if f not in reproduce.ECG_FIGURES])
def test_figure_passes(figure):
    result = reproduce.run(figure, seed=reproduce.DEFAULT_SEED)
    failed = [c.line() for c in result.checks if not c.passed]
    assert result.passed, failed
    assert result.tables


def test_write_result_round_trip(tmp_path):
    result = reproduce.run("fig2")
    paths = reproduce.write_result(result, tmp_path)
    assert (tmp_path / "fig2_summary.txt") in paths
    cols, data = io.read_table(tmp_path / "fig2_minima.tsv")
    assert data.shape[1] == len(cols)
    assert "PASS" in (tmp_path / "fig2_summary.txt").read_text()


def test_ecg_skipped_without_data():
    result = reproduce.run("fig9")
    assert result.skipped and "mgh001" in result.skipped
    assert result.status() == "SKIP"


def test_ecg_pipeline_runs_on_synthetic_excerpt(tmp_path):
    # stand-in with the same format as a real excerpt; only the plumbing is checked
    x = 400 * signals.NoiseRecipe(2880, 3, lowpass=(0.05, 15)).generate() + 1024
    x += 30 * np.sin(2 * np.pi * np.arange(x.size) / 6)
    path = tmp_path / "ecg.raw"
    io.write_raw_int16(path, x)
    for fig in reproduce.ECG_FIGURES:
        result = reproduce.run(fig, ecg=str(path))
        assert result.skipped is None
        assert len(result.checks) == 2
        assert {"signals", "ccf", "psd"} <= set(result.tables)


def test_unknown_figure():
    with pytest.raises(ValueError):
        reproduce.run("fig11")
