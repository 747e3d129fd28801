"""End-to-end checks of the command line interface.

Everything runs in-process through cli.main(argv) except one subprocess
smoke test; assertions stick to stdout, written files and exit codes.
"""

import csv
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from critchains.analytic import build_state
from critchains.basis import SectorBasis
from critchains.cache import load_state
from critchains.cli import RunConfig, main
from critchains.eigensolve import lowest_k
from critchains.hamiltonian import ModelSpec, build
from critchains.lattice import coupling_pair
from critchains.observables import entropy_curve, g2_curve, overlap


def _table(text):
    """Parse CSV output, skipping the leading comment lines."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def _comments(text):
    return [ln for ln in text.splitlines() if ln.startswith("#")]


def test_coefficients_header_and_values(capsys):
    rc = main(["coefficients", "--q", "3", "--n", "6", "--reproducible"])
    assert rc == 0
    out = capsys.readouterr().out
    header = _comments(out)
    assert len(header) == 1
    assert header[0].startswith("# config: command=coefficients q=3 n=6 ")
    rows = _table(out)
    assert [r["distance"] for r in rows] == ["1", "2", "3", "4", "5"]
    pair = coupling_pair(3, 2, 1, 6)
    first = rows[0]
    assert float(first["re_c1"]) == pytest.approx(pair.hopping.real,
                                                  abs=1e-10)
    assert float(first["im_c1"]) == pytest.approx(pair.hopping.imag,
                                                  abs=1e-10)
    assert float(first["c2"]) == pytest.approx(pair.density, abs=1e-10)
    # separation d and n - d are conjugate partners
    last = rows[4]
    assert float(last["re_c1"]) == pytest.approx(pair.hopping.real,
                                                 abs=1e-10)
    assert float(last["im_c1"]) == pytest.approx(-pair.hopping.imag,
                                                 abs=1e-10)


def test_reproducible_runs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["coefficients", "--q", "2", "--n", "8", "--reproducible"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_timestamp_present_without_reproducible(capsys):
    assert main(["coefficients", "--q", "2", "--n", "4"]) == 0
    out = capsys.readouterr().out
    assert any(ln.startswith("# generated: ") for ln in _comments(out))


def test_out_file_matches_stdout(tmp_path, capsys):
    argv = ["coefficients", "--q", "2", "--n", "6", "--reproducible"]
    assert main(argv) == 0
    streamed = capsys.readouterr().out
    path = tmp_path / "c.csv"
    assert main(argv + ["--out", str(path)]) == 0
    assert path.read_text() == streamed


def test_ground_matches_library_calls(capsys):
    rc = main(["ground", "--q", "2", "--n", "8", "--kind", "nn",
               "--reproducible"])
    assert rc == 0
    (row,) = _table(capsys.readouterr().out)

    spec = ModelSpec(q=2, n_sites=8, kind="nn", u=1.0)
    res = lowest_k(build(spec), k=2, tol=1e-10, seed=spec.default_seed())
    rep = overlap(res.vectors[:, 0], build_state(8, 2), 8)
    assert float(row["energy"]) == pytest.approx(res.ground_energy, abs=1e-9)
    assert float(row["gap"]) == pytest.approx(res.gap, abs=1e-9)
    assert float(row["delta"]) == pytest.approx(rep.delta, abs=1e-9)
    assert float(row["delta_per_site"]) == pytest.approx(
        rep.delta_per_site, abs=1e-9)
    assert row["kind"] == "nn"
    assert int(row["q"]) == 2 and int(row["n"]) == 8


def test_ground_against_bundled_reference(capsys):
    rc = main(["ground", "--q", "2", "--n", "16", "--kind", "nn",
               "--reference", "--reproducible"])
    assert rc == 0
    (row,) = _table(capsys.readouterr().out)
    assert float(row["delta_ref"]) == pytest.approx(0.9930, abs=1e-12)
    assert float(row["delta_dev"]) < 0.002


def test_ground_reference_row_missing(capsys):
    # no tabulated 'exact' overlaps; columns stay empty rather than fail
    rc = main(["ground", "--q", "2", "--n", "8", "--reference",
               "--reproducible"])
    assert rc == 0
    (row,) = _table(capsys.readouterr().out)
    assert row["delta_ref"] == "" and row["delta_dev"] == ""


def test_entropy_uses_and_fills_cache(tmp_path, capsys):
    cache = tmp_path / "cache"
    argv = ["entropy", "--q", "2", "--n", "8", "--reproducible",
            "--cache-dir", str(cache)]
    assert main(argv) == 0
    first = capsys.readouterr().out
    stored = cache / "analytic_q2_n8_exact_u1.cch"
    assert stored.exists()
    stamp = stored.stat().st_mtime_ns

    assert main(argv) == 0
    assert capsys.readouterr().out == first
    assert stored.stat().st_mtime_ns == stamp  # reused, not rewritten

    basis = SectorBasis.for_model(8, 2)
    curve = entropy_curve(build_state(8, 2), basis)
    rows = _table(first)
    assert [int(r["block_length"]) for r in rows] == list(
        curve.lengths.tolist())
    got = np.array([float(r["entropy"]) for r in rows])
    assert np.allclose(got, curve.entropies, atol=1e-9)


def test_g2_caches_solved_ground_state(tmp_path, capsys):
    cache = tmp_path / "cache"
    argv = ["g2", "--q", "2", "--n", "8", "--kind", "nn",
            "--reproducible", "--cache-dir", str(cache)]
    assert main(argv) == 0
    out = capsys.readouterr().out
    stored = cache / "ground_q2_n8_nn_u1.cch"
    assert stored.exists()
    vector, spec = load_state(stored, expected=ModelSpec(2, 8, "nn", 1.0))
    assert spec.kind == "nn"
    assert np.isclose(np.linalg.norm(vector), 1.0)

    rows = _table(out)
    curve = g2_curve(vector, SectorBasis.for_model(8, 2))
    assert [int(r["distance"]) for r in rows] == list(
        curve.distances.tolist())
    got = np.array([float(r["g2"]) for r in rows])
    assert np.allclose(got, curve.values, atol=1e-9)

    assert main(argv) == 0
    assert capsys.readouterr().out == out


def test_corrupt_cache_reports_invalid_input(tmp_path, capsys):
    cache = tmp_path / "cache"
    cache.mkdir()
    (cache / "analytic_q2_n8_exact_u1.cch").write_bytes(b"garbage")
    rc = main(["entropy", "--q", "2", "--n", "8", "--reproducible",
               "--cache-dir", str(cache)])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_spectrum_normalization(capsys):
    rc = main(["spectrum", "--q", "2", "--n", "8", "--k", "4",
               "--reproducible"])
    assert rc == 0
    rows = _table(capsys.readouterr().out)
    assert [int(r["state"]) for r in rows] == [1, 2, 3, 4]
    norm = [float(r["normalized"]) for r in rows]
    assert norm[0] == 0.0
    first_above = next(v for v in norm if v > 1e-9)
    assert first_above == pytest.approx(1.0, abs=1e-9)
    assert norm == sorted(norm)


def test_excited_table_shape(capsys):
    rc = main(["excited", "--q", "2", "--n", "6", "--kind", "nn",
               "--k", "3", "--reproducible"])
    assert rc == 0
    rows = _table(capsys.readouterr().out)
    assert len(rows) == 3
    assert list(rows[0]) == ["state", "energy_local", "energy_exact",
                             "delta", "delta_per_site"]
    for r in rows:
        d = float(r["delta"])
        assert 0.0 < d <= 1.0 + 1e-9
    # state 1 is the ground pair; the kinds are close at this size
    assert float(rows[0]["delta"]) > 0.9


def test_optimize_u_json_payload(capsys):
    rc = main(["optimize-u", "--q", "2", "--n", "6", "--kind", "nn-opt",
               "--bracket", "0.5,2.0", "--coarse-step", "0.25",
               "--reference", "--reproducible"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["config"].startswith("command=optimize-u q=2 n=6 ")
    assert payload["kind"] == "nn-opt"
    assert payload["bracket"] == [0.5, 2.0]
    assert 0.5 <= payload["best_u"] <= 2.0
    assert 0.0 < payload["best_delta"] <= 1.0
    assert payload["n_evaluations"] == len(payload["samples"]) >= 7
    assert payload["reference_u"] == 1.0
    assert payload["u_deviation"] == pytest.approx(
        abs(payload["best_u"] - 1.0), abs=1e-12)
    assert "generated" not in payload


def test_optimize_u_rejects_fixed_kind(capsys):
    rc = main(["optimize-u", "--q", "2", "--n", "6", "--kind", "nn"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_analytic_state_file_round_trips(tmp_path, capsys):
    path = tmp_path / "state.cch"
    rc = main(["analytic-state", "--q", "3", "--n", "6",
               "--out", str(path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert f"wrote {path.stat().st_size} bytes" in out

    vector, spec = load_state(path)
    assert spec == ModelSpec(q=3, n_sites=6, kind="exact", u=1.0)
    assert np.array_equal(vector, build_state(6, 3))


def test_analytic_state_requires_out(capsys):
    rc = main(["analytic-state", "--q", "2", "--n", "4"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_invalid_sector_exits_2(capsys):
    assert main(["ground", "--q", "3", "--n", "10"]) == 2
    assert "error:" in capsys.readouterr().err


def test_coefficients_needs_two_sites(capsys):
    assert main(["coefficients", "--q", "2", "--n", "1"]) == 2
    capsys.readouterr()


def test_unknown_kind_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["ground", "--q", "2", "--n", "8", "--kind", "bogus"])
    assert info.value.code == 2


def test_tiny_budget_exits_3(capsys):
    rc = main(["ground", "--q", "2", "--n", "12", "--max-gb", "1e-6"])
    assert rc == 3
    assert "error:" in capsys.readouterr().err


def test_bad_thread_count_exits_2(capsys):
    rc = main(["coefficients", "--q", "2", "--n", "4", "--threads", "0"])
    assert rc == 2
    capsys.readouterr()


def test_run_config_round_trip():
    cfg = RunConfig(command="ground", q=3, n_sites=12, kind="nn-opt",
                    u=1.7, k=4, tol=1e-9, seed=7,
                    bracket_lo=0.2, bracket_hi=5.0, max_gb=2.5)
    assert RunConfig.parse(cfg.canonical()) == cfg


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "critchains", "coefficients",
         "--q", "2", "--n", "4", "--reproducible"],
        capture_output=True, text=True, timeout=300,
        env={**os.environ, "PYTHONPATH": ""})
    assert proc.returncode == 0
    assert proc.stdout.startswith("# config: command=coefficients")
