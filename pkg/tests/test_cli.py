import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "cyclestat"]


def run_cli(*args, env=None, check=True):
    import os

    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    result = subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=full_env
    )
    if check and result.returncode != 0:
        raise AssertionError(
            f"cli failed ({result.returncode}): {result.stderr}\n{result.stdout}"
        )
    return result


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    dest = tmp_path_factory.mktemp("cli") / "trainer"
    run_cli(
        "synth", "--out", str(dest), "--period", "20", "--cycles", "4",
        "--noise", "0.01", "--phase-jitter", "1", "--seed", "7",
    )
    return dest


@pytest.fixture(scope="module")
def noisy_dir(tmp_path_factory):
    dest = tmp_path_factory.mktemp("cli") / "user"
    run_cli(
        "synth", "--out", str(dest), "--period", "20", "--cycles", "4",
        "--noise", "0.03", "--phase-jitter", "1", "--seed", "7",
    )
    return dest


class TestSynthCommand:
    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for dest in (a, b):
            run_cli("synth", "--out", str(dest), "--period", "40",
                    "--cycles", "4", "--seed", "7")
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_config_exit_code(self, tmp_path):
        result = run_cli(
            "synth", "--out", str(tmp_path / "x"), "--period", "20",
            "--cycles", "4", "--phase-jitter", "5", check=False,
        )
        assert result.returncode == 2
        assert "InvalidConfig" in result.stderr

    def test_writes_frame_files(self, synth_dir):
        files = sorted(synth_dir.glob("*.json"))
        assert len(files) == 80
        doc = json.loads(files[0].read_text())
        assert len(doc["people"][0]["pose_keypoints_2d"]) == 75


class TestAnalyzeCommand:
    def test_report_on_stdout(self, synth_dir):
        result = run_cli("analyze", str(synth_dir))
        doc = json.loads(result.stdout)
        assert doc["command"] == "analyze"
        assert abs(doc["period"] - 20.0) <= 2.0
        assert doc["per_pose"]

    def test_out_file(self, synth_dir, tmp_path):
        out = tmp_path / "report.json"
        run_cli("analyze", str(synth_dir), "--out", str(out))
        doc = json.loads(out.read_text())
        assert doc["per_pose"]
        assert doc["config"]["input"] == str(synth_dir)

    def test_template_too_long_exit_code(self, synth_dir):
        result = run_cli(
            "analyze", str(synth_dir), "--template-len", "70", check=False
        )
        assert result.returncode == 2
        assert "TemplateTooLong" in result.stderr

    def test_missing_input_is_usage_error(self):
        result = run_cli("analyze", "/no/such/path", check=False)
        assert result.returncode == 2

    def test_too_few_cycles_exit_code(self, tmp_path):
        import json

        from cyclestat.synth import (
            SynthConfig,
            generate_cyclic_sequence,
            to_openpose_document,
        )

        # truncate so the detected period cannot fit twice
        seq = generate_cyclic_sequence(SynthConfig(period=60, num_cycles=2, seed=3))
        lines = [
            json.dumps(to_openpose_document(p), separators=(",", ":"))
            for p in seq.poses[:70]
        ]
        dest = tmp_path / "short.jsonl"
        dest.write_text("\n".join(lines) + "\n")
        result = run_cli(
            "analyze", str(dest), "--template-len", "30", check=False
        )
        assert result.returncode == 3
        assert "TooFewCycles" in result.stderr


class TestCompareCommand:
    def test_self_comparison_unit_fits(self, synth_dir):
        result = run_cli("compare", str(synth_dir), str(synth_dir))
        doc = json.loads(result.stdout)
        for row in doc["per_pose"]:
            assert abs(row["fit"] - 1.0) < 1e-6

    def test_noisy_user_flagged(self, synth_dir, noisy_dir):
        result = run_cli("compare", str(synth_dir), str(noisy_dir))
        doc = json.loads(result.stdout)
        assert doc["median_fit"] > 1.0

    def test_csv_and_svg_outputs(self, synth_dir, noisy_dir, tmp_path):
        csv_path = tmp_path / "t.csv"
        svg_path = tmp_path / "t.svg"
        run_cli(
            "compare", str(synth_dir), str(noisy_dir),
            "--csv", str(csv_path), "--plot", str(svg_path),
        )
        header = csv_path.read_text().splitlines()[0]
        assert header.startswith("anchor_index,trainer_sigma,user_sigma")
        svg = svg_path.read_text()
        assert svg.count("<polyline") == 3
        for label in ("trainer precision", "user precision", "fit"):
            assert label in svg


class TestDeterminism:
    def test_analyze_byte_identical_across_runs_and_threads(self, synth_dir):
        outputs = [
            run_cli("analyze", str(synth_dir), env={"CYCLESTAT_THREADS": t}).stdout
            for t in ("1", "1", "8")
        ]
        assert outputs[0] == outputs[1] == outputs[2]

    def test_compare_byte_identical_across_threads(self, synth_dir, noisy_dir):
        outputs = [
            run_cli(
                "compare", str(synth_dir), str(noisy_dir),
                env={"CYCLESTAT_THREADS": t},
            ).stdout
            for t in ("1", "8")
        ]
        assert outputs[0] == outputs[1]
