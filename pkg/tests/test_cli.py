from __future__ import annotations

import subprocess
import sys

import pytest

import roby.io as rio
from roby.cli import main
from roby.fixtures import fixture_path
from roby.metrics import DistanceSpec, evaluate
from roby.synth import SynthSpec, generate_blobs


@pytest.fixture
def blob_file(tmp_path):
    ds = generate_blobs(
        SynthSpec(
            num_classes=3,
            samples_per_class=15,
            dims=4,
            separation=2.0,
            spread=1.0,
            seed=9,
        )
    )
    path = tmp_path / "blob.csv"
    rio.write_embeddings_csv(ds, path)
    return path, ds


class TestCompute:
    def test_report_equals_library_evaluate(self, blob_file, tmp_path, capsys):
        path, ds = blob_file
        out = tmp_path / "report.json"
        code = main(["compute", str(path), "--distance", "p=2", "--output", str(out)])
        assert code == 0
        lib = evaluate(
            rio.load_embeddings_csv(path, model_name="blob"), DistanceSpec(2.0)
        )
        cli_report = rio.read_report(out)
        assert cli_report == lib
        stdout = capsys.readouterr().out
        assert stdout.startswith("FSA=")
        assert f"ROBY={format(lib.roby, '.17g')}" in stdout

    def test_p_below_one_exits_2_naming_constraint(self, blob_file, capsys):
        path, _ = blob_file
        code = main(["compute", str(path), "--distance", "p=0.5"])
        assert code == 2
        assert "p >= 1" in capsys.readouterr().err

    def test_inf_distance_is_deterministic(self, blob_file, tmp_path):
        path, _ = blob_file
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["compute", str(path), "--distance", "inf", "--output", str(a)]) == 0
        assert main(["compute", str(path), "--distance", "inf", "--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_thread_count_does_not_change_report_bytes(
        self, blob_file, tmp_path, monkeypatch
    ):
        path, _ = blob_file
        outs = []
        for threads in ("1", "8"):
            monkeypatch.setenv("ROBY_THREADS", threads)
            out = tmp_path / f"t{threads}.json"
            assert main(["compute", str(path), "--output", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_missing_file_exits_2(self, capsys):
        assert main(["compute", "/no/such/file.csv"]) == 2
        assert "file" in capsys.readouterr().err.lower()

    def test_csv_report_format(self, blob_file, tmp_path):
        path, _ = blob_file
        out = tmp_path / "report.csv"
        assert main(["compute", str(path), "--format", "csv", "--output", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "field,i,j,value"

    def test_k2_prints_degeneracy_warning(self, tmp_path, capsys):
        ds = generate_blobs(
            SynthSpec(
                num_classes=2,
                samples_per_class=5,
                dims=2,
                separation=1.0,
                spread=1.0,
                seed=1,
            )
        )
        path = tmp_path / "k2.csv"
        rio.write_embeddings_csv(ds, path)
        assert main(["compute", str(path)]) == 0
        assert "degenerate" in capsys.readouterr().err

    def test_drop_misclassified(self, tmp_path, capsys):
        path = tmp_path / "t.csv"
        path.write_text(
            "index,label,true_label,e_0\n"
            "0,0,0,0.0\n1,0,0,1.0\n2,1,0,9.0\n3,1,1,4.0\n4,1,1,5.0\n"
        )
        assert main(["compute", str(path), "--drop-misclassified"]) == 0
        capsys.readouterr()
        assert main(["validate", str(path)]) == 0
        assert "records: 5" in capsys.readouterr().out

    def test_drop_misclassified_on_binary_exits_2(self, tmp_path, capsys):
        ds = generate_blobs(
            SynthSpec(
                num_classes=2,
                samples_per_class=3,
                dims=2,
                separation=1.0,
                spread=1.0,
                seed=4,
            )
        )
        path = tmp_path / "b.bin"
        rio.write_embeddings_binary(ds, path)
        assert main(["compute", str(path), "--drop-misclassified"]) == 2
        assert "true_label" in capsys.readouterr().err


class TestValidate:
    def test_valid_file_prints_summary(self, blob_file, capsys):
        path, ds = blob_file
        assert main(["validate", str(path)]) == 0
        out = capsys.readouterr().out
        assert "classes: 3" in out
        assert "dims: 4" in out
        for k in range(3):
            assert f"class {k}: 15" in out

    def test_truncated_binary_exits_2(self, tmp_path, capsys):
        ds = generate_blobs(
            SynthSpec(
                num_classes=2,
                samples_per_class=3,
                dims=2,
                separation=1.0,
                spread=1.0,
                seed=2,
            )
        )
        path = tmp_path / "t.bin"
        rio.write_embeddings_binary(ds, path)
        path.write_bytes(path.read_bytes()[:-3])
        assert main(["validate", str(path)]) == 2
        assert "TruncatedFile" in capsys.readouterr().err

    def test_missing_class_exits_2(self, tmp_path, capsys):
        path = tmp_path / "gap.csv"
        path.write_text("index,label,e_0\n0,0,0.0\n1,2,2.0\n")
        assert main(["validate", str(path), "--num-classes", "3"]) == 2
        assert "EmptyClass" in capsys.readouterr().err


class TestSynthCommand:
    def test_determinism(self, tmp_path):
        args = [
            "synth", "--classes", "3", "--per-class", "10", "--dims", "4",
            "--separation", "2", "--seed", "11",
        ]
        a, b = tmp_path / "a.bin", tmp_path / "b.bin"
        assert main(args + ["--output", str(a), "--format", "binary"]) == 0
        assert main(args + ["--output", str(b), "--format", "binary"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_written_file_validates(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        assert main([
            "synth", "--classes", "4", "--per-class", "5", "--dims", "3",
            "--separation", "1.5", "--seed", "0", "--output", str(out),
        ]) == 0
        assert main(["validate", str(out)]) == 0

    def test_invalid_spec_exits_2(self, tmp_path, capsys):
        assert main([
            "synth", "--classes", "1", "--per-class", "5", "--dims", "3",
            "--separation", "1", "--output", str(tmp_path / "x.csv"),
        ]) == 2
        assert "num_classes" in capsys.readouterr().err


class TestCorrelate:
    def test_summary_reproduces_cross_dataset_average(self, capsys, tmp_path):
        paths = [str(fixture_path(n)) for n in ("CIFAR-10", "MNIST", "Fashion-MNIST")]
        out = tmp_path / "corr.csv"
        code = main([
            "correlate", *paths, "--targets", "ROBY_2", "--against", "ASR_2",
            "--summary", "--output", str(out), "--format", "csv",
        ])
        assert code == 0
        stdout = capsys.readouterr().out
        summary_line = [l for l in stdout.splitlines() if l.startswith("summary:")][0]
        avg = float(summary_line.split("=")[1].split("over")[0])
        assert avg == pytest.approx(0.976, abs=0.05)
        assert len(out.read_text().splitlines()) == 4  # header + one row per table

    def test_self_correlation(self, capsys):
        code = main([
            "correlate", str(fixture_path("MNIST")),
            "--targets", "ASR_2", "--against", "ASR_2",
        ])
        assert code == 0
        assert "r(ASR_2, ASR_2) = 1" in capsys.readouterr().out

    def test_constant_column_exits_2(self, tmp_path, capsys):
        header = "model,ACC,ASR_INF,FSA_INF,FSD_INF,ROBY_INF,ASR_2,FSA_2,FSD_2,ROBY_2"
        rows = [f"M{i},0.5,0.1,{i/10},0.3,0.4,0.5,0.6,0.7,0.8" for i in range(4)]
        path = tmp_path / "const.csv"
        path.write_text(header + "\n" + "\n".join(rows) + "\n")
        assert main(["correlate", str(path), "--targets", "ACC", "--against", "FSA_INF"]) == 2
        assert "ZeroVariance" in capsys.readouterr().err


class TestRank:
    def test_cifar10_descending(self, capsys):
        assert main(["rank", str(fixture_path("CIFAR-10")), "--by", "ASR_INF"]) == 0
        names = [l.split("\t")[0] for l in capsys.readouterr().out.splitlines()]
        assert names[0] == "SqueezeNet"
        assert names[-1] == "ResNet101"

    def test_unknown_column_exits_2(self, capsys):
        assert main(["rank", str(fixture_path("MNIST")), "--by", "BOGUS"]) == 2
        assert "UnknownColumn" in capsys.readouterr().err


class TestArgumentErrors:
    def test_unknown_flag_is_an_error(self, blob_file):
        path, _ = blob_file
        with pytest.raises(SystemExit) as exc:
            main(["compute", str(path), "--bogus"])
        assert exc.value.code == 2

    def test_console_script_entry_point(self, blob_file):
        path, _ = blob_file
        proc = subprocess.run(
            [sys.executable, "-m", "roby.cli", "compute", str(path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("FSA=")
