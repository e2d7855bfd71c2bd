import subprocess
import sys

import numpy as np
import pytest
from sklearn.datasets import load_iris

from fcmclf.cli import main
from fcmclf.data import load_csv, load_model, scale_all
from fcmclf.inference import predict

from conftest import write_table_csv

CONFIG = "classifier=FCMMC\nd=3\nlambda=1\nepochs=60\nbs=-1\noptimizer=adam\nlr=0.05\n"


@pytest.fixture
def files(tmp_path):
    d = load_iris()
    data = write_table_csv(tmp_path / "iris.csv", d.data, d.target_names[d.target])
    feats = tmp_path / "feats.csv"
    feats.write_text("a,b,c,d\n" + "\n".join(",".join(map(str, r)) for r in d.data) + "\n")
    cfg = tmp_path / "iris.cfg"
    cfg.write_text(CONFIG)
    return tmp_path, data, feats, cfg


def test_train_predict_transform(files, capsys):
    tmp, data, feats, cfg = files
    model_path = tmp / "m.json"
    assert main(["train", "--data", str(data), "--config", str(cfg), "--model-out", str(model_path)]) == 0
    printed = capsys.readouterr().out
    acc = float(printed.split("training accuracy")[1])
    assert "final loss" in printed

    assert main(["predict", "--model", str(model_path), "--data", str(feats), "--out", str(tmp / "p.csv")]) == 0
    lines = (tmp / "p.csv").read_text().splitlines()
    assert lines[0] == "label" and len(lines) == 151
    truth = load_iris()
    agree = np.mean(np.array(lines[1:]) == truth.target_names[truth.target])
    assert agree == pytest.approx(acc, abs=1e-4)

    assert main(["transform", "--model", str(model_path), "--data", str(feats), "--out", str(tmp / "t.csv")]) == 0
    rows = (tmp / "t.csv").read_text().splitlines()
    assert len(rows[0].split(",")) == 7 and len(rows) == 151


def test_train_bad_config_key_is_usage_error(files, capsys):
    tmp, data, _, cfg = files
    cfg.write_text(CONFIG + "momentum=0.9\n")
    assert main(["train", "--data", str(data), "--config", str(cfg), "--model-out", str(tmp / "m.json")]) == 1
    assert "momentum" in capsys.readouterr().err


def test_train_unwritable_output(files):
    tmp, data, _, cfg = files
    out = tmp / "no" / "such" / "dir" / "m.json"
    assert main(["train", "--data", str(data), "--config", str(cfg), "--model-out", str(out)]) == 2


def test_predict_wrong_width_names_n(files, capsys, fcmb_example):
    tmp, data, feats, cfg = files
    from fcmclf.data import save_model
    save_model(fcmb_example, tmp / "b.json")
    assert main(["predict", "--model", str(tmp / "b.json"), "--data", str(feats), "--out", str(tmp / "p.csv")]) == 2
    assert "n=2" in capsys.readouterr().err


def test_unknown_model_version_rejected(files, capsys):
    tmp, _, feats, _ = files
    (tmp / "bad.json").write_text('{"format": "fcm-model", "version": 99}')
    assert main(["predict", "--model", str(tmp / "bad.json"), "--data", str(feats), "--out", str(tmp / "p.csv")]) == 2
    assert "version" in capsys.readouterr().err


def test_crossval_report_and_pipeline(files, capsys):
    tmp, data, _, cfg = files
    args = ["crossval", "--data", str(data), "--config", str(cfg), "--folds", "3", "--seed", "5",
            "--pipeline", "knn3"]
    assert main(args + ["--report", str(tmp / "r1.json")]) == 0
    assert main(args + ["--report", str(tmp / "r2.json")]) == 0
    assert (tmp / "r1.json").read_bytes() == (tmp / "r2.json").read_bytes()
    assert "fcm+knn3" in capsys.readouterr().out


def test_gradcheck(capsys):
    assert main(["gradcheck", "--trials", "5"]) == 0
    assert main(["gradcheck", "--trials", "3", "--d", "4"]) == 0
    assert main(["gradcheck", "--variant", "FCMB", "--d", "1", "--trials", "5"]) == 0
    out = capsys.readouterr().out
    assert "logistic-regression gradient" in out
    assert main(["gradcheck", "--n", "17"]) == 1


def test_usage_errors_exit_one():
    with pytest.raises(SystemExit) as exc:
        main(["train"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 1


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "fcmclf.cli", "gradcheck", "--trials", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "PASS" in res.stdout
