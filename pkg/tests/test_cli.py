import hashlib
import json
import subprocess
import sys

import pytest

from nesent.cli import main
from nesent.supervised import NbModel, SvmModel, load_model


def run(data_dir, out, *args):
    return main([*args, "--config", str(data_dir / "toy_config.json"), "--output-dir", str(out)])


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_stats(data_dir, tmp_path, capsys):
    assert run(data_dir, tmp_path, "stats") == 0
    table = read_json(tmp_path / "split_summary.json")
    assert table["total"] == sum(table[s][p] for s in ("train", "test")
                                 for p in ("positive", "negative", "neutral"))
    assert "train" in capsys.readouterr().out


def test_ne_polarity_outputs(data_dir, tmp_path):
    assert run(data_dir, tmp_path, "ne-polarity") == 0
    stats = read_json(tmp_path / "ne_stats.json")
    assert stats["A-NEs"] == stats["Pos-NEs"] + stats["Neg-NEs"]
    assert stats["A-NEs"] <= stats["E-NEs"]
    rows = [json.loads(l) for l in (tmp_path / "ne_polarity.jsonl").read_text().splitlines()]
    assert len(rows) == stats["E-NEs"]
    assert (tmp_path / "effective_config.json").exists()


def test_ne_polarity_rerun_byte_identical(data_dir, tmp_path):
    run(data_dir, tmp_path / "a", "ne-polarity")
    run(data_dir, tmp_path / "b", "ne-polarity")
    assert digest(tmp_path / "a" / "ne_polarity.jsonl") == digest(tmp_path / "b" / "ne_polarity.jsonl")


def test_empty_gazetteer_fails(data_dir, tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    code = run(data_dir, tmp_path, "ne-polarity", "--gazetteer", str(empty))
    assert code == 1
    assert "EmptyGazetteer" in capsys.readouterr().err


def test_tag_writes_reserved_tokens(data_dir, tmp_path):
    assert run(data_dir, tmp_path, "tag") == 0
    text = (tmp_path / "tagged_corpus.jsonl").read_text()
    assert "PosNE" in text or "NegNE" in text


@pytest.mark.parametrize("model,cls", [("nb", NbModel), ("svm", SvmModel)])
def test_train_writes_loadable_model(data_dir, tmp_path, model, cls):
    assert run(data_dir, tmp_path, "train", "--model", model) == 0
    assert isinstance(load_model(tmp_path / "model.json"), cls)


def test_svm_training_deterministic(data_dir, tmp_path):
    run(data_dir, tmp_path / "a", "train", "--model", "svm")
    run(data_dir, tmp_path / "b", "train", "--model", "svm")
    assert digest(tmp_path / "a" / "model.json") == digest(tmp_path / "b" / "model.json")


def test_nes_without_entities_equals_nes_off(data_dir, tmp_path):
    nothing = tmp_path / "gaz.txt"
    nothing.write_text("zzz never mentioned\n")
    run(data_dir, tmp_path / "on", "train", "--model", "nb", "--gazetteer", str(nothing))
    run(data_dir, tmp_path / "off", "train", "--model", "nb", "--no-nes")
    assert digest(tmp_path / "on" / "model.json") == digest(tmp_path / "off" / "model.json")


def test_classify_with_model(data_dir, tmp_path):
    run(data_dir, tmp_path, "train", "--model", "nb")
    assert run(data_dir, tmp_path, "classify", "--model-file", str(tmp_path / "model.json")) == 0
    lines = (tmp_path / "predictions.jsonl").read_text().splitlines()
    n_test = sum(json.loads(l)["split"] == "test" for l in (data_dir / "toy_corpus.jsonl").read_text().splitlines())
    assert len(lines) == n_test


def latin_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"normalization": {"script_filter": "latin"}, "use_nes": False}))
    return str(cfg)


def test_classify_one_document_with_lexicon(tmp_path):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text(json.dumps({"id": "x", "text": "good day", "label": "positive", "split": "test"}) + "\n")
    lex = tmp_path / "l.tsv"
    lex.write_text("good\tpositive\n")
    code = main(["classify", "--corpus", str(corpus), "--lexicon", str(lex), "--config", latin_config(tmp_path),
                 "--output-dir", str(tmp_path / "o")])
    assert code == 0
    rec = json.loads((tmp_path / "o" / "predictions.jsonl").read_text())
    assert rec == {"id": "x", "predicted": "positive", "score": 1}


def test_classify_empty_test_split_fails(tmp_path, capsys):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text(json.dumps({"id": "x", "text": "good", "label": "positive", "split": "train"}) + "\n")
    lex = tmp_path / "l.tsv"
    lex.write_text("good\tpositive\n")
    code = main(["classify", "--corpus", str(corpus), "--lexicon", str(lex), "--config", latin_config(tmp_path),
                 "--output-dir", str(tmp_path / "o")])
    assert code == 1
    assert "test split is empty" in capsys.readouterr().err


def test_evaluate_round_trip(data_dir, tmp_path):
    run(data_dir, tmp_path, "classify")
    assert run(data_dir, tmp_path, "evaluate", "--predictions", str(tmp_path / "predictions.jsonl")) == 0
    metrics = read_json(tmp_path / "metrics.json")
    assert 0.0 <= metrics["f1"] <= 1.0
    assert metrics["n_evaluated"] + metrics["excluded_neutral"] == len(
        (tmp_path / "predictions.jsonl").read_text().splitlines())


def test_ablate_outputs(data_dir, tmp_path):
    assert run(data_dir, tmp_path, "ablate") == 0
    report = read_json(tmp_path / "ablation.json")
    assert {r["model"] for r in report["rows"]} == {"nb", "svm", "lexicon_sfs"}
    assert {r["nes"] for r in report["rows"]} == {"No", "Yes"}
    assert "Prec (%)" in (tmp_path / "ablation.txt").read_text()


def test_missing_corpus_file(tmp_path, capsys):
    assert main(["stats", "--corpus", str(tmp_path / "nope.jsonl"), "--output-dir", str(tmp_path)]) == 1
    assert "corpus file not found" in capsys.readouterr().err


def test_bad_usage_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--scorer", "bogus"])
    assert exc.value.code == 2


def test_console_entry_point(data_dir, tmp_path):
    out = subprocess.run([sys.executable, "-m", "nesent.cli", "stats", "--config", str(data_dir / "toy_config.json"),
                          "--output-dir", str(tmp_path)], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
