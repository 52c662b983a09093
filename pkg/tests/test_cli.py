"""End-to-end CLI flows: generate, verify, embed, train, predict, report."""

import json

import pytest

from crossdep.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from crossdep.corpus import read_dataset


def run(*argv):
    return main(list(argv))


class TestGenerateVerify:
    def test_generate_and_verify(self, tmp_path, capsys):
        out = tmp_path / "raising.jsonl"
        code = run(
            "generate", "--grammar", "raising", "--max-depth", "4",
            "--per-tree", "3", "--seed", "7", "--out", str(out),
        )
        assert code == EXIT_OK
        assert "wrote 18 samples" in capsys.readouterr().out
        assert run("verify", str(out)) == EXIT_OK

    def test_determinism_across_runs(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for out in (a, b):
            assert run(
                "generate", "--grammar", "control", "--max-depth", "2",
                "--per-tree", "2", "--seed", "3", "--out", str(out),
            ) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_verify_detects_tampering(self, tmp_path, capsys):
        out = tmp_path / "d.jsonl"
        run("generate", "--grammar", "raising", "--max-depth", "3",
            "--per-tree", "2", "--seed", "1", "--out", str(out))
        text = out.read_text()
        out.write_text(text.replace('"seed": 1, "flags"', '"seed": 2, "flags"', 1))
        assert run("verify", str(out)) == EXIT_DATA
        assert "FAIL" in capsys.readouterr().out

    def test_usage_error_exit_code(self):
        assert run("generate", "--grammar", "bogus") == EXIT_USAGE

    def test_missing_file_is_data_error(self):
        assert run("verify", "/nonexistent/file.jsonl") == EXIT_DATA


class TestEnumerate:
    def test_counts_and_note(self, capsys):
        assert run("enumerate", "--grammar", "raising", "--max-depth", "6") == EXIT_OK
        out = capsys.readouterr().out
        for line in ("depth 2: 2", "depth 6: 2", "total: 10"):
            assert line in out
        assert "published reference total" in out
        assert "convention" in out

    def test_control_counts(self, capsys):
        assert run("enumerate", "--grammar", "control", "--max-depth", "4") == EXIT_OK
        out = capsys.readouterr().out
        assert "depth 2: 24" in out and "depth 3: 96" in out and "depth 4: 384" in out
        assert "total: 504" in out


class TestPipeline:
    @pytest.fixture()
    def dataset(self, tmp_path):
        out = tmp_path / "data.jsonl"
        run("generate", "--grammar", "raising", "--max-depth", "3",
            "--per-tree", "5", "--seed", "21", "--out", str(out))
        return out

    def test_full_pipeline(self, tmp_path, dataset, capsys):
        emb = tmp_path / "emb.jsonl"
        assert run(
            "synth-embed", "--provider", "oracle", "--data", str(dataset),
            "--dim", "32", "--out", str(emb),
        ) == EXIT_OK
        params = tmp_path / "params.npz"
        hist = tmp_path / "history.json"
        assert run(
            "train", "--data", str(dataset), "--embeddings", str(emb),
            "--epochs", "12", "--k", "8", "--seed", "2",
            "--history", str(hist), "--out", str(params),
        ) == EXIT_OK
        assert len(json.loads(hist.read_text())) == 12
        preds = tmp_path / "preds.jsonl"
        assert run(
            "predict", "--params", str(params), "--data", str(dataset),
            "--embeddings", str(emb), "--out", str(preds),
        ) == EXIT_OK
        assert run("report", "--preds", str(preds)) == EXIT_OK
        out = capsys.readouterr().out
        assert "overall accuracy" in out
        assert "random baseline" in out
        json_out = tmp_path / "report.json"
        assert run("report", "--preds", str(preds), "--json-out", str(json_out)) == EXIT_OK
        report = json.loads(json_out.read_text())
        assert set(report["by_rule"]) >= {"B2", "B3"}

    def test_group_by_filter(self, tmp_path, dataset, capsys):
        emb = tmp_path / "emb.jsonl"
        run("synth-embed", "--provider", "random-fixed", "--data", str(dataset),
            "--dim", "16", "--out", str(emb))
        params = tmp_path / "p.npz"
        run("train", "--data", str(dataset), "--embeddings", str(emb),
            "--epochs", "0", "--k", "4", "--out", str(params))
        preds = tmp_path / "preds.jsonl"
        run("predict", "--params", str(params), "--data", str(dataset),
            "--embeddings", str(emb), "--out", str(preds))
        capsys.readouterr()
        assert run("report", "--preds", str(preds), "--group-by", "depth") == EXIT_OK
        out = capsys.readouterr().out
        assert "by derivation depth" in out
        assert "by introducing rule" not in out


class TestOneShot:
    def test_tuning_set_one_per_tree_and_disjoint(self, tmp_path, capsys):
        data = tmp_path / "full.jsonl"
        run("generate", "--grammar", "raising", "--max-depth", "4",
            "--per-tree", "10", "--seed", "5", "--out", str(data))
        tuning = tmp_path / "tuning.jsonl"
        assert run(
            "one-shot", "--data", str(data), "--seed2", "6", "--out", str(tuning)
        ) == EXIT_OK
        _, full = read_dataset(data)
        _, tune = read_dataset(tuning)
        assert len(tune) == 6  # one per tree at depth <= 4
        full_sentences = {s.sentence for s in full}
        assert all(s.sentence not in full_sentences for s in tune)

    def test_seed_collision_rejected(self, tmp_path):
        data = tmp_path / "full.jsonl"
        run("generate", "--grammar", "raising", "--max-depth", "3",
            "--per-tree", "2", "--seed", "5", "--out", str(data))
        assert run(
            "one-shot", "--data", str(data), "--seed2", "5",
            "--out", str(tmp_path / "t.jsonl"),
        ) == EXIT_DATA
