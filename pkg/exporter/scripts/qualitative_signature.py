#!/usr/bin/env python3
"""Qualitative pattern check with real pretrained Dutch checkpoints.

For each model, the flow is pure interface composition over the two CLIs:

  crossdep generate  (train split, eval split; different seeds)
  crossdep-export    (embeddings for both splits)
  crossdep train / predict / report --json-out

The expected signature, checked on the report JSON:

  1. raising grammar: accuracy by derivation depth is monotonically
     non-increasing from depth 2 through 6;
  2. control grammar: the main-clause rule group (A1^X) scores markedly
     higher than every nested-complement rule (A3..A6).

The check passes if at least one of the two models shows both patterns.
Typical checkpoints: a Dutch BERT ("GroNLP/bert-base-dutch-cased") and a
Dutch RoBERTa ("pdelobelle/robbert-v2-dutch-base"); any local directories
work too.

Usage:
    python qualitative_signature.py --models MODEL_A MODEL_B --workdir DIR
"""

import argparse
import json
import subprocess
import sys
from pathlib import Path

MARGIN = 0.15  # "markedly higher": main clause beats nested rules by this much

SETTINGS = {
    "control": {"max_depth": 4, "train_seed": 11, "eval_seed": 22},
    "raising": {"max_depth": 6, "train_seed": 11, "eval_seed": 22},
}


def run(*cmd):
    print("+", " ".join(map(str, cmd)))
    subprocess.run([str(c) for c in cmd], check=True)


def pipeline(model: str, workdir: Path, epochs: int, batch: int) -> dict:
    tag = model.replace("/", "_")
    reports = {}
    for grammar, cfg in SETTINGS.items():
        base = workdir / f"{tag}-{grammar}"
        train_data = base.with_suffix(".train.jsonl")
        eval_data = base.with_suffix(".eval.jsonl")
        run("crossdep", "generate", "--grammar", grammar,
            "--max-depth", cfg["max_depth"], "--per-tree", 10,
            "--seed", cfg["train_seed"], "--out", train_data)
        run("crossdep", "generate", "--grammar", grammar,
            "--max-depth", cfg["max_depth"], "--per-tree", 10,
            "--seed", cfg["eval_seed"], "--out", eval_data)
        train_emb = base.with_suffix(".train.emb.jsonl")
        eval_emb = base.with_suffix(".eval.emb.jsonl")
        run("crossdep-export", "--model", model, "--data", train_data,
            "--out", train_emb, "--batch", batch)
        run("crossdep-export", "--model", model, "--data", eval_data,
            "--out", eval_emb, "--batch", batch)
        params = base.with_suffix(".params.npz")
        run("crossdep", "train", "--data", train_data, "--embeddings", train_emb,
            "--val-split", "0.2", "--seed", "0", "--epochs", epochs,
            "--out", params)
        preds = base.with_suffix(".preds.jsonl")
        run("crossdep", "predict", "--params", params, "--data", eval_data,
            "--embeddings", eval_emb, "--out", preds)
        report = base.with_suffix(".report.json")
        run("crossdep", "report", "--preds", preds, "--json-out", report)
        reports[grammar] = json.loads(report.read_text())
    return reports


def check_signature(reports: dict) -> list[str]:
    """Empty list = the qualitative signature holds."""
    problems = []
    by_depth = reports["raising"]["by_depth"]
    accs = [by_depth[str(d)]["accuracy"] for d in range(2, 7) if str(d) in by_depth]
    if len(accs) < 5:
        problems.append("raising report is missing depth groups")
    if any(b > a + 1e-9 for a, b in zip(accs, accs[1:])):
        problems.append(f"raising accuracy not non-increasing in depth: {accs}")
    by_rule = reports["control"]["by_rule"]
    main = by_rule.get("A1^X", {}).get("accuracy", 0.0)
    nested = [by_rule[r]["accuracy"] for r in ("A3", "A4", "A5", "A6") if r in by_rule]
    if len(nested) < 4:
        problems.append("control report is missing nested-rule groups")
    elif not all(main >= n + MARGIN for n in nested):
        problems.append(
            f"main-clause group not markedly higher: A1^X={main:.3f}, "
            f"nested={[round(n, 3) for n in nested]}"
        )
    return problems


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--models", nargs=2, required=True,
                        metavar=("MODEL_A", "MODEL_B"))
    parser.add_argument("--workdir", default="signature-run")
    parser.add_argument("--epochs", type=int, default=80)
    parser.add_argument("--batch", type=int, default=16)
    args = parser.parse_args()
    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)

    verdicts = {}
    for model in args.models:
        reports = pipeline(model, workdir, args.epochs, args.batch)
        problems = check_signature(reports)
        verdicts[model] = problems
        status = "matches" if not problems else "; ".join(problems)
        print(f"\n{model}: {status}\n")

    if any(not problems for problems in verdicts.values()):
        print("qualitative signature: PASS (at least one model matches)")
        return 0
    print("qualitative signature: FAIL on both models")
    return 1


if __name__ == "__main__":
    sys.exit(main())
