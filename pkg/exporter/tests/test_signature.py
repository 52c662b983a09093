"""Signature-check logic, plus the full real-model run when checkpoints are
available locally (set CROSSDEP_DUTCH_MODELS=model_a,model_b)."""

import importlib.util
import os
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"
spec = importlib.util.spec_from_file_location(
    "qualitative_signature", SCRIPTS / "qualitative_signature.py"
)
signature = importlib.util.module_from_spec(spec)
spec.loader.exec_module(signature)


def reports(raising_by_depth, control_by_rule):
    return {
        "raising": {"by_depth": {
            str(d): {"accuracy": a} for d, a in raising_by_depth.items()
        }},
        "control": {"by_rule": {
            r: {"accuracy": a} for r, a in control_by_rule.items()
        }},
    }


class TestCheck:
    def test_matching_pattern_passes(self):
        rep = reports(
            {2: 0.9, 3: 0.7, 4: 0.5, 5: 0.3, 6: 0.25},
            {"A1^X": 0.95, "A2^X": 0.6, "A3": 0.4, "A4": 0.35, "A5": 0.3, "A6": 0.25},
        )
        assert signature.check_signature(rep) == []

    def test_non_monotone_depth_fails(self):
        rep = reports(
            {2: 0.5, 3: 0.7, 4: 0.5, 5: 0.3, 6: 0.25},
            {"A1^X": 0.95, "A3": 0.4, "A4": 0.35, "A5": 0.3, "A6": 0.25},
        )
        assert any("non-increasing" in p for p in signature.check_signature(rep))

    def test_weak_main_clause_fails(self):
        rep = reports(
            {2: 0.9, 3: 0.7, 4: 0.5, 5: 0.3, 6: 0.25},
            {"A1^X": 0.45, "A3": 0.4, "A4": 0.35, "A5": 0.3, "A6": 0.25},
        )
        assert any("markedly higher" in p for p in signature.check_signature(rep))

    def test_flat_curve_counts_as_non_increasing(self):
        rep = reports(
            {2: 0.5, 3: 0.5, 4: 0.5, 5: 0.5, 6: 0.5},
            {"A1^X": 0.9, "A3": 0.4, "A4": 0.4, "A5": 0.4, "A6": 0.4},
        )
        assert signature.check_signature(rep) == []


@pytest.mark.skipif(
    not os.environ.get("CROSSDEP_DUTCH_MODELS"),
    reason="set CROSSDEP_DUTCH_MODELS=model_a,model_b (names or local dirs) "
    "to run the full real-model signature check",
)
def test_real_model_signature(tmp_path):
    models = os.environ["CROSSDEP_DUTCH_MODELS"].split(",")
    assert len(models) == 2, "expected exactly two checkpoints"
    verdicts = {}
    for model in models:
        reps = signature.pipeline(model.strip(), tmp_path, epochs=80, batch=16)
        verdicts[model] = signature.check_signature(reps)
    assert any(not problems for problems in verdicts.values()), verdicts
