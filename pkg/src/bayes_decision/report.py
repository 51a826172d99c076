"""Report documents for analyses, fairness solves and scenarios.

Reports are plain dicts of str/float/int/bool/list so they survive a YAML
round trip unchanged. Every float is rounded to a fixed number of
significant digits, which keeps regression diffs stable.
"""
from __future__ import annotations

import math

import numpy as np
import yaml

from .criterion import Analysis, BoundsConfig
from .fairness import FairnessResult
from .scenarios import ScenarioReport
from .utility import UtilityModel

SIG_DIGITS = 6


def sig(x, digits: int = SIG_DIGITS):
    """Round a number to ``digits`` significant digits; other values pass through."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x) or x == 0.0:
            return x
        return float(f"{x:.{digits}g}")
    return x


def _clean(obj, digits=SIG_DIGITS):
    if isinstance(obj, dict):
        return {str(k): _clean(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v, digits) for v in obj]
    return sig(obj, digits)


def model_dict(model: UtilityModel) -> dict:
    d = {"kind": model.kind}
    if model.is_logarithmic:
        d.update(q=model.q, reference=model.reference, gamma=model.gamma)
    return d


def config_dict(cfg: BoundsConfig) -> dict:
    return {
        "k": cfg.k,
        "caution": cfg.caution,
        "opportunity": cfg.opportunity,
        "mode": cfg.mode,
        "clip": cfg.clip_to_support,
    }


def build_report(analysis: Analysis, model: UtilityModel, inputs: dict | None = None, digits=SIG_DIGITS) -> dict:
    """Report document of a full analysis."""
    decisions = []
    for d in analysis.decisions:
        b = d.bounds
        decisions.append(
            {
                "label": d.label,
                "outcomes": {"values": d.outcomes.values, "probs": d.outcomes.probs},
                "outcome_moments": {"mean": d.outcomes.mean, "std": d.outcomes.std},
                "utility": {
                    "mean": d.utilities.mean,
                    "std": d.utilities.std,
                    "support_min": d.utilities.support_min,
                    "support_max": d.utilities.support_max,
                },
                "bounds": {
                    "lb_raw": b.lb_raw,
                    "ub_raw": b.ub_raw,
                    "lb": b.lb,
                    "ub": b.ub,
                    "branch": b.branch,
                },
                "score": d.score,
            }
        )
    pref = analysis.preference
    warnings = []
    if pref is None:
        verdict = {"verdict": "none"}
        warnings.append("single decision: no verdict")
    else:
        verdict = {"verdict": pref.verdict, "best": [pref.labels[i] for i in pref.best]}
        if pref.verdict == "prefer":
            verdict["preferred"] = pref.preferred_label
    doc = {
        "decisions": decisions,
        "verdict": verdict,
        "utility_model": model_dict(model),
        "criterion": config_dict(analysis.config),
        "warnings": warnings,
    }
    if inputs is not None:
        doc["inputs"] = inputs
    return _clean(doc, digits)


def fairness_report(result: FairnessResult, model: UtilityModel, cfg: BoundsConfig, digits=SIG_DIGITS) -> dict:
    roots = [
        {"p_fair": p, "branch": br, "fair_interval": list(iv)}
        for p, br, iv in zip(result.roots, result.branches, result.intervals)
    ]
    doc = {
        "certain": result.certain,
        "uncertain": result.uncertain,
        "p_fair": result.p_fair,
        "roots": roots,
        "utility_model": model_dict(model),
        "criterion": config_dict(cfg),
    }
    return _clean(doc, digits)


def scenario_report(report: ScenarioReport, digits=SIG_DIGITS) -> dict:
    checks = [
        {
            "quantity": c.label,
            "computed": c.computed,
            "expected": c.expected,
            "tolerance": c.tol,
            "location": c.location,
            "pass": c.passed,
        }
        for c in report.checks
    ]
    return _clean(
        {"id": report.id, "description": report.description, "pass": report.passed, "checks": checks},
        digits,
    )


def dump_machine(doc: dict) -> str:
    """Deterministic YAML text of a report."""
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False, allow_unicode=True)


def load_machine(text: str) -> dict:
    return yaml.safe_load(text)


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.{SIG_DIGITS}g}"
    return str(x)


def format_human(doc: dict) -> str:
    """Readable summary of an analysis report."""
    lines = []
    for d in doc["decisions"]:
        b = d["bounds"]
        lines.append(f"{d['label']}:")
        pairs = ", ".join(f"{_fmt(v)}:{_fmt(p)}" for v, p in zip(d["outcomes"]["values"], d["outcomes"]["probs"]))
        lines.append(f"  outcomes       {pairs}")
        u = d["utility"]
        lines.append(f"  utility        mean {_fmt(u['mean'])}  std {_fmt(u['std'])}  support [{_fmt(u['support_min'])}, {_fmt(u['support_max'])}]")
        lines.append(f"  bounds         raw [{_fmt(b['lb_raw'])}, {_fmt(b['ub_raw'])}]  used [{_fmt(b['lb'])}, {_fmt(b['ub'])}]  ({b['branch']})")
        lines.append(f"  score          {_fmt(d['score'])}")
    v = doc["verdict"]
    if v["verdict"] == "prefer":
        lines.append(f"verdict: prefer {v['preferred']}")
    elif v["verdict"] == "indifferent":
        lines.append("verdict: indifferent between " + ", ".join(v["best"]))
    for w in doc.get("warnings", []):
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"
