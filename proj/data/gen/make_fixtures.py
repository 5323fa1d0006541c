#!/usr/bin/env python3
# Copyright 2026 The culteval Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Regenerates everything under data/ from the hand-written items. Offsets,
# tallies, correlations and golden renders are computed here, independently
# of the C++ code under test.
#
#   python3 data/gen/make_fixtures.py

import json
import math
import os
import random
import sys
from collections import Counter
from pathlib import Path

import numpy as np
from scipy import stats as sps

sys.path.insert(0, os.path.dirname(__file__))
from fixture_items import HALLUCINATIONS, LITERAL, SENSITIVITY  # noqa: E402
from sample_items import ITEMS  # noqa: E402

ROOT = Path(__file__).resolve().parents[2]
DATA = ROOT / "data"
ASSETS = ROOT / "assets"


def dump_jsonl(path, rows, compact=False):
    path.parent.mkdir(parents=True, exist_ok=True)
    opts = {"sort_keys": True, "separators": (",", ":")} if compact else {}
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, **opts) + "\n")


def dump_json(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def span(text, term):
    i = text.index(term)  # Python str offsets are code points
    return [i, i + len(term)]


def instance(iid, cat, dom, src, term, ref, ref_term, expl, std=None):
    row = {"id": iid, "source_text": src, "reference_text": ref, "source_span": span(src, term),
           "reference_span": span(ref, ref_term) if ref_term else None, "category": cat, "explication": expl,
           "domain": dom}
    if std:
        row["standard_equivalent"] = std
    return row


def validity(ok):
    return ("Reasoning: The rendering instantiates the intended cultural referent.\nDecision: VALID" if ok else
            "Reasoning: The rendering names a different referent.\nDecision: INVALID")


def score(n):
    return f"Reasoning: Judged against the rubric.\nScore: {n}"


# ---------------------------------------------------------------------------
# Sample corpus

sample = [instance(i[0], i[1], i[2], i[3], i[4], i[5], i[6], i[7], i[8]) for i in ITEMS]
by_id = {r["id"]: r for r in sample}
dump_jsonl(DATA / "sample" / "corpus.jsonl",
           [{"corpus": {"name": "sample", "language_pair": "zh-en", "version": "1"}}] + sample)

# Hand tally of per-category statistics.
rows = []
for cat in ["Material", "Social", "Linguistic", "Religious", "Ecological"]:
    sub = [r for r in sample if r["category"] == cat]
    if not sub:
        continue
    rows.append(dict(category=cat, count=len(sub),
                     ratio=round(100.0 * len(sub) / len(sample), 1),
                     avg_source_term_len=sum(r["source_span"][1] - r["source_span"][0] for r in sub) / len(sub),
                     avg_target_term_len=sum(r["reference_span"][1] - r["reference_span"][0] for r in sub) / len(sub),
                     avg_context_len=sum(len(r["source_text"]) - (r["source_span"][1] - r["source_span"][0])
                                         for r in sub) / len(sub)))
total = dict(category="Total", count=len(sample), ratio=100.0,
             avg_source_term_len=sum(r["source_span"][1] - r["source_span"][0] for r in sample) / len(sample),
             avg_target_term_len=sum(r["reference_span"][1] - r["reference_span"][0] for r in sample) / len(sample),
             avg_context_len=sum(len(r["source_text"]) - (r["source_span"][1] - r["source_span"][0])
                                 for r in sample) / len(sample))
dump_json(DATA / "sample" / "expected_stats.json", {"rows": rows, "total": total})

# Two systems: one close to the references, one with weaker term renderings.
hyps = []
for it in ITEMS:
    hyps.append({"instance_id": it[0], "system_id": "sys_a", "mode": "zero_shot", "text": it[5]})
for it in ITEMS:
    hyps.append({"instance_id": it[0], "system_id": "sys_b", "mode": "zero_shot", "text": it[5].replace(it[6], it[9], 1)})
dump_jsonl(DATA / "sample" / "hypotheses.jsonl", hyps)

dump_json(DATA / "sample" / "mock_judge.json", {
    "rules": [
        {"template": "validator", "choose": [validity(True), validity(True), validity(True), validity(False)]},
        {"template": "fidelity", "choose": [score(2), score(3), score(4), score(5)]},
        {"template": "fidelity_no_reference", "choose": [score(2), score(3), score(4), score(5)]},
        {"template": "clarity", "choose": [score(3), score(4), score(5)]},
        {"template": "dispatcher", "when": {"SOURCE_WITH_BRACKETS": {"contains": "["}},
         "choose": ["Protocol A", "Protocol B"]},
        {"template": "error_classifier", "choose": ["Labels: NONE", "Labels: Literalization, Neutralization",
                                                    "Labels: Omission", "Labels: Sense Error"]},
    ],
})

# Screening mock that rejects a3 and a7 for salience.
dump_json(DATA / "sample" / "mock_filter.json", {
    "rules": [
        {"template": "screen", "when": {"SOURCE": {"contains": "破防"}},
         "respond": "Reasoning: Transient slang with little cultural depth.\nDecision: FAIL"},
        {"template": "screen", "when": {"SOURCE": {"contains": "车到山前"}},
         "respond": "Reasoning: The reference paraphrases the proverb away.\nDecision: FAIL"},
    ],
    "default": {"screen": "Reasoning: Meets the criterion.\nDecision: PASS"},
})

# Scripted translations: each source maps to the sys_b text.
trans_rules = []
for it in ITEMS:
    trans_rules.append({"template": "translate_0shot", "when": {"SOURCE": {"equals": it[3]}},
                        "respond": it[5].replace(it[6], it[9], 1)})
    trans_rules.append({"template": "translate_1shot", "when": {"SOURCE": {"equals": it[3]}},
                        "respond": it[5]})
dump_json(DATA / "sample" / "mock_translate.json", {"rules": trans_rules})
dump_jsonl(DATA / "sample" / "expected_translations.jsonl",
           [{"instance_id": it[0], "system_id": "scripted", "mode": "zero_shot",
             "text": it[5].replace(it[6], it[9], 1)} for it in ITEMS], compact=True)
dump_json(DATA / "sample" / "demo.json", {
    "id": "demo1", "source": "他这个人说话总是绕来绕去，从不直说。",
    "translation": "He always talks in circles and never says anything directly."})

# ---------------------------------------------------------------------------
# 4-instance hand fixture: one fluent hallucination, every raw score 5.

hand_ids = ["a33", "a18", "a1", "a43"]
hand = []
for n, aid in enumerate(hand_ids, 1):
    r = dict(by_id[aid])
    r["id"] = f"h{n}"
    hand.append(r)
dump_jsonl(DATA / "fixtures" / "hand" / "corpus.jsonl", hand)
hand_hyps = [
    {"instance_id": "h1", "system_id": "sys_h", "mode": "zero_shot", "text": by_id["a33"]["reference_text"]},
    {"instance_id": "h2", "system_id": "sys_h", "mode": "zero_shot",
     "text": "Before the Dragon Boat Festival, the train station was packed with people going home."},
    {"instance_id": "h3", "system_id": "sys_h", "mode": "zero_shot", "text": by_id["a1"]["reference_text"]},
    {"instance_id": "h4", "system_id": "sys_h", "mode": "zero_shot", "text": by_id["a43"]["reference_text"]},
]
dump_jsonl(DATA / "fixtures" / "hand" / "hypotheses.jsonl", hand_hyps)
dump_json(DATA / "fixtures" / "hand" / "mock.json", {
    "rules": [{"template": "validator", "when": {"HYPOTHESIS": {"contains": "Dragon Boat"}}, "respond": validity(False)}],
    "default": {"validator": validity(True), "fidelity": score(5), "fidelity_no_reference": score(5),
                "clarity": score(5)},
})
# Hand computation at alpha = beta = 0.5: valid items give 0.5*1 + 0.5*1 = 1.
dump_json(DATA / "fixtures" / "hand" / "expected.json", {
    "full": {"validity_rate": 3 / 4, "mean_acre": (1 + 0 + 1 + 1) / 4},
    "no_gate": {"validity_rate": 3 / 4, "mean_acre": (1 + 1 + 1 + 1) / 4}})

# ---------------------------------------------------------------------------
# Gate-ablation fixture: fluent hallucinations are INVALID yet score 5.

abl_ids = [f"a{i}" for i in range(1, 21)]
dump_jsonl(DATA / "fixtures" / "ablation" / "corpus.jsonl", [by_id[i] for i in abl_ids])
abl_hyps, abl_rules, judgments = [], [], []
items = {it[0]: it for it in ITEMS}
for n, aid in enumerate(abl_ids):
    it = items[aid]
    if aid in HALLUCINATIONS:
        text, ok, f, c, truth = it[5].replace(it[6], HALLUCINATIONS[aid], 1), False, 5, 5, False
    elif aid in LITERAL:
        text, ok, f, c, truth = it[5].replace(it[6], it[9], 1), True, 2, 3, False
    else:
        text, ok, f, c, truth = it[5], True, 4 + n % 2, 5 - n % 2, True
    abl_hyps.append({"instance_id": aid, "system_id": "sys_x", "mode": "zero_shot", "text": text})
    when = {"HYPOTHESIS": {"equals": text}}
    abl_rules += [{"template": "validator", "when": when, "respond": validity(ok)},
                  {"template": "fidelity", "when": when, "respond": score(f)},
                  {"template": "fidelity_no_reference", "when": when, "respond": score(f)},
                  {"template": "clarity", "when": when, "respond": score(c)}]
    judgments.append({"instance_id": aid, "system_id": "sys_x", "cultural_correct": truth})
dump_jsonl(DATA / "fixtures" / "ablation" / "hypotheses.jsonl", abl_hyps)
dump_jsonl(DATA / "fixtures" / "ablation" / "judgments.jsonl", judgments)
dump_json(DATA / "fixtures" / "ablation" / "mock.json", {"rules": abl_rules})

# ---------------------------------------------------------------------------
# Sensitivity fixture, with a BLEU oracle to document the expected classes.

PUNCT = set("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~")


def tokenize(s):
    out, cur = [], ""
    for ch in s:
        if ch.isspace():
            if cur:
                out.append(cur)
            cur = ""
        elif ch in PUNCT:
            if cur:
                out.append(cur)
            cur = ""
            out.append(ch)
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def sentence_bleu(h, r):
    h, r = tokenize(h), tokenize(r)
    logs, eff = 0.0, 0
    for n in range(1, 5):
        hg = Counter(tuple(h[i:i + n]) for i in range(len(h) - n + 1))
        rg = Counter(tuple(r[i:i + n]) for i in range(len(r) - n + 1))
        t = sum(hg.values())
        if t == 0:
            continue
        m = sum(min(c, rg[g]) for g, c in hg.items())
        p = (m + 1) / (t + 1) if n > 1 else m / t
        if p == 0:
            return 0.0
        logs += math.log(p)
        eff += 1
    bp = 1.0 if len(h) >= len(r) else math.exp(1 - len(r) / len(h))
    return 100 * bp * math.exp(logs / eff)


def delete(h, term):
    i = h.index(term)
    left, right = h[:i].rstrip(" "), h[i + len(term):].lstrip(" ")
    if not left:
        return right
    if not right or right[0] in ",.;:!?":
        return left + right
    return left + " " + right


sens_corpus, sens_hyps, table, sens_rules = [], [], {}, []
omission, overint = [], []
for s in SENSITIVITY:
    sens_corpus.append(instance(s["id"], s["category"], "literary", s["source"], s["term"], s["reference"],
                                s["ref_term"], s["explication"]))
    sens_hyps.append({"instance_id": s["id"], "system_id": "sys_s", "mode": "zero_shot", "text": s["hyp"]})
    table[s["id"]] = {"hypernym": s["hypernym"], "clause": s["clause"], "substitutions": s["subs"]}
    base = sentence_bleu(s["hyp"], s["reference"])
    i = s["hyp"].index(s["ref_term"]) + len(s["ref_term"])
    omission.append(base - sentence_bleu(delete(s["hyp"], s["ref_term"]), s["reference"]))
    overint.append(base - sentence_bleu(s["hyp"][:i] + " " + s["clause"] + s["hyp"][i:], s["reference"]))
    sens_rules.append({"template": "validator", "when": {"HYPOTHESIS": {"contains": s["subs"]["SenseError"]}},
                       "respond": validity(False)})
assert all(d > 0 for d in omission), omission
assert sum(overint) / len(overint) < 5.0, overint
dump_jsonl(DATA / "fixtures" / "sensitivity" / "corpus.jsonl", sens_corpus)
dump_jsonl(DATA / "fixtures" / "sensitivity" / "hypotheses.jsonl", sens_hyps)
dump_json(DATA / "fixtures" / "sensitivity" / "perturbations.json", table)
dump_json(DATA / "fixtures" / "sensitivity" / "mock.json", {
    "rules": sens_rules + [
        {"template": "perturb", "when": {"REALIZED_SPAN": {"equals": "kang"}, "ERROR_DEFINITION": {"prefix": "Literalization"}},
         "respond": "Rewritten: That winter was particularly cold, so every night grandpa went to sleep early on the warm fire bed, puffing on his pipe as he told us stories about the village and the people who lived there long ago."}],
    "default": {"validator": validity(True), "fidelity": score(4), "clarity": score(5)},
})
dump_json(DATA / "fixtures" / "sensitivity" / "expected.json", {
    "bleu_omission_deltas": omission, "bleu_overinterpretation_deltas": overint,
    "bleu_overinterpretation_mean": sum(overint) / len(overint)})

# ---------------------------------------------------------------------------
# Correlation fixture: scores for three metrics against binary judgments.

rng = random.Random(20260301)
corr_scores, corr_judg = [], []
keys = [(f"a{i}", s) for i in range(1, 16) for s in ("sys_a", "sys_b")]
truth = {}
for k in keys:
    truth[k] = rng.random() < 0.55
    corr_judg.append({"instance_id": k[0], "system_id": k[1], "cultural_correct": truth[k]})
values = {"bleu": {}, "chrf_pp": {}, "acre": {}}
for k in keys:
    t = 1.0 if truth[k] else 0.0
    values["bleu"][k] = round(rng.uniform(10, 60) + 8 * t, 2)
    values["chrf_pp"][k] = round(rng.uniform(30, 70) + 10 * t, 2)
    values["acre"][k] = 0.0 if (not truth[k] and rng.random() < 0.6) else round(rng.choice([0.25, 0.5, 0.625, 0.75, 1.0]), 3)
for m, vals in values.items():
    for k in keys:
        corr_scores.append({"instance_id": k[0], "system_id": k[1], "metric": m, "value": vals[k]})
dump_jsonl(DATA / "fixtures" / "correlation" / "scores.jsonl", corr_scores)
dump_jsonl(DATA / "fixtures" / "correlation" / "judgments.jsonl", corr_judg)
order = sorted(keys)
expected = []
y = np.array([1.0 if truth[k] else 0.0 for k in order])
for m in sorted(values):
    x = np.array([values[m][k] for k in order])
    expected.append({"metric": m, "pearson_r": float(sps.pearsonr(x, y)[0]),
                     "spearman_rho": float(sps.spearmanr(x, y)[0]), "n": len(order)})
dump_json(DATA / "fixtures" / "correlation" / "expected.json", expected)

# ---------------------------------------------------------------------------
# Error annotations: 20 rows across two systems.

ann = [
    ("a1", "sys_a", []), ("a2", "sys_a", ["Literalization"]), ("a3", "sys_a", []),
    ("a4", "sys_a", ["Neutralization", "Literalization"]), ("a5", "sys_a", []),
    ("a6", "sys_a", ["OverInterpretation"]), ("a7", "sys_a", []), ("a8", "sys_a", ["Omission", "SenseError"]),
    ("a9", "sys_a", []), ("a10", "sys_a", ["PragmaticShift", "MisSubstitution"]),
    ("a1", "sys_b", ["Literalization"]), ("a2", "sys_b", ["Literalization"]), ("a3", "sys_b", ["Omission"]),
    ("a4", "sys_b", []), ("a5", "sys_b", ["SenseError", "Neutralization"]),
    ("a6", "sys_b", ["Neutralization", "OverInterpretation"]), ("a7", "sys_b", ["PragmaticShift"]),
    ("a8", "sys_b", []), ("a9", "sys_b", ["Literalization", "PragmaticShift"]), ("a10", "sys_b", ["MisSubstitution"]),
]
PRIORITY = ["Omission", "Literalization", "SenseError", "Neutralization", "MisSubstitution", "PragmaticShift",
            "OverInterpretation"]
dump_jsonl(DATA / "fixtures" / "errors" / "annotations.jsonl",
           [{"instance_id": a, "system_id": s, "labels": l, "source": "human"} for a, s, l in ann])


def tally(rows):
    inc = [min(l, key=PRIORITY.index) for _, _, l in rows if l]
    c = Counter(inc)
    return {"n": len(rows), "correctness_rate": (len(rows) - len(inc)) / len(rows),
            "shares": {k: v / len(inc) for k, v in c.items()}}


dump_json(DATA / "fixtures" / "errors" / "expected.json", {
    "pooled": tally(ann), "sys_a": tally([r for r in ann if r[1] == "sys_a"]),
    "sys_b": tally([r for r in ann if r[1] == "sys_b"])})

# ---------------------------------------------------------------------------
# Mining: raw text, a scripted extraction, and 10 golden candidates.

mine_ids = ["a1", "a9", "a17", "a20", "a33", "a34", "a42", "a45", "a47", "a49"]
raw_lines = [f"{items[i][3]}\t{items[i][5]}" for i in mine_ids[:5]] + [""] + \
            [f"{items[i][3]}\t{items[i][5]}" for i in mine_ids[5:]]
(DATA / "fixtures" / "mining").mkdir(parents=True, exist_ok=True)
(DATA / "fixtures" / "mining" / "raw.tsv").write_text("\n".join(raw_lines) + "\n", encoding="utf-8")
cands = [{"src": items[i][3], "tgt": items[i][5], "focus_term": items[i][4], "origin": f"raw.tsv#{n}"}
         for n, i in enumerate(mine_ids)]
dump_jsonl(DATA / "fixtures" / "mining" / "candidates.jsonl", cands)
spellings = {"Linguistic": "Linguistic Culture", "Social": "social culture", "Material": "MATERIAL CULTURE",
             "Ecological": "Ecological", "Religious": "Religious Culture"}
tax_rules = []
key = {}
for i in mine_ids:
    cat = items[i][1]
    key[items[i][4]] = cat
    tax_rules.append({"template": "taxonomy", "when": {"FOCUS_TERM": {"equals": items[i][4]}},
                      "respond": "```json\n" + json.dumps({"term": items[i][4], "category": spellings[cat],
                                                           "reason": "Scripted."}, ensure_ascii=False) + "\n```"})
mining_answer = [{"src": items[i][3], "tgt": items[i][5], "focus_term": items[i][4]} for i in mine_ids[:3]]
mining_answer.append({"src": items["a20"][3], "tgt": items["a20"][5], "focus_term": "不存在"})
dump_json(DATA / "fixtures" / "mining" / "mock.json", {
    "rules": tax_rules + [
        {"template": "mining", "when": {"RAW_TEXT_CHUNK": {"contains": items["a1"][4]}},
         "respond": json.dumps(mining_answer, ensure_ascii=False)},
        {"template": "explicate", "respond": "Explication: A scripted one-sentence definition."}],
    "default": {"mining": "[]"},
})
dump_json(DATA / "fixtures" / "mining" / "key.json", key)
dump_json(DATA / "fixtures" / "mining" / "sidecar.json", {
    items[i][4]: {"explication": items[i][7], "target_term": items[i][6],
                  **({"standard_equivalent": items[i][8]} if items[i][8] else {})} for i in mine_ids})

# ---------------------------------------------------------------------------
# Golden renders, produced by plain {{NAME}} replacement.

bindings = {
    "mining": {"RAW_TEXT_CHUNK": raw_lines[0]},
    "taxonomy": {"SOURCE_SENTENCE": items["a33"][3], "FOCUS_TERM": items["a33"][4]},
    "dispatcher": {"SOURCE_WITH_BRACKETS": "上班时间他总在[摸鱼]，老板早就看出来了。"},
    "validator": {"PROTOCOL_LABEL": "Protocol A (Fact-Centric)", "SOURCE": items["a33"][3], "TERM": items["a33"][4],
                  "EXPLICATION": items["a33"][7], "HYPOTHESIS": "In winter he sleeps on the bed and never feels cold."},
    "fidelity": {"DYNAMIC_INSTRUCTION": (ASSETS / "prompts" / "fidelity_protocol_b.txt").read_text(encoding="utf-8")[:-1],
                 "PROTOCOL_LABEL": "Protocol B (Style-Centric)", "SOURCE": items["a2"][3], "REFERENCE": items["a2"][5],
                 "HYPOTHESIS": "He is always touching fish during work hours, and the boss noticed long ago."},
    "fidelity_no_reference": {"DYNAMIC_INSTRUCTION": (ASSETS / "prompts" / "fidelity_protocol_a.txt").read_text(encoding="utf-8")[:-1],
                              "PROTOCOL_LABEL": "Protocol A (Fact-Centric)", "SOURCE": items["a17"][3],
                              "HYPOTHESIS": items["a17"][5]},
    "clarity": {"SOURCE": items["a37"][3], "HYPOTHESIS": items["a37"][5]},
    "translate_0shot": {"SOURCE": items["a21"][3]},
    "translate_1shot": {"DEMO_SOURCE": "他这个人说话总是绕来绕去，从不直说。",
                        "DEMO_TRANSLATION": "He always talks in circles and never says anything directly.",
                        "SOURCE": items["a21"][3]},
    "error_classifier": {"SOURCE": items["a4"][3], "TERM": items["a4"][4], "EXPLICATION": items["a4"][7],
                         "HYPOTHESIS": "Don't draw legs on a snake on this matter."},
    "screen": {"CRITERION": (ASSETS / "criteria" / "semantic_misalignment.txt").read_text(encoding="utf-8")[:-1],
               "SOURCE": items["a24"][3], "TERM": items["a24"][4], "REFERENCE": items["a24"][5]},
    "perturb": {"SOURCE": items["a33"][3], "TERM": items["a33"][4], "EXPLICATION": items["a33"][7],
                "HYPOTHESIS": items["a33"][5], "REALIZED_SPAN": items["a33"][6],
                "ERROR_DEFINITION": "Literalization: a scripted definition."},
    "explicate": {"SOURCE_SENTENCE": items["a45"][3], "FOCUS_TERM": items["a45"][4]},
}
dump_json(DATA / "golden" / "bindings.json", bindings)


def render(text, b):
    for k, v in b.items():
        text = text.replace("{{" + k + "}}", v)
    assert "{{" not in text, text
    return text


for name, b in bindings.items():
    system = (ASSETS / "prompts" / f"{name}.system.txt").read_text(encoding="utf-8")[:-1]
    user = (ASSETS / "prompts" / f"{name}.user.txt").read_text(encoding="utf-8")[:-1]
    out = "[System]\n" + render(system, b) + "\n\n[User]\n" + render(user, b) + "\n"
    (DATA / "golden" / f"{name}.txt").write_text(out, encoding="utf-8")

print("omission deltas", [round(d, 3) for d in omission])
print("over-interpretation deltas", [round(d, 3) for d in overint])
print("correlation", expected)
