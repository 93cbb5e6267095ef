#!/usr/bin/env python3
"""Regenerates the deterministic test fixtures under data/fixtures/.

Run from the repository root: python3 data/fixtures/make_fixtures.py
"""
import json
import os
import random

ROOT = os.path.dirname(os.path.abspath(__file__))
ASSET = os.path.join(ROOT, "..", "..", "core", "assets", "checklist_questions.txt")

ANSWERS = [
    ("Yes", "The abstract and Section 1 list the three contributions."),
    ("Yes", "Section 5 discusses limitations of the evaluation."),
    ("Yes", "Proposition 1 is in Section 3 with its proof in Appendix A."),
    ("Yes", "Section 4 and Appendix B describe the setup."),
    ("Yes", "Code, configuration files and trained adapters are released under the MIT license "
            "at an anonymized repository, and Appendix B lists package versions, random seeds and "
            "the exact commands needed to reproduce Table 2 from the public corpus."),
    ("Yes", "Section 4 gives the optimizer, learning rate and splits."),
    ("Yes", "Table 2 reports standard deviations over three seeds."),
    ("Yes", "Section 4 states the GPU type and run time."),
    ("Yes", "We follow the NeurIPS Code of Ethics."),
    ("Yes", "Section 6 discusses positive and negative impacts."),
    ("NA", "We release no high-risk models or scraped data."),
    ("Yes", "The corpus license is cited in Section 4."),
    ("Yes", "Appendix B documents the released adapters."),
    ("NA", "No crowdsourcing or human subjects were involved."),
    ("NA", "No human subjects research was conducted."),
]

# Scripted judge: three questions pass, twelve need improvement.
SCORES = {3: "1", 9: "1", 15: "1"}

REVIEWS = {
    1: "The abstract states a relative reduction of 8% but the introduction does not say against which baseline.\n\n1. State the comparison baseline next to the headline number.\n2. Mention the read-speech restriction when stating the scope.",
    2: "Limitations are listed, but the justification should point to the exact section and the computational cost of gating is not discussed.\n\n1. Add the training overhead of the gates.\n2. Discuss robustness to the gate threshold.",
    3: "The proposition is stated with its assumption on bounded gradients and the proof is referenced in Appendix A. The answer and justification are consistent with the paper.",
    4: "The setup is described, yet the hard concrete temperature and the exact decoding settings are missing.\n\n1. Report the gate distribution parameters.\n2. State the decoding beam size and language model use.",
    5: "Code and adapters are released, but the repository link cannot be checked during review and the data preprocessing scripts are not mentioned.\n\n1. Include preprocessing scripts in the supplementary material.\n2. Give the exact corpus version.",
    6: "Optimizer and learning rate are given; warmup, gradient clipping and the lambda value are not.\n\n1. Report lambda for every language.\n2. Describe the learning-rate schedule in full.",
    7: "Standard deviations over three seeds are reported, but it is not said how they were computed or whether they are population or sample estimates.\n\n1. State the estimator.\n2. Consider confidence intervals for the average over languages.",
    8: "GPU type and time per run are given, but the total compute including hyperparameter search is not.\n\n1. Report total GPU hours.\n2. Mention memory requirements.",
    9: "Nothing in the paper conflicts with the Code of Ethics and the released material is limited to adapters trained on consenting speakers.",
    10: "Both positive and negative impacts are mentioned briefly.\n\n1. Expand on mitigation for surveillance misuse.\n2. Discuss effects on speakers of dialects not covered.",
    11: "The answer NA is plausible, yet speech adapters could be misused; a short note on release safeguards would help.\n\n1. Explain why no safeguards are needed or describe them.",
    12: "The corpus license is named, but the license of the pretrained encoder is not cited.\n\n1. Cite the encoder's original paper and license.\n2. Give the corpus version and URL.",
    13: "Released adapters are mentioned, but no documentation of training data and intended use accompanies them.\n\n1. Provide a model card for the adapters.\n2. State the license of each released asset.",
    14: "NA is used, but the corpus was recorded from volunteers; clarify that no new data collection was performed.\n\n1. State that all data are from an existing corpus.",
    15: "No new human subjects research was performed; the NA answer is appropriate.",
}


def load_questions():
    qs = {}
    cur = None
    in_g = False
    for line in open(ASSET, encoding="utf-8").read().split("\n"):
        if line.startswith("## "):
            cur = {"index": int(line[3:]), "guides": []}
            qs[cur["index"]] = cur
            in_g = False
        elif cur and not in_g and line.startswith("Title: "):
            cur["title"] = line[7:]
        elif cur and not in_g and line.startswith("Question: "):
            cur["question"] = line[10:]
        elif line == "Guidelines:":
            in_g = True
        elif in_g and line.strip():
            cur["guides"].append(line)
    return qs


def write(path, text):
    path = os.path.join(ROOT, path)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def sidecar(answers):
    return "".join("## %d\nAnswer: %s\nJustification: %s\n\n" % (i, a, j)
                   for i, (a, j) in enumerate(answers, 1))


def rendered(qs, answers):
    out = ["NeurIPS Paper Checklist", ""]
    for i, (a, j) in enumerate(answers, 1):
        q = qs[i]
        out.append("%d. %s" % (i, q["title"]))
        out.append("Question: " + q["question"])
        out.append("Answer: [%s]" % a)
        out.append("Justification: " + j)
        out.append("Guidelines:")
        out.extend(q["guides"])
        out.append("")
    return "\n".join(out)


def paper_fixture(qs):
    write("paper/checklist.sidecar", sidecar(ANSWERS))
    write("paper/checklist.txt", rendered(qs, ANSWERS))


def review_mock():
    routes = []
    for i in range(1, 16):
        name = "q%02d.txt" % i
        write("mock_review/" + name, REVIEWS[i] + "\n\nScore: %s\n" % SCORES.get(i, "0.5"))
        routes.append({"kind": "review", "question": i, "replies": [{"file": name}],
                       "on_exhaust": "repeat_last"})
    write("mock_review/mock.json", json.dumps({"routes": routes}, indent=2) + "\n")
    write("mock_redteam/mock.json", json.dumps(
        {"behaviors": {"review": "length_judge", "attack": "appending_attacker"}}, indent=2) + "\n")
    write("mock_generator/mock.json", json.dumps({"seed": 2024}, indent=2) + "\n")


# --- Re-submission corpus ------------------------------------------------------

WORDS = ("section appendix table figure results dataset license code seeds compute "
         "baseline ablation error bars variance limitations assumptions proof hardware "
         "runtime split protocol metric release documentation consent risk").split()


def sentence(rng, n):
    return " ".join(rng.choice(WORDS) for _ in range(n)).capitalize() + "."


def report(pid, answers, justs, verdicts):
    outcomes = []
    for i in range(15):
        score = 1 if verdicts[i] == "NoConcerns" else 0.5
        outcomes.append({"index": i + 1, "answer": answers[i], "justification": justs[i],
                         "review_text": "Scripted review of question %d." % (i + 1),
                         "raw_score": score, "verdict": verdicts[i], "attempts": 1})
    ni = sum(v == "NeedsImprovement" for v in verdicts)
    return json.dumps({"paper_id": pid, "outcomes": outcomes, "needs_improvement_count": ni,
                       "warnings": []}, indent=2) + "\n"


def resubmission():
    rng = random.Random(20240915)
    n_pairs = 40
    # Questions of change type "none": 100 instances with 7 improved, 81 unchanged, 12 worse.
    none_outcomes = ["improved"] * 7 + ["unchanged"] * 81 + ["worse"] * 12
    rng.shuffle(none_outcomes)
    none_counts = [14] + [3] * 8 + [2] * 31
    assert sum(none_counts) == 100
    answer_pairs = set(range(22))
    long_target = 0
    changed_total = 0
    cursor = 0
    for p in range(n_pairs):
        pid = "p%02d" % (p + 1)
        first_ans = [rng.choice(["Yes", "Yes", "Yes", "No", "NA"]) for _ in range(15)]
        first_j = [sentence(rng, rng.randint(4, 9)) for _ in range(15)]
        second_ans = list(first_ans)
        second_j = list(first_j)
        order = list(range(15))
        rng.shuffle(order)
        none_q = set(order[:none_counts[p]])
        if p == 0:
            # Documentation answer revised from NA to Yes, justification kept.
            first_ans[12], second_ans[12] = "NA", "Yes"
            none_q = set(range(15)) - {12}
        for q in range(15):
            if q in none_q or p == 0:
                continue
            changed_total += 1
            n1 = len(first_j[q].split())
            if changed_total % 5 in (1, 2, 3):
                n2 = 2 * n1 + rng.randint(0, 6)
                long_target += 1
            else:
                n2 = n1 + rng.randint(1, n1 - 1)
            second_j[q] = sentence(rng, n2)
        if p in answer_pairs and p != 0:
            candidates = [q for q in range(15) if q not in none_q]
            q = rng.choice(candidates)
            second_ans[q] = {"Yes": "No", "No": "Yes", "NA": "Yes", "TODO": "Yes"}[first_ans[q]]
        v1, v2 = [], []
        for q in range(15):
            if q in none_q:
                o = none_outcomes[cursor]
                cursor += 1
                if o == "improved":
                    a, b = "NeedsImprovement", "NoConcerns"
                elif o == "worse":
                    a, b = "NoConcerns", "NeedsImprovement"
                else:
                    a = rng.choice(["NeedsImprovement", "NeedsImprovement", "NoConcerns"])
                    b = a
            else:
                a = rng.choice(["NeedsImprovement", "NoConcerns"])
                b = rng.choice(["NeedsImprovement", "NoConcerns"])
            v1.append(a)
            v2.append(b)
        for side, ans, js, vs in (("first", first_ans, first_j, v1), ("second", second_ans, second_j, v2)):
            write("resubmission/%s/%s/checklist.sidecar" % (side, pid), sidecar(list(zip(ans, js))))
            write("resubmission/%s/%s/report.json" % (side, pid), report(pid, ans, js, vs))
    assert cursor == 100
    # One more pair whose first checklist was left entirely as TODO.
    pid = "p41"
    ans1 = ["TODO"] * 15
    js1 = ["" for _ in range(15)]
    ans2 = ["Yes"] * 15
    js2 = [sentence(rng, 6) for _ in range(15)]
    for side, ans, js in (("first", ans1, js1), ("second", ans2, js2)):
        write("resubmission/%s/%s/checklist.sidecar" % (side, pid), sidecar(list(zip(ans, js))))
        write("resubmission/%s/%s/report.json" % (side, pid),
              report(pid, ans, js, ["NeedsImprovement"] * 15))


# --- Feedback clustering -------------------------------------------------------

THEMES = [
    ("Highlight novel contributions", "Make the novelty of the approach and findings explicit in the abstract and introduction.",
     ["Contribution statements", "Novelty and impact", "Main claim wording"], 122),
    ("Consistent documentation of claims", "Keep methods, findings and claims consistent and precisely referenced across the paper.",
     ["Appendix references", "Consistency checks", "Specific section pointers"], 50),
    ("Theory and evidence linkage", "Tie theoretical claims to the empirical evidence that supports them.",
     ["Experiment elaboration", "Baseline comparison", "Proof clarification"], 38),
    ("Practical applicability", "Explain how findings generalize and apply outside the studied setting.",
     ["Practical implications", "Concrete examples", "Generalizability"], 31),
]


def clustering():
    rng = random.Random(7)
    points = []
    for t, (name, _, subs, freq) in enumerate(THEMES):
        for k in range(freq):
            sub = subs[k % len(subs)]
            points.append((t, "%s %d" % (sub, k + 1), "Feedback item about %s." % sub.lower()))
    rng.shuffle(points)
    write("clustering/claims/points.txt",
          "".join("POINT: %s | %s\n" % (n, d) for _, n, d in points))
    blocks = []
    for t, (name, desc, subs, _) in enumerate(THEMES):
        members = [str(i + 1) for i, p in enumerate(points) if p[0] == t]
        blocks.append("THEME: %s\nDESCRIPTION: %s\nSUBCATEGORIES: %s\nMEMBERS: %s\n"
                      % (name, desc, "; ".join(subs), ", ".join(members)))
    write("clustering/claims/themes.txt", "\n".join(blocks))
    write("clustering/claims/mock.json", json.dumps(
        {"routes": [{"kind": "cluster", "replies": [{"file": "themes.txt"}], "on_exhaust": "repeat_last"}]},
        indent=2) + "\n")


def extraction():
    review = REVIEWS[12] + "\n\nScore: 0.5\n"
    write("extraction/review_q12.txt", review)
    write("extraction/points_q12.txt",
          "<START OF POINTS>\n"
          "POINT: Cite encoder license | The license of the pretrained encoder should be cited with its source.\n"
          "POINT: Cite original encoder paper | Credit the creators of the pretrained encoder.\n"
          "POINT: Corpus version | State which version of the corpus was used.\n"
          "POINT: Corpus URL | Give a URL for the corpus.\n"
          "POINT: Justification pointer | Point to the section where licenses are discussed.\n"
          "<END OF POINTS>\n")
    write("extraction/mock.json", json.dumps(
        {"routes": [{"kind": "extract", "replies": [{"file": "points_q12.txt"}], "on_exhaust": "repeat_last"},
                    {"kind": "cluster", "replies": [{"file": "themes_q12.txt"}], "on_exhaust": "repeat_last"}]},
        indent=2) + "\n")
    write("extraction/themes_q12.txt",
          "THEME: Asset licensing\nDESCRIPTION: Cite licenses and sources of reused assets.\n"
          "SUBCATEGORIES: Encoder license; Original paper\nMEMBERS: 1, 2\n\n"
          "THEME: Dataset details\nDESCRIPTION: Identify the exact data used.\n"
          "SUBCATEGORIES: Corpus version; Corpus URL\nMEMBERS: 3, 4\n\n"
          "THEME: Justification quality\nDESCRIPTION: Justifications should point to sections.\n"
          "SUBCATEGORIES: Section pointers\nMEMBERS: 5\n")


if __name__ == "__main__":
    qs = load_questions()
    paper_fixture(qs)
    review_mock()
    resubmission()
    clustering()
    extraction()
