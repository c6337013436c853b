"""Acceptance criteria, one test each.

Every test runs inside the ``acceptance`` fixture, which prints a PASS/FAIL
line per criterion in the pytest terminal summary. Oracles here are written
independently of the package code: string containment instead of span
matching, recursion instead of the greedy loop, dense arithmetic instead of
sparse kernels.
"""

import hashlib
import json
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from nesent.cli import main
from nesent.corpus import Corpus, Document, Polarity, Split
from nesent.evaluation import AblationConfig, evaluate, run_ablation
from nesent.lexicon import Lexicon, LexiconEntry, Scheme, dp_score, sfs_score
from nesent.ne_provider import NEG_TAG, POS_TAG, NamedEntity, NeAnnotations
from nesent.ne_sentiment import NePolarityMap, Scope, detect_ne_polarity, tag_entities
from nesent.supervised import (FeatureSpace, NGramConfig, build_feature_space, predict_nb, predict_svm,
                               svm_objective, train_nb, train_svm, vectorize)
from nesent.synthetic import ne_signal_corpus

P, N, U = Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NEUTRAL


# ------------------------------------------------------------------ helpers

def random_ne_problem(rng):
    """Random corpus (<=200 docs, neutral labels included) plus <=20 entities."""
    vocab = [f"w{i}" for i in range(rng.randint(4, 10))]
    n_ent = rng.randint(1, 20)
    surfaces = set()
    while len(surfaces) < n_ent:
        surfaces.add(tuple(rng.choice(vocab) for _ in range(rng.randint(1, 3))))
    surfaces = sorted(surfaces)
    docs, ann = [], {}
    for i in range(rng.randint(5, 200)):
        tokens = [rng.choice(vocab) for _ in range(rng.randint(0, 12))]
        mentioned = rng.sample(surfaces, rng.randint(0, min(2, len(surfaces))))
        for s in mentioned:
            at = rng.randint(0, len(tokens))
            tokens[at:at] = s
        split = Split.TEST if rng.random() < 0.3 else Split.TRAIN
        doc_id = f"d{i}"
        docs.append(Document(doc_id, " ".join(tokens), rng.choice([P, N, U]), split, tuple(tokens)))
        if mentioned:
            ann[doc_id] = [NamedEntity(s) for s in mentioned]
    if not any(d.split is Split.TRAIN for d in docs):
        docs[0] = Document(docs[0].id, docs[0].raw_text, docs[0].gold, Split.TRAIN, docs[0].tokens)
    return Corpus(tuple(docs)), NeAnnotations(ann)


def contains(tokens, surface):
    return f" {' '.join(surface)} " in f" {' '.join(tokens)} "


def oracle_polarities(corpus, annotations, scope):
    docs = [d for d in corpus if scope is Scope.ALL_LABELED or d.split is Split.TRAIN]
    universe = {e.surface for d in docs for e in annotations.entities_for(d.id)}
    assigned, unassigned = {}, set()
    for s in universe:
        pos = sum(contains(d.tokens, s) for d in docs if d.gold is P)
        neg = sum(contains(d.tokens, s) for d in docs if d.gold is N)
        if pos > neg:
            assigned[s] = P
        elif neg > pos:
            assigned[s] = N
        else:
            unassigned.add(s)
    return assigned, unassigned


def naive_greedy(tokens, table):
    """Recursive statement of greedy uni+bi lookup: try the bigram, else the unigram."""
    if not tokens:
        return []
    if len(tokens) >= 2 and tuple(tokens[:2]) in table:
        return [table[tuple(tokens[:2])]] + naive_greedy(tokens[2:], table)
    head = [table[(tokens[0],)]] if (tokens[0],) in table else []
    return head + naive_greedy(tokens[1:], table)


# ----------------------------------------------------------------- criteria

def test_c01_ne_polarity_matches_brute_force(acceptance):
    with acceptance(1, "entity polarity equals brute-force counter (50 corpora, both scopes)"):
        rng = random.Random(2024)
        for _ in range(50):
            corpus, annotations = random_ne_problem(rng)
            for scope in (Scope.TRAIN_ONLY, Scope.ALL_LABELED):
                pmap, scores, stats = detect_ne_polarity(corpus, annotations, scope)
                assigned, unassigned = oracle_polarities(corpus, annotations, scope)
                assert pmap.assigned == assigned
                assert set(pmap.unassigned) == unassigned
                assert stats.extracted == len(assigned) + len(unassigned)


def test_c02_tagging_soundness(acceptance):
    with acceptance(2, "tagging leaves no assigned surface, is idempotent, poisoned map spares NEs=No"):
        rng = random.Random(7)
        for _ in range(30):
            corpus, annotations = random_ne_problem(rng)
            pmap, _, _ = detect_ne_polarity(corpus, annotations)
            tagged = tag_entities(corpus, annotations, pmap)
            for doc in tagged:
                for surface in pmap.assigned:
                    assert not contains(doc.tokens, surface)
            assert tag_entities(tagged, annotations, pmap) == tagged
            # the tagged version differs from the original only by tag substitution
            for before, after in zip(corpus, tagged):
                assert len(after.tokens) <= len(before.tokens)
                assert set(after.tokens) - set(before.tokens) <= {POS_TAG, NEG_TAG}

        data = ne_signal_corpus(n_docs=160, seed=11)
        cfg = AblationConfig(order_sweep=((1,), (1, 2)), svm_epochs=10)
        models = ["nb", "svm", "lexicon_sfs"]
        honest = run_ablation(data.corpus, data.annotations, data.lexicon, models, cfg)
        poison = NePolarityMap({s: (N if p is P else P) for s, p in data.entity_polarity.items()}, [])
        poisoned = run_ablation(data.corpus, data.annotations, data.lexicon, models, cfg, polarity_map=poison)
        for m in models:
            assert honest.row(m, "No").to_json() == poisoned.row(m, "No").to_json()


def test_c03_sfs_matches_naive_oracle(acceptance):
    with acceptance(3, "SFS equals naive greedy uni+bi sum on 100 random cases"):
        rng = random.Random(99)
        vocab = [f"v{i}" for i in range(8)]
        for _ in range(100):
            entries = {}
            for _ in range(rng.randint(1, 12)):
                term = tuple(rng.choice(vocab) for _ in range(rng.randint(1, 2)))
                pol = rng.choice([P, N])
                mag = F(rng.randint(1, 9), rng.randint(1, 9))
                entries[term] = LexiconEntry(term, pol, mag if pol is P else -mag)
            lex = Lexicon("r", entries)
            tokens = [rng.choice(vocab) for _ in range(rng.randint(0, 15))]
            table = {t: e.weight for t, e in entries.items()}
            expected = sum(naive_greedy(tokens, table), F(0))
            score, pol = sfs_score(tokens, lex, Scheme.UNI_BI)
            assert score == expected and isinstance(score, F)
            assert pol is (P if expected > 0 else N)
            uni = sum((table[(t,)] for t in tokens if (t,) in table), F(0))
            assert sfs_score(tokens, lex, Scheme.UNI)[0] == uni


def test_c04_dp_worked_example(acceptance):
    with acceptance(4, "double polarity weights (0.7, -0.3) and three hand-accumulated sentences"):
        nice = LexiconEntry(("nice",), P, F("0.7"))
        assert nice.dp_weights() == (F("0.7"), F("-0.3"))
        lex = Lexicon.from_entries("dp", [
            nice,
            LexiconEntry(("awful",), N, F("-0.8")),
            LexiconEntry(("good",), P, F("0.6")),
            LexiconEntry(("not", "good"), N, F("-0.8")),
        ])
        # nice: (0.7, -0.3); awful: (0.2, -0.8); not good: (0.2, -0.8)
        cases = [
            (["nice"], F("0.7"), F("-0.3"), P),
            (["nice", "awful"], F("0.9"), F("-1.1"), N),
            (["not", "good", "nice", "nice"], F("1.6"), F("-1.4"), P),
        ]
        for tokens, pos, neg, pol in cases:
            assert dp_score(tokens, lex, Scheme.UNI_BI) == (pos, neg, pol)


def test_c05_naive_bayes(acceptance):
    with acceptance(5, "NB smoothed conditional 0.75, toy posterior argmax, posteriors sum to 1"):
        space = FeatureSpace((("A",), ("B",)))
        docs = [["A"], ["A"], ["B"], ["B"]]
        model = train_nb([vectorize(d, space) for d in docs], [P, P, N, N], space)
        assert math.exp(model.log_present[0, 0]) == pytest.approx(0.75, abs=1e-15)
        pol, (pp, pn) = predict_nb(model, vectorize(["A"], space))
        assert pol is P and pp == pytest.approx(0.9, abs=1e-12)
        assert predict_nb(model, vectorize(["B"], space))[0] is N

        rng = np.random.default_rng(5)
        d = 30
        big_space = FeatureSpace(tuple((f"f{i:02d}",) for i in range(d)))
        train = [tuple(np.flatnonzero(rng.random(d) < 0.3).tolist()) for _ in range(60)]
        labels = [P if i % 2 else N for i in range(60)]
        big = train_nb(train, labels, big_space)
        for _ in range(1000):
            vec = tuple(np.flatnonzero(rng.random(d) < rng.random()).tolist())
            _, post = predict_nb(big, vec)
            assert abs(post[0] + post[1] - 1.0) <= 1e-12


def test_c06_svm_properties(acceptance):
    with acceptance(6, "SVM separable accuracy, seeded determinism, objective below zero vector"):
        rng = random.Random(6)
        space = FeatureSpace(tuple((f"f{i}",) for i in range(10)))
        xs, ys = [], []
        for i in range(20):
            pos = i % 2 == 0
            xs.append(tuple(sorted({0 if pos else 1} | {rng.randrange(2, 10) for _ in range(3)})))
            ys.append(P if pos else N)
        a = train_svm(xs, ys, space, seed=42)
        b = train_svm(xs, ys, space, seed=42)
        assert [predict_svm(a, x) for x in xs] == ys
        assert a.weights.tobytes() == b.weights.tobytes() and a.bias == b.bias
        zero = svm_objective(np.zeros(len(space)), 0.0, xs, ys, a.reg)
        assert svm_objective(a.weights, a.bias, xs, ys, a.reg) <= zero


def test_c07_feature_selection(acceptance):
    with acceptance(7, "TF threshold spaces nested and equal to brute-force tally"):
        rng = random.Random(77)
        for _ in range(20):
            docs = [[rng.choice("abcdefg") for _ in range(rng.randint(0, 10))] for _ in range(rng.randint(1, 40))]
            orders = rng.choice([(1,), (2,), (1, 2), (1, 2, 3), (2, 3)])
            tally = {}
            for doc in docs:
                for n in orders:
                    for i in range(len(doc) - n + 1):
                        tally[tuple(doc[i:i + n])] = tally.get(tuple(doc[i:i + n]), 0) + 1
            spaces = {}
            for t in (1, 2, 3):
                spaces[t] = set(build_feature_space(docs, NGramConfig(orders, t)).keys)
                assert spaces[t] == {k for k, c in tally.items() if c >= t}
            assert spaces[3] <= spaces[2] <= spaces[1]


def test_c08_metrics(acceptance):
    with acceptance(8, "metrics equal brute force on 100 label vectors; worked example 0.75 / 0.7333"):
        m = evaluate([P, N, N, N], [P, P, N, N])
        assert m.accuracy == 0.75
        assert abs(m.f1 - 0.7333) <= 1e-4
        rng = random.Random(8)
        for _ in range(100):
            golds = [rng.choice([P, N]) for _ in range(rng.randint(1, 50))]
            preds = [rng.choice([P, N]) for _ in golds]
            cells = {(g, p): 0 for g in (P, N) for p in (P, N)}
            for g, p in zip(golds, preds):
                cells[g, p] += 1
            per = []
            for c, o in ((P, N), (N, P)):
                tp, fp, fn = cells[c, c], cells[o, c], cells[c, o]
                prec = tp / (tp + fp) if tp + fp else 0.0
                rec = tp / (tp + fn) if tp + fn else 0.0
                per.append((prec, rec, 2 * prec * rec / (prec + rec) if prec + rec else 0.0))
            got = evaluate(preds, golds)
            assert got.precision == pytest.approx((per[0][0] + per[1][0]) / 2, abs=1e-12)
            assert got.recall == pytest.approx((per[0][1] + per[1][1]) / 2, abs=1e-12)
            assert got.f1 == pytest.approx((per[0][2] + per[1][2]) / 2, abs=1e-12)
            assert got.accuracy == pytest.approx((cells[P, P] + cells[N, N]) / len(golds), abs=1e-12)


def test_c09_synthetic_ablation_direction(acceptance):
    with acceptance(9, "entity-signal corpus: SFS with NEs beats without by >= 10 F1 points"):
        data = ne_signal_corpus(n_docs=400, n_entities=10, entity_rate=0.4, agreement=0.9, seed=0)
        entity_docs = [d for d in data.corpus if d.id in data.annotations]
        assert len(data.corpus) == 400 and len(entity_docs) == 160
        agree = sum(d.gold is data.entity_polarity[data.annotations[d.id][0].surface] for d in entity_docs)
        assert agree == 144
        assert not any(t in data.lexicon for d in data.corpus for t in [(x,) for x in d.tokens])
        report = run_ablation(data.corpus, data.annotations, data.lexicon, ["lexicon_sfs"], AblationConfig())
        no, yes = report.row("lexicon_sfs", "No").metrics, report.row("lexicon_sfs", "Yes").metrics
        print(f"lexicon_sfs macro-F1 without NEs {no.f1:.4f}, with NEs {yes.f1:.4f}")
        assert yes.f1 - no.f1 >= 0.10


def test_c10_end_to_end_determinism(acceptance, data_dir, tmp_path):
    with acceptance(10, "two ablate runs on the toy corpus give byte-identical JSON"):
        digests = []
        for name in ("first", "second"):
            out = tmp_path / name
            code = main(["ablate", "--config", str(data_dir / "toy_config.json"), "--output-dir", str(out)])
            assert code == 0
            raw = (out / "ablation.json").read_bytes()
            json.loads(raw)
            digests.append(hashlib.sha256(raw).hexdigest())
        assert digests[0] == digests[1]
