#!/usr/bin/env python3
"""Generate the bundled fixture treebank (CoNLL-X, synthetic English-like).

A small seeded grammar produces SVO sentences with determiners,
adjectives, adverbs, pronouns, noun compounds, coordination and nested
prepositional phrases.  PP and conjunct attachment are genuinely
ambiguous (biased per lexical item), so trained parsers stay below 100%
and disagree with each other, which is what the comparative fixture
experiments need.

Run from the repository root:  python3 tools/gen_treebank.py
"""

from __future__ import annotations

import pathlib
import random

DET = ["the", "a", "this", "that", "each", "some", "no", "every"]
ADJ = ["big", "small", "red", "old", "young", "quick", "slow", "bright",
       "dark", "quiet", "loud", "happy", "sad", "tall", "short", "wild",
       "calm", "rich", "poor", "warm", "cold", "long", "deep", "high",
       "strange", "plain", "sharp", "soft", "hard", "fine"]
NOUN = ["dog", "cat", "bird", "fox", "cow", "horse", "man", "woman", "child",
        "king", "queen", "farmer", "teacher", "student", "doctor", "river",
        "hill", "tree", "house", "door", "table", "chair", "book", "stone",
        "road", "garden", "field", "market", "village", "city", "boat",
        "bridge", "tower", "wall", "window", "letter", "song", "story",
        "meal", "bread", "apple", "fish", "wolf", "bear", "lion", "glass",
        "knife", "rope", "wheel", "cart", "barn", "mill", "lamp", "coat",
        "shoe", "hat", "ring", "coin", "map", "flag", "bell", "drum",
        "horn", "nest", "cave", "cloud", "storm", "frost", "shadow", "flame"]
VERB = ["sees", "finds", "takes", "gives", "makes", "builds", "breaks",
        "opens", "closes", "reads", "writes", "sings", "paints", "carries",
        "follows", "watches", "greets", "helps", "feeds", "chases", "holds",
        "moves", "pushes", "pulls", "cleans", "lifts", "drops", "throws",
        "catches", "hides", "shows", "brings", "sends", "keeps", "leaves"]
ADV = ["quickly", "slowly", "quietly", "loudly", "carefully", "happily",
       "sadly", "often", "rarely", "today", "yesterday", "again", "soon",
       "early", "late", "twice"]
PREP = ["in", "on", "with", "under", "near", "from", "over", "behind",
        "beside", "through", "around", "against"]
PRON = ["he", "she", "it", "they", "we", "you"]
CONJ = ["and", "or"]
PUNCT = [".", ".", ".", "!", "?"]

# per-preposition probability that a post-object PP attaches to the verb
VERB_ATTACH = {"in": 0.8, "on": 0.2, "with": 0.85, "under": 0.15,
               "near": 0.25, "from": 0.8, "over": 0.5, "behind": 0.2,
               "beside": 0.3, "through": 0.75, "around": 0.45,
               "against": 0.7}


def zipf_choice(rng: random.Random, items: list[str]) -> str:
    weights = [1.0 / (i + 1) ** 0.8 for i in range(len(items))]
    return rng.choices(items, weights=weights, k=1)[0]


class Builder:
    def __init__(self):
        self.rows = []  # [form, cpos, pos, head, label]; head by token index

    def add(self, form, cpos, pos, head, label):
        self.rows.append([form, cpos, pos, head, label])
        return len(self.rows)  # 1-based index of the added token


def gen_np(rng: random.Random, b: Builder, head_label: str,
           pp_depth: int, allow_conj: bool = True) -> int:
    """Emit a noun phrase; returns the index of its head noun."""
    det = rng.random() < 0.7
    n_adj = rng.choices([0, 1, 2, 3], weights=[0.5, 0.3, 0.15, 0.05], k=1)[0]
    det_idx = b.add(zipf_choice(rng, DET), "D", "DT", 0, "det") if det else None
    adj_idx = [b.add(zipf_choice(rng, ADJ), "J", "JJ", 0, "amod")
               for _ in range(n_adj)]
    compound_idx = None
    if rng.random() < 0.15:
        compound_idx = b.add(zipf_choice(rng, NOUN), "N", "NN", 0, "nn")
    noun_idx = b.add(zipf_choice(rng, NOUN), "N", "NN", 0, head_label)
    if det_idx:
        b.rows[det_idx - 1][3] = noun_idx
    for i in adj_idx:
        b.rows[i - 1][3] = noun_idx
    if compound_idx:
        b.rows[compound_idx - 1][3] = noun_idx
    if allow_conj and rng.random() < 0.14:
        cc_idx = b.add(zipf_choice(rng, CONJ), "C", "CC", noun_idx, "cc")
        conj_idx = gen_np(rng, b, "conj", pp_depth=0, allow_conj=False)
        b.rows[conj_idx - 1][3] = noun_idx
    if pp_depth > 0 and rng.random() < 0.3:
        gen_pp(rng, b, noun_idx, pp_depth - 1)
    return noun_idx


def gen_pp(rng: random.Random, b: Builder, governor: int, pp_depth: int) -> int:
    prep = zipf_choice(rng, PREP)
    prep_idx = b.add(prep, "I", "IN", governor, "prep")
    noun_idx = gen_np(rng, b, "pobj", pp_depth, allow_conj=False)
    b.rows[noun_idx - 1][3] = prep_idx
    return prep_idx


def gen_sentence(rng: random.Random) -> Builder:
    b = Builder()
    fronted_adv = rng.random() < 0.12
    if fronted_adv:
        adv_idx = b.add(zipf_choice(rng, ADV), "R", "RB", 0, "advmod")
    subject_drop = rng.random() < 0.06
    subj_idx = None
    if not subject_drop:
        if rng.random() < 0.2:
            subj_idx = b.add(zipf_choice(rng, PRON), "P", "PRP", 0, "nsubj")
        else:
            subj_idx = gen_np(rng, b, "nsubj",
                              pp_depth=1 if rng.random() < 0.5 else 0)
    verb_idx = b.add(zipf_choice(rng, VERB), "V", "VB", 0, "root")
    if fronted_adv:
        b.rows[adv_idx - 1][3] = verb_idx
    if subj_idx:
        b.rows[subj_idx - 1][3] = verb_idx
    obj_idx = None
    if rng.random() < 0.8:
        if rng.random() < 0.1:
            obj_idx = b.add(zipf_choice(rng, PRON), "P", "PRP", verb_idx, "dobj")
        else:
            obj_idx = gen_np(rng, b, "dobj", pp_depth=0)
            b.rows[obj_idx - 1][3] = verb_idx
    n_pp = rng.choices([0, 1, 2], weights=[0.38, 0.44, 0.18], k=1)[0]
    last_noun = obj_idx if (obj_idx and b.rows[obj_idx - 1][2] == "NN") else None
    for _ in range(n_pp):
        prep = zipf_choice(rng, PREP)
        if last_noun is not None and rng.random() >= VERB_ATTACH[prep]:
            governor = last_noun        # ambiguous: hangs off the last noun
        else:
            governor = verb_idx
        prep_idx = b.add(prep, "I", "IN", governor, "prep")
        noun_idx = gen_np(rng, b, "pobj", pp_depth=0, allow_conj=False)
        b.rows[noun_idx - 1][3] = prep_idx
        last_noun = noun_idx
    if rng.random() < 0.28:
        b.add(zipf_choice(rng, ADV), "R", "RB", verb_idx, "advmod")
    if rng.random() < 0.85:
        b.add(rng.choice(PUNCT), "U", "PU", verb_idx, "punct")
    return b


def to_conll(b: Builder) -> str:
    lines = []
    for i, (form, cpos, pos, head, label) in enumerate(b.rows, start=1):
        lines.append(f"{i}\t{form}\t{form}\t{cpos}\t{pos}\t_\t{head}\t{label}")
    return "\n".join(lines) + "\n\n"


def write_split(path: pathlib.Path, rng: random.Random, count: int) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for _ in range(count):
            fh.write(to_conll(gen_sentence(rng)))
    print(f"wrote {count} sentences -> {path}")


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    data = root / "data"
    data.mkdir(exist_ok=True)
    write_split(data / "fixture_train.conll", random.Random(20260810), 600)
    write_split(data / "fixture_dev.conll", random.Random(906090), 150)


if __name__ == "__main__":
    main()
