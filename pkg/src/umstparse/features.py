"""Arc-factored features, hashing, linear scoring, and model files.

Two template families over word forms and POS tags:

* directed: endpoint roles are head/modifier and every template also
  appears conjoined with the attachment direction and a binned distance;
* undirected: endpoint roles are left/right in surface order, no
  direction conjunction (distance conjunction stays).

Feature strings are hashed into a fixed 2**hash_bits weight table with a
stable CRC32, so extraction is deterministic across processes and runs.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .conll import Sentence
from .errors import DataError, InputError

ROOT_FORM = "*root*"
ROOT_POS = "*ROOT*"
NIL = "*nil*"

DEFAULT_HASH_BITS = 22

MODEL_MAGIC = "umstparse-model 1"


def distance_bin(d: int) -> str:
    if d <= 5:
        return str(d)
    if d <= 10:
        return "6-10"
    return "11+"


def hash_feature(s: str, hash_bits: int) -> int:
    return zlib.crc32(s.encode("utf-8")) & ((1 << hash_bits) - 1)


@dataclass(frozen=True)
class FeatureVector:
    """Sorted hashed slots, implicit count 1 each (duplicates allowed)."""
    indices: np.ndarray

    def __len__(self):
        return len(self.indices)


def _word_pos(sentence: Sentence, i: int) -> tuple[str, str]:
    if i == 0:
        return ROOT_FORM, ROOT_POS
    return sentence.tokens[i - 1].form, sentence.tokens[i - 1].postag


def _pos_at(sentence: Sentence, i: int) -> str:
    if i == 0:
        return ROOT_POS
    if 1 <= i <= len(sentence):
        return sentence.tokens[i - 1].postag
    return NIL


def _arc_templates(sentence: Sentence, a: int, b: int,
                   ra: str, rb: str) -> list[str]:
    """Shared template body; a/b are positions, ra/rb the role prefixes."""
    aw, ap = _word_pos(sentence, a)
    bw, bp = _word_pos(sentence, b)
    feats = [
        f"{ra}w:{aw}",
        f"{ra}p:{ap}",
        f"{ra}wp:{aw}|{ap}",
        f"{rb}w:{bw}",
        f"{rb}p:{bp}",
        f"{rb}wp:{bw}|{bp}",
        f"bg1:{aw}|{ap}|{bw}|{bp}",
        f"bg2:{ap}|{bw}|{bp}",
        f"bg3:{aw}|{bw}|{bp}",
        f"bg4:{aw}|{ap}|{bp}",
        f"bg5:{aw}|{ap}|{bw}",
        f"bg6:{aw}|{bw}",
        f"bg7:{ap}|{bp}",
    ]
    lo, hi = (a, b) if a < b else (b, a)
    for mid in range(lo + 1, hi):
        feats.append(f"btw:{ap}|{_pos_at(sentence, mid)}|{bp}")
    a_next = _pos_at(sentence, a + 1)
    a_prev = _pos_at(sentence, a - 1) if a > 0 else NIL
    b_next = _pos_at(sentence, b + 1)
    b_prev = _pos_at(sentence, b - 1) if b > 0 else NIL
    feats.append(f"sr1:{ap}|{a_next}|{b_prev}|{bp}")
    feats.append(f"sr2:{a_prev}|{ap}|{b_prev}|{bp}")
    feats.append(f"sr3:{ap}|{a_next}|{bp}|{b_next}")
    feats.append(f"sr4:{a_prev}|{ap}|{bp}|{b_next}")
    return feats


def directed_feature_strings(sentence: Sentence, head: int, mod: int) -> list[str]:
    """Template expansion for a directed arc head -> mod (head may be 0)."""
    n = len(sentence)
    if not 0 <= head <= n or not 1 <= mod <= n or head == mod:
        raise InputError(f"invalid arc ({head}, {mod}) for a {n}-token sentence")
    feats = _arc_templates(sentence, head, mod, "h", "m")
    att = "R" if mod > head else "L"
    conj = f"{att}|{distance_bin(abs(head - mod))}"
    return feats + [f"{f}&{conj}" for f in feats]


def undirected_feature_strings(sentence: Sentence, i: int, j: int) -> list[str]:
    """Template expansion for the unordered pair {i, j}; order-insensitive."""
    n = len(sentence)
    if not 0 <= i <= n or not 0 <= j <= n or i == j or max(i, j) < 1:
        raise InputError(f"invalid pair ({i}, {j}) for a {n}-token sentence")
    l, r = (i, j) if i < j else (j, i)
    feats = _arc_templates(sentence, l, r, "l", "r")
    conj = distance_bin(r - l)
    return feats + [f"{f}&{conj}" for f in feats]


def _hash_all(strings: list[str], hash_bits: int) -> FeatureVector:
    mask = (1 << hash_bits) - 1
    idx = sorted(zlib.crc32(s.encode("utf-8")) & mask for s in strings)
    return FeatureVector(indices=np.asarray(idx, dtype=np.int64))


def extract_directed(sentence: Sentence, head: int, mod: int,
                     hash_bits: int = DEFAULT_HASH_BITS) -> FeatureVector:
    return _hash_all(directed_feature_strings(sentence, head, mod), hash_bits)


def extract_undirected(sentence: Sentence, i: int, j: int,
                       hash_bits: int = DEFAULT_HASH_BITS) -> FeatureVector:
    return _hash_all(undirected_feature_strings(sentence, i, j), hash_bits)


@dataclass
class Model:
    """Linear model over hashed features.

    mode selects the feature family ("directed" or "undirected");
    combiner is how two directed scores merge into an undirected edge
    weight ("mean" or "product").  After training, both weight vectors
    hold the averaged weights.
    """
    weights: np.ndarray
    averaged_weights: np.ndarray
    mode: str
    combiner: str
    hash_bits: int

    @classmethod
    def new(cls, mode: str, combiner: str = "mean",
            hash_bits: int = DEFAULT_HASH_BITS) -> "Model":
        if mode not in ("directed", "undirected"):
            raise InputError(f"unknown feature mode {mode!r}")
        if combiner not in ("mean", "product"):
            raise InputError(f"unknown combiner {combiner!r}")
        size = 1 << hash_bits
        return cls(weights=np.zeros(size), averaged_weights=np.zeros(size),
                   mode=mode, combiner=combiner, hash_bits=hash_bits)

    def size(self) -> int:
        return 1 << self.hash_bits


def score(model: Model, fv: FeatureVector) -> float:
    """Dot product of the model weights with a (sparse, unit-valued) vector."""
    if len(fv) and int(fv.indices.max()) >= model.size():
        raise InputError("feature slot exceeds model size")
    return float(model.weights[fv.indices].sum())


def save_model(model: Model, path) -> None:
    """Line-based text format; floats as hex so the file round-trips exactly."""
    nz = np.nonzero(model.averaged_weights)[0]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(MODEL_MAGIC + "\n")
        fh.write(f"hash_bits {model.hash_bits}\n")
        fh.write(f"mode {model.mode}\n")
        fh.write(f"combiner {model.combiner}\n")
        fh.write(f"nnz {len(nz)}\n")
        for slot in nz:
            fh.write(f"{slot} {float(model.averaged_weights[slot]).hex()}\n")


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != MODEL_MAGIC:
        raise DataError(f"{path}: not a model file")
    header = {}
    for line in lines[1:4]:
        key, value = line.split(" ", 1)
        header[key] = value
    try:
        hash_bits = int(header["hash_bits"])
        mode = header["mode"]
        combiner = header["combiner"]
        nnz = int(lines[4].split(" ", 1)[1])
    except (KeyError, ValueError, IndexError) as exc:
        raise DataError(f"{path}: malformed model header") from exc
    model = Model.new(mode=mode, combiner=combiner, hash_bits=hash_bits)
    for line in lines[5:5 + nnz]:
        slot_s, value_s = line.split(" ")
        model.averaged_weights[int(slot_s)] = float.fromhex(value_s)
    model.weights = model.averaged_weights.copy()
    return model


class SentenceFeatures:
    """Hashed feature indices for every candidate arc of one sentence.

    Built once per sentence and reused across epochs; scoring all arcs is
    then a single gather + segmented sum over the weight vector.  With a
    pruner, disallowed arcs are simply absent.
    """

    def __init__(self, sentence: Sentence, mode: str,
                 hash_bits: int = DEFAULT_HASH_BITS, pruner=None):
        self.sentence = sentence
        self.mode = mode
        n = len(sentence)
        pairs: list[tuple[int, int]] = []
        if mode == "directed":
            for head in range(0, n + 1):
                for mod in range(1, n + 1):
                    if head == mod:
                        continue
                    if pruner is not None and not pruner.allows(sentence, head, mod):
                        continue
                    pairs.append((head, mod))
            extract = lambda a, b: directed_feature_strings(sentence, a, b)
        elif mode == "undirected":
            for i in range(0, n + 1):
                for j in range(i + 1, n + 1):
                    if pruner is not None and i != 0 \
                            and not pruner.allows(sentence, i, j) \
                            and not pruner.allows(sentence, j, i):
                        continue
                    pairs.append((i, j))
            extract = lambda a, b: undirected_feature_strings(sentence, a, b)
        else:
            raise InputError(f"unknown feature mode {mode!r}")
        mask = (1 << hash_bits) - 1
        flat: list[int] = []
        starts = []
        span = {}
        for a, b in pairs:
            start = len(flat)
            flat.extend(zlib.crc32(s.encode("utf-8")) & mask
                        for s in extract(a, b))
            starts.append(start)
            span[(a, b)] = (start, len(flat))
        self.pairs = pairs
        self._flat = np.asarray(flat, dtype=np.int64)
        self._starts = np.asarray(starts, dtype=np.int64)
        self._span = span

    def indices(self, a: int, b: int) -> np.ndarray:
        start, end = self._span[(a, b)]
        return self._flat[start:end]

    def has_pair(self, a: int, b: int) -> bool:
        return (a, b) in self._span

    def score_all(self, weights: np.ndarray) -> np.ndarray:
        """Score of every stored pair, aligned with self.pairs."""
        if not self.pairs:
            return np.empty(0)
        return np.add.reduceat(weights[self._flat], self._starts)

    def sum_indices(self, arcs) -> np.ndarray:
        """Concatenated slot indices of several arcs (for gold/pred updates)."""
        parts = [self.indices(a, b) for a, b in arcs]
        if not parts:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(parts)
