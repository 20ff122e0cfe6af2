import io

import pytest

from umstparse.conll import (
    DependencyTree,
    Sentence,
    Token,
    is_punctuation,
    is_valid_tree,
    read_conll,
    write_conll,
)
from umstparse.errors import DataError, InputError

SAMPLE = """\
1\tThe\t_\tD\tDT\t_\t2\tdet
2\tcat\t_\tN\tNN\t_\t3\tnsubj
3\tsleeps\t_\tV\tVB\t_\t0\troot
4\t.\t_\tP\tPU\t_\t3\tpunct

1\tBirds\t_\tN\tNN\t_\t2\tnsubj
2\tsing\t_\tV\tVB\t_\t0\troot

"""


def test_empty_stream():
    assert read_conll([]) == []


def test_two_token_block():
    text = "1\ta\t_\t_\t_\t_\t2\tdep\n2\tb\t_\t_\t_\t_\t0\troot\n"
    sents = read_conll(io.StringIO(text))
    assert len(sents) == 1
    assert sents[0].gold_heads == (2, 0)
    assert sents[0].forms == ["a", "b"]


def test_sample_parses():
    sents = read_conll(io.StringIO(SAMPLE))
    assert [len(s) for s in sents] == [4, 2]
    assert sents[0].gold_heads == (2, 3, 0, 3)
    assert sents[0].postags == ["DT", "NN", "VB", "PU"]


def test_round_trip():
    sents = read_conll(io.StringIO(SAMPLE))
    buf = io.StringIO()
    write_conll(sents, None, buf)
    assert read_conll(io.StringIO(buf.getvalue())) == sents


def test_write_identity_when_prediction_matches_gold():
    sents = read_conll(io.StringIO(SAMPLE))
    preds = [DependencyTree(heads=s.gold_heads) for s in sents]
    buf = io.StringIO()
    write_conll(sents, preds, buf)
    assert buf.getvalue() == SAMPLE


def test_write_single_token_sentence():
    s = Sentence(tokens=(Token(index=1, form="hi"),), gold_heads=(0,),
                 gold_labels=("root",))
    buf = io.StringIO()
    write_conll([s], [DependencyTree(heads=(0,))], buf)
    line = buf.getvalue().splitlines()[0].split("\t")
    assert line[6] == "0"


def test_write_replaces_heads_and_preserves_extras():
    text = "1\ta\tla\tC\tP\tf=1\t2\tdep\tx\ty\n2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n"
    sents = read_conll(io.StringIO(text))
    buf = io.StringIO()
    write_conll(sents, [DependencyTree(heads=(0, 1))], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "1\ta\tla\tC\tP\tf=1\t0\tdep\tx\ty"
    assert lines[1] == "2\tb\t_\t_\t_\t_\t1\troot\t_\t_"


def test_length_mismatch_rejected():
    sents = read_conll(io.StringIO(SAMPLE))
    with pytest.raises(InputError):
        write_conll(sents, [DependencyTree(heads=(0,))], io.StringIO())


def test_malformed_line_reports_lineno():
    text = "1\ta\t_\t_\t_\t_\t2\tdep\nbogus line\n"
    with pytest.raises(DataError, match="line 2"):
        read_conll(io.StringIO(text))


def test_non_integer_head_rejected():
    text = "1\ta\t_\t_\t_\t_\tX\tdep\n"
    with pytest.raises(DataError):
        read_conll(io.StringIO(text))


def test_non_tree_gold_is_kept_with_warning(caplog):
    text = ("1\ta\t_\t_\t_\t_\t2\tdep\n"
            "2\tb\t_\t_\t_\t_\t1\tdep\n")
    with caplog.at_level("WARNING"):
        sents = read_conll(io.StringIO(text))
    assert len(sents) == 1
    assert "do not form a tree" in caplog.text


class TestTreeValidation:
    def test_valid_chain(self):
        assert is_valid_tree((2, 3, 0))

    def test_cycle_detected(self):
        assert not is_valid_tree((2, 1))

    def test_out_of_range(self):
        assert not is_valid_tree((5,))

    def test_matches_cycle_oracle(self):
        import numpy as np
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(1, 8))
            heads = tuple(int(rng.integers(0, n + 1)) for _ in range(n))
            if any(h == i + 1 for i, h in enumerate(heads)):
                continue
            # oracle: repeatedly remove tokens whose head chain is resolved
            resolved = {0}
            changed = True
            while changed:
                changed = False
                for i, h in enumerate(heads):
                    if (i + 1) not in resolved and h in resolved:
                        resolved.add(i + 1)
                        changed = True
            assert is_valid_tree(heads) == (len(resolved) == n + 1)


@pytest.mark.parametrize("form,expected", [
    (",", True),
    (".", True),
    ("--", True),
    ("¿", True),
    ("word", False),
    ("a.", False),
    ("", False),
])
def test_is_punctuation(form, expected):
    assert is_punctuation(form) is expected


def test_is_punctuation_accepts_token():
    assert is_punctuation(Token(index=1, form="!"))
