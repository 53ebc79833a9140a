import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semdis.core import Vocabulary, induced_subnetwork, write_network
from semdis.errors import (
    DuplicateEdge,
    DuplicateFeature,
    EmptyConcept,
    EmptyIntersection,
    MalformedLine,
    NonPositiveWeight,
)
from semdis.ingest import intersect_vocabulary, ordered_intersection, parse_fa, parse_fp


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_parse_fa_single_line(tmp_path):
    net = parse_fa(write(tmp_path, "fa.tsv", "mice\tcheese\t0.3\n"))
    assert net.directed
    assert net.token_edges() == [("mice", "cheese", 0.3)]


def test_parse_fa_dangling_targets_kept(tmp_path):
    net = parse_fa(write(tmp_path, "fa.tsv", "# comment\nmice\tcheese\t0.3\nmice\trat\t0.1\n"))
    assert net.vocab.tokens == ("mice", "cheese", "rat")
    assert np.diff(net.matrix.indptr).tolist() == [2, 0, 0]


def test_parse_fa_missing_field(tmp_path):
    with pytest.raises(MalformedLine) as exc:
        parse_fa(write(tmp_path, "fa.tsv", "a\tb\t1\nmice\tcheese\n"))
    assert exc.value.line == 2


def test_parse_fa_negative(tmp_path):
    with pytest.raises(NonPositiveWeight):
        parse_fa(write(tmp_path, "fa.tsv", "mice\tcheese\t-1\n"))


def test_parse_fa_not_a_number(tmp_path):
    with pytest.raises(MalformedLine):
        parse_fa(write(tmp_path, "fa.tsv", "mice\tcheese\tlots\n"))
    with pytest.raises(MalformedLine):
        parse_fa(write(tmp_path, "fa2.tsv", "mice\tcheese\tnan\n"))


def test_parse_fa_duplicates(tmp_path):
    p = write(tmp_path, "fa.tsv", "Mice\tcheese\t1\nmice\tCheese \t2\n")
    assert parse_fa(p).token_edges() == [("mice", "cheese", 3.0)]
    with pytest.raises(DuplicateEdge) as exc:
        parse_fa(p, dup_policy="error")
    assert exc.value.line == 2


def test_parse_fa_crlf(tmp_path):
    p = tmp_path / "fa.tsv"
    p.write_bytes(b"a\tb\t1\r\nb\tc\t2\r\n")
    assert parse_fa(p).token_edges() == [("a", "b", 1.0), ("b", "c", 2.0)]


def test_parse_fa_missing_file(tmp_path):
    with pytest.raises(OSError):
        parse_fa(tmp_path / "nope.tsv")


def test_parse_fa_reads_serialized(tmp_path):
    net = parse_fa(write(tmp_path, "fa.tsv", "a\tb\t1\nb\tc\t0.5\nc\ta\t2\nd\ta\t1\n"))
    out = tmp_path / "net.tsv"
    write_network(net, out)
    assert parse_fa(out) == net


def test_parse_fp(tmp_path):
    fm = parse_fp(write(tmp_path, "fp.tsv", "banjo\thas_strings\t20\nbanjo\tmusical_instrument\t25\n"))
    assert fm.vocab.tokens == ("banjo",)
    idx, vals = fm.row(0)
    assert [fm.features[i] for i in idx] == ["has_strings", "musical_instrument"]
    assert vals.tolist() == [20.0, 25.0]
    assert fm.norm(0) > 0


def test_parse_fp_duplicate_feature(tmp_path):
    with pytest.raises(DuplicateFeature):
        parse_fp(write(tmp_path, "fp.tsv", "banjo\thas_strings\t20\nbanjo\thas_strings\t3\n"))
    assert issubclass(DuplicateFeature, MalformedLine)


def test_parse_fp_empty(tmp_path):
    with pytest.raises(EmptyConcept):
        parse_fp(write(tmp_path, "fp.tsv", "# nothing here\n"))


def test_parse_fp_bad_lines(tmp_path):
    with pytest.raises(MalformedLine):
        parse_fp(write(tmp_path, "fp.tsv", "banjo\thas_strings\n"))
    with pytest.raises(NonPositiveWeight):
        parse_fp(write(tmp_path, "fp2.tsv", "banjo\thas_strings\t0\n"))


def test_intersect_vocabulary():
    assert intersect_vocabulary(["a", "b", "c"], ["b", "c", "d"]) == {"b", "c"}
    v = Vocabulary(["x", "y"])
    assert intersect_vocabulary(v, v) == {"x", "y"}
    assert intersect_vocabulary(["Apple "], ["apple"]) == {"apple"}
    with pytest.raises(EmptyIntersection):
        intersect_vocabulary(["a"], ["b"])


def test_ordered_intersection():
    assert ordered_intersection(["c", "a", "b"], ["b", "c"]) == ["c", "b"]


sets = st.sets(st.sampled_from("abcdefgh"), min_size=1)


@given(sets, sets)
def test_intersection_commutative_idempotent(a, b):
    try:
        ab = intersect_vocabulary(a, b)
    except EmptyIntersection:
        assert not (a & b)
        return
    assert ab == intersect_vocabulary(b, a)
    assert intersect_vocabulary(ab, ab) == ab


def test_subnetwork_of_common_words(tmp_path):
    fa = parse_fa(write(tmp_path, "fa.tsv", "tuba\ttrumpet\t2\ntrumpet\tloud\t1\nloud\ttuba\t1\n"))
    fp = parse_fp(write(tmp_path, "fp.tsv", "tuba\tis_loud\t10\ntrumpet\tis_loud\t5\n"))
    common = intersect_vocabulary(fa.vocab, fp.vocab)
    sub = induced_subnetwork(fa, common)
    assert sub.token_edges() == [("tuba", "trumpet", 2.0)]
