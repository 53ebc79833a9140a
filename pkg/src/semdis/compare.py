"""Neighbour-list comparison of a candidate similarity network against a reference.

For each word its neighbours are ranked by weight. Two ranked lists of
length ``l`` are compared through

* mismatches ``e_m``: list positions whose word has no counterpart in the
  other list;
* misplacements ``e_o``: words present in both lists at different ranks;

combined into the error ``E = e_m + e_o / (l - e_m)``, with ``E = l + 1``
when the lists share no word at all.
"""

import csv
import io
import json
import math
from dataclasses import dataclass

from .core import normalize_token
from .errors import EmptyInput, LengthMismatch, MalformedLine, VocabularyMismatch
from .tsv import read_lines, split_record

DEFAULT_LMAX = 15


@dataclass(frozen=True)
class NeighborList:
    owner: str
    entries: tuple  # ((token, weight), ...), best first
    l: int

    @property
    def tokens(self):
        return [t for t, _ in self.entries]

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class ErrorScore:
    e_m: int
    e_o: int
    e: float
    complete_mismatch: bool


def _network(net):
    return getattr(net, "network", net)


def ranked_neighbors(net, i):
    """All neighbours of node ``i`` as ``(token, weight)``, heaviest first.

    Ties are broken by ascending token so that rankings are reproducible.
    """
    net = _network(net)
    toks = net.vocab.tokens
    idx, w = net.neighbors(i)
    pairs = [(toks[j], float(x)) for j, x in zip(idx.tolist(), w.tolist()) if j != i]
    pairs.sort(key=lambda p: (-p[1], p[0]))
    return pairs


def neighbor_list(net, word, l):
    if l < 1:
        raise ValueError("list length must be >= 1")
    base = _network(net)
    i = base.vocab.index(word)
    return NeighborList(base.vocab[i], tuple(ranked_neighbors(base, i)[:l]), l)


def _check_lengths(reference, candidate, l):
    l = reference.l if l is None else l
    if reference.l != l or candidate.l != l:
        raise LengthMismatch(
            f"lists built with l={reference.l} and l={candidate.l}, compared at l={l}"
        )
    return l


def error_score(reference, candidate, l=None):
    """Mismatch/misplacement error between two ranked lists.

    A list shorter than ``l`` (a word with few neighbours) leaves its missing
    positions unmatched, and those count as mismatches.
    """
    l = _check_lengths(reference, candidate, l)
    ref, cand = reference.tokens[:l], candidate.tokens[:l]
    rank_cand = {t: r for r, t in enumerate(cand)}
    matched = [(r, rank_cand[t]) for r, t in enumerate(ref) if t in rank_cand]
    e_m = max(len(ref), len(cand)) - len(matched)
    e_o = sum(1 for a, b in matched if a != b)
    if not matched and (ref or cand):
        return ErrorScore(e_m, e_o, float(l + 1), True)
    return ErrorScore(e_m, e_o, e_m + e_o / (l - e_m), False)


def match_rate(reference, candidate, l=None):
    """Fraction of the ``l`` reference positions whose word the candidate also lists."""
    l = _check_lengths(reference, candidate, l)
    return len(set(reference.tokens[:l]) & set(candidate.tokens[:l])) / l


@dataclass(frozen=True)
class WordComparison:
    word: str
    reference: tuple
    candidate: tuple
    match_fraction: tuple  # indexed by l - 1
    scores: tuple  # ErrorScore per l


@dataclass(frozen=True)
class ComparisonReport:
    l_max: int
    words: tuple  # WordComparison per word
    mean_match_pct: tuple  # per l
    mean_error: tuple  # per l

    @property
    def grand_mean_match_pct(self):
        return math.fsum(self.mean_match_pct) / self.l_max

    @property
    def grand_mean_error(self):
        return math.fsum(self.mean_error) / self.l_max

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["l", "mean_match_pct", "mean_error"])
        for l in range(1, self.l_max + 1):
            w.writerow([l, repr(self.mean_match_pct[l - 1]), repr(self.mean_error[l - 1])])
        return buf.getvalue()

    def to_dict(self):
        return {
            "l_max": self.l_max,
            "grand_mean_match_pct": self.grand_mean_match_pct,
            "grand_mean_error": self.grand_mean_error,
            "per_l": [
                {"l": l, "mean_match_pct": m, "mean_error": e}
                for l, (m, e) in enumerate(zip(self.mean_match_pct, self.mean_error), start=1)
            ],
            "words": [
                {
                    "word": wc.word,
                    "reference": list(wc.reference),
                    "candidate": list(wc.candidate),
                    "per_l": [
                        {"l": l, "match": mf, "e_m": s.e_m, "e_o": s.e_o, "E": s.e}
                        for l, (mf, s) in enumerate(zip(wc.match_fraction, wc.scores), start=1)
                    ],
                }
                for wc in self.words
            ],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"


def compare_lists(reference_lists, candidate_lists, l_max=DEFAULT_LMAX):
    """Build a report from ``{word: [token, ...]}`` ranked lists.

    The words compared are those of ``reference_lists``; a word missing from
    ``candidate_lists`` is compared against an empty list.
    """
    if not reference_lists:
        raise EmptyInput("no words to compare")
    words = []
    for word, ref in reference_lists.items():
        cand = list(candidate_lists.get(word, ()))
        ref = list(ref)
        fracs, scores = [], []
        for l in range(1, l_max + 1):
            a = NeighborList(word, tuple((t, None) for t in ref[:l]), l)
            b = NeighborList(word, tuple((t, None) for t in cand[:l]), l)
            fracs.append(match_rate(a, b))
            scores.append(error_score(a, b))
        words.append(WordComparison(word, tuple(ref[:l_max]), tuple(cand[:l_max]), tuple(fracs), tuple(scores)))
    n = len(words)
    mean_match = tuple(100.0 * math.fsum(w.match_fraction[l] for w in words) / n for l in range(l_max))
    mean_err = tuple(math.fsum(w.scores[l].e for w in words) / n for l in range(l_max))
    return ComparisonReport(l_max, tuple(words), mean_match, mean_err)


def compare_networks(reference_net, candidate_net, l_max=DEFAULT_LMAX, words=None):
    """Compare the ranked neighbourhoods of every word in two networks.

    Both networks must cover the same set of tokens. ``words`` optionally
    restricts the comparison to a subset.
    """
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    ref, cand = _network(reference_net), _network(candidate_net)
    if set(ref.vocab) != set(cand.vocab):
        only_ref = len(set(ref.vocab) - set(cand.vocab))
        only_cand = len(set(cand.vocab) - set(ref.vocab))
        raise VocabularyMismatch(
            f"vocabularies differ ({only_ref} tokens only in reference, {only_cand} only in candidate)"
        )
    chosen = list(ref.vocab) if words is None else [normalize_token(w) for w in words]
    ref_lists, cand_lists = {}, {}
    for w in chosen:
        ref_lists[w] = [t for t, _ in ranked_neighbors(ref, ref.vocab.index(w))[:l_max]]
        cand_lists[w] = [t for t, _ in ranked_neighbors(cand, cand.vocab.index(w))[:l_max]]
    return compare_lists(ref_lists, cand_lists, l_max)


def read_ranked_lists(path):
    """Read ranked neighbour lists from ``word<TAB>source<TAB>neighbour`` lines.

    Lines are taken in file order as rank order. Returns
    ``{source: {word: [neighbour, ...]}}``; this is how externally computed
    baselines are imported for comparison.
    """
    out = {}
    for lineno, text in read_lines(path):
        if not text.strip() or text.startswith("#"):
            continue
        word, source, neighbour = split_record(text, lineno)
        word, neighbour = normalize_token(word), normalize_token(neighbour)
        ranked = out.setdefault(source.strip(), {}).setdefault(word, [])
        if neighbour in ranked:
            raise MalformedLine(f"{neighbour!r} listed twice for {word!r}", line=lineno)
        ranked.append(neighbour)
    return out
