"""Line-oriented TSV reading shared by every parser."""

import math
import os

from .errors import MalformedLine, NonPositiveWeight


def read_lines(path):
    """Yield ``(line_number, text)`` for every line of a UTF-8 file.

    Both ``\\n`` and ``\\r\\n`` endings are accepted. An :class:`OSError` is
    allowed to propagate.
    """
    with open(os.fspath(path), encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            yield lineno, raw.rstrip("\r\n")


def split_record(text, lineno, arity=3):
    fields = text.split("\t")
    # tolerate stray trailing tabs
    while len(fields) > arity and fields[-1].strip() == "":
        fields.pop()
    if len(fields) != arity:
        raise MalformedLine(
            f"expected {arity} tab-separated fields, got {len(fields)}", line=lineno
        )
    return fields


def parse_weight(text, lineno):
    try:
        value = float(text)
    except ValueError:
        raise MalformedLine(f"not a number: {text!r}", line=lineno) from None
    if not math.isfinite(value):
        raise MalformedLine(f"non-finite weight: {text!r}", line=lineno)
    if value <= 0:
        raise NonPositiveWeight(f"weight must be > 0, got {text}", line=lineno)
    return value


def format_float(value):
    # repr() is the shortest string that round-trips a double
    return repr(float(value))


def format_matrix(tokens, matrix):
    """Dense matrix as TSV with a header row of tokens and a token per row."""
    lines = ["\t" + "\t".join(tokens)]
    for tok, row in zip(tokens, matrix):
        lines.append(tok + "\t" + "\t".join(map(repr, row.tolist())))
    return "\n".join(lines) + "\n"


def write_matrix(path, tokens, matrix):
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_matrix(tokens, matrix))


def read_matrix(path):
    """Inverse of :func:`write_matrix`; returns ``(tokens, rows)``."""
    it = read_lines(path)
    try:
        _, header = next(it)
    except StopIteration:
        raise MalformedLine(f"empty matrix file {path}") from None
    tokens = header.split("\t")[1:]
    rows, names = [], []
    for lineno, text in it:
        if not text:
            continue
        fields = text.split("\t")
        if len(fields) != len(tokens) + 1:
            raise MalformedLine(f"expected {len(tokens) + 1} fields", line=lineno)
        names.append(fields[0])
        rows.append([float(x) for x in fields[1:]])
    if names != tokens:
        raise MalformedLine("row labels do not match the header")
    return tokens, rows
