"""Tab-separated edge and node files.

Edge file: header ``src  dst  weight`` with raw nonnegative weights.
Node file: header ``node  alpha``. Nodes that appear only in the edge file
take ``default_alpha``.
"""

import csv

import numpy as np

from .exceptions import ValidationError
from .graph import InfluenceGraph

EDGE_HEADER = ("src", "dst", "weight")
NODE_HEADER = ("node", "alpha")


def read_tsv(path, header):
    """Rows of a TSV file whose first line must equal ``header``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        first = next(reader, None)
        if first is None or tuple(c.strip() for c in first) != tuple(header):
            raise ValidationError(
                f"{path}: expected header {'<TAB>'.join(header)!r}, got {first!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ValidationError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            rows.append([c.strip() for c in row])
    return rows


def _float(value, path, what):
    try:
        return float(value)
    except ValueError:
        raise ValidationError(f"{path}: {what} {value!r} is not a number") from None


def load_graph(edge_path, node_path=None, default_alpha=0.5):
    """Read an :class:`InfluenceGraph` with raw (unnormalized) weights.

    Node order: nodes of the node file in file order, then nodes first seen
    in the edge file.
    """
    labels, alpha = [], {}
    index = {}

    def intern(name):
        if name not in index:
            index[name] = len(labels)
            labels.append(name)
        return index[name]

    if node_path is not None:
        for name, a in read_tsv(node_path, NODE_HEADER):
            if name in alpha:
                raise ValidationError(f"{node_path}: duplicate node {name!r}")
            intern(name)
            alpha[name] = _float(a, node_path, "alpha")
    src, dst, w = [], [], []
    for s, d, x in read_tsv(edge_path, EDGE_HEADER):
        src.append(intern(s))
        dst.append(intern(d))
        w.append(_float(x, edge_path, "weight"))
    if not labels:
        raise ValidationError(f"{edge_path}: graph has no nodes")
    a = np.array([alpha.get(name, default_alpha) for name in labels], dtype=float)
    return InfluenceGraph(len(labels), src, dst, w, alpha=a, labels=labels)


def _fmt(x):
    return repr(float(x))


def write_edges(g, path):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, delimiter="\t", lineterminator="\n")
        out.writerow(EDGE_HEADER)
        for u, v, x in zip(g.src, g.dst, g.weight):
            out.writerow((g.labels[u], g.labels[v], _fmt(x)))


def write_nodes(g, path):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, delimiter="\t", lineterminator="\n")
        out.writerow(NODE_HEADER)
        for name, a in zip(g.labels, g.alpha):
            out.writerow((name, _fmt(a)))


def write_graph(g, edge_path, node_path):
    write_edges(g, edge_path)
    write_nodes(g, node_path)
