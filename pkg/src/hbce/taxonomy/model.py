"""Label taxonomy: a parent -> child DAG over a flat, ordered label index."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

UNCERTAIN = "Uncertain"
N_ORIGINAL_LABELS = 14


class TaxonomyError(ValueError):
    """Raised for malformed taxonomy text or inconsistent label graphs."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Label:
    name: str
    index: int


@dataclass(frozen=True)
class Taxonomy:
    """Immutable label hierarchy.

    Parameters
    ----------
    labels : tuple of Label
        Labels in output-vector order; ``labels[i].index == i``.
    edges : tuple of (int, int)
        ``(parent_index, child_index)`` pairs in declaration order.

    The edge relation is allowed to contain cycles at construction time so
    that :func:`validate` can report them; endpoints and self-edges are
    checked eagerly.
    """

    labels: tuple[Label, ...]
    edges: tuple[tuple[int, int], ...] = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = [lab.name for lab in self.labels]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise TaxonomyError(f"duplicate label {dup!r}")
        for i, lab in enumerate(self.labels):
            if lab.index != i:
                raise TaxonomyError(f"label {lab.name!r} has index {lab.index}, expected {i}")
            if not lab.name:
                raise TaxonomyError("empty label name")
        n = len(self.labels)
        seen = set()
        for p, c in self.edges:
            if not (0 <= p < n and 0 <= c < n):
                raise TaxonomyError(f"edge ({p}, {c}) references an unknown label index")
            if p == c:
                raise TaxonomyError(f"self-edge on {self.labels[p].name!r}")
            if (p, c) in seen:
                raise TaxonomyError(f"duplicate edge {self.labels[p].name!r} > {self.labels[c].name!r}")
            seen.add((p, c))
        object.__setattr__(self, "_index", {lab.name: lab.index for lab in self.labels})

    @classmethod
    def from_names(cls, names: Sequence[str], edges: Iterable[tuple[str, str]] = ()) -> "Taxonomy":
        labels = tuple(Label(name, i) for i, name in enumerate(names))
        index = {name: i for i, name in enumerate(names)}
        try:
            pairs = tuple((index[p], index[c]) for p, c in edges)
        except KeyError as exc:
            raise TaxonomyError(f"edge references undeclared label {exc.args[0]!r}") from None
        return cls(labels, pairs)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def names(self) -> list[str]:
        return [lab.name for lab in self.labels]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown label {name!r}") from None

    def has_edge(self, parent: str, child: str) -> bool:
        return (self.index(parent), self.index(child)) in set(self.edges)

    def children(self, i: int) -> list[int]:
        return [c for p, c in self.edges if p == i]

    def parents(self, i: int) -> list[int]:
        return [p for p, c in self.edges if c == i]

    def original_labels(self) -> list[int]:
        """Indices of observation labels: no children, and not the derived Uncertain label."""
        has_children = {p for p, _ in self.edges}
        return [lab.index for lab in self.labels
                if lab.index not in has_children and lab.name != UNCERTAIN]

    def topological_order(self) -> list[int]:
        """Parents before children; ties broken by declaration order."""
        n = len(self.labels)
        indegree = [0] * n
        for _, c in self.edges:
            indegree[c] += 1
        ready = [i for i in range(n) if indegree[i] == 0]
        order = []
        while ready:
            i = ready.pop(0)
            order.append(i)
            for c in self.children(i):
                indegree[c] -= 1
                if indegree[c] == 0:
                    ready.append(c)
            ready.sort()
        if len(order) != n:
            raise TaxonomyError("taxonomy contains a cycle")
        return order

    def with_edge(self, parent: int, child: int) -> "Taxonomy":
        return Taxonomy(self.labels, self.edges + ((parent, child),))


def parse_taxonomy(text: str) -> Taxonomy:
    """Parse the line-based taxonomy format.

    ``label <name>`` declares a label, ``edge <parent> > <child>`` an edge
    between previously declared labels. ``#`` starts a comment line, blank
    lines are ignored.
    """
    names: list[str] = []
    index: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "label":
            if not rest:
                raise TaxonomyError("label statement without a name", lineno)
            if rest in index:
                raise TaxonomyError(f"duplicate label {rest!r}", lineno)
            index[rest] = len(names)
            names.append(rest)
        elif keyword == "edge":
            parent, sep, child = rest.partition(" > ")
            parent, child = parent.strip(), child.strip()
            if not sep or not parent or not child:
                raise TaxonomyError("expected 'edge <parent> > <child>'", lineno)
            for name in (parent, child):
                if name not in index:
                    raise TaxonomyError(f"edge references undeclared label {name!r}", lineno)
            pair = (index[parent], index[child])
            if pair[0] == pair[1]:
                raise TaxonomyError(f"self-edge on {parent!r}", lineno)
            if pair in edges:
                raise TaxonomyError(f"duplicate edge {parent!r} > {child!r}", lineno)
            edges.append(pair)
        else:
            raise TaxonomyError(f"unknown statement {keyword!r}", lineno)
    labels = tuple(Label(name, i) for i, name in enumerate(names))
    return Taxonomy(labels, tuple(edges))


def serialize(t: Taxonomy) -> str:
    lines = [f"label {lab.name}" for lab in t.labels]
    lines += [f"edge {t.labels[p].name} > {t.labels[c].name}" for p, c in t.edges]
    return "\n".join(lines) + "\n"


def load_taxonomy(path: str | Path) -> Taxonomy:
    return parse_taxonomy(Path(path).read_text(encoding="utf-8"))


def default_taxonomy_text() -> str:
    return resources.files("hbce.taxonomy").joinpath("default.tax").read_text(encoding="utf-8")


def default_taxonomy() -> Taxonomy:
    return parse_taxonomy(default_taxonomy_text())


@dataclass(frozen=True)
class Issue:
    kind: str  # "cycle" | "multi_parent" | "isolated"
    message: str
    labels: tuple[str, ...]


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def _find_cycles(n: int, edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    # One cycle per DFS back-edge; enough to flag every strongly connected loop.
    adj: list[list[int]] = [[] for _ in range(n)]
    for p, c in edges:
        adj[p].append(c)
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * n
    cycles = []
    for root in range(n):
        if color[root] != WHITE:
            continue
        path = [root]
        stack = [iter(adj[root])]
        color[root] = GREY
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                color[path.pop()] = BLACK
                stack.pop()
            elif color[nxt] == GREY:
                cycles.append(path[path.index(nxt):] + [nxt])
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                path.append(nxt)
                stack.append(iter(adj[nxt]))
    return cycles


def validate(t: Taxonomy) -> ValidationReport:
    """Check a taxonomy for cycles (errors), multi-parent children and isolated labels (warnings)."""
    report = ValidationReport()
    names = t.names
    for cycle in _find_cycles(len(t), t.edges):
        chain = " > ".join(names[i] for i in cycle)
        report.errors.append(Issue("cycle", f"cycle: {chain}", tuple(names[i] for i in cycle[:-1])))
    for lab in t.labels:
        parents = t.parents(lab.index)
        if len(parents) > 1:
            who = ", ".join(names[p] for p in parents)
            report.warnings.append(
                Issue("multi_parent", f"{lab.name!r} has {len(parents)} parents: {who}", (lab.name,)))
    if t.edges:
        touched = {i for edge in t.edges for i in edge}
        for lab in t.labels:
            if lab.index not in touched:
                report.warnings.append(
                    Issue("isolated", f"{lab.name!r} has neither parent nor children", (lab.name,)))
    return report


def derive_uncertain(row, n_original: int = N_ORIGINAL_LABELS):
    """Uncertain flag: 1 iff no original label (including No Finding) is positive.

    Accepts a single row or a 2-D matrix of rows; the last axis must have
    length ``n_original``.
    """
    row = np.asarray(row)
    if row.shape[-1:] != (n_original,):
        raise ValueError(f"expected {n_original} original labels, got shape {row.shape}")
    if not np.isin(row, (0, 1)).all():
        raise ValueError("label entries must be 0 or 1")
    flag = (row.sum(axis=-1) == 0).astype(np.int8)
    return int(flag) if flag.ndim == 0 else flag
