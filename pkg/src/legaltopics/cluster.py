"""Density-based hierarchical clustering of reduced embeddings.

Stages: core distances -> mutual reachability -> MST (Prim, dense) ->
single-linkage hierarchy -> condensed tree -> excess-of-mass cluster
extraction. Labels are integers with -1 for noise; tie-breaking is by index
everywhere so labels are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_EPS = 1e-12


class ClusterError(ValueError):
    pass


@dataclass
class ClusterConfig:
    min_cluster_size: int = 5
    min_samples: int = 5
    metric: str = "euclidean"

    def __post_init__(self):
        if self.min_cluster_size < 2:
            raise ClusterError("min_cluster_size must be >= 2")
        if self.min_samples < 1:
            raise ClusterError("min_samples must be >= 1")
        if self.metric != "euclidean":
            raise ClusterError("only the euclidean metric is supported")


@dataclass
class CondensedTree:
    # rows (parent, child, lambda, child_size); children < n_points are points
    rows: list[tuple[int, int, float, int]]
    n_points: int


@dataclass
class ClusterResult:
    labels: np.ndarray
    stabilities: dict[int, float] = field(default_factory=dict)

    @property
    def n_clusters(self) -> int:
        return len({l for l in self.labels.tolist() if l >= 0})


def euclidean_matrix(Z: np.ndarray) -> np.ndarray:
    Z = np.asarray(Z, dtype=np.float64)
    sq = np.sum(Z * Z, axis=1)
    d = sq[:, None] + sq[None, :] - 2.0 * (Z @ Z.T)
    d = np.sqrt(np.maximum(d, 0.0))
    np.fill_diagonal(d, 0.0)
    return d


def core_distances(Z: np.ndarray, min_samples: int) -> np.ndarray:
    """Distance to the min_samples-th nearest neighbor, self excluded."""
    n = Z.shape[0]
    if min_samples >= n:
        raise ClusterError(f"min_samples={min_samples} must be < n={n}")
    d = euclidean_matrix(Z)
    return np.sort(d, axis=1)[:, min_samples]


def mutual_reachability(d_ij: float, core_i: float, core_j: float) -> float:
    return max(core_i, core_j, d_ij)


def mutual_reachability_matrix(Z: np.ndarray, min_samples: int) -> np.ndarray:
    d = euclidean_matrix(Z)
    core = core_distances(Z, min_samples)
    m = np.maximum(d, np.maximum(core[:, None], core[None, :]))
    np.fill_diagonal(m, 0.0)
    return m


def mst(graph: np.ndarray) -> list[tuple[int, int, float]]:
    """Prim's algorithm on a dense symmetric matrix.

    Ties in edge weight are broken toward the lexicographically smaller
    (min(u, v), max(u, v)) pair. Returns n-1 edges (u, v, weight).
    """
    n = graph.shape[0]
    if n < 2:
        raise ClusterError("MST needs at least 2 points")
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    best_from = np.full(n, -1, dtype=np.int64)
    in_tree[0] = True
    best[1:] = graph[0, 1:]
    best_from[1:] = 0
    edges = []
    for _ in range(n - 1):
        cand = -1
        for v in range(n):
            if in_tree[v]:
                continue
            if cand < 0 or best[v] < best[cand]:
                cand = v
            elif best[v] == best[cand]:
                pv = (min(best_from[v], v), max(best_from[v], v))
                pc = (min(best_from[cand], cand), max(best_from[cand], cand))
                if pv < pc:
                    cand = v
        u = int(best_from[cand])
        edges.append((min(u, cand), max(u, cand), float(best[cand])))
        in_tree[cand] = True
        for v in range(n):
            if in_tree[v]:
                continue
            w = graph[cand, v]
            if w < best[v] or (w == best[v] and cand < best_from[v]):
                best[v] = w
                best_from[v] = cand
    return edges


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.component = list(range(n))  # current hierarchy node per root

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root


def build_hierarchy(edges, n_points: int):
    """Single-linkage dendrogram from MST edges.

    Merges run in ascending (weight, index-pair) order; merge t creates node
    n_points + t. Returns rows (left_node, right_node, weight, size).
    """
    uf = _UnionFind(n_points)
    merges = []
    for u, v, w in sorted(edges, key=lambda e: (e[2], e[0], e[1])):
        ru, rv = uf.find(u), uf.find(v)
        if ru == rv:
            raise ClusterError("input edges contain a cycle")
        left, right = uf.component[ru], uf.component[rv]
        if left > right:
            left, right = right, left
        size = uf.size[ru] + uf.size[rv]
        uf.parent[ru] = rv
        uf.size[rv] = size
        uf.component[rv] = n_points + len(merges)
        merges.append((left, right, w, size))
    return merges


def condense(hierarchy, n_points: int, min_cluster_size: int) -> CondensedTree:
    """Collapse the dendrogram into clusters of >= min_cluster_size points.

    Splits where one side is smaller than min_cluster_size are treated as
    points falling out of the parent at that level (lambda = 1/distance);
    splits where both sides qualify create two child clusters.
    """
    children = {}
    sizes = {i: 1 for i in range(n_points)}
    for t, (left, right, w, size) in enumerate(hierarchy):
        node = n_points + t
        children[node] = (left, right, w)
        sizes[node] = size

    def leaves(node):
        stack, out = [node], []
        while stack:
            x = stack.pop()
            if x < n_points:
                out.append(x)
            else:
                l, r, _ = children[x]
                stack.extend((r, l))
        return sorted(out)

    rows = []
    if not hierarchy:
        return CondensedTree(rows=rows, n_points=n_points)
    root = n_points + len(hierarchy) - 1
    next_label = n_points + 1
    # stack of (hierarchy node, condensed cluster label it belongs to)
    stack = [(root, n_points)]
    while stack:
        node, label = stack.pop()
        left, right, w = children[node]
        lam = 1.0 / max(w, _EPS)
        big_left = sizes[left] >= min_cluster_size
        big_right = sizes[right] >= min_cluster_size

        for child, big in ((left, big_left), (right, big_right)):
            if big and big_left and big_right:
                rows.append((label, next_label, lam, sizes[child]))
                stack.append((child, next_label))
                next_label += 1
            elif big:
                # lone qualifying side continues as the same cluster
                stack.append((child, label))
            else:
                for p in leaves(child):
                    rows.append((label, p, lam, 1))
    rows.sort(key=lambda r: (r[0], r[1]))
    return CondensedTree(rows=rows, n_points=n_points)


def compute_stability(tree: CondensedTree) -> dict[int, float]:
    births: dict[int, float] = {}
    for parent, child, lam, _ in tree.rows:
        if child >= tree.n_points:
            births[child] = lam
    if tree.rows:
        root = tree.n_points
        births[root] = min(lam for parent, _, lam, _ in tree.rows
                           if parent == root)
    stability: dict[int, float] = {}
    for parent, child, lam, size in tree.rows:
        stability[parent] = stability.get(parent, 0.0) + \
            (lam - births[parent]) * size
    return stability


def extract(tree: CondensedTree) -> ClusterResult:
    """Excess-of-mass cluster selection and point labeling.

    A cluster is selected when its own stability exceeds the summed
    stability of its children. The root competes like any other cluster, so
    a corpus forming a single dense blob yields one cluster rather than all
    noise. Labels are renumbered by first appearance in row order.
    """
    n = tree.n_points
    labels = np.full(n, -1, dtype=np.int64)
    if not tree.rows:
        return ClusterResult(labels=labels)

    stability = compute_stability(tree)
    cluster_children: dict[int, list[int]] = {}
    parent_of: dict[int, int] = {}
    for parent, child, _, _ in tree.rows:
        if child >= n:
            cluster_children.setdefault(parent, []).append(child)
            parent_of[child] = parent

    is_cluster = {c: True for c in stability}
    for node in sorted(stability, reverse=True):
        kids = cluster_children.get(node, [])
        subtree = sum(stability[k] for k in kids)
        if kids and stability[node] < subtree:
            stability[node] = subtree
            is_cluster[node] = False
        else:
            # node wins: nothing below it may be a cluster
            stack = list(kids)
            while stack:
                k = stack.pop()
                is_cluster[k] = False
                stack.extend(cluster_children.get(k, []))

    selected = {c for c, flag in is_cluster.items() if flag}
    point_parent = {child: parent for parent, child, _, _ in tree.rows
                    if child < n}
    raw = np.full(n, -1, dtype=np.int64)
    for p in range(n):
        c = point_parent.get(p)
        while c is not None and c not in selected:
            c = parent_of.get(c)
        if c is not None:
            raw[p] = c

    remap: dict[int, int] = {}
    for p in range(n):
        c = int(raw[p])
        if c >= 0:
            if c not in remap:
                remap[c] = len(remap)
            labels[p] = remap[c]
    stabilities = {remap[c]: stability[c] for c in remap}
    return ClusterResult(labels=labels, stabilities=stabilities)


def fit(Z: np.ndarray, config: ClusterConfig) -> ClusterResult:
    """Full pipeline from reduced vectors to labels."""
    Z = np.asarray(Z, dtype=np.float64)
    n = Z.shape[0]
    if n < 2:
        raise ClusterError("need at least 2 points")
    if n <= config.min_samples:
        raise ClusterError(
            f"min_samples={config.min_samples} must be < n={n}")
    m = mutual_reachability_matrix(Z, config.min_samples)
    edges = mst(m)
    hierarchy = build_hierarchy(edges, n)
    tree = condense(hierarchy, n, config.min_cluster_size)
    return extract(tree)
