"""Weighted signed graphs with vertex potentials and the JSON graph format."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed or invalid graph input."""


@dataclass(frozen=True, eq=False)
class SignedGraph:
    """Finite connected simple graph carrying omega, sigma, kappa, rho and p.

    Each undirected edge is stored once as ``(i, j)`` with ``i < j``; the
    per-edge arrays ``omega`` and ``sigma`` are aligned with ``edges``.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    omega: np.ndarray
    sigma: np.ndarray
    kappa: np.ndarray
    rho: np.ndarray
    p: float

    def __post_init__(self):
        for name in ("omega", "sigma", "kappa", "rho"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(
            self, "edges", tuple((min(a, b), max(a, b)) for a, b in self.edges))
        object.__setattr__(
            self, "_index", {e: k for k, e in enumerate(self.edges)})

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, vid: str) -> int:
        try:
            return self.vertices.index(vid)
        except ValueError:
            raise GraphError(f"unknown vertex {vid!r}") from None

    def edge_index(self, u: int, v: int) -> int:
        """Position of the undirected edge {u, v} in ``edges``."""
        try:
            return self._index[(min(u, v), max(u, v))]
        except KeyError:
            raise GraphError(f"no edge between {u} and {v}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._index

    def weight(self, u: int, v: int) -> float:
        return float(self.omega[self.edge_index(u, v)])

    def sign(self, u: int, v: int) -> float:
        return float(self.sigma[self.edge_index(u, v)])

    def directed_edges(self):
        """Yield ``(u, v, omega, sigma)`` for both orientations of every edge."""
        for (a, b), w, s in zip(self.edges, self.omega, self.sigma):
            yield a, b, float(w), float(s)
            yield b, a, float(w), float(s)

    def neighbors(self, u: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == u:
                out.append(b)
            elif b == u:
                out.append(a)
        return out

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def is_connected(self) -> bool:
        return _connected(self.n, self.edges)

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1 and self.is_connected()

    def replace(self, **changes) -> "SignedGraph":
        fields = dict(vertices=self.vertices, edges=self.edges, omega=self.omega,
                      sigma=self.sigma, kappa=self.kappa, rho=self.rho, p=self.p)
        fields.update(changes)
        return SignedGraph(**fields)

    def __eq__(self, other):
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.p == other.p
                and all(np.array_equal(getattr(self, k), getattr(other, k))
                        for k in ("omega", "sigma", "kappa", "rho")))

    __hash__ = None


@dataclass(frozen=True)
class CutSpec:
    """Ordered directed representatives ``(u_i, v_i)`` of the cut edges.

    ``u_i`` receives the potential ``omega*phi_p(1 - alpha_i)`` and ``v_i``
    receives ``omega*phi_p(1 - 1/alpha_i)``.
    """

    edges: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.edges)

    def reversed(self, i: int | None = None) -> "CutSpec":
        """Flip the orientation of cut edge ``i`` (or of all of them)."""
        idx = range(len(self.edges)) if i is None else [i]
        return CutSpec(tuple((v, u) if k in idx else (u, v)
                             for k, (u, v) in enumerate(self.edges)))


def _connected(n, edges) -> bool:
    if n == 0:
        return False
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == n


def make_graph(vertices: Sequence[str], edges, p: float, omega=None,
               sigma=None, kappa=None, rho=None) -> SignedGraph:
    """Build and validate a graph; ``edges`` are pairs of vertex ids or indices.

    Omitted arrays default to omega=1, sigma=+1, kappa=0, rho=1.
    """
    vertices = tuple(str(v) for v in vertices)
    if len(set(vertices)) != len(vertices):
        raise GraphError("duplicate vertex id")
    pos = {v: k for k, v in enumerate(vertices)}

    def resolve(x):
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            if not 0 <= x < len(vertices):
                raise GraphError(f"vertex index {x} out of range")
            return int(x)
        if str(x) not in pos:
            raise GraphError(f"unknown vertex {x!r}")
        return pos[str(x)]

    idx_edges = []
    seen = set()
    for a, b in edges:
        a, b = resolve(a), resolve(b)
        if a == b:
            raise GraphError(f"self-loop at {vertices[a]!r}")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise GraphError(f"duplicate edge {vertices[a]!r}-{vertices[b]!r}")
        seen.add(key)
        idx_edges.append(key)

    m, n = len(idx_edges), len(vertices)
    omega = np.ones(m) if omega is None else np.asarray(omega, dtype=float)
    sigma = np.ones(m) if sigma is None else np.asarray(sigma, dtype=float)
    kappa = np.zeros(n) if kappa is None else np.asarray(kappa, dtype=float)
    rho = np.ones(n) if rho is None else np.asarray(rho, dtype=float)
    if omega.shape != (m,) or sigma.shape != (m,):
        raise GraphError("edge attribute length mismatch")
    if kappa.shape != (n,) or rho.shape != (n,):
        raise GraphError("vertex attribute length mismatch")
    if not p > 1:
        raise GraphError(f"exponent p must exceed 1, got {p}")
    if np.any(~(omega > 0)):
        raise GraphError("nonpositive weight")
    if np.any(~(rho > 0)):
        raise GraphError("nonpositive vertex measure")
    if not np.all(np.isin(sigma, (-1.0, 1.0))):
        raise GraphError("edge sign must be +1 or -1")
    if not np.all(np.isfinite(kappa)):
        raise GraphError("nonfinite potential")
    if not _connected(n, idx_edges):
        raise GraphError("graph is disconnected")
    return SignedGraph(vertices, tuple(idx_edges), omega, sigma, kappa, rho, p)


def make_cut(g: SignedGraph, pairs) -> CutSpec:
    """Validate cut edge representatives given as vertex ids or indices."""
    out = []
    seen = set()
    for a, b in pairs:
        u = a if isinstance(a, (int, np.integer)) else g.index(str(a))
        v = b if isinstance(b, (int, np.integer)) else g.index(str(b))
        u, v = int(u), int(v)
        if not g.has_edge(u, v):
            raise GraphError(
                f"cut edge {g.vertices[u]!r}-{g.vertices[v]!r} absent from edge set")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError("repeated cut edge")
        seen.add(key)
        out.append((u, v))
    return CutSpec(tuple(out))


def graph_from_dict(doc: dict) -> tuple[SignedGraph, CutSpec | None]:
    try:
        p = float(doc["p"])
        vdocs = doc["vertices"]
        edocs = doc.get("edges", [])
        vertices = [str(v["id"]) if isinstance(v, dict) else str(v) for v in vdocs]
        rho = [float(v.get("rho", 1.0)) if isinstance(v, dict) else 1.0 for v in vdocs]
        kappa = [float(v.get("kappa", 0.0)) if isinstance(v, dict) else 0.0 for v in vdocs]
        edges = [(str(e["u"]), str(e["v"])) for e in edocs]
        omega = [float(e.get("omega", 1.0)) for e in edocs]
        sigma = [float(e.get("sigma", 1)) for e in edocs]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise GraphError(f"malformed graph document: {exc}") from exc
    g = make_graph(vertices, edges, p, omega=omega, sigma=sigma,
                   kappa=kappa, rho=rho)
    cut = None
    if doc.get("cut") is not None:
        try:
            pairs = [(str(a), str(b)) for a, b in doc["cut"]]
        except (TypeError, ValueError) as exc:
            raise GraphError(f"malformed cut list: {exc}") from exc
        cut = make_cut(g, pairs)
    return g, cut


def load_graph(source: IO | str | bytes) -> tuple[SignedGraph, CutSpec | None]:
    """Parse a JSON graph document from a stream, string or bytes."""
    if hasattr(source, "read"):
        source = source.read()
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise GraphError(f"parse error: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphError("parse error: top level must be an object")
    return graph_from_dict(doc)


def graph_to_dict(g: SignedGraph, cut: CutSpec | None = None) -> dict:
    doc = {
        "p": g.p,
        "vertices": [{"id": v, "rho": float(r), "kappa": float(k)}
                     for v, r, k in zip(g.vertices, g.rho, g.kappa)],
        "edges": [{"u": g.vertices[a], "v": g.vertices[b], "omega": float(w),
                   "sigma": int(s)}
                  for (a, b), w, s in zip(g.edges, g.omega, g.sigma)],
    }
    if cut is not None:
        doc["cut"] = [[g.vertices[u], g.vertices[v]] for u, v in cut.edges]
    return doc


def dump_graph(g: SignedGraph, cut: CutSpec | None = None) -> str:
    return json.dumps(graph_to_dict(g, cut), indent=2)


def pnorm(g: SignedGraph, f) -> float:
    """rho-weighted p-norm of a vertex function."""
    f = np.asarray(f, dtype=float)
    return float(np.sum(g.rho * np.abs(f) ** g.p) ** (1.0 / g.p))


def canonical_sign(f, rtol: float = 1e-12) -> np.ndarray:
    """Flip ``f`` so its first nonzero entry is positive.

    Entries below ``rtol * max|f|`` count as zero, so round-off noise in a
    vanishing component does not decide the sign.
    """
    f = np.asarray(f, dtype=float)
    scale = np.max(np.abs(f)) if f.size else 0.0
    nz = np.flatnonzero(np.abs(f) > rtol * scale)
    if nz.size and f[nz[0]] < 0:
        return -f
    return f.copy()


def normalize(g: SignedGraph, f) -> np.ndarray:
    """Scale to unit p-norm with the first nonzero component positive."""
    f = np.asarray(f, dtype=float)
    nrm = pnorm(g, f)
    if nrm == 0:
        raise GraphError("cannot normalize the zero vector")
    return canonical_sign(f / nrm)
