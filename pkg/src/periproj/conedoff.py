"""The coned-off graph: distances, geodesics, lifts, and coset-penetration checks.

The coned-off graph has the group as vertex set, all Cayley edges, and one
extra edge between every pair of distinct vertices sharing a peripheral coset
(clique model: a coset crossing costs exactly 1).  For the standard
generating set the distance has a closed form: each peripheral syllable of
``x^-1 y`` costs 1 and every other syllable costs its factor word length.

For extended generating sets (and for geodesic enumeration in general) a
windowed BFS backend is used: the graph is restricted to a ball around the
identity and distances are certified via the maximal per-edge displacement,
which requires every peripheral factor to be finite in extended mode.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .errors import InvalidFactorError, OutOfRangeError, UnsupportedMetricError
from .group import (
    DEFAULT_BALL_CAP,
    Element,
    GroupSpec,
    ball,
    element_str,
    inv,
    mul,
    mul_syllable,
    sort_key,
)
from .metric import VertexPath
from .peripheral import Coset, coset_of, coset_str, member_coord

CAY = "cay"
CONE = "cone"


@dataclass
class HatPath:
    """An edge path in the coned-off graph.

    ``edges[j]`` connects ``vertices[j]`` to ``vertices[j+1]`` and is either
    ``(CAY, label)`` or ``(CONE, coset)``.
    """

    vertices: list
    edges: list = field(default_factory=list)

    def __len__(self) -> int:
        return max(0, len(self.vertices) - 1)

    @property
    def start(self) -> Element:
        return self.vertices[0]

    @property
    def end(self) -> Element:
        return self.vertices[-1]


def hat_edge_str(spec: GroupSpec, edge) -> str:
    kind, payload = edge
    if kind == CAY:
        return f"cay:{payload}"
    return f"cone:H{payload.factor_index}@{element_str(spec, payload.rep)}"


def _require_peripheral(spec: GroupSpec) -> None:
    if not spec.peripheral_indices:
        raise InvalidFactorError("coned-off operations need a nonempty peripheral set")


def dist_hat(spec: GroupSpec, x: Element, y: Element) -> int:
    """Coned-off distance, closed form (standard generating set only)."""
    _require_peripheral(spec)
    if not spec.is_standard:
        raise UnsupportedMetricError(
            "closed-form coned-off distance needs the standard generating set; "
            "use a ConedOffBackend window"
        )
    w = mul(spec, inv(spec, x), y)
    peripheral = spec.peripheral_indices
    factors = spec.factors
    return sum(
        1 if fi in peripheral else factors[fi].length(c) for fi, c in w
    )


def geodesic_hat(spec: GroupSpec, x: Element, y: Element) -> HatPath:
    """Canonical coned-off geodesic: one cone edge per long peripheral syllable.

    Length-1 peripheral syllables tie between a Cayley edge and a cone edge;
    the tie is broken to the Cayley edge.
    """
    _require_peripheral(spec)
    if not spec.is_standard:
        raise UnsupportedMetricError("canonical coned-off geodesics need standard generators")
    w = mul(spec, inv(spec, x), y)
    vertices = [x]
    edges: list = []
    cur = x
    for fi, coord in w:
        f = spec.factors[fi]
        if fi in spec.peripheral_indices and f.length(coord) > 1:
            edges.append((CONE, coset_of(spec, cur, fi)))
            cur = mul_syllable(spec, cur, fi, coord)
            vertices.append(cur)
            continue
        step_label = {g: label for label, g in f.moves()}
        fpath = f.geodesic(f.identity, coord)
        for a, b in zip(fpath, fpath[1:]):
            g = f.mul(f.inv(a), b)
            cur = mul_syllable(spec, cur, fi, g)
            edges.append((CAY, step_label[g]))
            vertices.append(cur)
    return HatPath(vertices, edges)


class ConedOffBackend:
    """Coned-off distances/geodesics with an optional BFS window.

    * Standard generating set: ``distance`` and ``geodesic`` use the exact
      closed form; a window (``radius``) is additionally needed for geodesic
      enumeration and for the raw BFS cross-check.
    * Extended generating set: a window is mandatory and every peripheral
      factor must be finite, so that a windowed distance ``d`` is certified
      exact whenever ``d * c_edge <= radius`` (``c_edge`` bounds how far a
      single coned-off edge can move in the group metric).
    """

    def __init__(self, spec: GroupSpec, radius: int | None = None, cap: int = DEFAULT_BALL_CAP):
        _require_peripheral(spec)
        self.spec = spec
        self.radius = radius
        self.exact = spec.is_standard
        diameters = [spec.factors[i].diameter() for i in spec.peripheral_indices]
        self._c_edge = None if any(d is None for d in diameters) else max(1, *diameters)
        if not self.exact:
            if radius is None:
                raise UnsupportedMetricError("extended-mode coned-off metric needs a window radius")
            if self._c_edge is None:
                raise UnsupportedMetricError(
                    "extended-mode coned-off distances need finite peripheral factors"
                )
        self.gtable = None
        if radius is not None:
            self._build_window(radius, cap)

    def _build_window(self, radius: int, cap: int) -> None:
        spec = self.spec
        self.gtable = ball(spec, radius, cap)
        members: dict[Coset, list[Element]] = {}
        for g in self.gtable:
            for i in spec.peripheral_indices:
                members.setdefault(coset_of(spec, g, i), []).append(g)
        for lst in members.values():
            lst.sort(key=lambda p: sort_key(spec, p))
        self._members = members
        self._moves = [(label, g, inv(spec, g)) for label, g in spec.moves()]
        self.hat_table = self._hat_bfs()
        self._pred_cache: dict = {}

    def _hat_bfs(self) -> dict[Element, int]:
        spec = self.spec
        dist: dict[Element, int] = {(): 0}
        frontier: deque[Element] = deque([()])
        while frontier:
            v = frontier.popleft()
            d = dist[v]
            for _, g, _ in self._moves:
                u = mul(spec, v, g)
                if u in self.gtable and u not in dist:
                    dist[u] = d + 1
                    frontier.append(u)
            for i in spec.peripheral_indices:
                for u in self._members[coset_of(spec, v, i)]:
                    if u not in dist:
                        dist[u] = d + 1
                        frontier.append(u)
        return dist

    def distance(self, x: Element, y: Element) -> int:
        """Certified coned-off distance (exact formula in standard mode)."""
        if self.exact:
            return dist_hat(self.spec, x, y)
        w = mul(self.spec, inv(self.spec, x), y)
        d = self.hat_table.get(w)
        if d is None or d * self._c_edge > self.radius:
            raise OutOfRangeError("coned-off distance not certified by this window")
        return d

    def window_distance(self, x: Element, y: Element) -> int:
        """Raw windowed BFS value (an upper bound on the true distance)."""
        if self.gtable is None:
            raise UnsupportedMetricError("backend was built without a window")
        w = mul(self.spec, inv(self.spec, x), y)
        d = self.hat_table.get(w)
        if d is None:
            raise OutOfRangeError("target outside the window")
        return d

    def geodesic(self, x: Element, y: Element) -> HatPath:
        if self.exact:
            return geodesic_hat(self.spec, x, y)
        w = mul(self.spec, inv(self.spec, x), y)
        self.distance(x, y)  # certification
        rev = self._walk_back(w)
        return _translate(self.spec, rev, x)

    def _walk_back(self, w: Element) -> HatPath:
        """Deterministic geodesic from the identity to w inside the window."""
        vertices = [w]
        edges: list = []
        v = w
        d = self.hat_table[v]
        while d > 0:
            u, edge = self._predecessors(v, d)[0]
            vertices.append(u)
            edges.append(edge)
            v = u
            d -= 1
        vertices.reverse()
        edges.reverse()
        return HatPath(vertices, edges)

    def _predecessors(self, v: Element, d: int):
        """(u, edge u->v) pairs over the shortest-path DAG, deterministically:
        Cayley moves in generating-set order, then cone edges by factor index
        and canonical member order.  Memoized per vertex."""
        cached = self._pred_cache.get(v)
        if cached is not None:
            return cached
        spec = self.spec
        out = []
        for label, _, g_inv in self._moves:
            u = mul(spec, v, g_inv)
            if self.hat_table.get(u) == d - 1:
                out.append((u, (CAY, label)))
        for i in spec.peripheral_indices:
            coset = coset_of(spec, v, i)
            for u in self._members[coset]:
                if u != v and self.hat_table.get(u) == d - 1:
                    out.append((u, (CONE, coset)))
        self._pred_cache[v] = out
        return out

    def enumerate_geodesics(self, x: Element, y: Element, cap: int) -> tuple[list[HatPath], bool]:
        """All coned-off geodesics from x to y visible in the window, up to ``cap``.

        In standard mode the windowed distance is asserted against the closed
        form first, so every enumerated path is a true geodesic (geodesics
        leaving the window are not seen; callers report the window radius).
        """
        if self.gtable is None:
            raise UnsupportedMetricError("geodesic enumeration needs a window")
        spec = self.spec
        w = mul(spec, inv(spec, x), y)
        dw = self.hat_table.get(w)
        if dw is None:
            raise OutOfRangeError("target outside the window")
        if self.exact:
            if dw != dist_hat(spec, (), w):
                raise OutOfRangeError("window too small: BFS value exceeds the exact distance")
        else:
            self.distance(x, y)
        paths: list[HatPath] = []
        truncated = False

        def back(v: Element, d: int, vtx: list, edg: list) -> bool:
            nonlocal truncated
            if d == 0:
                vertices = list(reversed(vtx))
                edges = list(reversed(edg))
                paths.append(_translate(spec, HatPath(vertices, edges), x))
                if len(paths) >= cap:
                    truncated = True
                    return False
                return True
            for u, edge in self._predecessors(v, d):
                vtx.append(u)
                edg.append(edge)
                alive = back(u, d - 1, vtx, edg)
                vtx.pop()
                edg.pop()
                if not alive:
                    return False
            return True

        back(w, dw, [w], [])
        return paths, truncated


def _translate(spec: GroupSpec, path: HatPath, x: Element) -> HatPath:
    """Left-translate an identity-based path by x (cone cosets translate too)."""
    if not x:
        return path
    vertices = [mul(spec, x, v) for v in path.vertices]
    edges = []
    for kind, payload in path.edges:
        if kind == CONE:
            payload = coset_of(spec, mul(spec, x, payload.rep), payload.factor_index)
        edges.append((kind, payload))
    return HatPath(vertices, edges)


def lift(spec: GroupSpec, hat_path: HatPath) -> VertexPath:
    """Replace each cone edge by a geodesic inside its coset; keep Cayley edges.

    In-coset geodesics use the factor's own generators plus any extra
    generators that happen to lie in that factor, so lifts are honest paths
    of the spec's Cayley graph in both regimes.
    """
    vertices = [hat_path.start]
    labels: list[str] = []
    cur = hat_path.start
    for (kind, payload), tail in zip(hat_path.edges, hat_path.vertices[1:]):
        if kind == CAY:
            cur = tail
            vertices.append(cur)
            labels.append(payload)
            continue
        coset = payload
        i = coset.factor_index
        h1 = member_coord(spec, coset, cur)
        h2 = member_coord(spec, coset, tail)
        coords, step_labels = _coset_geodesic(spec, i, h1, h2)
        for coord, lab in zip(coords[1:], step_labels):
            f = spec.factors[i]
            cur = coset.rep if f.is_identity(coord) else mul_syllable(spec, coset.rep, i, coord)
            vertices.append(cur)
            labels.append(lab)
    return VertexPath(vertices, labels)


def _in_factor_extras(spec: GroupSpec, i: int) -> list[tuple[str, object]]:
    out = []
    for name, elem in spec.extra_generators:
        if len(elem) == 1 and elem[0][0] == i:
            out.append((name, elem[0][1]))
    return out


def _coset_geodesic(spec: GroupSpec, i: int, h1, h2):
    """Coordinate path h1 -> h2 inside factor i, with edge labels."""
    f = spec.factors[i]
    extras = _in_factor_extras(spec, i)
    if not extras:
        fpath = f.geodesic(h1, h2)
        step_label = {g: label for label, g in f.moves()}
        labels = [
            step_label[f.mul(f.inv(a), b)] for a, b in zip(fpath, fpath[1:])
        ]
        return fpath, labels
    moves = list(f.moves())
    for name, g in extras:
        for lab, coord in ((name, g), (name + "^-1", f.inv(g))):
            if all(coord != c for _, c in moves):
                moves.append((lab, coord))
    # plain BFS over the intrinsic coset graph
    start, goal = h1, h2
    prev: dict = {start: None}
    frontier = deque([start])
    budget = 100_000
    while frontier:
        cur = frontier.popleft()
        if cur == goal:
            break
        for lab, g in moves:
            nxt = f.mul(cur, g)
            if nxt not in prev:
                if len(prev) >= budget:
                    raise OutOfRangeError("in-coset geodesic search exceeded its budget")
                prev[nxt] = (cur, lab)
                frontier.append(nxt)
    if goal not in prev:
        raise OutOfRangeError("in-coset geodesic not found within budget")
    coords = [goal]
    labels = []
    cur = goal
    while prev[cur] is not None:
        cur, lab = prev[cur]
        coords.append(cur)
        labels.append(lab)
    coords.reverse()
    labels.reverse()
    return coords, labels


def path_crossings(spec: GroupSpec, path: HatPath) -> dict:
    """Per-coset entry/exit vertices of a coned-off path.

    An edge counts as crossing P iff both endpoints lie in P; this includes
    length-1 peripheral Cayley edges (recorded convention).  Entry is the
    first such edge's tail, exit the last such edge's head.
    """
    crossings: dict[Coset, tuple[Element, Element]] = {}
    for (kind, payload), u, v in zip(path.edges, path.vertices, path.vertices[1:]):
        if kind == CONE:
            hits = [payload]
        else:
            hits = [
                coset_of(spec, u, i)
                for i in spec.peripheral_indices
                if coset_of(spec, u, i) == coset_of(spec, v, i)
            ]
        for coset in hits:
            if coset in crossings:
                crossings[coset] = (crossings[coset][0], v)
            else:
                crossings[coset] = (u, v)
    return crossings


@dataclass
class BcpReport:
    """Coset-penetration statistics over enumerated geodesic pairs."""

    samples: int
    max_clause1: int
    max_clause2: int
    witnesses: list
    geodesic_count: int
    truncated: bool


def check_bcp(
    spec: GroupSpec,
    hat_backend: ConedOffBackend,
    metric_backend,
    x: Element,
    y: Element,
    enumeration_cap: int,
) -> BcpReport:
    """Compare every enumerated pair of coned-off geodesics from x to y.

    Clause 1: a coset crossed by one geodesic and not the other must be
    crossed tightly (its edge endpoints are close in the group metric).
    Clause 2: a coset crossed by both is entered and exited at close points.
    The maxima over all pairs are the empirical penetration constants.
    """
    geos, truncated = hat_backend.enumerate_geodesics(x, y, enumeration_cap)
    crossings = [path_crossings(spec, g) for g in geos]
    max_c1 = 0
    max_c2 = 0
    witnesses: list[dict] = []
    samples = 0
    for (ia, ca), (ib, cb) in itertools.combinations(enumerate(crossings), 2):
        samples += 1
        for P, (pa, qa) in ca.items():
            if P in cb:
                pb, qb = cb[P]
                d = max(
                    metric_backend.distance(pa, pb),
                    metric_backend.distance(qa, qb),
                )
                if d > max_c2:
                    max_c2 = d
                    witnesses.append(
                        {"clause": 2, "coset": coset_str(spec, P), "distance": d,
                         "geodesics": (ia, ib)}
                    )
            else:
                d = metric_backend.distance(pa, qa)
                if d > max_c1:
                    max_c1 = d
                    witnesses.append(
                        {"clause": 1, "coset": coset_str(spec, P), "distance": d,
                         "geodesics": (ia, ib)}
                    )
        for P, (pb, qb) in cb.items():
            if P not in ca:
                d = metric_backend.distance(pb, qb)
                if d > max_c1:
                    max_c1 = d
                    witnesses.append(
                        {"clause": 1, "coset": coset_str(spec, P), "distance": d,
                         "geodesics": (ib, ia)}
                    )
    return BcpReport(
        samples=samples,
        max_clause1=max_c1,
        max_clause2=max_c2,
        witnesses=witnesses[-4:],
        geodesic_count=len(geos),
        truncated=truncated,
    )
