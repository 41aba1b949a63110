"""Peripheral cosets and closest-point projections.

A coset ``g H_i`` of a peripheral factor is identified structurally by its
factor index and canonical representative (the normal form of ``g`` with any
trailing ``i``-syllable stripped), so coset equality is O(1).

Three projection routes are provided:

* ``gate_projection``: closed form for the standard generating set; writes
  ``w = rep^-1 x`` and gates through the leading ``i``-syllable of ``w``.
  This is the unique distance-minimizing point in that regime.
* ``proj_bruteforce``: the certified set of distance minimizers over the
  coset, for any backend; the certificate guarantees the true minimum was
  seen, or OutOfRangeError is raised.
* ``proj_entrypoint`` / ``proj_conedoff``: first path vertex entering a
  neighborhood of the coset, along a metric geodesic or a coned-off geodesic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InvalidFactorError, OutOfRangeError, UnsupportedMetricError
from .group import (
    Element,
    GroupSpec,
    element_str,
    inv,
    mul,
    mul_syllable,
    parse_element,
    sort_key,
    syllable_length,
)


@dataclass(frozen=True)
class Coset:
    """Left coset of a peripheral factor, keyed by (factor_index, canonical rep)."""

    factor_index: int
    rep: Element


@dataclass
class ProjectionResult:
    point: Element
    method: str
    witness: Optional[object] = None  # VertexPath or HatPath


def coset_of(spec: GroupSpec, x: Element, i: int) -> Coset:
    """The coset x * H_i; the rep is x with any trailing i-syllable stripped."""
    _check_peripheral(spec, i)
    if x and x[-1][0] == i:
        return Coset(i, x[:-1])
    return Coset(i, x)


def coset_str(spec: GroupSpec, coset: Coset) -> str:
    return f"H{coset.factor_index} @ {element_str(spec, coset.rep)}"


def parse_coset(spec: GroupSpec, text: str) -> Coset:
    head, _, rep_text = text.partition("@")
    head = head.strip()
    if not head.startswith("H"):
        raise InvalidFactorError(f"bad coset string: {text!r}")
    i = int(head[1:])
    _check_peripheral(spec, i)
    rep = parse_element(spec, rep_text.strip())
    return coset_of(spec, rep, i)


def coset_member(spec: GroupSpec, coset: Coset, coord) -> Element:
    """The member rep * h for a factor coordinate h (identity gives the rep)."""
    f = spec.factors[coset.factor_index]
    if f.is_identity(coord):
        return coset.rep
    return mul_syllable(spec, coset.rep, coset.factor_index, coord)


def member_coord(spec: GroupSpec, coset: Coset, p: Element):
    """Inverse of ``coset_member``: the factor coordinate of a coset point."""
    i = coset.factor_index
    if p == coset.rep:
        return spec.factors[i].identity
    if p[:-1] == coset.rep and p[-1][0] == i:
        return p[-1][1]
    raise InvalidFactorError("element does not lie in the coset")


def contains(spec: GroupSpec, coset: Coset, x: Element) -> bool:
    return coset_of(spec, x, coset.factor_index) == coset


def gate_projection(spec: GroupSpec, P: Coset, x: Element) -> ProjectionResult:
    """Exact closest point of P in the standard-generator metric."""
    if not spec.is_standard:
        raise UnsupportedMetricError(
            "gate projection is exact only for the standard generating set; "
            "use proj_bruteforce"
        )
    return ProjectionResult(_gate_point(spec, P, x), "gate")


def _gate_point(spec: GroupSpec, P: Coset, x: Element) -> Element:
    w = mul(spec, inv(spec, P.rep), x)
    if w and w[0][0] == P.factor_index:
        return mul_syllable(spec, P.rep, P.factor_index, w[0][1])
    return P.rep


def dist_to_coset(spec: GroupSpec, backend, P: Coset, x: Element) -> int:
    """d(x, P) under the backend's metric (certified)."""
    if backend.is_exact:
        w = mul(spec, inv(spec, P.rep), x)
        f = spec.factors[P.factor_index]
        total = syllable_length(spec, w)
        if w and w[0][0] == P.factor_index:
            return total - f.length(w[0][1])
        return total
    d, _ = _bfs_coset_minimizers(spec, backend, P, x, backend.radius + 1)
    return d


def proj_bruteforce(
    spec: GroupSpec, backend, P: Coset, x: Element, search_radius: int
) -> frozenset:
    """The full set of coset points minimizing the distance to x, certified.

    The certificate is ``d(x, P) < search_radius``: every coset point outside
    the searched region is then strictly farther than the found minimum, so
    the returned set is exactly the minimizing set.  Raises OutOfRangeError
    when the certificate fails.
    """
    if backend.is_exact:
        m, points = _exact_coset_minimizers(spec, P, x)
    else:
        if search_radius > backend.radius + 1:
            search_radius = backend.radius + 1
        m, points = _bfs_coset_minimizers(spec, backend, P, x, search_radius)
    if m >= search_radius:
        raise OutOfRangeError(
            f"coset minimum {m} not certified within search radius {search_radius}"
        )
    return frozenset(points)


def _exact_coset_minimizers(spec: GroupSpec, P: Coset, x: Element):
    """Scan coset points level by level in the factor, with a stopping bound.

    d(x, rep*h) = base + len_f(h^-1 h0) where w = rep^-1 x = h0 * w' and
    base = |w'|; a point at factor level l is at distance >= base + l - len_f(h0),
    so levels beyond m - base + len_f(h0) cannot improve on a found minimum m.
    """
    i = P.factor_index
    f = spec.factors[i]
    w = mul(spec, inv(spec, P.rep), x)
    if w and w[0][0] == i:
        h0 = w[0][1]
    else:
        h0 = f.identity
    len_h0 = f.length(h0)
    base = syllable_length(spec, w) - len_h0
    best = None
    best_points: list[Element] = []
    level = 0
    diam = f.diameter()
    while True:
        if best is not None and base + level - len_h0 > best:
            break
        if diam is not None and level > diam:
            break
        for h in f.elements_of_length(level):
            d = base + f.length(f.mul(f.inv(h), h0))
            if best is None or d < best:
                best = d
                best_points = [coset_member(spec, P, h)]
            elif d == best:
                best_points.append(coset_member(spec, P, h))
        level += 1
    return best, best_points


def _bfs_coset_minimizers(spec: GroupSpec, backend, P: Coset, x: Element, limit: int):
    """Scan the backend's distance shells around x for coset members."""
    i = P.factor_index
    for d, shell in enumerate(backend.shells()):
        if d >= limit:
            break
        found = [
            p
            for g in shell
            if contains(spec, P, p := mul(spec, x, g))
        ]
        if found:
            return d, found
    raise OutOfRangeError(
        f"no coset point within {min(limit, backend.radius + 1) - 1} of x"
    )


def projection(spec: GroupSpec, backend, P: Coset, x: Element) -> Element:
    """The canonical projection point: gate in exact mode, else the
    deterministically-least element of the certified minimizing set."""
    if backend.is_exact:
        return _gate_point(spec, P, x)
    d_rep = backend.distance(x, P.rep)
    search = min(d_rep + 1, backend.radius + 1)
    candidates = proj_bruteforce(spec, backend, P, x, search)
    return min(candidates, key=lambda p: sort_key(spec, p))


def projection_distance(spec: GroupSpec, backend, P: Coset, x: Element, y: Element) -> int:
    """d(pi_P(x), pi_P(y)) under the backend's metric."""
    px = projection(spec, backend, P, x)
    py = projection(spec, backend, P, y)
    return backend.distance(px, py)


def proj_entrypoint(
    spec: GroupSpec,
    backend,
    P: Coset,
    x: Element,
    target: Element,
    enter_radius: int,
) -> ProjectionResult:
    """First vertex of the backend geodesic x -> target within ``enter_radius`` of P.

    ``target`` must lie in P, so the entry vertex always exists.
    """
    if not contains(spec, P, target):
        raise InvalidFactorError("entry-point target must lie in the coset")
    path = backend.geodesic(x, target)
    for v in path.vertices:
        if dist_to_coset(spec, backend, P, v) <= enter_radius:
            return ProjectionResult(v, "entry-point", path)
    raise AssertionError("geodesic to a coset point never entered its neighborhood")


def proj_conedoff(spec: GroupSpec, hat_backend, P: Coset, x: Element) -> ProjectionResult:
    """First vertex of a coned-off geodesic from x to P that lies in P."""
    path = hat_backend.geodesic(x, P.rep)
    for v in path.vertices:
        if contains(spec, P, v):
            return ProjectionResult(v, "coned-off", path)
    raise AssertionError("coned-off geodesic to the coset never met it")


def separating_cosets(spec: GroupSpec, x: Element, y: Element) -> list[Coset]:
    """The cosets contributing nonzero projection gaps between x and y.

    These are x * s_1..s_{j-1} * H_i for each peripheral syllable s_j of the
    normal form of x^-1 y; in the exact regime they are precisely the cosets
    whose two gate projections differ.
    """
    w = mul(spec, inv(spec, x), y)
    out: list[Coset] = []
    prefix = x
    for fi, coord in w:
        if fi in spec.peripheral_indices:
            out.append(coset_of(spec, prefix, fi))
        prefix = mul_syllable(spec, prefix, fi, coord)
    return out


def cosets_meeting_ball(spec: GroupSpec, elements) -> list[Coset]:
    """All peripheral cosets containing at least one of the given elements,
    in deterministic first-seen order."""
    seen: dict[Coset, None] = {}
    for x in elements:
        for i in spec.peripheral_indices:
            seen.setdefault(coset_of(spec, x, i), None)
    return list(seen)


def _check_peripheral(spec: GroupSpec, i: int) -> None:
    if i not in spec.peripheral_indices:
        raise InvalidFactorError(f"factor {i} is not peripheral")
