"""Triangle thinness versus coset penetration at a fixed neighborhood scale.

For each sampled geodesic triangle the scan records D, the largest diameter
of a side's stay inside the K-neighborhood of any nearby peripheral coset
(penetration depth), and delta, the thinness of the triangle (worst distance
from a side vertex to the union of the other two sides).  The fitted slope is
the worst delta / max(D, 1); a family whose delta grows while D stays bounded
is flagged, since bounded penetration must force uniform thinness here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from ..errors import OutOfRangeError
from ..group import GroupSpec, ball, mul
from ..peripheral import coset_of, dist_to_coset
from .sampling import random_element_by_length


@dataclass
class ThinnessRow:
    vertices: tuple
    depth: int
    delta: int
    perimeter: int


@dataclass
class ThinnessReport:
    group: str
    k: int
    rows: list = field(default_factory=list)
    skipped: int = 0
    flagged: list = field(default_factory=list)

    @property
    def lam(self) -> Fraction:
        best = Fraction(0)
        for row in self.rows:
            ratio = Fraction(row.delta, max(row.depth, 1))
            if ratio > best:
                best = ratio
        return best


def triangle_sample(
    spec: GroupSpec,
    rng,
    n_random: int,
    exhaustive_radius: int = 1,
    max_syllables: int = 4,
    max_syllable_len: int = 6,
) -> list:
    """Exhaustive small-vertex triples plus seeded random long-syllable triples."""
    small = list(ball(spec, exhaustive_radius))
    triangles = list(product(small, repeat=3))
    for _ in range(n_random):
        triangles.append(
            tuple(
                random_element_by_length(spec, rng, max_syllables, max_syllable_len)
                for _ in range(3)
            )
        )
    return triangles


def thinness_scan(spec: GroupSpec, backend, k: int, triangles) -> ThinnessReport:
    report = ThinnessReport(group=spec.name or repr(spec), k=k)
    nbhd = list(ball(spec, k)) if spec.peripheral_indices else [()]
    for tri in triangles:
        x, y, z = tri
        try:
            sides = [
                backend.geodesic(x, y).vertices,
                backend.geodesic(y, z).vertices,
                backend.geodesic(z, x).vertices,
            ]
            depth = _penetration(spec, backend, sides, k, nbhd)
            delta = _thinness(backend, sides)
        except OutOfRangeError:
            report.skipped += 1
            continue
        perimeter = sum(len(s) - 1 for s in sides)
        report.rows.append(ThinnessRow(tri, depth, delta, perimeter))
    report.flagged = _flag_families(report.rows)
    return report


def _penetration(spec, backend, sides, k, nbhd) -> int:
    """Max over sides and nearby cosets of diam(N_k(P) intersect side)."""
    candidates: dict = {}
    for side in sides:
        for v in side:
            for g in nbhd:
                w = mul(spec, v, g)
                for i in spec.peripheral_indices:
                    candidates.setdefault(coset_of(spec, w, i), None)
    depth = 0
    for P in candidates:
        for side in sides:
            inside = [v for v in side if dist_to_coset(spec, backend, P, v) <= k]
            if len(inside) < 2:
                continue
            diam = max(
                backend.distance(a, b) for a, b in combinations(inside, 2)
            )
            depth = max(depth, diam)
    return depth


def _thinness(backend, sides) -> int:
    delta = 0
    for s in range(3):
        others = sides[(s + 1) % 3] + sides[(s + 2) % 3]
        for v in sides[s]:
            nearest = min(backend.distance(v, w) for w in others)
            delta = max(delta, nearest)
    return delta


def _flag_families(rows) -> list:
    """Flag penetration bins whose thinness scales with triangle size.

    Within each D bin (>= 6 triangles), if the larger-perimeter half admits a
    delta exceeding the smaller half's worst by more than 2, bounded
    penetration is failing to bound thinness: report the bin.
    """
    bins: dict = {}
    for row in rows:
        bins.setdefault(row.depth, []).append(row)
    flagged = []
    for depth, members in sorted(bins.items()):
        if len(members) < 6:
            continue
        members = sorted(members, key=lambda r: r.perimeter)
        half = len(members) // 2
        low = max(r.delta for r in members[:half])
        high = max(r.delta for r in members[half:])
        if high > low + 2:
            flagged.append(
                {
                    "depth": depth,
                    "small_delta": low,
                    "large_delta": high,
                    "count": len(members),
                }
            )
    return flagged
