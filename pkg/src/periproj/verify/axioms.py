"""Measurement of the almost-projection axioms on finite samples.

For a sample ball of group elements and every peripheral coset meeting a
coset ball, the checker computes the minimal integer constants making each
axiom hold on the sample:

* nearest-point slack (ap1): d(x, p) >= d(x, pi(x)) + d(pi(x), p) - C over
  sampled coset points p;
* locally-constant projections (ap2): diam pi(B_d(x)) <= C where d = d(x, P),
  the ball restricted to the sample;
* bounded cross-projections (ap3): diam pi_P(Q) <= C for distinct cosets,
  with the image cardinality reported alongside;
* the primed forms (ap1p, ap2p): projection distance vs. true coset distance,
  and the through-the-coset lower bound for pairs whose projections differ by
  more than C (strict trigger, so C = 0 reduces to the exact property).

All constants are certified minima over the examined configurations, with
witnesses; uncertifiable configurations are skipped and counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import OutOfRangeError
from ..group import GroupSpec, ball, element_str, inv, mul, syllable_length
from ..peripheral import (
    Coset,
    _bfs_coset_minimizers,
    _exact_coset_minimizers,
    coset_member,
    coset_str,
    cosets_meeting_ball,
    projection,
)


@dataclass
class ApReport:
    group: str
    sample_radius: int
    coset_radius: int
    constants: dict
    ap3_image_max: int
    witnesses: dict
    examined: dict
    skipped: int
    equivalence: dict = field(default_factory=dict)

    @property
    def projection_constant(self) -> int:
        """The single C making ap1/ap2/ap1p/ap2p hold on the sample."""
        return max(
            self.constants[k] for k in ("ap1", "ap2", "ap1p", "ap2p")
        )


def _coset_points(spec: GroupSpec, backend, P: Coset, level_cap: int):
    """Sampled points of P: factor levels up to ``level_cap`` in exact mode,
    all window members in BFS mode."""
    if backend.is_exact:
        f = spec.factors[P.factor_index]
        pts = []
        for level in range(level_cap + 1):
            pts.extend(coset_member(spec, P, h) for h in f.elements_of_length(level))
        return pts
    out = []
    for g in backend.table:
        if g and g[-1][0] == P.factor_index:
            if g[:-1] == P.rep:
                out.append(g)
        elif g == P.rep:
            out.append(g)
    return out


def _coset_distance(spec: GroupSpec, backend, P: Coset, x) -> int:
    """Certified d(x, P) by explicit minimization (never the gate formula)."""
    if backend.is_exact:
        m, _ = _exact_coset_minimizers(spec, P, x)
        return m
    m, _ = _bfs_coset_minimizers(spec, backend, P, x, backend.radius + 1)
    return m


def check_ap_axioms(
    spec: GroupSpec, backend, sample_radius: int, coset_radius: int
) -> ApReport:
    xs = list(ball(spec, sample_radius))
    cosets = cosets_meeting_ball(spec, ball(spec, coset_radius))
    n = len(xs)
    level_cap = max(sample_radius, coset_radius)

    skipped = 0
    examined = {k: 0 for k in ("ap1", "ap2", "ap3", "ap1p", "ap2p")}
    constants = {k: 0 for k in examined}
    witnesses: dict = {}

    # pairwise sample distances (-1 where the backend cannot certify)
    dmat = np.full((n, n), -1, dtype=np.int32)
    for i, x in enumerate(xs):
        xi = inv(spec, x)
        row = dmat[i]
        if backend.is_exact:
            for j, y in enumerate(xs):
                row[j] = syllable_length(spec, mul(spec, xi, y))
        else:
            table = backend.table
            for j, y in enumerate(xs):
                d = table.get(mul(spec, xi, y))
                if d is None:
                    skipped += 1
                else:
                    row[j] = d

    for P in cosets:
        pts = _coset_points(spec, backend, P, level_cap)
        # canonical projection of every sample point, None when uncertifiable
        proj_pts: list = []
        for x in xs:
            try:
                proj_pts.append(projection(spec, backend, P, x))
            except OutOfRangeError:
                proj_pts.append(None)
                skipped += 1

        # certified d(x, P) and d(x, pi(x))
        dP = np.full(n, -1, dtype=np.int32)
        dxpi = np.full(n, -1, dtype=np.int32)
        for i, x in enumerate(xs):
            if proj_pts[i] is None:
                continue
            try:
                dP[i] = _coset_distance(spec, backend, P, x)
                dxpi[i] = backend.distance(x, proj_pts[i])
            except OutOfRangeError:
                proj_pts[i] = None
                skipped += 1

        # compress projection points to ids with a pairwise distance table
        uniq: dict = {}
        for p in proj_pts:
            if p is not None and p not in uniq:
                uniq[p] = len(uniq)
        pid = np.array(
            [uniq[p] if p is not None else -1 for p in proj_pts], dtype=np.int32
        )
        k = len(uniq)
        upts = list(uniq)
        pdist = np.full((k, k), -1, dtype=np.int32)
        for a in range(k):
            pdist[a, a] = 0
            for b in range(a + 1, k):
                try:
                    pdist[a, b] = pdist[b, a] = backend.distance(upts[a], upts[b])
                except OutOfRangeError:
                    skipped += 1

        _ap1(spec, backend, P, xs, proj_pts, dxpi, pts, constants, witnesses, examined)
        _ap2(spec, P, xs, pid, pdist, dmat, dP, constants, witnesses, examined)
        _ap1p(spec, P, xs, proj_pts, dxpi, dP, constants, witnesses, examined)
        _ap2p(spec, P, xs, pid, pdist, dmat, dxpi, constants, witnesses, examined)

    ap3_image_max, ap3_skipped = _ap3(
        spec, backend, cosets, level_cap, constants, witnesses, examined
    )
    skipped += ap3_skipped

    report = ApReport(
        group=spec.name or repr(spec),
        sample_radius=sample_radius,
        coset_radius=coset_radius,
        constants=constants,
        ap3_image_max=ap3_image_max,
        witnesses=witnesses,
        examined=examined,
        skipped=skipped,
    )
    _equivalence(report)
    return report


def _ap1(spec, backend, P, xs, proj_pts, dxpi, pts, constants, witnesses, examined):
    best = constants["ap1"]
    for i, x in enumerate(xs):
        pi = proj_pts[i]
        if pi is None:
            continue
        base = int(dxpi[i])
        for p in pts:
            try:
                d_pip = backend.distance(pi, p)
                d_xp = backend.distance(x, p)
            except OutOfRangeError:
                continue
            examined["ap1"] += 1
            slack = base + d_pip - d_xp
            if slack > best:
                best = slack
                witnesses["ap1"] = {
                    "x": element_str(spec, x),
                    "p": element_str(spec, p),
                    "coset": coset_str(spec, P),
                    "slack": slack,
                }
    constants["ap1"] = best


def _ap2(spec, P, xs, pid, pdist, dmat, dP, constants, witnesses, examined):
    n = len(xs)
    best = constants["ap2"]
    for i in range(n):
        if pid[i] < 0 or dP[i] < 0:
            continue
        sel = (dmat[i] >= 0) & (dmat[i] <= dP[i]) & (pid >= 0)
        ids = np.unique(pid[sel])
        examined["ap2"] += int(sel.sum())
        if len(ids) < 2:
            continue
        sub = pdist[np.ix_(ids, ids)]
        known = sub[sub >= 0]
        if not known.size:
            continue
        diam = int(known.max())
        if diam > best:
            best = diam
            witnesses["ap2"] = {
                "x": element_str(spec, xs[i]),
                "coset": coset_str(spec, P),
                "diam": diam,
            }
    constants["ap2"] = best


def _ap3(spec, backend, cosets, level_cap, constants, witnesses, examined):
    best = constants["ap3"]
    image_max = 0
    skipped = 0
    for P in cosets:
        for Q in cosets:
            if P == Q:
                continue
            image: dict = {}
            for q in _coset_points(spec, backend, Q, level_cap):
                try:
                    image.setdefault(projection(spec, backend, P, q), None)
                except OutOfRangeError:
                    skipped += 1
                    continue
                examined["ap3"] += 1
            pts = list(image)
            image_max = max(image_max, len(pts))
            for a in range(len(pts)):
                for b in range(a + 1, len(pts)):
                    try:
                        d = backend.distance(pts[a], pts[b])
                    except OutOfRangeError:
                        skipped += 1
                        continue
                    if d > best:
                        best = d
                        witnesses["ap3"] = {
                            "P": coset_str(spec, P),
                            "Q": coset_str(spec, Q),
                            "diam": d,
                        }
    constants["ap3"] = best
    return image_max, skipped


def _ap1p(spec, P, xs, proj_pts, dxpi, dP, constants, witnesses, examined):
    best = constants["ap1p"]
    for i, x in enumerate(xs):
        if proj_pts[i] is None or dP[i] < 0:
            continue
        examined["ap1p"] += 1
        slack = int(dxpi[i]) - int(dP[i])
        if slack > best:
            best = slack
            witnesses["ap1p"] = {
                "x": element_str(spec, x),
                "coset": coset_str(spec, P),
                "slack": slack,
            }
    constants["ap1p"] = best


def _ap2p(spec, P, xs, pid, pdist, dmat, dxpi, constants, witnesses, examined):
    """Minimal C with: d(pi(x1), pi(x2)) > C implies the through-coset bound
    with slack C.  Per pair the constraint is C >= min(gap, slack), so the
    minimum over the sample is the max of that expression."""
    n = len(xs)
    best = constants["ap2p"]
    valid = (pid >= 0) & (dxpi >= 0)
    idx = np.nonzero(valid)[0]
    if len(idx) < 2:
        return
    gaps = pdist[pid[idx][:, None], pid[idx][None, :]]
    dd = dmat[np.ix_(idx, idx)]
    sl = dxpi[idx][:, None] + gaps + dxpi[idx][None, :] - dd
    ok = (dd >= 0) & (gaps >= 0)
    examined["ap2p"] += int(ok.sum())
    need = np.minimum(gaps, sl)
    need[~ok] = -1
    worst = int(need.max()) if need.size else 0
    if worst > best:
        best = worst
        a, b = np.unravel_index(int(need.argmax()), need.shape)
        witnesses["ap2p"] = {
            "x1": element_str(spec, xs[idx[a]]),
            "x2": element_str(spec, xs[idx[b]]),
            "coset": coset_str(spec, P),
            "gap": int(gaps[a, b]),
            "slack": int(sl[a, b]),
        }
    constants["ap2p"] = best


def _equivalence(report: ApReport) -> None:
    """Track how the measured unprimed and primed constants bound each other
    (the two implications are theorems; the arithmetic is recorded, not
    asserted, because the implied witnesses may fall outside the sample)."""
    c = report.constants
    cp = max(c["ap1p"], c["ap2p"])
    cu = max(c["ap1"], c["ap2"])
    report.equivalence = {
        "ap1_le_2cp+1": (c["ap1"], 2 * cp + 1, c["ap1"] <= 2 * cp + 1),
        "ap2_le_4cp+2": (c["ap2"], 4 * cp + 2, c["ap2"] <= 4 * cp + 2),
        "ap1p_le_ap1": (c["ap1p"], c["ap1"], c["ap1p"] <= c["ap1"]),
        "ap2p_le_40cu+1": (c["ap2p"], 40 * cu + 1, c["ap2p"] <= 40 * cu + 1),
    }
