"""Exact validation and certification of substitution tilings.

Rule validation (area + edge cancellation), substitution matrix analysis,
orientation censuses, dense-orientation certificates, the full-edge-to-
full-edge meeting condition, patch symmetry, and interior disjointness.
Every verdict is decided in exact arithmetic; floats only accelerate
candidate filtering where a miss is impossible.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Optional, Sequence

from .cyclotomic import (
    CycRat,
    RealCyc,
    integer,
    is_root_of_unity,
    real_cmp,
    real_sign,
    to_complex,
    zeta,
)
from .engine import (
    Isometry,
    Patch,
    PlacedTile,
    Prototile,
    TilingSpec,
    cross_sign,
    im_sign,
    polygon_area_marker,
    supertile,
)


# -- rule validation ----------------------------------------------------------

@dataclass
class ValidationReport:
    prototile: str
    area_ok: bool = True
    edges_ok: bool = True
    field_ok: bool = True
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.area_ok and self.edges_ok and self.field_ok


def _edge_key(a: CycRat, b: CycRat) -> tuple:
    return (a.key(), b.key())


def _refine_edges(
    edges: list[tuple[CycRat, CycRat]], points: dict[tuple, CycRat]
) -> Counter:
    """Split directed edges at every known collinear interior point."""
    out: Counter = Counter()
    for a, b in edges:
        d = b - a
        dc = d.conj()
        len2 = RealCyc(dc * d)
        interior = []
        for p in points.values():
            if p == a or p == b:
                continue
            w = p - a
            if not (dc * w - d * w.conj()).is_zero():
                continue  # not collinear
            t = RealCyc(dc * w + d * w.conj())  # 2 * <d, w>
            if real_sign(t) <= 0:
                continue
            if real_cmp(t, RealCyc(len2.value.scale(2))) >= 0:
                continue
            interior.append((t, p))
        interior.sort(key=cmp_to_key(lambda x, y: real_cmp(x[0], y[0])))
        chain = [a] + [p for _, p in interior] + [b]
        for s, e in zip(chain, chain[1:]):
            out[_edge_key(s, e)] += 1
    return out


def validate_rule(spec: TilingSpec, prototile_id: str) -> ValidationReport:
    """Exact area identity plus edge cancellation for one dissection rule."""
    report = ValidationReport(prototile=prototile_id)
    proto = spec.prototiles.get(prototile_id)
    if proto is None:
        report.errors.append(f"unknown prototile {prototile_id!r}")
        report.field_ok = False
        return report
    rule = spec.rules.get(prototile_id)
    if rule is None:
        report.errors.append(f"no rule for prototile {prototile_id!r}")
        report.field_ok = False
        return report

    parent_vertices = [spec.eta * v for v in proto.vertices]
    child_vertex_lists = []
    for pl in rule:
        child = spec.prototiles[pl.child]
        verts = [pl.iso.apply(v) for v in child.vertices]
        if pl.iso.reflect:
            verts.reverse()  # restore counterclockwise traversal
        child_vertex_lists.append(verts)

    # (a) exact area identity
    parent_marker = polygon_area_marker(parent_vertices)
    total = integer(spec.n, 0)
    for verts in child_vertex_lists:
        m = polygon_area_marker(verts)
        s = im_sign(m)
        if s == 0:
            report.errors.append("degenerate child polygon")
            report.area_ok = False
            return report
        total = total + (m if s > 0 else -m)
    if total != parent_marker:
        report.area_ok = False
        report.errors.append(
            "child areas do not sum to |eta|^2 times the parent area"
        )

    # (b) exact edge cancellation, after refinement at all shared points
    points: dict[tuple, CycRat] = {}
    for verts in child_vertex_lists + [parent_vertices]:
        for v in verts:
            points.setdefault(v.key(), v)

    child_edges = []
    for verts in child_vertex_lists:
        k = len(verts)
        for i in range(k):
            child_edges.append((verts[i], verts[(i + 1) % k]))
    parent_edges = [
        (parent_vertices[i], parent_vertices[(i + 1) % len(parent_vertices)])
        for i in range(len(parent_vertices))
    ]

    refined_children = _refine_edges(child_edges, points)
    refined_parent = _refine_edges(parent_edges, points)

    # signed count per undirected segment: forward minus reverse; interior
    # edges shared by two children cancel, the net must match the boundary
    signed: dict[tuple, int] = defaultdict(int)
    for (ka, kb), cnt in refined_children.items():
        if ka <= kb:
            signed[(ka, kb)] += cnt
        else:
            signed[(kb, ka)] -= cnt
    expected: dict[tuple, int] = defaultdict(int)
    for (ka, kb), cnt in refined_parent.items():
        if ka <= kb:
            expected[(ka, kb)] += cnt
        else:
            expected[(kb, ka)] -= cnt
    keys = set(signed) | set(expected)
    for key in keys:
        if signed.get(key, 0) != expected.get(key, 0):
            report.edges_ok = False
            a, b = key
            report.errors.append(
                f"edge mismatch on segment {a} -> {b}: "
                f"children give {signed.get(key, 0)}, boundary needs {expected.get(key, 0)}"
            )

    # (c) coordinates lie in the field by construction; confirm integrality
    # of the rule data is not required (Q(zeta) membership suffices)
    return report


def validate_spec(spec: TilingSpec) -> list[ValidationReport]:
    spec.validate_geometry()
    return [validate_rule(spec, pid) for pid in spec.prototile_ids()]


# -- substitution matrix ------------------------------------------------------

def substitution_matrix(spec: TilingSpec) -> list[list[int]]:
    """M[x][y] = count of prototile x in the rule of prototile y."""
    ids = spec.prototile_ids()
    index = {pid: i for i, pid in enumerate(ids)}
    mat = [[0] * len(ids) for _ in ids]
    for pid in ids:
        for pl in spec.rules.get(pid, []):
            mat[index[pl.child]][index[pid]] += 1
    return mat


def is_primitive(mat: Sequence[Sequence[int]]) -> bool:
    """Wielandt bound: M^m entrywise positive for some m <= (l-1)^2 + 1."""
    l = len(mat)
    if l == 0:
        return False
    cur = [[bool(x) for x in row] for row in mat]
    base = [row[:] for row in cur]
    limit = (l - 1) ** 2 + 1
    for _ in range(limit):
        if all(all(row) for row in cur):
            return True
        cur = [
            [any(cur[i][k] and base[k][j] for k in range(l)) for j in range(l)]
            for i in range(l)
        ]
    return all(all(row) for row in cur)


def pf_eigenvalue(mat: Sequence[Sequence[int]], residual: float = 1e-12) -> float:
    """Dominant eigenvalue by power iteration to the requested residual."""
    l = len(mat)
    vec = [1.0] * l
    lam = 0.0
    for _ in range(100000):
        nxt = [sum(mat[i][j] * vec[j] for j in range(l)) for i in range(l)]
        norm = max(abs(x) for x in nxt)
        if norm == 0:
            return 0.0
        nxt = [x / norm for x in nxt]
        lam = norm
        err = max(
            abs(sum(mat[i][j] * nxt[j] for j in range(l)) - lam * nxt[i])
            for i in range(l)
        )
        vec = nxt
        if err <= residual * max(1.0, lam):
            return lam
    return lam


# -- congruence and orientation ----------------------------------------------

def congruent(spec: TilingSpec, a: PlacedTile, b: PlacedTile) -> Optional[Isometry]:
    """Isometry mapping tile a onto tile b, when they share a prototile."""
    if a.prototile != b.prototile:
        return None
    return b.iso.compose(a.iso.inverse())


def dto_certificate(patch: Patch, spec: TilingSpec) -> Optional[tuple[int, int, CycRat]]:
    """First pair of same-prototile, same-chirality tiles whose relative
    rotation is exactly not a root of unity."""
    seen: dict[tuple, list[tuple[tuple, CycRat, int]]] = defaultdict(list)
    for idx, tile in enumerate(patch.tiles):
        group = (tile.prototile, tile.iso.reflect)
        ukey = tile.iso.u.key()
        bucket = seen[group]
        known = False
        for okey, ou, oidx in bucket:
            if okey == ukey:
                known = True
                continue
            rel = tile.iso.u * ou.conj()
            if is_root_of_unity(rel) is None:
                return (oidx, idx, rel)
        if not known:
            bucket.append((ukey, tile.iso.u, idx))
    return None


@dataclass
class OrientationCensus:
    count: int
    min_gap: float
    histogram: list[dict]

    def to_json(self) -> dict:
        return {
            "distinct_orientations": self.count,
            "min_circular_gap": self.min_gap,
            "histogram": self.histogram,
        }


def orientation_census(patch: Patch, spec: TilingSpec) -> OrientationCensus:
    counts: Counter = Counter()
    values: dict[tuple, CycRat] = {}
    for tile in patch.tiles:
        key = (tile.iso.reflect, tile.iso.u.key())
        counts[key] += 1
        values.setdefault(key, tile.iso.u)
    angles = []
    hist = []
    for key, cnt in sorted(counts.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        u = values[key]
        re, im, _ = to_complex(u, 1e-12)
        ang = math.atan2(im, re) % (2 * math.pi)
        angles.append(ang)
        hist.append(
            {
                "reflect": key[0],
                "angle": ang,
                "count": cnt,
            }
        )
    angles = sorted(set(angles))
    if len(angles) < 2:
        gap = 2 * math.pi
    else:
        gap = min(
            (b - a) for a, b in zip(angles, angles[1:])
        )
        gap = min(gap, 2 * math.pi - (angles[-1] - angles[0]))
    return OrientationCensus(count=len(counts), min_gap=gap, histogram=hist)


# -- full-edge-to-full-edge ---------------------------------------------------

@dataclass
class FlcReport:
    ok: bool
    violations: list[dict] = field(default_factory=list)


def flc_check(patch: Patch, spec: TilingSpec) -> FlcReport:
    """Every positive-length contact between two tile boundaries must be a
    shared full edge of both tiles (pseudo-vertex refined)."""
    edges = []  # (tile_index, a, b, float bbox)
    for idx, tile in enumerate(patch.tiles):
        verts = spec.tile_vertices(tile)
        k = len(verts)
        floats = [v.complex_approx() for v in verts]
        for i in range(k):
            a, b = verts[i], verts[(i + 1) % k]
            fa, fb = floats[i], floats[(i + 1) % k]
            bbox = (
                min(fa.real, fb.real) - 1e-9,
                min(fa.imag, fb.imag) - 1e-9,
                max(fa.real, fb.real) + 1e-9,
                max(fa.imag, fb.imag) + 1e-9,
            )
            edges.append((idx, a, b, bbox))

    # spatial hash on bbox cells
    cell = max(
        max(b[2] - b[0], b[3] - b[1]) for b in (e[3] for e in edges)
    ) + 1e-6
    grid: dict[tuple[int, int], list[int]] = defaultdict(list)
    for ei, (_, _, _, bbox) in enumerate(edges):
        x0, y0, x1, y1 = bbox
        for gx in range(int(x0 // cell), int(x1 // cell) + 1):
            for gy in range(int(y0 // cell), int(y1 // cell) + 1):
                grid[(gx, gy)].append(ei)

    checked = set()
    violations = []
    for bucket in grid.values():
        for ii in range(len(bucket)):
            for jj in range(ii + 1, len(bucket)):
                e1, e2 = bucket[ii], bucket[jj]
                if e1 > e2:
                    e1, e2 = e2, e1
                if (e1, e2) in checked:
                    continue
                checked.add((e1, e2))
                t1, a1, b1, bb1 = edges[e1]
                t2, a2, b2, bb2 = edges[e2]
                if t1 == t2:
                    continue
                if bb1[0] > bb2[2] or bb2[0] > bb1[2] or bb1[1] > bb2[3] or bb2[1] > bb1[3]:
                    continue
                if _overlap_not_full_edge(a1, b1, a2, b2):
                    violations.append(
                        {
                            "tiles": [t1, t2],
                            "edge_a": [str(a1), str(b1)],
                            "edge_b": [str(a2), str(b2)],
                        }
                    )
    return FlcReport(ok=not violations, violations=violations)


def _overlap_not_full_edge(a1, b1, a2, b2) -> bool:
    """True iff the two segments overlap with positive length but are not
    the same segment."""
    if {a1.key(), b1.key()} == {a2.key(), b2.key()}:
        return False
    d = b1 - a1
    dc = d.conj()
    # parallel and collinear?
    w = a2 - a1
    if not (dc * (b2 - a2) - d * (b2 - a2).conj()).is_zero():
        return False
    if not (dc * w - d * w.conj()).is_zero():
        return False
    # 1-d overlap test along d: parameters doubled (2*<d, x-a1>)
    def param(p):
        x = p - a1
        return RealCyc(dc * x + d * x.conj())

    s2a, s2b = param(a2), param(b2)
    lo2, hi2 = (s2a, s2b) if real_cmp(s2a, s2b) <= 0 else (s2b, s2a)
    zero = RealCyc(integer(a1.n, 0))
    len1 = param(b1)
    lo = lo2 if real_cmp(lo2, zero) > 0 else zero
    hi = hi2 if real_cmp(hi2, len1) < 0 else len1
    return real_cmp(lo, hi) < 0


# -- interior disjointness ----------------------------------------------------

def point_in_polygon(p: CycRat, verts: Sequence[CycRat]) -> int:
    """1 strictly inside, 0 on boundary, -1 strictly outside. Exact."""
    k = len(verts)
    winding = 0
    for i in range(k):
        a, b = verts[i], verts[(i + 1) % k]
        if _on_segment(p, a, b):
            return 0
        ya = im_sign(a - p)
        yb = im_sign(b - p)
        if ya <= 0 < yb:
            if cross_sign(a, b, p) > 0:
                winding += 1
        elif yb <= 0 < ya:
            if cross_sign(a, b, p) < 0:
                winding -= 1
    return 1 if winding != 0 else -1


def _on_segment(p: CycRat, a: CycRat, b: CycRat) -> bool:
    if cross_sign(a, b, p) != 0:
        return False
    d = b - a
    dc = d.conj()
    w = p - a
    t = RealCyc(dc * w + d * w.conj())
    if real_sign(t) < 0:
        return False
    len2_doubled = RealCyc((dc * d).scale(2))
    return real_cmp(t, len2_doubled) <= 0


def interior_point(verts: Sequence[CycRat]) -> CycRat:
    """A point strictly inside a simple polygon (ear centroid)."""
    k = len(verts)
    if k == 3:
        return (verts[0] + verts[1] + verts[2]).divide_int(3)
    if im_sign(polygon_area_marker(verts)) < 0:
        verts = list(reversed(verts))
    for i in range(k):
        a, b, c = verts[(i - 1) % k], verts[i], verts[(i + 1) % k]
        if cross_sign(a, b, c) <= 0:
            continue
        centroid = (a + b + c).divide_int(3)
        # the ear triangle must not contain other vertices and the centroid
        # must be interior
        if any(
            point_in_polygon(v, [a, b, c]) >= 0
            for j, v in enumerate(verts)
            if v not in (a, b, c)
        ):
            continue
        if point_in_polygon(centroid, verts) == 1:
            return centroid
    raise ValueError("no valid ear found for interior point")


def tiles_overlap(spec: TilingSpec, t1: PlacedTile, t2: PlacedTile) -> bool:
    """Exact open-interior intersection test for two placed tiles."""
    v1 = spec.tile_vertices(t1)
    v2 = spec.tile_vertices(t2)
    k1, k2 = len(v1), len(v2)
    for i in range(k1):
        a1, b1 = v1[i], v1[(i + 1) % k1]
        for j in range(k2):
            a2, b2 = v2[j], v2[(j + 1) % k2]
            d1 = cross_sign(a1, b1, a2)
            d2 = cross_sign(a1, b1, b2)
            d3 = cross_sign(a2, b2, a1)
            d4 = cross_sign(a2, b2, b1)
            if d1 * d2 < 0 and d3 * d4 < 0:
                return True
    for p in v1:
        if point_in_polygon(p, v2) == 1:
            return True
    for p in v2:
        if point_in_polygon(p, v1) == 1:
            return True
    if point_in_polygon(interior_point(v1), v2) >= 0:
        return True
    if point_in_polygon(interior_point(v2), v1) >= 0:
        return True
    return False


def check_no_overlap(patch: Patch, spec: TilingSpec, probes: int = 0) -> list[tuple[int, int]]:
    """All overlapping tile index pairs (bbox-prefiltered exact test)."""
    boxes = []
    for tile in patch.tiles:
        pts = [v.complex_approx() for v in spec.tile_vertices(tile)]
        boxes.append(
            (
                min(p.real for p in pts) - 1e-9,
                min(p.imag for p in pts) - 1e-9,
                max(p.real for p in pts) + 1e-9,
                max(p.imag for p in pts) + 1e-9,
            )
        )
    cell = max(max(b[2] - b[0], b[3] - b[1]) for b in boxes) + 1e-6
    grid: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, b in enumerate(boxes):
        for gx in range(int(b[0] // cell), int(b[2] // cell) + 1):
            for gy in range(int(b[1] // cell), int(b[3] // cell) + 1):
                grid[(gx, gy)].append(i)
    bad = []
    seen = set()
    for bucket in grid.values():
        for ii in range(len(bucket)):
            for jj in range(ii + 1, len(bucket)):
                i, j = min(bucket[ii], bucket[jj]), max(bucket[ii], bucket[jj])
                if (i, j) in seen:
                    continue
                seen.add((i, j))
                b1, b2 = boxes[i], boxes[j]
                if b1[0] > b2[2] or b2[0] > b1[2] or b1[1] > b2[3] or b2[1] > b1[3]:
                    continue
                if tiles_overlap(spec, patch.tiles[i], patch.tiles[j]):
                    bad.append((i, j))
    return bad


# -- patch symmetry -----------------------------------------------------------

def _canonical_tile_key(spec: TilingSpec, tile: PlacedTile) -> tuple:
    proto = spec.prototiles[tile.prototile]
    best = None
    for sym in proto.symmetries:
        cand = (tile.prototile,) + tile.iso.compose(sym).key()
        if best is None or cand < best:
            best = cand
    return best


def _patch_key_multiset(spec: TilingSpec, tiles: list[PlacedTile]) -> Counter:
    return Counter(_canonical_tile_key(spec, t) for t in tiles)


def symmetry_order(patch: Patch, spec: TilingSpec, center: CycRat) -> tuple[int, bool]:
    """Largest cyclic rotation order about center (divisors of 2n), plus a
    dihedral flag for an exact mirror symmetry."""
    n = spec.n
    base = _patch_key_multiset(spec, patch.tiles)

    def maps_to_self(iso: Isometry) -> bool:
        moved = [PlacedTile(t.prototile, iso.compose(t.iso)) for t in patch.tiles]
        return _patch_key_multiset(spec, moved) == base

    order = 1
    for m in sorted(_divisors(2 * n), reverse=True):
        if m == 1:
            break
        rot = Isometry.rotation(zeta(n, (2 * n) // m), center)
        if maps_to_self(rot):
            order = m
            break
    dihedral = False
    for j in range(2 * n):
        refl = Isometry.reflection(zeta(n, j), center)
        if maps_to_self(refl):
            dihedral = True
            break
    return order, dihedral


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


# -- field membership ---------------------------------------------------------

def verify_field_membership(patch: Patch, spec: TilingSpec) -> tuple[bool, int]:
    """Coordinates are field elements by construction; returns the least
    common denominator D with D * patch in Z[zeta_2n]."""
    lcd = 1
    for tile in patch.tiles:
        for v in spec.tile_vertices(tile):
            lcd = lcd * v.den // math.gcd(lcd, v.den)
    for tile in patch.tiles:
        for v in spec.tile_vertices(tile):
            if not v.scale(lcd).is_integral():
                return False, lcd
    return True, lcd
