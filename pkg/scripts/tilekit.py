"""Construction kit for exact substitution rules.

Provides the standard prototile shapes (baseline tiles, diagonal triangles,
rhombs), placement solvers for covering inflated edges with baseline tiles,
and a grid-witnessed exact-cover search that fills leftover regions from a
tile library.  Everything found here is re-verified by the exact validator;
floats only steer the search.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cast_forge.cyclotomic import CycRat, canonicalize, integer, zeta
from cast_forge.engine import Isometry, Placement, Prototile, TilingSpec


def unit_steps_polygon(n: int, exponents: Sequence[int]) -> list[CycRat]:
    """Walk the given unit steps from 0; returns all intermediate points."""
    pts = [integer(n, 0)]
    for k in exponents:
        pts.append(pts[-1] + zeta(n, k))
    return pts


def sort_steps_for_convex_walk(n: int, exponents: Sequence[int]) -> list[int]:
    """Order steps by decreasing direction angle (ccw boundary with the
    closing baseline below)."""
    def ang(k):
        a = (k % (2 * n)) * math.pi / n
        return a if a <= math.pi else a - 2 * math.pi

    return sorted(exponents, key=ang, reverse=True)


def auto_pseudo(verts: Sequence[CycRat]) -> list[bool]:
    """Flag every collinear vertex as a pseudo-vertex."""
    from cast_forge.engine import cross_sign

    k = len(verts)
    return [
        cross_sign(verts[(i - 1) % k], verts[i], verts[(i + 1) % k]) == 0
        for i in range(k)
    ]


def baseline_tile(n: int, eta_conj_steps: Sequence[int], tile_id: str,
                  color: Optional[str] = None,
                  order: Optional[Sequence[int]] = None) -> Prototile:
    """Polygon of unit steps summing to a conj(eta)-like value, closed by the
    straight baseline; counterclockwise with the baseline as edge 0.
    Interior points of repeated collinear steps become pseudo-vertices."""
    steps = list(order) if order is not None else sort_steps_for_convex_walk(
        n, eta_conj_steps)
    pts = unit_steps_polygon(n, steps)
    verts = [pts[0]] + pts[1:][::-1]
    proto = Prototile(id=tile_id, vertices=verts, pseudo=auto_pseudo(verts),
                      ref_edge=0, color=color)
    proto.validate()
    return proto


def walk_orders(n: int, steps: Sequence[int]) -> list[list[int]]:
    """All orderings of the step multiset whose walk stays strictly above the
    chord (valid baseline-tile shapes), deduplicated."""
    import itertools as _it

    total = unit_steps_polygon(n, steps)[-1]
    tf = total.complex_approx()
    out = []
    seen = set()
    for perm in set(_it.permutations(steps)):
        pts = unit_steps_polygon(n, list(perm))
        ok = True
        # every interior walk point strictly above the chord 0 -> total
        for p in pts[1:-1]:
            pf = p.complex_approx()
            cross = tf.real * pf.imag - tf.imag * pf.real
            if cross < 1e-9:  # walk must stay strictly left of the chord
                ok = False
                break
        if not ok:
            continue
        try:
            proto = baseline_tile(n, steps, "tmp", order=list(perm))
        except ValueError:
            continue
        key = tuple(v.key() for v in proto.vertices)
        if key in seen:
            continue
        seen.add(key)
        out.append(list(perm))
    return out


def end_angles(n: int, order: Sequence[int], steps_sum=None) -> tuple[float, float]:
    """Interior angles of the baseline tile at the two baseline endpoints
    (start, end), in degrees."""
    import math as _m

    pts = unit_steps_polygon(n, list(order))
    total = pts[-1].complex_approx()
    chord = _m.degrees(_m.atan2(total.imag, total.real))
    first = _m.degrees(order[0] * _m.pi / n)
    last = _m.degrees(order[-1] * _m.pi / n)

    def norm(a):
        while a <= -180:
            a += 360
        while a > 180:
            a -= 360
        return a

    a0 = norm(first - chord)
    a1 = norm(chord - last)
    return a0, a1


def rhomb_tile(n: int, c: int, tile_id: str, color: Optional[str] = None) -> Prototile:
    one = integer(n, 1)
    z = zeta(n, c)
    return Prototile(id=tile_id, vertices=[integer(n, 0), one, one + z, z],
                     pseudo=[False] * 4, ref_edge=0, color=color)


def iso_triangle_tile(n: int, c: int, tile_id: str, color: Optional[str] = None) -> Prototile:
    """Triangle 0, 1, 1+zeta^c: unit legs, base |1+zeta^c| (= mu(n, (c? )) )."""
    one = integer(n, 1)
    return Prototile(id=tile_id, vertices=[integer(n, 0), one, one + zeta(n, c)],
                     pseudo=[False] * 3, ref_edge=0, color=color)


def polygon_floats(verts: Sequence[CycRat]) -> list[complex]:
    return [v.complex_approx() for v in verts]


def point_in_poly_f(p: complex, poly: Sequence[complex], eps: float = 1e-9) -> bool:
    """Float point-in-(closed)-polygon, tolerant on the boundary."""
    inside = False
    k = len(poly)
    for i in range(k):
        a, b = poly[i], poly[(i + 1) % k]
        # on segment?
        d = b - a
        ln2 = (d.real * d.real + d.imag * d.imag)
        if ln2 > 0:
            t = ((p - a).real * d.real + (p - a).imag * d.imag) / ln2
            if -eps < t < 1 + eps:
                proj = a + t * d
                if abs(proj - p) < eps:
                    return True
        if (a.imag > p.imag) != (b.imag > p.imag):
            x = a.real + (p.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
            if x > p.real:
                inside = not inside
    return inside


def point_strictly_in_poly_f(p: complex, poly: Sequence[complex], eps: float = 1e-9) -> bool:
    k = len(poly)
    for i in range(k):
        a, b = poly[i], poly[(i + 1) % k]
        d = b - a
        ln2 = d.real * d.real + d.imag * d.imag
        if ln2 > 0:
            t = ((p - a).real * d.real + (p - a).imag * d.imag) / ln2
            t = min(max(t, 0.0), 1.0)
            if abs(a + t * d - p) < eps:
                return False
    return point_in_poly_f(p, poly, eps=0.0)


def solve_segment_placements(
    proto: Prototile,
    edge_index: int,
    a: CycRat,
    b: CycRat,
) -> list[Isometry]:
    """Isometries mapping the prototile's edge (edge_index) exactly onto the
    segment a->b or b->a, in either chirality; caller filters by side."""
    n = a.n
    vs = proto.vertices
    p = vs[edge_index]
    q = vs[(edge_index + 1) % len(vs)]
    out = []
    for (s, t) in ((a, b), (b, a)):
        d_target = t - s
        d_src = q - p
        # direct: u * d_src = d_target
        try:
            u = d_target / d_src
            if (u * u.conj()) == integer(n, 1):
                out.append(Isometry(u, s - u * p, False, _checked=True))
        except ArithmeticError:
            pass
        # reflected: u * conj(d_src) = d_target
        try:
            u = d_target / d_src.conj()
            if (u * u.conj()) == integer(n, 1):
                out.append(Isometry(u, s - u * p.conj(), True, _checked=True))
        except ArithmeticError:
            pass
    return out


def tile_inside_region(
    proto: Prototile, iso: Isometry, region_f: Sequence[complex], eps: float = 1e-7
) -> bool:
    pts = [iso.apply(v).complex_approx() for v in proto.vertices]
    if not all(point_in_poly_f(p, region_f, eps) for p in pts):
        return False
    # also probe edge midpoints and the centroid (concave regions)
    k = len(pts)
    for i in range(k):
        mid = (pts[i] + pts[(i + 1) % k]) / 2
        if not point_in_poly_f(mid, region_f, eps):
            return False
    centroid = sum(pts) / k
    return point_in_poly_f(centroid, region_f, eps)


@dataclass
class FillProblem:
    n: int
    region: list[CycRat]          # simple polygon, ccw
    library: list[Prototile]      # tiles allowed in the fill
    fixed: list[tuple[Prototile, Isometry]]  # already-placed tiles (e.g. baseline hosts)
    resolution: int = 4           # witness grid cells per unit


def _grid_cells(region_f, resolution, offset):
    xs = [p.real for p in region_f]
    ys = [p.imag for p in region_f]
    cells = []
    step = 1.0 / resolution
    x0, x1 = min(xs) - step, max(xs) + step
    y0, y1 = min(ys) - step, max(ys) + step
    gx = int((x1 - x0) / step) + 1
    gy = int((y1 - y0) / step) + 1
    for i in range(gx):
        for j in range(gy):
            p = complex(x0 + i * step + offset.real, y0 + j * step + offset.imag)
            if point_strictly_in_poly_f(p, region_f, eps=1e-9):
                cells.append(p)
    return cells


def solve_fill(problem: FillProblem, max_solutions: int = 50,
               rounds: int = 3, verbose: bool = False,
               orbit: int = 1, orbit_center=None) -> Iterable[list[tuple[Prototile, Isometry]]]:
    """Yield fills of the region (minus fixed tiles) from the library.

    With orbit > 1 every chosen placement is completed to its orbit under
    rotation by zeta^(2n/orbit) about orbit_center (for regions with exact
    cyclic symmetry)."""
    n = problem.n
    region_f = polygon_floats(problem.region)
    offset = complex(0.5 / problem.resolution + 0.0123456789,
                     0.5 / problem.resolution + 0.0078912345)
    cells = _grid_cells(region_f, problem.resolution, offset)

    fixed_polys = [
        [iso.apply(v).complex_approx() for v in proto.vertices]
        for proto, iso in problem.fixed
    ]

    def covered_by_fixed(p):
        return any(point_in_poly_f(p, poly, 1e-9) for poly in fixed_polys)

    open_cells = [p for p in cells if not covered_by_fixed(p)]
    if verbose:
        print(f"  fill: {len(open_cells)} open cells of {len(cells)}")
    index = {i: p for i, p in enumerate(open_cells)}
    all_mask = (1 << len(open_cells)) - 1

    # anchor vertex set: region corners + fixed tile corners, grown by rounds
    anchor: dict[tuple, CycRat] = {}
    for v in problem.region:
        anchor.setdefault(v.key(), v)
    for proto, iso in problem.fixed:
        for v in proto.vertices:
            w = iso.apply(v)
            anchor.setdefault(w.key(), w)

    candidates: dict[tuple, tuple[Prototile, Isometry, int]] = {}

    def add_candidates():
        new_pts = []
        for proto in problem.library:
            # a reflected placement of a mirror-symmetric tile duplicates a
            # direct one; keeping only the direct copy also keeps the fills
            # chirality-clean
            achiral = any(s.reflect for s in proto.symmetries)
            for vi, pv in enumerate(proto.vertices):
                for p in list(anchor.values()):
                    for uk in range(2 * n):
                        for refl in ((False,) if achiral else (False, True)):
                            u = zeta(n, uk)
                            if refl:
                                iso = Isometry(u, p - u * pv.conj(), True, _checked=True)
                            else:
                                iso = Isometry(u, p - u * pv, False, _checked=True)
                            key = (proto.id,) + iso.key()
                            if key in candidates:
                                continue
                            if not tile_inside_region(proto, iso, region_f):
                                continue
                            poly = [iso.apply(v).complex_approx() for v in proto.vertices]
                            mask = 0
                            clash = False
                            for ci, cp in index.items():
                                if point_in_poly_f(cp, poly, 1e-9):
                                    mask |= 1 << ci
                            if mask == 0:
                                continue
                            for fpoly in fixed_polys:
                                # reject candidates straddling fixed tiles
                                c = sum(poly, 0) / len(poly)
                                if point_strictly_in_poly_f(c, fpoly, 1e-9):
                                    clash = True
                                    break
                            if clash:
                                continue
                            candidates[key] = (proto, iso, mask)
                            for v in proto.vertices:
                                new_pts.append(iso.apply(v))
        for w in new_pts:
            anchor.setdefault(w.key(), w)

    for _ in range(rounds):
        before = len(candidates)
        add_candidates()
        if len(candidates) == before:
            break
    if verbose:
        print(f"  fill: {len(candidates)} candidate placements")

    cand_list = sorted(candidates.values(), key=lambda t: (t[0].id,) + t[1].key())

    if orbit > 1:
        from cast_forge.cyclotomic import zeta as _zeta
        from cast_forge.engine import Isometry as _Iso

        center = orbit_center
        rot = _Iso.rotation(_zeta(n, (2 * n) // orbit), center)
        key_to_idx = {}
        for k, (proto, iso, mask) in enumerate(cand_list):
            key_to_idx[(proto.id,) + iso.key()] = k
        orbit_groups = []
        seen_groups = set()
        for k, (proto, iso, mask) in enumerate(cand_list):
            group = [k]
            cur = iso
            ok = True
            for _ in range(orbit - 1):
                cur = rot.compose(cur)
                idx = key_to_idx.get((proto.id,) + cur.key())
                if idx is None:
                    ok = False
                    break
                group.append(idx)
            if not ok:
                continue
            gkey = tuple(sorted(group))
            if gkey in seen_groups or len(set(group)) != len(group):
                continue
            seen_groups.add(gkey)
            gmask = 0
            clash = False
            for idx in group:
                m = cand_list[idx][2]
                if gmask & m:
                    clash = True
                    break
                gmask |= m
            if not clash:
                orbit_groups.append((group, gmask))
        if verbose:
            print(f"  fill: {len(orbit_groups)} orbit groups")
        sol = []

        def dfs_orbit(covered: int, chosen: list):
            if len(sol) >= max_solutions:
                return
            if covered == all_mask:
                out = []
                for group, _ in chosen:
                    out.extend((cand_list[i][0], cand_list[i][1]) for i in group)
                sol.append(out)
                return
            target = 0
            while covered >> target & 1:
                target += 1
            for group, gmask in orbit_groups:
                if not (gmask >> target & 1) or (gmask & covered):
                    continue
                chosen.append((group, gmask))
                dfs_orbit(covered | gmask, chosen)
                chosen.pop()
                if len(sol) >= max_solutions:
                    return

        dfs_orbit(0, [])
        if verbose:
            print(f"  fill: {len(sol)} symmetric covers")
        return sol

    by_cell: dict[int, list[int]] = {i: [] for i in range(len(open_cells))}
    for ci in range(len(open_cells)):
        for k, (_, _, mask) in enumerate(cand_list):
            if mask >> ci & 1:
                by_cell[ci].append(k)

    solutions = []

    def dfs(covered: int, chosen: list[int], start_cell: int):
        if len(solutions) >= max_solutions:
            return
        if covered == all_mask:
            solutions.append([(cand_list[k][0], cand_list[k][1]) for k in chosen])
            return
        target = start_cell
        while covered >> target & 1:
            target += 1
        for k in by_cell[target]:
            mask = cand_list[k][2]
            if mask & covered:
                continue
            chosen.append(k)
            dfs(covered | mask, chosen, target)
            chosen.pop()
            if len(solutions) >= max_solutions:
                return

    dfs(0, [], 0)
    if verbose:
        print(f"  fill: {len(solutions)} grid covers")
    return solutions
