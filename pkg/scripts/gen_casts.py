"""Generates the bundled CAST substitution specs (cast-n2 .. cast-n7) and the
non-DTO rhombic control spec.

Architecture, common to every n:

* baseline tiles (walks of unit steps closed by a straight chord) carry the
  irrational-direction edges; one hosts every inflated unit edge, a longer
  one every inflated diagonal edge;
* hosts are anchored: vertex 0 of the baseline tile always sits at the
  canonical end of its segment (fixed per line-direction class), so any two
  tiles glued along such a segment induce the same next-level subdivision
  provided all rules of a class share one chord subdivision;
* leftover regions are filled from the rational tile library by an
  exact-cover search on a witness grid; every candidate rule is confirmed by
  the exact validator (area identity + edge cancellation).
"""

from __future__ import annotations

import itertools
import json
import math
import sys
from pathlib import Path
from typing import Optional

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cast_forge.cyclotomic import CycRat, RealCyc, canonicalize, integer, real_cmp, real_sign, zeta
from cast_forge.engine import (
    Isometry,
    Placement,
    Prototile,
    TilingSpec,
    spec_to_json,
    supertile,
)
from cast_forge.checks import (
    check_no_overlap,
    dto_certificate,
    flc_check,
    is_primitive,
    orientation_census,
    pf_eigenvalue,
    substitution_matrix,
    validate_rule,
    validate_spec,
)
from tilekit import (
    FillProblem,
    baseline_tile,
    end_angles,
    point_in_poly_f,
    polygon_floats,
    rhomb_tile,
    solve_fill,
    solve_segment_placements,
    tile_inside_region,
    walk_orders,
)

DATA = Path(__file__).resolve().parent.parent / "src" / "cast_forge" / "data"


def simplify_weak_polygon(pts: list[CycRat]) -> list[CycRat]:
    """Remove zero-width spikes (P -> Q -> R with R on segment PQ) and
    duplicate consecutive points from a weakly simple polygon boundary."""
    from cast_forge.engine import cross_sign

    out = list(pts)
    changed = True
    while changed and len(out) > 3:
        changed = False
        k = len(out)
        for i in range(k):
            p, q, r = out[i], out[(i + 1) % k], out[(i + 2) % k]
            if q == p or q == r:
                del out[(i + 1) % k]
                changed = True
                break
            if cross_sign(p, q, r) == 0:
                d1 = (q - p).complex_approx()
                d2 = (r - q).complex_approx()
                if d1.real * d2.real + d1.imag * d2.imag < -1e-12:
                    # backtrack: drop the spike tip
                    del out[(i + 1) % k]
                    changed = True
                    break
    return out


def canonical_start(a: CycRat, b: CycRat) -> bool:
    """True if a is the canonical start of segment ab (direction-based)."""
    d = (b - a).complex_approx()
    ang = math.atan2(d.imag, d.real)
    # canonical direction has angle in (-pi/2, pi/2]
    if abs(d.real) < 1e-12:
        return d.imag > 0
    return d.real > 0


class CastBuilder:
    def __init__(self, n: int, eta_steps: tuple[int, ...], name: str):
        self.n = n
        self.name = name
        self.eta = canonicalize(n, [(1, k) for k in eta_steps])
        self.protos: dict[str, Prototile] = {}
        self.tags: dict[str, list[str]] = {}
        self.host_ids: dict[str, list[str]] = {}
        self.fill_library: list[str] = []
        self.rules: dict[str, list[Placement]] = {}
        # shared chord subdivision per straight-edge class, as canonical
        # parameter key tuples
        self.chord_pattern: dict[str, tuple] = {}

    def add(self, proto: Prototile, tags: list[str], fill: bool = False):
        if len(tags) != len(proto.vertices):
            raise ValueError(f"{proto.id}: need one tag per edge")
        proto.validate()
        self.protos[proto.id] = proto
        self.tags[proto.id] = tags
        if fill:
            self.fill_library.append(proto.id)

    # -- hosting ---------------------------------------------------------

    def _host_end_angle(self, hid, iso, at_point) -> float:
        hp = self.protos[hid]
        verts = [iso.apply(v) for v in hp.vertices]
        k = len(verts)
        i = next(j for j, p in enumerate(verts) if p == at_point)
        a = (verts[(i - 1) % k] - verts[i]).complex_approx()
        b = (verts[(i + 1) % k] - verts[i]).complex_approx()
        ang = abs(math.degrees(math.atan2(a.imag, a.real) - math.atan2(b.imag, b.real)))
        return 360 - ang if ang > 180 else ang

    def host_options(self, tag, a, b, region_f):
        """Anchored host placements for segment a->b (vertex 0 at the
        canonical end), each with its two endpoint angles."""
        start_is_a = canonical_start(a, b)
        opts = []
        for hid in self.host_ids[tag]:
            hp = self.protos[hid]
            for iso in solve_segment_placements(hp, 0, a, b):
                if iso.apply(hp.vertices[0]) != (a if start_is_a else b):
                    continue
                if not tile_inside_region(hp, iso, region_f):
                    continue
                ea = self._host_end_angle(hid, iso, a)
                eb = self._host_end_angle(hid, iso, b)
                opts.append((hid, iso, ea, eb))
        return opts

    # -- rule construction -------------------------------------------------

    def build_rule(self, pid: str, resolution: int = 4, max_solutions: int = 80,
                   max_host_combos: int = 2000, verbose: bool = False,
                   orbit: int = 1, orbit_center=None) -> bool:
        proto = self.protos[pid]
        tags = self.tags[pid]
        region = [self.eta * v for v in proto.vertices]
        region_f = polygon_floats(region)
        k = len(region)
        lattice = 180.0 / self.n

        corner_angle = []
        for i in range(k):
            a = (region[(i - 1) % k] - region[i]).complex_approx()
            b = (region[(i + 1) % k] - region[i]).complex_approx()
            ang = (math.degrees(math.atan2(a.imag, a.real))
                   - math.degrees(math.atan2(b.imag, b.real))) % 360.0
            corner_angle.append(ang)

        hosted_options: list = []
        for i in range(k):
            a, b = region[i], region[(i + 1) % k]
            if tags[i] in self.host_ids:
                opts = self.host_options(tags[i], a, b, region_f)
                if not opts:
                    raise RuntimeError(f"{pid}: no anchored host fits edge {i} [{tags[i]}]")
                hosted_options.append(opts)
            else:
                hosted_options.append(None)

        def corner_ok(vertex, decided):
            e_prev, e_cur = (vertex - 1) % k, vertex
            used = []
            for e, end_idx in ((e_prev, 3), (e_cur, 2)):
                if hosted_options[e] is None:
                    continue
                if e not in decided:
                    return True
                used.append(decided[e][end_idx])
            rest = corner_angle[vertex] - sum(used)
            if rest < -1e-6:
                return False
            frac = rest % lattice
            return frac < 1e-6 or lattice - frac < 1e-6

        combos = 0

        def host_dfs(i, decided):
            nonlocal combos
            if combos > max_host_combos:
                return
            if i == k:
                if corner_ok(0, decided):
                    combos += 1
                    yield dict(decided)
                return
            if hosted_options[i] is None:
                if corner_ok(i, decided):
                    yield from host_dfs(i + 1, decided)
                return
            for opt in hosted_options[i]:
                decided[i] = opt
                if corner_ok(i, decided):
                    yield from host_dfs(i + 1, decided)
                del decided[i]

        for combo in host_dfs(0, {}):
            hosted = [(combo[e][0], combo[e][1]) for e in sorted(combo)]
            for rule in self._fills(pid, region, hosted, resolution, max_solutions,
                                    verbose, orbit, orbit_center):
                patterns = self._chord_patterns(pid, region, rule)
                if patterns is None:
                    continue
                self.rules[pid] = rule
                if validate_rule(self.spec(), pid).ok:
                    self.chord_pattern.update(patterns)
                    return True
                del self.rules[pid]
        return False

    def _chord_patterns(self, pid, region, rule) -> Optional[dict]:
        """Subdivision keys for every straight (chord) edge of the inflated
        tile; None if they disagree with the already-fixed class pattern."""
        tags = self.tags[pid]
        k = len(region)
        out = {}
        for i in range(k):
            tag = tags[i]
            if tag not in ("baseline", "baseline2"):
                continue
            a, b = region[i], region[(i + 1) % k]
            if not canonical_start(a, b):
                a, b = b, a
            d = b - a
            dc = d.conj()
            params = set()
            for pl in rule:
                hp = self.protos[pl.child]
                for v in hp.vertices:
                    p = pl.iso.apply(v)
                    w = p - a
                    if not (dc * w - d * w.conj()).is_zero():
                        continue
                    t = RealCyc(dc * w + d * w.conj())
                    if real_sign(t) <= 0:
                        continue
                    if real_cmp(t, RealCyc((dc * d).scale(2))) >= 0:
                        continue
                    params.add(t.value.key())
            key = tuple(sorted(params))
            prev = self.chord_pattern.get(tag)
            if prev is not None and prev != key:
                return None
            if tag in out and out[tag] != key:
                return None
            out[tag] = key
        return out

    def _fills(self, pid, region, hosted, resolution, max_solutions, verbose,
               orbit, orbit_center):
        poly: list[CycRat] = []
        k = len(region)
        hosted_by_edge = {}
        for hid, iso in hosted:
            hp = self.protos[hid]
            pa = iso.apply(hp.vertices[0])
            pb = iso.apply(hp.vertices[1])
            hosted_by_edge[frozenset((pa.key(), pb.key()))] = (hid, iso)
        for i in range(k):
            a, b = region[i], region[(i + 1) % k]
            poly.append(a)
            key = frozenset((a.key(), b.key()))
            if key in hosted_by_edge:
                hid, iso = hosted_by_edge[key]
                hp = self.protos[hid]
                pts = [iso.apply(v) for v in hp.vertices]
                m = len(pts)
                ia = next(j for j, p in enumerate(pts) if p == a)
                ib = next(j for j, p in enumerate(pts) if p == b)
                path = []
                if (ia + 1) % m == ib:
                    j = (ia - 1) % m
                    while j != ib:
                        path.append(pts[j])
                        j = (j - 1) % m
                else:
                    j = (ia + 1) % m
                    while j != ib:
                        path.append(pts[j])
                        j = (j + 1) % m
                poly.extend(path)
        poly = simplify_weak_polygon(poly)
        library = [self.protos[t] for t in self.fill_library]
        problem = FillProblem(n=self.n, region=poly, library=library, fixed=[],
                              resolution=resolution)
        for fill in solve_fill(problem, max_solutions=max_solutions, verbose=verbose,
                               orbit=orbit, orbit_center=orbit_center):
            rule = [Placement(hid, iso) for hid, iso in hosted]
            rule += [Placement(p.id, iso) for p, iso in fill]
            yield rule

    def spec(self) -> TilingSpec:
        return TilingSpec(
            n=self.n, eta=self.eta, prototiles=list(self.protos.values()),
            rules=dict(self.rules), name=self.name,
        )


# -- gates ---------------------------------------------------------------

def gate_check(spec: TilingSpec, flc_ids=(), flc_level=3, dto_id=None, dto_level=3,
               verbose=True) -> bool:
    reports = validate_spec(spec)
    ok = all(r.ok for r in reports)
    mat = substitution_matrix(spec)
    prim = is_primitive(mat)
    pf = pf_eigenvalue(mat)
    lam = spec.lambda_value.float_approx()
    good = ok and prim and abs(pf - lam) <= 1e-9
    if verbose:
        print(f"  gates: rules={ok} primitive={prim} pf={pf:.6f} lambda={lam:.6f}")
        for r in reports:
            if not r.ok:
                print(f"    {r.prototile}: {r.errors[:2]}")
    if not good:
        return False
    if dto_id:
        patch = supertile(spec, dto_id, dto_level)
        cert = dto_certificate(patch, spec)
        if verbose:
            print(f"  dto[{dto_id} @L{dto_level}]: {'yes' if cert else 'NO'} ({len(patch)} tiles)")
        if not cert:
            return False
    for pid in flc_ids:
        patch = supertile(spec, pid, flc_level)
        rep = flc_check(patch, spec)
        if verbose:
            print(f"  flc[{pid} @L{flc_level}]: {rep.ok} ({len(patch)} tiles)")
        if not rep.ok:
            if verbose:
                print("   ", rep.violations[:2])
            return False
    return True


def write_spec(spec: TilingSpec, name: str):
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / f"{name}.json").write_text(json.dumps(spec_to_json(spec), indent=1) + "\n")
    print(f"  wrote {name}.json")


def conj_steps(n, eta_steps):
    return sorted((-k) % (2 * n) for k in eta_steps)


def pb_steps(n, eta_steps):
    out = []
    for k in conj_steps(n, eta_steps):
        out.append(k % (2 * n))
        out.append((k + 2) % (2 * n))
    return sorted(out)


def pick_order(n, steps, want_ends, avoid=()):
    """A walk order whose end angles match want_ends within 0.01 deg."""
    for o in sorted(walk_orders(n, steps)):
        a0, a1 = end_angles(n, o)
        if abs(a0 - want_ends[0]) < 0.01 and abs(a1 - want_ends[1]) < 0.01:
            if tuple(o) not in avoid:
                return o
    raise RuntimeError(f"no walk with ends {want_ends} among steps {steps}")


# -- n=2 -------------------------------------------------------------------

def build_cast_n2() -> TilingSpec:
    b = CastBuilder(2, (0, 0, 1), "cast-n2")
    b.add(baseline_tile(2, [0, 0, 3], "P1"), ["baseline", "unit", "unit", "unit"])
    b.add(rhomb_tile(2, 1, "P2"), ["unit"] * 4, fill=True)
    b.host_ids["unit"] = ["P1"]
    for pid in ("P1", "P2"):
        if not b.build_rule(pid):
            raise SystemExit(f"no valid rule for {pid}")
        print(f"  rule[{pid}]: {len(b.rules[pid])} children")
    return b.spec()


# -- n=3 -------------------------------------------------------------------

def build_cast_n3() -> TilingSpec:
    b = CastBuilder(3, (0, 0, 1), "cast-n3")
    b.add(baseline_tile(3, [0, 0, 5], "P1"), ["baseline", "unit", "unit", "unit"])
    b.add(rhomb_tile(3, 1, "P2"), ["unit"] * 4, fill=True)
    tri = Prototile("P3", [integer(3, 0), integer(3, 1), zeta(3, 1)], [False] * 3)
    b.add(tri, ["unit"] * 3, fill=True)
    b.host_ids["unit"] = ["P1"]
    for pid in ("P1", "P2", "P3"):
        if not b.build_rule(pid):
            raise SystemExit(f"no valid rule for {pid}")
        print(f"  rule[{pid}]: {len(b.rules[pid])} children")
    return b.spec()


# -- n=6 -------------------------------------------------------------------

def para_tile(n: int, c: int, length: int, tile_id: str) -> Prototile:
    """1 x length parallelogram between directions 0 and c, long edges
    pseudo-split into unit segments."""
    w = zeta(n, c)
    bottom = [integer(n, j) for j in range(length + 1)]
    top = [integer(n, j) + w for j in range(length, -1, -1)]
    verts = bottom + top
    pseudo = ([False] + [True] * (length - 1) + [False]) * 2
    return Prototile(id=tile_id, vertices=verts, pseudo=pseudo, ref_edge=0)


def build_cast_n6() -> TilingSpec:
    n = 6
    b = CastBuilder(n, (0, 1, 3), "cast-n6")
    base = conj_steps(n, (0, 1, 3))                      # [9, 11, 0] sorted
    b.add(baseline_tile(n, base, "P1", order=pick_order(n, base, (38.79, 51.21))),
          ["baseline", "unit", "unit", "unit"])
    b.add(baseline_tile(n, base, "P7", order=pick_order(n, base, (8.79, 51.21))),
          ["baseline", "unit", "unit", "unit"])
    padded = sorted(base + [10, 4])
    b.add(baseline_tile(n, padded, "P8", order=pick_order(n, padded, (8.79, 21.21))),
          ["baseline"] + ["unit"] * 5)
    b.add(baseline_tile(n, padded, "P13", order=[0, 4, 11, 9, 10]),
          ["baseline"] + ["unit"] * 5)
    pbs = pb_steps(n, (0, 1, 3))
    b.add(baseline_tile(n, pbs, "P6", order=pick_order(n, pbs, (8.79, 81.21))),
          ["baseline2"] + ["unit"] * 6)
    b.add(baseline_tile(n, pbs, "P10", order=pick_order(n, pbs, (8.79, 21.21))),
          ["baseline2"] + ["unit"] * 6)
    # wheel tile: 1x2 parallelogram with a 30-degree corner
    b.add(para_tile(n, 1, 2, "P2"), ["unit"] * 6, fill=True)
    b.add(rhomb_tile(n, 2, "P3"), ["unit"] * 4, fill=True)
    b.add(rhomb_tile(n, 3, "P4"), ["unit"] * 4, fill=True)
    # sqrt3 x 1 rectangle carries the diagonal-length edges
    mu2 = zeta(n, 1) + zeta(n, -1)
    i_unit = zeta(n, 3)
    rect = Prototile("P5", [integer(n, 0), mu2, mu2 + i_unit, i_unit], [False] * 4)
    b.add(rect, ["base2", "unit", "base2", "unit"], fill=True)
    zl = zeta(n, 1)
    b.add(Prototile("P11", [integer(n, 0), mu2, mu2 + zl, zl], [False] * 4),
          ["base2", "unit", "base2", "unit"], fill=True)
    zr = zeta(n, 5)
    b.add(Prototile("P12", [integer(n, 0), mu2, mu2 + zr, zr], [False] * 4),
          ["base2", "unit", "base2", "unit"], fill=True)
    eq = Prototile("P9", [integer(n, 0), integer(n, 1), zeta(n, 2)], [False] * 3)
    b.add(eq, ["unit"] * 3, fill=True)
    b.host_ids["unit"] = ["P1", "P7", "P8", "P13"]
    b.host_ids["base2"] = ["P6", "P10"]
    for pid in ("P1", "P7", "P8", "P13", "P6", "P10", "P2", "P3", "P4", "P5", "P11", "P12", "P9"):
        if not b.build_rule(pid, verbose=False):
            raise SystemExit(f"no valid rule for {pid}")
        print(f"  rule[{pid}]: {len(b.rules[pid])} children")
    return b.spec()


BUILDERS = {
    "cast-n2": (build_cast_n2, dict(flc_ids=("P1", "P2"), dto_id="P1")),
    "cast-n3": (build_cast_n3, dict(flc_ids=("P1", "P2", "P3"), dto_id="P1")),
    "cast-n6": (build_cast_n6, dict(flc_ids=("P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P9", "P10", "P11", "P12", "P13"),
                                    dto_id="P3")),
}


def main(argv):
    names = argv or sorted(BUILDERS)
    for name in names:
        print(f"building {name}")
        builder, gates = BUILDERS[name]
        spec = builder()
        if not gate_check(spec, **gates):
            raise SystemExit(f"{name} failed gates")
        write_spec(spec, name)


if __name__ == "__main__":
    main(sys.argv[1:])
