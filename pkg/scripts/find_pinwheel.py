"""Search for rep-5 dissections of the inflated pinwheel triangle.

Enumerates unit-triangle placements on the Gaussian lattice, finds exact
covers of eta*P on a grid certificate, confirms each cover with the exact
edge-cancellation validator, and reports the chirality split plus whether
level-3 supertiles certify dense orientations.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cast_forge.cyclotomic import canonicalize, integer, zeta
from cast_forge.engine import Isometry, Placement, Prototile, TilingSpec, supertile
from cast_forge.checks import validate_rule, dto_certificate, orientation_census

N = 2
ONE = integer(N, 1)
I = zeta(N, 1)
ETA = integer(N, 2) + I

PROTO = Prototile(id="P1", vertices=[integer(N, 0), ONE, integer(N, 2), I],
                  pseudo=[False, True, False, False], ref_edge=3)
CORNERS = [integer(N, 0), integer(N, 2), I]  # geometric corners


def fverts(iso):
    return [complex(iso.apply(v).complex_approx()) for v in CORNERS]


def point_in_tri(p, tri, eps=1e-9):
    a, b, c = tri
    def cross(o, u, w):
        return (u.real - o.real) * (w.imag - o.imag) - (u.imag - o.imag) * (w.real - o.real)
    d1, d2, d3 = cross(a, b, p), cross(b, c, p), cross(c, a, p)
    neg = min(d1, d2, d3) < -eps
    pos = max(d1, d2, d3) > eps
    return not (neg and pos)


def main():
    big = [complex((ETA * v).complex_approx()) for v in CORNERS]
    # grid cells at resolution 1/4, offset 1/8: centers never on edge lines
    cells = []
    for p in range(-40, 80):
        for q in range(-20, 40):
            x, y = p / 4 + 1 / 8, q / 4 + 1 / 8
            if point_in_tri(complex(x, y), big, eps=-1e-9):
                cells.append((p, q))
    cell_index = {c: k for k, c in enumerate(cells)}
    print(f"cells: {len(cells)} (expect 80)")

    candidates = []
    for uk in range(4):
        for refl in (False, True):
            for a in range(-3, 7):
                for b in range(-2, 5):
                    iso = Isometry(zeta(N, uk), canonicalize(N, [(a, 0), (b, 1)]), refl)
                    tri = fverts(iso)
                    if not all(point_in_tri(p, big) for p in tri):
                        continue
                    cover = set()
                    ok = True
                    for (p, q) in cells:
                        if point_in_tri(complex(p / 4 + 1 / 8, q / 4 + 1 / 8), tri, eps=-1e-9):
                            cover.add(cell_index[(p, q)])
                    if len(cover) != 16:
                        continue
                    candidates.append((iso, frozenset(cover)))
    print(f"candidates: {len(candidates)}")

    covers = []
    used = [False] * len(cells)

    def dfs(chosen, covered):
        if len(chosen) == 5:
            covers.append(list(chosen))
            return
        # first uncovered cell
        target = next(k for k in range(len(cells)) if k not in covered)
        for iso, cover in candidates:
            if target in cover and not (cover & covered):
                chosen.append(iso)
                dfs(chosen, covered | cover)
                chosen.pop()

    dfs([], frozenset())
    print(f"grid covers: {len(covers)}")

    good = []
    for isos in covers:
        rule = [Placement("P1", iso) for iso in isos]
        spec = TilingSpec(n=N, eta=ETA, prototiles=[PROTO], rules={"P1": rule},
                          name="pinwheel")
        rep = validate_rule(spec, "P1")
        if not rep.ok:
            continue
        refl_count = sum(1 for iso in isos if iso.reflect)
        patch = supertile(spec, "P1", 3)
        cert = dto_certificate(patch, spec)
        counts = []
        for k in (1, 2, 3, 4):
            c = orientation_census(supertile(spec, "P1", k), spec)
            counts.append(c.count)
        print(f"valid cover: reflected={refl_count}/5 dto_l3={'yes' if cert else 'no'} counts={counts}")
        good.append((isos, refl_count, cert is not None, counts))
    print(f"exact-valid covers: {len(good)}")
    for isos, rc, cert, counts in good:
        if cert:
            print("DTO dissection:")
            for iso in isos:
                print("  ", iso)
            break


if __name__ == "__main__":
    main()
