"""Substitution tiling machinery: isometries, prototiles, rules, patches.

All coordinates are exact elements of Q(zeta_2n); a complex point is a single
field element.  Placed tiles carry a planar rigid motion z -> u*z + v or
z -> u*conj(z) + v with |u| = 1 exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .cyclotomic import (
    CycRat,
    RealCyc,
    from_literal,
    integer,
    real_sign,
    to_literal,
    zeta,
)

DEFAULT_COLORS = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)


def im_sign(z: CycRat) -> int:
    """Sign of the imaginary part, exact."""
    # (z - conj z) * (zeta - conj zeta) = -4 Im(z) Im(zeta), Im(zeta) > 0
    w = (z - z.conj()) * (zeta(z.n, 1) - zeta(z.n, -1))
    return -real_sign(RealCyc(w))


def re_sign(z: CycRat) -> int:
    return real_sign(RealCyc(z + z.conj()))


def cross_sign(o: CycRat, a: CycRat, b: CycRat) -> int:
    """Orientation of the triple (o, a, b)."""
    return im_sign((a - o).conj() * (b - o))


def real_part_doubled(z: CycRat) -> RealCyc:
    return RealCyc(z + z.conj())


class Isometry:
    """Planar rigid motion z -> u*z + v (direct) or z -> u*conj(z) + v."""

    __slots__ = ("u", "v", "reflect")

    def __init__(self, u: CycRat, v: CycRat, reflect: bool = False, _checked: bool = False):
        if not _checked and (u * u.conj()) != integer(u.n, 1):
            raise ValueError("rotation factor must have unit norm")
        self.u = u
        self.v = v
        self.reflect = bool(reflect)

    @staticmethod
    def identity(n: int) -> "Isometry":
        return Isometry(integer(n, 1), integer(n, 0), False, _checked=True)

    @staticmethod
    def rotation(u: CycRat, about: Optional[CycRat] = None) -> "Isometry":
        if about is None:
            return Isometry(u, integer(u.n, 0))
        return Isometry(u, about - u * about)

    @staticmethod
    def reflection(u: CycRat, about: Optional[CycRat] = None) -> "Isometry":
        if about is None:
            return Isometry(u, integer(u.n, 0), True)
        return Isometry(u, about - u * about.conj(), True)

    def apply(self, z: CycRat) -> CycRat:
        if self.reflect:
            return self.u * z.conj() + self.v
        return self.u * z + self.v

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other: apply(compose(a, b), z) = a(b(z))."""
        if self.reflect:
            return Isometry(
                self.u * other.u.conj(),
                self.u * other.v.conj() + self.v,
                not other.reflect,
                _checked=True,
            )
        return Isometry(
            self.u * other.u,
            self.u * other.v + self.v,
            other.reflect,
            _checked=True,
        )

    def inverse(self) -> "Isometry":
        uc = self.u.conj()
        if self.reflect:
            return Isometry(self.u, -(self.u * self.v.conj()), True, _checked=True)
        return Isometry(uc, -(uc * self.v), False, _checked=True)

    def key(self) -> tuple:
        return (self.u.key(), self.v.key(), self.reflect)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.u == other.u and self.v == other.v and self.reflect == other.reflect

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        tag = "refl" if self.reflect else "rot"
        return f"Isometry({tag}, u={self.u!r}, v={self.v!r})"


@dataclass
class Prototile:
    id: str
    vertices: list[CycRat]
    pseudo: list[bool]
    ref_edge: int = 0
    color: Optional[str] = None

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError(f"prototile {self.id}: needs at least 3 vertices")
        if len(self.pseudo) != len(self.vertices):
            raise ValueError(f"prototile {self.id}: pseudo flags mismatch vertex count")

    @property
    def n(self) -> int:
        return self.vertices[0].n

    def corner_vertices(self) -> list[CycRat]:
        return [v for v, p in zip(self.vertices, self.pseudo) if not p]

    def edges(self) -> list[tuple[CycRat, CycRat]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def signed_area_marker(self) -> CycRat:
        """4i * area, exact; positive area iff im_sign > 0."""
        return polygon_area_marker(self.vertices)

    def validate(self) -> None:
        marker = self.signed_area_marker()
        if im_sign(marker) <= 0:
            raise ValueError(f"prototile {self.id}: vertices must wind counterclockwise")
        vs = self.vertices
        k = len(vs)
        for i in range(k):
            a, b, c = vs[(i - 1) % k], vs[i], vs[(i + 1) % k]
            if cross_sign(a, b, c) == 0:
                if not self.pseudo[i]:
                    raise ValueError(
                        f"prototile {self.id}: collinear vertex {i} not flagged pseudo"
                    )
        _check_simple(vs, self.id)

    @cached_property
    def symmetries(self) -> list[Isometry]:
        """Self-congruences (rotations and reflections fixing the tile,
        respecting pseudo-vertex decoration)."""
        vs = self.vertices
        ps = self.pseudo
        k = len(vs)
        out = []
        d0 = vs[1] - vs[0]
        for r in range(k):
            # direct: v_i -> v_(i+r)
            d = vs[(r + 1) % k] - vs[r]
            try:
                u = d / d0
            except ArithmeticError:
                continue
            if (u * u.conj()) == integer(self.n, 1):
                t = vs[r] - u * vs[0]
                iso = Isometry(u, t, False, _checked=True)
                if all(
                    iso.apply(vs[i]) == vs[(i + r) % k] and ps[i] == ps[(i + r) % k]
                    for i in range(k)
                ):
                    out.append(iso)
            # indirect: v_i -> v_(r-i)
            d = vs[(r - 1) % k] - vs[r]
            try:
                u = d / d0.conj()
            except ArithmeticError:
                continue
            if (u * u.conj()) == integer(self.n, 1):
                t = vs[r] - u * vs[0].conj()
                iso = Isometry(u, t, True, _checked=True)
                if all(
                    iso.apply(vs[i]) == vs[(r - i) % k] and ps[i] == ps[(r - i) % k]
                    for i in range(k)
                ):
                    out.append(iso)
        return out


def polygon_area_marker(vertices: Sequence[CycRat]) -> CycRat:
    """Sum of conj(z_i) z_(i+1) - z_i conj(z_(i+1)): equals 4i * signed area."""
    n = vertices[0].n
    total = integer(n, 0)
    k = len(vertices)
    for i in range(k):
        a, b = vertices[i], vertices[(i + 1) % k]
        total = total + (a.conj() * b - a * b.conj())
    return total


def _check_simple(vs: Sequence[CycRat], name: str) -> None:
    """Reject self-intersecting polygons (exact, O(E^2))."""
    k = len(vs)
    for i in range(k):
        a1, a2 = vs[i], vs[(i + 1) % k]
        for j in range(i + 1, k):
            if j == i or (j + 1) % k == i or (i + 1) % k == j:
                continue
            b1, b2 = vs[j], vs[(j + 1) % k]
            if _segments_cross(a1, a2, b1, b2):
                raise ValueError(f"polygon {name}: edges {i} and {j} intersect")


def _segments_cross(a1, a2, b1, b2) -> bool:
    d1 = cross_sign(a1, a2, b1)
    d2 = cross_sign(a1, a2, b2)
    d3 = cross_sign(b1, b2, a1)
    d4 = cross_sign(b1, b2, a2)
    return d1 * d2 < 0 and d3 * d4 < 0


@dataclass(frozen=True)
class Placement:
    child: str
    iso: Isometry


@dataclass(frozen=True)
class PlacedTile:
    prototile: str
    iso: Isometry

    def key(self) -> tuple:
        return (self.prototile,) + self.iso.key()


class TilingSpec:
    """Exact substitution system: prototiles plus one dissection rule each."""

    def __init__(
        self,
        n: int,
        eta: CycRat,
        prototiles: Sequence[Prototile],
        rules: dict[str, list[Placement]],
        name: str = "",
        source: str = "",
    ):
        self.n = n
        if not eta.is_integral():
            raise ValueError("inflation multiplier must lie in Z[zeta_2n]")
        self.eta = eta
        self.prototiles = {p.id: p for p in prototiles}
        if len(self.prototiles) != len(prototiles):
            raise ValueError("duplicate prototile ids")
        self.rules = rules
        self.name = name
        self.source = source
        for pid in rules:
            if pid not in self.prototiles:
                raise ValueError(f"rule for unknown prototile {pid!r}")
        for pid, rule in rules.items():
            for pl in rule:
                if pl.child not in self.prototiles:
                    raise ValueError(f"rule {pid!r} places unknown prototile {pl.child!r}")

    @cached_property
    def lambda_value(self) -> RealCyc:
        return RealCyc(self.eta * self.eta.conj())

    @cached_property
    def eta_ratio(self) -> CycRat:
        """eta / conj(eta): the unit picked up by reflected tiles on inflation."""
        return (self.eta * self.eta) / self.lambda_value.value

    def prototile_ids(self) -> list[str]:
        return sorted(self.prototiles)

    def color_of(self, pid: str) -> str:
        p = self.prototiles[pid]
        if p.color:
            return p.color
        return DEFAULT_COLORS[self.prototile_ids().index(pid) % len(DEFAULT_COLORS)]

    def tile_vertices(self, tile: PlacedTile) -> list[CycRat]:
        proto = self.prototiles[tile.prototile]
        return [tile.iso.apply(v) for v in proto.vertices]

    def validate_geometry(self) -> None:
        for p in self.prototiles.values():
            p.validate()


@dataclass
class Patch:
    tiles: list[PlacedTile]
    level: int = 0
    seed: Optional[str] = None

    def __len__(self) -> int:
        return len(self.tiles)


def unit_patch(spec: TilingSpec, prototile_id: str) -> Patch:
    if prototile_id not in spec.prototiles:
        raise KeyError(f"unknown prototile {prototile_id!r}")
    return Patch([PlacedTile(prototile_id, Isometry.identity(spec.n))], 0, prototile_id)


def substitute_once(patch: Patch, spec: TilingSpec) -> Patch:
    """Simultaneously inflate by eta and dissect every tile by its rule.

    A placed tile g becomes children h.compose(s) for rule placements s, with
    h the conjugate of g under inflation: direct tiles keep u, reflected tiles
    pick up the unit eta/conj(eta).
    """
    out = []
    for tile in patch.tiles:
        rule = spec.rules.get(tile.prototile)
        if rule is None:
            raise KeyError(f"no substitution rule for prototile {tile.prototile!r}")
        g = tile.iso
        if g.reflect:
            h = Isometry(g.u * spec.eta_ratio, spec.eta * g.v, True, _checked=True)
        else:
            h = Isometry(g.u, spec.eta * g.v, False, _checked=True)
        for pl in rule:
            out.append(PlacedTile(pl.child, h.compose(pl.iso)))
    return Patch(out, patch.level + 1, patch.seed)


def supertile(spec: TilingSpec, prototile_id: str, k: int) -> Patch:
    if k < 0:
        raise ValueError("level must be nonnegative")
    patch = unit_patch(spec, prototile_id)
    for _ in range(k):
        patch = substitute_once(patch, spec)
    return patch


# -- JSON serialization -------------------------------------------------------

def spec_to_json(spec: TilingSpec) -> dict:
    return {
        "name": spec.name,
        "source": spec.source,
        "n": spec.n,
        "eta": to_literal(spec.eta),
        "prototiles": [
            {
                "id": p.id,
                "vertices": [to_literal(v) for v in p.vertices],
                "pseudo": list(p.pseudo),
                "ref_edge": p.ref_edge,
                **({"color": p.color} if p.color else {}),
            }
            for p in spec.prototiles.values()
        ],
        "rules": {
            pid: [
                {
                    "child": pl.child,
                    "u": to_literal(pl.iso.u),
                    "v": to_literal(pl.iso.v),
                    "reflect": pl.iso.reflect,
                }
                for pl in rule
            ]
            for pid, rule in spec.rules.items()
        },
    }


def spec_from_json(data: dict) -> TilingSpec:
    try:
        n = int(data["n"])
        eta = from_literal(n, data["eta"])
        prototiles = []
        for p in data["prototiles"]:
            vertices = [from_literal(n, lit) for lit in p["vertices"]]
            pseudo = [bool(x) for x in p.get("pseudo", [False] * len(vertices))]
            prototiles.append(
                Prototile(
                    id=str(p["id"]),
                    vertices=vertices,
                    pseudo=pseudo,
                    ref_edge=int(p.get("ref_edge", 0)),
                    color=p.get("color"),
                )
            )
        rules = {}
        for pid, rule in data["rules"].items():
            rules[pid] = [
                Placement(
                    child=str(r["child"]),
                    iso=Isometry(
                        from_literal(n, r["u"]),
                        from_literal(n, r["v"]),
                        bool(r.get("reflect", False)),
                    ),
                )
                for r in rule
            ]
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed tiling spec: {exc}") from exc
    return TilingSpec(
        n=n,
        eta=eta,
        prototiles=prototiles,
        rules=rules,
        name=str(data.get("name", "")),
        source=str(data.get("source", "")),
    )


def bundled_spec_names() -> list[str]:
    root = resources.files("cast_forge").joinpath("data")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_spec(name_or_path: str | Path) -> TilingSpec:
    """Load a spec from a file path or a bundled spec name."""
    path = Path(name_or_path)
    if path.exists():
        data = json.loads(path.read_text())
    else:
        res = resources.files("cast_forge").joinpath("data", f"{name_or_path}.json")
        if not res.is_file():
            raise FileNotFoundError(
                f"no such spec file or bundled spec: {name_or_path!r}"
            )
        data = json.loads(res.read_text())
    return spec_from_json(data)
