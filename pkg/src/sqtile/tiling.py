"""Rectangle tilings and their exact geometric validation.

The validator extends every tile edge across the outer rectangle,
producing a product grid of cells, and accepts exactly when every cell
is owned by exactly one tile, every tile is exactly its block of cells,
and everything stays inside the outer rectangle.  All decisions are
made by symbolic equality or certified interval comparison; floating
point is never consulted.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .errors import AmbiguousComparison, GridInconsistent
from .exactnum import GeneratorTable, LinExpr, lin_cmp

__all__ = [
    "Placement",
    "Tiling",
    "RefinedGrid",
    "Failure",
    "ValidationReport",
    "refine",
    "validate",
    "is_square",
]


@dataclass(frozen=True, slots=True)
class Placement:
    """An axis-aligned tile: lower-left corner (x, y), sides w x h."""

    x: LinExpr
    y: LinExpr
    w: LinExpr
    h: LinExpr

    @property
    def right(self) -> LinExpr:
        return self.x + self.w

    @property
    def top(self) -> LinExpr:
        return self.y + self.h


@dataclass(frozen=True, slots=True)
class Tiling:
    """An outer rectangle with a nonempty list of tile placements."""

    outer_w: LinExpr
    outer_h: LinExpr
    tiles: tuple
    table: GeneratorTable

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))
        if not self.tiles:
            raise ValueError("a tiling needs at least one tile")
        exprs = [self.outer_w, self.outer_h]
        for t in self.tiles:
            exprs += [t.x, t.y, t.w, t.h]
        for e in exprs:
            if e.table != self.table:
                raise ValueError("all expressions must use the tiling's generator table")

    def side_lengths(self) -> list:
        """Outer sides then every tile's w, h, in tile order."""
        out = [self.outer_w, self.outer_h]
        for t in self.tiles:
            out += [t.w, t.h]
        return out


@dataclass(frozen=True, slots=True)
class RefinedGrid:
    """The product grid obtained by extending every cut line.

    ``x_cuts``/``y_cuts`` are strictly increasing and include 0 and the
    outer sides; ``owner[i][j]`` is the index of the tile covering the
    cell between cuts i..i+1 horizontally and j..j+1 vertically.
    """

    x_cuts: tuple
    y_cuts: tuple
    owner: tuple

    @property
    def cell_count(self) -> int:
        return (len(self.x_cuts) - 1) * (len(self.y_cuts) - 1)

    def cell_width(self, i: int) -> LinExpr:
        return self.x_cuts[i + 1] - self.x_cuts[i]

    def cell_height(self, j: int) -> LinExpr:
        return self.y_cuts[j + 1] - self.y_cuts[j]

    def cells(self):
        for i in range(len(self.x_cuts) - 1):
            for j in range(len(self.y_cuts) - 1):
                yield i, j, self.owner[i][j]


@dataclass(frozen=True, slots=True)
class Failure:
    """One validation failure: a kind, the tiles involved, and a witness."""

    kind: str  # overlap | gap | out_of_bounds | nonpositive_side | ambiguous
    tiles: tuple = ()
    cell: tuple | None = None
    witness: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "tiles": list(self.tiles)}
        if self.cell is not None:
            out["cell"] = list(self.cell)
        if self.witness:
            out["witness"] = {k: str(v) for k, v in self.witness.items()}
        return out


@dataclass(frozen=True, slots=True)
class ValidationReport:
    failures: tuple

    @property
    def verdict(self) -> str:
        return "valid" if not self.failures else "invalid"

    @property
    def is_valid(self) -> bool:
        return not self.failures

    @property
    def is_ambiguous(self) -> bool:
        return any(f.kind == "ambiguous" for f in self.failures)

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "failures": [f.as_dict() for f in self.failures]}

    def __str__(self):
        if self.is_valid:
            return "valid"
        return "invalid: " + "; ".join(
            f.kind + (f" tiles {list(f.tiles)}" if f.tiles else "") for f in self.failures
        )


def is_square(p: Placement) -> bool:
    """True iff w and h are symbolically equal expressions."""
    return p.w == p.h


def _sorted_cuts(values):
    """Symbolically dedupe then sort by certified comparison."""
    unique = {}
    for v in values:
        unique.setdefault(v, v)
    cuts = sorted(unique.values(), key=functools.cmp_to_key(lin_cmp))
    return cuts


def _grid_indices(t: Tiling):
    """Cut lists plus each tile's cell-index block; assumes bounds hold."""
    zero = LinExpr.zero(t.table)
    x_cuts = _sorted_cuts(
        [zero, t.outer_w] + [v for p in t.tiles for v in (p.x, p.right)]
    )
    y_cuts = _sorted_cuts(
        [zero, t.outer_h] + [v for p in t.tiles for v in (p.y, p.top)]
    )
    x_index = {v: i for i, v in enumerate(x_cuts)}
    y_index = {v: i for i, v in enumerate(y_cuts)}
    blocks = [
        (x_index[p.x], x_index[p.right], y_index[p.y], y_index[p.top]) for p in t.tiles
    ]
    return x_cuts, y_cuts, blocks


def _side_failures(t: Tiling):
    """Nonpositive-side and out-of-bounds failures, by certified comparison."""
    failures = []
    zero = LinExpr.zero(t.table)

    def sign_of(e, what, tiles):
        try:
            return e.cmp(zero)
        except AmbiguousComparison as exc:
            failures.append(Failure("ambiguous", tiles=tiles, witness={"detail": str(exc), "where": what}))
            return None

    for name, e in (("outer_w", t.outer_w), ("outer_h", t.outer_h)):
        s = sign_of(e, name, ())
        if s is not None and s <= 0:
            failures.append(Failure("nonpositive_side", witness={"side": name, "value": e}))
    for i, p in enumerate(t.tiles):
        for name, e in (("w", p.w), ("h", p.h)):
            s = sign_of(e, f"tile {i} {name}", (i,))
            if s is not None and s <= 0:
                failures.append(
                    Failure("nonpositive_side", tiles=(i,), witness={"side": name, "value": e})
                )
        # bounds only meaningful for tiles with certified positive sides
        if any(f.tiles == (i,) for f in failures):
            continue
        for cond, lo, hi in (
            ("x >= 0", zero, p.x),
            ("y >= 0", zero, p.y),
            ("right <= outer_w", p.right, t.outer_w),
            ("top <= outer_h", p.top, t.outer_h),
        ):
            s = sign_of(hi - lo, f"tile {i} {cond}", (i,))
            if s is not None and s < 0:
                failures.append(
                    Failure("out_of_bounds", tiles=(i,), witness={"constraint": cond, "x": p.x, "y": p.y})
                )
    return failures


def validate(t: Tiling) -> ValidationReport:
    """Check that the tiles cut the outer rectangle exactly.

    Failures are reported as data, never raised; an ambiguous certified
    comparison becomes a failure of kind "ambiguous" (tighten the
    generator enclosures and retry).
    """
    failures = _side_failures(t)
    if failures:
        return ValidationReport(tuple(failures))

    try:
        x_cuts, y_cuts, blocks = _grid_indices(t)
    except AmbiguousComparison as exc:
        return ValidationReport((Failure("ambiguous", witness={"detail": str(exc)}),))

    nx, ny = len(x_cuts) - 1, len(y_cuts) - 1
    owners = [[[] for _ in range(ny)] for _ in range(nx)]
    for idx, (ix0, ix1, iy0, iy1) in enumerate(blocks):
        for i in range(ix0, ix1):
            for j in range(iy0, iy1):
                owners[i][j].append(idx)
    for i in range(nx):
        for j in range(ny):
            cell_w = {"cell_x": x_cuts[i], "cell_y": y_cuts[j]}
            if not owners[i][j]:
                failures.append(Failure("gap", cell=(i, j), witness=cell_w))
            elif len(owners[i][j]) > 1:
                failures.append(
                    Failure("overlap", tiles=tuple(owners[i][j]), cell=(i, j), witness=cell_w)
                )
    return ValidationReport(tuple(failures))


def refine(t: Tiling) -> RefinedGrid:
    """Build the refined grid, raising on any inconsistency.

    Placement invariants (positive sides, tiles inside the outer
    rectangle) must hold; a cell covered zero or multiple times raises
    GridInconsistent, and AmbiguousComparison propagates.
    """
    side = _side_failures(t)
    for f in side:
        if f.kind == "ambiguous":
            raise AmbiguousComparison(f.witness.get("detail", "ambiguous comparison"))
    if side:
        raise GridInconsistent(f"placement invariants violated: {side[0].kind}")

    x_cuts, y_cuts, blocks = _grid_indices(t)
    nx, ny = len(x_cuts) - 1, len(y_cuts) - 1
    owner = [[-1] * ny for _ in range(nx)]
    for idx, (ix0, ix1, iy0, iy1) in enumerate(blocks):
        for i in range(ix0, ix1):
            for j in range(iy0, iy1):
                if owner[i][j] != -1:
                    raise GridInconsistent(f"cell ({i}, {j}) covered by tiles {owner[i][j]} and {idx}")
                owner[i][j] = idx
    for i in range(nx):
        for j in range(ny):
            if owner[i][j] == -1:
                raise GridInconsistent(f"cell ({i}, {j}) is not covered")
    return RefinedGrid(tuple(x_cuts), tuple(y_cuts), tuple(tuple(col) for col in owner))
