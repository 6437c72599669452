"""The 3x3 board: cell coordinates, position weights, placement and moves.

Coordinates are 1-based with x growing rightward and y growing upward,
so (3,3) is the top-right cell, closest to both axis words.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ImageNotFoundError, ValidationError


@dataclass(frozen=True, order=True)
class GridCoord:
    x: int
    y: int

    def __post_init__(self):
        if not (1 <= self.x <= 3 and 1 <= self.y <= 3):
            raise ValidationError(f"grid coordinate out of range: ({self.x}, {self.y})")


# Canonical fill order; refills consume empty cells in this order, most
# relevant image first.
GRID_ORDER: tuple[GridCoord, ...] = tuple(
    GridCoord(x, y)
    for x, y in [(3, 3), (2, 3), (3, 2), (2, 2), (1, 3), (3, 1), (1, 2), (2, 1), (1, 1)]
)

ALL_COORDS: tuple[GridCoord, ...] = tuple(
    GridCoord(x, y) for y in (3, 2, 1) for x in (1, 2, 3)
)


@dataclass(frozen=True)
class PositionWeights:
    """Per-cell (alpha, beta) multiplier pairs.

    alpha amplifies labels classified toward the x-axis word, beta
    those toward the y-axis word; each must grow strictly toward its
    axis.
    """

    grid: dict[GridCoord, tuple[float, float]]

    def __post_init__(self):
        for coord in ALL_COORDS:
            if coord not in self.grid:
                raise ValidationError(f"position weights missing cell ({coord.x}, {coord.y})")
            alpha, beta = self.grid[coord]
            if alpha <= 0 or beta <= 0:
                raise ValidationError(
                    f"weights at ({coord.x}, {coord.y}) must be positive, got ({alpha}, {beta})"
                )
        for y in (1, 2, 3):
            for x in (1, 2):
                if self.grid[GridCoord(x, y)][0] >= self.grid[GridCoord(x + 1, y)][0]:
                    raise ValidationError(f"alpha must increase with x (row y={y})")
        for x in (1, 2, 3):
            for y in (1, 2):
                if self.grid[GridCoord(x, y)][1] >= self.grid[GridCoord(x, y + 1)][1]:
                    raise ValidationError(f"beta must increase with y (column x={x})")

    def at(self, coord: GridCoord) -> tuple[float, float]:
        return self.grid[coord]

    def scaled(self, factor: float) -> "PositionWeights":
        return PositionWeights(
            grid={c: (a * factor, b * factor) for c, (a, b) in self.grid.items()}
        )


def default_position_weights() -> PositionWeights:
    """Default table: alpha = 1 + 0.25(x-2), beta = 1 + 0.25(y-2).

    Center cell is the neutral (1.0, 1.0); each step toward an axis
    word adds 0.25 to the matching weight.
    """
    return PositionWeights(
        grid={
            coord: (1.0 + 0.25 * (coord.x - 2), 1.0 + 0.25 * (coord.y - 2))
            for coord in ALL_COORDS
        }
    )


def position_weights_from_table(table: list[list[list[float]]]) -> PositionWeights:
    """Build weights from a 3x3 array of [alpha, beta] pairs indexed [y-1][x-1]."""
    if len(table) != 3 or any(len(row) != 3 for row in table):
        raise ValidationError("position_weights must be a 3x3 array of [alpha, beta] pairs")
    grid: dict[GridCoord, tuple[float, float]] = {}
    for y in (1, 2, 3):
        for x in (1, 2, 3):
            pair = table[y - 1][x - 1]
            if len(pair) != 2:
                raise ValidationError(f"cell [{y - 1}][{x - 1}] must be an [alpha, beta] pair")
            grid[GridCoord(x, y)] = (float(pair[0]), float(pair[1]))
    return PositionWeights(grid=grid)


def weights_at(pw: PositionWeights, at: GridCoord) -> tuple[float, float]:
    return pw.at(at)


@dataclass
class BoardState:
    """Grid cell -> image id mapping plus the axis words."""

    axis_w1: str
    axis_w2: str
    cells: dict[GridCoord, str | None] = field(
        default_factory=lambda: {c: None for c in ALL_COORDS}
    )

    def copy(self) -> "BoardState":
        return BoardState(axis_w1=self.axis_w1, axis_w2=self.axis_w2, cells=dict(self.cells))

    def coord_of(self, image_id: str) -> GridCoord | None:
        for coord, occupant in self.cells.items():
            if occupant == image_id:
                return coord
        return None

    def occupied(self) -> list[tuple[GridCoord, str]]:
        """Occupied cells in canonical fill order (deterministic iteration)."""
        return [(c, self.cells[c]) for c in GRID_ORDER if self.cells[c] is not None]

    def empty_cells(self) -> list[GridCoord]:
        return [c for c in GRID_ORDER if self.cells[c] is None]

    def image_ids(self) -> list[str]:
        return [img for _, img in self.occupied()]


def place_initial(board: BoardState, image_ids: list[str], rng_seed: int) -> BoardState:
    """Assign up to nine images to cells by a seeded random permutation.

    With fewer than nine images only the leading cells of the fill
    order are used, so the trailing cells stay empty. Deterministic for
    a given seed.
    """
    if any(v is not None for v in board.cells.values()):
        raise ValidationError("initial placement requires an empty board")
    if not image_ids:
        raise ValidationError("initial placement needs at least one image")
    ids = image_ids[:9]
    cells = list(GRID_ORDER[: len(ids)])
    perm = np.random.default_rng(rng_seed).permutation(len(cells))
    new = board.copy()
    for i, image_id in enumerate(ids):
        new.cells[cells[perm[i]]] = image_id
    return new


def move_image(board: BoardState, image_id: str, to: GridCoord) -> BoardState:
    """Move an image; if the target cell is occupied the two images swap."""
    src = board.coord_of(image_id)
    if src is None:
        raise ImageNotFoundError(f"image {image_id!r} is not on the board")
    new = board.copy()
    new.cells[src] = new.cells[to]
    new.cells[to] = image_id
    return new


def delete_image(board: BoardState, image_id: str) -> BoardState:
    """Remove an image from its cell; the caller keeps the id in its seen-set."""
    src = board.coord_of(image_id)
    if src is None:
        raise ImageNotFoundError(f"image {image_id!r} is not on the board")
    new = board.copy()
    new.cells[src] = None
    return new
