#!/usr/bin/env python3
"""How repositioning an image steers the next query.

Each cell of the 3x3 board carries an (alpha, beta) weight pair; beta
grows upward (toward the y-axis word), alpha grows rightward (toward
the x-axis word). A label leaning toward the y-axis word is multiplied
by beta, one leaning toward the x-axis word by alpha, so dragging an
image up or right amplifies that side of its meaning in the board
mean.

Run:  python3 demos/02_board_steering.py
"""

from moodboard import embedding, fixtures
from moodboard.board import BoardState, GridCoord, default_position_weights
from moodboard.embedding import WordVector
from moodboard.feedback import ConceptSpace, board_mean, new_query
from moodboard.imagery import LabelScore, LabeledImage

store = fixtures.build_demo_store()
pw = default_position_weights()
space = ConceptSpace(
    w1="ergonomic", w2="comfortable", current_query=["ergonomic", "comfortable"]
)
w1_vec = embedding.vector_of(store, "ergonomic")
w2_vec = embedding.vector_of(store, "comfortable")

print("position weight table (alpha, beta), y=3 row first:")
for y in (3, 2, 1):
    row = "   ".join(f"({pw.at(GridCoord(x, y))[0]:.2f}, {pw.at(GridCoord(x, y))[1]:.2f})" for x in (1, 2, 3))
    print(f"  y={y}:  {row}")

images = {
    "desk-shot": LabeledImage(
        id="desk-shot", uri="", field="industrial_design",
        labels=(LabelScore("desk", 0.9), LabelScore("keyboard", 0.7)),
    ),
    "sofa-shot": LabeledImage(
        id="sofa-shot", uri="", field="industrial_design",
        labels=(LabelScore("sofa", 0.9), LabelScore("cushion", 0.6)),
    ),
}


def describe(board, note):
    u = board_mean(board, images, pw, space, store)
    cos1 = embedding.cos_sim(WordVector(None, u.values), w1_vec)
    cos2 = embedding.cos_sim(WordVector(None, u.values), w2_vec)
    update = new_query(space, u, store)
    print(f"\n{note}")
    print(f"  cos(U, ergonomic)   = {cos1:.4f}")
    print(f"  cos(U, comfortable) = {cos2:.4f}")
    print(f"  next query would be: {update.words}")


board = BoardState(axis_w1="ergonomic", axis_w2="comfortable")
board.cells[GridCoord(2, 2)] = "desk-shot"
board.cells[GridCoord(2, 1)] = "sofa-shot"
describe(board, "desk image at the neutral center (2,2):")

board_up = board.copy()
board_up.cells[GridCoord(2, 2)] = None
board_up.cells[GridCoord(2, 3)] = "desk-shot"
describe(board_up, "desk image dragged up to (2,3) — beta 1.0 -> 1.25:")

board_right = board.copy()
board_right.cells[GridCoord(2, 1)] = None
board_right.cells[GridCoord(3, 1)] = "sofa-shot"
describe(board_right, "sofa image dragged right to (3,1) — alpha 1.0 -> 1.25:")
