#!/usr/bin/env python3
"""Striking labels: negative words subtract from the board mean.

The strike variant computes U = (sum of weighted image vectors - sum
of struck word vectors) / (m + n), so a rejected label pushes the next
query away from that meaning.

Run:  python3 demos/03_negative_feedback.py
"""

from moodboard import embedding, fixtures
from moodboard.board import BoardState, GridCoord, default_position_weights
from moodboard.embedding import WordVector
from moodboard.feedback import (
    ConceptSpace,
    board_mean,
    board_mean_with_negatives,
    new_query,
)
from moodboard.imagery import LabelScore, LabeledImage

store = fixtures.build_demo_store()
pw = default_position_weights()
space = ConceptSpace(
    w1="ergonomic", w2="comfortable", current_query=["ergonomic", "comfortable"]
)

images = {
    "shot-a": LabeledImage(
        id="shot-a", uri="", field="industrial_design",
        labels=(LabelScore("sofa", 0.9), LabelScore("cushion", 0.8)),
    ),
    "shot-b": LabeledImage(
        id="shot-b", uri="", field="industrial_design",
        labels=(LabelScore("lounge", 0.85), LabelScore("plush", 0.6)),
    ),
}
board = BoardState(axis_w1="ergonomic", axis_w2="comfortable")
board.cells[GridCoord(2, 2)] = "shot-a"
board.cells[GridCoord(3, 2)] = "shot-b"

plain = board_mean(board, images, pw, space, store)
print("board of two plush-seating images, nothing struck:")
print(f"  next query: {new_query(space, plain, store).words}")

for struck in (["couch"], ["couch", "plush"]):
    u = board_mean_with_negatives(board, images, pw, space, store, negatives=set(struck))
    update = new_query(
        ConceptSpace(
            w1=space.w1, w2=space.w2,
            current_query=list(space.current_query), negative_words=set(struck),
        ),
        u, store,
    )
    cosines = {
        word: embedding.cos_sim(WordVector(None, u.values), embedding.vector_of(store, word))
        for word in struck
    }
    shown = ", ".join(f"cos(U, {w})={c:+.3f}" for w, c in cosines.items())
    print(f"\nafter striking {struck}:")
    print(f"  {shown}")
    print(f"  next query: {update.words}")

print("\nstriking every meaning an image has cancels it from the mean;")
print("an all-cancelling board yields a zero vector and the similarity")
print("query refuses it (domain error) rather than returning noise.")
