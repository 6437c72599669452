"""Label classification, weighted image vectors, board means, query updates."""

import numpy as np
import pytest

from moodboard import board as board_ops
from moodboard import embedding, feedback
from moodboard.board import BoardState, GridCoord, default_position_weights
from moodboard.embedding import WordVector
from moodboard.errors import AllLabelsOOV, EmptyBoardError, VectorDomainError
from moodboard.feedback import (
    W1_CLASS,
    W2_CLASS,
    ConceptSpace,
    board_mean,
    board_mean_with_negatives,
    classify_label,
    image_weighted_vector,
    new_query,
)
from moodboard.imagery import LabelScore, LabeledImage

from conftest import make_store
from oracles import brute_force_board_mean


def image(image_id, labels, field="industrial_design"):
    return LabeledImage(
        id=image_id,
        uri=f"mem://{image_id}",
        field=field,
        labels=tuple(LabelScore(label=lab, score=s) for lab, s in labels),
    )


def space_for(store):
    return ConceptSpace(w1="w1", w2="w2", current_query=["w1", "w2"])


def board_with(placements, w1="w1", w2="w2"):
    board = BoardState(axis_w1=w1, axis_w2=w2)
    for (x, y), image_id in placements.items():
        board.cells[GridCoord(x, y)] = image_id
    return board


class TestClassifyLabel:
    def test_w1_vector_classifies_w1(self, basis_store_2d):
        w1 = embedding.vector_of(basis_store_2d, "w1")
        w2 = embedding.vector_of(basis_store_2d, "w2")
        assert classify_label(w1, w1, w2) == W1_CLASS

    def test_w2_vector_classifies_w2(self, basis_store_2d):
        w1 = embedding.vector_of(basis_store_2d, "w1")
        w2 = embedding.vector_of(basis_store_2d, "w2")
        assert classify_label(w2, w1, w2) == W2_CLASS

    def test_equidistant_ties_to_w2(self, basis_store_2d):
        w1 = embedding.vector_of(basis_store_2d, "w1")
        w2 = embedding.vector_of(basis_store_2d, "w2")
        middle = embedding.vector_of(basis_store_2d, "both")
        assert classify_label(middle, w1, w2) == W2_CLASS


class TestImageWeightedVector:
    def test_single_unit_label_at_center(self, basis_store_2d):
        img = image("solo", [("mostly1", 1.0)])
        got = image_weighted_vector(
            img, GridCoord(2, 2), default_position_weights(),
            space_for(basis_store_2d), basis_store_2d,
        )
        expected = embedding.vector_of(basis_store_2d, "mostly1").values
        assert np.allclose(got.values, expected, atol=1e-12)

    def test_two_w1_labels_at_2_3(self, basis_store_2d):
        # Both labels lean toward w1, so both take beta = 1.25 at (2,3).
        img = image("duo", [("w1", 0.8), ("mostly1", 0.6)])
        got = image_weighted_vector(
            img, GridCoord(2, 3), default_position_weights(),
            space_for(basis_store_2d), basis_store_2d,
        )
        v1 = embedding.vector_of(basis_store_2d, "w1").values
        v2 = embedding.vector_of(basis_store_2d, "mostly1").values
        expected = 1.25 * (0.8 * v1 + 0.6 * v2) / 2
        assert np.allclose(got.values, expected, atol=1e-12)

    def test_mixed_classes_take_separate_weights(self, basis_store_2d):
        # w1-class label gets beta, w2-class label gets alpha, per label.
        img = image("mix", [("mostly1", 1.0), ("mostly2", 1.0)])
        at = GridCoord(3, 3)  # alpha = beta = 1.25
        low = GridCoord(1, 3)  # alpha = 0.75, beta = 1.25
        pw = default_position_weights()
        space = space_for(basis_store_2d)
        v1 = embedding.vector_of(basis_store_2d, "mostly1").values
        v2 = embedding.vector_of(basis_store_2d, "mostly2").values
        got = image_weighted_vector(img, low, pw, space, basis_store_2d)
        expected = (1.25 * v1 + 0.75 * v2) / 2
        assert np.allclose(got.values, expected, atol=1e-12)
        got_high = image_weighted_vector(img, at, pw, space, basis_store_2d)
        assert np.allclose(got_high.values, 1.25 * (v1 + v2) / 2, atol=1e-12)

    def test_oov_labels_are_skipped_in_k(self, basis_store_2d):
        img = image("partial", [("mostly1", 1.0), ("unknownword", 0.9)])
        got = image_weighted_vector(
            img, GridCoord(2, 2), default_position_weights(),
            space_for(basis_store_2d), basis_store_2d,
        )
        expected = embedding.vector_of(basis_store_2d, "mostly1").values  # k = 1
        assert np.allclose(got.values, expected, atol=1e-12)

    def test_all_oov_raises_skip_signal(self, basis_store_2d):
        img = image("ghost", [("unknown", 0.9), ("alsounknown", 0.8)])
        with pytest.raises(AllLabelsOOV):
            image_weighted_vector(
                img, GridCoord(2, 2), default_position_weights(),
                space_for(basis_store_2d), basis_store_2d,
            )


class TestBoardMean:
    def test_single_center_image_single_label(self, basis_store_2d):
        imgs = {"solo": image("solo", [("mostly2", 1.0)])}
        board = board_with({(2, 2): "solo"})
        got = board_mean(
            board, imgs, default_position_weights(), space_for(basis_store_2d), basis_store_2d
        )
        assert got.contributing_images == 1
        assert got.contributing_negatives == 0
        expected = embedding.vector_of(basis_store_2d, "mostly2").values
        assert np.allclose(got.values, expected, atol=1e-12)

    def test_two_images_average(self, basis_store_2d):
        imgs = {
            "a": image("a", [("mostly1", 1.0)]),
            "b": image("b", [("mostly2", 1.0)]),
        }
        # Only one cell carries (1.0, 1.0), so neutralize the weights with
        # a near-flat table to isolate the two-point mean.
        flat = board_ops.PositionWeights(
            grid={c: (1.0 + 1e-9 * c.x, 1.0 + 1e-9 * c.y) for c in board_ops.ALL_COORDS}
        )
        board = board_with({(1, 1): "a", (3, 3): "b"})
        got = board_mean(board, imgs, flat, space_for(basis_store_2d), basis_store_2d)
        u = embedding.vector_of(basis_store_2d, "mostly1").values
        v = embedding.vector_of(basis_store_2d, "mostly2").values
        assert np.allclose(got.values, (u + v) / 2, atol=1e-6)
        assert got.contributing_images == 2

    def test_oov_image_skipped_but_board_usable(self, basis_store_2d):
        imgs = {
            "ok": image("ok", [("mostly1", 1.0)]),
            "ghost": image("ghost", [("nothing", 0.5)]),
        }
        board = board_with({(2, 2): "ok", (1, 1): "ghost"})
        got = board_mean(
            board, imgs, default_position_weights(), space_for(basis_store_2d), basis_store_2d
        )
        assert got.contributing_images == 1

    def test_empty_board_rejected(self, basis_store_2d):
        board = board_with({})
        with pytest.raises(EmptyBoardError):
            board_mean(
                board, {}, default_position_weights(), space_for(basis_store_2d), basis_store_2d
            )

    def test_full_board_matches_brute_force_oracle(self, demo_store, demo_source):
        results = demo_source.search(
            ["ergonomic", "comfortable"], {"industrial_design", "architecture", "fashion"},
            9, set(), demo_store,
        )
        imgs = {img.id: img for img in results}
        board = board_ops.place_initial(
            BoardState(axis_w1="ergonomic", axis_w2="comfortable"),
            [img.id for img in results], rng_seed=13,
        )
        space = ConceptSpace(w1="ergonomic", w2="comfortable", current_query=["ergonomic", "comfortable"])
        pw = default_position_weights()
        got = board_mean(board, imgs, pw, space, demo_store)

        placements = []
        for coord, image_id in board.occupied():
            labels = [(ls.label, ls.score) for ls in imgs[image_id].labels]
            placements.append(((coord.x, coord.y), labels))
        weight_table = {(c.x, c.y): pw.at(c) for c in board_ops.ALL_COORDS}
        word_vectors = {
            w: list(demo_store.matrix[demo_store.word_index[w]]) for w in demo_store.vocab
        }
        expected = brute_force_board_mean(
            placements, weight_table,
            list(demo_store.matrix[demo_store.word_index["ergonomic"]]),
            list(demo_store.matrix[demo_store.word_index["comfortable"]]),
            word_vectors,
        )
        assert np.allclose(got.values, expected, atol=1e-9)


class TestBoardMeanWithNegatives:
    def test_no_negatives_bitwise_equal(self, basis_store_2d):
        imgs = {"a": image("a", [("mostly1", 0.9), ("mostly2", 0.7)])}
        board = board_with({(3, 2): "a"})
        space = space_for(basis_store_2d)
        pw = default_position_weights()
        plain = board_mean(board, imgs, pw, space, basis_store_2d)
        with_none = board_mean_with_negatives(
            board, imgs, pw, space, basis_store_2d, negatives=frozenset()
        )
        assert np.array_equal(plain.values, with_none.values)

    def test_exact_cancellation_yields_domain_error_downstream(self, basis_store_2d):
        imgs = {"a": image("a", [("mostly1", 1.0)])}
        board = board_with({(2, 2): "a"})
        space = space_for(basis_store_2d)
        got = board_mean_with_negatives(
            board, imgs, default_position_weights(), space, basis_store_2d,
            negatives={"mostly1"},
        )
        assert np.allclose(got.values, 0.0, atol=1e-15)
        with pytest.raises(VectorDomainError):
            embedding.most_similar(
                basis_store_2d, positives=[WordVector(None, got.values)], n=1
            )

    def test_hand_computed_m2_n1(self, basis_store_2d):
        imgs = {
            "a": image("a", [("mostly1", 1.0)]),
            "b": image("b", [("mostly2", 1.0)]),
        }
        board = board_with({(2, 2): "a", (2, 3): "b"})
        space = space_for(basis_store_2d)
        got = board_mean_with_negatives(
            board, imgs, default_position_weights(), space, basis_store_2d,
            negatives={"both"},
        )
        u1 = embedding.vector_of(basis_store_2d, "mostly1").values  # beta 1.0 at (2,2)
        u2 = 1.0 * embedding.vector_of(basis_store_2d, "mostly2").values  # alpha 1.0 at (2,3)
        g = embedding.vector_of(basis_store_2d, "both").values
        assert np.allclose(got.values, (u1 + u2 - g) / 3, atol=1e-12)
        assert (got.contributing_images, got.contributing_negatives) == (2, 1)


class TestNewQuery:
    def test_ranked_by_fixture_cosines(self):
        store = make_store(
            {
                "lounge": [0.9, 0.4, 0.1],
                "sofa": [0.85, 0.5, 0.1],
                "chair": [0.6, 0.2, 0.4],
                "w1": [1, 0, 0],
                "w2": [0, 1, 0],
            }
        )
        space = ConceptSpace(w1="w1", w2="w2", current_query=["lounge"])
        u = feedback.BoardVector(
            values=store.matrix[store.word_index["lounge"]],
            contributing_images=1, contributing_negatives=0,
        )
        update = new_query(space, u, store, top_n=20, size=2)
        lounge = embedding.vector_of(store, "lounge")
        cos_sofa = embedding.cos_sim(lounge, embedding.vector_of(store, "sofa"))
        cos_chair = embedding.cos_sim(lounge, embedding.vector_of(store, "chair"))
        expected = ["sofa", "chair"] if cos_sofa >= cos_chair else ["chair", "sofa"]
        assert update.words == expected
        assert not update.stalled

    def test_everything_excluded_stalls(self, basis_store_2d):
        space = ConceptSpace(
            w1="w1", w2="w2", current_query=["both", "mostly1", "mostly2"]
        )
        u = feedback.BoardVector(
            values=basis_store_2d.matrix[0], contributing_images=1, contributing_negatives=0
        )
        update = new_query(space, u, basis_store_2d, top_n=20, size=2)
        assert update.stalled
        assert update.words == ["both", "mostly1", "mostly2"]
        assert update.top_words == []

    def test_single_word_query_size(self, demo_store):
        space = ConceptSpace(
            w1="ergonomic", w2="comfortable", current_query=["ergonomic", "comfortable"]
        )
        u = feedback.BoardVector(
            values=demo_store.matrix[demo_store.word_index["sofa"]],
            contributing_images=1, contributing_negatives=0,
        )
        update = new_query(space, u, demo_store, top_n=20, size=1)
        assert len(update.words) == 1

    def test_junk_tokens_never_suggested(self, demo_store):
        space = ConceptSpace(
            w1="ergonomic", w2="comfortable", current_query=["ergonomic", "comfortable"]
        )
        rng = np.random.default_rng(3)
        for _ in range(20):
            u = feedback.BoardVector(
                values=rng.standard_normal(demo_store.dim),
                contributing_images=1, contributing_negatives=0,
            )
            update = new_query(space, u, demo_store, top_n=20, size=2)
            for word in update.words + [r.word for r in update.top_words]:
                assert all(ch == "_" or ch.isalpha() for ch in word), word

    def test_negative_words_excluded_in_both_forms(self, demo_store):
        space = ConceptSpace(
            w1="ergonomic", w2="comfortable",
            current_query=["ergonomic", "comfortable"],
            negative_words={"interior design"},
        )
        u = feedback.BoardVector(
            values=demo_store.matrix[demo_store.word_index["interior_design"]],
            contributing_images=1, contributing_negatives=0,
        )
        update = new_query(space, u, demo_store, top_n=20, size=2)
        assert "interior_design" not in [r.word for r in update.top_words]


class TestInvariants:
    def _steering_setup(self, basis_store_2d):
        imgs = {
            "A": image("A", [("w1", 1.0)]),
            "B": image("B", [("w2", 1.0)]),
        }
        space = space_for(basis_store_2d)
        pw = default_position_weights()
        return imgs, space, pw

    def test_steering_raises_w1_lowers_w2(self, basis_store_2d):
        imgs, space, pw = self._steering_setup(basis_store_2d)
        w1 = embedding.vector_of(basis_store_2d, "w1")
        w2 = embedding.vector_of(basis_store_2d, "w2")
        before = board_mean(
            board_with({(2, 2): "A", (2, 1): "B"}), imgs, pw, space, basis_store_2d
        )
        after = board_mean(
            board_with({(2, 3): "A", (2, 1): "B"}), imgs, pw, space, basis_store_2d
        )
        cos_before = embedding.cos_sim(WordVector(None, before.values), w1)
        cos_after = embedding.cos_sim(WordVector(None, after.values), w1)
        assert cos_after > cos_before
        cos2_before = embedding.cos_sim(WordVector(None, before.values), w2)
        cos2_after = embedding.cos_sim(WordVector(None, after.values), w2)
        assert cos2_after < cos2_before

    def test_negative_feedback_pushes_away(self, demo_store):
        imgs = {
            "a": image("a", [("sofa", 0.9), ("cushion", 0.7)]),
            "b": image("b", [("lounge", 0.8)]),
        }
        board = board_with({(2, 2): "a", (3, 2): "b"}, w1="ergonomic", w2="comfortable")
        space = ConceptSpace(
            w1="ergonomic", w2="comfortable", current_query=["ergonomic", "comfortable"]
        )
        pw = default_position_weights()
        u = board_mean(board, imgs, pw, space, demo_store)
        struck = embedding.vector_of(demo_store, "couch")
        assert embedding.cos_sim(WordVector(None, u.values), struck) > 0
        u_new = board_mean_with_negatives(
            board, imgs, pw, space, demo_store, negatives={"couch"}
        )
        assert (
            embedding.cos_sim(WordVector(None, u_new.values), struck)
            < embedding.cos_sim(WordVector(None, u.values), struck)
        )

    def test_uniform_weight_scaling(self, demo_store, demo_source):
        results = demo_source.search(
            ["ergonomic", "comfortable"], {"industrial_design"}, 9, set(), demo_store
        )
        imgs = {img.id: img for img in results}
        board = board_ops.place_initial(
            BoardState(axis_w1="ergonomic", axis_w2="comfortable"),
            [img.id for img in results], rng_seed=3,
        )
        space = ConceptSpace(
            w1="ergonomic", w2="comfortable", current_query=["ergonomic", "comfortable"]
        )
        pw = default_position_weights()
        base_u = board_mean(board, imgs, pw, space, demo_store)
        scaled_u = board_mean(board, imgs, pw.scaled(3.7), space, demo_store)
        assert np.allclose(scaled_u.values, 3.7 * base_u.values, atol=1e-9)
        base_q = new_query(space, base_u, demo_store)
        scaled_q = new_query(space, scaled_u, demo_store)
        assert [r.word for r in base_q.top_words] == [r.word for r in scaled_q.top_words]
        assert base_q.words == scaled_q.words
