#!/usr/bin/env python3
"""Word-embedding basics: cosine similarity, weighted means, and
top-N most-similar-word queries on the bundled demo vocabulary.

Run:  python3 demos/01_word_similarity.py
"""

from moodboard import embedding, fixtures

store = fixtures.build_demo_store()
print(f"demo vocabulary: {len(store)} words, {store.dim} dimensions\n")

print("pairwise cosine similarities:")
for a, b in [
    ("ergonomic", "comfortable"),
    ("sofa", "couch"),
    ("sofa", "tower"),
    ("desk", "keyboard"),
    ("silk", "velvet"),
]:
    value = embedding.cos_sim(embedding.vector_of(store, a), embedding.vector_of(store, b))
    print(f"  cos({a:>10s}, {b:<11s}) = {value:+.4f}")

print("\nnearest neighbours:")
for word in ("sofa", "tower", "silk", "ergonomic"):
    results = embedding.most_similar(
        store, positives=[embedding.vector_of(store, word)], n=4, exclude={word}
    )
    neighbours = ", ".join(f"{r.word} ({r.score:.3f})" for r in results)
    print(f"  {word:>10s} -> {neighbours}")

print("\nvector arithmetic with positives and negatives:")
print("  mean(sofa, desk) - desk should land near plain seating words")
results = embedding.most_similar(
    store,
    positives=[embedding.vector_of(store, "sofa"), embedding.vector_of(store, "desk")],
    negatives=[embedding.vector_of(store, "desk")],
    n=3,
    exclude={"sofa", "desk"},
)
for r in results:
    print(f"    {r.word:<16s} {r.score:.3f}")

print("\nweighted means are plain arithmetic (sum of weight * vector / count):")
mean = embedding.mean_vector(
    [
        (embedding.vector_of(store, "sofa"), 0.9),
        (embedding.vector_of(store, "lamp"), 0.5),
    ]
)
closest = embedding.most_similar(store, positives=[mean], n=3)
print("  0.9*sofa + 0.5*lamp / 2 is closest to:",
      ", ".join(r.word for r in closest))
