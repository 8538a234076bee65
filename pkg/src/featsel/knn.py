"""
Majority-vote K-NN on Euclidean distance. A tied vote drops the farthest
neighbour and votes again, down to k = 1.
"""
from __future__ import annotations

import numpy as np
from sklearn.neighbors import NearestNeighbors


def vote(neighbor_labels: np.ndarray) -> int:
    """Labels ordered nearest first."""
    kk = len(neighbor_labels)
    while kk > 1:
        counts = np.bincount(neighbor_labels[:kk])
        top = counts.max()
        winners = np.flatnonzero(counts == top)
        if len(winners) == 1:
            return int(winners[0])
        kk -= 1
    return int(neighbor_labels[0])


def knn_predict(train_x: np.ndarray, train_y: np.ndarray, queries: np.ndarray, k: int) -> np.ndarray:
    if len(train_x) == 0:
        raise ValueError("K-NN needs at least one training row")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    k = min(k, len(train_x))
    nn = NearestNeighbors(n_neighbors=k, algorithm="brute", metric="euclidean")
    nn.fit(train_x)
    _, idx = nn.kneighbors(np.atleast_2d(queries))
    labels = np.asarray(train_y, dtype=int)[idx]
    return np.array([vote(row) for row in labels], dtype=int)


def knn_classify(train_x: np.ndarray, train_y: np.ndarray, query: np.ndarray, k: int) -> int:
    return int(knn_predict(train_x, train_y, np.asarray(query, dtype=float)[None, :], k)[0])
