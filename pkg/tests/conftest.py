"""Shared helpers for comparing small sets of complex eigenvalues."""

import itertools

import numpy as np


def best_match_errors(values, references) -> np.ndarray:
    """Per-element |value - reference| under the permutation minimizing the total.

    Robust way to compare eigenvalue multisets when sorting is ambiguous
    (coinciding real or imaginary parts).
    """
    values = np.asarray(values, dtype=complex)
    references = np.asarray(references, dtype=complex)
    assert values.shape == references.shape
    k = values.size
    best = None
    for perm in itertools.permutations(range(k)):
        errors = np.abs(values[list(perm)] - references)
        if best is None or errors.sum() < best.sum():
            best = errors
    return best
