"""Gaussian elimination over an arbitrary exact field."""

from __future__ import annotations

from typing import Sequence


def _is_zero(a) -> bool:
    return not a


class IncrementalDependency:
    """Detect the first vector linearly dependent on the previously added ones.

    ``add(v)`` returns ``None`` while the vectors stay independent and otherwise
    the coefficients ``c_0..c_k`` (with ``c_k = 1``) of the relation
    ``sum c_i v_i = 0``.
    """

    def __init__(self, field):
        self.field = field
        self.rows: list[tuple[list, list, int]] = []  # (reduced, combination, pivot)
        self.count = 0

    def add(self, vec: Sequence):
        F = self.field
        k = self.count
        v = list(vec)
        comb = [F.zero] * k + [F.one]
        # rows are processed in insertion order: a stored row vanishes at the
        # pivots of all rows stored before it, so no back-substitution is needed
        for red, cmb, piv in self.rows:
            if len(v) < len(red):
                v.extend([F.zero] * (len(red) - len(v)))
            a = v[piv]
            if _is_zero(a):
                continue
            for j in range(piv, len(red)):
                if not _is_zero(red[j]):
                    v[j] = v[j] - a * red[j]
            for j, c in enumerate(cmb):
                if not _is_zero(c):
                    comb[j] = comb[j] - a * c
        self.count += 1
        piv = next((j for j, a in enumerate(v) if not _is_zero(a)), None)
        if piv is None:
            return comb
        inv = F.one / v[piv]
        v = [a * inv if not _is_zero(a) else a for a in v]
        comb = [c * inv if not _is_zero(c) else c for c in comb]
        self.rows.append((v, comb, piv))
        return None


def rref(matrix: list[list], field):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    F = field
    m = [list(r) for r in matrix]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if not _is_zero(m[i][c])), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = F.one / m[r][c]
        m[r] = [a * inv if not _is_zero(a) else a for a in m[r]]
        for i in range(nrows):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b if not _is_zero(b) else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def nullspace(matrix: list[list], field, ncols: int | None = None) -> list[list]:
    """Basis of the right kernel {v : M v = 0}."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    rows, pivots = rref(matrix, field) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, pc in zip(rows, pivots):
            if not _is_zero(row[f]):
                v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(matrix: list[list], rhs: list, field):
    """One solution of M v = rhs, or None when inconsistent."""
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(r) + [b] for r, b in zip(matrix, rhs)]
    rows, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    v = [field.zero] * ncols
    for row, pc in zip(rows, pivots):
        v[pc] = row[-1]
    return v
