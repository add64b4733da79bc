"""Dense GF(2) matrices stored as one int bitset per row."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass


def rank_of_rows(rows: Sequence[int]) -> int:
    """Rank over GF(2) of the matrix whose rows are the given bitsets."""
    # xor basis keyed by leading bit
    basis: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            pivot = basis.get(top)
            if pivot is None:
                basis[top] = row
                rank += 1
                break
            row ^= pivot
    return rank


@dataclass(frozen=True)
class Gf2Matrix:
    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.rows:
            raise ValueError(f"{len(self.bits)} row bitsets for {self.rows} rows")
        limit = 1 << self.cols
        for r, row in enumerate(self.bits):
            if not 0 <= row < limit:
                raise ValueError(f"row {r} has bits beyond column {self.cols}")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> Gf2Matrix:
        cols = len(entries[0]) if entries else 0
        bits = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            bits.append(sum((v & 1) << j for j, v in enumerate(row)))
        return cls(len(entries), cols, tuple(bits))

    def entry(self, r: int, c: int) -> int:
        return self.bits[r] >> c & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.entry(r, c) for c in range(self.cols)] for r in range(self.rows)]

    def transpose(self) -> Gf2Matrix:
        t = [0] * self.cols
        for r, row in enumerate(self.bits):
            c = 0
            while row:
                if row & 1:
                    t[c] |= 1 << r
                row >>= 1
                c += 1
        return Gf2Matrix(self.cols, self.rows, tuple(t))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Gf2Matrix:
        bits = []
        for r in rows:
            bits.append(sum(self.entry(r, c) << j for j, c in enumerate(cols)))
        return Gf2Matrix(len(rows), len(cols), tuple(bits))

    def rank(self) -> int:
        return rank_of_rows(self.bits)


def gf2_rank(m: Gf2Matrix) -> int:
    return m.rank()


def adjacency_matrix(d) -> Gf2Matrix:
    """GF(2) adjacency matrix of a digraph, rows are tails."""
    return Gf2Matrix(d.n, d.n, tuple(d.out_vertex_masks))
