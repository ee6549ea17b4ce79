"""Subdivision sequences for Laakso spaces.

A Laakso space is determined by a single piece of data: the integer
sequence j_1, j_2, ... of cell subdivisions applied at each level of the
quantum-graph approximation.  Everything else (cell counts, dimensions,
spectra) is derived from it.  Sequences are either an explicit finite
prefix or a repeating block of period T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class SequenceTooShort(ValueError):
    """An explicit sequence was indexed past its last defined entry."""


@dataclass(frozen=True)
class JSequence:
    """Subdivision sequence j_1, j_2, ... of a Laakso space.

    Parameters
    ----------
    values : tuple of int
        The explicit prefix, or one full period if `periodic`.
    periodic : bool
        If True, `values` repeats forever with period T = len(values).

    Every entry must be >= 2: a subdivision count of 1 performs no
    subdivision and is rejected rather than silently accepted.
    """

    values: tuple[int, ...]
    periodic: bool = False

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ValueError("subdivision sequence must be nonempty")
        for v in values:
            if v < 2:
                raise ValueError(f"subdivision counts must be >= 2, got {v}")

    @property
    def period(self) -> int | None:
        return len(self.values) if self.periodic else None

    def j(self, i: int) -> int:
        """Return j_i (1-based).  Explicit sequences never auto-extend."""
        if i < 1:
            raise ValueError(f"level index must be >= 1, got {i}")
        if self.periodic:
            return self.values[(i - 1) % len(self.values)]
        if i > len(self.values):
            raise SequenceTooShort(
                f"explicit sequence of length {len(self.values)} has no j_{i}"
            )
        return self.values[i - 1]

    def prefix(self, n: int) -> tuple[int, ...]:
        """The first n entries j_1..j_n."""
        return tuple(self.j(i) for i in range(1, n + 1))

    def describe(self) -> str:
        body = ",".join(str(v) for v in self.values)
        return f"[{body}] periodic" if self.periodic else f"[{body}]"


def level_products(seq: JSequence, n: int) -> list[int]:
    """Cumulative products I_0..I_n with I_0 = 1 and I_k = I_{k-1} * j_k.

    I_n is the number of columns of the level-n graph; the unperturbed
    cell length at level n is 1/I_n.
    """
    if n < 0:
        raise ValueError(f"level must be >= 0, got {n}")
    entries = [1]
    for i in range(1, n + 1):
        entries.append(entries[-1] * seq.j(i))
    return entries


def hausdorff_dimension(seq: JSequence, n: int | None = None) -> float:
    """Hausdorff dimension 1 + log(2^T)/log(I_T) of a periodic space.

    For an explicit sequence the limit is not guaranteed to exist, so a
    level `n` must be supplied and the finite-level estimate
    1 + log(2^n)/log(I_n) is returned.
    """
    if seq.periodic:
        T = len(seq.values)
        I_T = level_products(seq, T)[T]
        return 1.0 + T * math.log(2.0) / math.log(I_T)
    if n is None:
        raise ValueError("explicit sequence: a level n is required for a "
                         "finite-level dimension estimate")
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    I_n = level_products(seq, n)[n]
    return 1.0 + n * math.log(2.0) / math.log(I_n)
