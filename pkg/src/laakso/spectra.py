"""Closed-form eigenvalue families with multiplicities.

Three generators are provided, each returning every eigenvalue up to a
requested ceiling:

* `free_spectrum` - the Laplacian with Kirchhoff conditions.  Five
  families: interval modes k^2 pi^2 (mult 1), V modes (k+1/2)^2 pi^2 I_n^2
  (mult 2^n), loop modes k^2 pi^2 I_n^2 (mult 2^(n-1) (j_n-2) I_{n-1}),
  cross modes k^2 pi^2 I_n^2 (mult 2^(n-1) (I_{n-1}-1)), and wide cross
  modes k^2 pi^2 I_n^2 / 4 (mult 2^(n-2) (I_{n-1}-1)).

* `square_well_spectrum` - the Hamiltonian with an infinite square well
  on [1/4, 3/4].  Ten families whose multiplicities branch on exact
  comparisons of the wall position w_n = I_n/4 against the loop/cross
  column layout; shapes cut by the wall contribute modes with rates set
  by the wall-to-node distance d_n.

* `plates_spectrum` - the Laplacian on a constant-j space with two
  conducting plates (Dirichlet nodes), interior eigenvalues scaling as
  x0^-2 and exterior ones as (1-2 x0)^-2.

Coincident eigenvalues are merged on exact rational data, never by
floating comparison: every line carries a key (region, q) with
lambda = pi^2 q (unit region) or pi^2 q / x0^2, pi^2 q / (1-2 x0)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graphs import well_geometry
from .plates import PlateConfig
from .sequences import JSequence, level_products

MERGED = "merged"
PER_FAMILY = "per-family"


class MultiplicityError(ArithmeticError):
    """A multiplicity formula produced a negative or inconsistent value."""


@dataclass(frozen=True, slots=True)
class LineSource:
    family: str
    n: int
    k: int


@dataclass(frozen=True)
class SpectralLine:
    lam: float
    multiplicity: int
    sources: tuple[LineSource, ...]
    key: tuple[str, Fraction] = ("unit", Fraction(0))

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "multiplicity": self.multiplicity,
            "sources": [{"family": s.family, "n": s.n, "k": s.k} for s in self.sources],
        }


@dataclass(frozen=True)
class SpectrumQuery:
    lambda_max: float
    policy: str = MERGED

    def __post_init__(self):
        if not self.lambda_max > 0:
            raise ValueError(f"lambda_max must be positive, got {self.lambda_max}")
        if self.policy not in (MERGED, PER_FAMILY):
            raise ValueError(f"unknown merge policy {self.policy!r}")


class _Emitter:
    """Collects (key, multiplicity, source) and renders sorted lines."""

    def __init__(self, lam_of_key):
        self.lam_of_key = lam_of_key
        self.records: list[tuple[tuple[str, Fraction], int, LineSource]] = []

    def emit(self, region: str, q: Fraction, mult: int, family: str, n: int, k: int):
        if mult < 0:
            raise MultiplicityError(
                f"negative multiplicity {mult} in family {family} at n={n}, k={k}"
            )
        if mult == 0:
            return
        self.records.append(((region, q), mult, LineSource(family, n, k)))

    def lines(self, policy: str) -> list[SpectralLine]:
        if policy == PER_FAMILY:
            out = [
                SpectralLine(self.lam_of_key(key), mult, (src,), key)
                for key, mult, src in self.records
            ]
            return sorted(out, key=lambda L: (L.lam, L.sources[0].family,
                                              L.sources[0].n, L.sources[0].k))
        return merge_lines(
            [SpectralLine(self.lam_of_key(key), mult, (src,), key)
             for key, mult, src in self.records],
            MERGED,
        )


def merge_lines(lines: list[SpectralLine], policy: str = MERGED) -> list[SpectralLine]:
    """Merge lines with identical exact keys; multiplicities add.

    The per-family policy is the identity.  Merging is idempotent and
    decided purely on the exact rational key.
    """
    if policy == PER_FAMILY:
        return list(lines)
    if policy != MERGED:
        raise ValueError(f"unknown merge policy {policy!r}")
    groups: dict[tuple[str, Fraction], list[SpectralLine]] = {}
    for line in lines:
        groups.setdefault(line.key, []).append(line)
    out = []
    for key, members in groups.items():
        mult = sum(m.multiplicity for m in members)
        sources = tuple(sorted((s for m in members for s in m.sources),
                               key=lambda s: (s.family, s.n, s.k)))
        out.append(SpectralLine(members[0].lam, mult, sources, key))
    return sorted(out, key=lambda L: (L.lam, L.key[0], L.key[1]))


# ---------------------------------------------------------------------------
# free Laplacian

def free_spectrum(seq: JSequence, query: SpectrumQuery) -> list[SpectralLine]:
    """All Laplacian eigenvalues <= lambda_max with multiplicities.

    The zero eigenvalue (constant mode) is included with multiplicity 1.
    Levels contribute while pi^2 I_n^2 / 4 <= lambda_max, which bounds
    the level loop by log2 of the ceiling since I_n >= 2^n.
    """
    pi2 = math.pi**2
    lmax = query.lambda_max
    em = _Emitter(lambda key: pi2 * float(key[1]))

    k = 0
    while pi2 * k * k <= lmax:
        em.emit("unit", Fraction(k * k), 1, "level0", 0, k)
        k += 1

    # Level n contributes only if pi^2 I_n^2 / 4 <= lambda_max; since
    # I_n >= 2 I_{n-1}, a level is ruled out before its j_n is fetched,
    # so explicit sequences are only consulted as deep as needed.
    products = [1]
    n = 1
    while pi2 * products[-1] ** 2 <= lmax:
        j_n = seq.j(n)
        products.append(products[-1] * j_n)
        I_n, I_prev = products[n], products[n - 1]
        if pi2 * I_n * I_n / 4 > lmax:
            break
        k = 0
        while pi2 * (2 * k + 1) ** 2 * I_n * I_n / 4 <= lmax:
            em.emit("unit", Fraction((2 * k + 1) ** 2 * I_n * I_n, 4),
                    2**n, "vee", n, k)
            k += 1
        loop_mult = 2 ** (n - 1) * (j_n - 2) * I_prev
        cross_mult = 2 ** (n - 1) * (I_prev - 1) if n >= 2 else 0
        k = 1
        while pi2 * k * k * I_n * I_n <= lmax:
            q = Fraction(k * k * I_n * I_n)
            em.emit("unit", q, loop_mult, "loop", n, k)
            if n >= 2:
                em.emit("unit", q, cross_mult, "cross", n, k)
            k += 1
        if n >= 2:
            wide_mult = 2 ** (n - 2) * (I_prev - 1)
            k = 1
            while pi2 * k * k * I_n * I_n / 4 <= lmax:
                em.emit("unit", Fraction(k * k * I_n * I_n, 4),
                        wide_mult, "cross_wide", n, k)
                k += 1
        n += 1
    return em.lines(query.policy)


# ---------------------------------------------------------------------------
# infinite square well on [1/4, 3/4]

def _matches(w: Fraction, j: int, guards) -> list[int]:
    """Values from all (guard, formula) pairs matching w; must agree."""
    vals = []
    m_hi = int(w // j) + 3
    for m in range(1, m_hi):
        for guard, formula in guards:
            if guard(m):
                vals.append(formula(m))
    if not vals:
        return []
    if any(v != vals[0] for v in vals):
        raise MultiplicityError(f"inconsistent case overlap at w={w}: {vals}")
    return vals[:1]


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _well_loop_mult(n: int, j: int, I_prev: int, w: Fraction) -> int:
    total = 2 ** (n - 1) * (j - 2) * I_prev
    vals = _matches(w, j, [
        (lambda m: (m - 1) * j + 1 <= w <= m * j - 1,
         lambda m: total - 2**n * (1 + _ceil(w) - 2 * m)),
        (lambda m: m * j - 1 <= w <= m * j + 1,
         lambda m: total - m * 2**n * (j - 2)),
    ])
    return vals[0] if vals else 0


def _well_cross_mult(n: int, j: int, I_prev: int, w: Fraction, wide: bool) -> int:
    base = 2 ** (n - 2) * (I_prev - 1) if wide else 2 ** (n - 1) * (I_prev - 1)
    coef = 2 ** (n - 1) if wide else 2**n
    vals = _matches(w, j, [
        (lambda m: (m - 1) * j + 1 <= w <= m * j - 1,
         lambda m: base - (m - 1) * coef),
        (lambda m: m * j - 1 < w <= m * j + 1,
         lambda m: base - m * coef),
    ])
    return vals[0] if vals else 0


def _exists_m(w: Fraction, j: int, guard) -> bool:
    m_hi = int(w // j) + 3
    return any(guard(m) for m in range(1, m_hi))


def square_well_spectrum(seq: JSequence, query: SpectrumQuery) -> list[SpectralLine]:
    """Eigenvalues of the square-well Hamiltonian, ten closed-form families.

    Families come from: interval modes confined to the well (4 k^2 pi^2),
    shapes cut by the wall (rates k^2 pi^2 / d_n^2 and
    k^2 pi^2 / (d_n + 1/I_n)^2), and shapes wholly inside the well
    (k^2 pi^2 I_n^2 and k^2 pi^2 I_n^2 / 4), with multiplicities given by
    the interior/straddling shape counts at each level.  All case guards
    are evaluated in exact rational arithmetic; zero-multiplicity cases
    are suppressed.
    """
    pi2 = math.pi**2
    lmax = query.lambda_max
    em = _Emitter(lambda key: pi2 * float(key[1]))

    k = 1
    while pi2 * 4 * k * k <= lmax:
        em.emit("unit", Fraction(4 * k * k), 1, "level0", 0, k)
        k += 1

    j1 = seq.j(1)
    if j1 in (2, 3):
        d1 = well_geometry(seq, 1).d
        rate = 1 / d1**2
        k = 1
        while pi2 * float(rate) * k * k <= lmax:
            em.emit("unit", rate * k * k, 2, "wall_vee", 1, k)
            k += 1
    if j1 == 3:
        k = 1
        while pi2 * 9 * k * k <= lmax:
            em.emit("unit", Fraction(9 * k * k), 1, "loop_level1", 1, k)
            k += 1

    products = [1]
    n = 1
    while pi2 * products[-1] ** 2 <= lmax:
        j_n = seq.j(n)
        products.append(products[-1] * j_n)
        I_n, I_prev = products[n], products[n - 1]
        if pi2 * I_n * I_n / 4 > lmax:
            break
        geom = well_geometry(seq, n)
        w, d = geom.w, geom.d

        if d != 0 and _exists_m(w, j_n,
                                lambda m: (m - 1) * j_n + 1 < w < m * j_n - 1):
            rate = 1 / d**2
            k = 1
            while pi2 * float(rate) * k * k <= lmax:
                em.emit("unit", rate * k * k, 2**n, "wall_loop", n, k)
                k += 1

        loop_mult = _well_loop_mult(n, j_n, I_prev, w)
        k = 1
        while pi2 * I_n * I_n * k * k <= lmax:
            em.emit("unit", Fraction(I_n * I_n * k * k), loop_mult, "loop", n, k)
            k += 1

        if n >= 2:
            if d != 0 and _exists_m(w, j_n,
                                    lambda m: m * j_n - 1 < w < m * j_n + 1):
                rate = 1 / d**2
                k = 1
                while pi2 * float(rate) * k * k <= lmax:
                    em.emit("unit", rate * k * k, 2 ** (n - 1), "wall_cross", n, k)
                    k += 1
            if _exists_m(w, j_n, lambda m: m * j_n - 1 < w <= m * j_n):
                k = 1
                while pi2 * I_n * I_n * k * k <= lmax:
                    em.emit("unit", Fraction(I_n * I_n * k * k),
                            2 ** (n - 1), "half_cross", n, k)
                    k += 1
            if _exists_m(w, j_n, lambda m: m * j_n - 1 < w < m * j_n):
                rate = 1 / (d + Fraction(1, I_n)) ** 2
                k = 1
                while pi2 * float(rate) * k * k <= lmax:
                    em.emit("unit", rate * k * k, 2 ** (n - 1), "split_cross", n, k)
                    k += 1
            cross_mult = _well_cross_mult(n, j_n, I_prev, w, wide=False)
            wide_mult = _well_cross_mult(n, j_n, I_prev, w, wide=True)
            k = 1
            while pi2 * I_n * I_n * k * k <= lmax:
                em.emit("unit", Fraction(I_n * I_n * k * k), cross_mult, "cross", n, k)
                k += 1
            k = 1
            while pi2 * I_n * I_n * k * k / 4 <= lmax:
                em.emit("unit", Fraction(I_n * I_n * k * k, 4),
                        wide_mult, "cross_wide", n, k)
                k += 1
        n += 1
    return em.lines(query.policy)


def interior_shape_counts(seq: JSequence, n: int, region: str = "well"
                          ) -> tuple[int, int, int]:
    """Closed-form (full crosses, half crosses, loops) inside the well.

    Selected by exact comparison of w = I_n/4 against the column layout:
    with the wall clear of the m-th cross there are
    2^(n-2) (I_{n-1}-1) - (m-1) 2^(n-1) full interior crosses; with the
    wall cutting the m-th cross there are 2^(n-2)(I_{n-1}-1) - m 2^(n-1)
    full crosses plus 2^(n-1) half-crosses.  Loops count
    2^(n-1)(j_n-2)I_{n-1} minus the sets lost to the walls.
    """
    if region != "well":
        raise ValueError("interior counts are defined for the square well region")
    if n < 1:
        raise ValueError("interior counts need level >= 1")
    products = level_products(seq, n)
    I_prev, j = products[n - 1], seq.j(n)
    w = well_geometry(seq, n).w

    loops = _matches(w, j, [
        (lambda m: (m - 1) * j < w <= m * j - 1,
         lambda m: 2 ** (n - 1) * (j - 2) * I_prev
         - 2**n * (1 + _ceil(w) - 2 * m)),
        (lambda m: m * j - 1 < w <= m * j + 1,
         lambda m: 2 ** (n - 1) * (j - 2) * I_prev - m * 2**n * (j - 2)),
    ])
    loops_in = loops[0] if loops else 0

    full_in = half_in = 0
    if n >= 2:
        total = 2 ** (n - 2) * (I_prev - 1)
        for m in range(1, int(w // j) + 3):
            if (m - 1) * j < w <= m * j - 1:
                full_in, half_in = total - (m - 1) * 2 ** (n - 1), 0
                break
            if m * j - 1 < w <= m * j:
                full_in, half_in = total - m * 2 ** (n - 1), 2 ** (n - 1)
                break
    if loops_in < 0 or full_in < 0:
        raise MultiplicityError(f"negative interior count at level {n}")
    return (full_in, half_in, loops_in)


# ---------------------------------------------------------------------------
# conducting plates

def plates_spectrum(cfg: PlateConfig, query: SpectrumQuery) -> list[SpectralLine]:
    """Eigenvalues of the plate-configured Laplacian, ten families.

    Interior families scale as x0^-2 and exterior families as
    (1-2 x0)^-2; the key q is the squared rational coefficient of
    pi / x0 or pi / (1-2 x0).  Interior and exterior lines are never
    merged with each other (their ratio depends on x0).
    """
    pi2 = math.pi**2
    lmax = query.lambda_max
    N, Z = cfg.N, cfg.Z
    E = N - (Z + 1)               # exterior cells per row at level 1
    x0 = cfg.x0
    ext_den = (1 - 2 * x0) ** 2   # lambda = pi^2 q / x0^2 or pi^2 q / ext_den

    def lam_of_key(key):
        region, q = key
        return pi2 * float(q) / (x0 * x0 if region == "interior" else ext_den)

    em = _Emitter(lam_of_key)

    def emit_int(c: Fraction, mult, family, n, k):
        q = c * c
        lam = pi2 * float(q) / (x0 * x0)
        if lam <= lmax:
            em.emit("interior", q, mult, family, n, k)
            return True
        return False

    def emit_ext(c: Fraction, mult, family, n, k):
        q = c * c
        lam = pi2 * float(q) / ext_den
        if lam <= lmax:
            em.emit("exterior", q, mult, family, n, k)
            return True
        return False

    k = 1
    while emit_int(Fraction(k, 2), 1, "interior_level0", 0, k):
        k += 1
    k = 0
    while emit_ext(Fraction(2 * k + 1), 2, "exterior_level0", 0, k):
        k += 1
    k = 0
    while emit_ext(Fraction((2 * k + 1) * E, 2), 2, "vee_level1", 1, k):
        k += 1
    k = 1
    while emit_ext(Fraction(k * E), N - Z - 3, "exterior_loop_level1", 1, k):
        k += 1
    k = 1
    while emit_int(Fraction(k * (Z + 1), 2), Z + 1, "interior_loop_level1", 1, k):
        k += 1

    n = 2
    while True:
        I_n = N**n
        I_prev = N ** (n - 1)
        aI = E * N ** (n - 2)         # (1 - (Z+1)/N) I_{n-1}, an integer
        zI = (Z + 1) * N ** (n - 2)   # ((Z+1)/N) I_{n-1}
        c_min_int = Fraction(I_n * (Z + 1), 4 * N)
        c_min_ext = Fraction(I_n * E, 2 * N)
        if (pi2 * float(c_min_int**2) / (x0 * x0) > lmax
                and pi2 * float(c_min_ext**2) / ext_den > lmax):
            break
        k = 0
        while emit_ext(Fraction(I_n * (2 * k + 1) * E, 2 * N), 2**n, "vee", n, k):
            k += 1
        mult7 = aI * 2 ** (n - 1) * (N - 2) + 2 ** (n - 1) * aI
        k = 1
        while emit_ext(Fraction(I_n * k * E, N), mult7, "exterior_cell", n, k):
            k += 1
        mult8 = 2 ** (n - 2) * (aI - 1) - 2 ** (n - 2)
        k = 1
        while emit_ext(Fraction(I_n * k * E, 2 * N), mult8, "exterior_cell_wide", n, k):
            k += 1
        mult9 = zI * 2 ** (n - 1) * (N - 2) + 2 ** (n - 1) * zI + 2 ** (n - 1)
        k = 1
        while emit_int(Fraction(I_n * k * (Z + 1), 2 * N), mult9, "interior_cell", n, k):
            k += 1
        mult10 = 2 ** (n - 2) * (zI - 1)
        k = 1
        while emit_int(Fraction(I_n * k * (Z + 1), 4 * N), mult10,
                       "interior_cell_wide", n, k):
            k += 1
        n += 1
    return em.lines(query.policy)
