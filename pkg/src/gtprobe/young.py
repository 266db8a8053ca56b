"""Young diagrams, interlacing chains, and exact representation dimensions.

Diagrams are plain tuples of weakly decreasing positive row lengths; the
empty diagram ``()`` is a first-class value.  A semistandard tableau with
alphabet ``[d]`` is identified with its chain of d interlacing diagrams
(the k-th diagram collects the boxes holding letters <= k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterable, Sequence

Diagram = tuple[int, ...]
Chain = tuple[Diagram, ...]


def as_diagram(rows: Iterable[int]) -> Diagram:
    """Validate and canonicalize row lengths (no trailing zeros stored)."""
    rows = tuple(int(r) for r in rows)
    while rows and rows[-1] == 0:
        rows = rows[:-1]
    for a, b in zip(rows, rows[1:]):
        if a < b:
            raise ValueError(f"row lengths must be weakly decreasing, got {rows}")
    if rows and rows[-1] < 0:
        raise ValueError(f"row lengths must be nonnegative, got {rows}")
    return rows


def row(lam: Diagram, k: int) -> int:
    """Length of row k (1-based); rows beyond the diagram read 0."""
    return lam[k - 1] if 1 <= k <= len(lam) else 0


def interlaces(mu: Iterable[int], lam: Iterable[int]) -> bool:
    """True iff lam_1 >= mu_1 >= lam_2 >= mu_2 >= ... (missing rows read 0)."""
    mu, lam = as_diagram(mu), as_diagram(lam)
    if len(mu) > len(lam):
        return False
    for k in range(1, len(lam) + 1):
        if not (row(lam, k) >= row(mu, k) >= row(lam, k + 1)):
            return False
    return True


def weyl_dimension(lam: Iterable[int], d: int) -> int:
    """Dimension of the unitary-group irrep with highest weight lam.

    Evaluates prod_{1<=i<j<=d} (lam_i - i - lam_j + j)/(j - i) exactly.
    Diagrams with more than d rows label the zero representation and
    return 0.
    """
    lam = as_diagram(lam)
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if len(lam) > d:
        return 0
    dim = Fraction(1)
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            dim *= Fraction(row(lam, i) - row(lam, j) + j - i, j - i)
    assert dim.denominator == 1 and dim > 0
    return int(dim)


def branching_restrictions(lam: Iterable[int], d: int) -> list[Diagram]:
    """All mu interlacing lam with at most d-1 rows, in lexicographic order."""
    lam = as_diagram(lam)
    if len(lam) > d:
        raise ValueError(f"diagram {lam} has more than d={d} rows")
    if d <= 1:
        return []
    nrows = min(d - 1, len(lam))
    ranges = [range(row(lam, k + 1), row(lam, k) + 1) for k in range(1, nrows + 1)]
    return sorted(as_diagram(choice) for choice in product(*ranges))


def hook_length_dimension(lam: Iterable[int]) -> int:
    """Number of standard tableaux of shape lam (hook length formula)."""
    lam = as_diagram(lam)
    n = sum(lam)
    conj = _conjugate(lam)
    hooks = 1
    for r, length in enumerate(lam):
        for c in range(length):
            hooks *= (length - c) + (conj[c] - r) - 1
    return factorial(n) // hooks


def _conjugate(lam: Diagram) -> Diagram:
    width = lam[0] if lam else 0
    return tuple(sum(1 for r in lam if r > c) for c in range(width))


def partitions(n: int, max_rows: int | None = None) -> list[Diagram]:
    """All partitions of n with at most max_rows rows."""
    if max_rows is None:
        max_rows = n
    out: list[Diagram] = []

    def rec(prefix: list[int], remaining: int, max_part: int) -> None:
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if len(prefix) == max_rows:
            return
        for part in range(min(max_part, remaining), 0, -1):
            prefix.append(part)
            rec(prefix, remaining - part, part)
            prefix.pop()

    rec([], n, n)
    return out


def is_valid_chain(chain: Sequence[Iterable[int]]) -> bool:
    """True iff the diagrams interlace upward and the k-th has <= k rows."""
    diagrams = [as_diagram(c) for c in chain]
    for k, lam in enumerate(diagrams, start=1):
        if len(lam) > k:
            return False
        if k >= 2 and not interlaces(diagrams[k - 2], lam):
            return False
    return True


@dataclass(frozen=True)
class GammaParams:
    """Parameters (d, L, i) of the probe tableau family.

    The derived quantities N = (d+1)L and n = 2dL are fixed by the
    construction; i indexes the member shape, 0 <= i <= L.
    """

    d: int
    L: int
    i: int

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if not 0 <= self.i <= self.L:
            raise ValueError(f"index i must satisfy 0 <= i <= L={self.L}, got {self.i}")

    @property
    def N(self) -> int:
        return (self.d + 1) * self.L

    @property
    def n(self) -> int:
        return 2 * self.d * self.L


def gamma_shape(p: GammaParams) -> Diagram:
    """Probe shape (N+L-i, L, ..., L, i) with d-2 middle rows; n boxes."""
    rows = [p.N + p.L - p.i] + [p.L] * (p.d - 2) + [p.i]
    return as_diagram(rows)


def gamma_plus_shape(p: GammaParams) -> Diagram:
    """gamma_shape with one extra box in row 1; n+1 boxes."""
    shape = gamma_shape(p)
    return (shape[0] + 1,) + shape[1:]


def gamma_chain(p: GammaParams) -> Chain:
    """Interlacing chain of the probe tableau.

    Letters k < d fill row k of the L-column rectangle, so the k-th chain
    entry is the k-row rectangle (L, ..., L); the top diagram is
    gamma_shape(p), putting N-i letter-d boxes in row 1 and i in row d.
    """
    chain = [(p.L,) * k for k in range(1, p.d)]
    chain.append(gamma_shape(p))
    return tuple(chain)


def gamma_content(d: int, L: int) -> tuple[int, ...]:
    """Letter multiplicities of the probe tableau: L each for 1..d-1, N for d."""
    return (L,) * (d - 1) + ((d + 1) * L,)
