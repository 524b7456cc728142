"""Finite Abelian groups given as products of cyclic factors.

Elements are tuples of residues.  Two orderings are used throughout:

* ``elements()`` lists residue tuples in plain lexicographic tuple order,
  so ``Z2xZ2`` gives ``(0,0), (0,1), (1,0), (1,1)``;
* ``index()`` is the mixed-radix code with factor 0 least significant,
  so in ``Z2xZ2`` the element ``(1,0)`` has index 1.

The dense search engines work on indices and use the precomputed
``add_table`` / ``neg_table`` arrays.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

GroupElement = tuple[int, ...]

_FACTOR_RE = re.compile(r"z(\d+)")


@dataclass(frozen=True)
class AbelianGroup:
    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a group needs at least one cyclic factor")
        for k in self.factors:
            if int(k) != k or k < 2:
                raise ValueError(f"cyclic factor must be an integer >= 2, got {k!r}")
        object.__setattr__(self, "factors", tuple(int(k) for k in self.factors))

    @classmethod
    def cyclic(cls, k: int) -> AbelianGroup:
        return cls((k,))

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def zero(self) -> GroupElement:
        return (0,) * len(self.factors)

    def __str__(self) -> str:
        return "x".join(f"Z{k}" for k in self.factors)

    # --- arithmetic -----------------------------------------------------

    def check(self, a: GroupElement) -> GroupElement:
        a = tuple(a)
        if len(a) != len(self.factors):
            raise ValueError(f"element {a} has arity {len(a)}, {self} needs {len(self.factors)}")
        for r, k in zip(a, self.factors):
            if not 0 <= r < k:
                raise ValueError(f"residue {r} out of range for Z{k}")
        return a

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        a, b = self.check(a), self.check(b)
        return tuple((x + y) % k for x, y, k in zip(a, b, self.factors))

    def negate(self, a: GroupElement) -> GroupElement:
        a = self.check(a)
        return tuple((-x) % k for x, k in zip(a, self.factors))

    def sub(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.add(a, self.negate(b))

    def sum(self, items) -> GroupElement:
        total = self.zero
        for a in items:
            total = self.add(total, a)
        return total

    def elements(self, nonzero_only: bool = False) -> list[GroupElement]:
        out = list(itertools.product(*(range(k) for k in self.factors)))
        if nonzero_only:
            out.remove(self.zero)
        return out

    # --- index encoding ---------------------------------------------------

    def index(self, a: GroupElement) -> int:
        a = self.check(a)
        idx, stride = 0, 1
        for r, k in zip(a, self.factors):
            idx += r * stride
            stride *= k
        return idx

    def element(self, idx: int) -> GroupElement:
        if not 0 <= idx < self.order:
            raise IndexError(f"index {idx} out of range for {self} of order {self.order}")
        out = []
        for k in self.factors:
            idx, r = divmod(idx, k)
            out.append(r)
        return tuple(out)

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[i, j]`` is the index of ``element(i) + element(j)``."""
        n = self.order
        table = np.empty((n, n), dtype=np.intp)
        elems = [self.element(i) for i in range(n)]
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                table[i, j] = self.index(self.add(a, b))
        table.setflags(write=False)
        return table

    @cached_property
    def neg_table(self) -> np.ndarray:
        table = np.array([self.index(self.negate(self.element(i))) for i in range(self.order)],
                         dtype=np.intp)
        table.setflags(write=False)
        return table

    @cached_property
    def nonzero_indices(self) -> tuple[int, ...]:
        """Indices of nonzero elements, in ``elements()`` order."""
        return tuple(self.index(a) for a in self.elements(nonzero_only=True))

    # --- text form ----------------------------------------------------------

    def format_element(self, a: GroupElement) -> str:
        return ",".join(str(r) for r in self.check(a))

    def parse_element(self, text: str) -> GroupElement:
        try:
            body = text.strip().removeprefix("(").removesuffix(")")
            residues = tuple(int(part) for part in body.split(","))
        except ValueError:
            raise ValueError(f"malformed group element {text!r}") from None
        return self.check(residues)

    # --- structure ------------------------------------------------------------

    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant factors d1 | d2 | ... of the group (for reporting)."""
        powers: dict[int, list[int]] = {}
        for k in self.factors:
            for p, e in _factorize(k).items():
                powers.setdefault(p, []).append(p**e)
        for p in powers:
            powers[p].sort(reverse=True)
        length = max(len(v) for v in powers.values())
        out = []
        for i in range(length):
            d = 1
            for v in powers.values():
                if i < len(v):
                    d *= v[i]
            out.append(d)
        return tuple(sorted(out))

    def is_isomorphic(self, other: AbelianGroup) -> bool:
        return self.invariant_factors() == other.invariant_factors()


def _factorize(k: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= k:
        while k % p == 0:
            out[p] = out.get(p, 0) + 1
            k //= p
        p += 1
    if k > 1:
        out[k] = out.get(k, 0) + 1
    return out


def parse_group_spec(text: str) -> AbelianGroup:
    """Parse ``Z4``, ``Z2xZ2``, ``z2xz3`` ... into a group, keeping factor order."""
    parts = text.strip().lower().split("x")
    factors = []
    for part in parts:
        m = _FACTOR_RE.fullmatch(part.strip())
        if not m:
            raise ValueError(f"malformed group spec {text!r}")
        factors.append(int(m.group(1)))
    return AbelianGroup(tuple(factors))
