"""Elementary factor groups: arithmetic, word length, and in-factor geodesics.

Each factor is one of four kinds: finite cyclic, infinite cyclic, free abelian
of rank 2, or an explicit finite multiplication table.  A factor owns its
generator labels and a peripheral flag; everything above (free-product
elements, metrics, cosets) talks to factors only through this interface.

Coordinates are kind-specific plain values: a residue in [0, n) for cyclic,
an int for infinite cyclic, an (int, int) pair for rank-2 free abelian, and a
table index for finite tables.  The kind's zero value is the identity; the
identity is representable here but is never stored inside a syllable.
"""

from __future__ import annotations

from collections import deque

from .errors import InvalidFactorError

CYCLIC = "cyclic"
INF_CYCLIC = "z"
FREE_ABELIAN_2 = "z2"
TABLE = "table"


class Factor:
    """Common interface of the four factor kinds.

    Instances are immutable; all methods are pure.  Subclasses provide
    ``mul``, ``inv``, ``length`` and element enumeration; geodesics are
    produced by a shared greedy walk over the factor's moves (generators and
    their inverses in label order, positive direction first), which makes
    tie-breaking deterministic.
    """

    kind: str
    labels: tuple[str, ...]
    peripheral: bool
    identity = None  # overridden per kind

    def is_identity(self, x) -> bool:
        return x == self.identity

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def length(self, x) -> int:
        """Word length of ``x`` with respect to the standard generators."""
        raise NotImplementedError

    def check_coord(self, x) -> None:
        """Raise InvalidFactorError unless ``x`` is a valid coordinate."""
        raise NotImplementedError

    def moves(self) -> list[tuple[str, object]]:
        """Generators and their inverses as (label, coordinate), deduplicated.

        Order: for each generator label in declaration order, the generator
        itself and then its inverse (labelled ``<gen>^-1``).
        """
        out: list[tuple[str, object]] = []
        seen = set()
        for label, g in self._generators():
            for name, coord in ((label, g), (label + "^-1", self.inv(g))):
                if coord not in seen:
                    seen.add(coord)
                    out.append((name, coord))
        return out

    def _generators(self) -> list[tuple[str, object]]:
        raise NotImplementedError

    def elements_of_length(self, length: int) -> list:
        """All coordinates of the given word length, in canonical order."""
        raise NotImplementedError

    def diameter(self) -> int | None:
        """Max word length over the factor, or None when infinite."""
        raise NotImplementedError

    def coord_key(self, x):
        """Total-order key used for deterministic tie-breaking."""
        return x

    def geodesic(self, x, y) -> list:
        """Vertex path from ``x`` to ``y`` of length ``length(inv(x)*y)``.

        Greedy: at each step take the first move (in ``moves`` order) that
        decreases the remaining distance, so ties resolve to the earliest
        generator label.
        """
        self.check_coord(x)
        self.check_coord(y)
        path = [x]
        cur = x
        moves = self.moves()
        remaining = self.length(self.mul(self.inv(cur), y))
        while remaining > 0:
            for _, g in moves:
                nxt = self.mul(cur, g)
                if self.length(self.mul(self.inv(nxt), y)) == remaining - 1:
                    cur = nxt
                    break
            else:  # pragma: no cover - moves generate the factor
                raise InvalidFactorError("no distance-decreasing move; generators do not generate")
            path.append(cur)
            remaining -= 1
        return path

    def syllable_tokens(self, x) -> list[str]:
        """Serialized tokens for a (nontrivial) syllable carried by ``x``."""
        raise NotImplementedError

    def __repr__(self) -> str:
        flag = ", peripheral" if self.peripheral else ""
        return f"{type(self).__name__}({'/'.join(self.labels)}{flag})"


class CyclicFactor(Factor):
    """Cyclic group of order n >= 2 with a single generator."""

    kind = CYCLIC
    identity = 0

    def __init__(self, n: int, label: str, peripheral: bool = False):
        if n < 2:
            raise InvalidFactorError(f"cyclic factor needs order >= 2, got {n}")
        _check_label(label)
        self.n = n
        self.labels = (label,)
        self.peripheral = bool(peripheral)

    def check_coord(self, x) -> None:
        if not isinstance(x, int) or not 0 <= x < self.n:
            raise InvalidFactorError(f"cyclic({self.n}) coordinate out of range: {x!r}")

    def mul(self, x, y):
        return (x + y) % self.n

    def inv(self, x):
        return (-x) % self.n

    def length(self, x) -> int:
        return min(x, self.n - x)

    def _generators(self):
        return [(self.labels[0], 1)]

    def elements_of_length(self, length: int) -> list:
        return [k for k in range(self.n) if self.length(k) == length]

    def diameter(self) -> int:
        return self.n // 2

    def syllable_tokens(self, x) -> list[str]:
        return [f"{self.labels[0]}^{x}"]

    def __eq__(self, other):
        return (
            isinstance(other, CyclicFactor)
            and (self.n, self.labels, self.peripheral) == (other.n, other.labels, other.peripheral)
        )

    def __hash__(self):
        return hash((self.kind, self.n, self.labels, self.peripheral))


class InfiniteCyclicFactor(Factor):
    """Infinite cyclic group with a single generator."""

    kind = INF_CYCLIC
    identity = 0

    def __init__(self, label: str, peripheral: bool = False):
        _check_label(label)
        self.labels = (label,)
        self.peripheral = bool(peripheral)

    def check_coord(self, x) -> None:
        if not isinstance(x, int):
            raise InvalidFactorError(f"infinite-cyclic coordinate must be int, got {x!r}")

    def mul(self, x, y):
        return x + y

    def inv(self, x):
        return -x

    def length(self, x) -> int:
        return abs(x)

    def _generators(self):
        return [(self.labels[0], 1)]

    def elements_of_length(self, length: int) -> list:
        if length == 0:
            return [0]
        return [-length, length]

    def diameter(self) -> None:
        return None

    def syllable_tokens(self, x) -> list[str]:
        return [f"{self.labels[0]}^{x}"]

    def __eq__(self, other):
        return (
            isinstance(other, InfiniteCyclicFactor)
            and (self.labels, self.peripheral) == (other.labels, other.peripheral)
        )

    def __hash__(self):
        return hash((self.kind, self.labels, self.peripheral))


class FreeAbelianRank2Factor(Factor):
    """Free abelian group of rank 2; coordinates are integer pairs."""

    kind = FREE_ABELIAN_2
    identity = (0, 0)

    def __init__(self, label1: str, label2: str, peripheral: bool = False):
        _check_label(label1)
        _check_label(label2)
        if label1 == label2:
            raise InvalidFactorError("rank-2 factor needs two distinct labels")
        self.labels = (label1, label2)
        self.peripheral = bool(peripheral)

    def check_coord(self, x) -> None:
        if (
            not isinstance(x, tuple)
            or len(x) != 2
            or not all(isinstance(c, int) for c in x)
        ):
            raise InvalidFactorError(f"rank-2 coordinate must be an int pair, got {x!r}")

    def mul(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def inv(self, x):
        return (-x[0], -x[1])

    def length(self, x) -> int:
        return abs(x[0]) + abs(x[1])

    def _generators(self):
        return [(self.labels[0], (1, 0)), (self.labels[1], (0, 1))]

    def elements_of_length(self, length: int) -> list:
        if length == 0:
            return [(0, 0)]
        out = []
        for a in range(-length, length + 1):
            b = length - abs(a)
            if b == 0:
                out.append((a, 0))
            else:
                out.append((a, -b))
                out.append((a, b))
        return sorted(out)

    def diameter(self) -> None:
        return None

    def syllable_tokens(self, x) -> list[str]:
        toks = []
        if x[0]:
            toks.append(f"{self.labels[0]}^{x[0]}")
        if x[1]:
            toks.append(f"{self.labels[1]}^{x[1]}")
        return toks

    def __eq__(self, other):
        return (
            isinstance(other, FreeAbelianRank2Factor)
            and (self.labels, self.peripheral) == (other.labels, other.peripheral)
        )

    def __hash__(self):
        return hash((self.kind, self.labels, self.peripheral))


class TableFactor(Factor):
    """Finite group given by an explicit n x n multiplication table.

    ``table[i][j]`` is the index of the product of elements i and j.  The
    table is validated at construction: associativity, a two-sided identity,
    inverses, and that the labelled generators reach every element.
    """

    kind = TABLE

    def __init__(self, table, generators: dict[str, int], peripheral: bool = False):
        tbl = tuple(tuple(row) for row in table)
        n = len(tbl)
        if n == 0 or any(len(row) != n for row in tbl):
            raise InvalidFactorError("table must be square and nonempty")
        for row in tbl:
            for v in row:
                if not isinstance(v, int) or not 0 <= v < n:
                    raise InvalidFactorError(f"table entry out of range: {v!r}")
        if not generators:
            raise InvalidFactorError("table factor needs at least one generator label")
        for label, idx in generators.items():
            _check_label(label)
            if not 0 <= idx < n:
                raise InvalidFactorError(f"generator {label} index {idx} out of range")
        self.table = tbl
        self.n = n
        self.labels = tuple(generators)
        self._gen_index = dict(generators)
        self.peripheral = bool(peripheral)
        self.identity = self._find_identity()
        self._inverse = self._find_inverses()
        self._check_associative()
        self._length = self._bfs_lengths()
        if any(l is None for l in self._length):
            raise InvalidFactorError("generator labels do not generate the table group")

    def _find_identity(self) -> int:
        for e in range(self.n):
            if all(self.table[e][j] == j and self.table[j][e] == j for j in range(self.n)):
                return e
        raise InvalidFactorError("table has no two-sided identity")

    def _find_inverses(self) -> tuple[int, ...]:
        inv = [None] * self.n
        e = self.identity
        for i in range(self.n):
            for j in range(self.n):
                if self.table[i][j] == e and self.table[j][i] == e:
                    inv[i] = j
                    break
            if inv[i] is None:
                raise InvalidFactorError(f"table element {i} has no inverse")
        return tuple(inv)

    def _check_associative(self) -> None:
        t = self.table
        for a in range(self.n):
            for b in range(self.n):
                ab = t[a][b]
                for c in range(self.n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise InvalidFactorError(
                            f"table is not associative at ({a},{b},{c})"
                        )

    def _bfs_lengths(self) -> list:
        lengths = [None] * self.n
        lengths[self.identity] = 0
        frontier = deque([self.identity])
        move_coords = [g for _, g in self.moves()]
        while frontier:
            x = frontier.popleft()
            for g in move_coords:
                y = self.table[x][g]
                if lengths[y] is None:
                    lengths[y] = lengths[x] + 1
                    frontier.append(y)
        return lengths

    def check_coord(self, x) -> None:
        if not isinstance(x, int) or not 0 <= x < self.n:
            raise InvalidFactorError(f"table coordinate out of range: {x!r}")

    def mul(self, x, y):
        return self.table[x][y]

    def inv(self, x):
        return self._inverse[x]

    def length(self, x) -> int:
        return self._length[x]

    def _generators(self):
        return [(label, self._gen_index[label]) for label in self.labels]

    def elements_of_length(self, length: int) -> list:
        return [i for i in range(self.n) if self._length[i] == length]

    def diameter(self) -> int:
        return max(self._length)

    def syllable_tokens(self, x) -> list[str]:
        return [f"{self.labels[0]}[{x}]"]

    def __eq__(self, other):
        return (
            isinstance(other, TableFactor)
            and (self.table, self.labels, tuple(sorted(self._gen_index.items())), self.peripheral)
            == (other.table, other.labels, tuple(sorted(other._gen_index.items())), other.peripheral)
        )

    def __hash__(self):
        return hash((self.kind, self.table, self.labels, self.peripheral))


def _check_label(label: str) -> None:
    if not label or not label[0].isalpha() or not label.replace("_", "").isalnum():
        raise InvalidFactorError(f"invalid generator label: {label!r}")
