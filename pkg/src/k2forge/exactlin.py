"""Exact scalar fields and sparse/dense linear algebra over them.

Two fields are supported: the rationals (``QQ``, backed by
:class:`fractions.Fraction`) and prime fields ``GF(p)`` whose elements are
plain Python ints in ``range(p)``.  Every routine in the package does
arithmetic as ``field.reduce(<python expression>)`` so the same code serves
both fields.

Matrices are :class:`KMatrix` objects.  Elimination always runs on sparse
rows (``dict`` column -> value); the stored representation is chosen by
density so that callers asking for ``m.dense()`` on a mostly-full matrix do
not pay for dict conversion.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

DEFAULT_PRIME = 32003
SPARSE_DENSITY = 0.10


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24 with these bases
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """GF(p); elements are ints in ``range(p)``."""

    zero = 0
    one = 1

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def lift(self, x: int) -> int:
        """Symmetric integer representative, used for display."""
        return x - self.p if x > self.p // 2 else x

    def random(self, rng) -> int:
        return rng.randrange(self.p)

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    @property
    def spec(self) -> str:
        return f"gf:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


class RationalField:
    """The rationals, exactly."""

    zero = Fraction(0)
    one = Fraction(1)
    name = "QQ"
    spec = "q"

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def reduce(self, x) -> Fraction:
        return x

    def inv(self, x) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def lift(self, x) -> Fraction:
        return x

    def random(self, rng) -> Fraction:
        return Fraction(rng.randint(-9, 9))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int = DEFAULT_PRIME) -> PrimeField:
    return PrimeField(p)


def field_from_spec(spec: str):
    """Parse ``q`` or ``gf:PRIME`` (also ``GF(p)``/``QQ`` spellings)."""
    s = spec.strip().lower()
    if s in ("q", "qq", "rationals"):
        return QQ
    for prefix in ("gf:", "gf(", "gf"):
        if s.startswith(prefix):
            return GF(int(s[len(prefix):].rstrip(")")))
    raise ValueError(f"unknown field specification {spec!r}")


# ---------------------------------------------------------------------------
# incremental echelon form


class Echelon:
    """Incrementally built echelon basis of sparse vectors.

    Vectors are dicts ``column -> nonzero scalar``; columns may be any
    hashable, mutually comparable keys.  The pivot of a stored row is its
    smallest column and is normalised to 1.  Each row may carry a *tag*
    (another sparse vector) that is transformed along with it, which is how
    kernels and preimages are recovered.
    """

    def __init__(self, field):
        self.field = field
        self.rows: list[dict] = []
        self.tags: list[dict | None] = []
        self.pivot_of: dict[Hashable, int] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict, tag: dict | None = None) -> tuple[dict, dict | None]:
        """Return (residual, tag) after eliminating every pivot column."""
        F = self.field
        red = F.reduce
        vec = dict(vec)
        tag = dict(tag) if tag is not None else None
        pivot_of = self.pivot_of
        heap = [c for c in vec if c in pivot_of]
        if not heap:
            return vec, tag
        heapq.heapify(heap)
        seen = set()
        while heap:
            c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            coef = vec.get(c)
            if coef is None:
                continue
            i = pivot_of[c]
            for col, v in self.rows[i].items():
                nv = red(vec.get(col, 0) - coef * v)
                if nv:
                    if col not in vec and col in pivot_of and col not in seen:
                        heapq.heappush(heap, col)
                    vec[col] = nv
                else:
                    vec.pop(col, None)
            if tag is not None:
                rtag = self.tags[i]
                if rtag:
                    for col, v in rtag.items():
                        nv = red(tag.get(col, 0) - coef * v)
                        if nv:
                            tag[col] = nv
                        else:
                            tag.pop(col, None)
        return vec, tag

    def add(self, vec: dict, tag: dict | None = None) -> tuple[bool, dict, dict | None]:
        """Insert ``vec``; returns (independent?, residual, residual tag)."""
        res, rtag = self.reduce(vec, tag)
        if not res:
            return False, res, rtag
        F = self.field
        piv = min(res)
        inv = F.inv(res[piv])
        row = {c: F.reduce(v * inv) for c, v in res.items()}
        if rtag is not None:
            rtag = {c: F.reduce(v * inv) for c, v in rtag.items()}
        self.pivot_of[piv] = len(self.rows)
        self.rows.append(row)
        self.tags.append(rtag)
        return True, res, rtag

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def pivots(self) -> list:
        return sorted(self.pivot_of)

    def reduced_rows(self) -> list[dict]:
        """Rows in fully reduced form, ordered by pivot."""
        F = self.field
        out = {}
        for piv in sorted(self.pivot_of, reverse=True):
            row = dict(self.rows[self.pivot_of[piv]])
            for c in sorted(c for c in row if c != piv and c in out):
                coef = row.get(c)
                if not coef:
                    continue
                for col, v in out[c].items():
                    nv = F.reduce(row.get(col, 0) - coef * v)
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)
            out[piv] = row
        return [out[p] for p in sorted(out)]


# ---------------------------------------------------------------------------
# matrices


class KMatrix:
    """An ``nrows x ncols`` matrix over an exact field."""

    def __init__(self, field, nrows: int, ncols: int, rows: Sequence[dict] | None = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        sparse_rows = []
        for r in rows or [{} for _ in range(nrows)]:
            clean = {}
            for c, v in r.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} out of range for {ncols} columns")
                v = field(v)
                if v:
                    clean[c] = v
            sparse_rows.append(clean)
        if len(sparse_rows) != nrows:
            raise ValueError("row count does not match nrows")
        nnz = sum(len(r) for r in sparse_rows)
        cells = nrows * ncols
        if cells and nnz / cells >= SPARSE_DENSITY:
            self._dense = [[r.get(c, field.zero) for c in range(ncols)] for r in sparse_rows]
            self._sparse = None
        else:
            self._dense = None
            self._sparse = sparse_rows

    @classmethod
    def from_dense(cls, field, entries: Sequence[Sequence], ncols: int | None = None) -> "KMatrix":
        entries = [list(r) for r in entries]
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        if any(len(r) != ncols for r in entries):
            raise ValueError("ragged matrix")
        rows = [{c: v for c, v in enumerate(r) if v} for r in entries]
        return cls(field, len(entries), ncols, rows)

    @classmethod
    def identity(cls, field, n: int) -> "KMatrix":
        return cls(field, n, n, [{i: 1} for i in range(n)])

    @classmethod
    def zero(cls, field, nrows: int, ncols: int) -> "KMatrix":
        return cls(field, nrows, ncols)

    @property
    def storage(self) -> str:
        return "dense" if self._dense is not None else "sparse"

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> dict:
        if self._sparse is not None:
            return self._sparse[i]
        return {c: v for c, v in enumerate(self._dense[i]) if v}

    def sparse_rows(self) -> list[dict]:
        return [self.row(i) for i in range(self.nrows)]

    def dense(self) -> list[list]:
        if self._dense is not None:
            return [list(r) for r in self._dense]
        z = self.field.zero
        return [[r.get(c, z) for c in range(self.ncols)] for r in self._sparse]

    def transpose(self) -> "KMatrix":
        cols = [{} for _ in range(self.ncols)]
        for i in range(self.nrows):
            for c, v in self.row(i).items():
                cols[c][i] = v
        return KMatrix(self.field, self.ncols, self.nrows, cols)

    def __matmul__(self, other: "KMatrix") -> "KMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        F = self.field
        orows = other.sparse_rows()
        out = []
        for i in range(self.nrows):
            acc: dict = {}
            for k, a in self.row(i).items():
                for c, b in orows[k].items():
                    acc[c] = F.reduce(acc.get(c, 0) + a * b)
            out.append({c: v for c, v in acc.items() if v})
        return KMatrix(F, self.nrows, other.ncols, out)

    def apply(self, vec: Sequence) -> list:
        """Matrix-vector product ``self @ vec`` for a dense vector."""
        F = self.field
        return [F.reduce(sum(v * vec[c] for c, v in self.row(i).items())) for i in range(self.nrows)]

    def __eq__(self, other):
        return (
            isinstance(other, KMatrix)
            and self.shape == other.shape
            and self.field == other.field
            and self.sparse_rows() == other.sparse_rows()
        )

    def __repr__(self):
        return f"KMatrix({self.field!r}, {self.nrows}x{self.ncols}, {self.storage})"


def rref(m: KMatrix) -> tuple[KMatrix, list[int]]:
    """Reduced row echelon form and the (strictly increasing) pivot columns."""
    ech = Echelon(m.field)
    for i in range(m.nrows):
        ech.add(m.row(i))
    rows = ech.reduced_rows()
    pivots = ech.pivots()
    rows += [{} for _ in range(m.nrows - len(rows))]
    return KMatrix(m.field, m.nrows, m.ncols, rows), pivots


def rank(m: KMatrix) -> int:
    ech = Echelon(m.field)
    for i in range(m.nrows):
        ech.add(m.row(i))
    return ech.rank


def kernel_basis(m: KMatrix) -> list[list]:
    """Basis of the right null space ``{v : m v = 0}`` as dense vectors."""
    F = m.field
    reduced, pivots = rref(m)
    pivset = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivset]
    basis = []
    prow = {p: reduced.row(i) for i, p in enumerate(pivots)}
    for f in free:
        v = [F.zero] * m.ncols
        v[f] = F.one
        for p, row in prow.items():
            coef = row.get(f)
            if coef:
                v[p] = F.reduce(-coef)
        basis.append(v)
    return basis


def left_kernel_basis(m: KMatrix) -> list[list]:
    """Basis of ``{w : w m = 0}``."""
    return kernel_basis(m.transpose())


def solve(m: KMatrix, b: Sequence) -> list | None:
    """Some x with ``m x = b``, or None when the system is inconsistent."""
    F = m.field
    ech = Echelon(F)
    for i in range(m.nrows):
        row = dict(m.row(i))
        if b[i]:
            row[m.ncols] = F(b[i])
        ech.add(row)
    rows = ech.reduced_rows()
    x = [F.zero] * m.ncols
    for row in rows:
        piv = min(row)
        if piv == m.ncols:
            return None
        x[piv] = row.get(m.ncols, F.zero)
    return x


def inverse(m: KMatrix) -> KMatrix:
    if m.nrows != m.ncols:
        raise ValueError("not square")
    n = m.nrows
    aug = [dict(m.row(i)) | {n + i: 1} for i in range(n)]
    ech = Echelon(m.field)
    for r in aug:
        ech.add(r)
    rows = ech.reduced_rows()
    if len(rows) < n or min(rows[-1]) >= n:
        raise ZeroDivisionError("matrix is singular")
    return KMatrix(m.field, n, n, [{c - n: v for c, v in r.items() if c >= n} for r in rows])


def span_rank(field, vectors: Iterable[dict]) -> int:
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return ech.rank
