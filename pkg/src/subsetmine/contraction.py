"""Index-hyperrectangle contraction against a subset sum range.

Elements must be sorted so that ``x[s] <= x[s + 1]`` under the algebra's order
(plain floats for one dimension, component-wise for vectors). Bounds are
tightened in place: a lower sweep over ``k = 0..n-1`` raises ``l[k]`` to the
least index whose best-case subset sum still reaches the range minimum, an
upper sweep over ``k = n-1..0`` does the mirror work on ``u[k]``, and sweeps
alternate until neither moves.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass

import numpy as np

from .core import IndexBounds, InvalidInputError, Superset1D, TargetRange


class Algebra:
    """Element arithmetic used by the search engines.

    ``ge``/``le`` must be the component-wise order for vector elements.
    Addition and subtraction are the element type's own ``+``/``-``.
    """

    def __init__(self, zero, ge, le, name="", lift=None):
        self.zero = zero
        self.ge = ge
        self.le = le
        self.name = name
        self.lift = lift or (lambda v: v)


SCALAR = Algebra(0.0, operator.ge, operator.le, "scalar", float)


class Vec(tuple):
    """Small float vector with element-wise + and -.

    Much cheaper than a numpy array at the lengths mined here.
    """

    __slots__ = ()

    def __add__(self, other):
        return _new(Vec, map(operator.add, self, other))

    def __sub__(self, other):
        return _new(Vec, map(operator.sub, self, other))


_new = tuple.__new__


def vector_algebra(dim):
    ge, le = operator.ge, operator.le

    def vge(a, b):
        return all(map(ge, a, b))

    def vle(a, b):
        return all(map(le, a, b))

    def lift(row):
        return _new(Vec, (float(v) for v in row))

    return Algebra(lift(np.zeros(dim)), vge, vle, f"vector{dim}", lift)


class QuasiTriangleMatrix:
    """Sums of consecutive sorted elements.

    ``cols[c][r]`` is ``x[r] + ... + x[r + c]``; column ``c`` has ``N - c`` rows.
    """

    def __init__(self, cols):
        self.cols = cols

    def lookup(self, r, c):
        return self.cols[c][r]

    @property
    def width(self):
        return len(self.cols)


def build_matrix(elems, n) -> QuasiTriangleMatrix:
    if isinstance(elems, Superset1D):
        elems = elems.elems
    x = list(elems)
    N = len(x)
    if not 1 <= n <= N:
        raise InvalidInputError(f"need 1 <= n <= N, got n={n}, N={N}")
    cols = [x]
    prev = x
    for c in range(1, n):
        cur = [prev[r] + x[r + c] for r in range(N - c)]
        cols.append(cur)
        prev = cur
    return QuasiTriangleMatrix(cols)


@dataclass
class ContractionCursor:
    """Intersection index t* and the running sum of the elements left of it."""

    tstar: int
    partial: object


def _lower_step(k, x, cols, l, u, need, floor, cur, alg, binary):
    """New l[k], or None when no index in [floor, u[k]] can reach ``need``."""
    ge = alg.ge
    lk = l[k] if l[k] > floor else floor
    if lk > u[k]:
        return None
    ts = cur.tstar
    head = cur.partial
    # least t* whose best case reaches the target
    while not ge(head + cols[k - ts][u[ts]], need):
        if ts == k:
            cur.tstar, cur.partial = ts, head
            return None
        head = head + x[u[ts]]
        ts += 1
    # t* must also be compatible with alpha >= lk
    while lk - k + ts > u[ts]:
        head = head + x[u[ts]]
        ts += 1
    cur.tstar, cur.partial = ts, head
    a = lk
    if ts > 0:
        start = u[ts - 1] + k - ts + 1
        if start > a:
            a = start
    col = cols[k - ts]
    off = ts - k
    if binary:
        hi = u[ts] + k - ts
        while a < hi:
            mid = (a + hi) >> 1
            if ge(head + col[mid + off], need):
                hi = mid
            else:
                a = mid + 1
    else:
        while not ge(head + col[a + off], need):
            a += 1
    return a


def _upper_step(k, x, cols, l, u, need, ceil, cur, alg, binary):
    """New u[k], or None when no index in [l[k], ceil] stays under ``need``."""
    le = alg.le
    uk = u[k] if u[k] < ceil else ceil
    if uk < l[k]:
        return None
    ts = cur.tstar
    tail = cur.partial
    while not le(tail + cols[ts - k][l[ts] - ts + k], need):
        if ts == k:
            cur.tstar, cur.partial = ts, tail
            return None
        tail = tail + x[l[ts]]
        ts -= 1
    while uk + ts - k < l[ts]:
        tail = tail + x[l[ts]]
        ts -= 1
    cur.tstar, cur.partial = ts, tail
    a = uk
    if ts < len(l) - 1:
        start = l[ts + 1] - (ts + 1 - k)
        if start < a:
            a = start
    col = cols[ts - k]
    if binary:
        lo = l[ts] - (ts - k)
        while lo < a:
            mid = (lo + a + 1) >> 1
            if le(tail + col[mid], need):
                lo = mid
            else:
                a = mid - 1
    else:
        while not le(tail + col[a], need):
            a -= 1
    return a


def sweep_lower(x, cols, l, u, lo, alg, binary=False):
    """One lower sweep. Returns True if any bound moved, False if none, None if infeasible."""
    n = len(l)
    tails = [alg.zero] * n
    acc = alg.zero
    for k in range(n - 1, 0, -1):
        acc = acc + x[u[k]]
        tails[k - 1] = acc
    cur = ContractionCursor(0, alg.zero)
    changed = False
    floor = -1
    for k in range(n):
        a = _lower_step(k, x, cols, l, u, lo - tails[k], floor + 1, cur, alg, binary)
        if a is None:
            return None
        if a != l[k]:
            l[k] = a
            changed = True
        floor = a
    return changed


def sweep_upper(x, cols, l, u, hi, alg, binary=False):
    n = len(l)
    heads = [alg.zero] * n
    acc = alg.zero
    for k in range(n - 1):
        acc = acc + x[l[k]]
        heads[k + 1] = acc
    cur = ContractionCursor(n - 1, alg.zero)
    changed = False
    ceil = len(x)
    for k in range(n - 1, -1, -1):
        a = _upper_step(k, x, cols, l, u, hi - heads[k], ceil - 1, cur, alg, binary)
        if a is None:
            return None
        if a != u[k]:
            u[k] = a
            changed = True
        ceil = a
    return changed


def contract_inplace(x, cols, l, u, lo, hi, alg=SCALAR, binary=False, upper_first=False):
    """Contract ``l``/``u`` in place until stationary. Returns False when infeasible."""
    sweeps = (sweep_upper, sweep_lower) if upper_first else (sweep_lower, sweep_upper)
    bounds = (hi, lo) if upper_first else (lo, hi)
    first = True
    i = 0
    while True:
        changed = sweeps[i](x, cols, l, u, bounds[i], alg, binary)
        if changed is None:
            return False
        if not changed and not first:
            return True
        first = False
        i ^= 1


def tighten_lower(k, bounds, rng, matrix, cursor=None, alg=SCALAR, binary=False):
    """Single-index form of the lower update; ``cursor`` carries t* between calls.

    Callers sweeping k upward should pass the same cursor, initialised with
    ``ContractionCursor(0, alg.zero)``.
    """
    cols = matrix.cols
    x = cols[0]
    l, u = bounds.lower, bounds.upper
    if cursor is None:
        cursor = ContractionCursor(0, alg.zero)
    tail = alg.zero
    for t in range(k + 1, len(l)):
        tail = tail + x[u[t]]
    floor = l[k - 1] + 1 if k else 0
    return _lower_step(k, x, cols, l, u, rng.min - tail, floor, cursor, alg, binary)


def tighten_upper(k, bounds, rng, matrix, cursor=None, alg=SCALAR, binary=False):
    cols = matrix.cols
    x = cols[0]
    l, u = bounds.lower, bounds.upper
    n = len(l)
    if cursor is None:
        cursor = ContractionCursor(n - 1, alg.zero)
    head = alg.zero
    for t in range(k):
        head = head + x[l[t]]
    ceil = u[k + 1] - 1 if k < n - 1 else len(x) - 1
    return _upper_step(k, x, cols, l, u, rng.max - head, ceil, cursor, alg, binary)


def contract(bounds: IndexBounds, rng: TargetRange, matrix: QuasiTriangleMatrix,
             mode="linear", upper_first=False, alg=SCALAR):
    """Return the stationary contracted bounds, or None if the box holds no subset."""
    if mode not in ("linear", "binary"):
        raise InvalidInputError(f"unknown search mode {mode!r}")
    out = bounds.copy()
    ok = contract_inplace(matrix.cols[0], matrix.cols, out.lower, out.upper,
                          rng.min, rng.max, alg, mode == "binary", upper_first)
    return out if ok else None
