"""Integerized multidimensional mining on bit-packed rows.

Columns are mapped to small nonnegative integers, comonotonized, and each row
is packed into 64-bit words with one spare sign bit per field. Word-wise
addition and subtraction then act on every field at once, and ``a <= b``
reduces to testing the sign bits of ``b - a`` against a mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contraction import Algebra, build_matrix
from .core import (
    EXHAUSTED,
    InvalidInputError,
    MiningConfig,
    MiningResult,
    Solution,
    SubsetMineError,
)
from .mdim import (
    DEFAULT_ROW_CAP,
    as_superset_md,
    build_targets,
    comonotonize,
    mine_table,
    order_targets,
)

WORD = 64
MAX_BITS = 63
_U64 = (1 << WORD) - 1


class LayoutError(SubsetMineError):
    pass


class PackOverflowError(SubsetMineError, OverflowError):
    pass


def round_half_away(v):
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.floor(np.abs(v) + 0.5)


@dataclass(frozen=True)
class IntegerizedInstance:
    lam: tuple
    xz: np.ndarray  # int64
    zlow: np.ndarray
    zhigh: np.ndarray
    feasible: bool = True


def integerize(x, S_L, S_U, n, lam) -> IntegerizedInstance:
    """Shift, scale and round each column into ``0..lam[t]`` along with its range.

    The divisor is the column maximum. Columns whose maximum is not positive
    use ``max - min`` instead; constant columns map to zeros with ``lam = 0``
    and are checked for feasibility directly.
    """
    x = as_superset_md(x)
    N, d = x.shape
    lam = np.broadcast_to(np.asarray(lam), (d,))
    if not np.all(np.equal(np.mod(lam, 1), 0)) or (lam < 1).any():
        raise InvalidInputError("lambda must be integers >= 1")
    lam = lam.astype(np.int64)
    if (lam.astype(float) * n >= 2.0**62).any():
        raise InvalidInputError("lambda too large for 64-bit fields")
    S_L = np.broadcast_to(np.asarray(S_L, dtype=float), (d,))
    S_U = np.broadcast_to(np.asarray(S_U, dtype=float), (d,))
    xz = np.zeros((N, d), dtype=np.int64)
    zl = np.zeros(d, dtype=np.int64)
    zu = np.zeros(d, dtype=np.int64)
    lam_out = []
    feasible = True
    for t in range(d):
        col = x[:, t]
        lo, hi = col.min(), col.max()
        if lo == hi:
            lam_out.append(0)
            if not S_L[t] <= n * lo <= S_U[t]:
                feasible = False
            continue
        div = hi if hi > 0 else hi - lo
        scale = lam[t] / div
        # with a negative minimum the mapped values can exceed lam
        if (hi - lo) * scale * n >= 2.0**62:
            raise InvalidInputError(f"column {t}: integerized values too large for 64 bits")
        xz[:, t] = round_half_away((col - lo) * scale).astype(np.int64)
        zl[t] = int(round_half_away((S_L[t] - lo * n) * scale))
        zu[t] = int(round_half_away((S_U[t] - lo * n) * scale))
        lam_out.append(int(lam[t]))
    return IntegerizedInstance(tuple(lam_out), xz, zl, zu, feasible)


@dataclass(frozen=True)
class PackLayout:
    psi: tuple
    bits: tuple
    placements: tuple  # (word, shift) per column; field occupies bits shift..shift+bits-1
    mask: tuple  # one sign bit per field, per word
    words: int

    @property
    def fused_mask(self):
        return fuse(self.mask)


def field_bits(psi):
    """Bits for magnitudes up to ``psi`` plus a sign bit."""
    return int(psi).bit_length() + 1


def layout_from_bits(bits, psi=None):
    placements = []
    word, used = 0, 0
    for b in bits:
        if b > MAX_BITS:
            raise LayoutError(f"field of {b} bits does not fit a {WORD}-bit word")
        if used + b > WORD:
            word, used = word + 1, 0
        used += b
        placements.append((word, WORD - used))
    words = word + 1
    mask = [0] * words
    for (w, shift), b in zip(placements, bits):
        mask[w] |= 1 << (shift + b - 1)
    if psi is None:
        psi = tuple((1 << (b - 1)) - 1 for b in bits)
    return PackLayout(tuple(int(p) for p in psi), tuple(bits), tuple(placements),
                      tuple(mask), words)


def plan_layout(xz_star, lows, highs, n) -> PackLayout:
    """Field widths from the largest magnitude any mined quantity can reach."""
    xz_star = np.asarray(xz_star, dtype=np.int64)
    top = np.sort(xz_star, axis=0)[xz_star.shape[0] - n:].sum(axis=0)
    psi = np.maximum(np.abs(np.asarray(lows)).max(axis=0),
                     np.abs(np.asarray(highs)).max(axis=0))
    psi = np.maximum(psi, top)
    return layout_from_bits([field_bits(p) for p in psi], psi)


def _check_fit(v, layout):
    for t, b in enumerate(layout.bits):
        lim = 1 << (b - 1)
        if not -lim < int(v[t]) < lim:
            raise PackOverflowError(f"component {t} = {int(v[t])} exceeds its {b}-bit field")


def pack_row(v, layout: PackLayout) -> np.ndarray:
    """Words (uint64) holding ``v``; negative components wrap within their word."""
    _check_fit(v, layout)
    words = [0] * layout.words
    for val, (w, shift) in zip(v, layout.placements):
        words[w] = (words[w] + (int(val) << shift)) & _U64
    return np.array(words, dtype=np.uint64)


def unpack_row(words, layout: PackLayout) -> np.ndarray:
    words = [int(w) for w in words]
    out = np.zeros(len(layout.bits), dtype=np.int64)
    # lowest field first so borrows from negative fields can be undone
    order = sorted(range(len(layout.bits)), key=lambda t: layout.placements[t][1])
    for t in order:
        w, shift = layout.placements[t]
        b = layout.bits[t]
        f = (words[w] >> shift) & ((1 << b) - 1)
        if f >> (b - 1):
            f -= 1 << b
        out[t] = f
        words[w] = (words[w] - (f << shift)) & _U64
    return out


def pack_rows(V, layout: PackLayout) -> np.ndarray:
    """Vectorised pack_row over the rows of ``V`` (shape M x d)."""
    V = np.asarray(V, dtype=np.int64)
    out = np.zeros((V.shape[0], layout.words), dtype=np.uint64)
    for t, (w, shift) in enumerate(layout.placements):
        lim = 1 << (layout.bits[t] - 1)
        if (V[:, t] <= -lim).any() or (V[:, t] >= lim).any():
            raise PackOverflowError(f"column {t} exceeds its {layout.bits[t]}-bit field")
        out[:, w] += V[:, t].astype(np.uint64) << np.uint64(shift)
    return out


def unpack_rows(W, layout: PackLayout) -> np.ndarray:
    W = np.array(W, dtype=np.uint64)
    out = np.zeros((W.shape[0], len(layout.bits)), dtype=np.int64)
    order = sorted(range(len(layout.bits)), key=lambda t: layout.placements[t][1])
    for t in order:
        w, shift = layout.placements[t]
        b = layout.bits[t]
        f = ((W[:, w] >> np.uint64(shift)) & np.uint64((1 << b) - 1)).astype(np.int64)
        f = np.where(f >> (b - 1), f - (1 << b), f)
        out[:, t] = f
        W[:, w] -= f.astype(np.uint64) << np.uint64(shift)
    return out


def packed_add(a, b):
    return np.asarray(a, dtype=np.uint64) + np.asarray(b, dtype=np.uint64)


def packed_sub(a, b):
    return np.asarray(a, dtype=np.uint64) - np.asarray(b, dtype=np.uint64)


def packed_leq(a, b, layout: PackLayout):
    """``a <= b`` in every field; works row-wise on 2-D input."""
    diff = packed_sub(b, a)
    hit = diff & np.array(layout.mask, dtype=np.uint64)
    return ~(hit != 0).any(axis=-1)


def fuse(words):
    """All words as one integer, word 0 most significant."""
    v = 0
    for w in words:
        v = (v << WORD) | int(w)
    return v


def fuse_row(v, layout: PackLayout):
    """Signed integer ``sum(v[t] << offset[t])``; exact under + and -."""
    total = 0
    W = layout.words
    for val, (w, shift) in zip(v, layout.placements):
        total += int(val) << (shift + WORD * (W - 1 - w))
    return total


def packed_algebra(layout: PackLayout) -> Algebra:
    """Algebra over fused rows.

    Sums are plain integers, so borrows cross word boundaries; the sign bit of
    the lowest negative field is still set, so the mask test is unchanged.
    """
    m = layout.fused_mask

    def ge(a, b):
        return not (a - b) & m

    def le(a, b):
        return not (b - a) & m

    return Algebra(0, ge, le, f"packed{layout.words}")


def solve_md_integerized(x, n, target, me, lam, config=None, *, leader_sort=True,
                         order_rows=True, variant="binary", row_cap=DEFAULT_ROW_CAP):
    """Integerize, pack and mine.

    Solutions satisfy the integerized ranges exactly; the result is flagged
    approximate because they may differ from mining the real values.
    """
    config = config or MiningConfig()
    x = as_superset_md(x)
    N, d = x.shape
    if not 1 <= n <= N:
        raise InvalidInputError(f"need 1 <= n <= N, got n={n}, N={N}")
    target = np.broadcast_to(np.asarray(target, dtype=float), (d,))
    me = np.broadcast_to(np.asarray(me, dtype=float), (d,))
    if (me < 0).any():
        raise InvalidInputError("me must be nonnegative")
    inst = integerize(x, target - me, target + me, n, lam)
    result = MiningResult(approximate=True)
    if not inst.feasible or (inst.zlow > inst.zhigh).any():
        return result
    c = comonotonize(inst.xz, leader_sort)
    tt = build_targets(c, n, inst.zlow, inst.zhigh, row_cap)
    # subset sums are nonnegative: raise negative minima to 0, drop rows with a negative maximum
    lows = np.maximum(tt.rows_lower, 0)
    highs = tt.rows_upper
    live = set(np.flatnonzero((highs >= 0).all(axis=1)).tolist())
    order = order_targets(tt, c, n, inst.zlow, inst.zhigh) if order_rows else list(range(len(tt)))
    order = [s for s in order if s in live]
    if not order:
        return result
    star = c.star.astype(np.int64)
    layout = plan_layout(star, lows[order], highs[order], n)
    elems = [fuse_row(r, layout) for r in star]
    packed_lows = [fuse_row(r, layout) if s in live else None for s, r in enumerate(lows)]
    packed_highs = [fuse_row(r, layout) if s in live else None for s, r in enumerate(highs)]
    matrix = build_matrix(elems, n)
    quota = config.max_solutions
    perm = c.row_perm
    xz = inst.xz

    def on_solution(pos):
        idx = tuple(sorted(int(perm[i]) for i in pos))
        total = xz[list(idx)].sum(axis=0)
        if (inst.zlow <= total).all() and (total <= inst.zhigh).all():
            result.solutions.append(Solution(idx, tuple(int(v) for v in total)))
        return quota is not None and len(result.solutions) >= quota

    status, nodes = mine_table(elems, matrix.cols, packed_algebra(layout),
                               packed_lows, packed_highs, order, config,
                               on_solution, variant)
    result.status = status or EXHAUSTED
    result.nodes = nodes
    return result
