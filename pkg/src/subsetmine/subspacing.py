"""Depth-first branch and bound over index hyperrectangles.

Each node is contracted, dimensions whose bounds collapse to one index are
fixed and moved into a shared buffer, and the narrowest remaining dimension is
halved (binary subspacing) or enumerated value by value (variable subspacing).
The search stack is explicit; a node on the stack already holds the bounds of
the half currently being explored.
"""

from __future__ import annotations

from .contraction import SCALAR, build_matrix, contract_inplace
from .core import (
    EXHAUSTED,
    QUOTA,
    Deadline,
    InvalidInputError,
    MiningConfig,
    MiningResult,
    Solution,
    TargetRange,
    initial_bounds,
)


class Frame:
    __slots__ = ("branch_flag", "kappa", "n", "n_z", "lo", "hi", "l", "u",
                 "u_saved", "mid", "b_len")

    def __init__(self, l, u, lo, hi):
        self.branch_flag = 0
        self.kappa = -1
        self.n = len(l)
        self.n_z = 0
        self.lo = lo
        self.hi = hi
        self.l = l
        self.u = u
        self.u_saved = None
        self.mid = -1
        self.b_len = 0

    def copy(self):
        f = Frame(list(self.l), list(self.u), self.lo, self.hi)
        f.branch_flag = self.branch_flag
        f.kappa = self.kappa
        f.n_z = self.n_z
        f.u_saved = self.u_saved
        f.mid = self.mid
        f.b_len = self.b_len
        return f


def narrowest(l, u):
    """Index of the smallest ``u - l``; ties go to the lowest index."""
    best = 0
    width = u[0] - l[0]
    for t in range(1, len(l)):
        w = u[t] - l[t]
        if w < width:
            best, width = t, w
    return best


class Miner:
    """One search engine; never shared between workers.

    on_leaf(buffer) is called with the fixed buffer holding a complete index
    set (sorted positions, ascending) and returns True to stop the search.
    prune(frame, buffer) is called before and after every contraction and
    returns True to discard the node; it must be monotone in the bounds.
    """

    def __init__(self, x, cols, alg=SCALAR, binary_search=False, variant="binary",
                 deadline=None, on_leaf=None, prune=None):
        if variant not in ("binary", "variable"):
            raise InvalidInputError(f"unknown subspacing variant {variant!r}")
        self.x = x
        self.cols = cols
        self.alg = alg
        self.binary_search = binary_search
        self.variant = variant
        self.deadline = deadline or Deadline()
        self.on_leaf = on_leaf
        self.prune = prune
        self.share = None
        self.buffer = []
        self.nodes = 0
        self.stopped = False

    # -- node processing ---------------------------------------------------

    def settle(self, f):
        """Contract ``f`` and move collapsed dimensions into the buffer."""
        self.nodes += 1
        l, u = f.l, f.u
        # the bound only tightens under contraction, so test it first as well
        if self.prune is not None and self.prune(f, self.buffer):
            return False
        if not contract_inplace(self.x, self.cols, l, u, f.lo, f.hi, self.alg,
                                self.binary_search):
            return False
        B = self.buffer
        if self.prune is not None and self.prune(f, B):
            return False
        fixed = [t for t in range(f.n) if l[t] == u[t]]
        if fixed:
            x = self.x
            s = self.alg.zero
            for t in fixed:
                B.append(u[t])
                s = s + x[u[t]]
            f.lo = f.lo - s
            f.hi = f.hi - s
            f.n_z = len(fixed)
            if len(fixed) == f.n:
                f.l, f.u = [], []
            else:
                keep = [t for t in range(f.n) if l[t] != u[t]]
                f.l = [l[t] for t in keep]
                f.u = [u[t] for t in keep]
            f.n -= f.n_z
        else:
            f.n_z = 0
        f.b_len = len(B)
        return True

    def left_branch(self, parent):
        """Child holding the parent's active half, contracted and split; None on failure."""
        child = Frame(list(parent.l), list(parent.u), parent.lo, parent.hi)
        if not self.settle(child):
            return None
        if child.n == 0:
            return child
        l, u = child.l, child.u
        k = narrowest(l, u)
        child.kappa = k
        child.u_saved = u[:k + 1]
        mid = (l[k] + u[k]) >> 1
        child.mid = mid
        t = k
        while t >= 0 and u[t] > mid - k + t:
            u[t] = mid - k + t
            t -= 1
        return child

    def right_branch(self, f):
        f.branch_flag = 1
        k = f.kappa
        f.u[:k + 1] = f.u_saved
        l = f.l
        first = f.mid + 1 - k
        t = k
        while t < f.n and l[t] < first + t:
            l[t] = first + t
            t += 1

    def emit(self):
        if self.on_leaf is not None and self.on_leaf(self.buffer):
            self.stopped = True
            return True
        return False

    def pop_buffer(self, n_z):
        if n_z:
            del self.buffer[-n_z:]

    # -- search ------------------------------------------------------------

    def run(self, l, u, lo, hi, fixed=()):
        """Search the box ``l``/``u`` (pre-contraction) for sums in [lo, hi]."""
        self.buffer = list(fixed)
        root = Frame(list(l), list(u), lo, hi)
        if self.variant == "variable":
            return self._run_variable(root)
        res = self.left_branch(root)
        if res is None:
            return
        if res.n == 0:
            self.emit()
            self.pop_buffer(res.n_z)
            return
        stack = [res]
        deadline = self.deadline
        while stack:
            if deadline.check():
                return
            if self.share is not None and self.share.hungry():
                self._donate(stack)
            res = self.left_branch(stack[-1])
            if res is not None:
                if res.n:
                    stack.append(res)
                    continue
                stop = self.emit()
                self.pop_buffer(res.n_z)
                if stop:
                    return
            # the active half of the top frame is finished
            while stack:
                top = stack[-1]
                if top.branch_flag == 0:
                    self.right_branch(top)
                    break
                stack.pop()
                self.pop_buffer(top.n_z)

    def _donate(self, stack):
        for f in stack:
            if f.branch_flag == 0:
                g = f.copy()
                self.right_branch(g)
                f.branch_flag = 1
                self.share.put((g.l, g.u, g.lo, g.hi, tuple(self.buffer[:f.b_len])))
                return

    def _fix(self, f, v):
        k = f.kappa
        l, u = list(f.l), list(f.u)
        t = k
        while t >= 0 and u[t] > v - k + t:
            u[t] = v - k + t
            t -= 1
        t = k
        while t < f.n and l[t] < v + t - k:
            l[t] = v + t - k
            t += 1
        return Frame(l, u, f.lo, f.hi)

    def _run_variable(self, root):
        if not self.settle(root):
            return
        if root.n == 0:
            self.emit()
            self.pop_buffer(root.n_z)
            return
        root.kappa = narrowest(root.l, root.u)
        stack = [(root, iter(range(root.l[root.kappa], root.u[root.kappa] + 1)))]
        deadline = self.deadline
        while stack:
            if deadline.check():
                return
            f, values = stack[-1]
            v = next(values, None)
            if v is None:
                stack.pop()
                self.pop_buffer(f.n_z)
                continue
            child = self._fix(f, v)
            if not self.settle(child):
                continue
            if child.n == 0:
                stop = self.emit()
                self.pop_buffer(child.n_z)
                if stop:
                    return
                continue
            child.kappa = k = narrowest(child.l, child.u)
            stack.append((child, iter(range(child.l[k], child.u[k] + 1))))

    def expand(self, node):
        """Contract a task node and split it once.

        Returns the two pre-contraction halves as task nodes, or an empty
        list if the node failed or was a leaf (leaves are emitted).
        """
        l, u, lo, hi, fixed = node
        self.buffer = list(fixed)
        res = self.left_branch(Frame(list(l), list(u), lo, hi))
        if res is None:
            return []
        if res.n == 0:
            self.emit()
            return []
        prefix = tuple(self.buffer)
        left = (list(res.l), list(res.u), res.lo, res.hi, prefix)
        self.right_branch(res)
        right = (res.l, res.u, res.lo, res.hi, prefix)
        return [left, right]


def mine(s, n, rng: TargetRange, config: MiningConfig | None = None, *, bounds=None,
         variant="binary"):
    """All size-``n`` index sets of the sorted superset ``s`` whose sum lies in ``rng``.

    Indexes refer to positions in ``s``. Stops early on the solution quota or
    the time limit; the result status says which.
    """
    config = config or MiningConfig()
    x = list(s.elems) if hasattr(s, "elems") else list(s)
    N = len(x)
    if bounds is None:
        bounds = initial_bounds(N, n)
    else:
        if len(bounds) != n:
            raise InvalidInputError("initial bounds do not match the subset size")
        bounds.validate(N)
    matrix = build_matrix(x, n)
    result = MiningResult()
    deadline = Deadline(config.deadline())
    quota = config.max_solutions

    def on_leaf(buf):
        idx = tuple(sorted(buf))
        total = 0.0
        for i in idx:
            total += x[i]
        if rng.min <= total <= rng.max:
            result.solutions.append(Solution(idx, total))
        if quota is not None and len(result.solutions) >= quota:
            deadline.stop(QUOTA)
            return True
        return False

    miner = Miner(x, matrix.cols, SCALAR, config.use_binary_search_in_contraction,
                  variant, deadline, on_leaf)
    miner.run(bounds.lower, bounds.upper, rng.min, rng.max)
    result.status = deadline.stopped or EXHAUSTED
    result.nodes = miner.nodes
    return result
