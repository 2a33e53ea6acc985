"""Worker pools shared by the multi-row and optimisation solvers."""

from __future__ import annotations

import itertools
import threading
from collections import deque


def run_counter(n_tasks, work, threads, deadline):
    """Run ``work(i)`` for i in 0..n_tasks-1; workers claim i from a shared counter."""
    counter = itertools.count()
    lock = threading.Lock()

    def worker():
        while not deadline.check():
            with lock:
                i = next(counter)
            if i >= n_tasks:
                return
            work(i)

    _spawn(worker, min(threads, max(n_tasks, 1)))


def _spawn(fn, threads):
    if threads <= 1:
        fn()
        return
    errors = []

    def wrapped():
        try:
            fn()
        except BaseException as exc:  # re-raised in the caller thread
            errors.append(exc)

    pool = [threading.Thread(target=wrapped, daemon=True) for _ in range(threads)]
    for t in pool:
        t.start()
    for t in pool:
        t.join()
    if errors:
        raise errors[0]


class TaskQueue:
    """FIFO of search nodes; reports hunger so busy workers can donate work."""

    def __init__(self, tasks, workers):
        self.tasks = deque(tasks)
        self.workers = workers
        self.idle = 0
        self.done = False
        self.cv = threading.Condition()

    def put(self, task):
        with self.cv:
            self.tasks.append(task)
            self.cv.notify()

    def get(self):
        with self.cv:
            while True:
                if self.tasks:
                    return self.tasks.popleft()
                if self.done:
                    return None
                self.idle += 1
                if self.idle == self.workers:
                    self.done = True
                    self.cv.notify_all()
                    return None
                self.cv.wait()
                self.idle -= 1

    def hungry(self):
        return self.idle > 0 and not self.tasks


def run_queue(tasks, make_miner, threads, deadline):
    """Drain ``tasks`` with ``threads`` miners; idle workers trigger donations."""
    queue = TaskQueue(tasks, threads)

    def worker():
        miner = make_miner()
        if threads > 1:
            miner.share = queue
        while True:
            task = queue.get()
            if task is None:
                return
            if deadline.check():
                continue
            miner.run(*task)

    _spawn(worker, threads)


class Incumbent:
    """Best objective value and its witness, guarded by a lock."""

    def __init__(self, value=float("-inf"), witness=None):
        self.value = value
        self.witness = witness
        self.lock = threading.Lock()
        self.updates = 0

    def offer(self, value, witness):
        with self.lock:
            if value > self.value:
                self.value = value
                self.witness = witness
                self.updates += 1
                return True
        return False


def breadth_first(root, expand, target):
    """Expand level by level until a level has at least ``target`` nodes."""
    level = [root]
    while level and len(level) < target:
        nxt = []
        for node in level:
            nxt.extend(expand(node))
        level = nxt
    return level
