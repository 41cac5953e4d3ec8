"""Independent brute-force oracles shared by the test modules."""

from itertools import combinations, product

import numpy as np

from crisscross.channel import ChannelPattern


def naive_deletion_patterns(original, received):
    d = len(original) - len(received)
    out = set()
    for P in combinations(range(len(original)), d):
        if [v for i, v in enumerate(original) if i not in P] == list(received):
            out.add(P)
    return out


def naive_insertion_patterns(original, received):
    d = len(received) - len(original)
    out = set()
    for P in combinations(range(len(received)), d):
        if [v for i, v in enumerate(received) if i not in P] == list(original):
            out.add(P)
    return out


def naive_deletion_ball(X, t_r, t_c):
    X = np.asarray(X, dtype=np.uint8)
    out = set()
    for R in combinations(range(X.shape[0]), t_r):
        for C in combinations(range(X.shape[1]), t_c):
            Y = np.delete(np.delete(X, R, 0), C, 1)
            out.add((Y.shape, Y.tobytes()))
    return out


def naive_insertion_ball(X, t_r, t_c):
    """Insert rows one by one, then columns, at every position with every content."""
    X = np.asarray(X, dtype=np.uint8)
    stage = {(X.shape, X.tobytes())}
    for axis, k in ((0, t_r), (1, t_c)):
        for _ in range(k):
            nxt = set()
            for shape, raw in stage:
                A = np.frombuffer(raw, dtype=np.uint8).reshape(shape)
                length = A.shape[1 - axis]
                for pos in range(A.shape[axis] + 1):
                    for bits in product((0, 1), repeat=length):
                        B = np.insert(A, pos, np.array(bits, dtype=np.uint8), axis=axis)
                        nxt.add((B.shape, B.tobytes()))
            stage = nxt
    return stage


def naive_t_ball(X, t, mode):
    out = set()
    for t_r in range(t + 1):
        t_c = t - t_r
        if mode == "deletion":
            if t_r <= X.shape[0] and t_c <= X.shape[1]:
                out |= naive_deletion_ball(X, t_r, t_c)
        else:
            out |= naive_insertion_ball(X, t_r, t_c)
    return out


def adversarial_insertion(X, t, seed):
    """Insert copies of neighbouring rows/columns so inserted lines blend in."""
    rng = np.random.default_rng(seed)
    cur = np.asarray(X, dtype=np.uint8)
    n_r, n_c = cur.shape
    t_r = int(rng.integers(0, t + 1))
    t_c = t - t_r
    rops, cops = [], []
    for i in sorted(rng.choice(n_r + t_r, t_r, replace=False).tolist()):
        src = min(max(i + int(rng.choice([-1, 0])), 0), cur.shape[0] - 1)
        rops.append((i, cur[src].tolist()))
        cur = np.insert(cur, i, cur[src], axis=0)
    for j in sorted(rng.choice(n_c + t_c, t_c, replace=False).tolist()):
        src = min(max(j + int(rng.choice([-1, 0])), 0), cur.shape[1] - 1)
        cops.append((j, cur[:, src].tolist()))
        cur = np.insert(cur, j, cur[:, src], axis=1)
    return ChannelPattern("insertion", rops, cops)


def gf2_rank_oracle(M):
    """Rank by plain row reduction on Python lists."""
    rows = [list(map(int, r)) for r in np.asarray(M)]
    rank, col, ncols = 0, 0, len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank
