"""Pure-Python integer diagonalization kernel (arbitrary precision).

This is the fallback used when the compiled kernel is unavailable or an
int64 computation overflows.  Both kernels expose the same function.
"""

from __future__ import annotations


def diagonalize(rows: list[list[int]]) -> list[int]:
    """Diagonalize a dense integer matrix by unimodular row and column moves.

    Returns the absolute values of the nonzero diagonal entries.  These need
    not form a divisibility chain, but the cokernel is the sum of Z/d over the
    returned d together with a free part of the remaining dimension.
    """
    A = [list(r) for r in rows]
    nr = len(A)
    nc = len(A[0]) if nr else 0
    diag: list[int] = []
    t = 0
    while t < nr and t < nc:
        # smallest nonzero entry of the active block becomes the pivot
        best = None
        for i in range(t, nr):
            row = A[i]
            for j in range(t, nc):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, nr):
                v = A[i][t]
                if v:
                    k = v // p
                    if k:
                        ri, rt = A[i], A[t]
                        for j in range(t, nc):
                            if rt[j]:
                                ri[j] -= k * rt[j]
                    if A[i][t]:
                        clean = False
            rt = A[t]
            for j in range(t + 1, nc):
                v = rt[j]
                if v:
                    k = v // p
                    if k:
                        for i in range(t, nr):
                            if A[i][t]:
                                A[i][j] -= k * A[i][t]
                    if rt[j]:
                        clean = False
            if clean:
                break
            # move the smallest remaining entry of the pivot row or column into place
            best = (abs(p), t, t)
            for i in range(t + 1, nr):
                v = A[i][t]
                if v and abs(v) < best[0]:
                    best = (abs(v), i, t)
            for j in range(t + 1, nc):
                v = A[t][j]
                if v and abs(v) < best[0]:
                    best = (abs(v), t, j)
            _, i, j = best
            if i != t:
                A[t], A[i] = A[i], A[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag
