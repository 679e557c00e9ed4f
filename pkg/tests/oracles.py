"""Independent reference implementations used as test oracles.

Everything here is deliberately written without the library's own code
paths (and without numpy.linalg), so each check compares two independent
routes to the same value.
"""

from __future__ import annotations

import math


def fsum_norm(values) -> float:
    """Extended-precision L2 norm."""
    return math.sqrt(math.fsum(float(v) * float(v) for v in values))


def jacobi_eigenvalues(matrix, tol: float = 1e-12, max_sweeps: int = 100) -> list[float]:
    """Cyclic Jacobi eigensolver for small dense symmetric matrices.

    Pure-Python rotations; returns eigenvalues in descending order once the
    off-diagonal Frobenius norm drops below ``tol``.
    """
    a = [[float(x) for x in row] for row in matrix]
    n = len(a)
    for _ in range(max_sweeps):
        off = math.sqrt(
            math.fsum(a[i][j] ** 2 for i in range(n) for j in range(n) if i != j)
        )
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                app, aqq = a[p][p], a[q][q]
                a[p][p] = app - t * apq
                a[q][q] = aqq + t * apq
                a[p][q] = a[q][p] = 0.0
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip, aiq = a[i][p], a[i][q]
                    a[i][p] = a[p][i] = c * aip - s * aiq
                    a[i][q] = a[q][i] = s * aip + c * aiq
    return sorted((a[i][i] for i in range(n)), reverse=True)


def vendi_from_eigenvalues(eigenvalues) -> float:
    """Entropy-exponential diversity from a raw (unnormalized) spectrum."""
    clipped = [max(0.0, e) for e in eigenvalues]
    total = math.fsum(clipped)
    if total == 0.0:
        return 1.0
    entropy = -math.fsum(
        (e / total) * math.log(e / total) for e in clipped if e / total > 0.0
    )
    return math.exp(entropy)


def brute_force_vendi(similarity) -> float:
    """Vendi score via the independent Jacobi route."""
    n = len(similarity)
    scaled = [[similarity[i][j] / n for j in range(n)] for i in range(n)]
    return vendi_from_eigenvalues(jacobi_eigenvalues(scaled))


def dominates_oracle(a, b) -> bool:
    """(relevance, diversity) pairs, maximizing, at least one strict."""
    return (
        a[0] >= b[0]
        and a[1] >= b[1]
        and (a[0] > b[0] or a[1] > b[1])
    )


def pareto_oracle(points: list[tuple[float, float]]) -> set[int]:
    """Indices of non-dominated points by the all-pairs quadratic scan."""
    keep = set()
    for i, p in enumerate(points):
        if not any(
            j != i and dominates_oracle(q, p) for j, q in enumerate(points)
        ):
            keep.add(i)
    return keep


def generational_distance_oracle(
    approx: list[tuple[float, float]], exact: list[tuple[float, float]]
) -> float:
    """Nested-loop GD with its own min-max normalization over the union."""
    union = approx + exact
    lo0 = min(p[0] for p in union)
    hi0 = max(p[0] for p in union)
    lo1 = min(p[1] for p in union)
    hi1 = max(p[1] for p in union)

    def norm(p):
        x = (p[0] - lo0) / (hi0 - lo0) if hi0 > lo0 else 0.0
        y = (p[1] - lo1) / (hi1 - lo1) if hi1 > lo1 else 0.0
        return (x, y)

    exact_n = [norm(p) for p in exact]
    total = 0.0
    for p in approx:
        pn = norm(p)
        total += min(
            math.dist(pn, en) for en in exact_n
        )
    return total / len(approx)


def normalized_sum_oracle(scores: list[tuple[float, float]]) -> list[float]:
    """Independent min-max normalized relevance + diversity sums."""
    rels = [s[0] for s in scores]
    divs = [s[1] for s in scores]
    r_lo, r_hi = min(rels), max(rels)
    d_lo, d_hi = min(divs), max(divs)
    out = []
    for r, d in scores:
        nr = (r - r_lo) / (r_hi - r_lo) if r_hi > r_lo else 0.0
        nd = (d - d_lo) / (d_hi - d_lo) if d_hi > d_lo else 0.0
        out.append(nr + nd)
    return out


def max_offdiagonal_oracle(similarity) -> float:
    """Brute-force pair scan with the diagonal excluded."""
    n = len(similarity)
    if n == 1:
        return 0.0
    return max(
        similarity[i][j] for i in range(n) for j in range(n) if i != j
    )
