"""Pure-Python implementations of the compiled kernels (same signatures)."""

from __future__ import annotations

import math

import numpy as np

MAX_SEVEN_K = None  # unbounded: exact Python integers


def seven_multinomial_sum(p: int, q: int, k: int) -> int:
    """Sum of ``3**k1 * multinomial(k; k1..k7)`` over admissible 7-compositions."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if p <= 0:
        raise ValueError("p must be positive")
    fact = [math.factorial(i) for i in range(k + 1)]
    kf = fact[k]
    total = 0
    for k1 in range(k + 1):
        r1 = k - k1
        c1 = kf // fact[k1] * 3 ** k1
        for k2 in range(r1 + 1):
            r2 = r1 - k2
            for k3 in range(r2 + 1):
                r3 = r2 - k3
                for k4 in range(r3 + 1):
                    r4 = r3 - k4
                    for k5 in range(r4 + 1):
                        r5 = r4 - k5
                        base = k5 - k2 - k4
                        lhs0 = p * (k3 + k5 - k2)
                        rhs0 = q * (k2 + k4 - k5)
                        denom = fact[k2] * fact[k3] * fact[k4] * fact[k5]
                        for k6 in range(r5 + 1):
                            k7 = r5 - k6
                            if (base + k7) % p:
                                continue
                            if lhs0 - p * k6 != rhs0 - q * k7:
                                continue
                            total += c1 // (denom * fact[k6] * fact[k7])
    return total


def jacobi_eigen(a_in, tol: float, max_sweeps: int, want_vectors: bool):
    """Cyclic Jacobi rotations; numpy row/column updates per rotation."""
    a = np.array(a_in, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n) if want_vectors else None
    fro = float(np.sqrt(np.sum(a * a)))
    sweep = 0
    while True:
        offd = a - np.diag(np.diag(a))
        off = float(np.sqrt(np.sum(offd * offd)))
        if off <= tol * fro or sweep >= max_sweeps:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * colq
                a[:, q] = s * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * rowq
                a[q, :] = s * rowp + c * rowq
                a[p, q] = a[q, p] = 0.0
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q]
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v, sweep, off, fro
