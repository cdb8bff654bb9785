"""Explicit multivariate (Laurent) polynomials as ``{exponent tuple: coeff}``.

These are the working representation underneath :class:`SymPoly`; nothing
here assumes symmetry.
"""
from __future__ import annotations

from collections import defaultdict


def padd(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v == 0:
            out.pop(e, None)
        else:
            out[e] = v
    return out


def pscale(a: dict, c) -> dict:
    if c == 0:
        return {}
    return {e: v * c for e, v in a.items()}


def pmul(a: dict, b: dict) -> dict:
    out = defaultdict(int)
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return {e: c for e, c in out.items() if c != 0}


def pshift(a: dict, shift) -> dict:
    """Multiply by the monomial z**shift."""
    return {tuple(x + s for x, s in zip(e, shift)): c for e, c in a.items()}


def divide_by_difference(p: dict, j: int, k: int) -> dict | None:
    """Exact quotient p / (z_j - z_k), or None if the division leaves a remainder.

    Synthetic division in z_j with z_k as a parameter, done separately for
    each fixed choice of the remaining exponents.
    """
    work = defaultdict(int)
    for e, c in p.items():
        work[e] += c
    quotient = defaultdict(int)
    # process terms in decreasing z_j exponent
    pending = sorted((e for e, c in work.items() if c != 0), key=lambda e: e[j], reverse=True)
    while pending:
        e = pending.pop(0)
        c = work.pop(e, 0)
        if c == 0:
            continue
        if e[j] == 0:
            return None
        lower = list(e)
        lower[j] -= 1
        quotient[tuple(lower)] += c
        # c z_j^a z_k^b = c z_j^(a-1) z_k^b (z_j - z_k) + c z_j^(a-1) z_k^(b+1)
        lower[k] += 1
        lower = tuple(lower)
        had = lower in work and work[lower] != 0
        work[lower] += c
        if not had and work[lower] != 0:
            # keep the pending list ordered by z_j exponent
            idx = 0
            while idx < len(pending) and pending[idx][j] >= lower[j]:
                idx += 1
            pending.insert(idx, lower)
        elif had and work[lower] == 0:
            pending.remove(lower)
    return {e: c for e, c in quotient.items() if c != 0}


def evaluate(p: dict, z):
    """Numerically evaluate at the rows of ``z`` (last axis = variables)."""
    import numpy as np

    z = np.asarray(z, dtype=complex)
    total = np.zeros(z.shape[:-1], dtype=complex)
    for e, c in p.items():
        total = total + complex(c) * np.prod(z ** np.array(e), axis=-1)
    return total
