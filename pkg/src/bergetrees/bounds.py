"""Closed-form edge bounds for Berge trees and Berge paths, as exact rationals."""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .hypermodel import PreconditionError

BOUND_KINDS = ("simple", "multi", "path_long", "path_short")


class RegimeError(PreconditionError):
    """Parameters fall outside the regime in which a bound is proved."""


def check_regime(r: int, k: int, which: str) -> None:
    if which == "simple":
        if r < k * (k - 2):
            raise RegimeError(f"simple bound needs r >= k(k-2) = {k * (k - 2)}, got r={r}")
    elif which == "multi":
        if r < (k - 1) * (k - 2):
            raise RegimeError(f"multi bound needs r >= (k-1)(k-2) = {(k - 1) * (k - 2)}, got r={r}")
    elif which == "path_long":
        if not k > r + 1 > 3:
            raise RegimeError(f"long-path bound needs k > r+1 > 3, got k={k}, r={r}")
    elif which == "path_short":
        if not r >= k > 2:
            raise RegimeError(f"short-path bound needs r >= k > 2, got r={r}, k={k}")
    else:
        raise ValueError(f"unknown bound {which!r}; expected one of {BOUND_KINDS}")


def bound(n: int, r: int, k: int, which: str) -> Fraction:
    """Maximum edge count forced by the corresponding theorem.

    ``simple``: n(k-1)/(r+1) for non-star trees; ``multi``: n(k-1)/r;
    ``path_long``: (n/k) C(k, r); ``path_short``: n(k-1)/(r+1).
    """
    if n < 0 or r < 1 or k < 1:
        raise ValueError(f"bad parameters n={n}, r={r}, k={k}")
    check_regime(r, k, which)
    if which in ("simple", "path_short"):
        return Fraction(n * (k - 1), r + 1)
    if which == "multi":
        return Fraction(n * (k - 1), r)
    return Fraction(n, k) * comb(k, r)
