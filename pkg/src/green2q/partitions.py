"""
Partition combinatorics and the Green polynomials of GL_n.

Partitions are plain tuples of weakly decreasing positive ints.  The Green
polynomial Q^lambda_rho(q) is computed through the Hall-Littlewood transition

    Q^lambda_rho(q) = sum_mu  chi^mu(rho) * Kt_{mu,lambda}(q)

where chi^mu is the irreducible S_n character (Murnaghan-Nakayama) and
Kt_{mu,lambda}(q) = sum over semistandard tableaux of shape mu and content
lambda of q^cocharge(T) is the modified Kostka-Foulkes polynomial
(cocharge = n(lambda) - charge).  With this normalisation

    R_{T_w}^{GL_n}(1)(u_lambda) = Q^lambda_{cycletype(w)}(q),

pinned down by two anchors checked in the test suite: the value on the
regular class is 1, and Q^lambda_{(1^n)}(q) at small q equals the number of
complete flags fixed by u_lambda.

Serialisation: a partition prints as comma-separated decreasing parts
("3,1,1"); a multipartition as semicolon-separated groups with an optional
"@k" field-extension suffix ("2,1;2", "2@2").
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from math import factorial
from typing import Iterator, Sequence

from .qpoly import ONE, Polynomial, ZERO

Partition = tuple  # weakly decreasing tuple of positive ints


def check_partition(p: Sequence[int]) -> Partition:
    p = tuple(p)
    if any(not isinstance(x, int) or x <= 0 for x in p):
        raise ValueError("partition parts must be positive integers: %r" % (p,))
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError("partition parts must be weakly decreasing: %r" % (p,))
    return p


def partitions(n: int) -> Iterator[Partition]:
    """All partitions of n, largest part first within each, in reverse
    lexicographic order ((n) first, (1^n) last)."""
    if n == 0:
        yield ()
        return

    def rec(remaining: int, largest: int, prefix: tuple):
        if remaining == 0:
            yield prefix
            return
        for part in range(min(remaining, largest), 0, -1):
            yield from rec(remaining - part, part, prefix + (part,))

    yield from rec(n, n, ())


def conjugate(p: Partition) -> Partition:
    if not p:
        return ()
    return tuple(sum(1 for x in p if x >= i) for i in range(1, p[0] + 1))


def dominance_leq(lam: Partition, mu: Partition) -> bool:
    """True iff lam is dominated by mu (all partial sums of lam <= mu's)."""
    if sum(lam) != sum(mu):
        raise ValueError("dominance compares partitions of equal size")
    total_l = total_m = 0
    for i in range(max(len(lam), len(mu))):
        total_l += lam[i] if i < len(lam) else 0
        total_m += mu[i] if i < len(mu) else 0
        if total_l > total_m:
            return False
    return True


def dominance_key(p: Partition) -> tuple:
    """Partial-sum vector; sorting by it linearly extends dominance."""
    n = sum(p)
    sums = []
    total = 0
    for i in range(n):
        total += p[i] if i < len(p) else 0
        sums.append(total)
    return tuple(sums)


def z_centralizer(rho: Partition) -> int:
    """|C_{S_n}(w)| for w of cycle type rho."""
    z = 1
    for part, group in itertools.groupby(rho):
        m = len(list(group))
        z *= part**m * factorial(m)
    return z


def n_stat(p: Partition) -> int:
    """n(lambda) = sum (i-1) * lambda_i."""
    return sum(i * part for i, part in enumerate(p))


def format_partition(p: Partition) -> str:
    return ",".join(str(x) for x in p) if p else ""


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if not text:
        return ()
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError("bad partition %r" % text) from None
    return check_partition(tuple(sorted(parts, reverse=True))) if parts else ()


def format_multipartition(groups: Sequence[tuple]) -> str:
    """Groups are (partition, extension degree) pairs."""
    out = []
    for part, k in groups:
        s = format_partition(part)
        out.append(s if k == 1 else "%s@%d" % (s, k))
    return ";".join(out)


def parse_multipartition(text: str) -> tuple:
    groups = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        k = 1
        if "@" in chunk:
            chunk, kstr = chunk.rsplit("@", 1)
            k = int(kstr)
            if k < 1:
                raise ValueError("extension degree must be >= 1")
        groups.append((parse_partition(chunk), k))
    return tuple(groups)


def induced_partition(groups: Sequence[tuple]) -> Partition:
    """Lusztig-Spaltenstein induced class label in GL_n.

    Each (mu, k) contributes k separate copies of mu; the induced label is
    the componentwise sum of all the copies after padding with zeros.  A
    GL_1(q) torus unit is the group ((1,), 1).
    """
    summands = []
    for mu, k in groups:
        mu = check_partition(mu)
        summands.extend([mu] * k)
    if not summands:
        return ()
    width = max(len(mu) for mu in summands)
    total = [0] * width
    for mu in summands:
        for i, part in enumerate(mu):
            total[i] += part
    return tuple(total)


# ---------------------------------------------------------------------------
# Murnaghan-Nakayama characters.
# ---------------------------------------------------------------------------


def _beta_set(lam: Partition) -> tuple:
    ell = len(lam)
    return tuple(lam[i] + ell - 1 - i for i in range(ell))


def _partition_from_beta(beta: Sequence[int]) -> Partition:
    beta = sorted(beta, reverse=True)
    ell = len(beta)
    parts = tuple(beta[i] - (ell - 1 - i) for i in range(ell))
    return tuple(p for p in parts if p > 0)


@functools.lru_cache(maxsize=None)
def mn_character(lam: Partition, rho: Partition) -> int:
    """Irreducible character chi^lam of S_n on the class of cycle type rho."""
    if sum(lam) != sum(rho):
        raise ValueError("character needs |lam| = |rho|")
    if not rho:
        return 1
    r = rho[0]
    rest = rho[1:]
    beta = set(_beta_set(lam))
    total = 0
    for b in sorted(beta):
        if b - r < 0 or (b - r) in beta:
            continue
        # Height of the border strip = number of beta elements it jumps over.
        height = sum(1 for c in beta if b - r < c < b)
        new_beta = set(beta)
        new_beta.remove(b)
        new_beta.add(b - r)
        total += (-1) ** height * mn_character(_partition_from_beta(new_beta), rest)
    return total


# ---------------------------------------------------------------------------
# Charge, Kostka-Foulkes, Green polynomials.
# ---------------------------------------------------------------------------


def _semistandard_tableaux(shape: Partition, content: Partition) -> Iterator[tuple]:
    """Semistandard tableaux of the given shape and content, as row tuples.

    Rows weakly increase, columns strictly increase, entry i appears
    content[i-1] times.
    """
    ell = len(content)
    remaining = list(content)
    rows: list[list[int]] = [[] for _ in shape]

    def fill(r: int, c: int) -> Iterator[tuple]:
        if r == len(shape):
            yield tuple(tuple(row) for row in rows)
            return
        if c == shape[r]:
            yield from fill(r + 1, 0)
            return
        low = rows[r][c - 1] if c > 0 else 1
        for v in range(low, ell + 1):
            if remaining[v - 1] == 0:
                continue
            if r > 0 and rows[r - 1][c] >= v:
                continue
            rows[r].append(v)
            remaining[v - 1] -= 1
            yield from fill(r, c + 1)
            rows[r].pop()
            remaining[v - 1] += 1

    yield from fill(0, 0)


def _standard_charge(word: Sequence[int]) -> int:
    # word contains 1..m once each
    positions = {v: i for i, v in enumerate(word)}
    value = 0
    total = 0
    for v in range(2, len(word) + 1):
        if positions[v] > positions[v - 1]:
            value += 1
        total += value
    return total


def _charge(word: Sequence[int]) -> int:
    """Lascoux-Schuetzenberger charge of a word with partition content."""
    word = list(word)
    total = 0
    while word:
        marked = []
        pos = len(word) - 1
        letter = 1
        found_any = True
        while found_any:
            found_any = False
            for step in range(len(word)):
                i = (pos - step) % len(word)
                if i in (m for m in marked):
                    continue
                if word[i] == letter:
                    marked.append(i)
                    pos = i
                    letter += 1
                    found_any = True
                    break
        marked_set = sorted(marked)
        sub = [word[i] for i in marked_set]
        total += _standard_charge(sub)
        word = [w for i, w in enumerate(word) if i not in set(marked_set)]
    return total


def _reading_word(tableau: tuple) -> list:
    word = []
    for row in reversed(tableau):
        word.extend(row)
    return word


@functools.lru_cache(maxsize=None)
def modified_kostka_foulkes(mu: Partition, lam: Partition) -> Polynomial:
    """Kt_{mu,lam}(q) = sum over SSYT(mu, lam) of q^cocharge."""
    if sum(mu) != sum(lam):
        raise ValueError("Kostka-Foulkes needs |mu| = |lam|")
    nl = n_stat(lam)
    coeffs = [Fraction(0)] * (nl + 1)
    for tab in _semistandard_tableaux(mu, lam):
        c = nl - _charge(_reading_word(tab))
        coeffs[c] += 1
    return Polynomial(coeffs)


@functools.lru_cache(maxsize=None)
def green_polynomial(lam: Partition, rho: Partition) -> Polynomial:
    """Green polynomial Q^lam_rho(q) of GL_n, n = |lam| = |rho|."""
    lam = check_partition(lam)
    rho = check_partition(tuple(sorted(rho, reverse=True)))
    if sum(lam) != sum(rho):
        raise ValueError("green_polynomial needs |lam| = |rho|")
    total = ZERO
    for mu in partitions(sum(lam)):
        if not dominance_leq(lam, mu):
            continue  # Kt_{mu,lam} = 0 unless mu dominates lam
        chi = mn_character(mu, rho)
        if chi == 0:
            continue
        total = total + modified_kostka_foulkes(mu, lam) * chi
    return total


def green_identity_value(rho: Partition) -> Polynomial:
    """Q^{(1^n)}_rho as forced by the degree formula:
    eps_G eps_T |GL_n|_{p'} / |T_rho| = (-1)^{n - l(rho)} prod (q^i-1) / prod (q^{rho_j}-1).
    Used as an independent anchor for the normalisation."""
    n = sum(rho)
    num = ONE
    for i in range(1, n + 1):
        num = num * (Polynomial.q_power(i) - 1)
    den = ONE
    for part in rho:
        den = den * (Polynomial.q_power(part) - 1)
    sign = (-1) ** (n - len(rho))
    return num.exact_div(den) * sign
