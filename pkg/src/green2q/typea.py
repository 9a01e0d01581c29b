"""
Group-theoretic data for GL_n(q) and its F-stable Levi subgroups.

An F-stable Levi of GL_n is described up to conjugacy by a multiset of
(block size m, field extension degree k) pairs with sum m*k <= n; the
deficit n - sum m*k is a split central torus (q-1)^deficit.  The fixed
points are L^F = prod GL_m(q^k) x (q-1)^deficit.  Explicit (1,1) factors
are folded into the deficit, so descriptors are canonical.

Descriptor strings: "GL4 / 2@1,1@2" or, given the ambient separately,
"2@1,1@2"; "@1" may be omitted ("2,1,1").

Unipotent classes of a factor GL_m(q^k) are labelled by partitions of m;
centralizer orders come from the standard formula

    |C_{GL_m(q)}(u_lam)| = q^{sum (lam'_j)^2} * prod_i phi_{m_i}(1/q)

(m_i = multiplicity of i in lam, phi_m(t) = prod (1-t^j)) with q -> q^k per
factor; the brute-force module cross-checks these at small primes.

Maximal tori are indexed by one partition per factor; for GL_m(q^k) the
torus of type rho has |T^F| = prod (q^{k rho_j} - 1) and F-centralizer
order z_rho in the Weyl group.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import factorial
from typing import Iterator, Sequence

from . import partitions as pt
from .qpoly import ONE, Polynomial

_DESCRIPTOR_RE = re.compile(r"^\s*GL(\d+)\s*/\s*(.*)$")


@dataclass(frozen=True)
class LeviDescriptor:
    """F-stable Levi of GL_n up to conjugacy."""

    ambient_n: int
    factors: tuple  # sorted tuple of (m, k), never containing (1, 1)

    def __post_init__(self):
        used = sum(m * k for m, k in self.factors)
        if used > self.ambient_n:
            raise ValueError("factors exceed ambient GL_%d" % self.ambient_n)
        if any(m < 1 or k < 1 for m, k in self.factors):
            raise ValueError("factor sizes and degrees must be positive")
        if any((m, k) == (1, 1) for m, k in self.factors):
            raise ValueError("descriptor not canonical: (1,1) belongs to the deficit")
        if tuple(sorted(self.factors)) != self.factors:
            raise ValueError("descriptor not canonical: factors must be sorted")

    @property
    def deficit(self) -> int:
        return self.ambient_n - sum(m * k for m, k in self.factors)

    @property
    def is_full(self) -> bool:
        return self.factors == ((self.ambient_n, 1),)

    @property
    def is_split(self) -> bool:
        return all(k == 1 for _, k in self.factors)

    @property
    def f_rank(self) -> int:
        return sum(m for m, _ in self.factors) + self.deficit

    def levi_string(self) -> str:
        chunks = ["%d@%d" % (m, k) for m, k in self.factors]
        chunks.extend("1@1" for _ in range(self.deficit))
        return ",".join(chunks)

    def __str__(self):
        return "GL%d / %s" % (self.ambient_n, self.levi_string())


def make_levi(ambient_n: int, factors: Sequence[tuple]) -> LeviDescriptor:
    """Canonicalise: (1,1) factors become deficit, factors sorted."""
    kept = tuple(sorted((m, k) for m, k in factors if (m, k) != (1, 1)))
    return LeviDescriptor(ambient_n, kept)


def full_group(n: int) -> LeviDescriptor:
    return make_levi(n, [(n, 1)])


def parse_descriptor(text: str, ambient_n: int | None = None) -> LeviDescriptor:
    """Parse "GL4 / 2@1,1@2" or a bare factor list "2@1,1@2" / "2,1"."""
    m = _DESCRIPTOR_RE.match(text)
    if m:
        ambient_n = int(m.group(1))
        body = m.group(2)
    else:
        if ambient_n is None:
            raise ValueError("descriptor %r has no ambient group" % text)
        body = text
    factors = []
    body = body.strip()
    if body:
        for chunk in body.split(","):
            chunk = chunk.strip()
            if "@" in chunk:
                ms, ks = chunk.split("@", 1)
                factors.append((int(ms), int(ks)))
            else:
                factors.append((int(chunk), 1))
    return make_levi(ambient_n, factors)


def parse_ambient(text: str) -> int:
    m = re.match(r"^\s*GL(\d+)\s*$", text)
    if not m:
        raise ValueError("bad ambient group %r (expected GLn)" % text)
    return int(m.group(1))


def embeds(levi: LeviDescriptor, ambient: LeviDescriptor) -> bool:
    """Whether levi embeds as an F-stable Levi of ambient (type A only).

    For a product ambient, factors of the levi must distribute over the
    ambient factors with extension degrees divisible accordingly.
    """
    if levi.ambient_n != ambient.ambient_n:
        return False
    if ambient.is_full:
        return True
    # Try to pack levi factors into ambient factors.
    lev = list(levi.factors) + [(1, 1)] * levi.deficit
    amb = [(m, k) for m, k in ambient.factors] + [(1, 1)] * ambient.deficit

    def pack(remaining, slots):
        if not remaining:
            return all(s == 0 for s, _ in slots)
        (m, k), rest = remaining[0], remaining[1:]
        seen = set()
        for i, (space, ak) in enumerate(slots):
            if (space, ak) in seen:
                continue
            seen.add((space, ak))
            if k % ak == 0 and space >= m * (k // ak):
                new = list(slots)
                new[i] = (space - m * (k // ak), ak)
                if pack(rest, new):
                    return True
        return False

    return pack(sorted(lev, reverse=True), [(m, k) for m, k in amb])


def group_order(levi: LeviDescriptor) -> Polynomial:
    """|L^F| as a polynomial in q."""
    order = ONE
    for m, k in levi.factors:
        order = order * Polynomial.q_power(k * m * (m - 1) // 2)
        for j in range(1, m + 1):
            order = order * (Polynomial.q_power(k * j) - 1)
    for _ in range(levi.deficit):
        order = order * (Polynomial.q_power(1) - 1)
    return order


def order_prime_part(levi: LeviDescriptor) -> Polynomial:
    """|L^F|_{p'} : the order with the q-power factor removed."""
    order = group_order(levi)
    return order.exact_div(Polynomial.q_power(order.valuation()))


def epsilon(levi: LeviDescriptor) -> int:
    return (-1) ** levi.f_rank


def epsilon_product(ambient: LeviDescriptor, levi: LeviDescriptor) -> int:
    """eps_G eps_L = (-1)^{F-rank(G) - F-rank(L)}."""
    return epsilon(ambient) * epsilon(levi)


def index_prime_part(ambient: LeviDescriptor, levi: LeviDescriptor) -> Polynomial:
    """|G^F : L^F|_{p'}, always a polynomial."""
    return order_prime_part(ambient).exact_div(order_prime_part(levi))


# ---------------------------------------------------------------------------
# Unipotent classes.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnipotentClass:
    label: tuple  # one partition per factor, aligned with levi.factors
    ambient_jordan: tuple
    centralizer_order: Polynomial
    class_size: Polynomial

    def label_string(self, levi: LeviDescriptor) -> str:
        groups = [(part, k) for part, (_, k) in zip(self.label, levi.factors)]
        groups.extend(((1,), 1) for _ in range(levi.deficit))
        return pt.format_multipartition(groups)


def gl_centralizer_order(lam: tuple, k: int = 1) -> Polynomial:
    """|C_{GL_m(q^k)}(u_lam)| as a polynomial in q."""
    conj = pt.conjugate(lam)
    order = Polynomial.q_power(k * sum(c * c for c in conj))
    for _, group in itertools.groupby(lam):
        m_i = len(list(group))
        # prod_{j<=m_i} (1 - q^-j), cleared of denominators against the q-power
        for j in range(1, m_i + 1):
            order = order * (ONE - Polynomial.q_power(k * j)) * (-1)
            order = order.exact_div(Polynomial.q_power(k * j))
    return order


def ambient_jordan(label: Sequence[tuple], levi: LeviDescriptor) -> tuple:
    """Jordan type in GL_n(q) of an element with the given factor labels:
    each factor partition repeated k times, deficit contributing 1s."""
    parts = []
    for part, (_, k) in zip(label, levi.factors):
        parts.extend(list(part) * k)
    parts.extend([1] * levi.deficit)
    return tuple(sorted(parts, reverse=True))


def induced_label(label: Sequence[tuple], levi: LeviDescriptor) -> tuple:
    """Lusztig-Spaltenstein induced class of this Levi class in GL_n."""
    groups = [(part, k) for part, (_, k) in zip(label, levi.factors)]
    groups.extend((((1,), 1)) for _ in range(levi.deficit))
    return pt.induced_partition(groups)


def unipotent_classes(levi: LeviDescriptor) -> list:
    """Unipotent classes of L^F, canonically ordered.

    The order is by ambient Jordan label ascending in dominance (identity
    first, regular last; linearised by the partial-sum key), ties broken by
    the factor label tuple.
    """
    per_factor = [list(pt.partitions(m)) for m, _ in levi.factors]
    out = []
    torus = (Polynomial.q_power(1) - 1) ** levi.deficit
    for combo in itertools.product(*per_factor):
        cent = ONE
        for part, (_, k) in zip(combo, levi.factors):
            cent = cent * gl_centralizer_order(part, k)
        cent = cent * torus
        size = group_order(levi).exact_div(cent)
        out.append(
            UnipotentClass(
                label=tuple(combo),
                ambient_jordan=ambient_jordan(combo, levi),
                centralizer_order=cent,
                class_size=size,
            )
        )
    out.sort(key=lambda c: (pt.dominance_key(c.ambient_jordan), c.label))
    return out


# ---------------------------------------------------------------------------
# Maximal tori.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusClass:
    label: tuple  # one partition per factor
    order: Polynomial  # |T_w^F|
    f_centralizer_order: int  # |C_{W_L,F}(w)|

    def ambient_type(self, levi: LeviDescriptor) -> tuple:
        """Cycle type of the torus viewed in the ambient GL_n: cycle lengths
        multiply by the factor extension degree, deficit adds 1-cycles."""
        cycles = []
        for part, (_, k) in zip(self.label, levi.factors):
            cycles.extend(k * p for p in part)
        cycles.extend([1] * levi.deficit)
        return tuple(sorted(cycles, reverse=True))


def torus_classes(levi: LeviDescriptor) -> list:
    per_factor = [list(pt.partitions(m)) for m, _ in levi.factors]
    out = []
    torus = (Polynomial.q_power(1) - 1) ** levi.deficit
    for combo in itertools.product(*per_factor):
        order = torus
        z = 1
        for part, (_, k) in zip(combo, levi.factors):
            z *= pt.z_centralizer(part)
            for p in part:
                order = order * (Polynomial.q_power(k * p) - 1)
        out.append(TorusClass(label=tuple(combo), order=order, f_centralizer_order=z))
    out.sort(key=lambda t: t.label)
    return out


def weyl_order(levi: LeviDescriptor) -> int:
    w = 1
    for m, _ in levi.factors:
        w *= factorial(m)
    return w


def ordinary_green_table(levi: LeviDescriptor) -> dict:
    """R_T^L(1) on unipotent classes: maps (torus label, class label) to the
    product over factors of Q^{lam_i}_{rho_i}(q^{k_i})."""
    table = {}
    classes = unipotent_classes(levi)
    for torus in torus_classes(levi):
        for cls in classes:
            value = ONE
            for lam, rho, (_, k) in zip(cls.label, torus.label, levi.factors):
                green = pt.green_polynomial(lam, rho)
                if k > 1:
                    green = green.substitute_q_power(k)
                value = value * green
            table[(torus.label, cls.label)] = value
    return table


def enumerate_levis(n: int, proper: bool = True) -> Iterator[LeviDescriptor]:
    """All F-stable Levi types of GL_n (canonical descriptors)."""

    def rec(remaining: int, max_pair: tuple, acc: list):
        yield make_levi(n, acc)
        # extend with factors (m,k), m*k <= remaining, in decreasing order
        for mk in range(remaining, 1, -1):
            for m in range(mk, 0, -1):
                if mk % m:
                    continue
                k = mk // m
                pair = (m, k)
                if (m, k) == (1, 1) or pair > max_pair:
                    continue
                yield from rec(remaining - mk, pair, acc + [pair])

    seen = set()
    for levi in rec(n, (n, n), []):
        if levi.factors in seen:
            continue
        seen.add(levi.factors)
        if proper and levi.is_full:
            continue
        yield levi
