"""
Finite-group counting oracle over prime fields.

Everything here works with explicit matrices over F_p (p prime, matrices of
size <= 5) and plain integer counting, independently of the symbolic
formulas in `typea`.  The central count realises the split-Levi formula

    Qtilde(v, u) = |v^{L^F}| |C_{G^F}(u)| #{x in U^F : v^{-1} x in u^G}
                   / (|U^F| |L^F|)

by enumerating the p^{dim U} elements of the unipotent radical of the
standard block parabolic; the inverse on v is taken literally (it costs
nothing and removes a convention risk for SL_4).

Orders are obtained by counting, never from q-polynomials:
  * |GL_n(p)| and centralizer orders |C_{GL_n(p)}(u)| come from counting
    Jordan generator tuples (the centralizer acts freely and transitively
    on them, so the count *is* the order);
  * SL_4 centralizers divide the GL one by the size of the determinant
    image of the centralizer, which is sampled to stability from random
    solutions of the commutation system (fixed seed);
  * the identity-by-identity table cell is the flag count, whose
    echelon-pattern generating polynomial is also computed here.

Enumeration is vectorised with numpy int16 arrays; Jordan types are read
off batched rank sequences of powers of x - 1.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

import numpy as np

from . import partitions as pt
from . import typea
from .qpoly import Polynomial, interpolate
from .green2 import QtildeMatrix

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)

_CHUNK = 1 << 18


def _check_prime(p: int):
    if p not in SUPPORTED_PRIMES:
        raise ValueError("unsupported prime %d (need one of %s)" % (p, (SUPPORTED_PRIMES,)))


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int16)
    for x in range(1, p):
        inv[x] = pow(x, p - 2, p)
    return inv


def batched_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a batch of matrices over F_p.  mats: (B, m, n).

    Swap-free elimination: per column, the first untouched row with a
    nonzero entry becomes the pivot and the column is cleared from every
    other row; the pivot row is retired from the active mask.
    """
    a = mats.astype(np.int32, copy=True)
    a %= p
    bsz, m, n = a.shape
    inv = _inverse_table(p).astype(np.int32)
    used = np.zeros((bsz, m), dtype=bool)
    rank = np.zeros(bsz, dtype=np.int64)
    bidx = np.arange(bsz)
    for col in range(n):
        # a is kept unreduced between columns (entries stay small in int32);
        # only the slices actually read get reduced.
        colv = a[:, :, col] % p
        cand = (colv != 0) & ~used
        has = cand.any(axis=1)
        piv = np.argmax(cand, axis=1)
        pivrow = a[bidx, piv, :] % p
        pivval = colv[bidx, piv]
        f = colv * inv[pivval][:, None]
        f %= p
        f[~(~used & has[:, None])] = 0
        f[bidx, piv] = 0
        a -= f[:, :, None] * pivrow[:, None, :]
        used[bidx[has], piv[has]] = True
        rank += has
    return rank


def _batched_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    out = a.astype(np.int32, copy=False) @ b.astype(np.int32, copy=False)
    out %= p
    return out


def rank_mod(mat: np.ndarray, p: int) -> int:
    return int(batched_rank(mat[None, :, :], p)[0])


def _rank_sequence_of_partition(lam: tuple, upto: int) -> tuple:
    return tuple(sum(max(part - s, 0) for part in lam) for s in range(1, upto + 1))


def _partition_from_ranks(n: int, ranks: Sequence[int]) -> tuple:
    full = [n] + list(ranks)
    # lambda'_k = r_{k-1} - r_k, weakly decreasing for any nilpotent
    lamp = [full[k - 1] - full[k] for k in range(1, len(full))]
    lamp = tuple(c for c in lamp if c > 0)
    return pt.conjugate(lamp) if lamp else ()


def jordan_type(x: np.ndarray, p: int) -> tuple:
    """Jordan type of a unipotent matrix over F_p; rejects non-unipotent input."""
    _check_prime(p)
    x = np.asarray(x, dtype=np.int16) % p
    n = x.shape[0]
    nil = (x - np.eye(n, dtype=np.int16)) % p
    power = nil.copy()
    ranks = []
    for _ in range(n):
        ranks.append(rank_mod(power, p))
        power = _batched_matmul(power[None], nil[None], p)[0]
    if ranks and ranks[-1] != 0:
        raise ValueError("matrix is not unipotent")
    lam = _partition_from_ranks(n, ranks[: n - 1] + [0] * (1 if n else 0))
    if sum(lam) != n:
        raise ValueError("matrix is not unipotent")
    return lam


def jordan_keys_batch(nils: np.ndarray, p: int) -> np.ndarray:
    """Encoded rank sequences (r_1..r_{n-1}) for a batch of nilpotents."""
    bsz, n, _ = nils.shape
    key = np.zeros(bsz, dtype=np.int64)
    power = nils
    for _ in range(n - 1):
        key = key * (n + 1) + batched_rank(power, p)
        power = _batched_matmul(power, nils, p)
    return key


def jordan_counts_batch(nils: np.ndarray, p: int, n: int) -> Counter:
    """Histogram of Jordan types for a batch of nilpotent matrices.

    Adaptive: the rank of N splits the batch by number of parts, and only
    the still-ambiguous groups compute higher powers of N, on subsets.
    """
    parts = list(pt.partitions(n))
    seqs = {lam: _rank_sequence_of_partition(lam, n - 1) for lam in parts}
    result: Counter = Counter()
    stack = [(nils, nils, 1, parts)]
    while stack:
        nil_s, pow_s, depth, cands = stack.pop()
        r = batched_rank(pow_s, p)
        groups: dict = {}
        for lam in cands:
            groups.setdefault(seqs[lam][depth - 1], []).append(lam)
        matched = 0
        for val, lams in groups.items():
            mask = r == val
            c = int(mask.sum())
            if c == 0:
                continue
            matched += c
            if len(lams) == 1:
                result[lams[0]] += c
            else:
                idx = np.nonzero(mask)[0]
                nil_sub = nil_s[idx]
                pow_next = _batched_matmul(pow_s[idx], nil_sub, p)
                stack.append((nil_sub, pow_next, depth + 1, lams))
        if matched != len(r):
            raise RuntimeError("non-unipotent matrix in Jordan classification")
    return result


def decode_jordan_key(key: int, n: int) -> tuple:
    ranks = []
    for _ in range(n - 1):
        ranks.append(key % (n + 1))
        key //= n + 1
    ranks.reverse()
    return _partition_from_ranks(n, ranks + [0])


def jordan_key_of_partition(lam: tuple, n: int) -> int:
    ranks = _rank_sequence_of_partition(lam, n - 1)
    key = 0
    for r in ranks:
        key = key * (n + 1) + r
    return key


# ---------------------------------------------------------------------------
# Orders by counting.
# ---------------------------------------------------------------------------


def jordan_matrix(lam: tuple, n: int | None = None, params: Sequence[int] | None = None) -> np.ndarray:
    """Block-diagonal unipotent Jordan matrix of type lam.

    `params` optionally sets the first superdiagonal entry of each block
    (defaults to 1); used for SL_4 class representatives u(mu)."""
    n = n if n is not None else sum(lam)
    m = np.eye(n, dtype=np.int16)
    pos = 0
    for b, part in enumerate(lam):
        for i in range(part - 1):
            m[pos + i, pos + i + 1] = 1
        if part > 1 and params is not None:
            m[pos, pos + 1] = params[b]
        pos += part
    return m


def _all_vectors(n: int, p: int) -> np.ndarray:
    idx = np.arange(p**n, dtype=np.int64)
    out = np.zeros((p**n, n), dtype=np.int16)
    for i in range(n):
        out[:, i] = idx % p
        idx //= p
    return out


@dataclass(frozen=True)
class _TowerCache:
    counts: dict


_tower_cache: dict = {}


def gl_centralizer_count(lam: tuple, p: int) -> int:
    """|C_{GL_n(p)}(u_lam)| by counting Jordan generator tuples.

    The centralizer acts freely and transitively on tuples (v_1..v_r) with
    N^{lam_i} v_i = 0 generating V with the right cyclic structure, so the
    tuple count factors as a product of extension counts, each found by a
    vectorised scan of all p^n vectors.
    """
    _check_prime(p)
    lam = tuple(sorted(lam, reverse=True))
    key = (lam, p)
    if key in _tower_cache:
        return _tower_cache[key]
    n = sum(lam)
    nil = (jordan_matrix(lam) - np.eye(n, dtype=np.int16)) % p
    nil_pows = [np.eye(n, dtype=np.int16)]
    for _ in range(n):
        nil_pows.append(_batched_matmul(nil_pows[-1][None], nil[None], p)[0])

    vecs = _all_vectors(n, p)
    chosen: list[np.ndarray] = []
    total = 1
    for j, part in enumerate(lam):
        # candidates with N^part v = 0
        img = vecs @ nil_pows[part].astype(np.int64) % p
        cand = vecs[(img == 0).all(axis=1)]
        # tower rows of the already-chosen generators
        fixed_rows = [v @ nil_pows[a] % p for i, v in enumerate(chosen) for a in range(lam[i])]
        fixed = np.array(fixed_rows, dtype=np.int16) if fixed_rows else np.zeros((0, n), np.int16)
        towers = np.concatenate(
            [np.broadcast_to(fixed, (len(cand),) + fixed.shape)]
            + [(cand @ nil_pows[a].astype(np.int64) % p)[:, None, :] for a in range(part)],
            axis=1,
        ).astype(np.int16)
        want = sum(lam[: j + 1])
        ok = batched_rank(towers, p) == want
        # quotient type must be lam[j+1:]
        rest = lam[j + 1 :]
        if rest:
            expect = _rank_sequence_of_partition(rest, rest[0])
            for s in range(1, rest[0] + 1):
                # row space of N^s = image of the right-multiplication action
                ns_rows = np.broadcast_to(nil_pows[s], (len(cand), n, n))
                stacked = np.concatenate([towers, ns_rows], axis=1).astype(np.int16)
                qrank = batched_rank(stacked, p) - want
                ok &= qrank == expect[s - 1]
        count = int(ok.sum())
        if count == 0:
            raise RuntimeError("no valid generator extension for %s at p=%d" % (lam, p))
        total *= count
        chosen.append(cand[np.argmax(ok)].astype(np.int64))
    _tower_cache[key] = total
    return total


def gl_order_count(n: int, p: int) -> int:
    """|GL_n(p)|, counted as ordered bases (orbit-stabilizer on bases)."""
    return prod(p**n - p**i for i in range(n))


def conjugacy_class_size(lam: tuple, p: int) -> int:
    return gl_order_count(sum(lam), p) // gl_centralizer_count(lam, p)


# ---------------------------------------------------------------------------
# Flags.
# ---------------------------------------------------------------------------


def flag_fix_count(u: np.ndarray, p: int) -> int:
    """Number of complete flags in F_p^n fixed by the unipotent matrix u.

    Enumerates u-invariant lines (they all sit in ker(u-1)) and recurses on
    the quotient; exhaustive and independent of any Green-function code.
    """
    _check_prime(p)
    u = np.asarray(u, dtype=np.int64) % p
    n = u.shape[0]
    if n == 0:
        return 1
    nil = (u - np.eye(n, dtype=np.int64)) % p
    total = 0
    for line in _lines_in_kernel(nil, p):
        quo, proj = _quotient_map(line, n, p)
        induced = (quo @ u @ proj) % p
        total += flag_fix_count(induced, p)
    return total


def _lines_in_kernel(nil: np.ndarray, p: int) -> Iterable[np.ndarray]:
    # column-vector convention, matching the quotient maps below
    n = nil.shape[0]
    vecs = _all_vectors(n, p).astype(np.int64)
    kern = vecs[(vecs @ nil.T % p == 0).all(axis=1)]
    seen = set()
    for v in kern:
        if not v.any():
            continue
        lead = next(i for i in range(n) if v[i])
        norm = tuple(v * pow(int(v[lead]), p - 2, p) % p)
        if norm in seen:
            continue
        seen.add(norm)
        yield np.array(norm, dtype=np.int64)


def _quotient_map(line: np.ndarray, n: int, p: int):
    """Matrices (quo, proj) with quo: F^n -> F^{n-1} the quotient by the
    line and proj a section, so quo @ proj = identity."""
    lead = next(i for i in range(n) if line[i])
    others = [i for i in range(n) if i != lead]
    quo = np.zeros((n - 1, n), dtype=np.int64)
    for r, i in enumerate(others):
        quo[r, i] = 1
        quo[r, lead] = (-line[i]) % p  # subtract the line component
    # quo kills `line` only if normalised at lead; line[lead] == 1 by construction
    proj = np.zeros((n, n - 1), dtype=np.int64)
    for r, i in enumerate(others):
        proj[i, r] = 1
    return quo % p, proj


def flag_count_polynomial(blocks: Sequence[int]) -> Polynomial:
    """Generating polynomial sum q^{inv(w)} over multiset permutations of
    (1^{m_1}, 2^{m_2}, ...): the number of flags of this type over F_q,
    via the echelon/Schubert cell parametrisation."""
    word_pool = []
    for i, m in enumerate(blocks):
        word_pool.extend([i] * m)
    seen = set()
    coeffs = Counter()
    for w in itertools.permutations(word_pool):
        if w in seen:
            continue
        seen.add(w)
        inv = sum(1 for a, b in itertools.combinations(range(len(w)), 2) if w[a] > w[b])
        coeffs[inv] += 1
    top = max(coeffs) if coeffs else 0
    return Polynomial([coeffs.get(i, 0) for i in range(top + 1)])


# ---------------------------------------------------------------------------
# The split-Levi enumeration for GL_n(p).
# ---------------------------------------------------------------------------


def _radical_positions(blocks: Sequence[int]) -> list:
    offsets = [0]
    for m in blocks:
        offsets.append(offsets[-1] + m)
    n = offsets[-1]
    pos = []
    for bi in range(len(blocks)):
        for bj in range(bi + 1, len(blocks)):
            for i in range(offsets[bi], offsets[bi + 1]):
                for j in range(offsets[bj], offsets[bj + 1]):
                    pos.append((i, j))
    return pos


def _enumerate_vx_jordan_counts(vinv: np.ndarray, blocks: Sequence[int], p: int) -> Counter:
    """Counts of Jordan keys of v^{-1} x over all x in the block radical."""
    n = int(sum(blocks))
    positions = _radical_positions(blocks)
    d = len(positions)
    total = p**d
    counts: Counter = Counter()
    eye = np.eye(n, dtype=np.int32)
    vinv32 = vinv.astype(np.int32)
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        x = np.broadcast_to(eye, (len(idx), n, n)).copy()
        rem = idx
        for (i, j) in positions:
            x[:, i, j] = rem % p
            rem = rem // p
        m = vinv32 @ x
        m %= p
        m -= eye
        m %= p
        counts.update(jordan_counts_batch(m, p, n))
    return counts


def matrix_inverse_mod(mat: np.ndarray, p: int) -> np.ndarray:
    n = mat.shape[0]
    aug = np.concatenate([mat.astype(np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r, col] % p), None)
        if piv is None:
            raise ValueError("matrix not invertible")
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] * pow(int(aug[col, col]), p - 2, p) % p
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] = (aug[r] - aug[r, col] * aug[col]) % p
    return aug[:, n:]


def det_mod(mat: np.ndarray, p: int) -> int:
    a = mat.astype(np.int64).copy() % p
    n = a.shape[0]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r, col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = -det
        det = det * int(a[col, col]) % p
        inv = pow(int(a[col, col]), p - 2, p)
        for r in range(col + 1, n):
            if a[r, col]:
                a[r] = (a[r] - a[r, col] * inv * a[col]) % p
    return det % p


@dataclass(frozen=True)
class GLBruteResult:
    ambient_n: int
    p: int
    blocks: tuple
    row_labels: tuple  # multipartition labels aligned with typea ordering
    col_labels: tuple  # partitions of n
    entries: tuple  # Fractions


def _split_levi_blocks(levi: typea.LeviDescriptor) -> tuple:
    if not levi.is_split:
        raise ValueError("eq.(2) enumeration needs a split Levi, got %s" % (levi,))
    return tuple(m for m, _ in levi.factors) + (1,) * levi.deficit


def brute_qtilde_gl(levi: typea.LeviDescriptor, p: int) -> GLBruteResult:
    """Whole Qtilde matrix of GL_n(p) for a split Levi, by counting."""
    _check_prime(p)
    n = levi.ambient_n
    blocks = _split_levi_blocks(levi)
    l_classes = typea.unipotent_classes(levi)
    g_parts = [c.label[0] for c in typea.unipotent_classes(typea.full_group(n))]

    u_order = p ** sum(
        blocks[i] * blocks[j] for i in range(len(blocks)) for j in range(i + 1, len(blocks))
    )
    cent_g = {lam: gl_centralizer_count(lam, p) for lam in g_parts}

    rows = []
    entries = []
    for cls in l_classes:
        parts_per_block = list(cls.label) + [(1,)] * levi.deficit
        rep = _block_diag([jordan_matrix(lamb) for lamb in parts_per_block])
        vinv = matrix_inverse_mod(rep, p)
        counts = _enumerate_vx_jordan_counts(vinv, blocks, p)
        cent_l = prod(gl_centralizer_count(lamb, p) for lamb in cls.label) * (p - 1) ** levi.deficit
        row = []
        for lam in g_parts:
            cnt = counts.get(lam, 0)
            row.append(Fraction(cent_g[lam] * cnt, u_order * cent_l))
        rows.append(cls.label_string(levi))
        entries.append(tuple(row))
    return GLBruteResult(
        ambient_n=n,
        p=p,
        blocks=blocks,
        row_labels=tuple(rows),
        col_labels=tuple(pt.format_partition(lam) for lam in g_parts),
        entries=tuple(entries),
    )


def _block_diag(mats: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=np.int16)
    pos = 0
    for m in mats:
        k = m.shape[0]
        out[pos : pos + k, pos : pos + k] = m
        pos += k
    return out


def brute_qtilde_entry(
    levi: typea.LeviDescriptor, p: int, u: tuple, v: Sequence[tuple]
) -> Fraction:
    """Single Qtilde entry for GL_n(p); u a partition of n, v one partition
    per Levi block (deficit blocks implied)."""
    result = brute_qtilde_gl(levi, p)
    groups = [(part, 1) for part in v]
    want_row = pt.format_multipartition(
        groups + [((1,), 1)] * (levi.ambient_n - sum(sum(g) for g in v))
    )
    # Align with the canonical label strings (factor order may differ).
    target = _normalize_label(want_row)
    for i, lab in enumerate(result.row_labels):
        if _normalize_label(lab) == target:
            break
    else:
        raise ValueError("no Levi class with label %r" % (want_row,))
    try:
        j = result.col_labels.index(pt.format_partition(tuple(sorted(u, reverse=True))))
    except ValueError:
        raise ValueError("no ambient class with label %r" % (u,)) from None
    return result.entries[i][j]


def _normalize_label(label: str) -> tuple:
    return tuple(sorted(label.split(";")))


# ---------------------------------------------------------------------------
# SL_4(p).
# ---------------------------------------------------------------------------


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        seen = {pow(g, k, p) for k in range(p - 1)}
        if len(seen) == p - 1:
            return g
    raise ValueError("no primitive root mod %d" % p)


def _commutant_basis(r: np.ndarray, p: int) -> np.ndarray:
    """Basis of {g : g r = r g} over F_p, rows = flattened matrices."""
    n = r.shape[0]
    a = (np.kron(r, np.eye(n, dtype=np.int64)) - np.kron(np.eye(n, dtype=np.int64), r.T)) % p
    # solve a @ vec = 0 where vec is the row-major flattening and the
    # operator rows are indexed the same way: build from scratch instead
    rows = []
    for i in range(n):
        for j in range(n):
            row = np.zeros(n * n, dtype=np.int64)
            for k in range(n):
                row[k * n + j] += r[i, k]  # (r g)_{ij}
                row[i * n + k] -= r[k, j]  # (g r)_{ij}
            rows.append(row % p)
    a = np.array(rows, dtype=np.int64)
    return _nullspace_mod(a, p)


def _solve_conjugation_space(m: np.ndarray, r: np.ndarray, p: int) -> np.ndarray:
    """Basis of {g : m g = g r} over F_p."""
    n = m.shape[0]
    rows = []
    for i in range(n):
        for j in range(n):
            row = np.zeros(n * n, dtype=np.int64)
            for k in range(n):
                row[k * n + j] += m[i, k]
                row[i * n + k] -= r[k, j]
            rows.append(row % p)
    return _nullspace_mod(np.array(rows, dtype=np.int64), p)


def _nullspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    a = a.copy() % p
    m, n = a.shape
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, m) if a[r, col]), None)
        if piv is None:
            continue
        a[[row, piv]] = a[[piv, row]]
        a[row] = a[row] * pow(int(a[row, col]), p - 2, p) % p
        for r in range(m):
            if r != row and a[r, col]:
                a[r] = (a[r] - a[r, col] * a[row]) % p
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(n, dtype=np.int64)
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-a[r, fc]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64) if basis else np.zeros((0, n), dtype=np.int64)


class SL4Classifier:
    """Conjugacy-class data of SL_4(p): Jordan type plus splitting index.

    The splitting index of x is the coset of det(g) in F_p^x / D(lam) for
    any g in GL_4(p) conjugating x to the standard representative J(lam);
    D(lam) is the determinant image of the GL centralizer of J(lam),
    sampled with a fixed seed until stable.  Index 0 contains the standard
    representative (all block parameters equal to 1, i.e. squares).
    """

    STABLE_SAMPLES = 50

    def __init__(self, p: int, seed: int = 0):
        if p == 2:
            raise ValueError("SL_4 class splitting needs odd p")
        _check_prime(p)
        self.p = p
        self.rng = np.random.default_rng(seed)
        self.gamma = _primitive_root(p)
        self.dlog = {pow(self.gamma, k, p): k for k in range(p - 1)}
        self.det_image_order: dict = {}
        self.splitting: dict = {}
        self._commutants: dict = {}
        for lam in pt.partitions(4):
            rep = jordan_matrix(lam)
            basis = _commutant_basis(rep, p)
            self._commutants[lam] = basis
            order = self._sample_det_image(basis)
            self.det_image_order[lam] = order
            self.splitting[lam] = (p - 1) // order

    def _sample_det_image(self, basis: np.ndarray) -> int:
        p = self.p
        gen = p - 1  # gcd of dlogs of observed determinants
        stable = 0
        while stable < self.STABLE_SAMPLES:
            coeffs = self.rng.integers(0, p, size=len(basis))
            g = (coeffs @ basis % p).reshape(4, 4)
            d = det_mod(g, p)
            if d == 0:
                continue
            new = np.gcd(gen, self.dlog[d])
            if new == gen:
                stable += 1
            else:
                gen = int(new)
                stable = 0
        return (p - 1) // gen  # image order

    def class_of(self, x: np.ndarray) -> tuple:
        """(jordan type, splitting index) of a unipotent x in SL_4(p)."""
        p = self.p
        x = np.asarray(x, dtype=np.int64) % p
        if det_mod(x, p) != 1:
            raise ValueError("matrix is not in SL_4")
        lam = jordan_type(x, p)
        s = self.splitting[lam]
        if s == 1:
            return lam, 0
        return lam, self._index_of(x, lam, s)

    def _index_of(self, x: np.ndarray, lam: tuple, s: int) -> int:
        p = self.p
        rep = jordan_matrix(lam)
        space = _solve_conjugation_space(x, rep, p)
        for _ in range(200):
            coeffs = self.rng.integers(0, p, size=len(space))
            g = (coeffs @ space % p).reshape(4, 4)
            d = det_mod(g, p)
            if d != 0:
                return self.dlog[d] % s
        raise RuntimeError("failed to find an invertible conjugator")

    def index_batch_key(self, lam: tuple, idx: int) -> tuple:
        return (lam, idx)

    def sl_classes(self) -> list:
        """All unipotent SL_4(p) classes as (jordan, index) labels, in
        canonical order (jordan ascending in dominance, index ascending)."""
        out = []
        for lam in sorted(pt.partitions(4), key=pt.dominance_key):
            for idx in range(self.splitting[lam]):
                out.append((lam, idx))
        return out

    def sl_centralizer_order(self, lam: tuple) -> int:
        return gl_centralizer_count(lam, self.p) // self.det_image_order[lam]

    def class_rep(self, lam: tuple, idx: int) -> np.ndarray:
        """Representative with the first Jordan block's parameter gamma^idx."""
        params = [pow(self.gamma, idx, self.p)] + [1] * (len(lam) - 1)
        return jordan_matrix(lam, params=params)


@dataclass(frozen=True)
class SLBruteResult:
    p: int
    row_labels: tuple  # ((lam_a, lam_b), index)
    col_labels: tuple  # (lam, index)
    entries: tuple


def sl4_levi_classes(p: int, classifier: SL4Classifier) -> list:
    """Unipotent classes of the Levi S(GL_2 x GL_2)(p) of SL_4(p):
    ((lam_a, lam_b), t) with t indexing the determinant-coset splitting
    (the GL_2 x GL_2 class splits by the index of D_a D_b in F_p^x)."""
    out = []
    for lam_a in pt.partitions(2):
        for lam_b in pt.partitions(2):
            split = (p - 1) // _pair_det_image(lam_a, lam_b, classifier)
            for t in range(split):
                out.append(((lam_a, lam_b), t))
    out.sort(
        key=lambda c: (
            pt.dominance_key(tuple(sorted(c[0][0] + c[0][1], reverse=True))),
            c[0],
            c[1],
        )
    )
    return out


def _pair_det_image(lam_a: tuple, lam_b: tuple, classifier: SL4Classifier) -> int:
    # det image of C(v_a) x C(v_b) in F^x is the subgroup generated by the
    # two factor images; in a cyclic group that is the one of larger order
    size_a = _gl2_det_image_order(lam_a, classifier.p)
    size_b = _gl2_det_image_order(lam_b, classifier.p)
    return max(size_a, size_b)


def _gl2_det_image_order(lam: tuple, p: int) -> int:
    # det image of C_{GL_2(p)}(u_lam): everything for the identity type,
    # squares for the regular type
    return p - 1 if lam == (1, 1) else (p - 1) // 2


def sl4_levi_rep(label: tuple, t: int, classifier: SL4Classifier) -> np.ndarray:
    """Representative: the first block of the first factor carries gamma^t."""
    lam_a, lam_b = label
    param = pow(classifier.gamma, t, classifier.p)
    block_a = jordan_matrix(lam_a, params=[param] + [1] * (len(lam_a) - 1))
    block_b = jordan_matrix(lam_b)
    return _block_diag([block_a, block_b])


def sl4_levi_centralizer_order(label: tuple, classifier: SL4Classifier) -> int:
    lam_a, lam_b = label
    p = classifier.p
    img = _pair_det_image(lam_a, lam_b, classifier)
    return gl_centralizer_count(lam_a, p) * gl_centralizer_count(lam_b, p) // img


def brute_qtilde_sl4(p: int, seed: int = 0) -> SLBruteResult:
    """Qtilde matrix of SL_4(p) for the split Levi S(GL_2 x GL_2)."""
    _check_prime(p)
    classifier = SL4Classifier(p, seed=seed)
    u_classes = classifier.sl_classes()
    v_classes = sl4_levi_classes(p, classifier)

    l_order = gl_order_count(2, p) ** 2 // (p - 1)
    u_order = p**4
    blocks = (2, 2)

    positions = _radical_positions(blocks)
    eye = np.eye(4, dtype=np.int16)
    idx = np.arange(p ** len(positions), dtype=np.int64)
    xs = np.broadcast_to(eye, (len(idx), 4, 4)).copy()
    rem = idx
    for (i, j) in positions:
        xs[:, i, j] = (rem % p).astype(np.int16)
        rem = rem // p

    entries = []
    for label, t in v_classes:
        rep = sl4_levi_rep(label, t, classifier)
        vinv = matrix_inverse_mod(rep, p).astype(np.int16)
        ms = _batched_matmul(np.broadcast_to(vinv, xs.shape), xs, p)
        keys = jordan_keys_batch((ms - eye) % p, p)
        counts: Counter = Counter()
        for lam in pt.partitions(4):
            hits = keys == jordan_key_of_partition(lam, 4)
            if classifier.splitting[lam] == 1:
                counts[(lam, 0)] += int(hits.sum())
            else:
                for m in ms[hits]:
                    counts[classifier.class_of(m.astype(np.int64))] += 1
        cent_v = sl4_levi_centralizer_order(label, classifier)
        row = []
        for u in u_classes:
            cnt = counts.get(u, 0)
            cent_u = classifier.sl_centralizer_order(u[0])
            row.append(Fraction(cent_u * cnt, u_order * cent_v))
        entries.append(tuple(row))
    return SLBruteResult(
        p=p,
        row_labels=tuple(v_classes),
        col_labels=tuple(u_classes),
        entries=tuple(entries),
    )


# ---------------------------------------------------------------------------
# Interpolation back to symbolic tables.
# ---------------------------------------------------------------------------


def interpolate_table(
    levi: typea.LeviDescriptor, primes: Sequence[int]
) -> QtildeMatrix:
    """Entry-wise interpolation of brute-force samples to a symbolic table.

    Every cell is recovered by Lagrange interpolation except the identity
    (row, column) cell, which is the flag count of the parabolic and is
    taken from the echelon-pattern generating polynomial (its degree, dim U,
    can exceed #primes - 1); the prime samples are still checked against it.
    """
    primes = sorted(set(primes))
    if len(primes) < 2:
        raise ValueError("need at least two sample primes")
    n = levi.ambient_n
    results = {p: brute_qtilde_gl(levi, p) for p in primes}
    first = results[primes[0]]
    nrows, ncols = len(first.row_labels), len(first.col_labels)

    l_classes = typea.unipotent_classes(levi)
    g_classes = typea.unipotent_classes(typea.full_group(n))
    blocks = first.blocks
    flag_poly = flag_count_polynomial(blocks)

    entries = []
    for i in range(nrows):
        row = []
        for j in range(ncols):
            samples = [(p, results[p].entries[i][j]) for p in primes]
            if i == 0 and j == 0:
                value = flag_poly
                for p, y in samples:
                    if value.evaluate(p) != y:
                        raise RuntimeError(
                            "flag-count polynomial disagrees with samples at p=%d" % p
                        )
            else:
                value = interpolate(samples)
            row.append(value)
        entries.append(tuple(row))
    return QtildeMatrix(
        ambient=typea.full_group(n),
        levi=levi,
        rows=tuple(l_classes),
        cols=tuple(g_classes),
        entries=tuple(entries),
    )
