"""Bounded complexes of free modules: Koszul complexes, tensor products,
dualization, shifts, free resolutions, and homology as presented modules.

Complexes are homologically indexed with differentials d_h : C_h -> C_{h-1}
and composition zero, asserted at construction.  Homology is presented as a
cokernel whose generators are kernel columns inside the ambient free module,
so induced maps on homology can be computed by lifting.
"""

from __future__ import annotations

from itertools import combinations

from .groebner import (
    FreeModuleRef,
    PolyMatrix,
    _AugGB,
    _columns_vecs,
    _columns_vecs_scaled,
    lift as module_lift,
    syzygies,
)
from .polyring import Polynomial, vec_to_components


class Complex:
    """A bounded complex of free modules over A or over R."""

    def __init__(self, ring, lo, hi, ranks, differentials, over_r=False,
                 check=True):
        if lo > hi:
            raise ValueError("empty range")
        self.ring = ring
        self.over_r = over_r
        self.lo = lo
        self.hi = hi
        self.ranks = {h: ranks.get(h, 0) for h in range(lo, hi + 1)}
        self.diff = {}
        for h, mat in differentials.items():
            if mat is None or mat.is_zero():
                continue
            if mat.nrows != self.rank(h - 1) or mat.ncols != self.rank(h):
                raise ValueError("differential at %d has wrong shape" % h)
            if mat.over_r != over_r:
                raise ValueError("differential mode mismatch")
            self.diff[h] = mat
        if check:
            self._check_composition()

    def rank(self, h):
        return self.ranks.get(h, 0)

    def module(self, h):
        return FreeModuleRef(self.ring, self.rank(h), self.over_r)

    def differential(self, h):
        mat = self.diff.get(h)
        if mat is None:
            return PolyMatrix.zero(self.module(h - 1), self.module(h))
        return mat

    def _check_composition(self):
        for h in range(self.lo + 2, self.hi + 1):
            upper = self.diff.get(h)
            lower = self.diff.get(h - 1)
            if upper is None or lower is None:
                continue
            if not lower.compose(upper).is_zero():
                raise AssertionError("d o d != 0 at degree %d" % h)

    def euler_characteristic(self):
        return sum((-1) ** h * r for h, r in self.ranks.items())

    def dump(self):
        """Stable debug text: one line per degree, then the differentials."""
        lines = []
        for h in range(self.hi, self.lo - 1, -1):
            lines.append("%d: %d" % (h, self.rank(h)))
        for h in range(self.hi, self.lo, -1):
            mat = self.differential(h)
            rows = []
            for i in range(mat.nrows):
                rows.append("[" + ", ".join(str(mat.entry(i, j))
                                            for j in range(mat.ncols)) + "]")
            lines.append("d_%d = [%s]" % (h, "; ".join(rows)))
        return "\n".join(lines)

    def __repr__(self):
        return "Complex([%d, %d], ranks %s)" % (
            self.lo, self.hi,
            [self.rank(h) for h in range(self.lo, self.hi + 1)])


class ChainMap:
    """A degreewise map of complexes commuting with the differentials."""

    def __init__(self, source, target, components, check=True):
        self.source = source
        self.target = target
        self.components = dict(components)
        if check:
            lo = min(source.lo, target.lo)
            hi = max(source.hi, target.hi)
            for h in range(lo + 1, hi + 1):
                left = self.component(h - 1).compose(source.differential(h))
                right = target.differential(h).compose(self.component(h))
                for key in set(left.entries) | set(right.entries):
                    if left.entry(*key) != right.entry(*key):
                        raise AssertionError(
                            "chain map square fails at degree %d" % h)

    def component(self, h):
        mat = self.components.get(h)
        if mat is None:
            return PolyMatrix.zero(self.target.module(h),
                                   self.source.module(h))
        return mat


class PresentedModule:
    """A module presented as the cokernel of ``relations``; optionally
    remembers kernel columns inside an ambient free module (a subquotient
    lift) so induced maps on homology stay computable."""

    def __init__(self, ring, target_rank, relations, over_r=False,
                 kernel_columns=None, ambient=None):
        self.ring = ring
        self.target_rank = target_rank
        self.over_r = over_r
        if relations is None:
            fm = FreeModuleRef(ring, target_rank, over_r)
            relations = PolyMatrix.zero(fm, FreeModuleRef(ring, 0, over_r))
        self.relations = relations
        self.kernel_columns = kernel_columns
        self.ambient = ambient
        self._rel_span = None

    def relation_span(self):
        if self._rel_span is None:
            self._rel_span = self.relations.span_gb()
        return self._rel_span

    def contains_zero_class(self, vec_cols):
        """True if every given coordinate vector lies in the relation span."""
        _, buckets = self.relation_span()
        for v in vec_cols:
            rem, _ = self.ring.engine.normal_form(v, buckets)
            if rem:
                return False
        return True

    def is_zero(self):
        if self.target_rank == 0:
            return True
        gens = []
        for i in range(self.target_rank):
            gens.append(self.ring.engine.make_vec(
                [(i, (0,) * self.ring.nvars, 1)]))
        return self.contains_zero_class(gens)

    def __repr__(self):
        return "PresentedModule(rank %d, %d relations%s)" % (
            self.target_rank, self.relations.ncols,
            ", over R" if self.over_r else "")


class ModuleMap:
    """A map of presented modules given by a matrix on generators."""

    def __init__(self, source, target, matrix):
        self.source = source
        self.target = target
        self.matrix = matrix


# -- constructions -----------------------------------------------------------


def koszul_complex(elements, ring, over_r=False):
    """Koszul complex on the given ring elements, in degrees [0, n].

    The degree-h basis is indexed by h-subsets in lexicographic order and
    d(e_S) = sum_j (-1)^(j+1) f_j e_(S minus its j-th element).
    """
    fs = list(elements)
    n = len(fs)
    ranks = {}
    diffs = {}
    index = {}
    for h in range(n + 1):
        subsets = list(combinations(range(n), h))
        ranks[h] = len(subsets)
        index[h] = {s: i for i, s in enumerate(subsets)}
    for h in range(1, n + 1):
        entries = {}
        for s, col in index[h].items():
            for j, var in enumerate(s):
                rest = s[:j] + s[j + 1:]
                row = index[h - 1][rest]
                sign = 1 if j % 2 == 0 else -1
                f = fs[var] * sign
                if not f.is_zero():
                    entries[(row, col)] = f
        diffs[h] = PolyMatrix(FreeModuleRef(ring, ranks[h - 1], over_r),
                              FreeModuleRef(ring, ranks[h], over_r), entries)
    return Complex(ring, 0, n, ranks, diffs, over_r=over_r)


def _tensor_blocks(c, d, h):
    """Ordered nonzero blocks (p, q, offset, cp, dq) of (C (x) D)_h."""
    blocks = []
    offset = 0
    for p in range(c.lo, c.hi + 1):
        q = h - p
        cp = c.rank(p)
        dq = d.rank(q)
        if cp == 0 or dq == 0:
            continue
        blocks.append((p, q, offset, cp, dq))
        offset += cp * dq
    return blocks


def tensor_complexes(c, d):
    """Tensor product with the Koszul sign: d(x (x) y) = dx (x) y +
    (-1)^p x (x) dy."""
    if c.ring is not d.ring or c.over_r != d.over_r:
        raise ValueError("complexes over different rings")
    ring = c.ring
    lo, hi = c.lo + d.lo, c.hi + d.hi
    ranks = {}
    layout = {}
    for h in range(lo, hi + 1):
        blocks = _tensor_blocks(c, d, h)
        layout[h] = {(p, q): (off, cp, dq) for p, q, off, cp, dq in blocks}
        ranks[h] = sum(cp * dq for _, _, _, cp, dq in blocks)
    diffs = {}
    for h in range(lo + 1, hi + 1):
        entries = {}
        for p, q, off, cp, dq in _tensor_blocks(c, d, h):
            horiz = c.diff.get(p)
            if horiz is not None and (p - 1, q) in layout[h - 1]:
                toff = layout[h - 1][(p - 1, q)][0]
                for (i, j), e in horiz.entries.items():
                    for t in range(dq):
                        entries[(toff + i * dq + t, off + j * dq + t)] = e
            vert = d.diff.get(q)
            if vert is not None and (p, q - 1) in layout[h - 1]:
                toff = layout[h - 1][(p, q - 1)][0]
                dq1 = d.rank(q - 1)
                sign = 1 if p % 2 == 0 else -1
                for (i, j), e in vert.entries.items():
                    f = e * sign
                    for t in range(cp):
                        entries[(toff + t * dq1 + i, off + t * dq + j)] = f
        if entries:
            diffs[h] = PolyMatrix(FreeModuleRef(ring, ranks.get(h - 1, 0), c.over_r),
                                  FreeModuleRef(ring, ranks.get(h, 0), c.over_r),
                                  entries)
    return Complex(ring, lo, hi, ranks, diffs, over_r=c.over_r)


def dualize(c):
    """Dual complex Hom(C_{-h}, A) with transposed differentials; only for
    complexes over the ambient polynomial ring."""
    if c.over_r:
        raise ValueError("dualization into rank one is only supported over A")
    ranks = {}
    diffs = {}
    for h in range(c.lo, c.hi + 1):
        ranks[-h] = c.rank(h)
    for h in range(-c.hi + 1, -c.lo + 1):
        # d^dual_h is the transpose of d_{-h+1} with an alternating sign
        mat = c.diff.get(-h + 1)
        if mat is not None:
            sign = 1 if h % 2 == 0 else -1
            diffs[h] = mat.transpose().scale(sign)
    return Complex(c.ring, -c.hi, -c.lo, ranks, diffs, over_r=False)


def shift(c, k):
    """Shifted complex C[k]_h = C_{h-k}; differentials pick up (-1)^k."""
    ranks = {h + k: r for h, r in c.ranks.items()}
    sign = 1 if k % 2 == 0 else -1
    diffs = {}
    for h, mat in c.diff.items():
        diffs[h + k] = mat if sign == 1 else mat.scale(sign)
    return Complex(c.ring, c.lo + k, c.hi + k, ranks, diffs, over_r=c.over_r,
                   check=False)


def truncate(c, lo, hi):
    """Hard truncation: keep modules in [lo, hi] and interior differentials."""
    if lo > hi:
        raise ValueError("empty range")
    lo = max(lo, c.lo)
    hi = min(hi, c.hi)
    ranks = {h: c.rank(h) for h in range(lo, hi + 1)}
    diffs = {h: c.diff[h] for h in c.diff if lo < h <= hi}
    return Complex(c.ring, lo, hi, ranks, diffs, over_r=c.over_r, check=False)


# -- resolutions -------------------------------------------------------------


def _scalar_entry(p):
    if len(p.terms) != 1:
        return None
    mono, c = next(iter(p.terms.items()))
    if any(mono):
        return None
    return c


def _prune_top(mats):
    """Remove contractible [A = A] summands exposed by scalar entries of the
    top differential; ``mats`` is the list d_1, d_2, ..., d_k and the last
    matrix (and the column set of its predecessor) may shrink."""
    while True:
        top = mats[-1]
        pivot = None
        for key in sorted(top.entries):
            u = _scalar_entry(top.entries[key])
            if u is not None:
                pivot = (key[0], key[1], u)
                break
        if pivot is None:
            return
        i0, j0, u = pivot
        ring = top.ring
        col = {i: p for (i, j), p in top.entries.items()
               if j == j0 and i != i0}
        row = {j: p for (i, j), p in top.entries.items()
               if i == i0 and j != j0}
        new_entries = {}
        for (i, j), p in top.entries.items():
            if i != i0 and j != j0:
                new_entries[(_shift_idx(i, i0), _shift_idx(j, j0))] = p
        for i, ci in col.items():
            for j, rj in row.items():
                key = (_shift_idx(i, i0), _shift_idx(j, j0))
                q = new_entries.get(key, ring.zero()) - ci * rj * (1 / u)
                if q.is_zero():
                    new_entries.pop(key, None)
                else:
                    new_entries[key] = q
        tgt = FreeModuleRef(ring, top.nrows - 1, top.over_r)
        src = FreeModuleRef(ring, top.ncols - 1, top.over_r)
        mats[-1] = PolyMatrix(tgt, src, new_entries)
        if len(mats) >= 2:
            prev = mats[-2]
            pentries = {}
            for (i, j), p in prev.entries.items():
                if j == i0:
                    continue
                pentries[(i, _shift_idx(j, i0))] = p
            mats[-2] = PolyMatrix(prev.target,
                                  FreeModuleRef(ring, prev.ncols - 1,
                                                prev.over_r), pentries)


def _shift_idx(i, removed):
    return i if i < removed else i - 1


def free_resolution(module, length_bound):
    """Free complex F with H_0(F) isomorphic to the presented module and
    exact interior, built by iterated syzygies with contractible summands
    pruned; truncated at ``length_bound``."""
    ring = module.ring
    over_r = module.over_r
    mats = []
    current = module.relations
    for k in range(1, length_bound + 1):
        if current.ncols == 0:
            break
        mats.append(current)
        _prune_top(mats)
        current = syzygies(mats[-1])
    ranks = {0: module.target_rank if not mats else mats[0].nrows}
    diffs = {}
    for k, m in enumerate(mats, start=1):
        ranks[k] = m.ncols
        diffs[k] = m
    hi = len(mats)
    return Complex(ring, 0, hi, ranks, diffs, over_r=over_r)


def resolution_is_complete(resolution):
    """True when the top syzygies vanish, i.e. the complex is a resolution
    of its H_0 rather than a truncation."""
    top = resolution.diff.get(resolution.hi)
    if top is None:
        return True
    return syzygies(top).ncols == 0


# -- homology ----------------------------------------------------------------


def kernel_columns(c, h):
    """Matrix whose columns generate ker(d_h) in C_h (all of C_h when the
    outgoing differential vanishes)."""
    fm = c.module(h)
    if c.rank(h) == 0:
        return PolyMatrix.zero(fm, FreeModuleRef(c.ring, 0, c.over_r))
    low = c.diff.get(h)
    if low is None or low.nrows == 0:
        return PolyMatrix.identity(fm)
    return syzygies(low)


def homology(c, h):
    """Homology at degree h presented as coker([lifted boundaries | kernel
    syzygies]) with the kernel columns recorded as a subquotient lift."""
    ring = c.ring
    kmat = kernel_columns(c, h)
    if kmat.ncols == 0:
        return PresentedModule(ring, 0, None, over_r=c.over_r,
                               kernel_columns=kmat, ambient=c.module(h))
    aug = kmat.aug_gb()
    up = c.diff.get(h + 1)
    lifted_cols = []
    if up is not None:
        for v in _columns_vecs(up):
            coeffs = aug.lift_vec(v)
            if coeffs is None:
                raise AssertionError("boundary failed to lift through kernel")
            lifted_cols.append(coeffs)
    src_rank = kmat.ncols
    entries = {}
    ncols = 0
    for coeffs in lifted_cols:
        for (j, m), cval in coeffs.items():
            p = entries.get((j, ncols))
            add = Polynomial(ring, {m: cval})
            entries[(j, ncols)] = add if p is None else p + add
        ncols += 1
    syz = kmat.aug_gb().syzygy_vecs()
    for v in syz:
        comps = vec_to_components(ring, v, src_rank)
        for j, p in enumerate(comps):
            if not p.is_zero():
                entries[(j, ncols)] = p
        ncols += 1
    tgt = FreeModuleRef(ring, src_rank, c.over_r)
    rel = PolyMatrix(tgt, FreeModuleRef(ring, ncols, c.over_r), entries)
    return PresentedModule(ring, src_rank, rel, over_r=c.over_r,
                           kernel_columns=kmat, ambient=c.module(h))


def homology_is_zero(c, h):
    """Exactness test at degree h: every kernel generator is a boundary."""
    kmat = kernel_columns(c, h)
    if kmat.ncols == 0:
        return True
    up = c.diff.get(h + 1)
    if up is None:
        up = PolyMatrix.zero(c.module(h), FreeModuleRef(c.ring, 0, c.over_r))
    _, buckets = up.span_gb()
    for v in _columns_vecs(kmat):
        rem, _ = c.ring.engine.normal_form(v, buckets)
        if rem:
            return False
    return True


def augmentation_chain_map(elements, c):
    """The inclusion of C into K(f) (x) C as the p = 0 summand."""
    k = koszul_complex(list(elements), c.ring, over_r=c.over_r)
    t = tensor_complexes(k, c)
    return left_unit_chain_map(k, c, t)


def left_unit_chain_map(p, c, t):
    """Chain map C -> P (x) C embedding into the block p = 0; requires
    P_0 of rank one in lowest degree zero."""
    if p.lo != 0 or p.rank(0) != 1:
        raise ValueError("left factor must start with one generator in degree 0")
    comps = {}
    for h in range(c.lo, c.hi + 1):
        if c.rank(h) == 0:
            continue
        blocks = _tensor_blocks(p, c, h)
        off = None
        for bp, bq, boff, cp, dq in blocks:
            if bp == 0 and bq == h:
                off = boff
                break
        entries = {}
        one = c.ring.one()
        if off is not None:
            for i in range(c.rank(h)):
                entries[(off + i, i)] = one
        comps[h] = PolyMatrix(t.module(h), c.module(h), entries)
    return ChainMap(c, t, comps)


def induced_map_on_homology(chain_map, h):
    """The map induced on degree-h homology, as a matrix between the two
    homology presentations (with its source and target attached)."""
    src = homology(chain_map.source, h)
    tgt = homology(chain_map.target, h)
    return _induced_map(chain_map, h, src, tgt)


def _induced_map(chain_map, h, src, tgt):
    ring = chain_map.source.ring
    phi = chain_map.component(h)
    entries = {}
    if src.target_rank and tgt.target_rank:
        for j in range(src.kernel_columns.ncols):
            v = phi.apply(src.kernel_columns.column(j))
            u = module_lift(v, tgt.kernel_columns)
            if u is None:
                raise RuntimeError(
                    "image of a cycle failed to lift; chain map is inconsistent")
            for i, p in enumerate(u.components):
                if not p.is_zero():
                    entries[(i, j)] = p
    tgt_fm = FreeModuleRef(ring, tgt.target_rank, tgt.over_r)
    src_fm = FreeModuleRef(ring, src.target_rank, src.over_r)
    matrix = PolyMatrix(tgt_fm, src_fm, entries)
    return ModuleMap(src, tgt, matrix)


def image_module(module_map):
    """Presentation of the image of a map of presented modules: generators
    are the images of the source generators, relations their pullbacks."""
    tgt = module_map.target
    ring = tgt.ring
    cols, scales = _columns_vecs_scaled(module_map.matrix)
    rel = _columns_vecs(tgt.relations)
    aug = _AugGB(ring, cols, tgt.target_rank, tgt.over_r, extra_vecs=rel,
                 col_scales=scales)
    syz = aug.syzygy_vecs()
    src_rank = len(cols)
    entries = {}
    for jcol, v in enumerate(syz):
        comps = vec_to_components(ring, v, src_rank)
        for i, p in enumerate(comps):
            if not p.is_zero():
                entries[(i, jcol)] = p
    fm = FreeModuleRef(ring, src_rank, tgt.over_r)
    relmat = PolyMatrix(fm, FreeModuleRef(ring, len(syz), tgt.over_r), entries)
    return PresentedModule(ring, src_rank, relmat, over_r=tgt.over_r)
