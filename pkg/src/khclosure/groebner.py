"""Groebner bases for ideals and submodules of free modules.

Submodules of A^r are handled with a position-over-term extension of the
ring order (lower index ranks higher).  Computations "over R" for a
quotient ring R = A/I_R are realized over A by appending I_R * e_i to
generator sets and reducing outputs.  Syzygies, lifts, and colon ideals
all come from one augmented-basis construction that tags generators with
fresh positions.
"""

from __future__ import annotations

from fractions import Fraction

from . import _core
from .polyring import (
    Polynomial,
    RingMismatchError,
    poly_to_vec,
    vec_to_components,
    vec_to_poly,
    vecs_of_columns,
)


class FreeModuleRef:
    """A free module A^rank or R^rank; over-R elements are stored as
    reduced over-A representatives."""

    __slots__ = ("ring", "rank", "over_r")

    def __init__(self, ring, rank, over_r=False):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        self.ring = ring
        self.rank = rank
        self.over_r = bool(over_r)

    def __eq__(self, other):
        return (isinstance(other, FreeModuleRef)
                and self.ring is other.ring
                and self.rank == other.rank
                and self.over_r == other.over_r)

    def __repr__(self):
        base = "R" if self.over_r else "A"
        return "FreeModuleRef(%s^%d)" % (base, self.rank)

    def element(self, components):
        return ModuleElement(self, components)

    def basis_element(self, i):
        comps = [self.ring.zero()] * self.rank
        comps[i] = self.ring.one()
        return ModuleElement(self, comps)


class ModuleElement:
    """A vector of polynomials in a fixed free module."""

    __slots__ = ("free_module", "components")

    def __init__(self, free_module, components):
        components = tuple(components)
        if len(components) != free_module.rank:
            raise ValueError("component count does not match rank")
        for p in components:
            if p.ring is not free_module.ring:
                raise RingMismatchError("component from a different ring")
        if free_module.over_r:
            ring = free_module.ring
            components = tuple(ring.reduce(p) for p in components)
        self.free_module = free_module
        self.components = components

    def is_zero(self):
        return all(p.is_zero() for p in self.components)

    def __eq__(self, other):
        return (isinstance(other, ModuleElement)
                and self.free_module == other.free_module
                and self.components == other.components)

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.components) + ")"

    __repr__ = __str__


def _ir_columns(ring, rank):
    """Engine vectors f*e_i for f in the reduced basis of I_R, i < rank."""
    out = []
    for i in range(rank):
        for v in ring._ir_gb:
            out.append([(ring.engine.term_key(i, m), i, m, c)
                        for (_k, _p, m, c) in v])
    return out


def _element_vec(el):
    return vecs_of_columns(el.free_module.ring.engine,
                           [list(el.components)])[0]


def _column_scale(matrix, j):
    denlcm = 1
    for i in range(matrix.nrows):
        for c in matrix.entry(i, j).terms.values():
            d = c.denominator
            g = _core.gcd(denlcm, d)
            denlcm = denlcm // g * d
    return denlcm


def _columns_vecs(matrix):
    cols = [[matrix.entry(i, j) for i in range(matrix.nrows)]
            for j in range(matrix.ncols)]
    return vecs_of_columns(matrix.ring.engine, cols)


def _columns_vecs_scaled(matrix):
    vecs = _columns_vecs(matrix)
    scales = [_column_scale(matrix, j) for j in range(matrix.ncols)]
    return vecs, scales


class PolyMatrix:
    """Sparse polynomial matrix between two free modules (columns map
    source basis vectors into the target)."""

    def __init__(self, target, source, entries):
        if target.ring is not source.ring or target.over_r != source.over_r:
            raise ValueError("incompatible free modules")
        self.target = target
        self.source = source
        self.ring = target.ring
        self.over_r = target.over_r
        self.nrows = target.rank
        self.ncols = source.rank
        clean = {}
        for (i, j), p in entries.items():
            if not (0 <= i < self.nrows and 0 <= j < self.ncols):
                raise ValueError("entry (%d, %d) out of bounds" % (i, j))
            if self.over_r:
                p = self.ring.reduce(p)
            if not p.is_zero():
                clean[(i, j)] = p
        self.entries = clean
        self._aug = None
        self._span = None

    @classmethod
    def from_columns(cls, target, columns):
        source = FreeModuleRef(target.ring, len(columns), target.over_r)
        entries = {}
        for j, col in enumerate(columns):
            comps = col.components if isinstance(col, ModuleElement) else col
            for i, p in enumerate(comps):
                if not p.is_zero():
                    entries[(i, j)] = p
        return cls(target, source, entries)

    @classmethod
    def identity(cls, fm):
        one = fm.ring.one()
        return cls(fm, fm, {(i, i): one for i in range(fm.rank)})

    @classmethod
    def zero(cls, target, source):
        return cls(target, source, {})

    def entry(self, i, j):
        return self.entries.get((i, j), self.ring.zero())

    def is_zero(self):
        return not self.entries

    def column(self, j):
        comps = [self.entry(i, j) for i in range(self.nrows)]
        return ModuleElement(self.target, comps)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def scale(self, c):
        return PolyMatrix(self.target, self.source,
                          {k: p * c for k, p in self.entries.items()})

    def transpose(self):
        tgt = FreeModuleRef(self.ring, self.ncols, self.over_r)
        src = FreeModuleRef(self.ring, self.nrows, self.over_r)
        return PolyMatrix(tgt, src,
                          {(j, i): p for (i, j), p in self.entries.items()})

    def compose(self, other):
        """Matrix product self * other."""
        if other.nrows != self.ncols:
            raise ValueError("dimension mismatch in composition")
        rows_of = {}
        for (k, j), p in other.entries.items():
            rows_of.setdefault(k, []).append((j, p))
        acc = {}
        for (i, k), p in self.entries.items():
            for j, q in rows_of.get(k, ()):
                key = (i, j)
                v = acc.get(key)
                acc[key] = p * q if v is None else v + p * q
        return PolyMatrix(self.target, other.source, acc)

    def apply(self, element):
        """Image of a module element under the matrix."""
        comps = element.components
        acc = [self.ring.zero()] * self.nrows
        for (i, j), p in self.entries.items():
            if not comps[j].is_zero():
                acc[i] = acc[i] + p * comps[j]
        return ModuleElement(self.target, acc)

    def stack_columns(self, other):
        """Concatenate the columns of two matrices with the same target."""
        if other.target != self.target:
            raise ValueError("targets differ")
        src = FreeModuleRef(self.ring, self.ncols + other.ncols, self.over_r)
        entries = dict(self.entries)
        for (i, j), p in other.entries.items():
            entries[(i, j + self.ncols)] = p
        return PolyMatrix(self.target, src, entries)

    def __repr__(self):
        return "PolyMatrix(%d x %d, %d nonzero)" % (
            self.nrows, self.ncols, len(self.entries))

    # -- cached engine data -------------------------------------------------

    def span_gb(self):
        """Complete (not interreduced) basis of the column span, with
        I_R*e_i included in over-R mode; used for membership tests."""
        if self._span is None:
            ring = self.ring
            vecs = _columns_vecs(self)
            if self.over_r:
                vecs = vecs + _ir_columns(ring, self.nrows)
            gb = ring.engine.buchberger(vecs, coprime_ok=(self.nrows == 1),
                                        reduce=False)
            self._span = (gb, ring.engine.buckets_of(gb))
        return self._span

    def aug_gb(self):
        if self._aug is None:
            vecs, scales = _columns_vecs_scaled(self)
            self._aug = _AugGB(self.ring, vecs, self.nrows, self.over_r,
                               col_scales=scales)
        return self._aug


class _AugGB:
    """Augmented basis of tagged columns; answers lifts and syzygies.

    ``col_scales`` records the denominator cleared from each input column,
    so answers refer to the original rational columns.
    """

    def __init__(self, ring, col_vecs, toprank, over_r, extra_vecs=(),
                 col_scales=None):
        self.ring = ring
        self.engine = ring.engine
        self.toprank = toprank
        self.ncols = len(col_vecs)
        self.col_scales = col_scales or [1] * len(col_vecs)
        aug = []
        for j, v in enumerate(col_vecs):
            tag = (self.engine.term_key(toprank + j, (0,) * ring.nvars),
                   toprank + j, (0,) * ring.nvars, 1)
            aug.append(list(v) + [tag])
        extras = list(extra_vecs)
        if over_r:
            extras.extend(_ir_columns(ring, toprank))
        self.gb = self.engine.buchberger(aug + extras, coprime_ok=False,
                                         reduce=False)
        self.buckets = self.engine.buckets_of(self.gb)
        self._syz = None

    def reduce_element(self, vec):
        """Exact remainder of [vec; 0]: returns (top, tags, denom)."""
        rem, denom = self.engine.normal_form(vec, self.buckets)
        top = [t for t in rem if t[1] < self.toprank]
        tags = [t for t in rem if t[1] >= self.toprank]
        return top, tags, denom

    def lift_vec(self, vec, in_denom=1):
        """Coefficients u with (columns) * u = vec, or None."""
        top, tags, denom = self.reduce_element(vec)
        if top:
            return None
        out = {}
        for _, p, m, c in tags:
            j = p - self.toprank
            out[(j, m)] = Fraction(-c * self.col_scales[j], denom * in_denom)
        return out

    def syzygy_vecs(self):
        """Generators of the syzygy module of the columns, de-tagged."""
        if self._syz is None:
            zero_top = [v for v in self.gb if v[0][1] >= self.toprank]
            shifted = []
            for v in zero_top:
                shifted.append(self.engine.make_vec(
                    (p - self.toprank, m, c * self.col_scales[p - self.toprank])
                    for (_k, p, m, c) in v))
            self._syz = self.engine.interreduce(
                [_core.vec_primitive(v) for v in shifted])
        return self._syz


def buchberger(gens, fm):
    """Reduced, monic, auto-reduced Groebner basis of the span of ``gens``."""
    return SubmoduleBasis(fm, gens)


class SubmoduleBasis:
    """A submodule of a free module with its reduced Groebner basis.

    Construction is deterministic for a fixed generator order; in over-R
    mode the basis is taken of the submodule plus I_R times every basis
    vector.
    """

    def __init__(self, free_module, generators, _gb_vecs=None, warnings=()):
        self.free_module = free_module
        self.ring = free_module.ring
        gens = []
        for g in generators:
            if isinstance(g, Polynomial):
                if free_module.rank != 1:
                    raise ValueError("bare polynomial needs a rank-1 module")
                g = ModuleElement(free_module, [g])
            if g.free_module != free_module:
                raise ValueError("generator in the wrong free module")
            gens.append(g)
        self.generators = tuple(gens)
        self.warnings = tuple(warnings)
        engine = self.ring.engine
        if _gb_vecs is None:
            vecs = [_element_vec(g) for g in gens]
            if free_module.over_r:
                vecs = vecs + _ir_columns(self.ring, free_module.rank)
            _gb_vecs = engine.buchberger(
                vecs, coprime_ok=(free_module.rank == 1 and not free_module.over_r))
        self._gb_vecs = _gb_vecs
        self._buckets = engine.buckets_of(_gb_vecs)
        gb = []
        for v in _gb_vecs:
            comps = vec_to_components(self.ring, v, free_module.rank)
            lead = Fraction(v[0][3])
            gb.append(ModuleElement(
                FreeModuleRef(self.ring, free_module.rank, False),
                [p * Fraction(1, lead) for p in comps]))
        self.groebner = tuple(gb)

    # -- membership ----------------------------------------------------------

    def normal_form_vec(self, vec):
        return self.ring.engine.normal_form(vec, self._buckets)

    def normal_form(self, v):
        """Unique remainder of v against the reduced basis."""
        if isinstance(v, Polynomial):
            v = ModuleElement(self.free_module, [v])
        if v.free_module.rank != self.free_module.rank or \
                v.free_module.ring is not self.ring:
            raise ValueError("element in the wrong free module")
        vec = _element_vec(v)
        denlcm = 1
        for p in v.components:
            for c in p.terms.values():
                d = c.denominator
                g = _core.gcd(denlcm, d)
                denlcm = denlcm // g * d
        rem, denom = self.normal_form_vec(vec)
        comps = vec_to_components(self.ring, rem, self.free_module.rank,
                                  denom * denlcm)
        return ModuleElement(
            FreeModuleRef(self.ring, self.free_module.rank, False), comps)

    def contains(self, v):
        return self.normal_form(v).is_zero()

    def is_zero_module(self):
        return not self._gb_vecs

    def is_unit(self):
        if self.free_module.rank != 1:
            raise ValueError("unit test only for ideals")
        return bool(self._gb_vecs) and not any(self._gb_vecs[0][0][2])

    def gb_polynomials(self):
        if self.free_module.rank != 1:
            raise ValueError("rank-1 accessor")
        return [g.components[0] for g in self.groebner]

    def __repr__(self):
        return "SubmoduleBasis(rank %d, %d generators, %d basis elements)" % (
            self.free_module.rank, len(self.generators), len(self.groebner))


def normal_form(v, basis):
    return basis.normal_form(v)


def is_subset(inner, outer):
    """True iff every basis element of ``inner`` lies in ``outer``."""
    if inner.free_module.rank != outer.free_module.rank:
        raise ValueError("free modules differ")
    for v in inner._gb_vecs:
        rem, _ = outer.normal_form_vec(v)
        if rem:
            return False
    return True


def ideal_equal(i, j):
    return is_subset(i, j) and is_subset(j, i)


def ideal_basis(ring, polys, over_r=False):
    fm = FreeModuleRef(ring, 1, over_r)
    return SubmoduleBasis(fm, [p if isinstance(p, Polynomial) else ring.parse(p)
                               for p in polys])


def unit_ideal(ring, over_r=False):
    return ideal_basis(ring, [ring.one()], over_r)


# -- syzygies and lifts ----------------------------------------------------


def syzygies(matrix):
    """Matrix whose columns generate the kernel of ``matrix`` exactly
    (over R when the matrix is over-R)."""
    ring = matrix.ring
    syz = matrix.aug_gb().syzygy_vecs()
    src = FreeModuleRef(ring, matrix.ncols, matrix.over_r)
    cols = [ModuleElement(src, vec_to_components(ring, v, matrix.ncols))
            for v in syz]
    out = PolyMatrix.from_columns(src, cols)
    prod = matrix.compose(out)
    if prod.entries:
        raise AssertionError("syzygy columns do not annihilate the matrix")
    return out


def lift(v, matrix):
    """u with matrix * u = v when v is in the column span, else None."""
    if isinstance(v, Polynomial):
        v = ModuleElement(matrix.target, [v])
    vec = _element_vec(v)
    denlcm = 1
    for p in v.components:
        for c in p.terms.values():
            d = c.denominator
            g = _core.gcd(denlcm, d)
            denlcm = denlcm // g * d
    coeffs = matrix.aug_gb().lift_vec(vec, denlcm)
    if coeffs is None:
        return None
    comps = [dict() for _ in range(matrix.ncols)]
    for (j, m), c in coeffs.items():
        comps[j][m] = c
    src = FreeModuleRef(matrix.ring, matrix.ncols, False)
    return ModuleElement(src, [Polynomial(matrix.ring, t) for t in comps])


# -- colon, intersection, annihilator --------------------------------------


def _colon_vecs(ring, rel_gb, gen_vec, toprank):
    """Ideal {x : x * gen is in the span described by rel_gb}."""
    engine = ring.engine
    tag = (engine.term_key(toprank, (0,) * ring.nvars),
           toprank, (0,) * ring.nvars, 1)
    tagged = list(gen_vec) + [tag]
    gb = engine.buchberger([tagged], coprime_ok=False, seed=rel_gb,
                           reduce=False)
    out = []
    for v in gb:
        if v[0][1] < toprank:
            continue
        out.append([(engine.term_key(0, m), 0, m, c)
                    for (_k, p, m, c) in v if p == toprank])
    return engine.interreduce(out)


def _intersect_ideal_vecs(ring, left, right):
    """Intersection of two ideals given as engine vectors, by elimination."""
    base_key = ring.order.mono_key
    engine = _core.Engine(ring.nvars + 1, _core.elim1_key(base_key),
                          ring.degree_cap)

    def extend(v, texp):
        return [(engine.term_key(0, (texp,) + m), 0, (texp,) + m, c)
                for (_k, _p, m, c) in v]

    gens = []
    for v in left:
        gens.append(extend(v, 1))
    for v in right:
        gens.append(_core.vec_add(extend(v, 0),
                                  _core.vec_scale(extend(v, 1), -1)))
    gb = engine.buchberger(gens, coprime_ok=True)
    out = []
    for v in gb:
        if any(m[0] for (_k, _p, m, _c) in v):
            continue
        out.append([(ring.engine.term_key(0, m[1:]), 0, m[1:], c)
                    for (_k, _p, m, c) in v])
    return ring.engine.interreduce(out)


def _vec_mul_polyvec(engine, v, pvec):
    """Product of a module vector with a rank-1 polynomial vector."""
    acc = []
    for _, _, m, c in pvec:
        acc = _core.vec_add(acc, engine.mul_term(v, m, c))
    return acc


def _ann_of_columns(ring, toprank, rel_vecs, gen_vecs, over_r):
    """Annihilator of the subquotient spanned by ``gen_vecs`` inside
    coker(rel_vecs), as reduced rank-1 vectors over A.

    Computes per-generator colon ideals, intersecting until the candidate
    provably annihilates every remaining generator.
    """
    engine = ring.engine
    gens = [v for v in gen_vecs if v]
    if toprank == 0 or not gens:
        return [engine.make_vec([(0, (0,) * ring.nvars, 1)])]
    rels = list(rel_vecs)
    if over_r:
        rels = rels + _ir_columns(ring, toprank)
    rel_gb = engine.buchberger(rels, coprime_ok=(toprank == 1), reduce=False)
    rel_buckets = engine.buckets_of(rel_gb)
    gens.sort(key=lambda v: v[0][0])

    def kills_all(cand, rest):
        for g in rest:
            for a in cand:
                prod = _vec_mul_polyvec(engine, g, a)
                rem, _ = engine.normal_form(prod, rel_buckets)
                if rem:
                    return False
        return True

    ann = None
    for idx, g in enumerate(gens):
        colon = _colon_vecs(ring, rel_gb, g, toprank)
        ann = colon if ann is None else _intersect_ideal_vecs(ring, ann, colon)
        if kills_all(ann, gens[idx + 1:]):
            break
    return ann


def annihilator(module):
    """Annihilator ideal of a finitely presented module, as a rank-1 basis.

    ``module`` needs ``ring``, ``target_rank``, ``relations`` and ``over_r``
    attributes; over-R presentations get I_R included automatically.
    """
    ring = module.ring
    if module.target_rank == 0:
        return unit_ideal(ring, over_r=module.over_r)
    rel = _columns_vecs(module.relations) if module.relations is not None else []
    gens = []
    for i in range(module.target_rank):
        gens.append(ring.engine.make_vec([(i, (0,) * ring.nvars, 1)]))
    ann = _ann_of_columns(ring, module.target_rank, rel, gens, module.over_r)
    polys = [vec_to_poly(ring, v).monic() for v in ann]
    return ideal_basis(ring, polys, over_r=module.over_r)


def ideal_quotient(ideal, by):
    """Colon ideal (I : g) or (I : J) in the ideal's free module mode."""
    ring = ideal.ring
    fm = ideal.free_module
    if fm.rank != 1:
        raise ValueError("colon is defined for ideals")
    if isinstance(by, SubmoduleBasis):
        gens = [g.components[0] for g in by.generators]
    else:
        gens = [by]
    gens = [ring.reduce(g) if fm.over_r else g for g in gens]
    nonzero = [g for g in gens if not g.is_zero()]
    if not nonzero:
        return SubmoduleBasis(fm, [ring.one()],
                              warnings=("colon by the zero ideal",))
    engine = ring.engine
    rel_gb = list(ideal._gb_vecs)
    result = None
    for g in nonzero:
        gvec = poly_to_vec(engine, g)
        colon = _colon_vecs(ring, rel_gb, gvec, 1)
        result = colon if result is None else \
            _intersect_ideal_vecs(ring, result, colon)
    polys = [vec_to_poly(ring, v).monic() for v in result]
    out = SubmoduleBasis(fm, polys)
    for p in polys:
        for g in nonzero:
            if not ideal.contains(p * g):
                raise AssertionError("colon generator fails membership check")
    return out


def intersect(i, j):
    """Groebner basis of the intersection of two submodules."""
    if i.free_module != j.free_module:
        raise ValueError("free modules differ")
    ring = i.ring
    rank = i.free_module.rank
    if rank == 1:
        vecs = _intersect_ideal_vecs(ring, list(i._gb_vecs), list(j._gb_vecs))
        polys = [vec_to_poly(ring, v).monic() for v in vecs]
        return SubmoduleBasis(i.free_module, polys)
    base_key = ring.order.mono_key
    engine = _core.Engine(ring.nvars + 1, _core.elim1_key(base_key),
                          ring.degree_cap)

    def extend(v, texp):
        return [(engine.term_key(p, (texp,) + m), p, (texp,) + m, c)
                for (_k, p, m, c) in v]

    gens = [extend(v, 1) for v in i._gb_vecs]
    for v in j._gb_vecs:
        gens.append(_core.vec_add(extend(v, 0),
                                  _core.vec_scale(extend(v, 1), -1)))
    gb = engine.buchberger(gens, coprime_ok=False)
    elements = []
    for v in gb:
        if any(m[0] for (_k, _p, m, _c) in v):
            continue
        back = [(ring.engine.term_key(p, m[1:]), p, m[1:], c)
                for (_k, p, m, c) in v]
        comps = vec_to_components(ring, back, rank)
        elements.append(ModuleElement(
            FreeModuleRef(ring, rank, False), comps))
    return SubmoduleBasis(i.free_module, elements)


def min_gens(basis):
    """A generating subset of ``basis.generators`` no proper subset of
    which generates the same submodule."""
    fm = basis.free_module
    keyed = [(_element_vec(g)[0][0], k, g)
             for k, g in enumerate(basis.generators) if not g.is_zero()]
    keyed.sort(key=lambda t: (t[0], t[1]), reverse=True)
    kept = [g for _, _, g in keyed]
    for _, _, g in keyed:
        if g not in kept:
            continue
        rest = [h for h in kept if h is not g]
        if SubmoduleBasis(fm, rest).contains(g):
            kept = rest
    return kept


def krull_dimension(ring):
    """Krull dimension of A/I_R; -1 signals the unit ideal."""
    return ring.dim


def dimension_of_quotient(ring, extra):
    """Dimension of R/(extra) computed from a fresh lead-term ideal."""
    from .polyring import _dimension_from_leads
    engine = ring.engine
    vecs = list(ring._ir_gb)
    for f in extra:
        v = poly_to_vec(engine, f)
        if v:
            vecs.append(v)
    gb = engine.buchberger(vecs, coprime_ok=True, reduce=False)
    leads = [v[0][2] for v in gb]
    if any(not any(m) for m in leads):
        return -1
    return _dimension_from_leads(ring.nvars, leads)


def check_parameters(ring, elements):
    """True iff each prefix drops the dimension by exactly one."""
    d = ring.dim
    for j in range(1, len(elements) + 1):
        if dimension_of_quotient(ring, elements[:j]) != d - j:
            return False
    return True
