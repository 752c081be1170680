"""Closure operations on ideals of R = A/I_R built from a user-supplied
multiplier module W inside the canonical module.

The derived global-sections complex of a resolution of singularities is
reconstructed by duality: resolve W freely over A, dualize into A, and
shift so its degree-zero homology is the codimension-c Ext.  Koszul-
Hironaka closure, Hironaka preclosure, the module closure (J*W : W), and
the associated test ideal are all computed against that complex.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from .groebner import (
    FreeModuleRef,
    ModuleElement,
    PolyMatrix,
    _ann_of_columns,
    _columns_vecs,
    _vec_mul_polyvec,
    annihilator,
    check_parameters,
    ideal_basis,
    ideal_equal,
    ideal_quotient,
    is_subset,
    syzygies,
    unit_ideal,
)
from .homalg import (
    Complex,
    ModuleMap,
    PresentedModule,
    dualize,
    free_resolution,
    homology,
    homology_is_zero,
    image_module,
    kernel_columns,
    koszul_complex,
    resolution_is_complete,
    shift,
    tensor_complexes,
)
from .polyring import poly_to_vec, vec_to_poly


class MultiplierModuleSpec:
    """The multiplier module W, a submodule of the canonical module of R.

    Modes: ``submodule-of-R`` (generators are ring elements, meaningful via
    an identification of the canonical module with R), ``submodule-of-omega``
    (generator columns in the canonical module's presentation), or ``unit``
    (W is the whole canonical module).
    """

    MODES = ("submodule-of-R", "submodule-of-omega", "unit")

    def __init__(self, ring, mode, generators=(), omega_is_r=None):
        if mode not in self.MODES:
            raise ValueError("unknown multiplier mode %r" % (mode,))
        self.ring = ring
        self.mode = mode
        if omega_is_r is None:
            omega_is_r = mode in ("submodule-of-R", "unit")
        self.omega_is_r = bool(omega_is_r)
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            gens.append(g)
        if mode == "submodule-of-R":
            gens = [ring.reduce(g) for g in gens]
            if any(g.is_zero() for g in gens):
                raise ValueError("multiplier generator is zero in R")
            if not gens:
                raise ValueError("submodule-of-R mode needs generators")
        if mode == "unit" and gens:
            raise ValueError("unit mode takes no generators")
        self.generators = tuple(gens)

    def __repr__(self):
        return "MultiplierModuleSpec(%s, %d generators)" % (
            self.mode, len(self.generators))


def canonical_module_presentation(ring):
    """The canonical module of R as the codim-c Ext of A/I_R into A,
    presented over A (cached on the ring)."""
    cached = getattr(ring, "_omega_pres", None)
    if cached is not None:
        return cached
    fm = FreeModuleRef(ring, 1)
    rel = PolyMatrix.from_columns(fm, [fm.element([f]) for f in ring.groebner])
    pres = PresentedModule(ring, 1, rel)
    res = free_resolution(pres, ring.nvars)
    if not resolution_is_complete(res):
        raise AssertionError("resolution of the coordinate ring is incomplete")
    omega = homology(shift(dualize(res), ring.codim), 0)
    ring._omega_pres = omega
    return omega


def _presentation_of_multiplier(spec):
    """W as a finitely presented A-module."""
    ring = spec.ring
    if spec.mode == "submodule-of-R":
        fm = FreeModuleRef(ring, 1, over_r=True)
        row = PolyMatrix.from_columns(fm, [fm.element([g])
                                           for g in spec.generators])
        rel_r = syzygies(row)
        tgt = FreeModuleRef(ring, len(spec.generators))
        entries = {k: p for k, p in rel_r.entries.items()}
        rel = PolyMatrix(tgt, FreeModuleRef(ring, rel_r.ncols), entries)
        return PresentedModule(ring, len(spec.generators), rel)
    omega = canonical_module_presentation(ring)
    if spec.mode == "unit":
        return omega
    # submodule-of-omega: the span of the given columns inside omega
    if not spec.generators:
        raise ValueError("submodule-of-omega mode needs generator columns")
    cols = []
    for g in spec.generators:
        comps = g.components if isinstance(g, ModuleElement) else [g]
        if len(comps) != omega.target_rank:
            raise ValueError("column length does not match the canonical module")
        cols.append(list(comps))
    fm = FreeModuleRef(ring, omega.target_rank)
    matrix = PolyMatrix.from_columns(fm, [fm.element(c) for c in cols])
    return image_module(ModuleMap(None, omega, matrix))


class RGammaComplex:
    """The derived global-sections complex over A, with provenance.

    Homology vanishes in positive degrees and below -dim R; degree-zero
    homology is annihilated by the defining ideal.  Both facts are checked
    at construction.
    """

    def __init__(self, complex, spec, resolution_length):
        self.complex = complex
        self.spec = spec
        self.ring = complex.ring
        self.dim = self.ring.dim
        self.resolution_length = resolution_length
        self._h0_kernel = None
        self._over_r = None

    def h0_kernel(self):
        """Matrix of kernel generators of d_0, i.e. generators of H_0."""
        if self._h0_kernel is None:
            self._h0_kernel = kernel_columns(self.complex, 0)
        return self._h0_kernel

    def h0_kernel_vecs(self):
        return _columns_vecs(self.h0_kernel())

    def over_r_data(self):
        """Over-R model of the complex (for the over-R Hironaka variant):
        the transposed truncated free resolution of W over R.  Needs the
        canonical module to be identified with R."""
        if self._over_r is None:
            spec = self.spec
            if not spec.omega_is_r or spec.mode == "submodule-of-omega":
                raise ValueError(
                    "the over-R variant needs the canonical module "
                    "identified with R")
            ring = self.ring
            gens = spec.generators if spec.mode == "submodule-of-R" \
                else (ring.one(),)
            fm = FreeModuleRef(ring, 1, over_r=True)
            row = PolyMatrix.from_columns(fm, [fm.element([g]) for g in gens])
            rel = syzygies(row)
            pres = PresentedModule(ring, len(gens), rel, over_r=True)
            bound = max(ring.dim, 2)
            res = free_resolution(pres, bound)
            ranks = {}
            diffs = {}
            for h in range(res.lo, res.hi + 1):
                ranks[-h] = res.rank(h)
            for h in range(-res.hi + 1, 1):
                mat = res.diff.get(-h + 1)
                if mat is not None:
                    sign = 1 if h % 2 == 0 else -1
                    diffs[h] = mat.transpose().scale(sign)
            gr = Complex(ring, -res.hi, 0, ranks, diffs, over_r=True)
            kmat = kernel_columns(gr, 0)
            self._over_r = (gr, _columns_vecs(kmat), res.hi)
        return self._over_r

    def __repr__(self):
        return "RGammaComplex(%r, dim %d)" % (self.complex, self.dim)


def build_rgamma(spec):
    """Resolve W over A, dualize into rank one, and shift so the codim-c
    Ext sits in homological degree zero."""
    ring = spec.ring
    pres = _presentation_of_multiplier(spec)
    if pres.is_zero():
        raise ValueError("multiplier module is zero")
    res = free_resolution(pres, ring.nvars)
    if not resolution_is_complete(res):
        raise AssertionError("free resolution did not terminate at the "
                             "variable count")
    g = shift(dualize(res), ring.codim)
    for h in range(1, g.hi + 1):
        if not homology_is_zero(g, h):
            raise AssertionError(
                "positive-degree homology at %d; the multiplier module does "
                "not present a derived global-sections complex" % h)
    for h in range(g.lo, -ring.dim):
        if not homology_is_zero(g, h):
            raise AssertionError("homology below -dim R at degree %d" % h)
    out = RGammaComplex(g, spec, res.hi)
    # degree-zero homology must be killed by the defining ideal
    if ring.groebner:
        kmat = out.h0_kernel()
        up = g.differential(1)
        _, buckets = up.span_gb()
        engine = ring.engine
        for zvec in _columns_vecs(kmat):
            for f in ring._ir_gb:
                prod = _vec_mul_polyvec(engine, zvec, f)
                rem, _ = engine.normal_form(prod, buckets)
                if rem:
                    raise AssertionError(
                        "H_0 is not annihilated by the defining ideal")
    return out


class ClosureResult:
    """Input ideal, its closure, and run diagnostics.  The extension
    property (input contained in the closure) is asserted on every result."""

    def __init__(self, operation, ring, input_gens, closure, diagnostics=None,
                 iterations=None, stabilized=None):
        self.operation = operation
        self.ring = ring
        self.input_ideal = ideal_basis(ring, input_gens, over_r=True)
        self.closure = closure
        self.diagnostics = diagnostics or {}
        self.iterations = iterations
        self.stabilized = stabilized
        for g in input_gens:
            if not closure.contains(g):
                raise AssertionError("closure does not contain the input ideal")

    def generators(self):
        return self.closure.gb_polynomials()

    def __repr__(self):
        return "ClosureResult(%s, %d generators)" % (
            self.operation, len(self.closure.groebner))


def _prepare_generators(ring, gens):
    out = []
    seen = set()
    for g in gens:
        if isinstance(g, str):
            g = ring.parse(g)
        g = ring.reduce(g)
        if g.is_zero():
            continue
        key = frozenset(g.terms.items())
        if key in seen:
            continue
        seen.add(key)
        out.append(g)
    return out


def _zero_ideal_result(ring, operation):
    if not ring.domain:
        raise ValueError("closure of the zero ideal needs a domain "
                         "presentation (set domain=true)")
    closure = ideal_basis(ring, [], over_r=True)
    return ClosureResult(operation, ring, [], closure)


def _closure_from_tensor(ring, t, h0_vecs, over_r):
    b_vecs = _columns_vecs(t.differential(1))
    ann = _ann_of_columns(ring, t.rank(0), b_vecs, h0_vecs, over_r=over_r)
    polys = [vec_to_poly(ring, v).monic() for v in ann]
    return ideal_basis(ring, polys, over_r=True)


def kh_closure(gens, rgamma):
    """Koszul-Hironaka closure of the ideal generated by ``gens``.

    Forms the Koszul complex on the lifted generators, tensors with the
    derived global-sections complex, and annihilates the image of the
    degree-zero homology map into the tensor complex.
    """
    ring = rgamma.ring
    t0 = time.perf_counter()
    fs = _prepare_generators(ring, gens)
    if not fs:
        return _zero_ideal_result(ring, "kh")
    k = koszul_complex(fs, ring)
    t = tensor_complexes(k, rgamma.complex)
    closure = _closure_from_tensor(ring, t, rgamma.h0_kernel_vecs(),
                                   over_r=False)
    elapsed = time.perf_counter() - t0
    return ClosureResult("kh", ring, fs, closure,
                         diagnostics={"seconds": elapsed,
                                      "tensor_rank0": t.rank(0),
                                      "closure_gb": len(closure.groebner)})


def hironaka_preclosure(gens, rgamma, mode="over-A", check_contains_kh=True):
    """Hironaka preclosure via a free resolution of R/J in place of the
    Koszul complex; ``mode`` picks the over-A or the over-R resolution."""
    if mode not in ("over-A", "over-R"):
        raise ValueError("mode must be over-A or over-R")
    ring = rgamma.ring
    t0 = time.perf_counter()
    fs = _prepare_generators(ring, gens)
    tag = "hir-over-A" if mode == "over-A" else "hir-over-R"
    if not fs:
        return _zero_ideal_result(ring, tag)
    if mode == "over-A":
        fm = FreeModuleRef(ring, 1)
        cols = [fm.element([f]) for f in fs]
        cols += [fm.element([f]) for f in ring.groebner]
        pres = PresentedModule(ring, 1, PolyMatrix.from_columns(fm, cols))
        res = free_resolution(pres, ring.nvars)
        if res.rank(0) != 1:
            # a unit generator collapsed the resolution
            closure = unit_ideal(ring, over_r=True)
            return ClosureResult(tag, ring, fs, closure)
        t = tensor_complexes(res, rgamma.complex)
        closure = _closure_from_tensor(ring, t, rgamma.h0_kernel_vecs(),
                                       over_r=False)
    else:
        gr, gr_h0, gr_len = rgamma.over_r_data()
        fm = FreeModuleRef(ring, 1, over_r=True)
        cols = [fm.element([f]) for f in fs]
        pres = PresentedModule(ring, 1, PolyMatrix.from_columns(fm, cols),
                               over_r=True)
        bound = max(gr_len + 1, ring.dim + 1)
        res = free_resolution(pres, bound)
        if res.rank(0) != 1:
            closure = unit_ideal(ring, over_r=True)
            return ClosureResult(tag, ring, fs, closure)
        t = tensor_complexes(res, gr)
        closure = _closure_from_tensor(ring, t, gr_h0, over_r=True)
    elapsed = time.perf_counter() - t0
    result = ClosureResult(tag, ring, fs, closure,
                           diagnostics={"seconds": elapsed,
                                        "closure_gb": len(closure.groebner)})
    if check_contains_kh:
        kh = kh_closure(fs, rgamma)
        if not is_subset(kh.closure, closure):
            raise AssertionError(
                "Hironaka preclosure fails to contain the KH closure")
        result.diagnostics["kh_contained"] = True
    return result


def hironaka_hull(gens, rgamma, mode="over-A", max_iter=8):
    """Iterate the Hironaka preclosure until the ideal stabilizes; this is
    its idempotent hull when it stabilizes.  Non-stabilization within
    ``max_iter`` is reported, not raised."""
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    ring = rgamma.ring
    fs = _prepare_generators(ring, gens)
    current_gens = fs
    current_basis = ideal_basis(ring, fs, over_r=True)
    result = None
    iterations = 0
    stabilized = False
    for _ in range(max_iter):
        result = hironaka_preclosure(current_gens, rgamma, mode=mode,
                                     check_contains_kh=False)
        iterations += 1
        # extension holds, so closure == input iff closure is contained in it
        if is_subset(result.closure, current_basis):
            stabilized = True
            break
        current_basis = result.closure
        current_gens = result.closure.gb_polynomials()
    return ClosureResult("hir-hull", ring, fs, result.closure,
                         diagnostics=dict(result.diagnostics),
                         iterations=iterations, stabilized=stabilized)


def clpi_closure(gens, spec):
    """Module closure (J*W : W) for the multiplier module W; for parameter
    ideals this agrees with the KH closure and serves as its oracle."""
    ring = spec.ring
    t0 = time.perf_counter()
    fs = _prepare_generators(ring, gens)
    if not fs:
        return _zero_ideal_result(ring, "clpi")
    if spec.mode == "submodule-of-R":
        wgens = list(spec.generators)
        fm = FreeModuleRef(ring, 1, over_r=True)
        jw = []
        for f in fs:
            for w in wgens:
                p = ring.reduce(f * w)
                if not p.is_zero():
                    jw.append(p)
        engine = ring.engine
        rel_vecs = [poly_to_vec(engine, p) for p in jw]
        gen_vecs = [poly_to_vec(engine, w) for w in wgens]
        ann = _ann_of_columns(ring, 1, rel_vecs, gen_vecs, over_r=True)
        polys = [vec_to_poly(ring, v).monic() for v in ann]
        closure = ideal_basis(ring, polys, over_r=True)
    else:
        omega = canonical_module_presentation(ring)
        rank = omega.target_rank
        fm = FreeModuleRef(ring, rank)
        if spec.mode == "unit":
            wcols = [fm.basis_element(i) for i in range(rank)]
        else:
            wcols = []
            for g in spec.generators:
                comps = g.components if isinstance(g, ModuleElement) else [g]
                wcols.append(fm.element(list(comps)))
        jw_cols = []
        for f in fs:
            for w in wcols:
                jw_cols.append(fm.element([f * c for c in w.components]))
        rel = PolyMatrix.from_columns(fm, jw_cols).stack_columns(
            omega.relations)
        gen_mat = PolyMatrix.from_columns(fm, wcols)
        ann = _ann_of_columns(ring, rank, _columns_vecs(rel),
                              _columns_vecs(gen_mat), over_r=True)
        polys = [vec_to_poly(ring, v).monic() for v in ann]
        closure = ideal_basis(ring, polys, over_r=True)
    elapsed = time.perf_counter() - t0
    return ClosureResult("clpi", ring, fs, closure,
                         diagnostics={"seconds": elapsed,
                                      "closure_gb": len(closure.groebner)})


def kh_test_ideal(ring, spec):
    """Test ideal: the annihilator of (canonical module) / W.  Valid when R
    is Cohen-Macaulay, which the caller asserts."""
    omega = canonical_module_presentation(ring)
    rank = omega.target_rank
    fm = FreeModuleRef(ring, rank)
    if spec.mode == "unit":
        return unit_ideal(ring, over_r=True)
    if spec.mode == "submodule-of-R":
        if rank != 1:
            raise ValueError("ring-element generators need a cyclic "
                             "canonical module")
        wcols = [fm.element([g]) for g in spec.generators]
    else:
        wcols = []
        for g in spec.generators:
            comps = g.components if isinstance(g, ModuleElement) else [g]
            if len(comps) != rank:
                raise ValueError("column does not map into the canonical module")
            wcols.append(fm.element(list(comps)))
    rel = omega.relations.stack_columns(PolyMatrix.from_columns(fm, wcols))
    quotient = PresentedModule(ring, rank, rel)
    ann = annihilator(quotient)
    return ideal_basis(ring, ann.gb_polynomials(), over_r=True)


# -- checkers ----------------------------------------------------------------


class CheckReport:
    """A named list of (label, ok) verdicts."""

    def __init__(self, name):
        self.name = name
        self.items = []

    def add(self, label, ok):
        self.items.append((label, bool(ok)))
        return ok

    @property
    def ok(self):
        return all(ok for _, ok in self.items)

    def __repr__(self):
        return "CheckReport(%s: %s)" % (
            self.name, "ok" if self.ok else "FAILED")


def check_colon_capturing(ring, rgamma, params, t, a, k, kh=kh_closure):
    """Colon capturing for the closure: version A compares
    (x1^t, x2..xk)^cl : x1^a with (x1^(t-a), x2..xk)^cl, and version B
    compares (x1..xk)^cl : x_(k+1) with (x1..xk)^cl."""
    report = CheckReport("colon-capturing t=%d a=%d k=%d" % (t, a, k))
    if not (t > a >= 1):
        raise ValueError("need t > a >= 1")
    if k > ring.dim or k > len(params):
        raise ValueError("k exceeds the available parameters")
    xs = [ring.reduce(x) for x in params]
    if not report.add("parameters verified", check_parameters(ring, xs[:k])):
        return report
    head = [xs[0] ** t] + xs[1:k]
    lhs = ideal_quotient(kh(head, rgamma).closure, xs[0] ** a)
    rhs = kh([xs[0] ** (t - a)] + xs[1:k], rgamma).closure
    report.add("version A inclusion", is_subset(lhs, rhs))
    if len(xs) >= k + 1 and check_parameters(ring, xs[:k + 1]):
        base = kh(xs[:k], rgamma).closure
        lhs_b = ideal_quotient(base, xs[k])
        report.add("version B inclusion", is_subset(lhs_b, base))
    return report


def check_axioms(gens, rgamma, seed=0, kh=kh_closure):
    """Extension, idempotence, generating-set independence, and
    order preservation for the closure of one ideal."""
    ring = rgamma.ring
    rng = random.Random(seed)
    report = CheckReport("closure axioms")
    fs = _prepare_generators(ring, gens)
    base = kh(fs, rgamma)
    report.add("extension",
               all(base.closure.contains(f) for f in fs))
    again = kh(base.closure.gb_polynomials(), rgamma)
    report.add("idempotence", ideal_equal(again.closure, base.closure))
    if fs:
        combo = ring.zero()
        for f in fs:
            combo = combo + f * Fraction(rng.randint(1, 5))
        enlarged = kh(fs + [combo], rgamma)
        report.add("generating-set independence",
                   ideal_equal(enlarged.closure, base.closure))
    g = _random_element(ring, rng)
    bigger = kh(fs + [g], rgamma)
    report.add("order preservation",
               is_subset(base.closure, bigger.closure))
    return report


def check_depth_vanishing(rgamma, params):
    """Vanishing of the positive Koszul homology of the complex on every
    prefix of a verified parameter sequence."""
    ring = rgamma.ring
    xs = [ring.reduce(x) for x in params]
    report = CheckReport("depth vanishing")
    if not xs:
        report.add("vacuous", True)
        return report
    if not report.add("parameters verified", check_parameters(ring, xs)):
        return report
    for j in range(1, len(xs) + 1):
        t = tensor_complexes(koszul_complex(xs[:j], ring), rgamma.complex)
        for h in range(1, j + 1):
            report.add("H_%d of prefix %d vanishes" % (h, j),
                       homology_is_zero(t, h))
    return report


def _random_element(ring, rng, max_degree=2):
    terms = rng.randint(1, 2)
    p = ring.zero()
    for _ in range(terms):
        mono = [0] * ring.nvars
        for _ in range(rng.randint(1, max_degree)):
            mono[rng.randrange(ring.nvars)] += 1
        p = p + ring.monomial(mono) * Fraction(rng.choice([1, -1, 2]))
    p = ring.reduce(p)
    return p if not p.is_zero() else ring.reduce(ring.gen(0))


_QUINTIC_CACHE = {}


def _quintic_setup():
    # assembled into one entry so concurrent callers never see partial state
    if "all" not in _QUINTIC_CACHE:
        from .polyring import RingPresentation
        ring = RingPresentation(["x", "y", "z"], ["x^5+y^5+z^5"], domain=True)
        cubes = []
        for i in range(3 + 1):
            for j in range(3 + 1 - i):
                k = 3 - i - j
                cubes.append(ring.monomial([i, j, k]))
        spec = MultiplierModuleSpec(ring, "submodule-of-R", cubes)
        _QUINTIC_CACHE["all"] = (ring, spec, build_rgamma(spec))
    return _QUINTIC_CACHE["all"]


def check_counterexamples(preset, kh=kh_closure):
    """Known failures of semi-primeness and the star property, and the
    strictness of the Hironaka preclosure, on the quintic cone."""
    ring, spec, rgamma = _quintic_setup()
    x, y, z = ring.gens()
    report = CheckReport("counterexample %s" % preset)
    if preset == "quintic-semiprime":
        ikh = kh([x, y], rgamma).closure
        i2kh = kh([x * x, x * y, y * y], rgamma).closure
        report.add("closure of (x,y) matches reference",
                   ideal_equal(ikh, ideal_basis(
                       ring, [x, y, z ** 2], over_r=True)))
        report.add("closure of (x,y)^2 matches reference",
                   ideal_equal(i2kh, ideal_basis(
                       ring, [y ** 2, x * y, x ** 2, z ** 4,
                              y * z ** 3, x * z ** 3], over_r=True)))
        prod = [a * b for a in ikh.gb_polynomials()
                for b in ikh.gb_polynomials()]
        report.add("product of closures escapes the closed square",
                   not is_subset(ideal_basis(ring, prod, over_r=True), i2kh))
    elif preset == "quintic-star":
        ikh = kh([x, y], rgamma).closure
        ixkh = kh([x * x, x * y], rgamma).closure
        report.add("closure of x*(x,y) matches reference",
                   ideal_equal(ixkh, ideal_basis(
                       ring, [x * y, x ** 2, x * z ** 3, y ** 5 + z ** 5],
                       over_r=True)))
        scaled = ideal_basis(ring, [x * g for g in ikh.gb_polynomials()],
                             over_r=True)
        report.add("x times the closure differs from the closure of x*(x,y)",
                   not ideal_equal(scaled, ixkh))
    elif preset == "quintic-bs-witness":
        square = [x * x, x * y, y * y]
        hir = hironaka_preclosure(square, rgamma, mode="over-A",
                                  check_contains_kh=False).closure
        i2kh = kh(square, rgamma).closure
        w = x * z ** 2
        report.add("witness lies in the Hironaka preclosure",
                   hir.contains(w))
        report.add("witness escapes the KH closure", not i2kh.contains(w))
    else:
        raise ValueError("unknown preset %r" % (preset,))
    return report
