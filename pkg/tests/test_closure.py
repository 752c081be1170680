import pytest

from khclosure import (
    MultiplierModuleSpec,
    RingPresentation,
    build_rgamma,
    canonical_module_presentation,
    check_axioms,
    check_colon_capturing,
    check_counterexamples,
    check_depth_vanishing,
    clpi_closure,
    hironaka_hull,
    hironaka_preclosure,
    homology,
    homology_is_zero,
    ideal_basis,
    ideal_equal,
    is_subset,
    kh_closure,
    kh_test_ideal,
    min_gens,
)
from khclosure.groebner import annihilator


def closure_of(entry, gens, kh_cached):
    return kh_cached(gens, entry).closure


def expected(entry, gens):
    return ideal_basis(entry.ring, gens, over_r=True)


# -- the derived global-sections complex --------------------------------------


def test_rgamma_smooth_ring_is_the_ring(corpus):
    entry = corpus["smooth"]
    g = entry.rgamma.complex
    assert (g.lo, g.hi) == (0, 0) and g.rank(0) == 1


def test_rgamma_a1_has_trivial_higher_homology(corpus):
    entry = corpus["a1"]
    g = entry.rgamma.complex
    h0 = homology(g, 0)
    assert ideal_equal(annihilator(h0),
                       ideal_basis(entry.ring, entry.ring.groebner))
    for h in range(g.lo, 0):
        assert homology_is_zero(g, h)


def test_rgamma_cubic_h0_is_the_coordinate_ring(corpus):
    entry = corpus["cubic"]
    h0 = homology(entry.rgamma.complex, 0)
    assert ideal_equal(annihilator(h0),
                       ideal_basis(entry.ring, entry.ring.groebner))
    # the cone over a genus-one curve is not rational: H_(-1) is nonzero
    assert not homology_is_zero(entry.rgamma.complex, -1)


def test_rgamma_rejects_zero_multiplier():
    ring = RingPresentation(["x", "y"], [], domain=True)
    with pytest.raises(ValueError):
        MultiplierModuleSpec(ring, "submodule-of-R", [ring.zero()])


# -- KH closure on the reference examples -------------------------------------


def test_cubic_parameter_ideal(corpus, kh_cached):
    entry = corpus["cubic"]
    x, y, z = entry.ring.gens()
    assert ideal_equal(closure_of(entry, [x, y], kh_cached),
                       expected(entry, [x, y, z ** 2]))


def test_cubic_squares_closed(corpus, kh_cached):
    entry = corpus["cubic"]
    x, y, z = entry.ring.gens()
    got = closure_of(entry, [x ** 2, y ** 2, z ** 2], kh_cached)
    assert ideal_equal(got, expected(entry, [x ** 2, y ** 2, z ** 2]))
    assert not got.contains(x * y * z)


def test_cubic_cubes(corpus, kh_cached):
    entry = corpus["cubic"]
    x, y, z = entry.ring.gens()
    got = closure_of(entry, [x ** 3, y ** 3, z ** 3], kh_cached)
    assert ideal_equal(got, expected(
        entry, [x ** 3, y ** 3, z ** 3, x ** 2 * y ** 2 * z ** 2]))
    assert got.contains(x ** 2 * y ** 2 * z ** 2)


def test_cubic_mixed_ideal(corpus, kh_cached):
    entry = corpus["cubic"]
    x, y, z = entry.ring.gens()
    got = closure_of(entry, [x ** 4, x * y, y ** 2], kh_cached)
    assert ideal_equal(got, expected(entry, [y ** 2, x * y, x * z ** 3]))
    assert got.contains(x * z ** 3)
    assert not got.contains(y * z ** 2)


def test_quartic_cubes_closed(corpus, kh_cached):
    entry = corpus["quartic4"]
    x, y, z, w = entry.ring.gens()
    cubes = [x ** 3, y ** 3, z ** 3, w ** 3]
    got = closure_of(entry, cubes, kh_cached)
    assert ideal_equal(got, expected(entry, cubes))
    assert not got.contains(x ** 2 * y ** 2 * z ** 2 * w ** 2)


def test_septic_closure_and_power_inclusions(corpus, kh_cached):
    from conftest import monomials_of_degree
    entry = corpus["septic"]
    x, y, z = entry.ring.gens()
    got = closure_of(entry, [x ** 4, y ** 4, z ** 4], kh_cached)
    assert ideal_equal(got, expected(entry, [
        z ** 4, y ** 4, x ** 4,
        x ** 2 * y ** 3 * z ** 3, x ** 3 * y ** 2 * z ** 3,
        x ** 3 * y ** 3 * z ** 2]))
    m7 = expected(entry, monomials_of_degree(entry.ring, 7))
    m8 = expected(entry, monomials_of_degree(entry.ring, 8))
    assert not is_subset(m7, got)
    assert is_subset(m8, got)
    assert len(min_gens(got)) == 6


def test_quintic_reference_closures(corpus, kh_cached):
    entry = corpus["quintic"]
    x, y, z = entry.ring.gens()
    ikh = closure_of(entry, [x, y], kh_cached)
    assert ideal_equal(ikh, expected(entry, [x, y, z ** 2]))
    i2kh = closure_of(entry, [x ** 2, x * y, y ** 2], kh_cached)
    assert ideal_equal(i2kh, expected(
        entry, [y ** 2, x * y, x ** 2, z ** 4, y * z ** 3, x * z ** 3]))
    ixkh = closure_of(entry, [x ** 2, x * y], kh_cached)
    assert ideal_equal(ixkh, expected(
        entry, [x * y, x ** 2, x * z ** 3, y ** 5 + z ** 5]))
    # products of closures and scalar multiples behave badly, as expected
    prod = [a * b for a in ikh.gb_polynomials() for b in ikh.gb_polynomials()]
    assert not is_subset(expected(entry, prod), i2kh)
    scaled = expected(entry, [x * g for g in ikh.gb_polynomials()])
    assert not ideal_equal(scaled, ixkh)


def test_zero_ideal_closure_on_domains(corpus):
    entry = corpus["cubic"]
    result = kh_closure([], entry.rgamma)
    assert result.closure.gb_polynomials() == list(entry.ring.groebner)


def test_zero_ideal_needs_domain_flag():
    ring = RingPresentation(["x", "y"], [], domain=False)
    rg = build_rgamma(MultiplierModuleSpec(ring, "unit"))
    with pytest.raises(ValueError):
        kh_closure([], rg)


def test_unit_ideal_closure(corpus):
    entry = corpus["smooth"]
    result = kh_closure([entry.ring.one()], entry.rgamma)
    assert result.closure.is_unit()


def test_closure_generating_set_independence(corpus, kh_cached):
    entry = corpus["cubic"]
    x, y, z = entry.ring.gens()
    a = closure_of(entry, [x, y], kh_cached)
    b = closure_of(entry, [x, y, x + 3 * y, x * y], kh_cached)
    assert ideal_equal(a, b)


def test_closure_accepts_unreduced_representatives(corpus, kh_cached):
    entry = corpus["cubic"]
    x, y, z = entry.ring.gens()
    f = entry.ring.defining_generators[0]
    got = kh_closure([x + f, y], entry.rgamma).closure
    assert ideal_equal(got, expected(entry, [x, y, z ** 2]))


def test_full_homology_pipeline_matches_closure(corpus, kh_cached):
    # two independent routes: the explicit homology/image/annihilator
    # pipeline versus the ambient colon extraction used by kh_closure
    from khclosure import (annihilator, augmentation_chain_map, image_module,
                           induced_map_on_homology)
    entry = corpus["cubic"]
    ring = entry.ring
    x, y, z = ring.gens()
    for gens, ref in (
            ([x, y], [x, y, z ** 2]),
            ([x ** 2, y ** 2, z ** 2], [x ** 2, y ** 2, z ** 2])):
        phi = augmentation_chain_map(gens, entry.rgamma.complex)
        mm = induced_map_on_homology(phi, 0)
        ann = annihilator(image_module(mm))
        via_homology = ideal_basis(ring, ann.gb_polynomials(), over_r=True)
        assert ideal_equal(via_homology, expected(entry, ref))
        assert ideal_equal(via_homology, closure_of(entry, gens, kh_cached))


# -- Hironaka preclosure -------------------------------------------------------


def test_quintic_hironaka_both_variants(corpus):
    entry = corpus["quintic"]
    x, y, z = entry.ring.gens()
    square = [x ** 2, x * y, y ** 2]
    ref = expected(entry, [y ** 2, x * y, x ** 2, z ** 3,
                           y * z ** 2, x * z ** 2])
    over_a = hironaka_preclosure(square, entry.rgamma, mode="over-A")
    over_r = hironaka_preclosure(square, entry.rgamma, mode="over-R")
    assert ideal_equal(over_a.closure, ref)
    assert ideal_equal(over_r.closure, ref)
    assert over_a.diagnostics.get("kh_contained")
    assert over_a.closure.contains(x * z ** 2)


def test_hironaka_hull_stabilizes(corpus):
    entry = corpus["quintic"]
    x, y, z = entry.ring.gens()
    hull = hironaka_hull([x ** 2, x * y, y ** 2], entry.rgamma, mode="over-A")
    assert hull.stabilized
    assert hull.iterations == 2
    closed = hironaka_hull([x, y], entry.rgamma, mode="over-A")
    assert closed.stabilized and closed.iterations <= 2


def test_hironaka_hull_smooth_one_iteration(corpus):
    entry = corpus["smooth"]
    x, y = entry.ring.gens()
    hull = hironaka_hull([x ** 2, y], entry.rgamma, mode="over-A")
    assert hull.stabilized and hull.iterations == 1


def test_over_r_variant_needs_omega_identification():
    ring = RingPresentation(["x", "y", "z"], ["x^3+y^3+z^3"], domain=True)
    spec = MultiplierModuleSpec(ring, "submodule-of-R", ring.gens(),
                                omega_is_r=False)
    rg = build_rgamma(spec)
    with pytest.raises(ValueError):
        hironaka_preclosure([ring.gen(0)], rg, mode="over-R")


def test_closure_chain_kh_hir_clpi(corpus, kh_cached):
    entry = corpus["quintic"]
    x, y, _ = entry.ring.gens()
    square = [x ** 2, x * y, y ** 2]
    kh = closure_of(entry, square, kh_cached)
    hir = hironaka_preclosure(square, entry.rgamma, mode="over-A",
                              check_contains_kh=False).closure
    cl = clpi_closure(square, entry.spec).closure
    assert is_subset(kh, hir)
    assert is_subset(hir, cl)


def test_rgamma_h0_is_cyclic_over_normal_input(corpus):
    from khclosure import FreeModuleRef, SubmoduleBasis
    entry = corpus["cubic"]
    h0 = homology(entry.rgamma.complex, 0)
    fm = FreeModuleRef(entry.ring, h0.target_rank)
    def generated_by(j):
        cols = h0.relations.columns() + [fm.basis_element(j)]
        basis = SubmoduleBasis(fm, cols)
        return all(basis.contains(fm.basis_element(i))
                   for i in range(h0.target_rank))
    assert any(generated_by(j) for j in range(h0.target_rank))


# -- module closure (the oracle) and the test ideal ---------------------------


def test_clpi_matches_kh_on_parameter_ideals(corpus, kh_cached):
    entry = corpus["quintic"]
    x, y, z = entry.ring.gens()
    got = clpi_closure([x, y], entry.spec)
    assert ideal_equal(got.closure, closure_of(entry, [x, y], kh_cached))
    assert ideal_equal(got.closure, expected(entry, [x, y, z ** 2]))


def test_clpi_smooth_identity(corpus):
    entry = corpus["smooth"]
    x, y = entry.ring.gens()
    got = clpi_closure([x ** 2, y], entry.spec)
    assert ideal_equal(got.closure, expected(entry, [x ** 2, y]))
    unit = clpi_closure([entry.ring.one()], entry.spec)
    assert unit.closure.is_unit()


def test_canonical_module_of_hypersurface_is_cyclic(corpus):
    omega = canonical_module_presentation(corpus["quintic"].ring)
    assert omega.target_rank == 1


def test_omega_mode_agrees_with_ring_mode(corpus, kh_cached):
    # the same multiplier module given as columns in the canonical module
    from conftest import monomials_of_degree
    entry = corpus["quintic"]
    x, y, _ = entry.ring.gens()
    cubes = monomials_of_degree(entry.ring, 3)
    spec_o = MultiplierModuleSpec(entry.ring, "submodule-of-omega", cubes)
    g_o = build_rgamma(spec_o)
    assert ideal_equal(kh_closure([x, y], g_o).closure,
                       closure_of(entry, [x, y], kh_cached))
    assert ideal_equal(kh_test_ideal(entry.ring, spec_o),
                       expected(entry, cubes))
    assert ideal_equal(clpi_closure([x, y], spec_o).closure,
                       closure_of(entry, [x, y], kh_cached))


def test_kh_test_ideal_values(corpus):
    for name in ("cubic", "quartic4", "quintic", "septic"):
        entry = corpus[name]
        tau = kh_test_ideal(entry.ring, entry.spec)
        assert ideal_equal(tau, expected(entry, entry.tau_gens)), name
    assert kh_test_ideal(corpus["smooth"].ring, corpus["smooth"].spec).is_unit()


def test_kh_test_ideal_times_closure(corpus, kh_cached):
    entry = corpus["cubic"]
    x, y, z = entry.ring.gens()
    tau = kh_test_ideal(entry.ring, entry.spec)
    base = expected(entry, [x, y])
    cl = closure_of(entry, [x, y], kh_cached)
    for t in tau.gb_polynomials():
        for g in cl.gb_polynomials():
            assert base.contains(t * g)


# -- checkers -------------------------------------------------------------------


def test_check_colon_capturing_versions(corpus, kh_cached):
    entry = corpus["quartic4"]
    x, y, z, w = entry.ring.gens()
    rep = check_colon_capturing(entry.ring, entry.rgamma, [x, y, z], 2, 1, 2,
                                kh=lambda gens, rg: kh_cached(gens, entry))
    labels = [l for l, _ in rep.items]
    assert "version A inclusion" in labels
    assert "version B inclusion" in labels
    assert rep.ok


def test_check_colon_capturing_validates_input(corpus):
    entry = corpus["cubic"]
    x, y, _ = entry.ring.gens()
    with pytest.raises(ValueError):
        check_colon_capturing(entry.ring, entry.rgamma, [x, y], 1, 1, 2)


def test_check_axioms(corpus):
    entry = corpus["a1"]
    x, y, z = entry.ring.gens()
    rep = check_axioms([x, y ** 2], entry.rgamma, seed=5)
    assert rep.ok and len(rep.items) == 4


def test_check_depth_vanishing(corpus):
    entry = corpus["cubic"]
    x, y, _ = entry.ring.gens()
    assert check_depth_vanishing(entry.rgamma, [x, y]).ok
    vac = check_depth_vanishing(entry.rgamma, [])
    assert vac.ok and vac.items == [("vacuous", True)]


def test_check_counterexample_presets():
    for preset in ("quintic-semiprime", "quintic-star", "quintic-bs-witness"):
        assert check_counterexamples(preset).ok
    with pytest.raises(ValueError):
        check_counterexamples("nonsense")
