import itertools

import pytest

from khclosure import (
    MultiplierModuleSpec,
    RingPresentation,
    build_rgamma,
    ideal_basis,
    kh_closure,
)


def monomials_of_degree(ring, deg):
    out = []
    for combo in itertools.combinations_with_replacement(range(ring.nvars), deg):
        exps = [0] * ring.nvars
        for i in combo:
            exps[i] += 1
        out.append(ring.monomial(exps))
    return out


class CorpusEntry:
    def __init__(self, name, ring, spec, params, tau_gens):
        self.name = name
        self.ring = ring
        self.spec = spec
        self.params = params          # a system of parameters (ring elements)
        self.tau_gens = tau_gens      # expected test ideal generators
        self._rgamma = None

    @property
    def rgamma(self):
        if self._rgamma is None:
            self._rgamma = build_rgamma(self.spec)
        return self._rgamma


def _build_corpus():
    entries = {}

    cubic = RingPresentation(["x", "y", "z"], ["x^3+y^3+z^3"], domain=True)
    entries["cubic"] = CorpusEntry(
        "cubic", cubic,
        MultiplierModuleSpec(cubic, "submodule-of-R", cubic.gens()),
        cubic.gens()[:2], cubic.gens())

    quartic = RingPresentation(["x", "y", "z", "w"], ["x^4+y^4+z^4+w^4"],
                               domain=True)
    entries["quartic4"] = CorpusEntry(
        "quartic4", quartic,
        MultiplierModuleSpec(quartic, "submodule-of-R", quartic.gens()),
        quartic.gens()[:3], quartic.gens())

    quintic = RingPresentation(["x", "y", "z"], ["x^5+y^5+z^5"], domain=True)
    entries["quintic"] = CorpusEntry(
        "quintic", quintic,
        MultiplierModuleSpec(quintic, "submodule-of-R",
                             monomials_of_degree(quintic, 3)),
        quintic.gens()[:2], monomials_of_degree(quintic, 3))

    septic = RingPresentation(["x", "y", "z"], ["x^7+y^7+z^7"], domain=True)
    entries["septic"] = CorpusEntry(
        "septic", septic,
        MultiplierModuleSpec(septic, "submodule-of-R",
                             monomials_of_degree(septic, 5)),
        septic.gens()[:2], monomials_of_degree(septic, 5))

    smooth = RingPresentation(["x", "y"], [], domain=True)
    entries["smooth"] = CorpusEntry(
        "smooth", smooth, MultiplierModuleSpec(smooth, "unit"),
        smooth.gens(), [smooth.one()])

    a1 = RingPresentation(["x", "y", "z"], ["x^2+y^2+z^2"], domain=True)
    entries["a1"] = CorpusEntry(
        "a1", a1, MultiplierModuleSpec(a1, "unit"),
        a1.gens()[:2], [a1.one()])

    return entries


@pytest.fixture(scope="session")
def corpus():
    return _build_corpus()


@pytest.fixture(scope="session")
def kh_cached():
    """KH closure memoized on (complex, canonical ideal); every result is
    recorded so late tests can sweep all closures computed in the run."""
    cache = {}
    log = []

    def kh(gens, entry):
        basis = ideal_basis(entry.ring, gens, over_r=True)
        key = (entry.name, tuple(str(p) for p in basis.gb_polynomials()))
        if key not in cache:
            cache[key] = kh_closure(gens, entry.rgamma)
            log.append((entry, cache[key]))
        return cache[key]

    kh.log = log
    return kh
