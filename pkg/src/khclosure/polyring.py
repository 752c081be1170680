"""Exact sparse multivariate polynomials over Q and quotient-ring presentations.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients, tied to a :class:`RingPresentation` that fixes the variable
list, the monomial order, and the defining ideal of the quotient ring
R = A / I_R (A the ambient polynomial ring).
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import _core

DEFAULT_DEGREE_CAP = 10_000


class RingMismatchError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class MonomialOrder:
    """A multiplicative total order on monomials with 1 minimal."""

    KINDS = ("grevlex", "lex")

    def __init__(self, kind="grevlex"):
        if kind not in self.KINDS:
            raise ValueError("unknown monomial order %r" % (kind,))
        self.kind = kind
        self.mono_key = _core.grevlex_key if kind == "grevlex" else _core.lex_key

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.kind == other.kind

    def __repr__(self):
        return "MonomialOrder(%r)" % self.kind


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- construction helpers ----------------------------------------------

    @staticmethod
    def _clean(ring, raw):
        terms = {}
        for mono, c in raw.items():
            if c:
                terms[mono] = c
        return Polynomial(ring, terms)

    def _check(self, other):
        if self.ring is not other.ring:
            raise RingMismatchError("operands live in different rings")

    @staticmethod
    def _coerce_scalar(c):
        if isinstance(c, (int, Fraction)):
            return Fraction(c)
        return None

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        """Max total degree, or -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def sorted_terms(self):
        key = self.ring.order.mono_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        key = self.ring.order.mono_key
        return max(self.terms, key=key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def monic(self):
        if not self.terms:
            return self
        c = self.leading_coefficient()
        if c == 1:
            return self
        return Polynomial(self.ring, {m: co / c for m, co in self.terms.items()})

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        s = self._coerce_scalar(other)
        if s is not None:
            other = self.ring.constant(s)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                del out[m]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        s = self._coerce_scalar(other)
        if s is not None:
            other = self.ring.constant(s)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        s = self._coerce_scalar(other)
        if s is not None:
            if s == 0:
                return self.ring.zero()
            return Polynomial(self.ring, {m: c * s for m, c in self.terms.items()})
        self._check(other)
        cap = self.ring.degree_cap
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                elif m in out:
                    del out[m]
        if cap and out and max(sum(m) for m in out) > cap:
            raise OverflowError("product degree exceeds cap %d" % cap)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.ring), frozenset(self.terms.items())))

    # -- printing ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variable_names
        parts = []
        for idx, (mono, coeff) in enumerate(self.sorted_terms()):
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append("%s^%d" % (name, e))
            mag = -coeff if coeff < 0 else coeff
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if idx == 0:
                parts.append(("-" if coeff < 0 else "") + body)
            else:
                parts.append((" - " if coeff < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return "<poly %s>" % self


class RingPresentation:
    """A polynomial ring A over Q with a defining ideal presenting R = A/I_R.

    Carries the reduced Groebner basis of I_R, the Krull dimension of R,
    and the codimension.  Values are immutable after construction.
    """

    def __init__(self, variables, relations=(), order="grevlex", domain=False,
                 degree_cap=DEFAULT_DEGREE_CAP):
        names = tuple(variables)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.variable_names = names
        self.nvars = len(names)
        self._var_index = {n: i for i, n in enumerate(names)}
        self.order = order if isinstance(order, MonomialOrder) else MonomialOrder(order)
        self.domain = bool(domain)
        self.degree_cap = degree_cap
        self.engine = _core.Engine(self.nvars, self.order.mono_key, degree_cap)

        defining = []
        for rel in relations:
            f = self.parse(rel) if isinstance(rel, str) else rel
            if f.ring is not self:
                raise RingMismatchError("relation from a different ring")
            if not f.is_zero():
                defining.append(f)
        self.defining_generators = tuple(defining)

        vecs = [poly_to_vec(self.engine, f) for f in defining]
        self._ir_gb = self.engine.buchberger(vecs, coprime_ok=True)
        self._ir_buckets = self.engine.buckets_of(self._ir_gb)
        if self._ir_gb and not any(self._ir_gb[0][0][2]):
            raise ValueError("defining ideal is the unit ideal")
        self.groebner = tuple(
            vec_to_poly(self, v, 1).monic() for v in self._ir_gb)
        self.dim = _dimension_from_leads(
            self.nvars, [v[0][2] for v in self._ir_gb])
        self.codim = self.nvars - self.dim

    @property
    def is_free(self):
        return not self._ir_gb

    # -- element constructors ------------------------------------------------

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.constant(Fraction(1))

    def constant(self, c):
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return Polynomial(self, {(0,) * self.nvars: c})

    def gen(self, i):
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {mono: Fraction(1)})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exponents):
        exponents = tuple(exponents)
        if len(exponents) != self.nvars or any(e < 0 for e in exponents):
            raise ValueError("bad exponent vector %r" % (exponents,))
        return Polynomial(self, {exponents: Fraction(1)})

    # -- parsing / reduction ---------------------------------------------------

    def parse(self, text):
        return parse_polynomial(text, self)

    def reduce(self, f):
        return reduce_mod_ring(f, self)

    def __repr__(self):
        rels = ", ".join(str(f) for f in self.defining_generators)
        return "RingPresentation(Q[%s]%s)" % (
            ", ".join(self.variable_names),
            " / (%s)" % rels if rels else "")


def _dimension_from_leads(nvars, leads):
    """Krull dimension from the leading-term ideal: the largest variable
    subset meeting the support of no lead monomial."""
    if any(not any(m) for m in leads):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    supports = sorted(set(supports), key=sorted)
    from itertools import combinations
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    return 0


# -- conversions between Polynomial and engine vectors -------------------------


def poly_to_vec(engine, poly, pos=0):
    """Integer engine vector of a polynomial, denominators cleared."""
    if not poly.terms:
        return []
    denlcm = 1
    for c in poly.terms.values():
        d = c.denominator
        g = _core.gcd(denlcm, d)
        denlcm = denlcm // g * d
    return engine.make_vec(
        (pos, m, int(c * denlcm)) for m, c in poly.terms.items())


def vecs_of_columns(engine, columns):
    """Vectors for module elements given as lists of Polynomials."""
    out = []
    for col in columns:
        denlcm = 1
        for p in col:
            for c in p.terms.values():
                d = c.denominator
                g = _core.gcd(denlcm, d)
                denlcm = denlcm // g * d
        terms = []
        for pos, p in enumerate(col):
            for m, c in p.terms.items():
                terms.append((pos, m, int(c * denlcm)))
        out.append(engine.make_vec(terms))
    return out


def vec_to_poly(ring, vec, denom=1, pos=0):
    terms = {}
    for _, p, m, c in vec:
        if p != pos:
            raise ValueError("vector has components outside position %d" % pos)
        terms[m] = Fraction(c, denom)
    return Polynomial(ring, terms)


def vec_to_components(ring, vec, rank, denom=1):
    comps = [{} for _ in range(rank)]
    for _, p, m, c in vec:
        comps[p][m] = Fraction(c, denom)
    return [Polynomial(ring, t) for t in comps]


# -- the polynomial grammar ------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError("unexpected character %r" % stripped[0],
                             len(text) - len(stripped))
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ParseError("expected %r" % op, pos)

    def parse(self):
        f = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return f

    def expr(self):
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        f = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                g = self.term()
                f = f + g if val == "+" else f - g
            else:
                return f

    def term(self):
        coeff = Fraction(1)
        kind, val, pos = self.peek()
        had_coeff = False
        if kind == "num":
            self.next()
            num = val
            den = 1
            kind, val, _ = self.peek()
            if kind == "op" and val == "/":
                self.next()
                k2, v2, p2 = self.next()
                if k2 != "num":
                    raise ParseError("expected denominator", p2)
                den = v2
                if den == 0:
                    raise ParseError("zero denominator", p2)
            coeff = Fraction(num, den)
            had_coeff = True
        factors = self.ring.one() * coeff
        saw_factor = False
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.next()
                kind, val, pos = self.peek()
                factors = factors * self.factor()
                saw_factor = True
                continue
            if kind == "name" or (kind == "op" and val == "("):
                factors = factors * self.factor()
                saw_factor = True
                continue
            break
        if not had_coeff and not saw_factor:
            kind, val, pos = self.peek()
            raise ParseError("expected a term", pos)
        return factors

    def factor(self):
        kind, val, pos = self.next()
        if kind == "name":
            idx = self.ring._var_index.get(val)
            if idx is None:
                raise ParseError("unknown variable %r" % val, pos)
            base = self.ring.gen(idx)
        elif kind == "op" and val == "(":
            base = self.expr()
            self.expect_op(")")
        else:
            raise ParseError("expected a variable or '('", pos)
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            k2, v2, p2 = self.next()
            if k2 != "num":
                raise ParseError("expected an exponent", p2)
            base = base ** v2
        return base


def parse_polynomial(text, ring):
    """Parse ``text`` in the given ring; parsing then printing round-trips."""
    return _Parser(text, ring).parse()


def reduce_mod_ring(f, ring):
    """Unique normal form of f against the reduced Groebner basis of I_R."""
    if f.ring is not ring:
        raise RingMismatchError("polynomial from a different ring")
    if not ring._ir_gb or f.is_zero():
        return f
    vec = poly_to_vec(ring.engine, f)
    rem, denom = ring.engine.normal_form(vec, ring._ir_buckets)
    # exact value is rem/denom times the cleared denominator of f
    denlcm = 1
    for c in f.terms.values():
        d = c.denominator
        g = _core.gcd(denlcm, d)
        denlcm = denlcm // g * d
    out = {}
    for _, _, m, c in rem:
        out[m] = Fraction(c, denom * denlcm)
    return Polynomial(ring, out)
