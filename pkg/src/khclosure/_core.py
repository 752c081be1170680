"""Fraction-free Buchberger engine on sparse module vectors.

A vector is a list of terms ``(key, pos, mono, coeff)`` sorted by ``key``
descending.  ``mono`` is an exponent tuple, ``coeff`` a nonzero int, and
``key`` a flat integer tuple built so that tuple comparison realizes a
position-over-term order (smaller position index ranks higher) and so that
multiplying by a monomial adds a constant offset to every key.

Coefficients stay integral throughout: reductions rescale the running
vector instead of dividing, and the accumulated scale is returned so exact
rational remainders can be recovered.
"""

from math import gcd


def grevlex_key(mono):
    """Graded reverse lexicographic key; componentwise addable."""
    return (sum(mono),) + tuple(-e for e in reversed(mono))


def lex_key(mono):
    return tuple(mono)


def elim1_key(base_key):
    """Block order eliminating the first variable over a base order."""
    def key(mono):
        return (mono[0],) + base_key(mono[1:])
    return key


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def vec_content(vec):
    g = 0
    for t in vec:
        g = gcd(g, t[3])
        if g == 1:
            return 1
    return g


def vec_primitive(vec):
    """Divide out the content and make the leading coefficient positive."""
    if not vec:
        return vec
    g = vec_content(vec)
    if vec[0][3] < 0:
        g = -g
    if g == 1:
        return vec
    return [(k, p, m, c // g) for (k, p, m, c) in vec]


def vec_scale(vec, c):
    if c == 1:
        return vec
    return [(k, p, m, co * c) for (k, p, m, co) in vec]


def vec_add(u, v):
    """Merge-add two sorted vectors."""
    out = []
    i = j = 0
    nu, nv = len(u), len(v)
    while i < nu and j < nv:
        ku, kv = u[i][0], v[j][0]
        if ku > kv:
            out.append(u[i])
            i += 1
        elif ku < kv:
            out.append(v[j])
            j += 1
        else:
            c = u[i][3] + v[j][3]
            if c:
                out.append((ku, u[i][1], u[i][2], c))
            i += 1
            j += 1
    out.extend(u[i:])
    out.extend(v[j:])
    return out


class Engine:
    """Reduction and Buchberger context for one monomial order."""

    def __init__(self, nvars, mono_key, degree_cap=0):
        self.nvars = nvars
        self.mono_key = mono_key
        self.degree_cap = degree_cap

    def term_key(self, pos, mono):
        return (-pos,) + self.mono_key(mono)

    def make_vec(self, terms):
        """Build a sorted vector from (pos, mono, coeff) triples."""
        acc = {}
        for pos, mono, c in terms:
            if c:
                key = (pos, mono)
                acc[key] = acc.get(key, 0) + c
        out = [(self.term_key(p, m), p, m, c) for (p, m), c in acc.items() if c]
        out.sort(key=lambda t: t[0], reverse=True)
        return out

    def mul_term(self, vec, mono, coeff):
        """Multiply a vector by coeff * x^mono."""
        if not vec:
            return []
        cap = self.degree_cap
        if cap:
            d = sum(mono)
            for _, _, m, _ in vec:
                if d + sum(m) > cap:
                    raise OverflowError(
                        "monomial degree exceeds cap %d" % cap)
        pad = (0,) + self.mono_key(mono)
        return [
            (tuple(a + b for a, b in zip(k, pad)), p, mono_mul(m, mono), c * coeff)
            for (k, p, m, c) in vec
        ]

    # -- reduction ---------------------------------------------------------

    def normal_form(self, vec, buckets):
        """Fully reduce ``vec`` by the bucketed reducers.

        Returns ``(remainder, denom)`` with the exact normal form equal to
        remainder / denom.  ``buckets`` maps a position to a list of
        ``(leadmono, leadcoeff, vector)`` entries.
        """
        denom = 1
        cur = list(vec)
        i = 0
        steps = 0
        while i < len(cur):
            key, pos, mono, coeff = cur[i]
            hit = None
            for lm, lc, rv in buckets.get(pos, ()):
                if mono_divides(lm, mono):
                    hit = (lm, lc, rv)
                    break
            if hit is None:
                i += 1
                continue
            lm, lc, rv = hit
            g = gcd(coeff, lc)
            a = lc // g
            b = coeff // g
            if a < 0:
                a, b = -a, -b
            if a != 1:
                denom *= a
                cur = [(k, p, m, c * a) for (k, p, m, c) in cur]
            shifted = self.mul_term(rv, mono_div(mono, lm), -b)
            head = cur[:i]
            head.extend(vec_add(cur[i:], shifted))
            cur = head
            steps += 1
            if denom > 1 and steps % 64 == 0:
                # keep accumulated scale factors from snowballing
                g = gcd(vec_content(cur), denom)
                if g > 1:
                    cur = [(k, p, m, c // g) for (k, p, m, c) in cur]
                    denom //= g
        if denom != 1:
            g = gcd(vec_content(cur), denom)
            if g > 1:
                cur = [(k, p, m, c // g) for (k, p, m, c) in cur]
                denom //= g
        return cur, denom

    # -- Buchberger --------------------------------------------------------

    def spair(self, u, v):
        ku, pu, mu, cu = u[0]
        kv, pv, mv, cv = v[0]
        lcm = mono_lcm(mu, mv)
        g = gcd(cu, cv)
        a = self.mul_term(u, mono_div(lcm, mu), cv // g)
        b = self.mul_term(v, mono_div(lcm, mv), -(cu // g))
        return vec_add(a, b)

    def buchberger(self, gens, coprime_ok=False, seed=None, reduce=True):
        """Groebner basis of the span of ``gens``.

        ``seed`` may carry vectors already known to form a Groebner basis;
        no seed-seed pairs are formed.  The coprime (product) criterion is
        only valid for rank-1 inputs and is off by default.  With
        ``reduce`` the result is the unique reduced basis; without it the
        complete basis is returned as computed (still deterministic).
        """
        G = []       # vectors
        leads = []   # (pos, mono, coeff)
        sugars = []
        alive = []
        buckets = {}
        pairs = {}   # (i, j) -> (sugar, lcmkey, lcmmono)

        def attach(v, sug):
            t = len(G)
            pos, mono, coeff = v[0][1], v[0][2], v[0][3]
            # Gebauer-Moeller update of the pair set.
            stale = []
            for (i, j), (_, _, lij) in pairs.items():
                if leads[i][0] != pos:
                    continue
                if mono_divides(mono, lij):
                    lit = mono_lcm(leads[i][1], mono)
                    ljt = mono_lcm(leads[j][1], mono)
                    if lit != lij and ljt != lij:
                        stale.append((i, j))
            for ij in stale:
                del pairs[ij]
            by_lcm = {}
            for i in range(t):
                if not alive[i] or leads[i][0] != pos:
                    continue
                by_lcm.setdefault(mono_lcm(leads[i][1], mono), []).append(i)
            kept = []
            for L in sorted(by_lcm, key=self.mono_key):
                if any(mono_divides(K, L) for K in kept):
                    continue
                kept.append(L)
                if coprime_ok and any(
                        mono_lcm(leads[i][1], mono) == mono_mul(leads[i][1], mono)
                        for i in by_lcm[L]):
                    continue
                i = min(by_lcm[L])
                quot_i = sum(mono_div(L, leads[i][1]))
                quot_t = sum(mono_div(L, mono))
                psug = max(sugars[i] + quot_i, sug + quot_t)
                pairs[(i, t)] = (psug, self.mono_key(L), L)
            G.append(v)
            leads.append((pos, mono, coeff))
            sugars.append(sug)
            alive.append(True)
            buckets.setdefault(pos, []).append((mono, coeff, v))

        if seed:
            for v in seed:
                G.append(v)
                leads.append((v[0][1], v[0][2], v[0][3]))
                sugars.append(max(sum(t[2]) for t in v))
                alive.append(True)
                buckets.setdefault(v[0][1], []).append((v[0][2], v[0][3], v))
        for v in gens:
            if not v:
                continue
            r, _ = self.normal_form(v, buckets)
            if r:
                attach(vec_primitive(r), max(sum(t[2]) for t in r))
        while pairs:
            ij = min(pairs, key=lambda p: (pairs[p][0], pairs[p][1], p))
            sug, _, _ = pairs.pop(ij)
            s = self.spair(G[ij[0]], G[ij[1]])
            r, _ = self.normal_form(s, buckets)
            if r:
                attach(vec_primitive(r), sug)
        if reduce:
            return self._interreduce(G, alive)
        out = [v for v in G if v]
        out.sort(key=lambda v: v[0][0], reverse=True)
        return out

    def interreduce(self, vecs):
        """Minimalize and tail-reduce a list already known to be a basis."""
        vecs = [list(v) for v in vecs]
        return self._interreduce(vecs, [True] * len(vecs))

    def _interreduce(self, G, alive):
        # Minimalize: drop vectors whose lead is divisible by another lead.
        order = sorted(range(len(G)), key=lambda i: G[i][0][0])
        kept = []
        for i in order:
            if not alive[i] or not G[i]:
                continue
            pos, mono = G[i][0][1], G[i][0][2]
            if any(G[j][0][1] == pos and mono_divides(G[j][0][2], mono)
                   for j in kept):
                continue
            kept.append(i)
        final = []
        for i in kept:
            buckets = {}
            for j in kept:
                if j == i:
                    continue
                v = G[j]
                buckets.setdefault(v[0][1], []).append((v[0][2], v[0][3], v))
            r, _ = self.normal_form(G[i], buckets)
            if r:
                final.append(vec_primitive(r))
        final.sort(key=lambda v: v[0][0], reverse=True)
        return final

    def buckets_of(self, gb):
        buckets = {}
        for v in gb:
            buckets.setdefault(v[0][1], []).append((v[0][2], v[0][3], v))
        return buckets
