"""Membership deciders for submonoids of one-relator groups.

Every decision returns a Verdict.  Member verdicts carry a witness that is
re-verified against a word-problem engine before being returned; non-member
verdicts carry a certificate (a sign obstruction, an exhausted certified
search bound, or a normal-form letter outside the allowed set); everything
else is an honest unknown, with a machine-readable instance attached when
one can be built.
"""

from math import gcd

from submon.words import Alphabet, Word, Presentation, GroupHom
from submon.magnus import (
    MagnusError, magnus_rewrite, max_min_report, interval_presentation,
    hnn_data, BrittonEngine, FbcGroup, sub_name, sub_invert,
    substitute_generator,
)
from submon.automata import StallingsGraph, no_cancellation
from submon.distortion import (
    DistortionBudget, SearchBudget, bounded_search, positive_functional,
    functional_value, free_image_graded,
)
from submon.presentations import (
    surface_presentation, nonorientable_presentation, bs_presentation,
    burns_presentation, prefix_generators, collapse_hom, select_engine,
    BsEngine,
)
from submon.rewrite import bs_system, closure_membership, ClosureError
from submon.verdict import Verdict


class DeciderError(ValueError):
    pass


def _parse_words(presentation, items):
    out = []
    for item in items:
        out.append(item if isinstance(item, Word) else presentation.word(item))
    return out


def _parse_word(presentation, item):
    return item if isinstance(item, Word) else presentation.word(item)


def _verify_member(engine, gens, indices_or_words, word):
    """Internal consistency check before any member verdict leaves."""
    if engine is None:
        return
    prod = Word(word.alphabet, ())
    for entry in indices_or_words:
        prod = prod * (gens[entry] if isinstance(entry, int) else entry)
    assert engine.equal(prod, word), "witness failed verification"


def _certified_search(gens, labels, word, engine, bound=None, budget=None,
                      methods=(), certificate=None, instance=None):
    """Search tail shared by the deciders.

    `bound` is a proven cap on factor counts; covering it with a certified
    search turns a miss into a non-member verdict.  Without it a miss is
    unknown.
    """
    budget = budget or SearchBudget(8)
    depth = budget.max_depth if bound is None else min(bound, budget.max_depth)
    res = bounded_search(
        gens, word, SearchBudget(depth, budget.max_states, budget.group_checks),
        engine=engine)
    methods = list(methods) + [res.method]
    if res.found:
        _verify_member(engine, gens, res.witness, word)
        witness = [labels[i] for i in res.witness]
        return Verdict.member(witness, methods=methods,
                              certificate=certificate, bound=depth)
    if bound is not None and depth >= bound and res.complete and res.certified:
        cert = dict(certificate or {})
        cert["exhausted"] = depth
        return Verdict.non_member(cert, methods=methods, bound=depth)
    methods.append("semi-decision")
    return Verdict.unknown(methods=methods, certificate=certificate,
                           instance=instance, bound=depth)


class DgInstance:
    """Membership instance over a subscript window: generators in the form
    stable^j u with u over the window letters, plus the splitting data."""

    def __init__(self, presentation, stable, gen, window, interval, hnn,
                 generators, labels, query=None, inverted=False):
        self.presentation = presentation
        self.stable = stable
        self.gen = gen
        self.window = window
        self.interval = interval
        self.hnn = hnn
        self.generators = generators
        self.labels = labels
        self.query = query
        self.inverted = inverted

    @property
    def groups(self):
        """Generators bucketed by stable exponent: W0 holds the kernel-side
        ones, W'j the exponent-j ones."""
        out = {"W0": []}
        for (j, u), label in zip(self.generators, self.labels):
            key = "W0" if j == 0 else f"W'{j}"
            out.setdefault(key, []).append(label)
        return out

    def serialize(self):
        ip = self.interval
        basis = self.hnn.basis
        base = self.presentation.alphabet
        phi = {}
        for g, s in self.hnn.P_letters:
            phi[sub_name(base, g, s)] = basis.letter_word(g, s + 1).format()
        return {
            "presentation": self.presentation.format(),
            "stable": self.stable,
            "eliminated": self.gen,
            "window": list(self.window),
            "interval": ip.full_presentation.format(),
            "basis": list(basis.alphabet.names),
            "substitutions": {
                name: basis.expressions[name].format()
                for name in sorted(basis.expressions)
            },
            "pGens": [sub_name(base, g, s) for g, s in self.hnn.P_letters],
            "qGens": [sub_name(base, g, s) for g, s in self.hnn.Q_letters],
            "phi": phi,
            "generators": [
                {"j": j, "u": u.format(), "label": label}
                for (j, u), label in zip(self.generators, self.labels)
            ],
            "query": (None if self.query is None
                      else {"j": self.query[0], "u": self.query[1].format()}),
            "inverted": self.inverted,
            "groups": self.groups,
        }


def reduce_to_dg_instance(presentation, stable, gens, query=None):
    """Rewrite a generating set into stable^j u coordinates over a window
    wide enough for every u, with the splitting data attached."""
    gens = _parse_words(presentation, gens)
    labels = [w.format() for w in gens]
    if query is not None:
        query = _parse_word(presentation, query)
    report = max_min_report(presentation, stable)
    if report.sigma != 0:
        raise DeciderError(
            f"relator exponent sum of {stable!r} is {report.sigma}, need 0")
    if not report.passes:
        raise DeciderError(
            "no generator attains its extreme subscripts exactly once")
    gen = report.qualifying[0]
    alphabet = presentation.alphabet
    names = alphabet.names
    t_letter = alphabet.letter(stable)

    js = [w.exponent_sum(stable) for w in gens]
    inverted = False
    if any(j < 0 for j in js):
        if any(j > 0 for j in js):
            raise DeciderError(
                f"mixed {stable!r} exponent signs across the generating set")
        inverted = True
        gens = [~w for w in gens]
        if query is not None:
            query = ~query

    def decompose(w):
        j = w.exponent_sum(stable)
        head = Word(alphabet, (-t_letter,) * j if j >= 0 else (t_letter,) * -j)
        image = magnus_rewrite(head * w, stable)
        return j, image.triples

    decomps = [decompose(w) for w in gens]
    query_decomp = decompose(query) if query is not None else None
    all_triples = [t for _, ts in decomps for t in ts]
    if query_decomp is not None:
        all_triples.extend(query_decomp[1])
    for g, s, _ in all_triples:
        if names[g] not in report.stats:
            raise DeciderError(
                f"generator {names[g]!r} does not occur in the relator")
    lows = [s - report.stats[names[g]]["min"] for g, s, _ in all_triples]
    highs = [s - report.stats[names[g]]["max"] for g, s, _ in all_triples]
    n = min(lows, default=0)
    m = max(highs, default=n + 1)
    if m < n + 1:
        m = n + 1
    ip = interval_presentation(presentation, stable, n, m)
    hnn = hnn_data(ip, gen)
    generators = [(j, ip.word_from_triples(ts)) for j, ts in decomps]
    query_pair = (None if query_decomp is None else
                  (query_decomp[0], ip.word_from_triples(query_decomp[1])))

    engine = BrittonEngine(presentation, stable, gen)
    for (j, ts), w in zip(decomps, gens):
        letters = [t_letter] * j if j >= 0 else [-t_letter] * -j
        for g, s, e in ts:
            body = [t_letter] * s if s >= 0 else [-t_letter] * -s
            letters.extend(body + [e * alphabet.letter(names[g])]
                           + [-x for x in reversed(body)])
        rebuilt = Word(alphabet, letters)
        assert engine.equal(rebuilt, w), "window decomposition failed to verify"

    return DgInstance(presentation, stable, gen, (n, m), ip, hnn,
                      generators, labels, query_pair, inverted)


def decide_surface_submonoid(presentation, gens, word, budget=None,
                             labels=None, engine=None):
    """Membership of a word in the submonoid generated by given words.

    Routes, in order: positive functional (complete), graded free image
    (complete when the composed bound fits the budget), window instance
    plus bounded search (member or unknown).
    """
    gens = _parse_words(presentation, gens)
    word = _parse_word(presentation, word)
    if labels is None:
        labels = [w.format() for w in gens]
    if engine is None:
        engine = select_engine(presentation)
    w0 = word.free_reduce()
    if not w0 or (engine is not None and engine.is_trivial(word)):
        return Verdict.member([], methods=["identity"])
    if not any(w.free_reduce() for w in gens):
        if engine is not None:
            return Verdict.non_member(
                {"reason": "the generating set only spans the identity"},
                methods=["identity"])
        return Verdict.unknown(methods=["identity"])

    methods = []
    psi = positive_functional(presentation, gens)
    if psi is not None:
        val = functional_value(psi, word)
        methods.append("functional")
        cert = {"functional": psi, "value": val}
        if val < 0:
            cert["reason"] = "negative functional value"
            return Verdict.non_member(cert, methods=methods)
        if val == 0:
            if engine is not None:
                cert["reason"] = "only the empty product has value 0"
                return Verdict.non_member(cert, methods=methods)
            return Verdict.unknown(methods=methods, certificate=cert)
        return _certified_search(gens, labels, word, engine, bound=val,
                                 budget=budget, methods=methods,
                                 certificate=cert)

    f = collapse_hom(presentation)
    if f is not None:
        graded = free_image_graded(presentation, f, gens)
        if graded is not None:
            methods.append("free-image")
            bound = graded.budget.bound(len(w0))
            cert = {
                "kind": graded.kind,
                "slope": graded.budget.slope,
                "offset": graded.budget.offset,
                "stretch": graded.data.get("stretch"),
            }
            return _certified_search(gens, labels, word, engine, bound=bound,
                                     budget=budget, methods=methods,
                                     certificate=cert)

    instance = None
    if presentation.is_one_relator:
        for stable in presentation.alphabet.names:
            try:
                instance = reduce_to_dg_instance(presentation, stable, gens,
                                                 query=word)
                methods.append("instance")
                break
            except (DeciderError, MagnusError):
                continue
    return _certified_search(gens, labels, word, engine, bound=None,
                             budget=budget, methods=methods,
                             instance=instance)


def _single_letters(presentation, items):
    words = _parse_words(presentation, items)
    letters = []
    for w in words:
        r = w.free_reduce()
        if len(r) != 1:
            raise DeciderError(f"{w.format()!r} is not a signed generator")
        letters.append(r.letters[0])
    return words, letters


def decide_surface_magnus(g, orientable, letters, word, budget=None):
    """Membership for submonoids generated by signed generators of a
    surface group, under the condition that some generator is missing a
    sign from the set."""
    pres = surface_presentation(g) if orientable else nonorientable_presentation(g)
    gens, lits = _single_letters(pres, letters)
    word = _parse_word(pres, word)
    labels = [w.format() for w in gens]
    signed = set(lits)
    k = len(pres.alphabet)
    if orientable:
        if all(i in signed and -i in signed for i in range(1, k + 1)):
            raise DeciderError("every generator occurs with both signs")
        return decide_surface_submonoid(pres, gens, word, budget,
                                        labels=labels)
    return _nonorientable_magnus(pres, gens, lits, labels, word, budget)


def _whole_group_witness(pres, lits, labels, word, positive):
    """Spell a word over all-positive (or all-negative) generators, using
    the cyclic relator conjugates to flip letters of the wrong sign."""
    k = len(pres.alphabet)
    position = {lit: i for i, lit in enumerate(lits)}
    out = []
    for x in word.letters:
        i = abs(x)
        if (x > 0) == positive:
            out.append(position[x])
            continue
        # a_i^-1 = a_i a_{i+1}^2 ... a_{i-1}^2 from the rotated relator,
        # and its mirror image on the negative side
        sign = 1 if positive else -1
        out.append(position[sign * i])
        order = range(1, k) if positive else range(k - 1, 0, -1)
        for step in order:
            j = (i - 1 + step) % k + 1
            out.extend([position[sign * j]] * 2)
    return [labels[i] for i in out], [i for i in out]


def _nonorientable_magnus(pres, gens, lits, labels, word, budget,
                          flipped=False):
    k = len(pres.alphabet)
    signed = set(lits)
    engine = select_engine(pres)
    w0 = word.free_reduce()
    if not w0 or engine.is_trivial(word):
        return Verdict.member([], methods=["identity"])
    for positive in (True, False):
        want = range(1, k + 1) if positive else range(-k, 0)
        if all(i in signed for i in want):
            witness, idxs = _whole_group_witness(pres, lits, labels, word,
                                                positive)
            _verify_member(engine, gens, idxs, word)
            cert = {"reason": "all generators present with one sign",
                    "sign": "+" if positive else "-"}
            return Verdict.member(witness, methods=["whole-group"],
                                  certificate=cert)
    pick = None
    for i in range(1, k + 1):
        if i in signed and -i not in signed:
            pick = i
            break
    if pick is None:
        if flipped:
            return Verdict.unknown(
                methods=["magnus"],
                certificate={"reason": "inversion-closed generating set; "
                                       "subgroup membership is out of scope"})
        inv_gens = [~w for w in gens]
        inv_lits = [-x for x in lits]
        verdict = _nonorientable_magnus(pres, inv_gens, inv_lits, labels,
                                        ~word, budget, flipped=True)
        if verdict.is_member:
            verdict.witness.reverse()
        return verdict
    other = None
    for j in range(1, k + 1):
        if j != pick and j not in signed:
            other = j
            break
    assert other is not None, "all-positive sets are whole-group"
    names = pres.alphabet.names
    fresh = next(nm for nm in ("x", "y", "z") if nm not in names)
    new_pres, forward = substitute_generator(
        pres, names[other - 1], fresh, f"{names[pick - 1]}' {fresh}")
    new_gens = [forward(w) for w in gens]
    verdict = decide_surface_submonoid(new_pres, new_gens, forward(word),
                                       budget, labels=labels)
    verdict.methods.insert(0, "substitution")
    return verdict


class PrefixDecider:
    """Membership in the monoid generated by the relator prefixes, with a
    shared forward product table across queries."""

    def __init__(self, g, orientable):
        self.presentation, self.gens = prefix_generators(g, orientable)
        self.labels = [w.format() for w in self.gens]
        self.engine = select_engine(self.presentation)
        self.psi = None
        if not orientable:
            self.psi = positive_functional(self.presentation, self.gens)
        if self.psi is not None:
            slope = max(abs(v) for v in self.psi.values())
            self.budget = DistortionBudget(slope, 0)
            self.provenance = {"route": "functional", "psi": dict(self.psi),
                               "slope": slope, "offset": 0}
        else:
            f = collapse_hom(self.presentation)
            graded = free_image_graded(self.presentation, f, self.gens)
            assert graded is not None, "standard prefix sets admit the free image route"
            self.budget = graded.budget
            self.provenance = {"route": "free-image", "kind": graded.kind,
                               "stretch": graded.data["stretch"],
                               "slope": graded.budget.slope,
                               "offset": graded.budget.offset}
        self._table = {(): None}
        self._frontier = [()]
        self._depth = 0

    def _ensure(self, depth, max_states=400_000):
        while self._depth < depth and self._frontier:
            grown = []
            for state in self._frontier:
                if len(self._table) >= max_states:
                    self._frontier = []
                    return
                base = Word(self.presentation.alphabet, state)
                for k, gw in enumerate(self.gens):
                    nxt = (base * gw).letters
                    if nxt not in self._table:
                        self._table[nxt] = (state, k)
                        grown.append(nxt)
            self._frontier = grown
            self._depth += 1

    def _path(self, letters):
        out = []
        cur = letters
        while self._table[cur] is not None:
            prev, k = self._table[cur]
            out.append(k)
            cur = prev
        out.reverse()
        return out

    def decide(self, word, budget=None):
        word = _parse_word(self.presentation, word)
        w0 = word.free_reduce()
        if not w0 or self.engine.is_trivial(word):
            return Verdict.member([], methods=["identity"])
        methods = ["prefix"]
        cert = dict(self.provenance)
        if self.psi is not None:
            val = functional_value(self.psi, word)
            cert["value"] = val
            if val <= 0:
                cert["reason"] = ("negative functional value" if val < 0
                                  else "only the empty product has value 0")
                return Verdict.non_member(cert, methods=methods + ["functional"])
            bound = val
        else:
            bound = self.budget.bound(len(w0))
        self._ensure(min(bound, 5))
        if w0.letters in self._table:
            idxs = self._path(w0.letters)
            _verify_member(self.engine, self.gens, idxs, word)
            witness = [self.labels[i] for i in idxs]
            return Verdict.member(witness, methods=methods + ["table"],
                                  certificate=cert, bound=bound)
        return _certified_search(self.gens, self.labels, word, self.engine,
                                 bound=bound, budget=budget,
                                 methods=methods, certificate=cert)


_PREFIX_CACHE = {}


def prefix_decider(g, orientable):
    key = (g, bool(orientable))
    if key not in _PREFIX_CACHE:
        _PREFIX_CACHE[key] = PrefixDecider(g, orientable)
    return _PREFIX_CACHE[key]


def decide_prefix_surface(g, orientable, word, budget=None):
    return prefix_decider(g, orientable).decide(word, budget)


_BS_LETTERS = ("a", "A", "t", "T")


def _bs_swap(items, pair):
    lo, hi = pair
    table = {lo: hi, hi: lo}
    return [table.get(x, x) for x in items]


def decide_bs_magnus(m, n, letters, word, budget=None):
    """Membership in the submonoid of BS(m, n) generated by a proper subset
    of the four signed letters."""
    if m == 0 or n == 0 or m == n:
        raise DeciderError(
            f"parameters ({m}, {n}) are outside the decided range")
    S = []
    for item in letters:
        item = item.strip() if isinstance(item, str) else item
        if item not in _BS_LETTERS or item in S:
            raise DeciderError(f"bad letter {item!r}")
        S.append(item)
    if not S or len(S) == 4:
        raise DeciderError(
            "the generating set must be a proper nonempty subset of a, A, t, T")
    pres = bs_presentation(m, n)
    word = _parse_word(pres, word)

    swaps = []
    if abs(m) > abs(n):
        m, n = n, m
        swaps.append(("t", "T"))
    if (m < 0 and n < 0) or (m > 0 > n):
        m, n = -m, -n
        swaps.append(("a", "A"))
    work_S = list(S)
    work_word = word
    for pair in swaps:
        work_S = _bs_swap(work_S, pair)
        lo, hi = pair
        i = pres.alphabet.letter(lo)
        flipped = tuple(-x if abs(x) == i else x for x in work_word.letters)
        work_word = Word(pres.alphabet, flipped)
    work_pres = bs_presentation(m, n)
    engine = BsEngine(m, n, work_pres.alphabet)

    def restore(witness):
        out = list(witness)
        for pair in reversed(swaps):
            out = _bs_swap(out, pair)
        return out

    cert_base = {"normalized": {"m": m, "n": n,
                                "swaps": ["".join(p) for p in swaps]}}
    verdict = _bs_decide_normalized(work_pres, engine, m, n, work_S,
                                    work_word, budget, cert_base)
    if verdict.is_member and verdict.witness:
        verdict.witness = restore(verdict.witness)
    return verdict


def _bs_decide_normalized(pres, engine, m, n, S, word, budget, cert_base):
    w0 = word.free_reduce()
    if not w0 or engine.is_trivial(word):
        return Verdict.member([], methods=["identity"])
    gens = [_parse_word(pres, s) for s in S]
    present = set(S)

    if 0 < m < n:
        allowed = set(S)
        for variant in ("positive", "negative"):
            system = bs_system(m, n, variant)
            try:
                ok = closure_membership(system, allowed, word.format())
            except ClosureError:
                continue
            nf = system.normalize(word.format())
            assert engine.equal(_parse_word(pres, nf) if nf else
                                Word(pres.alphabet, ()), word)
            methods = ["rewriting", variant]
            if ok:
                witness = list(nf)
                _verify_member(engine, gens, [S.index(c) for c in witness],
                               word)
                return Verdict.member(witness, methods=methods,
                                      certificate=dict(cert_base,
                                                       normal_form=nf))
            outside = sorted(set(nf) - allowed)
            cert = dict(cert_base, normal_form=nf, outside_letters=outside,
                        reason="normal form leaves the letter set")
            return Verdict.non_member(cert, methods=methods)
        raise DeciderError("no rewriting variant covers this letter set")

    # mixed signs: m < 0 < n
    p = -m
    methods = ["mixed-pinch"]
    if {"t", "T"} <= present and ("a" in present or "A" in present):
        if "a" in present:
            expansion = {"A": ["a"] * (p - 1) + ["T"] + ["a"] * n + ["t"]}
        else:
            expansion = {"a": ["A"] * (p - 1) + ["T"] + ["A"] * n + ["t"]}
        witness = []
        for x in w0.letters:
            c = pres.alphabet.name_of(x) if x > 0 else pres.alphabet.name_of(x).upper()
            witness.extend(expansion.get(c, [c]))
        _verify_member(engine, gens, [S.index(c) for c in witness], word)
        cert = dict(cert_base,
                    reason="three of the four letters span the whole group")
        return Verdict.member(witness, methods=methods + ["whole-group"],
                              certificate=cert)
    if present <= {"a", "A"}:
        k = engine.base_power(word)
        cert = dict(cert_base, base_power=k)
        if k is None:
            cert["reason"] = "not in the base subgroup"
            return Verdict.non_member(cert, methods=methods)
        good = (k >= 0 and "a" in present) or (k <= 0 and "A" in present) or k == 0
        if not good:
            cert["reason"] = "base power of the wrong sign"
            return Verdict.non_member(cert, methods=methods)
        witness = ["a"] * k if k >= 0 else ["A"] * -k
        _verify_member(engine, gens, [S.index(c) for c in witness], word)
        return Verdict.member(witness, methods=methods, certificate=cert)
    if present <= {"t", "T"}:
        j = word.exponent_sum("t")
        cert = dict(cert_base, stable_exponent=j)
        if not engine.is_trivial(word * _parse_word(pres, "t") ** -j):
            cert["reason"] = "not a stable-letter power"
            return Verdict.non_member(cert, methods=methods)
        good = (j >= 0 and "t" in present) or (j <= 0 and "T" in present)
        if not good:
            cert["reason"] = "stable power of the wrong sign"
            return Verdict.non_member(cert, methods=methods)
        witness = ["t"] * j if j >= 0 else ["T"] * -j
        _verify_member(engine, gens, [S.index(c) for c in witness], word)
        return Verdict.member(witness, methods=methods, certificate=cert)
    j = word.exponent_sum("t")
    if "t" in present and "T" not in present and j < 0:
        return Verdict.non_member(
            dict(cert_base, reason="negative stable exponent", j=j),
            methods=methods)
    if "T" in present and "t" not in present and j > 0:
        return Verdict.non_member(
            dict(cert_base, reason="positive stable exponent", j=j),
            methods=methods)
    return _certified_search(gens, S, word, engine, bound=None, budget=budget,
                             methods=methods, certificate=cert_base)


_BURNS = burns_presentation()


def _burns_fbc():
    return FbcGroup(_BURNS, "t")


def _expand(triples):
    """Flatten merged subscript triples to one entry per letter."""
    out = []
    for g, s, e in triples:
        step = 1 if e > 0 else -1
        out.extend([(g, s, step)] * abs(e))
    return tuple(out)


def _tiling_dp(u, factors):
    """Unordered cover of the triple sequence u by factor words; returns the
    key sequence or None."""
    L = len(u)
    if L == 0:
        return []
    reach = [None] * (L + 1)
    reach[0] = (0, None)
    for i in range(L):
        if reach[i] is None:
            continue
        for key, fw in factors.items():
            l = len(fw)
            if l and i + l <= L and u[i:i + l] == fw and reach[i + l] is None:
                reach[i + l] = (i, key)
    if reach[L] is None:
        return None
    out = []
    pos = L
    while pos > 0:
        prev, key = reach[pos]
        out.append(key)
        pos = prev
    out.reverse()
    return out


def _ordered_dp(u, factor_of, kmax):
    """Cover of u by factor_of(k) words with k weakly decreasing from kmax;
    returns the k sequence or None."""
    dead = set()
    out = []

    def go(pos, kcap):
        if pos == len(u):
            return True
        if (pos, kcap) in dead:
            return False
        for k in range(kcap, -1, -1):
            fw = factor_of(k)
            l = len(fw)
            if l and pos + l <= len(u) and u[pos:pos + l] == fw:
                out.append(k)
                if go(pos + l, k):
                    return True
                out.pop()
        dead.add((pos, kcap))
        return False

    return out if go(0, kmax) else None


def decide_burns_magnus(letters, word, budget=None):
    """Membership in the submonoid of the Burns group generated by a proper
    subset of the four signed letters."""
    S = []
    for item in letters:
        item = item.strip() if isinstance(item, str) else item
        if item not in _BS_LETTERS or item in S:
            raise DeciderError(f"bad letter {item!r}")
        S.append(item)
    if not S or len(S) == 4:
        raise DeciderError(
            "the generating set must be a proper nonempty subset of a, A, t, T")
    pres = _BURNS
    word = _parse_word(pres, word)
    fbc = _burns_fbc()
    w0 = word.free_reduce()
    if not w0 or fbc.is_trivial(word):
        return Verdict.member([], methods=["identity"])
    gens = [_parse_word(pres, s) for s in S]
    present = set(S)
    j, u = fbc.normal_form(word)
    u_exp = _expand(u)
    methods = ["fbc-normal-form"]
    cert_base = {"j": j, "u": fbc.format(u)}

    def orbit(k):
        return _expand(fbc.shift_to_basis(((fbc.g, 0, 1),), k))

    def member(witness):
        _verify_member(fbc, gens, [S.index(c) for c in witness], word)
        return Verdict.member(witness, methods=methods,
                              certificate=dict(cert_base))

    def reject(reason):
        return Verdict.non_member(dict(cert_base, reason=reason),
                                  methods=methods)

    if present <= {"a", "A"}:
        if j != 0:
            return reject("nonzero stable exponent")
        if any(s != 0 or g != fbc.g for g, s, _ in u):
            return reject("kernel part is not a base power")
        e = sum(e for _, _, e in u)
        if e > 0 and "a" not in present:
            return reject("base power of the wrong sign")
        if e < 0 and "A" not in present:
            return reject("base power of the wrong sign")
        return member(["a"] * e if e >= 0 else ["A"] * -e)

    if present <= {"t", "T"}:
        if u:
            return reject("nontrivial kernel part")
        if j > 0 and "t" not in present:
            return reject("stable power of the wrong sign")
        if j < 0 and "T" not in present:
            return reject("stable power of the wrong sign")
        return member(["t"] * j if j >= 0 else ["T"] * -j)

    if present == {"t", "T"} | {"a"} or present == {"t", "T"} | {"A"}:
        inverse = "A" in present
        factors = {}
        for direction in (1, -1):
            k = 0 if direction == 1 else -1
            while True:
                fw = orbit(k)
                if inverse:
                    fw = sub_invert(fw)
                if len(fw) > len(u_exp):
                    break
                factors[k] = fw
                k += direction
        methods.append("orbit-tiling")
        tile = _tiling_dp(u_exp, factors)
        if tile is None:
            return reject("kernel part is not a product of orbit conjugates")
        witness = ["t"] * j if j >= 0 else ["T"] * -j
        core = "A" if inverse else "a"
        for k in tile:
            if k >= 0:
                witness.extend(["t"] * k + [core] + ["T"] * k)
            else:
                witness.extend(["T"] * -k + [core] + ["t"] * -k)
        return member(witness)

    down = "t" in present
    if down and j < 0:
        return reject("negative stable exponent")
    if not down and j > 0:
        return reject("positive stable exponent")
    J = abs(j)
    if present in ({"a", "t"}, {"A", "t"}, {"a", "T"}, {"A", "T"}):
        inverse = "A" in present
        sign = -1 if down else 1
        cache = {}

        def factor_of(k):
            if k not in cache:
                fw = orbit(sign * k)
                cache[k] = sub_invert(fw) if inverse else fw
            return cache[k]

        methods.append("orbit-dp")
        ks = _ordered_dp(u_exp, factor_of, J)
        if ks is None:
            return reject("ordered orbit tiling exhausted")
        stable = "t" if down else "T"
        core = "A" if inverse else "a"
        witness = []
        for i in range(J + 1):
            witness.extend([core] * ks.count(J - i))
            if i < J:
                witness.append(stable)
        return member(witness)

    # three letters with both base signs: quick sign filter, then search
    return _certified_search(gens, S, word, fbc, bound=None, budget=budget,
                             methods=methods + ["mixed-signs"],
                             certificate=cert_base)


def orbit_membership(theta, theta_inv, seeds, word, budget=None):
    """Membership of a free-group word in the monoid generated by the
    automorphism orbit of the seeds.

    Complete when orbit word lengths grow monotonically past the target and
    the collected words concatenate without cancellation; otherwise falls
    back to a budget-bounded search.
    """
    target = word.free_reduce()
    if not target:
        return Verdict.member([], methods=["identity"])
    L = len(target)
    seeds = [s.free_reduce() for s in seeds]
    factors = {}
    probes = []
    monotone = True
    cap = L + 8
    for si, seed in enumerate(seeds):
        for direction, hom in ((1, theta), (-1, theta_inv)):
            cur = seed if direction == 1 else hom(seed)
            k = 0 if direction == 1 else -1
            steps = 0
            while steps < cap:
                steps += 1
                if len(cur) == 0:
                    monotone = False
                    break
                if len(cur) > L:
                    probe = cur
                    for _ in range(3):
                        probes.append(probe.letters)
                        last = len(probe)
                        probe = hom(probe)
                        if len(probe) <= last:
                            monotone = False
                            break
                    break
                factors[(si, k)] = cur.letters
                nxt = hom(cur)
                if len(nxt) < len(cur):
                    monotone = False
                cur = nxt
                k += direction
            else:
                monotone = False
    certified = (monotone and factors
                 and no_cancellation(list(factors.values()) + probes))
    methods = ["orbit"]
    cert = {"factors": {f"{si}:{k}": Word(word.alphabet, fw).format()
                        for (si, k), fw in sorted(factors.items())},
            "certified": bool(certified)}
    tile = _tiling_dp(target.letters, factors)
    if tile is not None:
        witness = [Word(word.alphabet, factors[key]).format() for key in tile]
        return Verdict.member(witness, methods=methods + ["tiling"],
                              certificate=cert)
    if certified:
        cert["reason"] = "no tiling by orbit words"
        return Verdict.non_member(cert, methods=methods + ["tiling"])
    gens = [Word(word.alphabet, fw) for fw in factors.values()]
    labels = [w.format() for w in gens]
    return _certified_search(gens, labels, target, None, bound=None,
                             budget=budget, methods=methods,
                             certificate=cert)


def decide_positivity_fbc(presentation, word, budget=None):
    """Membership in the monoid of positive words of a two-generator
    one-relator group whose relator has zero exponent sum in one generator
    and unique extreme subscripts."""
    if len(presentation.alphabet) != 2 or not presentation.is_one_relator:
        raise DeciderError("needs a two-generator one-relator presentation")
    names = presentation.alphabet.names
    rel = presentation.relator
    stable = base = fbc = None
    for cand, other in (tuple(reversed(names)), names):
        if rel.exponent_sum(cand) != 0:
            continue
        try:
            report = max_min_report(presentation, cand)
            if not report.passes or other not in report.qualifying:
                continue
            fbc = FbcGroup(presentation, cand, other)
        except MagnusError:
            continue
        stable, base = cand, other
        break
    if stable is None:
        raise DeciderError(
            "no stable letter with unique extreme subscripts for the other "
            "generator")
    word = _parse_word(presentation, word)
    gens = [_parse_word(presentation, base), _parse_word(presentation, stable)]
    labels = [base, stable]
    w0 = word.free_reduce()
    if not w0 or fbc.is_trivial(word):
        return Verdict.member([], methods=["identity"])
    j, u = fbc.normal_form(word)
    u_exp = _expand(u)
    methods = ["fbc-normal-form"]
    cert = {"j": j, "u": fbc.format(u), "stable": stable}
    if j < 0:
        cert["reason"] = "negative stable exponent"
        return Verdict.non_member(cert, methods=methods)

    cache = {}

    def factor_of(k):
        if k not in cache:
            cache[k] = _expand(fbc.shift_to_basis(((fbc.g, 0, 1),), -k))
        return cache[k]

    seqs = [factor_of(k) for k in range(j + 1)]
    index = {}
    as_ints = []
    for fw in seqs:
        row = []
        for g, s, e in fw:
            key = (g, s)
            if key not in index:
                index[key] = len(index) + 1
            row.append(e * index[key])
        as_ints.append(tuple(row))
    if all(seqs) and no_cancellation(as_ints):
        methods.append("orbit-dp")
        ks = _ordered_dp(u_exp, factor_of, j)
        if ks is None:
            cert["reason"] = "ordered orbit tiling exhausted"
            return Verdict.non_member(cert, methods=methods)
        witness = []
        for i in range(j + 1):
            witness.extend([base] * ks.count(j - i))
            if i < j:
                witness.append(stable)
        _verify_member(fbc, gens, [labels.index(c) for c in witness], word)
        return Verdict.member(witness, methods=methods, certificate=cert)

    instance = None
    try:
        instance = reduce_to_dg_instance(presentation, stable, gens,
                                         query=word)
    except (DeciderError, MagnusError):
        pass
    return _certified_search(gens, labels, word, fbc, bound=None,
                             budget=budget, methods=methods,
                             certificate=cert, instance=instance)


def choose_signs(presentation, gens):
    """A generator with a nonzero exponent sum somewhere in the set, and a
    sign for each word making those sums nonnegative."""
    gens = _parse_words(presentation, gens)
    for t in presentation.alphabet.names:
        sigmas = [w.exponent_sum(t) for w in gens]
        if any(s != 0 for s in sigmas):
            return t, [1 if s >= 0 else -1 for s in sigmas]
    return presentation.alphabet.names[0], [1] * len(gens)


def powers_decider(presentation, powers, word, budget=None):
    """Membership in the submonoid generated by literal generator powers."""
    ps = _parse_words(presentation, powers)
    word = _parse_word(presentation, word)
    literal = []
    for p in ps:
        r = p.free_reduce()
        if not r or len(set(r.letters)) != 1:
            raise DeciderError(f"{p.format()!r} is not a generator power")
        x = r.letters[0]
        literal.append((abs(x), len(r) * (1 if x > 0 else -1)))
    labels = [p.format() for p in ps]
    engine = select_engine(presentation)
    w0 = word.free_reduce()
    if not w0 or (engine is not None and engine.is_trivial(word)):
        return Verdict.member([], methods=["identity"])
    if not ps:
        if engine is not None:
            return Verdict.non_member(
                {"reason": "empty generating set"}, methods=["powers"])
        return Verdict.unknown(methods=["powers"])

    by_gen = {}
    for idx, k in literal:
        by_gen.setdefault(idx, []).append(k)
    uniform = any(all(k > 0 for k in ks) or all(k < 0 for k in ks)
                  for ks in by_gen.values())
    if uniform:
        verdict = decide_surface_submonoid(presentation, ps, word, budget,
                                           labels=labels, engine=engine)
        verdict.methods.insert(0, "powers")
        return verdict

    # every generator occurs with powers of both signs: the monoid is the
    # subgroup generated by the gcd powers
    d = {idx: gcd(*(abs(k) for k in ks)) if len(ks) > 1 else abs(ks[0])
         for idx, ks in by_gen.items()}
    subgroup = {presentation.alphabet.names[idx - 1]: d[idx] for idx in d}
    cert = {"subgroup": subgroup}

    def bezout_witness(idx, e):
        steps = sorted({k for i, k in literal if i == idx})
        bound = abs(e) + max(abs(k) for k in steps) ** 2 + 1
        seen = {0: None}
        layer = [0]
        while layer and e not in seen:
            grown = []
            for v in layer:
                for k in steps:
                    nv = v + k
                    if abs(nv) <= bound and nv not in seen:
                        seen[nv] = (v, k)
                        grown.append(nv)
            layer = grown
        if e not in seen:
            return None
        out = []
        cur = e
        while seen[cur] is not None:
            prev, k = seen[cur]
            out.append(next(i for i, (gi, gk) in enumerate(literal)
                            if gi == idx and gk == k))
            cur = prev
        out.reverse()
        return out

    if not presentation.relators:
        sub_words = [
            Word(presentation.alphabet,
                 (presentation.alphabet.letter(name),) * k)
            for name, k in subgroup.items()]
        graph = StallingsGraph(presentation.alphabet, sub_words)
        wit = graph.witness(w0)
        if wit is None:
            cert["reason"] = "outside the power subgroup"
            return Verdict.non_member(cert, methods=["powers", "subgroup"])
        sub_idx = list(subgroup)
        witness_idx = []
        for s in wit:
            name = sub_idx[abs(s) - 1]
            idx = presentation.alphabet.index(name) + 1
            e = subgroup[name] * (1 if s > 0 else -1)
            combo = bezout_witness(idx, e)
            assert combo is not None, "gcd power must be reachable"
            witness_idx.extend(combo)
        _verify_member(engine, ps, witness_idx, word)
        return Verdict.member([labels[i] for i in witness_idx],
                              methods=["powers", "subgroup"],
                              certificate=cert)

    if len(set(w0.letters)) == 1:
        x = w0.letters[0]
        idx, e = abs(x), len(w0) * (1 if x > 0 else -1)
        if idx in d and e % d[idx] == 0:
            combo = bezout_witness(idx, e)
            if combo is not None:
                _verify_member(engine, ps, combo, word)
                return Verdict.member([labels[i] for i in combo],
                                      methods=["powers", "bezout"],
                                      certificate=cert)
    cert["reason"] = "subgroup membership instance not decided here"
    return Verdict.unknown(methods=["powers", "subgroup-instance"],
                           certificate=cert)


class GadgetOutput:
    """A presentation extended by a stable letter and one conjugate per
    generator word, with the generating set that encodes the original
    membership question as a positivity question."""

    def __init__(self, presentation, generators, stable, conjugates, note):
        self.presentation = presentation
        self.generators = generators
        self.stable = stable
        self.conjugates = conjugates
        self.note = note

    def serialize(self):
        return {
            "presentation": self.presentation.format(),
            "generators": list(self.generators),
            "stable": self.stable,
            "conjugates": dict(self.conjugates),
            "note": self.note,
        }


def emit_positivity_gadget(presentation, gens):
    """Extend a presentation so that membership in the submonoid generated
    by the given words becomes a positivity question over the new
    generating set."""
    gens = _parse_words(presentation, gens)
    names = presentation.alphabet.names
    used = set(names)
    stable = next((c for c in "tszuv" if c not in used), None)
    if stable is None:
        i = 0
        while f"t{i}" in used:
            i += 1
        stable = f"t{i}"
    used.add(stable)
    conj_names = []
    i = 1
    while len(conj_names) < len(gens):
        cand = f"g{i}"
        if cand not in used:
            conj_names.append(cand)
            used.add(cand)
        i += 1
    new_alpha = Alphabet(list(names) + [stable] + conj_names)
    relators = [Word(new_alpha, r.letters) for r in presentation.relators]
    t_letter = new_alpha.letter(stable)
    conjugates = {}
    for w, cname in zip(gens, conj_names):
        c_letter = new_alpha.letter(cname)
        relators.append(Word(
            new_alpha, (t_letter,) + w.letters + (-t_letter, -c_letter)))
        conjugates[cname] = w.format()
    new_pres = Presentation(new_alpha, relators)
    note = ("each added relator names the stable-letter conjugate of one "
            "generating word; a word lies in the original submonoid exactly "
            "when it is a positive word over the extended generating set")
    return GadgetOutput(new_pres, list(new_alpha.names), stable, conjugates,
                        note)


def eliminate_defined_generator(presentation, name):
    """Tietze move removing a generator that a relator defines by a single
    occurrence; returns the smaller presentation and the rewriting map."""
    alphabet = presentation.alphabet
    target = alphabet.letter(name)
    chosen = None
    for idx, r in enumerate(presentation.relators):
        occ = [i for i, x in enumerate(r.letters) if abs(x) == target]
        if len(occ) == 1:
            chosen = (idx, occ[0])
            break
    if chosen is None:
        raise DeciderError(f"no relator defines {name!r} by a single occurrence")
    idx, pos = chosen
    r = presentation.relators[idx]
    prefix = Word(alphabet, r.letters[:pos])
    suffix = Word(alphabet, r.letters[pos + 1:])
    if r.letters[pos] > 0:
        expr = ~prefix * ~suffix
    else:
        expr = suffix * prefix
    new_alpha = Alphabet([nm for nm in alphabet.names if nm != name])
    images = []
    for nm in alphabet.names:
        if nm == name:
            images.append(Word(new_alpha, tuple(
                (1 if x > 0 else -1) * new_alpha.letter(alphabet.name_of(abs(x)))
                for x in expr.letters)))
        else:
            images.append(Word(new_alpha, (new_alpha.letter(nm),)))
    hom = GroupHom(alphabet, new_alpha, images)
    new_relators = [hom(r2) for k, r2 in enumerate(presentation.relators)
                    if k != idx]
    new_relators = [r2 for r2 in new_relators if r2]
    return Presentation(new_alpha, new_relators), hom
