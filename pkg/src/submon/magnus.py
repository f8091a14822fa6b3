"""Subscript rewriting for one-relator groups with a distinguished letter.

Fixing a stable generator t with zero exponent sum in a word, every other
letter x at t-prefix-sum s becomes a subscripted letter x_s.  On the
cyclically reduced relator this produces the data everything else here is
built from:

* `max_min_report` records, per generator, the extreme subscripts and how
  often they are hit; a generator whose extremes are each hit exactly once
  qualifies, and its top occurrences can be eliminated by Tietze moves.

* `interval_presentation` spells out the subgroup generated by the
  subscripted letters over a subscript window, together with the shifted
  relators and the conjugation relations linking neighbours.

* `eliminate_to_basis` / `hnn_data` turn the window group into a free
  group with an explicit basis and the two edge subgroups of the HNN
  splitting, with the shift isomorphism between them.

* `BrittonEngine` solves the word problem by Britton pinching over that
  splitting; `FbcGroup` solves it through normal forms t^j u with u in
  the kernel of the t-exponent map, written over the kernel basis.

Kernel words are handled as tuples of (generator index, subscript, sign)
triples so subscripts can roam without registering alphabets.
"""

from submon.words import Alphabet, Word, Presentation, GroupHom, WordError
from submon.automata import StallingsGraph


class MagnusError(ValueError):
    pass


def sub_reduce(triples):
    out = []
    for t in triples:
        if out and out[-1][0] == t[0] and out[-1][1] == t[1] and out[-1][2] == -t[2]:
            out.pop()
        else:
            out.append(t)
    return tuple(out)


def sub_invert(triples):
    return tuple((g, s, -e) for g, s, e in reversed(triples))


def sub_shift(triples, d):
    return tuple((g, s + d, e) for g, s, e in triples)


def sub_mul(*parts):
    out = []
    for part in parts:
        for t in part:
            if out and out[-1][0] == t[0] and out[-1][1] == t[1] and out[-1][2] == -t[2]:
                out.pop()
            else:
                out.append(t)
    return tuple(out)


def sub_name(alphabet, g, s):
    return f"{alphabet.names[g]}[{s}]"


def format_subscripted(alphabet, triples):
    return " ".join(
        sub_name(alphabet, g, s) + ("" if e > 0 else "'") for g, s, e in triples
    )


class MagnusImage:
    """Image of a word under subscript rewriting (the stable letter drops)."""

    def __init__(self, alphabet, stable, triples):
        self.alphabet = alphabet
        self.stable = stable
        self.triples = tuple(triples)

    def __len__(self):
        return len(self.triples)

    def __eq__(self, other):
        return (
            isinstance(other, MagnusImage)
            and self.alphabet == other.alphabet
            and self.stable == other.stable
            and self.triples == other.triples
        )

    def occurring(self):
        return sorted({g for g, _, _ in self.triples})

    def subscripts(self, gen):
        idx = self.alphabet.index(gen)
        return [s for g, s, _ in self.triples if g == idx]

    def min_subscript(self, gen):
        return min(self.subscripts(gen))

    def max_subscript(self, gen):
        return max(self.subscripts(gen))

    def count_at(self, gen, sub):
        return self.subscripts(gen).count(sub)

    def format(self):
        return format_subscripted(self.alphabet, self.triples)

    def __repr__(self):
        return f"<rho_{self.stable}: {self.format() or '1'}>"


def magnus_rewrite(word, stable):
    """Subscript rewriting of a word with zero stable-letter exponent sum."""
    alphabet = word.alphabet
    t = alphabet.index(stable)
    if word.exponent_sum(t) != 0:
        raise MagnusError(
            f"exponent sum of {stable!r} is {word.exponent_sum(t)}, need 0")
    triples = []
    s = 0
    for x in word.letters:
        if abs(x) - 1 == t:
            s += 1 if x > 0 else -1
        else:
            triples.append((abs(x) - 1, s, 1 if x > 0 else -1))
    return MagnusImage(alphabet, stable, triples)


class MaxMinReport:
    """Extreme-subscript statistics of the rewritten cyclically reduced
    relator; a generator qualifies when each extreme is hit exactly once."""

    def __init__(self, presentation, stable):
        self.presentation = presentation
        self.stable = stable
        alphabet = presentation.alphabet
        t = alphabet.index(stable)
        core, _ = presentation.relator.cyclic_reduce()
        self.relator_core = core
        self.sigma = core.exponent_sum(t)
        self.image = None
        self.stats = {}
        self.qualifying = []
        self.missing = tuple(
            n for i, n in enumerate(alphabet.names)
            if i != t and not any(abs(x) - 1 == i for x in core.letters)
        )
        if self.sigma != 0:
            self.passes = False
            return
        self.image = magnus_rewrite(core, stable)
        for g in self.image.occurring():
            name = alphabet.names[g]
            subs = self.image.subscripts(name)
            lo, hi = min(subs), max(subs)
            self.stats[name] = {
                "min": lo, "max": hi,
                "at_min": subs.count(lo), "at_max": subs.count(hi),
            }
            if subs.count(lo) == 1 and subs.count(hi) == 1:
                self.qualifying.append(name)
        self.passes = bool(self.qualifying)

    def __repr__(self):
        verdict = "PASS" if self.passes else "FAIL"
        return f"MaxMinReport(stable={self.stable}, {verdict}, qualifying={self.qualifying})"


def max_min_report(presentation, stable):
    return MaxMinReport(presentation, stable)


def _relator_image(presentation, stable):
    report = MaxMinReport(presentation, stable)
    if report.sigma != 0:
        raise MagnusError(
            f"stable letter {stable!r} has exponent sum {report.sigma} in the relator")
    if report.missing:
        raise MagnusError(
            f"generators {report.missing} do not occur in the relator")
    return report


class IntervalPresentation:
    """Subscripted letters over a window [n, m] of relator shifts."""

    def __init__(self, presentation, stable, n, m):
        if m < n:
            raise MagnusError(f"empty window [{n}, {m}]")
        report = _relator_image(presentation, stable)
        self.original = presentation
        self.stable = stable
        self.n = n
        self.m = m
        self.report = report
        base = presentation.alphabet
        t = base.index(stable)
        image = report.image
        self.spans = {}
        letters = []
        for g in image.occurring():
            name = base.names[g]
            lo = image.min_subscript(name) + n
            hi = image.max_subscript(name) + m
            self.spans[name] = (lo, hi)
            for s in range(lo, hi + 1):
                letters.append((g, s))
        self.letters = tuple(letters)
        self.alphabet = Alphabet(sub_name(base, g, s) for g, s in letters)
        self.shifted_relators = tuple(
            self.word_from_triples(sub_shift(image.triples, i))
            for i in range(n, m + 1)
        )
        full_names = list(self.alphabet.names) + [stable]
        full_alphabet = Alphabet(full_names)
        t_full = full_alphabet.letter(stable)
        relators = []
        for w in self.shifted_relators:
            relators.append(Word(full_alphabet, w.letters))
        for g, s in letters:
            if (g, s + 1) in set(letters):
                lo_letter = full_alphabet.letter(sub_name(base, g, s))
                hi_letter = full_alphabet.letter(sub_name(base, g, s + 1))
                relators.append(
                    Word(full_alphabet, (t_full, lo_letter, -t_full, -hi_letter)))
        self.full_presentation = Presentation(full_alphabet, relators)

    def word_from_triples(self, triples):
        base = self.original.alphabet
        out = []
        for g, s, e in triples:
            out.append(e * self.alphabet.letter(sub_name(base, g, s)))
        return Word(self.alphabet, out)

    def contains_letter(self, g, s):
        name = self.original.alphabet.names[g]
        if name not in self.spans:
            return False
        lo, hi = self.spans[name]
        return lo <= s <= hi


def interval_presentation(presentation, stable, n, m):
    return IntervalPresentation(presentation, stable, n, m)


class Basis:
    """Free basis of the window group after eliminating the top letters of
    one qualifying generator from each shifted relator."""

    def __init__(self, ip, gen):
        stats = ip.report.stats.get(gen)
        if stats is None or stats["at_max"] != 1:
            raise MagnusError(f"generator {gen!r} has no unique top occurrence")
        self.ip = ip
        self.gen = gen
        base = ip.original.alphabet
        g = base.index(gen)
        top = stats["max"]
        eliminated = {sub_name(base, g, top + i) for i in range(ip.n, ip.m + 1)}
        self.eliminated_names = eliminated
        keep = [nm for nm in ip.alphabet.names if nm not in eliminated]
        self.alphabet = Alphabet(keep)
        self.expressions = {}
        for i, rel in enumerate(ip.shifted_relators):
            target = sub_name(base, g, top + ip.n + i)
            target_letter = ip.alphabet.letter(target)
            positions = [j for j, x in enumerate(rel.letters) if abs(x) == abs(target_letter)]
            if len(positions) != 1:
                raise MagnusError(f"{target} occurs {len(positions)} times in a shifted relator")
            j = positions[0]
            prefix = Word(ip.alphabet, rel.letters[:j])
            suffix = Word(ip.alphabet, rel.letters[j + 1:])
            if rel.letters[j] > 0:
                solved = ~prefix * ~suffix
            else:
                solved = suffix * prefix
            self.expressions[target] = self._lower(solved)

    def _lower(self, word):
        out = Word(self.alphabet, ())
        for x in word.letters:
            name = word.alphabet.name_of(x)
            if name in self.expressions:
                img = self.expressions[name]
            elif name in self.eliminated_names:
                raise MagnusError(f"{name} eliminated later than its use")
            else:
                img = Word(self.alphabet, (self.alphabet.letter(name),))
            out = out * (img if x > 0 else ~img)
        return out

    def to_basis(self, word):
        """Rewrite a word over the window alphabet into the basis."""
        if word.alphabet != self.ip.alphabet:
            raise MagnusError("word not over the window alphabet")
        return self._lower(word)

    def letter_word(self, g, s):
        name = sub_name(self.ip.original.alphabet, g, s)
        if name in self.expressions:
            return self.expressions[name]
        return Word(self.alphabet, (self.alphabet.letter(name),))


def eliminate_to_basis(ip, gen):
    return Basis(ip, gen)


class HnnData:
    """Edge subgroups of the splitting over a window: P is generated by the
    letters of the lower sub-window, Q by the upper, and phi shifts up."""

    def __init__(self, ip, gen):
        if ip.m < ip.n + 1:
            raise MagnusError("window too narrow for a splitting")
        self.ip = ip
        self.basis = Basis(ip, gen)
        base = ip.original.alphabet
        image = ip.report.image

        def window_letters(lo_shift, hi_shift):
            out = []
            for g in image.occurring():
                name = base.names[g]
                lo = image.min_subscript(name) + lo_shift
                hi = image.max_subscript(name) + hi_shift
                out.extend((g, s) for s in range(lo, hi + 1))
            return out

        self.P_letters = window_letters(ip.n, ip.m - 1)
        self.Q_letters = window_letters(ip.n + 1, ip.m)
        self.P_words = [self.basis.letter_word(g, s) for g, s in self.P_letters]
        self.Q_words = [self.basis.letter_word(g, s) for g, s in self.Q_letters]
        self.P_graph = StallingsGraph(self.basis.alphabet, self.P_words)
        self.Q_graph = StallingsGraph(self.basis.alphabet, self.Q_words)
        self._P_images = [self.basis.letter_word(g, s + 1) for g, s in self.P_letters]
        self._Q_images = [self.basis.letter_word(g, s - 1) for g, s in self.Q_letters]

    def _map_witness(self, witness, images):
        out = Word(self.basis.alphabet, ())
        for s in witness:
            img = images[abs(s) - 1]
            out = out * (img if s > 0 else ~img)
        return out

    def phi(self, word):
        """Shift a P-element up by one; None when word is not in P."""
        wit = self.P_graph.witness(word)
        if wit is None:
            return None
        return self._map_witness(wit, self._P_images)

    def phi_inv(self, word):
        wit = self.Q_graph.witness(word)
        if wit is None:
            return None
        return self._map_witness(wit, self._Q_images)


def hnn_data(ip, gen):
    return HnnData(ip, gen)


def _abelian_filter(presentation, word):
    """False when no integer k makes the exponent vector k times the
    relator's; True means the abelian test is passed, nothing more."""
    r = presentation.relator
    k = None
    for i in range(len(presentation.alphabet)):
        wr, ww = r.exponent_sum(i), word.exponent_sum(i)
        if wr == 0:
            if ww != 0:
                return False
        elif k is None:
            if ww % wr != 0:
                return False
            k = ww // wr
        elif ww != k * wr:
            return False
    return True


class BrittonEngine:
    """Word problem by Britton pinching.

    Requires a stable letter with zero relator exponent sum, every other
    generator occurring in the relator, and a qualifying generator in the
    max_min_report.  Window machinery is cached per window.
    """

    def __init__(self, presentation, stable, gen=None):
        self.presentation = presentation
        self.stable = stable
        report = _relator_image(presentation, stable)
        if gen is None:
            if not report.qualifying:
                raise MagnusError("no generator with unique extreme occurrences")
            gen = report.qualifying[0]
        elif gen not in report.qualifying:
            raise MagnusError(f"{gen!r} does not qualify")
        self.gen = gen
        self.report = report
        self._machinery = {}

    def _window(self, n, m):
        key = (n, m)
        if key not in self._machinery:
            ip = IntervalPresentation(self.presentation, self.stable, n, m)
            self._machinery[key] = HnnData(ip, self.gen)
        return self._machinery[key]

    def is_trivial(self, word):
        w = word.free_reduce()
        if not w:
            return True
        if not _abelian_filter(self.presentation, w):
            return False
        alphabet = self.presentation.alphabet
        t = alphabet.index(self.stable)
        sums = [0]
        s = 0
        has_other = False
        for x in w.letters:
            if abs(x) - 1 == t:
                s += 1 if x > 0 else -1
                sums.append(s)
            else:
                has_other = True
        if not has_other:
            return s == 0
        lo, hi = min(sums + [0]), max(sums + [0])
        image = self.report.image
        span_lo = max(image.min_subscript(alphabet.names[g]) for g in image.occurring())
        span_hi = min(image.max_subscript(alphabet.names[g]) for g in image.occurring())
        n = (lo - hi) - span_lo
        m = max((hi - lo) - span_hi, n + 1)
        hnn = self._window(n, m)
        basis = hnn.basis
        segs = [Word(basis.alphabet, ())]
        signs = []
        for x in w.letters:
            g = abs(x) - 1
            if g == t:
                signs.append(1 if x > 0 else -1)
                segs.append(Word(basis.alphabet, ()))
            else:
                piece = basis.letter_word(g, 0)
                segs[-1] = segs[-1] * (piece if x > 0 else ~piece)
        while True:
            pinched = False
            for i in range(len(signs) - 1):
                if signs[i] == 1 and signs[i + 1] == -1:
                    img = hnn.phi(segs[i + 1])
                elif signs[i] == -1 and signs[i + 1] == 1:
                    img = hnn.phi_inv(segs[i + 1])
                else:
                    continue
                if img is None:
                    continue
                segs[i:i + 3] = [segs[i] * img * segs[i + 2]]
                del signs[i:i + 2]
                pinched = True
                break
            if not pinched:
                break
        if signs:
            return False
        return not segs[0]

    def equal(self, u, v):
        return self.is_trivial(u * ~v)


def britton_word_problem(presentation, stable, word):
    return BrittonEngine(presentation, stable).is_trivial(word)


class FbcGroup:
    """Normal forms t^j u with u over the kernel basis.

    Needs a generator with unique occurrences at both subscript extremes of
    the rewritten relator; its letters outside [min, max-1] are rewritten
    away through the shifted relators, top occurrences downwards and bottom
    occurrences upwards.
    """

    def __init__(self, presentation, stable, gen=None):
        self.presentation = presentation
        self.stable = stable
        report = _relator_image(presentation, stable)
        if gen is None:
            if not report.qualifying:
                raise MagnusError("no generator with unique extreme occurrences")
            gen = report.qualifying[0]
        elif gen not in report.qualifying:
            raise MagnusError(f"{gen!r} does not qualify")
        self.gen = gen
        self.report = report
        alphabet = presentation.alphabet
        self.g = alphabet.index(gen)
        self.t = alphabet.index(stable)
        stats = report.stats[gen]
        self.low, self.high = stats["min"], stats["max"]
        triples = report.image.triples
        for target, solve_low in ((self.high, False), (self.low, True)):
            pos = [i for i, (g, s, _) in enumerate(triples)
                   if g == self.g and s == target]
            assert len(pos) == 1
            j = pos[0]
            prefix, (g0, s0, e0), suffix = triples[:j], triples[j], triples[j + 1:]
            if e0 > 0:
                solved = sub_mul(sub_invert(prefix), sub_invert(suffix))
            else:
                solved = sub_mul(suffix, prefix)
            if solve_low:
                self.expr_low = solved
            else:
                self.expr_high = solved

    def rebase(self, triples):
        """Rewrite kernel triples so the chosen generator only carries
        subscripts in [low, high-1]; canonical by freeness of the kernel."""
        work = list(sub_reduce(triples))
        while True:
            hit = None
            for i, (g, s, e) in enumerate(work):
                if g == self.g and not (self.low <= s <= self.high - 1):
                    hit = (i, g, s, e)
                    break
            if hit is None:
                return tuple(work)
            i, g, s, e = hit
            if s >= self.high:
                repl = sub_shift(self.expr_high, s - self.high)
            else:
                repl = sub_shift(self.expr_low, s - self.low)
            if e < 0:
                repl = sub_invert(repl)
            work = list(sub_mul(tuple(work[:i]), repl, tuple(work[i + 1:])))

    def normal_form(self, word):
        """(j, u): the element equals stable^j times the kernel word u."""
        if word.alphabet != self.presentation.alphabet:
            raise MagnusError("word not over the presentation alphabet")
        j = 0
        u = ()
        for x in word.letters:
            g = abs(x) - 1
            e = 1 if x > 0 else -1
            if g == self.t:
                j += e
                u = sub_shift(u, -e)
            else:
                u = sub_mul(u, ((g, 0, e),))
        return j, self.rebase(u)

    def is_trivial(self, word):
        j, u = self.normal_form(word)
        return j == 0 and not u

    def equal(self, u, v):
        return self.is_trivial(u * ~v)

    def shift_to_basis(self, triples, d):
        """Kernel word conjugated by stable^d, rewritten to the basis."""
        return self.rebase(sub_shift(triples, d))

    def format(self, triples):
        return format_subscripted(self.presentation.alphabet, triples)


def fbc_normal_form(presentation, stable, word, gen=None):
    engine = FbcGroup(presentation, stable, gen)
    return engine.normal_form(word)


def substitute_generator(presentation, gen, new_name, expression):
    """Replace a generator by a new one through a change of basis.

    `expression` is a word over the renamed alphabet giving the old
    generator in terms of the new ones.  Returns the transformed
    presentation and the homomorphism carrying old words to new ones.
    """
    old = presentation.alphabet
    if gen not in old:
        raise WordError(f"unknown generator {gen!r}")
    new_names = [new_name if nm == gen else nm for nm in old.names]
    new_alphabet = Alphabet(new_names)
    if isinstance(expression, str):
        expression = Word.parse(new_alphabet, expression)
    if expression.alphabet != new_alphabet:
        raise WordError("expression must be over the renamed alphabet")
    images = []
    for nm in old.names:
        if nm == gen:
            images.append(expression)
        else:
            images.append(Word(new_alphabet, (new_alphabet.letter(nm),)))
    forward = GroupHom(old, new_alphabet, images)
    new_pres = Presentation(new_alphabet, [forward(r) for r in presentation.relators])
    return new_pres, forward
