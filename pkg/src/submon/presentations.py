"""Built-in presentations, prefix generating sets, collapse maps onto free
groups, and word-problem engine selection."""

import re

from submon.words import Alphabet, Word, Presentation, GroupHom, WordError
from submon.rewrite import DehnEngine, DehnError
from submon.magnus import BrittonEngine, MagnusError, substitute_generator


def surface_presentation(g):
    """Orientable genus-g group; genus 2 keeps the short letters a, b, c, d."""
    if g < 2:
        raise WordError(f"orientable genus must be >= 2, got {g}")
    if g == 2:
        alphabet = Alphabet(["a", "b", "c", "d"])
        return Presentation(alphabet, [Word.parse(alphabet, "abABcdCD")])
    names = []
    for i in range(1, g + 1):
        names.extend([f"a{i}", f"b{i}"])
    alphabet = Alphabet(names)
    letters = []
    for i in range(g):
        a = alphabet.letter(f"a{i + 1}")
        b = alphabet.letter(f"b{i + 1}")
        letters.extend([a, b, -a, -b])
    return Presentation(alphabet, [Word(alphabet, letters)])


def nonorientable_presentation(g):
    """Non-orientable genus-g group; genus 2 keeps the letters c, d."""
    if g < 2:
        raise WordError(f"non-orientable genus must be >= 2, got {g}")
    if g == 2:
        alphabet = Alphabet(["c", "d"])
        return Presentation(alphabet, [Word.parse(alphabet, "ccdd")])
    alphabet = Alphabet([f"a{i}" for i in range(1, g + 1)])
    letters = []
    for i in range(1, g + 1):
        x = alphabet.letter(f"a{i}")
        letters.extend([x, x])
    return Presentation(alphabet, [Word(alphabet, letters)])


def bs_presentation(m, n):
    """The group with one stable letter conjugating a^m to a^n."""
    if m == 0 or n == 0:
        raise WordError("exponents must be nonzero")
    alphabet = Alphabet(["a", "t"])
    a = Word.parse(alphabet, "a")
    t = Word.parse(alphabet, "t")
    relator = t * a ** m * ~t * a ** -n
    return Presentation(alphabet, [relator])


def burns_presentation():
    alphabet = Alphabet(["a", "t"])
    return Presentation(alphabet, [Word.parse(alphabet, "tatATaTA")])


_BS_RE = re.compile(r"^BS\s*[\s(:,]\s*(-?\d+)\s*[\s,:]\s*(-?\d+)\s*\)?$", re.I)


def builtin(name):
    """Look up a named presentation: S2, S3, ..., N2, ..., BURNS, BS 2 3."""
    text = name.strip()
    mo = _BS_RE.match(text)
    if mo:
        return bs_presentation(int(mo.group(1)), int(mo.group(2)))
    key = text.upper()
    if key == "BURNS":
        return burns_presentation()
    mo = re.match(r"^([SN])(\d+)$", key)
    if mo:
        g = int(mo.group(2))
        if mo.group(1) == "S":
            return surface_presentation(g)
        return nonorientable_presentation(g)
    raise WordError(f"unknown builtin presentation {name!r}")


def prefix_generators(g, orientable):
    """The standard prefix generating set of the genus-g surface relator.

    Genus-2 orientable uses the symmetric eight-word spelling (the last four
    generate the same monoid as the remaining literal prefixes).
    """
    if orientable and g == 2:
        pres = surface_presentation(2)
        texts = ["a", "ab", "abA", "abAB", "d", "dc", "dcD", "dcDC"]
        return pres, [Word.parse(pres.alphabet, t) for t in texts]
    pres = surface_presentation(g) if orientable else nonorientable_presentation(g)
    rel = pres.relator
    words = [Word(pres.alphabet, rel.letters[:k]) for k in range(1, len(rel))]
    return pres, words


_XY = Alphabet(["x", "y"])
_X1 = Alphabet(["x"])


def s2_retraction():
    """Collapse of the genus-2 group onto the free group on x, y."""
    pres = surface_presentation(2)
    x = Word.parse(_XY, "x")
    conj = Word.parse(_XY, "x' y x")
    return GroupHom(pres.alphabet, _XY, [x, conj, conj, x])


def n2_functional_hom():
    """Collapse of the non-orientable genus-2 group onto the integers."""
    pres = nonorientable_presentation(2)
    return GroupHom.from_dict(pres.alphabet, _X1, {"c": "x", "d": "x'"})


def collapse_hom(presentation):
    """Free-group collapse for a recognized standard surface presentation,
    None otherwise."""
    alphabet = presentation.alphabet
    k = len(alphabet)
    if k % 2 == 0 and k >= 4:
        g = k // 2
        std = surface_presentation(g)
        if _same_presentation(presentation, std):
            rho = s2_retraction()
            if g == 2:
                return rho
            phi = GroupHom.from_dict(
                alphabet, surface_presentation(2).alphabet,
                {"a1": "a", "b1": "b", f"a{g}": "c", f"b{g}": "d"})
            return rho.compose(phi)
    if k >= 2:
        g = k
        try:
            std = nonorientable_presentation(g)
        except WordError:
            std = None
        if std is not None and _same_presentation(presentation, std):
            sigma = n2_functional_hom()
            if g == 2:
                return sigma
            phi = GroupHom.from_dict(
                alphabet, nonorientable_presentation(2).alphabet,
                {"a1": "c", f"a{g}": "d"})
            return sigma.compose(phi)
    return None


def _same_presentation(p, q):
    return (p.alphabet == q.alphabet
            and tuple(r.letters for r in p.relators)
            == tuple(r.letters for r in q.relators))


class EngineInfo:
    """Uniform word-problem interface: a name, an implementation, and an
    optional translation applied to queries first."""

    def __init__(self, name, impl, translate=None):
        self.name = name
        self._impl = impl
        self._translate = translate

    def is_trivial(self, word):
        if self._translate is not None:
            word = self._translate(word)
        return self._impl.is_trivial(word)

    def equal(self, u, v):
        return self.is_trivial(u * ~v)

    def __repr__(self):
        return f"EngineInfo({self.name})"


class BsEngine:
    """Pinch-stack word problem for the two-generator one-stable-letter
    presentation t a^m t^-1 = a^n; sound and complete for all nonzero m, n."""

    def __init__(self, m, n, alphabet=None):
        if m == 0 or n == 0:
            raise WordError("exponents must be nonzero")
        self.m = m
        self.n = n
        self.alphabet = alphabet if alphabet is not None else Alphabet(["a", "t"])
        self.a = self.alphabet.index("a")
        self.t = self.alphabet.index("t")

    def _pinch(self, word):
        # stack items: ("t", +-1) or ("a", nonzero count)
        stack = []

        def push_a(k):
            if stack and stack[-1][0] == "a":
                k += stack.pop()[1]
            if k:
                stack.append(("a", k))

        for x in word.free_reduce().letters:
            g = abs(x) - 1
            e = 1 if x > 0 else -1
            if g == self.a:
                push_a(e)
                continue
            k = 0
            if stack and stack[-1][0] == "a":
                k = stack[-1][1]
            below = stack[-2] if k and len(stack) >= 2 else (stack[-1] if not k and stack else None)
            if below is not None and below[0] == "t" and below[1] == -e:
                div, mul = (self.m, self.n) if below[1] > 0 else (self.n, self.m)
                if k % div == 0:
                    if k:
                        stack.pop()
                    stack.pop()
                    push_a(k // div * mul)
                    continue
            stack.append(("t", e))
        return stack

    def is_trivial(self, word):
        return not self._pinch(word)

    def base_power(self, word):
        """k when the element equals a^k; None when it is not in the base."""
        stack = self._pinch(word)
        if not stack:
            return 0
        if len(stack) == 1 and stack[0][0] == "a":
            return stack[0][1]
        return None

    def equal(self, u, v):
        return self.is_trivial(u * ~v)


def parse_bs_relator(presentation):
    """(m, n) when the one relator spells t a^m t^-1 a^-n around a stable
    letter occurring once with each sign; None otherwise."""
    if not presentation.is_one_relator or len(presentation.alphabet) != 2:
        return None
    core, _ = presentation.relator.cyclic_reduce()
    letters = list(core.letters)
    for t_idx in range(2):
        t_letter = t_idx + 1
        pos_plus = [i for i, x in enumerate(letters) if x == t_letter]
        pos_minus = [i for i, x in enumerate(letters) if x == -t_letter]
        if len(pos_plus) != 1 or len(pos_minus) != 1:
            continue
        rot = letters[pos_plus[0]:] + letters[:pos_plus[0]]
        j = rot.index(-t_letter)
        mid, tail = rot[1:j], rot[j + 1:]
        a_letter = (2 - t_idx)
        if any(abs(x) != a_letter for x in mid + tail):
            continue
        if mid and len({x for x in mid}) != 1:
            continue
        if tail and len({x for x in tail}) != 1:
            continue
        if not mid or not tail:
            continue
        m = len(mid) * (1 if mid[0] > 0 else -1)
        n = -len(tail) * (1 if tail[0] > 0 else -1)
        if presentation.alphabet.names[t_idx] == "t":
            return m, n
    return None


def substituted_engine(presentation):
    """Britton engine reached through the linear change of generators that
    gives a recognized non-orientable presentation a zero-sum stable letter."""
    k = len(presentation.alphabet)
    try:
        std = nonorientable_presentation(k)
    except WordError:
        return None
    if not _same_presentation(presentation, std):
        return None
    names = presentation.alphabet.names
    stable, replaced = names[0], names[1]
    fresh = "x" if "x" not in names else "y"
    expression = f"{fresh} {stable}'"
    new_pres, forward = substitute_generator(presentation, replaced, fresh, expression)
    inner = BrittonEngine(new_pres, stable)
    return EngineInfo("britton+substitution", inner, translate=forward.apply)


class _FreeEngine:
    def is_trivial(self, word):
        return not word.free_reduce()


def select_engine(presentation):
    """Best available word-problem engine for a presentation, or None."""
    if not presentation.relators:
        return EngineInfo("free", _FreeEngine())
    try:
        return EngineInfo("dehn", DehnEngine(presentation))
    except (DehnError, WordError):
        pass
    for stable in presentation.alphabet.names:
        try:
            return EngineInfo("britton", BrittonEngine(presentation, stable))
        except (MagnusError, WordError):
            continue
    bs = parse_bs_relator(presentation)
    if bs is not None:
        return EngineInfo("bs-pinch", BsEngine(bs[0], bs[1], presentation.alphabet))
    sub = substituted_engine(presentation)
    if sub is not None:
        return sub
    return None
