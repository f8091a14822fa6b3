"""Graph and automaton machinery over free groups.

Two engines live here:

* `StallingsGraph` decides membership in a finitely generated subgroup of a
  free group and produces witnesses (an expression of the queried word as a
  product of the given generators and their inverses).  Witnesses come from
  replaying the fold history backwards.

* `SaturatedAcceptor` decides membership in a finitely generated submonoid
  of a free group via epsilon saturation of a weighted chain automaton, and
  returns the exact minimal number of factors plus a witness factorization.

Plus two combinatorial checks on literal letter sequences: `is_code`
(Sardinas-Patterson) and `no_cancellation`.
"""

import math

from submon.words import Word, WordError

BASE = 0


class FoldEvent:
    """One fold: `gone` merged into `kept`, forced by two (state, letter)
    edges out of `pivot_state` with letter `pivot_letter`."""

    __slots__ = ("kept", "gone", "pivot_state", "pivot_letter", "edges_before")

    def __init__(self, kept, gone, pivot_state, pivot_letter, edges_before):
        self.kept = kept
        self.gone = gone
        self.pivot_state = pivot_state
        self.pivot_letter = pivot_letter
        self.edges_before = edges_before


def _symmetric(p, x, q):
    return (q, -x, p)


class StallingsGraph:
    """Folded based graph for a finitely generated subgroup of a free group."""

    def __init__(self, alphabet, generators):
        self.alphabet = alphabet
        self.generators = tuple(w.free_reduce() for w in generators)
        for w in self.generators:
            if w.alphabet != alphabet:
                raise WordError(f"generator {w!r} not over {alphabet!r}")
        # petals: (original generator index, word); empty generators carry
        # no petal but keep their index in self.generators
        self.petals = [(i, w) for i, w in enumerate(self.generators) if w]
        edges = set()
        self._petal_of = {}
        next_state = 1
        for pid, (_, w) in enumerate(self.petals):
            states = [BASE]
            for _ in range(len(w) - 1):
                states.append(next_state)
                next_state += 1
            states.append(BASE)
            for j, x in enumerate(w.letters):
                e = (states[j], x, states[j + 1])
                edges.add(e)
                edges.add(_symmetric(*e))
                self._petal_of[e] = pid
                self._petal_of[_symmetric(*e)] = pid
        self.history = []
        self.edges = self._fold(edges)
        self._out = {}
        for p, x, q in self.edges:
            self._out[(p, x)] = q

    def _fold(self, edges):
        while True:
            targets = {}
            pivot = None
            for p, x, q in sorted(edges):
                key = (p, x)
                if key in targets and targets[key] != q:
                    pivot = (p, x, targets[key], q)
                    break
                targets[key] = q
            if pivot is None:
                return edges
            p, x, q1, q2 = pivot
            kept, gone = min(q1, q2), max(q1, q2)
            self.history.append(FoldEvent(kept, gone, p, x, frozenset(edges)))
            rn = lambda s: kept if s == gone else s
            edges = {(rn(a), y, rn(b)) for a, y, b in edges}

    @property
    def states(self):
        found = {BASE}
        for p, _, q in self.edges:
            found.add(p)
            found.add(q)
        return found

    @property
    def rank(self):
        positive = sum(1 for _, x, _ in self.edges if x > 0)
        return positive - len(self.states) + 1

    def trace(self, word):
        """Follow the reduced word from the base; None if a step is missing."""
        state = BASE
        for x in word.free_reduce().letters:
            state = self._out.get((state, x))
            if state is None:
                return None
        return state

    def contains(self, word):
        return self.trace(word) == BASE

    def witness(self, word):
        """Express word as a product of generators and inverses.

        Returns a list of nonzero signed integers, +(-)(i+1) meaning
        generators[i] (its inverse), or None when word is not in the
        subgroup.  The empty list means the trivial word.
        """
        red = word.free_reduce()
        state = BASE
        path = []
        for x in red.letters:
            nxt = self._out.get((state, x))
            if nxt is None:
                return None
            path.append((state, x, nxt))
            state = nxt
        if state != BASE:
            return None
        for event in reversed(self.history):
            path = self._lift(path, event)
        return self._read_flower(path, red)

    def _lift(self, path, event):
        before = event.edges_before
        kept, gone = event.kept, event.gone
        z, x0 = event.pivot_state, event.pivot_letter

        def bridge(a, b):
            # connect kept and gone through the pivot edges
            if a == kept:
                return [(kept, -x0, z), (z, x0, gone)]
            return [(gone, -x0, z), (z, x0, kept)]

        lifted = []
        for p, x, q in path:
            cand_p = (p,) if p != kept else (kept, gone)
            cand_q = (q,) if q != kept else (kept, gone)
            choice = None
            for a in cand_p:
                for b in cand_q:
                    if (a, x, b) in before:
                        choice = (a, x, b)
                        break
                if choice:
                    break
            if choice is None:
                raise AssertionError("fold lifting lost an edge")
            lifted.append(choice)
        fixed = []
        at = BASE
        for step in lifted:
            if step[0] != at:
                fixed.extend(bridge(at, step[0]))
            fixed.append(step)
            at = step[2]
        if at != BASE:
            fixed.extend(bridge(at, BASE))
        return _reduce_path(fixed)

    def _read_flower(self, path, red):
        letters = []
        i = 0
        while i < len(path):
            pid = self._petal_of[path[i]]
            gen_index, w = self.petals[pid]
            seg = path[i:i + len(w)]
            got = tuple(s[1] for s in seg)
            if got == w.letters:
                letters.append(gen_index + 1)
            elif got == tuple((~w).letters):
                letters.append(-(gen_index + 1))
            else:
                raise AssertionError("flower path does not spell a petal")
            i += len(w)
        check = Word(self.alphabet, ())
        for s in letters:
            g = self.generators[abs(s) - 1]
            check = check * (g if s > 0 else ~g)
        if check != red:
            raise AssertionError("witness product mismatch")
        return letters


def _reduce_path(path):
    out = []
    for step in path:
        if out and out[-1] == _symmetric(*step):
            out.pop()
        else:
            out.append(step)
    return out


def build_subgroup_graph(alphabet, generators):
    return StallingsGraph(alphabet, generators)


def subgroup_contains(graph, word):
    """(member, witness) for the subgroup generated by graph.generators."""
    w = graph.witness(word)
    return (w is not None), w


INF = math.inf


class SaturatedAcceptor:
    """Weighted epsilon-saturated acceptor for Mon<generators> in a free group.

    Built once per generating set; answers membership, exact minimal factor
    count, and an explicit factorization for reduced query words.
    """

    def __init__(self, alphabet, generators):
        self.alphabet = alphabet
        self.generators = tuple(w.free_reduce() for w in generators)
        for w in self.generators:
            if w.alphabet != alphabet:
                raise WordError(f"generator {w!r} not over {alphabet!r}")
        self.chains = [(i, w) for i, w in enumerate(self.generators) if w]
        self.edges = []
        n_states = 1
        for cid, (_, w) in enumerate(self.chains):
            states = [BASE]
            for _ in range(len(w) - 1):
                states.append(n_states)
                n_states += 1
            states.append(BASE)
            for j, x in enumerate(w.letters):
                cost = 1 if j == 0 else 0
                self.edges.append((states[j], x, states[j + 1], cost, cid))
        self.n_states = n_states
        self._by_letter = {}
        for eid, (p, x, q, cost, cid) in enumerate(self.edges):
            self._by_letter.setdefault(x, []).append(eid)
        self._saturate()

    def _saturate(self):
        n = self.n_states
        eps = [[INF] * n for _ in range(n)]
        back = [[None] * n for _ in range(n)]
        epoch = [[-1] * n for _ in range(n)]
        for p in range(n):
            eps[p][p] = 0
            back[p][p] = ("R",)
        clock = 0
        pairs = [
            (e1, e2)
            for e1, (p1, x1, q1, c1, _) in enumerate(self.edges)
            for e2 in self._by_letter.get(-x1, ())
        ]
        changed = True
        while changed:
            changed = False
            for r in range(n):
                er = eps[r]
                for p in range(n):
                    d = eps[p][r]
                    if d == INF:
                        continue
                    row = eps[p]
                    for q in range(n):
                        v = d + er[q]
                        if v < row[q]:
                            row[q] = v
                            back[p][q] = ("T", r)
                            clock += 1
                            epoch[p][q] = clock
                            changed = True
            for e1, e2 in pairs:
                p, x, r, c1, _ = self.edges[e1]
                s, _, q, c2, _ = self.edges[e2]
                if eps[r][s] == INF:
                    continue
                v = c1 + eps[r][s] + c2
                if v < eps[p][q]:
                    eps[p][q] = v
                    back[p][q] = ("S", e1, r, s, e2)
                    clock += 1
                    epoch[p][q] = clock
                    changed = True
        self.eps = eps
        self._back = back
        self._eps_steps = {}

    def _expand_eps(self, p, q):
        """Edge-id path from p to q with freely trivial label, cost eps[p][q].

        Backpointer epochs strictly decrease into sub-derivations, so the
        recursion terminates; results are memoized per pair.
        """
        key = (p, q)
        if key in self._eps_steps:
            return self._eps_steps[key]
        bp = self._back[p][q]
        if bp is None:
            raise AssertionError("expanding an unreachable epsilon pair")
        if bp[0] == "R":
            steps = []
        elif bp[0] == "T":
            r = bp[1]
            steps = self._expand_eps(p, r) + self._expand_eps(r, q)
        else:
            _, e1, r, s, e2 = bp
            steps = [e1] + self._expand_eps(r, s) + [e2]
        self._eps_steps[key] = steps
        return steps

    def _query(self, word):
        red = word.free_reduce()
        n = self.n_states
        dist = [self.eps[BASE][q] for q in range(n)]
        parents = []
        for x in red.letters:
            new = [INF] * n
            par = [None] * n
            for eid in self._by_letter.get(x, ()):
                p, _, r, c, _ = self.edges[eid]
                if dist[p] == INF:
                    continue
                base_cost = dist[p] + c
                row = self.eps[r]
                for q in range(n):
                    v = base_cost + row[q]
                    if v < new[q]:
                        new[q] = v
                        par[q] = (p, eid, r)
            parents.append(par)
            dist = new
        return red, dist, parents

    def factor_count(self, word):
        """Minimal number of generator factors, or None if not a member."""
        _, dist, _ = self._query(word)
        return None if dist[BASE] == INF else int(dist[BASE])

    def member(self, word):
        return self.factor_count(word) is not None

    def witness(self, word):
        """Factorization as a list of generator indices, or None.

        The product generators[i0] * generators[i1] * ... freely reduces to
        the query word; the list length is the minimal factor count.
        """
        red, dist, parents = self._query(word)
        if dist[BASE] == INF:
            return None
        # walk parents backwards collecting edge-id steps
        segments = []
        q = BASE
        for i in range(len(red.letters) - 1, -1, -1):
            p, eid, r = parents[i][q]
            segments.append((r, q, eid, p))
            q = p
        steps = self._expand_eps(BASE, q)
        for r, tail, eid, p in reversed(segments):
            steps = steps + [eid] + self._expand_eps(r, tail)
        factors = []
        label = []
        for eid in steps:
            p, x, r, c, cid = self.edges[eid]
            label.append(x)
            if c == 1:
                factors.append(self.chains[cid][0])
        if Word(self.alphabet, label).free_reduce() != red:
            raise AssertionError("witness path label mismatch")
        check = Word(self.alphabet, ())
        for i in factors:
            check = check * self.generators[i]
        if check != red:
            raise AssertionError("witness factorization mismatch")
        return factors


def benois_member(alphabet, generators, word):
    """(member, witness factor index list) for Mon<generators>."""
    acc = SaturatedAcceptor(alphabet, generators)
    w = acc.witness(word)
    return (w is not None), w


def min_generator_length(alphabet, generators, word):
    return SaturatedAcceptor(alphabet, generators).factor_count(word)


def is_code(words):
    """Sardinas-Patterson on literal letter sequences.

    True when every concatenation of the given sequences has a unique
    factorization.  A set containing the empty sequence is never a code.
    """
    seqs = {tuple(w) for w in words}
    if () in seqs:
        return False

    def dangling(u, v):
        # remainder of v after prefix u, or None
        if len(u) <= len(v) and v[: len(u)] == u:
            return v[len(u):]
        return None

    current = set()
    for u in seqs:
        for v in seqs:
            if u != v:
                d = dangling(u, v)
                if d is not None:
                    current.add(d)
    seen = set(current)
    while current:
        nxt = set()
        for u in current:
            for v in seqs:
                for d in (dangling(u, v), dangling(v, u)):
                    if d == ():
                        return False
                    if d is not None and d not in seen:
                        seen.add(d)
                        nxt.add(d)
        current = nxt
    return True


def no_cancellation(words):
    """True when no ordered pair of sequences cancels at the seam."""
    seqs = [tuple(w) for w in words if len(tuple(w)) > 0]
    for u in seqs:
        for v in seqs:
            if u[-1] == -v[0]:
                return False
    return True
