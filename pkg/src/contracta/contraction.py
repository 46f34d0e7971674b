"""Section-closure automata, exact equality by bisimulation, nuclei.

Equality of tree automorphisms is decided on the finite section closure of a
word: two states are equal iff they are bisimilar (same root permutation,
pairwise bisimilar sections).  This is exact whenever the closure is finite
within budget; blow-ups surface as BudgetExceeded and never assert a negative.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import BudgetExceeded
from .words import Word, concat, free_reduce, invert, shortlex_key


@dataclass(frozen=True)
class Budget:
    max_states: int = 10_000
    max_depth: int = 64
    max_word_length: int = 4_096

    def __post_init__(self):
        if min(self.max_states, self.max_depth, self.max_word_length) <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = Budget()


@dataclass
class SectionAutomaton:
    """Finite section closure of a set of words, with bisimulation classes.

    States are tagged by freely reduced representative words; transitions are
    total; the identity state is the empty word and carries self-loops.
    """

    rec: object
    states: list  # representative words
    trans: list  # per state: tuple of successor ids, one per letter
    perms: list  # per state: root permutation
    index: dict = field(repr=False)
    identity_state: int = 0
    classes: list = None  # bisimulation class id per state

    def state_of(self, word):
        return self.index.get(free_reduce(word))

    def same_class(self, i: int, j: int) -> bool:
        return self.classes[i] == self.classes[j]

    def is_identity(self, i: int) -> bool:
        return self.classes[i] == self.classes[self.identity_state]

    def class_representative(self, cls: int) -> Word:
        return min(
            (self.states[i] for i in range(len(self.states)) if self.classes[i] == cls),
            key=shortlex_key,
        )


def section_closure(rec, seeds, budget: Budget = DEFAULT_BUDGET) -> SectionAutomaton:
    """Smallest section-closed automaton containing the seeds (plus identity)."""
    d = rec.degree
    states, trans, perms = [], [], []
    index = {}
    queue = deque()

    def add(word, depth):
        word = free_reduce(word)
        if word in index:
            return index[word]
        if len(word) > budget.max_word_length:
            raise BudgetExceeded(
                f"section word of length {len(word)} exceeds cap "
                f"{budget.max_word_length}",
                frontier=word,
            )
        if len(states) >= budget.max_states:
            raise BudgetExceeded(
                f"section closure exceeds {budget.max_states} states", frontier=word
            )
        i = len(states)
        index[word] = i
        states.append(word)
        trans.append(None)
        perms.append(rec.word_perm(word))
        queue.append((i, depth))
        return i

    add((), 0)
    for s in seeds:
        add(s, 0)
    while queue:
        i, depth = queue.popleft()
        if depth > budget.max_depth:
            raise BudgetExceeded(
                f"section closure deeper than {budget.max_depth}",
                frontier=states[i],
            )
        trans[i] = tuple(add(rec.section(states[i], (x,)), depth + 1) for x in range(d))
    auto = SectionAutomaton(rec, states, trans, perms, index)
    auto.classes = _bisimulation_classes(auto)
    return auto


def _bisimulation_classes(auto: SectionAutomaton):
    """Coarsest partition refining root-permutation labels and respecting
    transitions; equal class ids = bisimilar = equal tree automorphisms."""
    n = len(auto.states)
    labels = {}
    cls = [labels.setdefault(auto.perms[i], len(labels)) for i in range(n)]
    while True:
        sigs = {}
        new = [0] * n
        for i in range(n):
            sig = (cls[i], tuple(cls[j] for j in auto.trans[i]))
            new[i] = sigs.setdefault(sig, len(sigs))
        if new == cls:
            return cls
        cls = new


def are_equal(rec, g, h, budget: Budget = DEFAULT_BUDGET) -> bool:
    w = concat(free_reduce(g), invert(free_reduce(h)))
    if not w:
        return True
    auto = section_closure(rec, [w], budget)
    return auto.is_identity(auto.state_of(w))


def is_trivial(rec, g, budget: Budget = DEFAULT_BUDGET) -> bool:
    return are_equal(rec, g, (), budget)


@dataclass
class Nucleus:
    """The finite recurrent section core of a contracting recursion."""

    rec: object
    elements: tuple  # canonical representative words, shortlex-sorted
    sections: tuple  # element x letter -> element index
    perms: tuple
    inverses: tuple  # element -> index of its inverse
    identity: int
    products: dict  # (i, j) -> k for the products that land in the nucleus

    def __len__(self):
        return len(self.elements)

    def class_of(self, word, budget: Budget = DEFAULT_BUDGET):
        """Index of the nucleus element equal to `word`, or None."""
        word = free_reduce(word)
        auto = section_closure(self.rec, [word, *self.elements], budget)
        target = auto.classes[auto.state_of(word)]
        for i, e in enumerate(self.elements):
            if auto.classes[auto.state_of(e)] == target:
                return i
        return None


def _quotient(auto: SectionAutomaton):
    """Collapse bisimulation classes: (reps, trans, perms, class->rep word)."""
    ncls = max(auto.classes) + 1
    rep_state = [None] * ncls
    for i, c in enumerate(auto.classes):
        if rep_state[c] is None or shortlex_key(auto.states[i]) < shortlex_key(
            auto.states[rep_state[c]]
        ):
            rep_state[c] = i
    trans = [
        tuple(auto.classes[t] for t in auto.trans[rep_state[c]]) for c in range(ncls)
    ]
    perms = [auto.perms[rep_state[c]] for c in range(ncls)]
    reps = [auto.states[rep_state[c]] for c in range(ncls)]
    return reps, trans, perms


def _strongly_connected_components(trans):
    """Tarjan's algorithm, iterative; returns a list of components."""
    n = len(trans)
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    components = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            recurse = False
            succs = trans[node]
            for i in range(pi, len(succs)):
                nxt = succs[i]
                if index[nxt] is None:
                    work[-1] = (node, i + 1)
                    work.append((nxt, 0))
                    recurse = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if recurse:
                continue
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == node:
                        break
                components.append(comp)
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def _recurrent_classes(trans):
    """Classes lying on a cycle of the section graph, or reachable from one."""
    on_cycle = set()
    for comp in _strongly_connected_components(trans):
        if len(comp) > 1 or comp[0] in trans[comp[0]]:
            on_cycle.update(comp)
    reach = set(on_cycle)
    queue = deque(on_cycle)
    while queue:
        c = queue.popleft()
        for nxt in trans[c]:
            if nxt not in reach:
                reach.add(nxt)
                queue.append(nxt)
    return reach


def _same_elements(rec, first, second, budget) -> bool:
    if first == second:
        return True
    auto = section_closure(rec, list(first | second), budget)

    def classes_of(ws):
        return {auto.classes[auto.state_of(w)] for w in ws}

    return classes_of(first) == classes_of(second)


def nucleus(rec, budget: Budget = DEFAULT_BUDGET) -> Nucleus:
    """Fixed-point iteration: closure of pairwise products, recurrent trim,
    repeat until the candidate set stabilizes (as a set of group elements)."""
    cand = {()}
    for i in range(1, len(rec.gens) + 1):
        cand.add(free_reduce((i,)))
        cand.add(free_reduce((-i,)))
    for _ in range(64):
        seeds = set(cand)
        for u in cand:
            for v in cand:
                seeds.add(concat(u, v))
        auto = section_closure(rec, seeds, budget)
        reps, trans, _ = _quotient(auto)
        recurrent = _recurrent_classes(trans)
        new_cand = {reps[c] for c in recurrent} | {()}
        new_cand |= {free_reduce(invert(w)) for w in new_cand}
        if _same_elements(rec, new_cand, cand, budget):
            return _build_nucleus(rec, auto, recurrent, budget)
        cand = new_cand
    raise BudgetExceeded("nucleus iteration did not stabilize in 64 rounds")


def _build_nucleus(rec, auto, recurrent, budget):
    reps, trans, perms = _quotient(auto)
    order = sorted(recurrent, key=lambda c: shortlex_key(reps[c]))
    pos = {c: i for i, c in enumerate(order)}
    elements = tuple(reps[c] for c in order)
    sections = tuple(tuple(pos[t] for t in trans[c]) for c in order)
    nperms = tuple(perms[c] for c in order)
    identity = pos[auto.classes[auto.identity_state]]

    # inverses: the closure of N u N^-1 identifies each inverse's class
    inv_auto = section_closure(
        rec, list(elements) + [invert(e) for e in elements], budget
    )
    cls_to_pos = {}
    for i, e in enumerate(elements):
        cls_to_pos[inv_auto.classes[inv_auto.state_of(e)]] = i
    inverses = []
    for e in elements:
        c = inv_auto.classes[inv_auto.state_of(invert(e))]
        if c not in cls_to_pos:
            raise BudgetExceeded(f"nucleus not closed under inverses at {e}")
        inverses.append(cls_to_pos[c])

    products = {}
    prod_auto = section_closure(
        rec,
        list(elements) + [concat(u, v) for u in elements for v in elements],
        budget,
    )
    cls_to_pos = {}
    for i, e in enumerate(elements):
        cls_to_pos[prod_auto.classes[prod_auto.state_of(e)]] = i
    for i, u in enumerate(elements):
        for j, v in enumerate(elements):
            c = prod_auto.classes[prod_auto.state_of(concat(u, v))]
            if c in cls_to_pos:
                products[(i, j)] = cls_to_pos[c]
    return Nucleus(rec, elements, sections, nperms, tuple(inverses), identity, products)


def is_contracting(rec, budget: Budget = DEFAULT_BUDGET) -> bool:
    """True when the nucleus converged and all nucleus-pair products contract
    back into it within the depth budget.  Never returns False."""
    nuc = nucleus(rec, budget)
    elements = set(nuc.elements)
    auto = section_closure(
        rec,
        list(nuc.elements) + [concat(u, v) for u in nuc.elements for v in nuc.elements],
        budget,
    )
    nucleus_classes = {auto.classes[auto.state_of(e)] for e in elements}
    # depth until every path from a state stays inside nucleus classes
    depth = {}

    def settle(state, stack):
        if auto.classes[state] in nucleus_classes:
            return 0
        if state in depth:
            return depth[state]
        if state in stack or len(stack) > budget.max_depth:
            raise BudgetExceeded(
                "products do not contract into the nucleus within "
                f"depth {budget.max_depth}",
                frontier=auto.states[state],
            )
        stack.add(state)
        d = 1 + max(settle(t, stack) for t in auto.trans[state])
        stack.remove(state)
        depth[state] = d
        return d

    for i in range(len(auto.states)):
        settle(i, set())
    return True


@dataclass
class CounterexampleUnknown:
    """Unresolved (letter, nucleus element) pairs from a bounded witness search."""

    pairs: list
    search_radius: int

    def __bool__(self):
        return False


def is_self_replicating_level1(
    rec, nuc: Nucleus, budget: Budget = DEFAULT_BUDGET, search_radius: int = 6
):
    """Bounded BFS for witnesses h with act(h, x) = x and section(h, x) = n.

    Returns True when a witness exists for every (x, n); otherwise a
    CounterexampleUnknown listing the unresolved pairs (no negative claim).
    """
    d = rec.degree
    pending = {(x, i) for x in range(d) for i in range(len(nuc.elements))}
    # identity witnesses: the empty word fixes x with trivial section
    pending -= {(x, nuc.identity) for x in range(d)}

    letters = [i for i in range(1, len(rec.gens) + 1)]
    letters += [-i for i in letters]
    seen = {()}
    frontier = [()]
    class_cache = {}

    def section_class(word):
        if word not in class_cache:
            try:
                class_cache[word] = nuc.class_of(word, budget)
            except BudgetExceeded:
                # unclassifiable within budget: treat as "not a witness"
                class_cache[word] = None
        return class_cache[word]

    for _ in range(search_radius):
        if not pending:
            break
        nxt = []
        for w in frontier:
            for s in letters:
                h = concat(w, (s,))
                if h in seen:
                    continue
                seen.add(h)
                nxt.append(h)
                tau = rec.word_perm(h)
                for x in range(d):
                    if tau[x] != x or not any(p[0] == x for p in pending):
                        continue
                    cls = section_class(rec.section(h, (x,)))
                    if cls is not None:
                        pending.discard((x, cls))
        frontier = nxt
    if pending:
        return CounterexampleUnknown(sorted(pending), search_radius)
    return True
