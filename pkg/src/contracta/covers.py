"""Finitely presented covers built on the nucleus, and the kernel chain.

`universal_cover` turns a computed nucleus into a presentation whose
generators are nucleus elements and whose relators are all trivial words of
length <= 3, together with the induced wreath recursion on those generators.
`kernel_member` decides membership in the level-n kernel of the induced
recursion, which is exactly what defines the finitely presented quotients
approximating the covered group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import contraction, rewriting
from .contraction import Budget, DEFAULT_BUDGET, Nucleus
from .errors import BudgetExceeded
from .recursion import WreathRecursion, perm_identity
from .rewriting import Presentation, RewriteSystem, normal_form
from .words import Word, concat, format_word, free_reduce, invert, shortlex_key


@dataclass
class PruneEntry:
    element: Word  # representative word in the base group's generators
    reason: str  # "identity" | "inverse of <gen>" | "product <u>.<v>"
    replacement: Word  # equivalent word over the cover's generators


@dataclass
class CoverPresentation:
    nucleus: Nucleus
    presentation: Presentation
    gen_to_nucleus: dict  # cover generator name -> base-group word
    recursion: WreathRecursion  # induced recursion on the cover generators
    pruning: list  # PruneEntry records
    element_words: tuple = field(default=())  # nucleus index -> cover word

    @property
    def base_recursion(self):
        return self.nucleus.rec

    def to_base(self, word) -> Word:
        """Substitute nucleus representatives for cover letters."""
        out = ()
        for x in word:
            rep = self.gen_to_nucleus[self.presentation.gens[abs(x) - 1]]
            out = concat(out, rep if x > 0 else invert(rep))
        return out


def _fresh_names(nucleus, kept, base_gens):
    names = {}
    counter = 0
    for pos, idx in enumerate(kept):
        rep = nucleus.elements[idx]
        if len(rep) == 1 and rep[0] > 0:
            names[idx] = base_gens[rep[0] - 1]
        else:
            while True:
                cand = f"s{counter}"
                counter += 1
                if cand not in base_gens and cand not in names.values():
                    break
            names[idx] = cand
    return names


def universal_cover(
    nucleus: Nucleus, prune: bool = False, budget: Budget = DEFAULT_BUDGET
) -> CoverPresentation:
    """Presentation on the nucleus: one generator per element (identity and
    one of each inverse pair always dropped; products of two others dropped
    when `prune` is set), relators = every trivial word of length <= 3."""
    rec = nucleus.rec
    n = len(nucleus)
    identity = nucleus.identity

    kept = []
    inverse_partner_of = {}
    for i in range(n):
        if i == identity:
            continue
        j = nucleus.inverses[i]
        if j != i and j < i:
            inverse_partner_of[i] = j
            continue
        kept.append(i)

    pruning = []
    expressions = {}
    if prune:
        changed = True
        while changed:
            changed = False
            for k in sorted(kept, key=lambda i: shortlex_key(nucleus.elements[i]), reverse=True):
                available = []
                for m in kept:
                    if m == k:
                        continue
                    available.append(m)
                    if nucleus.inverses[m] != m:
                        available.append(nucleus.inverses[m])
                expr = next(
                    (
                        (i, j)
                        for i, j in product(available, repeat=2)
                        if nucleus.products.get((i, j)) == k
                    ),
                    None,
                )
                if expr is not None:
                    kept.remove(k)
                    expressions[k] = expr
                    changed = True
                    break

    names = _fresh_names(nucleus, kept, rec.gens)
    gens = tuple(names[idx] for idx in kept)
    letter = {idx: pos + 1 for pos, idx in enumerate(kept)}

    def element_word(idx, _seen=()):
        if idx in letter:
            return (letter[idx],)
        if idx == identity:
            return ()
        if idx in expressions:
            i, j = expressions[idx]
            return concat(element_word(idx=i), element_word(idx=j))
        partner = nucleus.inverses[idx]
        if idx in _seen:
            raise BudgetExceeded("cyclic pruning record")
        return invert(element_word(partner, _seen + (idx,)))

    element_words = tuple(element_word(i) for i in range(n))

    for i in range(n):
        if i == identity:
            pruning.append(PruneEntry(nucleus.elements[i], "identity", ()))
        elif i in inverse_partner_of:
            partner = inverse_partner_of[i]
            reason = (
                f"inverse of {names[partner]}"
                if partner in names
                else "inverse of a pruned element"
            )
            pruning.append(PruneEntry(nucleus.elements[i], reason, element_words[i]))
        elif i in expressions:
            u, v = expressions[i]
            factors = " . ".join(
                format_word(nucleus.elements[m], rec.gens) for m in (u, v)
            )
            pruning.append(
                PruneEntry(nucleus.elements[i], f"product {factors}", element_words[i])
            )

    # relators: all trivial signed words of length <= 3 over the kept letters,
    # first letter positive, deduplicated up to rotation and inversion
    letters = []
    for idx in kept:
        letters.append(letter[idx])
        if nucleus.inverses[idx] != idx:
            letters.append(-letter[idx])

    kept_by_letter = {letter[idx]: idx for idx in kept}

    def normalize_letter(x):
        # inverse letters of self-inverse elements fold back to positive
        idx = kept_by_letter[abs(x)]
        return abs(x) if x < 0 and nucleus.inverses[idx] == idx else x

    def dedup_key(w):
        inverse = tuple(normalize_letter(-x) for x in reversed(w))
        variants = []
        for v in (w, inverse):
            for r in range(len(v)):
                variants.append(v[r:] + v[:r])
        return min(variants, key=shortlex_key)

    relators = []
    seen_keys = set()
    base_words = {
        x: (
            nucleus.elements[kept_by_letter[abs(x)]]
            if x > 0
            else invert(nucleus.elements[kept_by_letter[abs(x)]])
        )
        for x in letters
    }
    for length in (1, 2, 3):
        for combo in product(letters, repeat=length):
            if combo[0] < 0:
                continue
            w = free_reduce(combo)
            if len(w) != length:
                continue
            key = dedup_key(w)
            if key in seen_keys:
                continue
            base = ()
            for x in w:
                base = concat(base, base_words[x])
            if contraction.is_trivial(rec, base, budget):
                seen_keys.add(key)
                relators.append(w)

    presentation = Presentation(gens, tuple(relators))
    sections = tuple(
        tuple(element_words[nucleus.sections[idx][x]] for x in range(rec.degree))
        for idx in kept
    )
    perms = tuple(nucleus.perms[idx] for idx in kept)
    induced = WreathRecursion(rec.degree, gens, sections, perms)
    gen_to_nucleus = {names[idx]: nucleus.elements[idx] for idx in kept}
    return CoverPresentation(
        nucleus, presentation, gen_to_nucleus, induced, pruning, element_words
    )


@dataclass
class StandardCoverResult:
    cover: CoverPresentation
    extra_relators: list  # E: words over cover generators, normal forms
    witnesses: dict  # (letter, nucleus index) -> cover word h with h_x = n_i
    exact: dict  # (letter, nucleus index) -> True when w(x, n) is trivial

    @property
    def already_self_replicating(self) -> bool:
        return not self.extra_relators


def standard_cover(
    cover: CoverPresentation,
    budget: Budget = DEFAULT_BUDGET,
    search_radius: int = 6,
    sys: RewriteSystem = None,
) -> StandardCoverResult:
    """Choose self-replication witnesses h(x, n) by shortest-word BFS (shortlex
    tie-break) and collect the section closure of the mismatch words w(x, n).

    Witnesses whose section equals the target generator in the cover's own
    rewriting normal form make w(x, n) trivial; when that happens for every
    pair, the extra relator set is empty and the standard cover coincides
    with the universal one.
    """
    if sys is None:
        sys = rewriting.complete(cover.presentation)
    if not sys.complete:
        raise BudgetExceeded("cover rewriting system did not complete")
    rec = cover.recursion
    nucleus = cover.nucleus
    d = rec.degree

    targets = {
        (x, i): normal_form(sys, cover.element_words[i])
        for x in range(d)
        for i in range(len(nucleus))
    }
    witnesses, exact = {}, {}

    # BFS over cover elements by rewriting normal form, shortlex order
    frontier = [()]
    seen = {()}
    letters = [i for i in range(1, len(rec.gens) + 1)]
    letters += [-i for i in letters]
    radius = 0
    while frontier and len(witnesses) < len(targets) and radius <= search_radius:
        for h in sorted(frontier, key=shortlex_key):
            tau = rec.word_perm(h)
            for x in range(d):
                if tau[x] != x:
                    continue
                sec = normal_form(sys, rec.section(h, (x,)))
                for i in range(len(nucleus)):
                    if (x, i) in witnesses:
                        continue
                    if sec == targets[(x, i)]:
                        witnesses[(x, i)] = h
                        exact[(x, i)] = True
        nxt = []
        for h in frontier:
            for s in letters:
                w = normal_form(sys, h + (s,))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        radius += 1

    # fallback: pi-level witnesses for pairs without an exact one
    extra = set()
    missing = [key for key in targets if key not in witnesses]
    if missing:
        elements = sorted(seen, key=shortlex_key)
        for x, i in missing:
            for h in elements:
                tau = rec.word_perm(h)
                if tau[x] != x:
                    continue
                w = normal_form(
                    sys, concat(rec.section(h, (x,)), invert(cover.element_words[i]))
                )
                base = cover.to_base(w)
                if contraction.is_trivial(cover.base_recursion, base, budget):
                    witnesses[(x, i)] = h
                    exact[(x, i)] = False
                    extra |= _section_closure_words(rec, sys, w, budget)
                    break
            else:
                raise BudgetExceeded(
                    f"no self-replication witness for letter {x}, "
                    f"element {nucleus.elements[i]} within radius {search_radius}"
                )
    return StandardCoverResult(
        cover, sorted(extra, key=shortlex_key), witnesses, exact
    )


def _section_closure_words(rec, sys, w, budget):
    out = set()
    queue = [normal_form(sys, w)]
    seen = set(queue)
    while queue:
        u = queue.pop()
        if u:
            out.add(u)
        if len(seen) > budget.max_states:
            raise BudgetExceeded("extra-relator closure exceeded state budget")
        for x in range(rec.degree):
            v = normal_form(sys, rec.section(u, (x,)))
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return out


def kernel_member(
    cover: CoverPresentation, sys: RewriteSystem, w, n: int, _memo=None
) -> bool:
    """Membership in the level-n kernel: the level-n iterate of w has trivial
    permutation and all its sections rewrite to the empty word."""
    if not sys.complete:
        raise BudgetExceeded("kernel membership needs a complete rewrite system")
    if n < 0:
        raise ValueError("level must be >= 0")
    if _memo is None:
        _memo = {}
    w = normal_form(sys, free_reduce(w))
    key = (w, n)
    if key in _memo:
        return _memo[key]
    if n == 0:
        result = w == ()
    elif cover.recursion.word_perm(w) != perm_identity(cover.recursion.degree):
        result = False
    else:
        result = all(
            kernel_member(cover, sys, cover.recursion.section(w, (x,)), n - 1, _memo)
            for x in range(cover.recursion.degree)
        )
    _memo[key] = result
    return result


def kernel_chain_profile(cover: CoverPresentation, sys, w, n_max: int):
    """Least level at which w enters the kernel chain, or None up to n_max."""
    memo = {}
    for n in range(n_max + 1):
        if kernel_member(cover, sys, w, n, memo):
            return n
    return None
