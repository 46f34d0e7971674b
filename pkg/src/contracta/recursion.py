"""Wreath recursions: finite self-similarity data and the induced tree action.

A recursion assigns to every generator a tuple of d section words and a root
permutation of the alphabet {0..d-1}.  The group acts on vertices (tuples of
letters) from the right: the root permutation moves the first letter and the
section at the original first letter acts on the rest.  Sections of inverse
generators are derived on demand, never stored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from . import words
from .errors import BudgetExceeded, ParseError, SemanticError
from .words import Word, free_reduce, invert

DEFAULT_LEVEL_CAP = 2**20

GEN_LINE_RE = re.compile(
    r"gen\s+([A-Za-z][A-Za-z0-9_]*)\s*=\s*perm\(([^)]*)\)\s*sections\(([^)]*)\)\s*$"
)


def perm_mul(p, q):
    """Right-action composition: apply p, then q."""
    return tuple(q[x] for x in p)


def perm_inverse(p):
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def perm_identity(d):
    return tuple(range(d))


@dataclass(frozen=True)
class WreathRecursion:
    degree: int
    gens: tuple
    section_table: tuple  # per generator: d section words
    perm_table: tuple  # per generator: image table of the root permutation
    _inv_perms: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_inv_perms", tuple(perm_inverse(p) for p in self.perm_table)
        )

    # -- single letters ---------------------------------------------------

    def letter_perm(self, letter: int):
        if letter > 0:
            return self.perm_table[letter - 1]
        return self._inv_perms[-letter - 1]

    def letter_section(self, letter: int, x: int) -> Word:
        if not 0 <= x < self.degree:
            raise SemanticError(f"letter {x} out of range for degree {self.degree}")
        if letter > 0:
            return self.section_table[letter - 1][x]
        # (h^-1)_x = (h_{x tau_{h^-1}})^-1
        g = -letter - 1
        return invert(self.section_table[g][self._inv_perms[g][x]])

    # -- words -------------------------------------------------------------

    def word_perm(self, word) -> tuple:
        p = perm_identity(self.degree)
        for s in word:
            p = perm_mul(p, self.letter_perm(s))
        return p

    def section(self, word, vertex) -> Word:
        """g_v, via (gh)_x = g_x h_{x tau_g} one vertex letter at a time."""
        w = word
        for x in vertex:
            if not 0 <= x < self.degree:
                raise SemanticError(f"letter {x} out of range for degree {self.degree}")
            out = []
            pos = x
            for s in w:
                for y in self.letter_section(s, pos):
                    if out and out[-1] == -y:
                        out.pop()
                    else:
                        out.append(y)
                pos = self.letter_perm(s)[pos]
            w = tuple(out)
        return w

    def act(self, word, vertex) -> tuple:
        """Image of a vertex under the right action: (xv)g = (x tau_g)(v g_x)."""
        out = []
        w = word
        for x in vertex:
            if not 0 <= x < self.degree:
                raise SemanticError(f"letter {x} out of range for degree {self.degree}")
            out.append(self.word_perm(w)[x])
            w = self.section(w, (x,))
        return tuple(out)

    def level_permutation(self, word, n: int, cap: int = DEFAULT_LEVEL_CAP):
        """Permutation of X^n in lexicographic order (first letter is most
        significant); entry i is the index of the image of vertex i.

        Assembled recursively from section permutations, memoized on the
        (section word, level) pairs, which repeat heavily."""
        d = self.degree
        if d**n > cap:
            raise BudgetExceeded(f"level {n} has {d ** n} vertices, cap is {cap}")
        memo = {}

        def perm_of(w, k):
            if k == 0:
                return (0,)
            key = (w, k)
            cached = memo.get(key)
            if cached is not None:
                return cached
            tau = self.word_perm(w)
            block = d ** (k - 1)
            out = [0] * (d**k)
            for x in range(d):
                sub = perm_of(self.section(w, (x,)), k - 1)
                base, image_base = x * block, tau[x] * block
                for j, pj in enumerate(sub):
                    out[base + j] = image_base + pj
            result = tuple(out)
            memo[key] = result
            return result

        return perm_of(free_reduce(word), n)

    def iterate(self, word, n: int, cap: int = DEFAULT_LEVEL_CAP):
        """Level-n image: ({vertex: section word}, permutation of X^n)."""
        d = self.degree
        if d**n > cap:
            raise BudgetExceeded(f"level {n} has {d ** n} vertices, cap is {cap}")
        if n == 0:
            return {(): free_reduce(word)}, (0,)
        secs = {}
        perm = [0] * d**n
        tau = self.word_perm(word)
        block = d ** (n - 1)
        for x in range(d):
            sub_secs, sub_perm = self.iterate(self.section(word, (x,)), n - 1, cap)
            for v, w in sub_secs.items():
                secs[(x,) + v] = w
            base, image_base = x * block, tau[x] * block
            for j, pj in enumerate(sub_perm):
                perm[base + j] = image_base + pj
        return secs, tuple(perm)


def parse_recursion(text: str) -> WreathRecursion:
    """Parse a group-definition file (see the .rec grammar in the README)."""
    degree = None
    names = []
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet"):
            if degree is not None:
                raise ParseError("duplicate alphabet line", lineno)
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected `alphabet <d>`", lineno)
            degree = int(parts[1])
            if degree < 2:
                raise SemanticError(f"alphabet degree must be >= 2, got {degree}")
        elif line.startswith("gen"):
            if degree is None:
                raise ParseError("`alphabet <d>` must come first", lineno)
            m = GEN_LINE_RE.match(line)
            if not m:
                raise ParseError("expected `gen <name> = perm(...) sections(...)`", lineno)
            name, perm_part, sec_part = m.groups()
            if name in names:
                raise SemanticError(f"duplicate generator {name!r}")
            names.append(name)
            raw[name] = (perm_part, sec_part, lineno)
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if degree is None:
        raise ParseError("missing `alphabet <d>` line")
    if not names:
        raise ParseError("no generators declared")

    gens = tuple(names)
    sections, perms = [], []
    for name in gens:
        perm_part, sec_part, lineno = raw[name]
        try:
            images = tuple(int(tok) for tok in perm_part.split())
        except ValueError:
            raise ParseError(f"bad permutation for {name!r}", lineno)
        if len(images) != degree or sorted(images) != list(range(degree)):
            raise SemanticError(
                f"generator {name!r}: perm({perm_part.strip()}) is not a "
                f"permutation of 0..{degree - 1}"
            )
        sec_words = [s.strip() for s in sec_part.split(",")]
        if len(sec_words) != degree:
            raise SemanticError(
                f"generator {name!r}: expected {degree} sections, got {len(sec_words)}"
            )
        parsed = []
        for sw in sec_words:
            try:
                parsed.append(words.parse_word(sw, gens))
            except ParseError as e:
                raise SemanticError(f"generator {name!r}: {e}") from None
        sections.append(tuple(parsed))
        perms.append(images)
    return WreathRecursion(degree, gens, tuple(sections), tuple(perms))
