"""Built-in group definitions wired to all oracles.

Recursion-defined groups ship as .rec files (the single source for both the
definition and the expected facts asserted by the test suite).  Parametrized
families are constructed on demand from their name:

    gomega:<preperiod>:<period>   sequence-indexed tree group, e.g. gomega::012
    bs:<l>:<m>                    Baumslag-Solitar group
    met:<l>:<m>                   exact triangular-matrix quotient
    wreath:z | wreath:z<h>        lamplighter-style wreath product over Z
    w_n:<n>                       truncated wreath-product presentation (HNN)

The CONTRACTA_CATALOG environment variable overrides the definition-file
directory.
"""

from __future__ import annotations

import functools
import json
import os
from dataclasses import dataclass, field
from importlib import resources

from . import contraction, covers, gomega, grig, metabelian, rewriting
from .contraction import Budget, DEFAULT_BUDGET
from .errors import SemanticError
from .marked import MarkedGroup
from .recursion import WreathRecursion, parse_recursion
from .words import concat, invert

RECURSION_NAMES = (
    "grigorchuk",
    "basilica",
    "img_z2_plus_i",
    "gupta_sidki",
    "fabrykowski_gupta",
    "hanoi3",
)


@dataclass
class Group:
    name: str
    gens: tuple
    is_trivial: object  # callable Word -> bool
    recursion: WreathRecursion = None
    presentation: object = None
    facts: dict = field(default_factory=dict)
    norm_key: object = None  # sound congruence key for marked-group caching
    invariant: object = None  # hashable prehash for ball deduplication

    @property
    def rank(self):
        return len(self.gens)

    def equal(self, u, v) -> bool:
        return self.is_trivial(concat(u, invert(v)))


def catalog_dir():
    override = os.environ.get("CONTRACTA_CATALOG")
    if override:
        return override
    return str(resources.files("contracta").joinpath("data"))


def read_definition(name: str) -> str:
    path = os.path.join(catalog_dir(), f"{name}.rec")
    if not os.path.exists(path):
        raise SemanticError(f"no catalog definition {name!r} (looked in {path})")
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def parse_facts(text: str) -> dict:
    facts = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("#!"):
            key, _, value = line[2:].partition(":")
            facts[key.strip()] = json.loads(value.strip())
    return facts


@functools.lru_cache(maxsize=None)
def _recursion_entry(name: str, budget: Budget = DEFAULT_BUDGET):
    text = read_definition(name)
    rec = parse_recursion(text)
    facts = parse_facts(text)

    def is_trivial(word):
        return contraction.is_trivial(rec, word, budget)

    depth = 6 if rec.degree == 2 else 4

    def invariant(word):
        return rec.level_permutation(word, depth)

    return Group(
        name,
        rec.gens,
        is_trivial,
        recursion=rec,
        facts=facts,
        invariant=invariant,
        norm_key=grig.reduce_word if name == "grigorchuk" else None,
    )


@functools.lru_cache(maxsize=None)
def grig_cover():
    """The universal cover of the four-involution recursion, with its
    completed rewriting system."""
    rec = _recursion_entry("grigorchuk").recursion
    nuc = contraction.nucleus(rec)
    cover = covers.universal_cover(nuc)
    sys = rewriting.complete(cover.presentation)
    return cover, sys


@functools.lru_cache(maxsize=None)
def cover_for(name: str):
    entry = _recursion_entry(name)
    nuc = contraction.nucleus(entry.recursion)
    cover = covers.universal_cover(nuc, prune=entry.facts.get("cover_prune", False))
    sys = rewriting.complete(cover.presentation)
    return cover, sys


def load(name: str) -> Group:
    if name in RECURSION_NAMES:
        return _recursion_entry(name)
    if name.startswith("gomega:"):
        omega = gomega.OmegaSequence.parse(name[len("gomega:") :])
        return Group(
            name,
            grig.GENS,
            lambda w: gomega.omega_is_trivial(omega, w),
            norm_key=grig.reduce_word,
            facts={"omega": str(omega)},
        )
    if name.startswith("bs:"):
        l, m = _two_ints(name)
        datum = metabelian.BsDatum(l, m)
        relator = (-2,) + (1,) * l + (2,) + (-1,) * m  # t^-1 s^l t s^-m
        return Group(
            name,
            metabelian.GENS,
            lambda w: metabelian.britton_reduce(datum, w).is_trivial,
            presentation=rewriting.Presentation(metabelian.GENS, (relator,)),
            invariant=lambda w: _met_key(l, m, w),
        )
    if name.startswith("met:"):
        l, m = _two_ints(name)
        return Group(
            name,
            metabelian.GENS,
            lambda w: metabelian.met_eval(l, m, w).is_identity,
            invariant=lambda w: _met_key(l, m, w),
        )
    if name.startswith("wreath:"):
        modulus = _wreath_modulus(name[len("wreath:") :])
        return Group(
            name,
            metabelian.GENS,
            lambda w: metabelian.wreath_eval(w, modulus).is_identity,
            invariant=lambda w: metabelian.wreath_eval(w, modulus),
        )
    if name.startswith("w_n:"):
        n = int(name[len("w_n:") :])
        datum = metabelian.WnDatum(n)
        relators = tuple(
            metabelian.commutator(
                (1,), metabelian.conjugate((1,), (2,) * i)
            )
            for i in range(1, n + 1)
        )
        return Group(
            name,
            metabelian.GENS,
            lambda w: metabelian.britton_reduce(datum, w).is_trivial,
            presentation=rewriting.Presentation(metabelian.GENS, relators),
            invariant=lambda w: metabelian.wreath_eval(w, 0),
        )
    raise SemanticError(f"unknown catalog name {name!r}")


def _two_ints(name: str):
    parts = name.split(":")
    if len(parts) != 3:
        raise SemanticError(f"expected <family>:<l>:<m>, got {name!r}")
    return int(parts[1]), int(parts[2])


def _wreath_modulus(spec: str) -> int:
    if spec == "z":
        return 0
    if spec.startswith("z") and spec[1:].isdigit() and int(spec[1:]) >= 2:
        return int(spec[1:])
    raise SemanticError(f"wreath base must be z or z<h> with h >= 2, got {spec!r}")


def _met_key(l, m, w):
    mat = metabelian.met_eval(l, m, w)
    return tuple(x for row in mat.rows() for x in row)


# -- marked-group wiring -----------------------------------------------------


def marked_limit(name: str) -> MarkedGroup:
    g = load(name)
    return MarkedGroup(g.rank, g.is_trivial, name=name, norm_key=g.norm_key)


def marked_cover_chain(name: str, n: int) -> MarkedGroup:
    """Level-n quotient of the universal cover, marked on the cover letters."""
    cover, sys = cover_for(name)
    memo = {}
    return MarkedGroup(
        len(cover.presentation.gens),
        lambda w: covers.kernel_member(cover, sys, w, n, memo),
        name=f"{name}-cover-level-{n}",
        norm_key=grig.reduce_word if name == "grigorchuk" else None,
    )


def marked_omega_chain(omega_spec: str, n: int) -> MarkedGroup:
    omega = gomega.OmegaSequence.parse(omega_spec)
    _, sys = grig_cover()
    memo = {}
    return MarkedGroup(
        4,
        lambda w: gomega.omega_kernel_member(omega, w, n, sys, memo),
        name=f"gomega:{omega_spec}-level-{n}",
        norm_key=grig.reduce_word,
    )


def marked_bs_tower(l: int, m: int, n: int) -> MarkedGroup:
    return MarkedGroup(
        2,
        lambda w: metabelian.bs_kernel_chain_member(l, m, w, n),
        name=f"bs:{l}:{m}-tower-{n}",
    )
