"""Symbolic dynamics on a template: periodic words and their order.

A closed orbit is a cyclic word of strip ids (consecutive strips must chain
head to tail through the branch lines).  Words are kept in canonical form,
the lexicographically least rotation, with symbols ordered by declaration
order in the template.  Periodic points of the semiflow correspond to
primitive words; strands through a branch line are ordered by comparing
forward itineraries, flipping the comparison each time the common prefix
runs through a strip with an odd number of half twists (the strip turns the
chart over).
"""

from __future__ import annotations

from functools import cmp_to_key
from math import lcm

from .errors import BudgetExceeded
from .templates import Template

Word = tuple[str, ...]


def format_word(word: Word) -> str:
    return ".".join(word)


def parse_word(text: str) -> Word:
    parts = tuple(p for p in text.split(".") if p)
    if not parts:
        raise ValueError("empty word")
    return parts


def is_admissible(template: Template, word: Word) -> bool:
    """Cyclic word chains through the template."""
    if not word:
        return False
    ids = {s.id for s in template.strips}
    if any(sid not in ids for sid in word):
        return False
    for i, sid in enumerate(word):
        nxt = word[(i + 1) % len(word)]
        if template.strip(sid).dst_line != template.strip(nxt).src_line:
            return False
    return True


def is_primitive(word: Word) -> bool:
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word == word[d:] + word[:d]:
            return False
    return True


def canonical(template: Template, word: Word) -> Word:
    """Lexicographically least rotation under declaration order of strips."""
    order = {s.id: i for i, s in enumerate(template.strips)}
    key = tuple(order[sid] for sid in word)
    n = len(word)
    best = 0
    for r in range(1, n):
        rot = key[r:] + key[:r]
        if rot < key[best:] + key[:best]:
            best = r
    return word[best:] + word[:best]


def enumerate_orbits(template: Template, max_period: int,
                     budget: int | None = None,
                     strips: frozenset[str] | set[str] | None = None) -> list[Word]:
    """All primitive closed orbits with period <= max_period.

    Returned canonical words are sorted by (period, symbol sequence).
    Raises BudgetExceeded when more than `budget` orbits would be returned.
    `strips` restricts the walk to a subset of strip ids: the orbits of the
    subtemplate those strips span, still embedded as on the full template.
    """
    order = {s.id: i for i, s in enumerate(template.strips)}
    found: set[Word] = set()
    out: list[Word] = []

    def extend(path: list[str], start_line: str, period: int):
        here = template.strip(path[-1]).dst_line if path else start_line
        if path and len(path) == period:
            if here == start_line:
                word = canonical(template, tuple(path))
                if is_primitive(word) and word not in found:
                    found.add(word)
                    out.append(word)
                    if budget is not None and len(out) > budget:
                        raise BudgetExceeded(
                            f"more than {budget} orbits up to period {max_period}")
            return
        for sid in template.strips_from(here):
            if strips is not None and sid not in strips:
                continue
            path.append(sid)
            extend(path, start_line, period)
            path.pop()

    line_ids = [ln.id for ln in template.lines]
    for period in range(1, max_period + 1):
        for lid in line_ids:
            extend([], lid, period)
    out.sort(key=lambda w: (len(w), tuple(order[sid] for sid in w)))
    return out


# -- kneading order -------------------------------------------------------

def _itinerary_cmp(template: Template, word_a: Word, phase_a: int,
                   word_b: Word, phase_b: int) -> int:
    """Order of two strands at a common branch line.

    Compares forward itineraries; each odd-twist strip traversed in the
    common prefix reverses the remaining comparison.  Returns -1, 0, or 1.
    """
    out_rank = {}
    for ln in template.lines:
        for i, sid in enumerate(ln.out_slots):
            out_rank[sid] = i
    odd = {s.id: s.half_twists % 2 == 1 for s in template.strips}

    na, nb = len(word_a), len(word_b)
    bound = 2 * lcm(na, nb) + 1
    flip = False
    for k in range(bound):
        sa = word_a[(phase_a + k) % na]
        sb = word_b[(phase_b + k) % nb]
        if sa != sb:
            base = -1 if out_rank[sa] < out_rank[sb] else 1
            return -base if flip else base
        if odd[sa]:
            flip = not flip
    return 0


def strand_order(template: Template, words: list[Word],
                 line_id: str) -> list[tuple[Word, int]]:
    """Occurrences of the given orbits at one branch line, left to right.

    An occurrence (word, phase) sits on the line about to flow into strip
    word[phase].  Position on the line follows itinerary order.
    """
    template.line(line_id)  # raises KeyError for unknown lines
    occs: list[tuple[Word, int]] = []
    for w in words:
        for p, sid in enumerate(w):
            if template.strip(sid).src_line == line_id:
                occs.append((w, p))

    def cmp(a, b):
        c = _itinerary_cmp(template, a[0], a[1], b[0], b[1])
        if c:
            return c
        # identical itineraries can only happen for the same occurrence
        return -1 if (a < b) else (0 if a == b else 1)

    occs.sort(key=cmp_to_key(cmp))
    return occs
