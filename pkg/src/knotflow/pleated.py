"""Folded return maps: stacking data, pretemplates, and classification.

A folded system records how the image of an expanding interval map sits in
a cross-section disc at the moment a gluing bifurcation fires.  The image
is a stack of n full-width laps; `order` lists the lap ids front to back
(slot 0 frontmost), so lap i sits at stacking position order.index(i).
Consecutive laps are joined by a fold at the left or right edge of the
section, recorded in `sides`, and lap i accumulates twists[i] half twists
along its strip.  The carrier is the knot type of the tube containing the
whole picture; all laps share it.

Three pieces of plane geometry make the data drawable:

* folds on one edge are chords over the stacking order and must be
  properly nested, never interleaved;
* the loose ends of the image (before lap 1, after lap n) leave on the
  edge opposite their neighbouring fold and must reach the boundary, so
  neither may start strictly inside a chord on its own edge;
* consecutive folds alternate edges, because every lap spans the full
  width of the section.

One more constraint couples the two signatures: a lap with an even twist
count keeps the expanding orientation, so its far end lands on the right
edge, and an odd lap lands on the left.  Flipping every edge at once is
the same picture rotated half a turn, so exactly two side strings are
compatible with a twist signature and the builder canonicalizes to the
parity form.  Twist steps of +-1 at each fold are free: the fold edge
fixes the parity of the next lap's twist, never the direction of the step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidPleating, NonIncrementalTwists, UnsupportedCarrier
from .templates import BranchLine, PleatedTemplate, Strip, Violation

CARRIERS = ("unknot", "trefoil")

TwistSignature = tuple[int, ...]


@dataclass(frozen=True)
class PleatingSignature:
    order: tuple[int, ...]   # lap id at each stacking position, front first
    sides: str               # fold edge between laps i and i+1: 'L' or 'R'


@dataclass(frozen=True)
class PleatedSystem:
    pleating: PleatingSignature
    twists: TwistSignature   # accumulated half twists of each lap
    carrier: str = "unknot"

    @property
    def n(self) -> int:
        return len(self.pleating.order)


def canonical_sides(twists: TwistSignature) -> str:
    """Fold edges forced by twist parity: even lap twist folds right."""
    return "".join("R" if twists[j] % 2 == 0 else "L"
                   for j in range(len(twists) - 1))


def _structural_problems(sig: PleatingSignature) -> list[Violation]:
    bad: list[Violation] = []
    n = len(sig.order)
    if n < 1:
        return [Violation("MalformedPleating", "order", "empty stacking order")]
    if sorted(sig.order) != list(range(1, n + 1)):
        bad.append(Violation("MalformedPleating", "order",
                             f"{sig.order} is not a permutation of 1..{n}"))
    if len(sig.sides) != n - 1:
        bad.append(Violation("MalformedPleating", "sides",
                             f"need {n - 1} fold edges, got {len(sig.sides)}"))
    if any(ch not in "LR" for ch in sig.sides):
        bad.append(Violation("MalformedPleating", "sides",
                             f"{sig.sides!r} contains letters other than L, R"))
    return bad


def validate_pleating(sig: PleatingSignature) -> list[Violation]:
    """Violations that make the stacking data undrawable; empty is ok.

    SelfIntersectingPleat violations name the offending arc pair in their
    subject; folds are numbered from 1, with "entry" and "exit" standing
    for the two loose ends of the folded image.
    """
    bad = _structural_problems(sig)
    if bad:
        return bad
    n = len(sig.order)
    pos = {lap: k for k, lap in enumerate(sig.order)}

    for i in range(n - 2):
        if sig.sides[i] == sig.sides[i + 1]:
            bad.append(Violation(
                "SelfIntersectingPleat", f"folds {i + 1} and {i + 2}",
                "consecutive folds on one edge; a full-width lap must exit "
                "on the edge opposite its entry"))
    if bad:
        return bad

    # chords of each edge: (fold number, low position, high position)
    chords = {"L": [], "R": []}
    for j in range(1, n):
        a, b = pos[j], pos[j + 1]
        chords[sig.sides[j - 1]].append((j, min(a, b), max(a, b)))

    for side in "LR":
        cs = chords[side]
        for x in range(len(cs)):
            for y in range(x + 1, len(cs)):
                (j1, a1, b1), (j2, a2, b2) = cs[x], cs[y]
                if a1 < a2 < b1 < b2 or a2 < a1 < b2 < b1:
                    bad.append(Violation(
                        "SelfIntersectingPleat", f"folds {j1} and {j2}",
                        f"interleaved chords ({a1},{b1}) and ({a2},{b2}) "
                        f"on the {side} edge"))

    if n >= 2:
        entry_side = "L" if sig.sides[0] == "R" else "R"
        for j, lo, hi in chords[entry_side]:
            if lo < pos[1] < hi:
                bad.append(Violation(
                    "SelfIntersectingPleat", f"entry and fold {j}",
                    f"the entry tail at position {pos[1]} starts inside "
                    f"chord ({lo},{hi}) on the {entry_side} edge"))
                break
        exit_side = "L" if sig.sides[-1] == "R" else "R"
        for j, lo, hi in chords[exit_side]:
            if lo < pos[n] < hi:
                bad.append(Violation(
                    "SelfIntersectingPleat", f"fold {j} and exit",
                    f"the exit tail at position {pos[n]} starts inside "
                    f"chord ({lo},{hi}) on the {exit_side} edge"))
                break
    return bad


def check_incremental(twists: TwistSignature) -> Violation | None:
    """None when consecutive twists differ by exactly one half turn."""
    for i in range(len(twists) - 1):
        d = twists[i + 1] - twists[i]
        if d not in (1, -1):
            return Violation(
                "NonIncrementalStep", str(i + 1),
                f"twist changes by {d:+d} into entry {i + 1}; each fold "
                "adds or removes exactly one half twist")
    return None


def build_pretemplate(system: PleatedSystem) -> PleatedTemplate:
    """Single branch line template of the folded map, embedding kept.

    Strip i is lap i: it leaves the line on out slot i-1, lands on the
    stacking slot the order dictates, and carries twists[i] half twists.
    Crossings between laps are not stored; they are developed on demand
    from the stacking order, the fold edges, and the twists.
    """
    problems = validate_pleating(system.pleating)
    if problems:
        v = problems[0]
        raise InvalidPleating(f"{v.kind} ({v.subject}): {v.detail}")
    step = check_incremental(system.twists)
    if step is not None:
        raise NonIncrementalTwists(step.detail)
    if len(system.twists) != system.n:
        raise NonIncrementalTwists(
            f"{system.n} laps but {len(system.twists)} twist entries")
    if system.carrier not in CARRIERS:
        raise UnsupportedCarrier(system.carrier)

    expected = canonical_sides(system.twists)
    flipped = "".join("L" if c == "R" else "R" for c in expected)
    if system.pleating.sides not in (expected, flipped):
        raise InvalidPleating(
            f"fold edges {system.pleating.sides!r} are incompatible with "
            f"the twist parities, which force {expected!r} (or the global "
            f"flip, the same picture rotated)")

    n = system.n
    names = tuple(str(i) for i in range(1, n + 1))
    line = BranchLine("b", names,
                      tuple(str(i) for i in system.pleating.order))
    strips = tuple(Strip(names[i], "b", "b", system.twists[i])
                   for i in range(n))
    return PleatedTemplate((line,), strips, (), carrier=system.carrier,
                           carrier_sign=1)


def mirror_system(system: PleatedSystem) -> PleatedSystem:
    """The system whose pretemplate is the mirror image.

    Stacking order reverses, every twist negates, fold edges stay (twist
    parities are unchanged), and the carrier keeps its name: mirroring the
    built template flips its carrier chirality separately.
    """
    return PleatedSystem(
        PleatingSignature(tuple(reversed(system.pleating.order)),
                          system.pleating.sides),
        tuple(-t for t in system.twists),
        system.carrier)


# -- bifurcation classification ---------------------------------------------

@dataclass(frozen=True)
class BifurcationClass:
    verdict: str                  # UniversalByThm43 | NotUniversalByGenus |
    #                               CertificateFound | Inconclusive
    certificate: object = None
    detail: str = ""


def classify_bifurcation(system: PleatedSystem, max_period: int = 8,
                         pair_budget: int | None = None) -> BifurcationClass:
    """Sort a folded system into one of the four published buckets.

    A knotted carrier forces positive genus on every orbit, so the system
    cannot carry every link.  An unknotted carrier with twists of both
    signs is universal outright, and the verdict is backed by a searched
    and re-verified certificate pair.  With twists of one sign only, the
    certificate search runs first over the zero-twist laps alone (where a
    pair can still pick up twist from crossings), then over everything.
    """
    from .universality import (_certificate_search, check_universal_sufficient,
                               verify_certificate)

    template = build_pretemplate(system)
    if system.carrier != "unknot":
        return BifurcationClass(
            "NotUniversalByGenus",
            detail=f"carrier {system.carrier} bounds every orbit's genus "
                   "away from zero, so some knots are never carried")

    has_pos = any(t > 0 for t in system.twists)
    has_neg = any(t < 0 for t in system.twists)
    if has_pos and has_neg:
        cert = check_universal_sufficient(template, max_period, pair_budget)
        if cert is not None and verify_certificate(template, cert):
            return BifurcationClass("UniversalByThm43", cert,
                                    "twists of both signs; witness verified")
        return BifurcationClass(
            "Inconclusive", detail="twists of both signs, but no verified "
            f"witness pair up to period {max_period}")

    zero = frozenset(str(i + 1) for i, t in enumerate(system.twists) if t == 0)
    if zero:
        cert = _certificate_search(template, max_period, pair_budget,
                                   strips=zero)
        if cert is not None:
            return BifurcationClass(
                "CertificateFound", cert,
                "pair found on the zero-twist laps alone")
    cert = check_universal_sufficient(template, max_period, pair_budget)
    if cert is not None:
        return BifurcationClass("CertificateFound", cert)
    return BifurcationClass(
        "Inconclusive", detail=f"no certificate up to period {max_period}")


# -- sampling and enumeration -------------------------------------------------

def enumerate_valid_orders(n: int, sides: str) -> list[tuple[int, ...]]:
    """All stacking orders drawable with the given fold edges."""
    from itertools import permutations

    out = []
    for perm in permutations(range(1, n + 1)):
        if not validate_pleating(PleatingSignature(perm, sides)):
            out.append(perm)
    return out


def sample_pleated_system(n: int, rng, carrier: str = "unknot",
                          base_twist: int = 0,
                          max_tries: int = 20000) -> PleatedSystem:
    """Random valid system with the fold-edge twist assignment.

    The stacking order is uniform over valid orders (by rejection).  Fold
    edges follow from the base twist parity and alternate; the twist then
    steps +1 at every right fold and -1 at every left fold, the canonical
    assignment used by the round-trip tests.
    """
    first = "R" if base_twist % 2 == 0 else "L"
    sides = "".join(first if i % 2 == 0 else ("L" if first == "R" else "R")
                    for i in range(n - 1))
    twists = [base_twist]
    for ch in sides:
        twists.append(twists[-1] + (1 if ch == "R" else -1))
    for _ in range(max_tries):
        perm = tuple(int(v) + 1 for v in rng.permutation(n))
        sig = PleatingSignature(perm, sides)
        if not validate_pleating(sig):
            return PleatedSystem(sig, tuple(twists), carrier)
    raise InvalidPleating(f"no valid stacking of {n} laps in {max_tries} draws")


# -- stock systems -------------------------------------------------------------

def three_strip_catalogue() -> dict[str, PleatedSystem]:
    """The four drawable 3-lap systems with one sign change in the twists.

    Keys say what the data does: the stacking order ascends or descends,
    and the twist signature falls (1,0,-1) or rises (-1,0,1).
    """
    def mk(order, twists):
        return PleatedSystem(
            PleatingSignature(order, canonical_sides(twists)), twists)

    return {
        "ascending-falling": mk((1, 2, 3), (1, 0, -1)),
        "ascending-rising": mk((1, 2, 3), (-1, 0, 1)),
        "descending-falling": mk((3, 2, 1), (1, 0, -1)),
        "descending-rising": mk((3, 2, 1), (-1, 0, 1)),
    }


def three_strip_mirror_pairs() -> tuple[tuple[str, str], ...]:
    """Catalogue keys paired with their mirror images.

    Mirroring reverses the stacking order and negates the twists, so each
    falling system pairs with the rising system of the other direction;
    universality of one settles the other.
    """
    return (("ascending-falling", "descending-rising"),
            ("descending-falling", "ascending-rising"))


def double_horseshoe_system(carrier: str = "unknot") -> PleatedSystem:
    """Four laps folded like two nested horseshoes, twists (0, 1, 0, -1).

    Restricting to laps 2..4 gives the descending-falling 3-lap system.
    """
    return PleatedSystem(
        PleatingSignature((1, 4, 3, 2), "RLR"), (0, 1, 0, -1), carrier)
