"""Knot and link invariants computed from diagrams.

Everything works on the Gauss-code level of `diagram.Diagram`.  The main
tools:

* Alexander polynomial, exact over integer Laurent polynomials via a
  fraction-free determinant of the crossing/arc incidence matrix.
* A fast modular screen: the same determinant at t=2 over a large prime.
  If the value is not a unit there, the polynomial is certainly not 1; the
  converse direction is never used, so the screen errs only toward
  "unknown".
* Genus lower bounds: half the Alexander span, and the writhe minus
  Seifert circle bound (valid for every diagram of the knot; equality for
  diagrams with all positive crossings).
* Reduction by Reidemeister moves found through the face structure of the
  diagram: monogon faces (R1), bigon faces with one strand on top (R2),
  triangle faces with a top and a bottom strand (R3).  Face based detection
  keeps every move geometric, so a reduction to zero crossings is a proof.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram, braid_to_diagram, orbits_to_diagram
from .errors import DisconnectedClosure, NotAKnot
from .laurent import LaurentPoly
from .symbolic import Word
from .templates import Template


@dataclass(frozen=True)
class Verdict:
    answer: str                  # "Yes" | "No" | "Unknown"
    reason: str = ""
    moves: tuple = ()

    def __bool__(self):
        return self.answer == "Yes"


# -- Seifert circles and the writhe bound ---------------------------------

def seifert_circle_count(diagram: Diagram) -> int:
    """Circles after smoothing every crossing respecting orientation."""
    succ: dict[tuple[int, int], tuple[int, int]] = {}
    passages: dict[int, dict[str, tuple[int, int]]] = {}
    for ci, entries in enumerate(diagram.gauss):
        for k, (cid, role, _) in enumerate(entries):
            passages.setdefault(cid, {})[role] = (ci, k)
    free_loops = sum(1 for entries in diagram.gauss if not entries)
    for cid, ps in passages.items():
        co, ko = ps["O"]
        cu, ku = ps["U"]
        mo = len(diagram.gauss[co])
        mu = len(diagram.gauss[cu])
        succ[(co, (ko - 1) % mo)] = (cu, ku)   # into over -> out of under
        succ[(cu, (ku - 1) % mu)] = (co, ko)   # into under -> out of over
    count = free_loops
    todo = set(succ)
    while todo:
        e = todo.pop()
        count += 1
        nxt = succ[e]
        while nxt in todo:
            todo.remove(nxt)
            nxt = succ[nxt]
    return count


def writhe_minus_circles_bound(diagram: Diagram) -> int:
    """Genus lower bound ceil((writhe - circles + 1)/2), clamped at 0.

    Sound for any diagram of a knot; sharp when all crossings are positive.
    """
    if len(diagram.components) != 1:
        raise NotAKnot("bound defined for single component diagrams")
    w = sum(c.sign for c in diagram.crossings)
    s = seifert_circle_count(diagram)
    return max(0, -((-(w - s + 1)) // 2))


# -- Alexander polynomial --------------------------------------------------

def _row_spec(diagram: Diagram):
    """Rows (over_arc, in_arc, out_arc, sign) of the crossing/arc matrix."""
    if len(diagram.components) != 1:
        raise NotAKnot("Alexander matrix needs a one component diagram")
    entries = diagram.gauss[0]
    c = len(entries) // 2
    if c == 0:
        return 0, []
    u_pos = [k for k, (_, role, _) in enumerate(entries) if role == "U"]
    # arc j runs from just after u_pos[j] to u_pos[(j+1) % c]
    arc_at = {}
    for j, start in enumerate(u_pos):
        end = u_pos[(j + 1) % c]
        k = (start + 1) % len(entries)
        while k != end:
            arc_at[k] = j
            k = (k + 1) % len(entries)
    in_arc_of = {entries[u][0]: (j - 1) % c for j, u in enumerate(u_pos)}
    out_arc_of = {entries[u][0]: j for j, u in enumerate(u_pos)}
    sign_of = {}
    over_arc_of = {}
    for k, (cid, role, sgn) in enumerate(entries):
        sign_of[cid] = sgn
        if role == "O":
            over_arc_of[cid] = arc_at.get(k)
            if over_arc_of[cid] is None:
                # over entry right at an under position cannot happen; the
                # only unlabeled points are the u_pos themselves
                raise AssertionError("over entry has no arc")
    rows = [(over_arc_of[cid], in_arc_of[cid], out_arc_of[cid], sign_of[cid])
            for cid in sorted(over_arc_of)]
    return c, rows


def _bareiss_det(m: list[list[LaurentPoly]]) -> LaurentPoly:
    n = len(m)
    if n == 0:
        return LaurentPoly.one()
    sign = 1
    prev = LaurentPoly.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
            m[i][k] = LaurentPoly.zero()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def alexander_of_diagram(diagram: Diagram) -> LaurentPoly:
    """Alexander polynomial, normalized up to +-t^k."""
    c, rows = _row_spec(diagram)
    if c == 0:
        return LaurentPoly.one()
    t = LaurentPoly.t(1)
    tinv = LaurentPoly.t(-1)
    one = LaurentPoly.one()
    mat = [[LaurentPoly.zero() for _ in range(c)] for _ in range(c)]
    for r, (a_over, a_in, a_out, sgn) in enumerate(rows):
        if sgn > 0:
            mat[r][a_over] += one - t
            mat[r][a_in] += t
        else:
            mat[r][a_over] += one - tinv
            mat[r][a_in] += tinv
        mat[r][a_out] += -one
    sub = [row[:-1] for row in mat[:-1]]
    return _bareiss_det(sub).normalized()


_SCREEN_PRIMES = (2147483647, 998244353)


def _det_mod(rows_ints, p: int) -> int:
    import numpy as np

    m = np.array(rows_ints, dtype=np.int64) % p
    n = m.shape[0]
    det = 1
    for k in range(n):
        piv = None
        for r in range(k, n):
            if m[r, k] % p:
                piv = r
                break
        if piv is None:
            return 0
        if piv != k:
            m[[k, piv]] = m[[piv, k]]
            det = -det
        det = (det * int(m[k, k])) % p
        inv = pow(int(m[k, k]), p - 2, p)
        if k + 1 < n:
            factors = (m[k + 1:, k] * inv) % p
            m[k + 1:, k:] = (m[k + 1:, k:] - factors[:, None] * m[k, k:]) % p
    return det % p


def alexander_not_unit(diagram: Diagram, t_val: int = 2) -> bool:
    """True when the Alexander polynomial is certainly not a unit.

    Evaluates the crossing/arc determinant at t=t_val over large primes.
    A unit +-t^k evaluates to +-t_val^k, so any other residue rules units
    out; False means no conclusion.
    """
    c, rows = _row_spec(diagram)
    if c == 0:
        return False
    for p in _SCREEN_PRIMES:
        tinv = pow(t_val, p - 2, p)
        mat = [[0] * c for _ in range(c)]
        for r, (a_over, a_in, a_out, sgn) in enumerate(rows):
            if sgn > 0:
                mat[r][a_over] += 1 - t_val
                mat[r][a_in] += t_val
            else:
                mat[r][a_over] += 1 - tinv
                mat[r][a_in] += tinv
            mat[r][a_out] -= 1
        det = _det_mod([row[:-1] for row in mat[:-1]], p)
        units = set()
        powv = 1
        for _ in range(c + 2):
            units.add(powv)
            units.add(p - powv if powv else 0)
            powv = (powv * t_val) % p
        powv = tinv
        for _ in range(c + 2):
            units.add(powv)
            units.add(p - powv)
            powv = (powv * tinv) % p
        if det % p not in units:
            return True
    return False


_EXACT_LIMIT = 48


def genus_bound_of_diagram(diagram: Diagram) -> int:
    """Best available lower bound for the Seifert genus."""
    if len(diagram.components) != 1:
        raise NotAKnot("genus bound needs a one component diagram")
    c = len(diagram.gauss[0]) // 2
    best = writhe_minus_circles_bound(diagram)
    if c <= _EXACT_LIMIT:
        best = max(best, alexander_of_diagram(diagram).span() // 2)
    elif best == 0 and alexander_not_unit(diagram):
        best = 1
    return best


# -- Reidemeister simplification -------------------------------------------

def _passage_table(comps):
    table: dict[int, dict] = {}
    for ci, entries in enumerate(comps):
        for k, (cid, role, sgn) in enumerate(entries):
            rec = table.setdefault(cid, {"sign": sgn})
            rec[role] = (ci, k)
    return table


def _faces(comps):
    """Faces of the underlying 4-valent plane graph.

    A dart (ci, k, d) walks edge k of component ci forward (d=+1, from
    entry k to k+1) or backward.  Returns a list of faces, each a list of
    darts, computed from the rotation forced at every crossing by its sign.
    """
    table = _passage_table(comps)
    ends: dict[int, dict[str, tuple]] = {}
    for cid, rec in table.items():
        co, ko = rec["O"]
        cu, ku = rec["U"]
        mo, mu = len(comps[co]), len(comps[cu])
        arr = {
            "O_in": (co, (ko - 1) % mo, 1),
            "O_out": (co, ko, -1),
            "U_in": (cu, (ku - 1) % mu, 1),
            "U_out": (cu, ku, -1),
        }
        ends[cid] = arr

    order_pos = ("O_in", "U_out", "O_out", "U_in")
    order_neg = ("U_in", "O_out", "U_out", "O_in")

    nxt: dict[tuple, tuple] = {}
    for cid, rec in table.items():
        arr = ends[cid]
        cyc = order_pos if rec["sign"] > 0 else order_neg
        for i, end in enumerate(cyc):
            arriving = arr[end]
            out_end = cyc[(i + 1) % 4]
            oci, ok, od = arr[out_end]
            nxt[arriving] = (oci, ok, -od)   # departing dart = reversed arrival

    faces = []
    todo = set(nxt)
    while todo:
        d = todo.pop()
        face = [d]
        cur = nxt[d]
        while cur in todo:
            todo.remove(cur)
            face.append(cur)
            cur = nxt[cur]
        faces.append(face)
    return faces, table


def _dart_head(comps, dart):
    ci, k, d = dart
    m = len(comps[ci])
    idx = (k + 1) % m if d > 0 else k
    return comps[ci][idx][0], idx, ci


def _edge_key(dart):
    ci, k, _ = dart
    return (ci, k)


def _remove_crossings(comps, cids):
    gone = set(cids)
    return [[e for e in entries if e[0] not in gone] for entries in comps]


def _r2_strand_roles(comps, dart):
    """Roles of the strand under a dart at the two endpoint crossings."""
    ci, k, _ = dart
    m = len(comps[ci])
    a = comps[ci][k]
    b = comps[ci][(k + 1) % m]
    return a, b


def simplify_code(comps, budget: int | None = None, stop=None):
    """Greedy monogon/bigon collapse with triangle slides to unlock.

    comps: list of per-component entry lists [(cid, role, sign), ...].
    Returns (reduced comps, moves, stuck) where stuck means the budget ran
    out or no move applied while crossings remain.
    """
    comps = [list(entries) for entries in comps]
    total0 = sum(len(e) for e in comps) // 2
    if budget is None:
        budget = 10 * total0 * total0 + 64
    moves: list[tuple] = []
    seen = {tuple(tuple(e) for e in comps)}

    while budget > 0:
        budget -= 1
        if stop and stop(comps):
            return comps, tuple(moves), False
        if sum(len(e) for e in comps) == 0:
            return comps, tuple(moves), False
        faces, table = _faces(comps)

        applied = False
        # monogons
        for face in faces:
            if len(face) != 1:
                continue
            cid, _, _ = _dart_head(comps, face[0])
            comps = _remove_crossings(comps, [cid])
            moves.append(("R1", cid))
            applied = True
            break
        if applied:
            seen.add(tuple(tuple(e) for e in comps))
            continue

        # bigons: reducible when one strand is on top at both crossings
        for face in faces:
            if len(face) != 2:
                continue
            x = _dart_head(comps, face[0])[0]
            y = _dart_head(comps, face[1])[0]
            if x == y:
                continue
            a, b = _r2_strand_roles(comps, face[0])
            if {a[0], b[0]} != {x, y}:
                continue
            if a[1] == b[1]:
                comps = _remove_crossings(comps, [x, y])
                moves.append(("R2", x, y))
                applied = True
                break
        if applied:
            seen.add(tuple(tuple(e) for e in comps))
            continue

        # triangles: slide when there is a top strand and a bottom strand
        for face in faces:
            if len(face) != 3:
                continue
            heads = [_dart_head(comps, d)[0] for d in face]
            if len(set(heads)) != 3:
                continue
            edges = [_edge_key(d) for d in face]
            if len(set(edges)) != 3:
                continue
            pairs = [_r2_strand_roles(comps, d) for d in face]
            # no shared entries between the three edges
            spots = set()
            clean = True
            for d in face:
                ci, k, _ = d
                m = len(comps[ci])
                for idx in (k, (k + 1) % m):
                    if (ci, idx) in spots:
                        clean = False
                    spots.add((ci, idx))
            if not clean:
                continue
            roles = [(a[1], b[1]) for a, b in pairs]
            if ("O", "O") not in roles or ("U", "U") not in roles:
                continue  # cyclic over/under pattern, no slide
            trial = [list(entries) for entries in comps]
            for d in face:
                ci, k, _ = d
                m = len(trial[ci])
                k2 = (k + 1) % m
                trial[ci][k], trial[ci][k2] = trial[ci][k2], trial[ci][k]
            key = tuple(tuple(e) for e in trial)
            if key in seen:
                continue
            comps = trial
            seen.add(key)
            moves.append(("R3", tuple(sorted(set(heads)))))
            applied = True
            break
        if applied:
            continue
        return comps, tuple(moves), True
    return comps, tuple(moves), True


def unknot_verdict(diagram: Diagram) -> Verdict:
    """Decide unknottedness of a one component diagram when possible."""
    if len(diagram.components) != 1:
        raise NotAKnot("unknot question needs a one component diagram")
    entries = diagram.gauss[0]
    c = len(entries) // 2
    if c == 0:
        return Verdict("Yes", "no crossings")
    b = writhe_minus_circles_bound(diagram)
    if b >= 1:
        return Verdict("No", f"genus at least {b} from the writhe bound")
    if c <= _EXACT_LIMIT:
        alex = alexander_of_diagram(diagram)
        if alex != LaurentPoly.one():
            return Verdict("No", f"Alexander polynomial {alex}")
    elif alexander_not_unit(diagram):
        return Verdict("No", "Alexander determinant is not a unit")
    comps, moves, stuck = simplify_code([list(entries)])
    if sum(len(e) for e in comps) == 0:
        return Verdict("Yes", "reduced to zero crossings", moves)
    return Verdict("Unknown", "reduction stalled", moves)


def separable_verdict(diagram: Diagram) -> Verdict:
    """Can the two components be pulled apart by moves we can find?"""
    if len(diagram.components) != 2:
        raise ValueError("separability is a two component question")
    lk = diagram.linking_number(0, 1)
    if lk != 0:
        return Verdict("No", f"linking number {lk}")

    def split(comps):
        owners: dict[int, set[int]] = {}
        for ci, entries in enumerate(comps):
            for cid, _, _ in entries:
                owners.setdefault(cid, set()).add(ci)
        return all(len(v) == 1 for v in owners.values())

    comps0 = [list(e) for e in diagram.gauss]
    if split(comps0):
        return Verdict("Yes", "no crossings between the components")
    comps, moves, stuck = simplify_code(comps0, stop=split)
    if split(comps):
        return Verdict("Yes", "components disconnected after reduction", moves)
    return Verdict("Unknown", "reduction stalled", moves)


# -- positive braids -------------------------------------------------------

def canonical_genus_positive_braid(n_strands: int, braid_word: list[int]) -> int:
    """Genus of the closure of a positive braid, (c - n + 1)/2.

    The closure must be a knot; raises DisconnectedClosure otherwise.
    """
    if any(g <= 0 for g in braid_word):
        raise ValueError("braid word must use positive generators only")
    perm = list(range(n_strands))
    for g in braid_word:
        i = g - 1
        if i + 1 >= n_strands:
            raise ValueError(f"generator {g} out of range")
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    # the closure is a knot exactly when the permutation is one cycle
    ncomp = 0
    left = set(range(n_strands))
    while left:
        ncomp += 1
        at = start = left.pop()
        while perm[at] != start:
            at = perm[at]
            left.remove(at)
    if ncomp != 1:
        raise DisconnectedClosure(f"closure has {ncomp} components")
    return (len(braid_word) - n_strands + 1) // 2


# -- template-level wrappers ------------------------------------------------

def alexander(template: Template, word: Word) -> LaurentPoly:
    return alexander_of_diagram(orbits_to_diagram(template, [word]))


def genus_lower_bound(template: Template, word: Word) -> int:
    return genus_bound_of_diagram(orbits_to_diagram(template, [word]))


def is_unknot(template: Template, word: Word) -> Verdict:
    return unknot_verdict(orbits_to_diagram(template, [word]))


def are_separable(template: Template, word_a: Word, word_b: Word) -> Verdict:
    return separable_verdict(orbits_to_diagram(template, [word_a, word_b]))
