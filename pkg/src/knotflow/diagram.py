"""Planar diagrams of closed orbits carried by a template.

The drawing convention is fixed once and reused everywhere, so crossing data
is reproducible bit for bit:

* Strands on a branch line sit side by side in itinerary order
  (symbolic.strand_order); slot 0 of the incoming stack is frontmost.
* Each strip carries its bundle of strands as a flat band.  Explicit
  template crossings happen first, in ordinal order; the band's half twists
  are gathered into a twist box at the end of the strip; a half twist
  reverses the band, each strand pair crossing once, left strand over for a
  positive twist.
* Where bundles land on the next line, strands fan out to their itinerary
  positions.  Two strands arriving through different strips from the same
  source line cross once when their departure order (corrected by explicit
  band crossings between the two strips) disagrees with their landing
  order.  The strand arriving through the strip with the smaller incoming
  slot is in front and passes over.  Bundles whose strips start on
  different source lines are laid out side by side and do not cross here;
  any crossing between them must be declared explicitly on the template.
* Sign convention: both strands oriented downward, left over right is +1.

All periodic orbits must be primitive canonical words of the template.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .symbolic import Word, _itinerary_cmp, format_word
from .templates import PleatedTemplate, Template


@dataclass(frozen=True)
class DiagramCrossing:
    id: int
    sign: int
    over_comp: int               # component index of the over strand
    under_comp: int
    kind: str                    # "twist" | "merge" | "explicit"
    line: str | None             # branch line for merge crossings
    over_strip: str | None       # strip carrying the over strand here
    under_strip: str | None
    over_slot: int | None        # incoming slot (merge crossings only)
    under_slot: int | None


@dataclass(frozen=True)
class Diagram:
    components: tuple[str, ...]
    crossings: tuple[DiagramCrossing, ...]
    # per component, entries (crossing id, "O" or "U", sign) in strand order
    gauss: tuple[tuple[tuple[int, str, int], ...], ...]

    def writhe(self, comp: int = 0) -> int:
        return sum(c.sign for c in self.crossings
                   if c.over_comp == comp and c.under_comp == comp)

    def linking_number(self, comp_a: int, comp_b: int) -> int:
        if comp_a == comp_b:
            raise ValueError("linking number needs two distinct components")
        total = sum(c.sign for c in self.crossings
                    if {c.over_comp, c.under_comp} == {comp_a, comp_b})
        assert total % 2 == 0, "inter-component crossings pair up"
        return total // 2


def _kneading_positions(template: Template, words: list[Word]):
    """Occurrence order on every branch line.

    Returns (per-line ordered occurrence lists, occurrence -> rank map).
    An occurrence (ci, p) is component ci sitting on a line about to flow
    into strip words[ci][p].
    """
    from functools import cmp_to_key

    per_line: dict[str, list[tuple[int, int]]] = {ln.id: [] for ln in template.lines}
    for ci, w in enumerate(words):
        for p, sid in enumerate(w):
            per_line[template.strip(sid).src_line].append((ci, p))

    rank: dict[tuple[int, int], int] = {}
    for lid, occs in per_line.items():
        def cmp(a, b):
            c = _itinerary_cmp(template, words[a[0]], a[1], words[b[0]], b[1])
            if c:
                return c
            if a == b:
                return 0
            raise ValueError(
                f"orbits {words[a[0]]} and {words[b[0]]} share an itinerary")
        occs.sort(key=cmp_to_key(cmp))
        for i, occ in enumerate(occs):
            rank[occ] = i
    return per_line, rank


def orbits_to_diagram(template: Template, words: list[Word]) -> Diagram:
    """Deterministic planar diagram of a set of closed orbits."""
    words = list(words)
    if len(set(words)) != len(words):
        raise ValueError("duplicate orbit words")
    if isinstance(template, PleatedTemplate):
        return _folded_diagram(template, words)
    n_comp = len(words)
    per_line, rank = _kneading_positions(template, words)

    # bundles: strip id -> passages (ci, p) in band order (entry order)
    bundles: dict[str, list[tuple[int, int]]] = {s.id: [] for s in template.strips}
    for lid, occs in per_line.items():
        for occ in occs:
            ci, p = occ
            bundles[words[ci][p]].append(occ)

    band_pos = {sid: {occ: i for i, occ in enumerate(occs)}
                for sid, occs in bundles.items()}

    crossings: list[DiagramCrossing] = []
    # per passage (ci, p): list of (sort_key, crossing id, role, sign)
    schedule: dict[tuple[int, int], list] = {
        (ci, p): [] for ci, w in enumerate(words) for p in range(len(w))}

    def new_crossing(sign, over_occ, under_occ, kind, line=None,
                     over_strip=None, under_strip=None,
                     over_slot=None, under_slot=None) -> int:
        cid = len(crossings)
        crossings.append(DiagramCrossing(
            cid, sign, over_occ[0], under_occ[0], kind, line,
            over_strip, under_strip, over_slot, under_slot))
        return cid

    # explicit template crossings: every passage pair of the two bands
    # crosses once; a band crossing itself visits the spot on two ordinals
    for rec in template.crossings:
        over_band = bundles[rec.over]
        under_band = bundles[rec.under]
        ord_over, ord_under = rec.position
        for u in over_band:
            for v in under_band:
                # u == v is fine: the strand kinks, passing its own crossing
                # on both sheets (ordinals differ for a self crossing record)
                cid = new_crossing(rec.sign, u, v, "explicit",
                                   over_strip=rec.over, under_strip=rec.under)
                schedule[u].append(((0, ord_over, band_pos[rec.under][v]), cid, "O", rec.sign))
                schedule[v].append(((0, ord_under, band_pos[rec.over][u]), cid, "U", rec.sign))

    # twist boxes: |m| successive band reversals at the end of each strip
    for s in template.strips:
        band = list(bundles[s.id])
        k = len(band)
        if k < 2 or s.half_twists == 0:
            continue
        sgn = 1 if s.half_twists > 0 else -1
        seq = 0
        for _ in range(abs(s.half_twists)):
            for sweep in range(k - 1):
                for j in range(k - 1 - sweep):
                    left, right = band[j], band[j + 1]
                    over, under = (left, right) if sgn > 0 else (right, left)
                    cid = new_crossing(sgn, over, under, "twist",
                                       over_strip=s.id, under_strip=s.id)
                    schedule[left].append(((1, seq, 0), cid, "O" if sgn > 0 else "U", sgn))
                    schedule[right].append(((1, seq, 0), cid, "U" if sgn > 0 else "O", sgn))
                    band[j], band[j + 1] = right, left
                    seq += 1

    # sign flips between a pair of strips: parity of explicit band crossings
    swap_parity: dict[frozenset, int] = {}
    for rec in template.crossings:
        if rec.over != rec.under:
            key = frozenset((rec.over, rec.under))
            swap_parity[key] = swap_parity.get(key, 0) ^ 1

    # merge charts: strands fan from arrival order to line order
    for ln in template.lines:
        occs = per_line[ln.id]
        arrivals = []
        for occ in occs:
            ci, p = occ
            prev = words[ci][(p - 1) % len(words[ci])]
            arrivals.append((occ, prev))
        groups: dict[str, list[tuple[tuple[int, int], str]]] = {}
        for occ, prev in arrivals:
            groups.setdefault(template.strip(prev).src_line, []).append((occ, prev))

        for src_line, members in groups.items():
            if len(members) < 2:
                continue

            def pre_cmp(a, b):
                (occ_a, strip_a), (occ_b, strip_b) = a, b
                land = -1 if rank[occ_a] < rank[occ_b] else 1
                if strip_a == strip_b:
                    return land  # band order survives to the landing
                ci_a, p_a = occ_a
                ci_b, p_b = occ_b
                dep = _itinerary_cmp(
                    template,
                    words[ci_a], (p_a - 1) % len(words[ci_a]),
                    words[ci_b], (p_b - 1) % len(words[ci_b]))
                if swap_parity.get(frozenset((strip_a, strip_b)), 0):
                    dep = -dep
                return dep

            from functools import cmp_to_key
            pre = sorted(members, key=cmp_to_key(pre_cmp))
            land = sorted(members, key=lambda m: rank[m[0]])
            x0 = {m[0]: i for i, m in enumerate(pre)}
            x1 = {m[0]: i for i, m in enumerate(land)}
            for ia in range(len(members)):
                for ib in range(ia + 1, len(members)):
                    occ_a, strip_a = pre[ia]
                    occ_b, strip_b = pre[ib]
                    if x1[occ_a] < x1[occ_b]:
                        continue  # not inverted, wires stay parallel
                    slot_a = template.in_slot(strip_a)
                    slot_b = template.in_slot(strip_b)
                    if slot_a < slot_b:
                        over_m, under_m = (occ_a, strip_a, slot_a), (occ_b, strip_b, slot_b)
                    else:
                        over_m, under_m = (occ_b, strip_b, slot_b), (occ_a, strip_a, slot_a)
                    sign = 1 if x0[over_m[0]] < x0[under_m[0]] else -1
                    cid = new_crossing(
                        sign, over_m[0], under_m[0], "merge", line=ln.id,
                        over_strip=over_m[1], under_strip=under_m[1],
                        over_slot=over_m[2], under_slot=under_m[2])
                    da = (x1[occ_a] - x0[occ_a]) - (x1[occ_b] - x0[occ_b])
                    t = Fraction(x0[occ_b] - x0[occ_a], da)
                    # the chart sits at the end of the previous segment
                    seg_a = (occ_a[0], (occ_a[1] - 1) % len(words[occ_a[0]]))
                    seg_b = (occ_b[0], (occ_b[1] - 1) % len(words[occ_b[0]]))
                    role_a = "O" if over_m[0] == occ_a else "U"
                    schedule[seg_a].append(((2, t, x1[occ_b]), cid, role_a, sign))
                    schedule[seg_b].append(((2, t, x1[occ_a]), cid,
                                            "U" if role_a == "O" else "O", sign))

    gauss = []
    for ci, w in enumerate(words):
        entries: list[tuple[int, str, int]] = []
        for p in range(len(w)):
            part = sorted(schedule[(ci, p)], key=lambda e: e[0])
            entries.extend((cid, role, sgn) for _, cid, role, sgn in part)
        gauss.append(tuple(entries))

    return Diagram(tuple(format_word(w) for w in words),
                   tuple(crossings), tuple(gauss))


def _folded_diagram(template: PleatedTemplate, words: list[Word]) -> Diagram:
    """Diagram of orbits on a folded return map, drawn as a development.

    The image of the branch line is laid down one lap at a time.  Laying
    down lap j+1 is one join; a join consists of the twist gained at the
    fold (half turn swings of everything not yet parked), the expansion of
    the new lap across the already parked material, and the transit of
    the remaining material carried along behind it.  Over and under follow
    from stacking depth; slot 0 is frontmost.  A knotted carrier adds its
    own crossing boxes, traversed once per passage, before any fold work.
    """
    n = len(template.strips)
    order = template.pleat_order()
    sides = template.fold_sides()
    tau = template.pleat_twists()
    per_line, rank = _kneading_positions(template, words)

    slot = {i: order.index(i) for i in range(1, n + 1)}
    passages = [(ci, p) for ci, w in enumerate(words) for p in range(len(w))]
    strip_of = {(ci, p): int(words[ci][p]) for (ci, p) in passages}
    K = {occ: rank[occ] for occ in passages}            # position on the line
    X = {(ci, p): rank[(ci, (p + 1) % len(words[ci]))]  # landing position
         for (ci, p) in passages}
    line_id = template.lines[0].id

    def zone(j):
        # the entry arc occupies the edge opposite the first fold
        if j == 0:
            if n == 1 or not sides:
                return "R"
            return "L" if sides[0] == "R" else "R"
        return sides[j - 1]

    incr = [tau[0]] + [tau[j] - tau[j - 1] for j in range(1, n)]

    crossings: list[DiagramCrossing] = []
    schedule: dict[tuple[int, int], list] = {occ: [] for occ in passages}

    def new_crossing(sign, over_occ, under_occ, kind, line=None,
                     over_slot=None, under_slot=None) -> int:
        cid = len(crossings)
        crossings.append(DiagramCrossing(
            cid, sign, over_occ[0], under_occ[0], kind, line,
            str(strip_of[over_occ]), str(strip_of[under_occ]),
            over_slot, under_slot))
        return cid

    if template.carrier == "trefoil":
        # the tube detours around a closed braid box of three crossings;
        # each trip passes the box twice, so every ordered passage pair
        # (first pass, second pass) meets once per box crossing
        csgn = template.carrier_sign
        allp = sorted(passages, key=lambda occ: K[occ])
        for b in range(3):
            # braid seats swap after each crossing; the seat 0 bundle is
            # over at a positive crossing and under at a negative one
            first_over = (b % 2 == 0) == (csgn > 0)
            for u in allp:
                for v in allp:
                    over, under = (u, v) if first_over else (v, u)
                    cid = new_crossing(csgn, over, under, "explicit")
                    schedule[u].append(((-1, 1, b, K[v]), cid,
                                        "O" if first_over else "U", csgn))
                    schedule[v].append(((-1, 2, b, K[u]), cid,
                                        "U" if first_over else "O", csgn))

    for j in range(n):
        e = zone(j)
        d_in = 1 if e == "R" else -1
        s = incr[j]
        rho = 1 if s > 0 else -1
        arm = sorted((occ for occ in passages if strip_of[occ] >= j + 1),
                     key=lambda occ: K[occ])

        # fold twist: |s| half turn swings of the whole arm; each swing
        # reverses the band, and its midpoint alternates front and back
        seq = 0
        band = list(arm)
        for t in range(1, abs(s) + 1):
            mid_back = (rho * d_in * (-1) ** (t - 1)) > 0
            k = len(band)
            for sweep in range(k - 1):
                for q in range(k - 1 - sweep):
                    a, b = band[q], band[q + 1]
                    near, far = (a, b) if K[a] < K[b] else (b, a)
                    over, under = (near, far) if mid_back else (far, near)
                    kind = ("twist" if strip_of[a] == strip_of[b]
                            else "explicit")
                    cid = new_crossing(rho, over, under, kind)
                    schedule[a].append(((j, 0, t, seq), cid,
                                        "O" if over == a else "U", rho))
                    schedule[b].append(((j, 0, t, seq), cid,
                                        "O" if over == b else "U", rho))
                    band[q], band[q + 1] = band[q + 1], band[q]
                    seq += 1

        # expansion: lap j+1 sweeps from the zone edge to its landing,
        # crossing parked passages in between; trailing material crosses
        # all of them in transit at the new lap's depth
        lap = j + 1
        dir_x = -1 if e == "R" else 1
        movers = [occ for occ in passages if strip_of[occ] == lap]
        trailing = [occ for occ in passages if strip_of[occ] >= lap + 1]
        parked = [occ for occ in passages if strip_of[occ] <= j]
        for v in parked:
            sv = strip_of[v]
            over_is_lap = slot[lap] < slot[sv]
            sgn = dir_x if over_is_lap else -dir_x
            for u in movers:
                hit = X[v] > X[u] if e == "R" else X[v] < X[u]
                if not hit:
                    continue
                over, under = (u, v) if over_is_lap else (v, u)
                cid = new_crossing(sgn, over, under, "merge", line=line_id,
                                   over_slot=slot[strip_of[over]],
                                   under_slot=slot[strip_of[under]])
                key_u = (j, 1, -X[v] if e == "R" else X[v], 0)
                key_v = (j, 1, 10 ** 9, -K[u])
                schedule[u].append((key_u, cid, "O" if over is u else "U", sgn))
                schedule[v].append((key_v, cid, "O" if over is v else "U", sgn))
            for u in trailing:
                over, under = (u, v) if over_is_lap else (v, u)
                cid = new_crossing(sgn, over, under, "explicit")
                key_u = (j, 1, -X[v] if e == "R" else X[v], 0)
                key_v = (j, 1, 10 ** 9, -K[u])
                schedule[u].append((key_u, cid, "O" if over is u else "U", sgn))
                schedule[v].append((key_v, cid, "O" if over is v else "U", sgn))

    gauss = []
    for ci, w in enumerate(words):
        entries: list[tuple[int, str, int]] = []
        for p in range(len(w)):
            part = sorted(schedule[(ci, p)], key=lambda x: x[0])
            entries.extend((cid, role, sgn) for _, cid, role, sgn in part)
        gauss.append(tuple(entries))
    return Diagram(tuple(format_word(w) for w in words),
                   tuple(crossings), tuple(gauss))


# -- orbit measurements ---------------------------------------------------

def writhe(template: Template, word: Word) -> int:
    return orbits_to_diagram(template, [word]).writhe(0)


def twist_of_orbit(template: Template, word: Word) -> int:
    """Self linking of the orbit with its push off along the band.

    Counts 2 per self crossing of the core plus one per half twist of strip
    traversed, signed.
    """
    d = orbits_to_diagram(template, [word])
    return 2 * d.writhe(0) + sum(template.strip(sid).half_twists for sid in word)


def linking_number(template: Template, word_a: Word, word_b: Word) -> int:
    d = orbits_to_diagram(template, [word_a, word_b])
    return d.linking_number(0, 1)


# -- braid closures (used as an independent construction in tests) --------

def braid_to_diagram(n_strands: int, braid_word: list[int]) -> Diagram:
    """Closure of a braid; generator i (1 based) crosses strands i, i+1.

    Positive generators put the left strand on top.  Components follow the
    cycles of the underlying permutation.
    """
    if n_strands < 1:
        raise ValueError("need at least one strand")
    for g in braid_word:
        if g == 0 or abs(g) >= n_strands:
            raise ValueError(f"generator {g} out of range")

    # walk the braid once, recording for each vertical strand the crossings
    pos_to_strand = list(range(n_strands))     # position -> strand id at this level
    visits: dict[int, list[tuple[int, str, int]]] = {i: [] for i in range(n_strands)}
    perm = list(range(n_strands))              # strand id at top -> position at bottom
    for cid, g in enumerate(braid_word):
        i = abs(g) - 1
        left, right = pos_to_strand[i], pos_to_strand[i + 1]
        sign = 1 if g > 0 else -1
        over, under = (left, right) if g > 0 else (right, left)
        visits[over].append((cid, "O", sign))
        visits[under].append((cid, "U", sign))
        pos_to_strand[i], pos_to_strand[i + 1] = right, left
    for pos, strand in enumerate(pos_to_strand):
        perm[strand] = pos

    # closure: bottom position p reconnects to top position p
    comp_of = [-1] * n_strands
    comps: list[list[int]] = []
    for start in range(n_strands):
        if comp_of[start] != -1:
            continue
        cyc = []
        s = start
        while comp_of[s] == -1:
            comp_of[s] = len(comps)
            cyc.append(s)
            s = perm[s]
        comps.append(cyc)

    crossings = []
    for cid, g in enumerate(braid_word):
        sign = 1 if g > 0 else -1
        over = under = None
        for strand, vis in visits.items():
            for c, role, _ in vis:
                if c == cid:
                    if role == "O":
                        over = strand
                    else:
                        under = strand
        crossings.append(DiagramCrossing(
            cid, sign, comp_of[over], comp_of[under], "explicit",
            None, None, None, None, None))

    gauss = []
    for cyc in comps:
        entries = []
        for strand in cyc:
            entries.extend(visits[strand])
        gauss.append(tuple(entries))
    return Diagram(tuple(f"strand{c[0]}" for c in comps),
                   tuple(crossings), tuple(gauss))


# -- schematic rendering --------------------------------------------------

def render_svg(template: Template, words: list[Word] | None = None) -> str:
    """Schematic picture: branch lines, strips, and (optionally) strands.

    This is a reading aid, not an isotopy-accurate embedding; crossing data
    comes from orbits_to_diagram.
    """
    width = 760
    lane_h = 150
    lines = template.lines
    y_of = {ln.id: 60 + i * lane_h for i, ln in enumerate(lines)}
    parts = []
    height = 60 + len(lines) * lane_h
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">')
    parts.append('<style>text{font:12px monospace}</style>')
    for ln in lines:
        y = y_of[ln.id]
        parts.append(f'<line x1="40" y1="{y}" x2="{width - 40}" y2="{y}" '
                     'stroke="black" stroke-width="3"/>')
        parts.append(f'<text x="8" y="{y + 4}">{ln.id}</text>')
    for s in template.strips:
        y0, y1 = y_of[s.src_line], y_of[s.dst_line]
        ln = template.line(s.src_line)
        k = len(ln.out_slots)
        x0 = 40 + (ln.out_slots.index(s.id) + 1) * (width - 80) / (k + 1)
        ln2 = template.line(s.dst_line)
        k2 = len(ln2.in_slots)
        x1 = 40 + (ln2.in_slots.index(s.id) + 1) * (width - 80) / (k2 + 1)
        if y0 == y1:
            ym = y0 + lane_h * 0.55
            parts.append(
                f'<path d="M {x0:.1f} {y0} C {x0:.1f} {ym:.1f} {x1:.1f} {ym:.1f} '
                f'{x1:.1f} {y1}" fill="none" stroke="gray" stroke-width="8" opacity="0.6"/>')
            ty = ym
        else:
            parts.append(
                f'<path d="M {x0:.1f} {y0} C {x0:.1f} {(y0 + y1) / 2:.1f} '
                f'{x1:.1f} {(y0 + y1) / 2:.1f} {x1:.1f} {y1}" fill="none" '
                f'stroke="gray" stroke-width="8" opacity="0.6"/>')
            ty = (y0 + y1) / 2
        label = s.id if s.half_twists == 0 else f"{s.id} ({s.half_twists:+d})"
        parts.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{ty:.1f}">{label}</text>')
    if words:
        d = orbits_to_diagram(template, list(words))
        y = height - 16
        for ci, label in enumerate(d.components):
            wr = d.writhe(ci)
            parts.append(f'<text x="40" y="{y - 14 * (len(d.components) - ci - 1)}">'
                         f'{label}: writhe {wr:+d}, {sum(1 for c in d.crossings if ci in (c.over_comp, c.under_comp))} crossings</text>')
    parts.append("</svg>")
    return "\n".join(parts)
