"""Branched-surface templates: branch lines joined by twisted strips.

A template is a finite directed multigraph.  Nodes are branch lines; each
line carries an ordered list of outgoing strip slots (expanding direction,
slot 0 leftmost) and an ordered list of incoming strip slots (stacking
order, slot 0 frontmost, i.e. closest to the viewer).  Edges are strips with
an integer number of half twists.  Crossings between strips away from the
branch lines are recorded explicitly with a sign and, for reproducibility,
an ordinal position along each of the two strips involved.

Everything here is immutable plain data; all operations return new objects.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyRestriction


@dataclass(frozen=True)
class BranchLine:
    id: str
    out_slots: tuple[str, ...]   # strip ids leaving, expansion order
    in_slots: tuple[str, ...]    # strip ids arriving, front to back


@dataclass(frozen=True)
class Strip:
    id: str
    src_line: str
    dst_line: str
    half_twists: int


@dataclass(frozen=True)
class Crossing:
    over: str                    # strip id passing in front
    under: str                   # strip id passing behind
    sign: int                    # +1 or -1
    position: tuple[int, int]    # (ordinal along over strip, ordinal along under)


@dataclass(frozen=True)
class Violation:
    kind: str                    # DuplicateSlot | DanglingSlot | EmptyLine | InconsistentCrossingOrder
    subject: str
    detail: str


@dataclass(frozen=True)
class Template:
    lines: tuple[BranchLine, ...]
    strips: tuple[Strip, ...]
    crossings: tuple[Crossing, ...] = ()

    # -- lookups ----------------------------------------------------------

    def line(self, line_id: str) -> BranchLine:
        for ln in self.lines:
            if ln.id == line_id:
                return ln
        raise KeyError(line_id)

    def strip(self, strip_id: str) -> Strip:
        for s in self.strips:
            if s.id == strip_id:
                return s
        raise KeyError(strip_id)

    def strip_index(self, strip_id: str) -> int:
        """Declaration order; used as the total order on symbols."""
        for i, s in enumerate(self.strips):
            if s.id == strip_id:
                return i
        raise KeyError(strip_id)

    def out_slot(self, strip_id: str) -> int:
        s = self.strip(strip_id)
        return self.line(s.src_line).out_slots.index(strip_id)

    def in_slot(self, strip_id: str) -> int:
        s = self.strip(strip_id)
        return self.line(s.dst_line).in_slots.index(strip_id)

    def strips_from(self, line_id: str) -> tuple[str, ...]:
        return self.line(line_id).out_slots

    def strips_into(self, line_id: str) -> tuple[str, ...]:
        return self.line(line_id).in_slots


@dataclass(frozen=True)
class PleatedTemplate(Template):
    """Template of a folded return map, with its embedding remembered.

    Strips are named "1".."n" in unstable-arc order and return to the one
    branch line; the incoming slot order is the meander permutation and
    strip i carries the twist of the i-th homoclinic loop.  A carrier other
    than "unknot" ties the whole body into that knot: every strip threads a
    common tube following it.  Diagram construction for these templates
    replays the fold development instead of using declared crossings.
    """
    carrier: str = "unknot"
    carrier_sign: int = 1

    def pleat_order(self) -> tuple[int, ...]:
        return tuple(int(s) for s in self.lines[0].in_slots)

    def pleat_twists(self) -> tuple[int, ...]:
        return tuple(s.half_twists for s in self.strips)

    def fold_sides(self) -> str:
        """Which half of the section each fold arc occupies.

        A lap with even accumulated twist keeps the expanding orientation,
        so its far end, where the next fold sits, lands on the right.
        """
        tau = self.pleat_twists()
        return "".join("R" if tau[j] % 2 == 0 else "L"
                       for j in range(len(tau) - 1))


# -- validation -----------------------------------------------------------

def validate(template: Template) -> list[Violation]:
    """Structural checks.  Returns a list of violations, empty when sound."""
    out: list[Violation] = []
    line_ids = [ln.id for ln in template.lines]
    strip_ids = [s.id for s in template.strips]

    for lid in set(line_ids):
        if line_ids.count(lid) > 1:
            out.append(Violation("DuplicateSlot", lid, "branch line declared twice"))
    for sid in set(strip_ids):
        if strip_ids.count(sid) > 1:
            out.append(Violation("DuplicateSlot", sid, "strip declared twice"))

    known_strips = set(strip_ids)
    known_lines = set(line_ids)

    out_seen: dict[str, str] = {}
    in_seen: dict[str, str] = {}
    for ln in template.lines:
        if not ln.out_slots:
            out.append(Violation("EmptyLine", ln.id, "no outgoing strips"))
        if not ln.in_slots:
            out.append(Violation("EmptyLine", ln.id, "no incoming strips"))
        for sid in ln.out_slots:
            if sid not in known_strips:
                out.append(Violation("DanglingSlot", ln.id, f"out slot names unknown strip {sid}"))
            if sid in out_seen:
                out.append(Violation("DuplicateSlot", sid, "strip leaves two slots"))
            out_seen[sid] = ln.id
        if len(set(ln.out_slots)) != len(ln.out_slots):
            out.append(Violation("DuplicateSlot", ln.id, "repeated strip in out slots"))
        for sid in ln.in_slots:
            if sid not in known_strips:
                out.append(Violation("DanglingSlot", ln.id, f"in slot names unknown strip {sid}"))
            if sid in in_seen:
                out.append(Violation("DuplicateSlot", sid, "strip arrives at two slots"))
            in_seen[sid] = ln.id
        if len(set(ln.in_slots)) != len(ln.in_slots):
            out.append(Violation("DuplicateSlot", ln.id, "repeated strip in in slots"))

    for s in template.strips:
        if s.src_line not in known_lines:
            out.append(Violation("DanglingSlot", s.id, f"source line {s.src_line} undeclared"))
        elif out_seen.get(s.id) != s.src_line:
            out.append(Violation("DanglingSlot", s.id, "not listed in source line out slots"))
        if s.dst_line not in known_lines:
            out.append(Violation("DanglingSlot", s.id, f"target line {s.dst_line} undeclared"))
        elif in_seen.get(s.id) != s.dst_line:
            out.append(Violation("DanglingSlot", s.id, "not listed in target line in slots"))

    # explicit crossings: strips must exist, ordinals must be unique per strip
    occupied: dict[tuple[str, int], int] = {}
    for k, c in enumerate(template.crossings):
        for sid in (c.over, c.under):
            if sid not in known_strips:
                out.append(Violation("DanglingSlot", sid, f"crossing {k} names unknown strip"))
        if c.sign not in (1, -1):
            out.append(Violation("InconsistentCrossingOrder", c.over, f"crossing {k} sign {c.sign}"))
        i, j = c.position
        if i < 0 or j < 0:
            out.append(Violation("InconsistentCrossingOrder", c.over, f"crossing {k} negative ordinal"))
        if c.over == c.under and i == j:
            out.append(Violation(
                "InconsistentCrossingOrder", c.over,
                f"crossing {k}: a strip crossing itself needs two distinct ordinals"))
        # a self crossing occupies one ordinal on each sheet of the same strip
        slots = [(c.over, i), (c.under, j)] if (c.over, i) != (c.under, j) else [(c.over, i)]
        for key in slots:
            if key in occupied:
                out.append(Violation(
                    "InconsistentCrossingOrder", key[0],
                    f"ordinal {key[1]} used by crossings {occupied[key]} and {k}"))
            occupied[key] = k
    return out


# -- stock templates ------------------------------------------------------

def lorenz() -> Template:
    """One branch line, two untwisted strips, figure of two loops."""
    return Template(
        lines=(BranchLine("b", out_slots=("x", "y"), in_slots=("x", "y")),),
        strips=(Strip("x", "b", "b", 0), Strip("y", "b", "b", 0)),
    )


def horseshoe() -> Template:
    """Like `lorenz` but the second strip carries one positive half twist."""
    return Template(
        lines=(BranchLine("b", out_slots=("x", "y"), in_slots=("x", "y")),),
        strips=(Strip("x", "b", "b", 0), Strip("y", "b", "b", 1)),
    )


def universal() -> Template:
    """Two-line template with strips of mixed twist carrying every link.

    Strips a (plain loop), b1 (negative half twist) and b2 (flat) leave the
    first line; b1 and b2 feed the second line whose single return strip c
    carries a positive half twist.
    """
    return Template(
        lines=(
            BranchLine("L0", out_slots=("a", "b1", "b2"), in_slots=("a", "c")),
            BranchLine("L1", out_slots=("c",), in_slots=("b2", "b1")),
        ),
        strips=(
            Strip("a", "L0", "L0", 0),
            Strip("b1", "L0", "L1", -1),
            Strip("b2", "L0", "L1", 0),
            Strip("c", "L1", "L0", 1),
        ),
    )


# -- operations -----------------------------------------------------------

def mirror(template: Template) -> Template:
    """Reflect through the projection plane.

    Front and back swap: incoming stacking orders reverse, half twists and
    explicit crossing signs negate, over and under strips trade places.
    """
    lines = tuple(
        BranchLine(ln.id, ln.out_slots, tuple(reversed(ln.in_slots)))
        for ln in template.lines)
    strips = tuple(
        Strip(s.id, s.src_line, s.dst_line, -s.half_twists)
        for s in template.strips)
    crossings = tuple(
        Crossing(c.under, c.over, -c.sign, (c.position[1], c.position[0]))
        for c in template.crossings)
    if isinstance(template, PleatedTemplate):
        return PleatedTemplate(lines, strips, crossings,
                               carrier=template.carrier,
                               carrier_sign=-template.carrier_sign)
    return Template(lines, strips, crossings)


def restrict_to_strips(template: Template, keep: set[str] | frozenset[str]) -> Template:
    """Subtemplate on a subset of strips.

    Slot orders compress, explicit crossings between dropped strips vanish
    and surviving crossing ordinals are renumbered.  Raises EmptyRestriction
    when a line that still has slots on one side loses all slots on the
    other (the strips kept would not close up into a semiflow).
    """
    keep = set(keep)
    unknown = keep - {s.id for s in template.strips}
    if unknown:
        raise KeyError(f"unknown strips: {sorted(unknown)}")

    lines = []
    for ln in template.lines:
        outs = tuple(s for s in ln.out_slots if s in keep)
        ins = tuple(s for s in ln.in_slots if s in keep)
        if not outs and not ins:
            continue
        if not outs or not ins:
            raise EmptyRestriction(
                f"line {ln.id} keeps {'outgoing' if outs else 'incoming'} strips only")
        lines.append(BranchLine(ln.id, outs, ins))
    if not lines:
        raise EmptyRestriction("no strips kept")

    strips = tuple(s for s in template.strips if s.id in keep)

    kept_crossings = [c for c in template.crossings if c.over in keep and c.under in keep]
    # renumber ordinals densely per strip, preserving relative order
    per_strip: dict[str, list[int]] = {}
    for c in kept_crossings:
        per_strip.setdefault(c.over, []).append(c.position[0])
        if c.under != c.over:
            per_strip.setdefault(c.under, []).append(c.position[1])
    rank = {
        (sid, old): new
        for sid, ords in per_strip.items()
        for new, old in enumerate(sorted(set(ords)))
    }
    crossings = tuple(
        Crossing(c.over, c.under, c.sign,
                 (rank[(c.over, c.position[0])], rank[(c.under, c.position[1])]))
        for c in kept_crossings)

    if isinstance(template, PleatedTemplate):
        ids = sorted(int(s) for s in keep)
        if ids == list(range(ids[0], ids[-1] + 1)):
            # a contiguous run of laps is itself a folded return map; keep
            # the embedding, relabelling laps from 1
            shift = ids[0] - 1
            ren = {str(i): str(i - shift) for i in ids}
            ln = lines[0]
            return PleatedTemplate(
                (BranchLine(ln.id,
                            tuple(ren[s] for s in ln.out_slots),
                            tuple(ren[s] for s in ln.in_slots)),),
                tuple(Strip(ren[s.id], s.src_line, s.dst_line, s.half_twists)
                      for s in strips),
                (),
                carrier=template.carrier,
                carrier_sign=template.carrier_sign)
        # scattered laps do not form a folded return map on their own; the
        # combinatorial restriction survives but the embedding is forgotten
    return Template(tuple(lines), strips, crossings)


# -- text format ----------------------------------------------------------

def serialize_template(template: Template) -> str:
    """Plain text form; `parse_template` inverts it byte for byte."""
    out = []
    if isinstance(template, PleatedTemplate):
        out.append(f"pleated carrier={template.carrier} "
                   f"sign={template.carrier_sign:+d}")
    for ln in template.lines:
        out.append(
            f"branchline {ln.id} out={','.join(ln.out_slots)} in={','.join(ln.in_slots)}")
    for s in template.strips:
        src_slot = template.line(s.src_line).out_slots.index(s.id)
        dst_slot = template.line(s.dst_line).in_slots.index(s.id)
        out.append(
            f"strip {s.id} {s.src_line}.{src_slot} -> {s.dst_line}.{dst_slot} "
            f"halftwists={s.half_twists}")
    for c in template.crossings:
        out.append(
            f"crossing {c.over}/{c.under} sign={c.sign:+d} "
            f"pos={c.position[0]},{c.position[1]}")
    return "\n".join(out) + "\n"


def parse_template(text: str) -> Template:
    lines: list[BranchLine] = []
    strip_rows: list[tuple[str, str, int, str, int, int]] = []
    crossings: list[Crossing] = []
    pleated: tuple[str, int] | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        row = raw.split("#", 1)[0].strip()
        if not row:
            continue
        tok = row.split()
        try:
            if tok[0] == "pleated":
                carrier = tok[1].split("=", 1)[1]
                sgn = int(tok[2].split("=", 1)[1])
                pleated = (carrier, sgn)
            elif tok[0] == "branchline":
                fields = {}
                for part in tok[2:]:
                    key, val = part.split("=", 1)
                    fields[key] = tuple(v for v in val.split(",") if v)
                lines.append(BranchLine(tok[1], fields.get("out", ()), fields.get("in", ())))
            elif tok[0] == "strip":
                sid = tok[1]
                src_line, src_slot = tok[2].rsplit(".", 1)
                if tok[3] != "->":
                    raise ValueError("missing ->")
                dst_line, dst_slot = tok[4].rsplit(".", 1)
                key, val = tok[5].split("=", 1)
                if key != "halftwists":
                    raise ValueError("expected halftwists=")
                strip_rows.append(
                    (sid, src_line, int(src_slot), dst_line, int(dst_slot), int(val)))
            elif tok[0] == "crossing":
                over, under = tok[1].split("/", 1)
                sign = int(tok[2].split("=", 1)[1])
                i, j = tok[3].split("=", 1)[1].split(",")
                crossings.append(Crossing(over, under, sign, (int(i), int(j))))
            else:
                raise ValueError(f"unknown record {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}: {exc}") from None

    by_line = {ln.id: ln for ln in lines}
    strips = []
    for sid, src_line, src_slot, dst_line, dst_slot, twists in strip_rows:
        for which, lid, slot, attr in (
                ("source", src_line, src_slot, "out_slots"),
                ("target", dst_line, dst_slot, "in_slots")):
            if lid not in by_line:
                raise ValueError(f"strip {sid}: {which} line {lid} undeclared")
            slots = getattr(by_line[lid], attr)
            if slot >= len(slots) or slots[slot] != sid:
                raise ValueError(
                    f"strip {sid}: declared {which} slot {lid}.{slot} does not match "
                    f"line record {slots}")
        strips.append(Strip(sid, src_line, dst_line, twists))
    if pleated is not None:
        return PleatedTemplate(tuple(lines), tuple(strips), tuple(crossings),
                               carrier=pleated[0], carrier_sign=pleated[1])
    return Template(tuple(lines), tuple(strips), tuple(crossings))
