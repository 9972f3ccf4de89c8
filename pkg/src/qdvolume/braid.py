"""Braid words and the doubled-strand crossing diagram.

Every braid strand carries two momentum lines, so a word on n strands has
2n lines.  Letter +-i acts on lines 2i-2 .. 2i+1 (0-based).  Each crossing
consumes the four current segments on those lines (top slots p1..p4) and
creates four new ones (bottom slots p1'..p4').
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field


class BraidSyntaxError(ValueError):
    def __init__(self, msg, position=None):
        if position is not None:
            msg = f"{msg} at position {position}"
        super().__init__(msg)
        self.position = position


@dataclass(frozen=True)
class BraidWord:
    n_strands: int
    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.n_strands < 1:
            raise ValueError("need at least one strand")
        for x in self.letters:
            if x == 0 or abs(x) > self.n_strands - 1:
                raise ValueError(f"generator {x} out of range for {self.n_strands} strands")

    def __str__(self):
        return format_braid(self)


_TOKEN = re.compile(r"\S+")
_NUM = re.compile(r"[+-]?\d+$")
_SYM = re.compile(r"[sS](\d+)(?:\^(?:\{)?([+-]?1)(?:\})?)?$")
_HEADER = re.compile(r"strands\s*=\s*(\S+)")


def parse_braid(text: str) -> BraidWord:
    """Parse "1 -2 1 -2" or "s1 s2^-1 s1 s2^-1", optionally with "strands=N"."""
    n = None
    m = _HEADER.search(text)
    body = text
    if m:
        if not re.fullmatch(r"\d+", m.group(1)):
            raise BraidSyntaxError(f"bad strand count {m.group(1)!r}", m.start(1))
        n = int(m.group(1))
        body = text[:m.start()] + " " * (m.end() - m.start()) + text[m.end():]
    letters = []
    for tok in _TOKEN.finditer(body):
        s = tok.group()
        if _NUM.match(s):
            v = int(s)
            if v == 0:
                raise BraidSyntaxError("generator index 0", tok.start())
        else:
            sm = _SYM.match(s)
            if not sm:
                raise BraidSyntaxError(f"unexpected token {s!r}", tok.start())
            v = int(sm.group(1))
            if v == 0:
                raise BraidSyntaxError("generator index 0", tok.start())
            if sm.group(2) is not None and int(sm.group(2)) < 0:
                v = -v
        letters.append(v)
    if not letters:
        if n is None:
            raise BraidSyntaxError("empty braid word")
        return BraidWord(n, ())   # identity braid
    if n is None:
        n = max(abs(x) for x in letters) + 1
    for x in letters:
        if abs(x) > n - 1:
            raise BraidSyntaxError(f"generator {x} out of range for {n} strands")
    return BraidWord(n, tuple(letters))


def format_braid(w: BraidWord) -> str:
    body = " ".join(str(x) for x in w.letters)
    natural = (max(abs(x) for x in w.letters) + 1) if w.letters else 1
    if w.n_strands != natural or not w.letters:
        return f"strands={w.n_strands} {body}".strip()
    return body


def writhe(w: BraidWord) -> int:
    return sum(1 if x > 0 else -1 for x in w.letters)


@dataclass(frozen=True)
class Crossing:
    sign: int
    top: tuple     # p1..p4
    bottom: tuple  # p1'..p4'
    lines: tuple   # the four line positions

    @property
    def slots(self):
        return self.top + self.bottom


@dataclass(frozen=True)
class Diagram:
    word: BraidWord
    segments: tuple
    crossings: tuple
    open_segments: tuple  # (top line 1, top line 2, bottom line 1, bottom line 2) of strand 1
    pinned: tuple         # (top line 1, bottom line 2)
    lines: tuple = field(default=())  # line position of every segment

    def incidence(self):
        """Count of (outgoing, incoming) slot uses per segment."""
        out = {s: 0 for s in self.segments}
        inc = {s: 0 for s in self.segments}
        for c in self.crossings:
            for s in c.top:
                inc[s] += 1
            for s in c.bottom:
                out[s] += 1
        return out, inc


def build_diagram(w: BraidWord) -> Diagram:
    npos = 2 * w.n_strands
    cur = list(range(npos))
    line_of = list(range(npos))
    nseg = npos
    raw = []
    for x in w.letters:
        i = abs(x)
        pos = (2 * i - 2, 2 * i - 1, 2 * i, 2 * i + 1)
        top = tuple(cur[p] for p in pos)
        bot = []
        for p in pos:
            cur[p] = nseg
            line_of.append(p)
            bot.append(nseg)
            nseg += 1
        raw.append((1 if x > 0 else -1, top, tuple(bot), pos))

    parent = list(range(nseg))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    # close every strand except strand 1 (lines 0 and 1 stay open)
    for p in range(2, npos):
        a, b = find(cur[p]), find(p)
        if a != b:
            parent[max(a, b)] = min(a, b)

    # relabel roots 0..S-1 in order of first appearance
    label = {}
    for s in range(nseg):
        r = find(s)
        if r not in label:
            label[r] = len(label)

    def L(s):
        return label[find(s)]

    crossings = tuple(Crossing(sg, tuple(L(s) for s in top), tuple(L(s) for s in bot), pos)
                      for sg, top, bot, pos in raw)
    lines = [0] * len(label)
    for s in range(nseg):
        lines[L(s)] = line_of[s]
    opens = (L(0), L(1), L(cur[0]), L(cur[1]))
    return Diagram(w, tuple(range(len(label))), crossings, opens, (opens[0], opens[3]),
                   tuple(lines))
