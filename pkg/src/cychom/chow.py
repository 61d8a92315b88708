"""Hodge-number tables and the formal Chow group calculator.

Given h[q][i] = dim H^q(X, Omega^i) for a smooth projective X of dimension d,
``check_vanishing`` scans the entries that must vanish for codimension p, and
``formal_chow_dim`` reports the dimension of the formal completion of CH^p
at an Artinian algebra A, but only when a proven statement applies:

* p = 1: always h[1][0] * dim m_A;
* p >= 2 with the vanishing condition: h[p][p-1] * dim m_A if A is graded,
  or if the ground field is algebraic over Q;
* otherwise the dimension is reported as not determined, with the reason.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import OutOfRange, ParseError, UnknownName

NOT_DETERMINED = "not determined"
LEMMA_P1 = "codimension-one"
THM_GRADED = "graded-A"
THM_ALGEBRAIC = "k-algebraic"


@dataclass(frozen=True)
class HodgeTable:
    d: int
    h: tuple            # h[q][i], (d+1) x (d+1)
    label: str = ""

    def __post_init__(self):
        if self.d < 0:
            raise ParseError("dimension must be non-negative")
        if len(self.h) != self.d + 1 or any(len(r) != self.d + 1 for r in self.h):
            raise ParseError(f"a table of dimension {self.d} needs {self.d + 1} rows of {self.d + 1} entries")
        if any(x < 0 for r in self.h for x in r):
            raise ParseError("Hodge numbers are non-negative")
        if self.h[0][0] < 1:
            raise ParseError("h[0][0] must be at least 1")

    def get(self, q: int, i: int) -> int:
        """h[q][i], zero outside the stored range."""
        if 0 <= q <= self.d and 0 <= i <= self.d:
            return self.h[q][i]
        return 0

    def symmetry_violations(self) -> list[tuple]:
        """Optional lint: positions where h[q][i] != h[i][q]."""
        return [(q, i) for q in range(self.d + 1) for i in range(q + 1, self.d + 1)
                if self.h[q][i] != self.h[i][q]]

    def to_text(self) -> str:
        rows = [" ".join(str(x) for x in r) for r in self.h]
        return "\n".join([f"dim {self.d}"] + rows) + "\n"


@dataclass(frozen=True)
class ArtinSpec:
    dim_mA: int
    graded: bool = False
    k_algebraic_over_Q: bool = True

    def __post_init__(self):
        if self.dim_mA < 0:
            raise ValueError("dim m_A must be non-negative")

    @classmethod
    def from_algebra(cls, A, k_algebraic_over_Q: bool | None = None) -> "ArtinSpec":
        alg = not A.field.transcendental if k_algebraic_over_Q is None else k_algebraic_over_Q
        return cls(A.dim - 1, A.graded, alg)


@dataclass
class DeformationReport:
    p: int
    entries: list = field(default_factory=list)   # [((q, i), observed)]
    verdict: str = "satisfied"                   # satisfied | violated
    dim_formal_chow: object = NOT_DETERMINED
    prorep: str = NOT_DETERMINED
    theorem_used: str | None = None
    reason: str = ""

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "entries": [{"q": q, "i": i, "required": 0, "observed": v} for (q, i), v in self.entries],
            "verdict": self.verdict,
            "dim_formal_chow": self.dim_formal_chow,
            "prorep": self.prorep,
            "theorem_used": self.theorem_used,
            "reason": self.reason,
        }


def required_entries(d: int, p: int) -> list[tuple]:
    """Index set (q, i): i = 0..p-2 and q = p..2p-1-i."""
    return [(q, i) for i in range(0, p - 1) for q in range(p, 2 * p - i)]


def check_vanishing(H: HodgeTable, p: int) -> list[tuple]:
    """[((q, i), observed h[q][i])] over the required index set."""
    if p < 2 or p > H.d:
        raise OutOfRange(f"the vanishing condition needs 2 <= p <= d = {H.d}, got p = {p}")
    return [((q, i), H.get(q, i)) for (q, i) in required_entries(H.d, p)]


def formal_chow_dim(H: HodgeTable, p: int, A: ArtinSpec) -> DeformationReport:
    if p < 1 or p > H.d:
        raise OutOfRange(f"p must satisfy 1 <= p <= d = {H.d}, got p = {p}")
    rep = DeformationReport(p)
    if p == 1:
        v = H.get(1, 0)
        rep.dim_formal_chow = v * A.dim_mA
        rep.prorep = _prorep(v)
        rep.theorem_used = LEMMA_P1
        return rep
    rep.entries = check_vanishing(H, p)
    bad = [(qi, v) for qi, v in rep.entries if v != 0]
    if bad:
        rep.verdict = "violated"
        rep.reason = "vanishing condition violated at " + ", ".join(f"h[{q}][{i}] = {v}" for (q, i), v in bad)
        return rep
    v = H.get(p, p - 1)
    if A.graded:
        rep.theorem_used = THM_GRADED
    elif A.k_algebraic_over_Q:
        rep.theorem_used = THM_ALGEBRAIC
    else:
        rep.reason = ("A is not graded and k is not algebraic over Q; "
                      "no proven statement applies (open question)")
        return rep
    rep.dim_formal_chow = v * A.dim_mA
    rep.prorep = _prorep(v)
    return rep


def _prorep(v: int) -> str:
    return f"pro-representable by V (x) m_A with dim V = {v}"


# -- tables ------------------------------------------------------------------

def projective_space(d: int) -> HodgeTable:
    if d < 0:
        raise OutOfRange("dimension must be non-negative")
    return HodgeTable(d, tuple(tuple(int(q == i) for i in range(d + 1)) for q in range(d + 1)),
                      f"projective_space({d})")


def product(T1: HodgeTable, T2: HodgeTable) -> HodgeTable:
    """Künneth: h[q][i] = sum h1[a][b] h2[q-a][i-b]."""
    d = T1.d + T2.d
    h = [[0] * (d + 1) for _ in range(d + 1)]
    for a in range(T1.d + 1):
        for b in range(T1.d + 1):
            x = T1.h[a][b]
            if not x:
                continue
            for c in range(T2.d + 1):
                for e in range(T2.d + 1):
                    h[a + c][b + e] += x * T2.h[c][e]
    return HodgeTable(d, tuple(tuple(r) for r in h), f"product({T1.label}, {T2.label})")


def parse_table_text(text: str, label: str = "") -> HodgeTable:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty Hodge table")
    m = re.fullmatch(r"dim\s+(\d+)", lines[0])
    if not m:
        raise ParseError(f"first line must be 'dim d', got {lines[0]!r}")
    d = int(m.group(1))
    rows = lines[1:]
    if len(rows) != d + 1:
        raise ParseError(f"expected {d + 1} rows, found {len(rows)}")
    h = []
    for r in rows:
        try:
            vals = [int(x) for x in r.split()]
        except ValueError as exc:
            raise ParseError(f"non-integer entry in row {r!r}") from exc
        if len(vals) != d + 1:
            raise ParseError(f"row {r!r} needs {d + 1} entries")
        h.append(tuple(vals))
    return HodgeTable(d, tuple(h), label)


def load_table(path: str) -> HodgeTable:
    p = Path(path)
    return parse_table_text(p.read_text(), label=str(p))


def builtin_table(name: str) -> HodgeTable:
    """projective_space(d), product(T1, T2) (nested), or a file path."""
    name = name.strip()
    m = re.fullmatch(r"projective_space\((\d+)\)", name)
    if m:
        return projective_space(int(m.group(1)))
    if name.startswith("product(") and name.endswith(")"):
        inner = name[len("product("):-1]
        depth, cut = 0, None
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                cut = i
                break
        if cut is None:
            raise UnknownName(f"product needs two arguments: {name!r}")
        return product(builtin_table(inner[:cut]), builtin_table(inner[cut + 1:]))
    if Path(name).is_file():
        return load_table(name)
    raise UnknownName(f"unknown Hodge table {name!r}")
