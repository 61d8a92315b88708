"""Finite-dimensional commutative algebras by basis and structure constants.

The algebras of interest are monomial quotients of polynomial rings
(truncated polynomial algebras, graded Artinian local algebras) and their
tensor products.  Arbitrary structure-constant tables are accepted as well.
"""
from __future__ import annotations

import re
from fractions import Fraction
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .errors import FieldMismatch, NotArtinian, OutOfRange, ParseError, UnknownName
from .linalg import Subspace, add_into
from .scalars import QQ, GroundField, field_from_name


@dataclass(frozen=True, eq=False)
class FinCommAlgebra:
    """Commutative unital algebra with basis ``e_0..e_{dim-1}``.

    ``mult[i][j]`` is the product ``e_i e_j`` as a sparse coordinate dict.
    ``degrees[i]`` is a tuple grading key; every product of basis elements
    must lie in the span of elements whose key is the sum of the two keys.
    Monomial algebras record their generators and exponent vectors, and then
    the key is the exponent vector itself (a multigrading).
    """

    field: GroundField
    labels: tuple
    unit_index: int
    mult: tuple
    weights: tuple
    aug: tuple
    graded: bool = False
    degrees: tuple = ()
    variables: tuple | None = None
    var_weights: tuple | None = None
    exponents: tuple | None = None
    factors: tuple = ()
    factor_index: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def is_monomial(self) -> bool:
        return self.exponents is not None

    @property
    def nonunit(self) -> tuple:
        return tuple(i for i in range(self.dim) if i != self.unit_index)

    def product(self, i: int, j: int) -> dict:
        return self.mult[i][j]

    def multiply(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                add_into(out, self.mult[i][j], a * b)
        return out

    def key(self, i: int) -> tuple:
        return self.degrees[i] if self.degrees else ()

    def is_adapted(self) -> bool:
        """True if the augmentation is the coordinate of the unit."""
        return all((self.aug[i] == 1) if i == self.unit_index else (not self.aug[i])
                   for i in range(self.dim))

    def monomial_index(self) -> dict:
        return {e: i for i, e in enumerate(self.exponents)} if self.is_monomial else {}

    def __repr__(self):
        return f"FinCommAlgebra(dim={self.dim}, field={self.field.name}, basis={list(self.labels)})"


@dataclass(frozen=True)
class AugIdeal:
    parent: FinCommAlgebra
    basis: Subspace

    @property
    def dim(self) -> int:
        return self.basis.dim


@dataclass(frozen=True)
class GradedPolySlice:
    """Weight-graded polynomial ring Q[x_1..x_r], handled weight by weight up to ``W``."""

    num_vars: int
    var_weights: tuple
    truncation_weight: int
    names: tuple = ()

    def __post_init__(self):
        if len(self.var_weights) != self.num_vars:
            raise ValueError("one weight per variable is required")
        if any(w < 1 for w in self.var_weights):
            raise ValueError("variable weights must be >= 1")
        if not self.names:
            default = ("x", "y", "z", "u", "v", "w")
            names = default[: self.num_vars] if self.num_vars <= len(default) else \
                tuple(f"x{i}" for i in range(self.num_vars))
            object.__setattr__(self, "names", tuple(names))

    def algebra(self) -> FinCommAlgebra:
        """Quotient by all monomials of weight > W.

        Its weight-w pieces for w <= W (of chains, forms, homology) coincide
        with those of the polynomial ring, since no product of total weight
        at most W meets the truncation.
        """
        return _truncated_poly_cached(self.names, self.var_weights, self.truncation_weight)


def weight_slice_basis(P: GradedPolySlice, w: int) -> list[tuple]:
    """Exponent vectors of the monomials of weight ``w``."""
    if not 0 <= w <= P.truncation_weight:
        raise OutOfRange(f"weight {w} outside 0..{P.truncation_weight}")
    return _monomials_of_weight(P.var_weights, w)


def _monomials_of_weight(weights: Sequence[int], w: int) -> list[tuple]:
    if not weights:
        return [()] if w == 0 else []
    out = []
    first, rest = weights[0], weights[1:]
    for a in range(w // first, -1, -1):
        for tail in _monomials_of_weight(rest, w - a * first):
            out.append((a,) + tail)
    return out


# -- construction ------------------------------------------------------------

def normalize_scalar(x):
    """Integral rationals become ``int`` so that exact elimination stays fraction-free."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def monomial_label(names: Sequence[str], e: Sequence[int]) -> str:
    parts = []
    for n, a in zip(names, e):
        if a == 1:
            parts.append(n)
        elif a > 1:
            parts.append(f"{n}^{a}")
    return "*".join(parts) if parts else "1"


def parse_monomial(text: str, names: Sequence[str]) -> tuple:
    """Parse ``x^2*y`` into an exponent vector over ``names``."""
    text = text.strip()
    e = [0] * len(names)
    if text == "1":
        return tuple(e)
    for factor in text.split("*"):
        factor = factor.strip()
        m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9']*)(?:\^(\d+))?", factor)
        if not m:
            raise ParseError(f"cannot parse monomial factor {factor!r}")
        name, power = m.group(1), int(m.group(2) or 1)
        if name not in names:
            raise ParseError(f"unknown generator {name!r} in {text!r}")
        e[names.index(name)] += power
    return tuple(e)


def make_truncated_poly(vars: Sequence[str], weights: Sequence[int], relations: Sequence,
                        field: GroundField = QQ, graded: bool = True,
                        bound: int = 64) -> FinCommAlgebra:
    """Q[vars]/(relations) for a monomial ideal of finite codimension.

    ``relations`` are monomial strings (``"x^2*y"``) or exponent tuples.
    Standard monomials are enumerated degree by degree; if a nonempty degree
    is still present at ``bound`` the quotient is declared not Artinian.
    """
    names = tuple(vars)
    weights = tuple(int(w) for w in weights)
    if len(weights) != len(names):
        raise ValueError("one weight per generator is required")
    if graded and any(w < 1 for w in weights):
        raise ValueError("generators of a graded algebra need positive weight")
    rels = [parse_monomial(r, names) if isinstance(r, str) else tuple(r) for r in relations]

    def standard(e):
        return not any(all(a >= b for a, b in zip(e, r)) for r in rels)

    basis = [tuple([0] * len(names))]
    level = [basis[0]]
    seen = {basis[0]}
    deg = 0
    while level:
        deg += 1
        if deg > bound:
            raise NotArtinian(f"standard monomials persist beyond degree {bound}")
        nxt = []
        for e in level:
            for k in range(len(names)):
                f = e[:k] + (e[k] + 1,) + e[k + 1:]
                if f not in seen and standard(f):
                    seen.add(f)
                    nxt.append(f)
        basis.extend(nxt)
        level = nxt
    if not standard(basis[0]):
        raise NotArtinian("the relations contain 1")
    return _from_monomials(names, weights, basis, field, graded)


def _from_monomials(names, weights, basis, field, graded) -> FinCommAlgebra:
    def wt(e):
        return sum(a * w for a, w in zip(e, weights))

    basis = sorted(basis, key=lambda e: (wt(e), sum(e), tuple(-a for a in e)))
    index = {e: i for i, e in enumerate(basis)}
    one = normalize_scalar(field.one())
    mult = []
    for e in basis:
        row = []
        for f in basis:
            g = tuple(a + b for a, b in zip(e, f))
            k = index.get(g)
            row.append({k: one} if k is not None else {})
        mult.append(tuple(row))
    unit = index[tuple([0] * len(names))]
    aug = tuple(one if i == unit else 0 for i in range(len(basis)))
    return FinCommAlgebra(
        field=field,
        labels=tuple(monomial_label(names, e) for e in basis),
        unit_index=unit,
        mult=tuple(mult),
        weights=tuple(wt(e) for e in basis),
        aug=aug,
        graded=graded,
        degrees=tuple(basis),
        variables=names,
        var_weights=tuple(weights),
        exponents=tuple(basis),
    )


_SLICE_CACHE: dict = {}


def _truncated_poly_cached(names, weights, W) -> FinCommAlgebra:
    key = (names, weights, W)
    if key not in _SLICE_CACHE:
        basis = []
        for w in range(W + 1):
            basis.extend(_monomials_of_weight(weights, w))
        _SLICE_CACHE[key] = _from_monomials(names, weights, basis, QQ, True)
    return _SLICE_CACHE[key]


def from_table(field: GroundField, labels: Sequence[str], table: Sequence[Sequence[Mapping]],
               unit_index: int = 0, weights: Sequence[int] | None = None,
               aug: Sequence | None = None, graded: bool = False) -> FinCommAlgebra:
    """Algebra from an explicit structure-constant table (no validation)."""
    n = len(labels)
    weights = tuple(weights) if weights is not None else tuple([0] * n)
    if aug is None:
        aug = [field.one() if i == unit_index else field.zero() for i in range(n)]
    mult = tuple(tuple({k: normalize_scalar(field(v)) for k, v in table[i][j].items() if v}
                       for j in range(n))
                 for i in range(n))
    degrees = tuple((w,) for w in weights) if graded else ()
    return FinCommAlgebra(field=field, labels=tuple(labels), unit_index=unit_index, mult=mult,
                          weights=weights, aug=tuple(normalize_scalar(field(a)) for a in aug),
                          graded=graded,
                          degrees=degrees)


def ground_algebra(field: GroundField = QQ) -> FinCommAlgebra:
    """The ground field itself as a one-dimensional algebra."""
    return make_truncated_poly([], [], [], field=field)


def tensor(R: FinCommAlgebra, A: FinCommAlgebra) -> FinCommAlgebra:
    """R (x) A over the common ground field, basis ordered lexicographically."""
    if R.field != A.field:
        raise FieldMismatch(f"cannot tensor algebras over {R.field.name} and {A.field.name}")
    pairs = list(product(range(R.dim), range(A.dim)))
    index = {p: n for n, p in enumerate(pairs)}
    mult = []
    for (i, a) in pairs:
        row = []
        for (j, b) in pairs:
            out: dict = {}
            for k, x in R.mult[i][j].items():
                for l, y in A.mult[a][b].items():
                    v = x * y
                    if v:
                        out[index[(k, l)]] = v
            row.append(out)
        mult.append(tuple(row))

    def lab(x, y):
        if x == "1":
            return y
        if y == "1":
            return x
        return f"{x}*{y}"

    monomial = R.is_monomial and A.is_monomial
    variables = var_weights = exponents = None
    if monomial:
        a_names = tuple(n if n not in R.variables else n + "'" for n in A.variables)
        variables = R.variables + a_names
        var_weights = R.var_weights + A.var_weights
        exponents = tuple(R.exponents[i] + A.exponents[a] for (i, a) in pairs)
    rkeys = R.degrees if R.degrees else tuple(() for _ in range(R.dim))
    akeys = A.degrees if A.degrees else tuple(() for _ in range(A.dim))
    if R.degrees or A.degrees:
        degrees = tuple(rkeys[i] + akeys[a] for (i, a) in pairs)
    else:
        degrees = ()
    return FinCommAlgebra(
        field=R.field,
        labels=tuple(lab(R.labels[i], A.labels[a]) for (i, a) in pairs),
        unit_index=index[(R.unit_index, A.unit_index)],
        mult=tuple(mult),
        weights=tuple(R.weights[i] + A.weights[a] for (i, a) in pairs),
        aug=tuple(R.aug[i] * A.aug[a] for (i, a) in pairs),
        graded=R.graded and A.graded,
        degrees=degrees,
        variables=variables,
        var_weights=var_weights,
        exponents=exponents,
        factors=(R, A),
        factor_index=tuple(pairs),
    )


def augmentation_ideal(A: FinCommAlgebra) -> AugIdeal:
    u = A.unit_index
    vecs = []
    for j in A.nonunit:
        v = {j: A.field.one()}
        if A.aug[j]:
            v[u] = -A.aug[j]
        vecs.append(v)
    return AugIdeal(A, Subspace(A.dim, vecs))


def validate(A: FinCommAlgebra) -> list[str]:
    """Check the algebra axioms; returns human-readable violations (empty if none)."""
    out = []
    n = A.dim
    for i in range(n):
        for j in range(i + 1, n):
            if A.mult[i][j] != A.mult[j][i]:
                out.append(f"commutativity: e{i}*e{j} != e{j}*e{i}")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = A.multiply(A.mult[i][j], {k: 1})
                right = A.multiply({i: 1}, A.mult[j][k])
                if left != right:
                    out.append(f"associativity: (e{i}e{j})e{k} != e{i}(e{j}e{k})")
    u = A.unit_index
    for i in range(n):
        if A.mult[u][i] != {i: 1}:
            out.append(f"unit: e{u}*e{i} != e{i}")
    if A.degrees:
        for i in range(n):
            for j in range(n):
                target = tuple(a + b for a, b in zip(A.degrees[i], A.degrees[j]))
                for k in A.mult[i][j]:
                    if A.degrees[k] != target:
                        out.append(f"grading: e{i}*e{j} has a component outside degree {target}")
    if A.graded:
        if A.weights[u] != 0:
            out.append("grading: the unit must have weight 0")
        if sum(1 for w in A.weights if w == 0) != 1:
            out.append("grading: the weight-0 part must be the ground field")
        for i in range(n):
            for j in range(n):
                for k in A.mult[i][j]:
                    if A.weights[k] != A.weights[i] + A.weights[j]:
                        out.append(f"grading: weight of e{i}*e{j} is not additive")
    if A.aug[u] != 1:
        out.append("augmentation: aug(1) != 1")
    for i in range(n):
        for j in range(n):
            lhs = sum((c * A.aug[k] for k, c in A.mult[i][j].items()), A.field.zero())
            if lhs != A.aug[i] * A.aug[j]:
                out.append(f"augmentation: aug(e{i}*e{j}) != aug(e{i})*aug(e{j})")
    return out


def power_span_dims(A: FinCommAlgebra, max_power: int | None = None) -> list[int]:
    """dims of m_A, m_A^2, ... until zero (or ``max_power`` reached)."""
    m = augmentation_ideal(A).basis.basis
    cur = Subspace.span(A.dim, m)
    dims = [cur.dim]
    limit = max_power or A.dim + 1
    while cur.dim and len(dims) < limit:
        prods = [A.multiply(x, y) for x in cur.basis for y in m]
        cur = Subspace.span(A.dim, [p for p in prods if p])
        dims.append(cur.dim)
    return dims


# -- files and named algebras -------------------------------------------------

def parse_algebra_text(text: str) -> FinCommAlgebra:
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: expected 'key: value'")
        key, value = line.split(":", 1)
        key = key.strip().lower()
        if key not in ("field", "generators", "relations", "graded"):
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        fields[key] = value.strip()
    try:
        ground = field_from_name(fields.get("field", "Q"))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    names, weights = [], []
    gens = fields.get("generators", "")
    for item in filter(None, (g.strip() for g in gens.split(","))):
        if ":" in item:
            name, w = item.split(":", 1)
            try:
                weights.append(int(w))
            except ValueError:
                raise ParseError(f"bad weight in generator {item!r}") from None
        else:
            name = item
            weights.append(1)
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9']*", name):
            raise ParseError(f"bad generator name {name!r}")
        names.append(name)
    rels = [r.strip() for r in fields.get("relations", "").split(",") if r.strip()]
    graded_text = fields.get("graded", "true").lower()
    if graded_text not in ("true", "false"):
        raise ParseError(f"graded must be true or false, got {graded_text!r}")
    return make_truncated_poly(names, weights, [parse_monomial(r, names) for r in rels],
                               field=ground, graded=graded_text == "true")


def load_algebra(path: str) -> FinCommAlgebra:
    with open(path) as fh:
        return parse_algebra_text(fh.read())


BUILTIN_ALGEBRAS = {
    "Q": dict(vars=[], weights=[], relations=[]),
    "dual_numbers": dict(vars=["e"], weights=[1], relations=["e^2"]),
    "x3": dict(vars=["x"], weights=[1], relations=["x^3"]),
    "xy3": dict(vars=["x", "y"], weights=[1, 1], relations=["x^3", "x^2*y", "x*y^2", "y^3"]),
    "dual_dual": dict(vars=["e", "d"], weights=[1, 1], relations=["e^2", "d^2"]),
}

#: the algebras exercised by the acceptance suite
TEST_ALGEBRAS = ("Q", "dual_numbers", "x3", "xy3")


def builtin_algebra(name: str, field: GroundField = QQ) -> FinCommAlgebra:
    if name not in BUILTIN_ALGEBRAS:
        raise UnknownName(f"unknown algebra {name!r}; known: {sorted(BUILTIN_ALGEBRAS)}")
    spec = BUILTIN_ALGEBRAS[name]
    return make_truncated_poly(spec["vars"], spec["weights"], spec["relations"], field=field)


def resolve_algebra(name_or_path: str, field: GroundField = QQ) -> FinCommAlgebra:
    """A builtin name (over ``field``) or an algebra description file."""
    if name_or_path in BUILTIN_ALGEBRAS:
        return builtin_algebra(name_or_path, field)
    try:
        return load_algebra(name_or_path)
    except FileNotFoundError:
        raise UnknownName(f"{name_or_path!r} is neither a builtin algebra nor a file") from None
