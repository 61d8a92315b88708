"""Kähler differentials, de Rham cohomology and comparison maps.

Forms are presented as quotients of a free module.  The ambient space in
degree n has the ground-field basis ``(a, S)``: an algebra basis element
``a`` times the wedge ``dg_{S[0]} ^ ... ^ dg_{S[-1]}`` of generators, S
strictly increasing.  Two presentations are available:

* monomial algebras use one generator dx_v per variable, with relations the
  multiples of d(m) for the minimal monomials m outside the basis;
* any algebra can use the structure-constant presentation, one generator
  de_j per non-unit basis element, relations the multiples of the Leibniz
  rule e_i de_j + e_j de_i - d(e_i e_j).

Over Q(t) the absolute forms (over Q) add a generator dt with
d(f) = f'(t) dt for scalars; the relative forms (over the ground field) omit it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .algebra import FinCommAlgebra, GradedPolySlice, tensor
from .complexes import _acc, bar_complex
from .errors import CompositionNonzero, OracleMismatch
from .linalg import EchelonBasis, kernel_basis, rank_of_vectors


# -- generator systems -----------------------------------------------------

@dataclass(frozen=True)
class Generators:
    """The exterior generators of a presentation and their d-formulas.

    ``labels[g]`` names generator g; ``keys[g]`` its grading key; ``side[g]``
    tags it for filtrations ("R", "A" or "t").
    """

    algebra: FinCommAlgebra
    labels: tuple
    keys: tuple
    side: tuple
    kind: str            # "monomial" or "table"
    dt: int | None       # index of the dt generator, if present

    @property
    def count(self) -> int:
        return len(self.labels)


def _zero_key(A: FinCommAlgebra) -> tuple:
    return tuple(0 for _ in A.degrees[0]) if A.degrees else ()


def _add_keys(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b)) if a else ()


def generators(A: FinCommAlgebra, absolute: bool = False, presentation: str | None = None,
               sides: tuple | None = None) -> Generators:
    """Build the generator system; ``presentation`` is "monomial" or "table"."""
    kind = presentation or ("monomial" if A.is_monomial else "table")
    if kind == "monomial" and not A.is_monomial:
        raise ValueError("the monomial presentation needs a monomial algebra")
    labels, keys = [], []
    if kind == "monomial":
        nv = len(A.variables)
        for v in range(nv):
            labels.append("d" + A.variables[v])
            keys.append(tuple(int(i == v) for i in range(nv)))
        side = list(sides) if sides is not None else ["R"] * nv
    else:
        for j in A.nonunit:
            labels.append("d(" + A.labels[j] + ")")
            keys.append(A.key(j))
        side = ["R"] * len(labels)
    dt = None
    if absolute and A.field.transcendental:
        dt = len(labels)
        labels.append("dt")
        keys.append(_zero_key(A))
        side.append("t")
    return Generators(A, tuple(labels), tuple(keys), tuple(side), kind, dt)


def _wedge_insert(g: int, S: tuple):
    """dg ^ dS as (sign, sorted tuple), or None if g is already in S."""
    if g in S:
        return None
    pos = sum(1 for s in S if s < g)
    T = S[:pos] + (g,) + S[pos:]
    return (-1 if pos % 2 else 1), T


def wedge(S: tuple, T: tuple):
    """dS ^ dT as (sign, sorted tuple) or None."""
    sign, cur = 1, T
    for g in reversed(S):
        r = _wedge_insert(g, cur)
        if r is None:
            return None
        s, cur = r
        sign *= s
    return sign, cur


class FormCalculus:
    """Exterior derivative of basis elements and products of forms for one generator system."""

    def __init__(self, gens: Generators):
        self.gens = gens
        A = gens.algebra
        self.A = A
        if gens.kind == "monomial":
            self._mono = A.monomial_index()
        self._da_cache: dict = {}

    def key(self, a: int, S: tuple) -> tuple:
        k = self.A.key(a)
        for g in S:
            k = _add_keys(k, self.gens.keys[g])
        return k

    def d_basis(self, a: int) -> dict:
        """d(e_a) as a 1-form {(b, (g,)): c}."""
        if a in self._da_cache:
            return self._da_cache[a]
        A, out = self.A, {}
        if self.gens.kind == "monomial":
            e = A.exponents[a]
            for v, ev in enumerate(e):
                if ev:
                    f = e[:v] + (ev - 1,) + e[v + 1:]
                    b = self._mono.get(f)
                    if b is not None:
                        out[(b, (v,))] = ev
        elif a != A.unit_index:
            out[(A.unit_index, (A.nonunit.index(a),))] = 1
        self._da_cache[a] = out
        return out

    def d_scalar(self, c, a: int, S: tuple) -> dict:
        """The dt-part of d(c e_a dS) for a scalar coefficient c."""
        if self.gens.dt is None:
            return {}
        dc = self.A.field.derivative(c)
        if not dc:
            return {}
        r = _wedge_insert(self.gens.dt, S)
        if r is None:
            return {}
        sign, T = r
        return {(a, T): sign * dc}

    def d(self, form: dict) -> dict:
        """Exterior derivative (additive; Leibniz in the scalar when dt is present)."""
        out: dict = {}
        for (a, S), c in form.items():
            for (b, (g,)), x in self.d_basis(a).items():
                r = _wedge_insert(g, S)
                if r is not None:
                    _acc(out, (b, r[1]), r[0] * x * c)
            for k, v in self.d_scalar(c, a, S).items():
                _acc(out, k, v)
        return out

    def mul(self, x: dict, y: dict) -> dict:
        """Wedge product of two forms."""
        out: dict = {}
        mult = self.A.mult
        for (a, S), c in x.items():
            for (b, T), e in y.items():
                w = wedge(S, T)
                if w is None:
                    continue
                sign, U = w
                for p, m in mult[a][b].items():
                    _acc(out, (p, U), sign * c * e * m)
        return out

    def relation_one_forms(self) -> list[dict]:
        """Generating 1-form relations (before multiplying by the algebra)."""
        A, gens = self.A, self.gens
        rels = []
        if gens.kind == "monomial":
            std = set(A.exponents)
            nv = len(A.variables)
            minimal = set()
            for e in A.exponents:
                for v in range(nv):
                    f = e[:v] + (e[v] + 1,) + e[v + 1:]
                    if f in std:
                        continue
                    if all(f[u] == 0 or (f[:u] + (f[u] - 1,) + f[u + 1:]) in std for u in range(nv)):
                        minimal.add(f)
            for f in sorted(minimal):
                rel: dict = {}
                for v, fv in enumerate(f):
                    if fv:
                        g = f[:v] + (fv - 1,) + f[v + 1:]
                        b = self._mono.get(g)
                        if b is not None:
                            _acc(rel, (b, (v,)), fv)
                if rel:
                    rels.append(rel)
        else:
            for i in A.nonunit:
                for j in A.nonunit:
                    if j < i:
                        continue
                    rel: dict = {}
                    # e_i de_j + e_j de_i
                    for k, v in self.mul({(i, ()): 1}, self.d_basis(j)).items():
                        _acc(rel, k, v)
                    for k, v in self.mul({(j, ()): 1}, self.d_basis(i)).items():
                        _acc(rel, k, v)
                    # minus d(e_i e_j), including the dt-part of the structure constants
                    prod = {(k, ()): c for k, c in A.mult[i][j].items()}
                    for k, v in self.d(prod).items():
                        _acc(rel, k, -v)
                    if rel:
                        rels.append(rel)
        return rels


# -- Kähler modules --------------------------------------------------------

class KaehlerModule:
    """Omega^n as a quotient of the free module on wedges of degree n, split by key."""

    def __init__(self, calc: FormCalculus, n: int, max_weight: int | None = None):
        self.calc, self.n = calc, n
        A, gens = calc.A, calc.gens
        self.algebra = A
        self.max_weight = max_weight
        blocks: dict = {}
        for S in combinations(range(gens.count), n):
            for a in range(A.dim):
                k = calc.key(a, S)
                if max_weight is not None and self._weight(k) > max_weight:
                    continue
                blocks.setdefault(k, []).append((a, S))
        self.blocks = blocks
        self._index = {k: {e: i for i, e in enumerate(v)} for k, v in blocks.items()}
        self._relations = None

    def _weight(self, key) -> int:
        A = self.algebra
        if A.is_monomial and self.calc.gens.kind == "monomial" and key:
            return sum(a * w for a, w in zip(key, A.var_weights))
        return 0

    def weight_of_key(self, key) -> int:
        return self._weight(key)

    @property
    def ambient_dim(self) -> int:
        return sum(len(v) for v in self.blocks.values())

    def keys(self) -> list:
        return sorted(self.blocks)

    def coords(self, key, form: dict) -> dict:
        ix = self._index.get(key, {})
        out = {}
        for e, c in form.items():
            if c:
                out[ix[e]] = c
        return out

    def split(self, form: dict) -> dict:
        """Split a form into {key: coordinates}."""
        by: dict = {}
        for (a, S), c in form.items():
            if not c:
                continue
            k = self.calc.key(a, S)
            if k not in self._index:
                continue  # beyond the weight bound
            by.setdefault(k, {})[self._index[k][(a, S)]] = c
        return by

    @property
    def relations(self) -> dict:
        """{key: list of relation vectors} spanning the relation submodule."""
        if self._relations is None:
            calc, A, n = self.calc, self.algebra, self.n
            rels: dict = {}
            if n >= 1:
                ones = calc.relation_one_forms()
                for rho in ones:
                    for T in combinations(range(calc.gens.count), n - 1):
                        base = calc.mul(rho, {(A.unit_index, T): 1})
                        if not base:
                            continue
                        for a in range(A.dim):
                            f = calc.mul({(a, ()): 1}, base)
                            for k, v in self.split(f).items():
                                rels.setdefault(k, []).append(v)
            self._relations = rels
        return self._relations

    @cached_property
    def relation_ranks(self) -> dict:
        return {k: rank_of_vectors(self.relations.get(k, [])) for k in self.blocks}

    def block_dim(self, key) -> int:
        if key not in self.blocks:
            return 0
        return len(self.blocks[key]) - self.relation_ranks[key]

    @property
    def dim(self) -> int:
        return sum(self.block_dim(k) for k in self.blocks)

    def weight_dim(self, w: int) -> int:
        return sum(self.block_dim(k) for k in self.blocks if self._weight(k) == w)

    def relation_basis(self, key) -> EchelonBasis:
        return EchelonBasis(self.relations.get(key, []))

    def span_dim(self, key, forms: list[dict]) -> int:
        """dim of the image in Omega^n of a list of forms lying in one block."""
        vecs = [v for f in forms for k, v in self.split(f).items() if k == key]
        rel = self.relations.get(key, [])
        return rank_of_vectors(rel + vecs) - self.relation_ranks[key]


def kaehler(algebra, n: int, absolute: bool = False, presentation: str | None = None,
            max_weight: int | None = None) -> KaehlerModule:
    """Omega^n of an algebra (or of a polynomial weight slice, weight-bounded)."""
    if isinstance(algebra, GradedPolySlice):
        max_weight = algebra.truncation_weight if max_weight is None else max_weight
        algebra = algebra.algebra()
    calc = FormCalculus(generators(algebra, absolute=absolute, presentation=presentation))
    return KaehlerModule(calc, n, max_weight=max_weight)


# -- de Rham -----------------------------------------------------------------

@dataclass
class DeRhamComplex:
    modules: list
    calc: FormCalculus

    def d_rank(self, n: int, key) -> int:
        """rank of d: Omega^n -> Omega^{n+1} on one block."""
        if n < 0 or n + 1 >= len(self.modules):
            return 0
        src, tgt = self.modules[n], self.modules[n + 1]
        if key not in src.blocks or key not in tgt.blocks:
            return 0
        imgs = [self.calc.d({e: 1}) for e in src.blocks[key]]
        return tgt.span_dim(key, imgs)

    def check_well_defined(self) -> None:
        """d maps relations into relations and d^2 = 0 on the ambient."""
        for n in range(len(self.modules) - 1):
            src, tgt = self.modules[n], self.modules[n + 1]
            for key, rels in src.relations.items():
                eb = tgt.relation_basis(key) if key in tgt.blocks else EchelonBasis()
                for v in rels:
                    form = {src.blocks[key][i]: c for i, c in v.items()}
                    img = tgt.split(self.calc.d(form)).get(key, {})
                    if img and eb.reduce(img):
                        raise CompositionNonzero(f"d does not preserve the relations in degree {n}")
            for key, elems in src.blocks.items():
                for e in elems:
                    if self.calc.d(self.calc.d({e: 1})):
                        raise CompositionNonzero(f"d^2 != 0 on {e}")

    def cohomology(self, n: int, key=None) -> int:
        keys = [key] if key is not None else self.modules[n].keys()
        total = 0
        for k in keys:
            total += self.modules[n].block_dim(k) - self.d_rank(n, k) - self.d_rank(n - 1, k)
        return total

    def cohomology_by_weight(self, n: int) -> dict:
        out: dict = {}
        for k in self.modules[n].keys():
            w = self.modules[n].weight_of_key(k)
            out[w] = out.get(w, 0) + self.cohomology(n, k)
        return out

    def exact_quotient_dim(self, n: int, key=None) -> int:
        """dim Omega^n / d Omega^{n-1}."""
        keys = [key] if key is not None else self.modules[n].keys()
        return sum(self.modules[n].block_dim(k) - self.d_rank(n - 1, k) for k in keys)


def de_rham_complex(algebra, n_max: int, presentation: str | None = None,
                    max_weight: int | None = None) -> DeRhamComplex:
    """Relative de Rham complex Omega^0 -> ... -> Omega^{n_max + 1} (k-linear)."""
    if isinstance(algebra, GradedPolySlice):
        max_weight = algebra.truncation_weight if max_weight is None else max_weight
        algebra = algebra.algebra()
    calc = FormCalculus(generators(algebra, presentation=presentation))
    mods = [KaehlerModule(calc, n, max_weight=max_weight) for n in range(n_max + 2)]
    return DeRhamComplex(mods, calc)


def de_rham_cohomology(algebra, n_max: int, **kw) -> list[int]:
    cx = de_rham_complex(algebra, n_max, **kw)
    return [cx.cohomology(n) for n in range(n_max + 1)]


def euler_contraction(calc: FormCalculus, form: dict) -> dict:
    """Contraction with the weighted Euler field sum_v w_v x_v d/dx_v (monomial presentations)."""
    A = calc.A
    idx = calc._mono
    out: dict = {}
    for (a, S), c in form.items():
        for j, g in enumerate(S):
            e = A.exponents[a]
            f = e[:g] + (e[g] + 1,) + e[g + 1:]
            b = idx.get(f)
            if b is None:
                continue
            _acc(out, (b, S[:j] + S[j + 1:]), (-1 if j % 2 else 1) * A.var_weights[g] * c)
    return out


def euler_homotopy_check(P: GradedPolySlice, n_max: int) -> dict:
    """Verify d i_E + i_E d = w on every weight-w form of degree <= n_max.

    Only forms whose weight stays within the truncation are tested, where the
    slice agrees with the polynomial ring.  Returns {(n, w): number of forms checked}.
    A consequence is that de Rham cohomology vanishes in every positive weight.
    """
    A = P.algebra()
    calc = FormCalculus(generators(A))
    W = P.truncation_weight
    checked: dict = {}
    for n in range(n_max + 1):
        mod = KaehlerModule(calc, n, max_weight=W)
        for key, elems in mod.blocks.items():
            w = mod.weight_of_key(key)
            for e in elems:
                form = {e: 1}
                lhs = calc.d(euler_contraction(calc, form))
                for k, v in euler_contraction(calc, calc.d(form)).items():
                    _acc(lhs, k, v)
                lhs = {k: v for k, v in lhs.items() if mod_weight(calc, k) <= W}
                if lhs != ({e: w} if w else {}):
                    raise OracleMismatch(f"Euler homotopy fails on {e}: {lhs}")
            checked[(n, w)] = checked.get((n, w), 0) + len(elems)
    return checked


def mod_weight(calc: FormCalculus, e) -> int:
    a, S = e
    A = calc.A
    return A.weights[a] + sum(A.var_weights[g] for g in S)


# -- comparison maps ------------------------------------------------------

def hkr_map(calc: FormCalculus, chain_elem: tuple) -> dict:
    """a_0 (x) ... (x) a_n  ->  a_0 da_1 ^ ... ^ da_n."""
    form = {(chain_elem[0], ()): 1}
    for a in chain_elem[1:]:
        form = calc.mul(form, calc.d_basis(a))
        if not form:
            break
    return form


@dataclass
class HKRVerdict:
    n: int
    w: int
    hh_dim: int
    omega_dim: int
    well_defined: bool
    surjective: bool

    @property
    def equal(self) -> bool:
        return self.hh_dim == self.omega_dim

    @property
    def ok(self) -> bool:
        return self.equal and self.well_defined and self.surjective

    def as_dict(self) -> dict:
        return {"n": self.n, "w": self.w, "hh": self.hh_dim, "omega": self.omega_dim,
                "equal": self.equal, "well_defined": self.well_defined, "surjective": self.surjective}


def hkr_compare(P: GradedPolySlice, n: int, w: int, workers: int = 1, cx=None) -> HKRVerdict:
    """Compare HH_n and Omega^n in weight w, and test the comparison map."""
    A = P.algebra()
    if cx is None:
        cx = bar_complex(A, n + 1, normalized=True, max_weight=w)
    mod = kaehler(P, n)
    calc = mod.calc
    hh = omega = 0
    well, surj = True, True
    keys = [k for k in cx.keys(n) if sum(a * b for a, b in zip(k, A.var_weights)) == w]
    if workers > 1:
        cx._prefetch_ranks([(m, k) for k in keys for m in (n, n + 1)], workers)
    for key in keys:
        hh += cx.homology_dim(n, key)
        omega += mod.block_dim(key)
        rel = mod.relations.get(key, [])
        r_rel = mod.relation_ranks.get(key, 0)
        if n + 1 <= cx.top:
            bimgs = []
            for col in cx.boundary(n + 1, key).columns:
                f: dict = {}
                for i, c in col.items():
                    for k, v in hkr_map(calc, cx.basis(n, key)[i]).items():
                        _acc(f, k, c * v)
                bimgs.append(mod.split(f).get(key, {}))
            if rank_of_vectors(rel + bimgs) != r_rel:
                well = False
        Z = kernel_basis(cx.boundary(n, key)).basis
        zimgs = []
        for z in Z:
            f = {}
            for i, c in z.items():
                for k, v in hkr_map(calc, cx.basis(n, key)[i]).items():
                    _acc(f, k, c * v)
            zimgs.append(mod.split(f).get(key, {}))
        if rank_of_vectors(rel + zimgs) - r_rel != mod.block_dim(key):
            surj = False
    return HKRVerdict(n, w, hh, omega, well, surj)


@dataclass
class LQVerdict:
    n: int
    w: int
    hc_dim: int
    forms_part: int
    tail: int

    @property
    def equal(self) -> bool:
        return self.hc_dim == self.forms_part + self.tail

    def as_dict(self) -> dict:
        return {"n": self.n, "w": self.w, "hc": self.hc_dim, "omega_mod_exact": self.forms_part,
                "de_rham_tail": self.tail, "equal": self.equal}


def loday_quillen_check(P: GradedPolySlice, n: int, w: int, mc=None, dr=None) -> LQVerdict:
    """HC_n in weight w against Omega^n/dOmega^{n-1} plus H^{n-2}_dR + H^{n-4}_dR + ..."""
    from .complexes import MixedComplex
    A = P.algebra()
    if mc is None:
        mc = MixedComplex(A, n + 1, max_weight=w)
    if dr is None:
        dr = de_rham_complex(P, n)
    hc = 0
    for key in mc.tot.keys(n):
        if sum(a * b for a, b in zip(key, A.var_weights)) == w:
            hc += mc.tot.homology_dim(n, key)
    mod = dr.modules[n]
    forms = sum(dr.exact_quotient_dim(n, k) for k in mod.keys() if mod.weight_of_key(k) == w)
    tail = 0
    for j in range(n - 2, -1, -2):
        tail += dr.cohomology_by_weight(j).get(w, 0)
    return LQVerdict(n, w, hc, forms, tail)


# -- filtration on forms of R (x) A over Q -------------------------------------

@dataclass
class FiltrationLadder:
    i: int
    field: str
    F: list                  # dims of F^0 .. F^{i+1}
    gr: list                 # dims of Gr^0 .. Gr^i
    expected: list           # dim Omega^{i-j}_{R/k} * dim Omega^j_{A/Q}
    total: int               # dim Omega^i_{T/Q}
    generators: list = field(default_factory=list)

    @property
    def nested(self) -> bool:
        return all(a >= b for a, b in zip(self.F, self.F[1:]))

    @property
    def matches(self) -> bool:
        return self.gr == self.expected

    @property
    def exhausts(self) -> bool:
        return sum(self.gr) == self.total

    def as_dict(self) -> dict:
        return {"i": self.i, "field": self.field, "F": self.F, "Gr": self.gr, "expected": self.expected,
                "total": self.total, "generators": self.generators, "nested": self.nested,
                "matches": self.matches, "exhausts": self.exhausts}


def filtration_ladder(R: FinCommAlgebra, A: FinCommAlgebra, i: int) -> FiltrationLadder:
    """F^j in Omega^i_{(R (x) A)/Q}: T-multiples of wedges with >= j generators from A or dt.

    Both algebras must be monomial (so the tensor product keeps a monomial
    presentation with the variables of each side tagged).
    """
    if not (R.is_monomial and A.is_monomial):
        raise ValueError("the filtration ladder needs monomial algebras on both sides")
    T = tensor(R, A)
    sides = tuple(["R"] * len(R.variables) + ["A"] * len(A.variables))
    gens = generators(T, absolute=True, presentation="monomial", sides=sides)
    calc = FormCalculus(gens)
    mod = KaehlerModule(calc, i)
    F = []
    for j in range(i + 2):
        dim = 0
        for key, elems in mod.blocks.items():
            forms = [{e: 1} for e in elems if sum(1 for g in e[1] if gens.side[g] != "R") >= j]
            dim += mod.span_dim(key, forms) if forms else 0
        F.append(dim)
    gr = [F[j] - F[j + 1] for j in range(i + 1)]
    expected = []
    for j in range(i + 1):
        r_dim = kaehler(R, i - j).dim
        a_dim = kaehler(A, j, absolute=True, presentation="monomial").dim
        expected.append(r_dim * a_dim)
    return FiltrationLadder(i, T.field.name, F, gr, expected, mod.dim, list(gens.labels))
