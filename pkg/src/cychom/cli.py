"""Command-line front end.

Exit status: 0 on success, 1 on input errors (bad files, names, budgets,
usage), 2 when a mathematical check fails.
"""
from __future__ import annotations

import argparse
import random
import sys

from . import adams, chow, complexes, differentials, relative, sbi
from .algebra import GradedPolySlice, ground_algebra, resolve_algebra
from .errors import InputError, VerdictFailure
from .report import Report
from .scalars import field_from_name


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _field(args):
    try:
        return field_from_name(args.field)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _algebra(args, name=None):
    return resolve_algebra(name or args.algebra, _field(args))


def _base(args):
    if args.base in ("Q", "k"):
        return ground_algebra(_field(args))
    return resolve_algebra(args.base, _field(args))


def _slice(text: str) -> GradedPolySlice:
    """'WEIGHTS:W', e.g. '1,1:4' for Q[x,y] up to weight 4."""
    try:
        ws, W = text.split(":")
        weights = tuple(int(x) for x in ws.split(","))
        return GradedPolySlice(len(weights), weights, int(W))
    except ValueError as exc:
        raise InputError(f"bad slice {text!r}; expected e.g. 1,1:4 ({exc})") from None


# -- subcommands ---------------------------------------------------------------

def cmd_hh(args, rep):
    A = _algebra(args)
    cx = complexes.bar_complex(A, args.max_degree + 1, normalized=args.normalized, budget=args.budget)
    rep.results["dims"] = cx.homology_dims(args.max_degree, workers=args.threads)
    if args.verify:
        cx.check_squares_zero()
        rep.results["basis_change_invariant"] = _basis_change_check(cx, args.max_degree, args.seed)
        rep.ok = rep.results["basis_change_invariant"]


def _basis_change_check(cx, n_max, seed) -> bool:
    """Ranks of d are unchanged by random unipotent changes of basis on both sides."""
    from .linalg import SparseMatrix, rank
    rng = random.Random(seed)

    def unipotent(n):
        cols = []
        for j in range(n):
            col = {j: 1}
            for i in range(j):
                if rng.random() < 0.3:
                    col[i] = rng.randint(-3, 3) or 1
            cols.append(col)
        return SparseMatrix.from_columns(n, cols)

    for n in range(1, n_max + 2):
        for k in cx.keys(n):
            d = cx.boundary(n, k)
            if rank(unipotent(d.rows) @ d @ unipotent(d.cols)) != cx.boundary_rank(n, k):
                return False
    return True


def cmd_hc(args, rep):
    A = _algebra(args)
    cc = complexes.CyclicBicomplex(A, args.max_degree + 1, budget=args.budget)
    dims = cc.homology_dims(args.max_degree, workers=args.threads)
    mixed = complexes.MixedComplex(A, args.max_degree + 1, budget=args.budget).homology_dims(
        args.max_degree, workers=args.threads)
    if dims != mixed:
        from .errors import OracleMismatch
        raise OracleMismatch(f"Tot CC gives {dims}, the mixed complex gives {mixed}")
    rep.results["dims"] = dims
    rep.results["mixed_complex_dims"] = mixed


def cmd_sbi(args, rep):
    A = _algebra(args)
    w = sbi.sbi_sequence(A, args.max_degree, eigen=args.eigen, raise_on_failure=False)
    rep.results["exact"] = w.exact
    rep.results["HH"] = [w.hh[n] for n in sorted(w.hh)]
    rep.results["HC"] = [w.hc[n] for n in sorted(w.hc)]
    rep.results["nodes"] = [v.as_dict() for v in w.nodes]
    if not w.exact:
        bad = w.first_failure()
        raise sbi.ExactnessFailure(f"not exact at {bad.node}", node=bad.node)


def cmd_hodge(args, rep):
    A = _algebra(args)
    pin = adams.pin_ladder()
    rep.results["ladder"] = pin.convention
    rep.results["rejected_ladders"] = list(pin.rejected)
    hh, hc = {}, {}
    for n in range(0, args.max_degree + 1):
        if n >= 1 and args.verify:
            adams.hodge_projectors(A, n, normalized=True)
        if args.theory in ("HH", "both"):
            hh[str(n)] = adams.hh_eigen_dims(A, n)
        if args.theory in ("HC", "both"):
            hc[str(n)] = adams.hc_eigen_dims(A, n)
    if hh:
        rep.results["HH"] = hh
    if hc:
        rep.results["HC"] = hc


def cmd_relative(args, rep):
    pair = relative.AugmentedPair(_base(args), _algebra(args))
    rows = []
    for n in range(args.max_degree + 1):
        if args.eigen is None:
            r = relative.relative_homology(pair, n, None, args.theory)
            rows.append(r.as_dict())
        else:
            rows.append(relative.relative_homology(pair, n, args.eigen, args.theory).as_dict())
    rep.results["rows"] = rows
    rep.results["dims"] = [r["relative"] for r in rows]


def cmd_goodwillie(args, rep):
    pair = relative.AugmentedPair(_base(args), _algebra(args))
    out = []
    for n in range(1, args.max_degree + 1):
        out.append(relative.goodwillie_splitting_check(pair, n).as_dict())
    rep.results["sequences"] = out


def cmd_derham(args, rep):
    if args.slice:
        P = _slice(args.slice)
        dr = differentials.de_rham_complex(P, args.max_degree)
        rep.results["by_weight"] = {str(n): {str(w): v for w, v in sorted(dr.cohomology_by_weight(n).items())}
                                    for n in range(args.max_degree + 1)}
        if args.verify:
            rep.results["euler_homotopy_forms_checked"] = sum(
                differentials.euler_homotopy_check(P, args.max_degree).values())
    else:
        A = _algebra(args)
        dr = differentials.de_rham_complex(A, args.max_degree)
        dr.check_well_defined()
        rep.results["dims"] = [dr.cohomology(n) for n in range(args.max_degree + 1)]
        rep.results["omega_dims"] = [m.dim for m in dr.modules[: args.max_degree + 1]]


def cmd_hkr(args, rep):
    P = _slice(args.slice)
    rows = []
    for n in range(args.max_degree + 1):
        for w in range(P.truncation_weight + 1):
            if args.weight is not None and w != args.weight:
                continue
            v = differentials.hkr_compare(P, n, w, workers=args.threads)
            lq = differentials.loday_quillen_check(P, n, w)
            rows.append({**v.as_dict(), "hc": lq.hc_dim, "loday_quillen": lq.equal})
    rep.results["rows"] = rows
    rep.ok = all(r["equal"] and r["well_defined"] and r["surjective"] and r["loday_quillen"] for r in rows)


def cmd_filtration(args, rep):
    lad = differentials.filtration_ladder(_base(args), _algebra(args), args.degree)
    rep.results.update(lad.as_dict())
    rep.ok = lad.nested and lad.matches and lad.exhausts


def cmd_chow(args, rep):
    H = chow.builtin_table(args.table)
    if args.algebra:
        spec = chow.ArtinSpec.from_algebra(_algebra(args))
        if args.transcendental:
            spec = chow.ArtinSpec(spec.dim_mA, spec.graded, False)
    else:
        if args.dim_ma is None:
            raise InputError("pass --dim-ma or --algebra")
        spec = chow.ArtinSpec(args.dim_ma, args.graded, not args.transcendental)
    rep.params["table_label"] = H.label
    rep.results.update(chow.formal_chow_dim(H, args.p, spec).as_dict())
    if args.lint_symmetry:
        rep.results["symmetry_violations"] = [list(x) for x in H.symmetry_violations()]


COMMANDS = {
    "hh": (cmd_hh, "Hochschild homology dimensions"),
    "hc": (cmd_hc, "cyclic homology dimensions (two independent complexes)"),
    "sbi": (cmd_sbi, "exactness of the periodicity sequence"),
    "hodge-decomp": (cmd_hodge, "Adams eigenspace dimensions of HH and HC"),
    "relative": (cmd_relative, "relative homology of R (x) A over R"),
    "goodwillie": (cmd_goodwillie, "split short exact sequences for graded A"),
    "derham": (cmd_derham, "de Rham cohomology"),
    "hkr": (cmd_hkr, "weightwise comparison of HH, HC and differential forms on a polynomial slice"),
    "filtration": (cmd_filtration, "filtration ladder on forms of R (x) A over Q"),
    "chow": (cmd_chow, "vanishing condition and formal Chow dimension from a Hodge table"),
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cychom", description="Exact Hochschild and cyclic homology toolkit")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--threads", type=int, default=1, help="worker processes for block ranks")
    p.add_argument("--budget", type=int, default=complexes.DEFAULT_BLOCK_BUDGET,
                   help="largest allowed block of chains")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--field", default="Q", help="ground field for builtin algebras: Q or Q(t)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text)
        if name not in ("chow", "hkr"):
            s.add_argument("--algebra", required=name not in ("derham",), default=None,
                           help="builtin name or algebra description file")
        if name in ("hh", "hc", "sbi", "hodge-decomp", "relative", "goodwillie", "derham", "hkr"):
            s.add_argument("--max-degree", type=int, default=4 if name in ("hh", "hc", "sbi") else 3)
        if name == "hh":
            s.add_argument("--normalized", action="store_true")
            s.add_argument("--verify", action="store_true", help="also run d^2 and basis-change checks")
        if name in ("sbi", "relative"):
            s.add_argument("--eigen", type=int, default=None)
        if name == "hodge-decomp":
            s.add_argument("--theory", choices=("HH", "HC", "both"), default="both")
            s.add_argument("--verify", action="store_true", help="verify projector identities")
        if name == "relative":
            s.add_argument("--theory", choices=("HH", "HC"), default="HC")
        if name in ("relative", "goodwillie", "filtration"):
            s.add_argument("--base", default="Q", help="R: Q (the ground field), a builtin name or a file")
        if name in ("derham", "hkr"):
            s.add_argument("--slice", required=name == "hkr", default=None,
                           help="polynomial slice WEIGHTS:W, e.g. 1,1:4")
        if name == "derham":
            s.add_argument("--verify", action="store_true", help="run the Euler homotopy check on slices")
        if name == "hkr":
            s.add_argument("--weight", type=int, default=None)
        if name == "filtration":
            s.add_argument("--degree", type=int, default=1)
        if name == "chow":
            s.add_argument("--table", required=True, help="projective_space(d), product(T1,T2) or a file")
            s.add_argument("--p", type=int, required=True)
            s.add_argument("--dim-ma", type=int, default=None)
            s.add_argument("--algebra", default=None, help="derive dim m_A and gradedness from an algebra")
            s.add_argument("--graded", action="store_true")
            s.add_argument("--transcendental", action="store_true",
                           help="the ground field is not algebraic over Q")
            s.add_argument("--lint-symmetry", action="store_true")
    return p


def run(argv=None) -> tuple[int, str]:
    """Run one command; returns (exit status, rendered output)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "derham" and not (args.algebra or args.slice):
        parser.error("derham needs --algebra or --slice")
    rep = Report(args.command, params={k: v for k, v in vars(args).items() if k not in ("command",)})
    fn = COMMANDS[args.command][0]
    status = 0
    try:
        fn(args, rep)
    except VerdictFailure as exc:
        rep.ok = False
        rep.results["error"] = f"{type(exc).__name__}: {exc}"
        status = 2
    except InputError as exc:
        return 1, f"error: {type(exc).__name__}: {exc}\n"
    except (OSError, ValueError) as exc:
        return 1, f"error: {exc}\n"
    if not rep.ok and status == 0:
        status = 2
    rep.finish()
    out = rep.to_json() + "\n" if args.format == "json" else rep.to_text()
    return status, out


def main(argv=None) -> int:
    status, out = run(argv)
    stream = sys.stdout if status != 1 else sys.stderr
    stream.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
