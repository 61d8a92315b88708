"""Independent oracles used to freeze expected values.

Nothing here imports the package's linear algebra or complex builders.
"""
from fractions import Fraction
from itertools import product


def bareiss_rank(dense):
    """Rank of an integer/rational matrix by dense fraction-free Bareiss elimination."""
    if not dense or not dense[0]:
        return 0
    den = 1
    for row in dense:
        for x in row:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
    a = [[int(Fraction(x) * den) for x in row] for row in dense]
    m, n = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == m:
            break
    return r


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def truncated_monomial_algebra(nvars, relations):
    """Standard monomials of Q[x_1..x_n]/(monomials) listed by brute force.

    ``relations`` are exponent tuples.  Returns (basis, mult) with basis a list
    of exponent tuples and mult(i, j) -> index or None.
    """
    bound = max(max(r) for r in relations) if relations else 0
    basis = []
    for e in product(range(bound + 1), repeat=nvars):
        if not any(all(e[k] >= r[k] for k in range(nvars)) for r in relations):
            basis.append(e)
    basis.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    index = {e: i for i, e in enumerate(basis)}

    def mult(i, j):
        e = tuple(a + b for a, b in zip(basis[i], basis[j]))
        return index.get(e)

    return basis, mult


def dense_hochschild_boundary(basis, mult, n):
    """Dense matrix of b: A^{(n+1)} -> A^{n}, written directly from the formula."""
    d = len(basis)
    src = list(product(range(d), repeat=n + 1))
    tgt = {t: i for i, t in enumerate(product(range(d), repeat=n))}
    mat = [[0] * len(src) for _ in range(len(tgt))]
    for j, a in enumerate(src):
        for i in range(n):
            p = mult(a[i], a[i + 1])
            if p is not None:
                t = a[:i] + (p,) + a[i + 2:]
                mat[tgt[t]][j] += (-1) ** i
        p = mult(a[n], a[0])
        if p is not None:
            t = (p,) + a[1:n]
            mat[tgt[t]][j] += (-1) ** n
    return mat


def periodic_hh_dims(N, n_max):
    """HH_n of Q[x]/(x^N) from the 2-periodic bimodule resolution.

    The resolution gives the complex A <-0- A <-u- A <-0- A <-u- ... with
    u = multiplication by N x^(N-1).
    """
    # multiplication by N x^{N-1} on basis 1, x, ..., x^{N-1}
    u = [[0] * N for _ in range(N)]
    u[N - 1][0] = N
    ru = bareiss_rank(u)
    def d_rank(n):                     # d_n : C_n -> C_{n-1}
        return ru if n >= 2 and n % 2 == 0 else 0

    return [N - d_rank(n) - d_rank(n + 1) for n in range(n_max + 1)]


def goodwillie_recursion(hh_bar, hc0):
    """Relative HC dims from dim HH_n = dim HC_{n-1} + dim HC_n."""
    hc = [hc0]
    for n in range(1, len(hh_bar)):
        hc.append(hh_bar[n] - hc[n - 1])
    return hc


def cech_p1(sheaf, window=6):
    """(h^0, h^1) of O or Omega^1 on P^1 from the two-chart Cech complex.

    Sections are graded by the exponent of x; the complex is computed
    degreewise over a window of exponents, which is exact for |m| < window.
    """
    h0 = h1 = 0
    for m in range(-window, window + 1):
        if sheaf == "O":
            on_u0 = m >= 0           # x^m on Spec k[x]
            on_u1 = m <= 0           # x^m = y^{-m} on Spec k[y], y = 1/x
        elif sheaf == "Omega1":
            on_u0 = m >= 0           # x^m dx
            on_u1 = m <= -2          # y^j dy = -x^{-j-2} dx
        else:
            raise ValueError(sheaf)
        c0 = int(on_u0) + int(on_u1)
        # difference map to the overlap k[x, 1/x] (always 1-dim in degree m)
        # (f, g) -> f - g has rank 1 as soon as either chart contributes
        r = 1 if c0 else 0
        h0 += c0 - r
        h1 += 1 - r
    return h0, h1
