"""Exact linear algebra helpers: HNF/SNF over Z, kernels, LLL, and F_p matrices.

All matrices are lists of lists of python ints (rows), kept deliberately
dependency-free; sizes here are small (ranks <= a few hundred), so clarity
beats asymptotics.
"""

from fractions import Fraction


# ---------------------------------------------------------------------------
# Integer matrices

def mat_copy(M):
    return [row[:] for row in M]


def mat_mul(A, B):
    n, m = len(A), len(B[0])
    k = len(B)
    Bt = list(zip(*B))
    return [[sum(A[i][t] * Bt[j][t] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def hnf(M):
    """Row-style Hermite normal form (upper triangular, nonnegative pivots).

    Returns H with the same row span as M, zero rows dropped.
    """
    H = [row[:] for row in M if any(row)]
    if not H:
        return []
    ncols = len(H[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(H)):
            if H[i][c]:
                piv = i
                break
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        # eliminate below pivot with gcd steps
        for i in range(r + 1, len(H)):
            while H[i][c]:
                a, b = H[r][c], H[i][c]
                q = a // b
                H[r], H[i] = H[i], [x - q * y for x, y in zip(H[r], H[i])]
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
        # reduce above pivot
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
        r += 1
        if r == len(H):
            break
    return [row for row in H[:r] if any(row)]


def hnf_with_transform(M):
    """HNF H = U*M with U unimodular. Returns (H, U); zero rows kept."""
    n = len(M)
    H = mat_copy(M)
    U = identity(n)
    ncols = len(M[0]) if n else 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, n):
            if H[i][c]:
                piv = i
                break
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, n):
            while H[i][c]:
                q = H[r][c] // H[i][c]
                H[r] = [x - q * y for x, y in zip(H[r], H[i])]
                U[r] = [x - q * y for x, y in zip(U[r], U[i])]
                H[r], H[i] = H[i], H[r]
                U[r], U[i] = U[i], U[r]
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
        if r == n:
            break
    return H, U


def kernel_z(M):
    """Basis of the left integer kernel {v : v*M = 0} of M (rows of result)."""
    H, U = hnf_with_transform(M)
    return [U[i] for i in range(len(H)) if not any(H[i])]


def solve_integer(M, target):
    """Solve v*M = target over Z, or return None.  M rows span a lattice."""
    A = [row[:] for row in M] + [list(target)]
    H, U = hnf_with_transform(A)
    for i, row in enumerate(H):
        if not any(row):
            u = U[i]
            if u[-1] in (1, -1):
                s = u[-1]
                return [-s * x for x in u[:-1]]
    # fall back: express target in hnf basis of M
    H, U = hnf_with_transform(M)
    H2 = [r for r in H if any(r)]
    U2 = [U[i] for i in range(len(H)) if any(H[i])]
    t = list(target)
    coeffs = [0] * len(H2)
    for j in range(len(t)):
        pivots = [i for i in range(len(H2)) if H2[i][j] and all(H2[i][k] == 0 for k in range(j))]
        if not pivots:
            continue
        i = pivots[0]
        if t[j] % H2[i][j]:
            return None
        q = t[j] // H2[i][j]
        coeffs[i] = q
        t = [x - q * y for x, y in zip(t, H2[i])]
    if any(t):
        return None
    v = [0] * len(M)
    for i, cfi in enumerate(coeffs):
        if cfi:
            v = [x + cfi * y for x, y in zip(v, U2[i])]
    return v


def snf_with_transform(M):
    """Smith normal form D = U*M*V. Returns (D, U, V)."""
    A = mat_copy(M)
    n = len(A)
    m = len(A[0]) if n else 0
    U = identity(n)
    V = identity(m)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(i, j, q):  # row_i -= q*row_j
        A[i] = [x - q * y for x, y in zip(A[i], A[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def addmul_col(i, j, q):  # col_i -= q*col_j
        for row in A:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def diagonalize():
        t = 0
        while t < min(n, m):
            piv = None
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    if A[i][j] and (best is None or abs(A[i][j]) < best):
                        best = abs(A[i][j])
                        piv = (i, j)
            if piv is None:
                break
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            done = False
            while not done:
                done = True
                for i in range(t + 1, n):
                    if A[i][t]:
                        q = A[i][t] // A[t][t]
                        addmul_row(i, t, q)
                        if A[i][t]:
                            swap_rows(t, i)
                            done = False
                for j in range(t + 1, m):
                    if A[t][j]:
                        q = A[t][j] // A[t][t]
                        addmul_col(j, t, q)
                        if A[t][j]:
                            swap_cols(t, j)
                            done = False
            if A[t][t] < 0:
                A[t] = [-x for x in A[t]]
                U[t] = [-x for x in U[t]]
            t += 1
        return t

    r = diagonalize()
    # enforce divisibility chain d_i | d_{i+1}; each fix keeps the matrix
    # diagonal except one entry, so re-diagonalizing terminates quickly
    while True:
        bad = None
        for i in range(r - 1):
            if A[i][i] and A[i + 1][i + 1] % A[i][i]:
                bad = i
                break
        if bad is None:
            break
        addmul_col(bad, bad + 1, -1)  # col_bad += col_{bad+1}
        r = diagonalize()
    return A, U, V


def det_bareiss(M):
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    A = mat_copy(M)
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[-1][-1]


# ---------------------------------------------------------------------------
# LLL (rational Gram-Schmidt; ranks here are tiny)

def lll(B, delta=Fraction(3, 4)):
    """LLL-reduce the rows of integer matrix B; returns a new matrix."""
    B = [row[:] for row in B]
    n = len(B)

    def gso():
        Bs = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in B[i]]
            for j in range(i):
                d = sum(x * y for x, y in zip(Bs[j], Bs[j]))
                mu[i][j] = sum(Fraction(x) * y for x, y in zip(B[i], Bs[j])) / d if d else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, Bs[j])]
            Bs.append(v)
        return Bs, mu

    Bs, mu = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                B[k] = [x - q * y for x, y in zip(B[k], B[j])]
                Bs, mu = gso()
        nk = sum(x * x for x in Bs[k])
        nk1 = sum(x * x for x in Bs[k - 1])
        if nk >= (delta - mu[k][k - 1] ** 2) * nk1:
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            Bs, mu = gso()
            k = max(k - 1, 1)
    return B


# ---------------------------------------------------------------------------
# F_p linear algebra (small p; p = 3 is the main client)

def fp_rref(M, p):
    """Reduced row echelon form mod p. Returns (R, pivots)."""
    R = [[x % p for x in row] for row in M]
    if not R:
        return [], []
    m = len(R[0])
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(R)) if R[i][c] % p), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = pow(R[r][c], -1, p)
        R[r] = [(x * inv) % p for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [(x - f * y) % p for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return [row for row in R if any(row)], pivots


def fp_rank(M, p):
    return len(fp_rref(M, p)[0])


def fp_solve(M, target, p):
    """One solution v of v*M = target (mod p), or None.  M: rows."""
    if not M:
        return None if any(x % p for x in target) else []
    A = [row[:] + [0] * len(M) for row in M]
    for i in range(len(M)):
        A[i][len(M[0]) + i] = 1
    R, pivots = fp_rref(A, p)
    t = [x % p for x in target]
    sol = [0] * len(M)
    ncols = len(M[0])
    for row in R:
        c = next((j for j in range(ncols) if row[j] % p), None)
        if c is None:
            continue
        f = t[c]
        if f:
            t = [(x - f * y) % p for x, y in zip(t, row[:ncols])]
            sol = [(s + f * u) % p for s, u in zip(sol, row[ncols:])]
    if any(t):
        return None
    return sol


def fp_kernel(M, p):
    """Basis of left kernel {v : v*M = 0 mod p}."""
    n = len(M)
    if n == 0:
        return []
    A = [row[:] + [0] * n for row in M]
    for i in range(n):
        A[i][len(M[0]) + i] = 1
    ncols = len(M[0])
    R, _ = fp_rref(A, p)
    return [row[ncols:] for row in R if not any(x % p for x in row[:ncols])]


def fp_in_span(rows, v, p):
    return fp_solve(rows, v, p) is not None if rows else not any(x % p for x in v)


def rational_rref(M):
    """RREF over Q for a matrix of Fractions/ints. Returns (R, pivots)."""
    R = [[Fraction(x) for x in row] for row in M]
    if not R:
        return [], []
    m = len(R[0])
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return [row for row in R if any(x != 0 for x in row)], pivots
