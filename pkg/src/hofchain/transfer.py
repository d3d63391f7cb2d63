"""L-operators, R-matrix, transfer matrices, and the L=3 Heisenberg algebra.

The local L-operator for a projective site parameter h = [a:b:c:d] is the
2x2 block matrix (aY, xbX; xcZ, d) acting on aux (2-dim) x quantum (N-dim).
Chains multiply in the auxiliary space and tensor in the quantum space;
the transfer matrix is the auxiliary trace and forms a commuting family
in the spectral parameter x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .weylcore import (Context, Operator, PoleError, identity_op, kron,
                       sector_basis, weyl_matrices)


@dataclass(frozen=True)
class SiteParams:
    """Projective representative of h = [a:b:c:d]; not all components zero."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0:
            raise ValueError("all of a, b, c, d are zero")


@dataclass(frozen=True)
class ChainParams:
    sites: tuple

    def __post_init__(self):
        if len(self.sites) < 1:
            raise ValueError("chain must have at least one site")

    @property
    def L(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class BlockOperator2x2:
    """2x2 auxiliary-space matrix with Operator entries of equal dimension."""

    blocks: tuple  # ((b11, b12), (b21, b22))

    def __post_init__(self):
        tags = {b.ctx_tag for row in self.blocks for b in row}
        if len(tags) != 1:
            raise ValueError(f"block tags differ: {tags}")

    def __getitem__(self, ij):
        return self.blocks[ij[0]][ij[1]]

    def aux_product(self, other: "BlockOperator2x2") -> "BlockOperator2x2":
        """Matrix product on aux indices, tensor product on quantum spaces."""
        rows = []
        for i in range(2):
            row = []
            for j in range(2):
                acc = None
                for k in range(2):
                    term = kron([self.blocks[i][k], other.blocks[k][j]])
                    acc = term if acc is None else acc + term
                row.append(acc)
            rows.append(tuple(row))
        return BlockOperator2x2(tuple(rows))

    def trace_aux(self) -> Operator:
        return self.blocks[0][0] + self.blocks[1][1]


def local_L(h: SiteParams, x: complex, ctx: Context) -> BlockOperator2x2:
    """Single-site L-operator (aY, xbX; xcZ, d)."""
    w = weyl_matrices(ctx)
    I = identity_op(ctx)
    return BlockOperator2x2(((h.a * w["Y"], (x * h.b) * w["X"]),
                             ((x * h.c) * w["Z"], h.d * I)))


def chain_L(chain: ChainParams, x: complex, ctx: Context) -> BlockOperator2x2:
    blocks = local_L(chain.sites[0], x, ctx)
    for h in chain.sites[1:]:
        blocks = blocks.aux_product(local_L(h, x, ctx))
    return blocks


def r_matrix(x: complex, ctx: Context) -> np.ndarray:
    """The 4x4 six-vertex R-matrix; has a pole at x = 0."""
    if x == 0:
        raise PoleError("R(x) has a pole at x = 0")
    w = ctx.omega
    xi = 1.0 / x
    return np.array([
        [x * w - xi, 0, 0, 0],
        [0, w * (x - xi), w - 1, 0],
        [0, w - 1, x - xi, 0],
        [0, 0, 0, x * w - xi],
    ], dtype=complex)


def rll_residual(h: SiteParams, x: complex, xp: complex, ctx: Context) -> float:
    """Max-norm defect of R(x/x')(L(x) ox 1)(1 ox L(x')) = (1 ox L(x'))(L(x) ox 1)R(x/x')."""
    if x == 0 or xp == 0:
        raise PoleError("spectral parameters must be nonzero")
    N = ctx.N
    Lx = local_L(h, x, ctx)
    Lxp = local_L(h, xp, ctx)
    eye2 = np.eye(2)
    L1 = np.zeros((4 * N, 4 * N), dtype=complex)   # L(x) on first aux slot
    L2 = np.zeros((4 * N, 4 * N), dtype=complex)   # L(x') on second aux slot
    for i in range(2):
        for j in range(2):
            E = np.zeros((2, 2))
            E[i, j] = 1.0
            L1 += np.kron(np.kron(E, eye2), Lx[i, j].mat)
            L2 += np.kron(np.kron(eye2, E), Lxp[i, j].mat)
    R = np.kron(r_matrix(x / xp, ctx), np.eye(N))
    lhs = R @ L1 @ L2
    rhs = L2 @ L1 @ R
    return float(np.max(np.abs(lhs - rhs)))


def f_op(h: SiteParams, x: complex, xi: complex, xip: complex, ctx: Context) -> Operator:
    """F_h(x, xi, xi') = xi' a Y - x b X + xi' xi x c Z - xi d."""
    w = weyl_matrices(ctx)
    I = identity_op(ctx)
    return (xip * h.a) * w["Y"] - (x * h.b) * w["X"] \
        + (xip * xi * x * h.c) * w["Z"] - (xi * h.d) * I


def gauge_L(h: SiteParams, x: complex, xi: complex, xip: complex,
            ctx: Context) -> BlockOperator2x2:
    """Gauge-transformed local operator A_j L_h(x) A_{j+1}^{-1}, in F-form."""
    return BlockOperator2x2((
        (f_op(h, x, xi - 1, xip, ctx), -1 * f_op(h, x, xi - 1, xip - 1, ctx)),
        (f_op(h, x, xi, xip, ctx), -1 * f_op(h, x, xi, xip - 1, ctx)),
    ))


def gauge_chain_L(chain: ChainParams, x: complex, xis, ctx: Context) -> BlockOperator2x2:
    """Ordered aux-product of gauge-transformed site operators; xis is cyclic."""
    L = chain.L
    blocks = gauge_L(chain.sites[0], x, xis[0], xis[1 % L], ctx)
    for j in range(1, L):
        blocks = blocks.aux_product(
            gauge_L(chain.sites[j], x, xis[j], xis[(j + 1) % L], ctx))
    return blocks


def transfer_T(chain: ChainParams, x: complex, ctx: Context) -> Operator:
    """Transfer matrix: auxiliary trace of the ordered chain product."""
    return chain_L(chain, x, ctx).trace_aux()


@dataclass(frozen=True)
class TransferPencil:
    """Even-power coefficients [T_0, T_2, ..., T_{2 floor(L/2)}] of T(x)."""

    coeffs: tuple

    def __call__(self, x: complex) -> Operator:
        acc = self.coeffs[0]
        xsq = x * x
        p = 1.0
        for c in self.coeffs[1:]:
            p *= xsq
            acc = acc + p * c
        return acc


def transfer_pencil(chain: ChainParams, ctx: Context) -> TransferPencil:
    """Recover the even coefficients by interpolation in x^2.

    T(x) is even of degree 2*floor(L/2); evaluating at x^2 = 1..K and
    solving the KxK Vandermonde system is exact at these sizes.
    """
    K = chain.L // 2 + 1
    xsq = np.arange(1, K + 1, dtype=float)
    V = np.vander(xsq, K, increasing=True)
    mats = np.array([transfer_T(chain, np.sqrt(s), ctx).mat for s in xsq])
    flat = mats.reshape(K, -1)
    sol = np.linalg.solve(V, flat)
    dim = mats.shape[1]
    coeffs = tuple(Operator(sol[i].reshape(dim, dim), ctx.N, chain.L)
                   for i in range(K))
    return TransferPencil(coeffs)


def commutator_residual(chain: ChainParams, x: complex, xp: complex,
                        ctx: Context) -> float:
    A = transfer_T(chain, x, ctx).mat
    B = transfer_T(chain, xp, ctx).mat
    return float(np.max(np.abs(A @ B - B @ A)))


def t2_formula_L3(chain: ChainParams, ctx: Context) -> Operator:
    """The x^2 coefficient of the L=3 transfer matrix, written termwise."""
    if chain.L != 3:
        raise ValueError("termwise T_2 formula is specific to L = 3")
    w = weyl_matrices(ctx)
    X, Z, Y = w["X"], w["Z"], w["Y"]
    I = identity_op(ctx)
    (h0, h1, h2) = chain.sites
    return (h0.b * h1.c * h2.a * kron([X, Z, Y])
            + h0.a * h1.b * h2.c * kron([Y, X, Z])
            + h0.c * h1.a * h2.b * kron([Z, Y, X])
            + h0.c * h1.b * h2.d * kron([Z, X, I])
            + h0.d * h1.c * h2.b * kron([I, Z, X])
            + h0.b * h1.d * h2.c * kron([X, I, Z]))


def heisenberg_UV(ctx: Context) -> dict:
    """The L=3 Heisenberg generators U, V (and D, W) on C^{N^3}.

    U = D^{-1/2} Z(x)X(x)I and V = D^{-1/2} X(x)I(x)Z satisfy UV = omega VU
    and U^N = V^N = I.  D^{-1/2} means D^{N-(M+1)}, the canonical in-lattice
    half power (D^N = I).  W = q D^{-1/2} V^{-1} U^{-1} completes the Weyl
    triple appearing in the Hofstadter form of the transfer matrix.
    """
    N, M = ctx.N, ctx.M
    w = weyl_matrices(ctx)
    X, Z = w["X"], w["Z"]
    I = identity_op(ctx)
    D = kron([w["Y"]] * 3) * ctx.q_pow(-3)
    D_half = Operator(np.linalg.matrix_power(D.mat, (M + 1) % N), N, 3)
    D_mhalf = Operator(np.linalg.matrix_power(D.mat, (N - (M + 1)) % N), N, 3)
    U = D_mhalf @ kron([Z, X, I])
    V = D_mhalf @ kron([X, I, Z])
    U_inv = Operator(np.linalg.inv(U.mat), N, 3)
    V_inv = Operator(np.linalg.inv(V.mat), N, 3)
    W = ctx.q * (D_mhalf @ V_inv @ U_inv)
    return {"U": U, "V": V, "D": D, "W": W,
            "D_half": D_half, "D_mhalf": D_mhalf}


def hofstadter_hamiltonian(ctx: Context, mu, nu, rho, alpha, beta, gamma) -> Operator:
    """The N x N flux Hamiltonian mu(aU + 1/(aU)) + nu(bV + ..) + rho(cW + ..).

    Canonical Weyl triple on C^N: U = Z, V = X, W = (ZX)^{-1}, which
    satisfies UV = omega VU, VW = omega WV, WU = omega UW and the N-th
    power identities.  Hermitian for real mu, nu, rho and unit-modulus
    alpha, beta, gamma.
    """
    if alpha == 0 or beta == 0 or gamma == 0:
        raise ValueError("alpha, beta, gamma must be nonzero")
    w = weyl_matrices(ctx)
    U = w["Z"].mat
    V = w["X"].mat
    W = np.linalg.inv(w["Y"].mat)
    H = (mu * (alpha * U + np.linalg.inv(alpha * U))
         + nu * (beta * V + np.linalg.inv(beta * V))
         + rho * (gamma * W + np.linalg.inv(gamma * W)))
    return Operator(H, ctx.N, 1)


def hofstadter_sector_factor(ctx: Context, l: int) -> complex:
    """gamma for which the sector-l restriction of q D^{-1/2} T_2 is H_FK.

    On the q^l eigenspace of D the W-term coefficient of the L=3
    degenerate transfer matrix reduces to gamma_l = (q^{-1} q^{l/2})^{-1}.
    """
    return 1.0 / (ctx.q_pow(-1) * ctx.q_half_pow(l))


def sector_spectrum(op: Operator, ctx: Context, L: int, l: int) -> np.ndarray:
    """Eigenvalues of op restricted to the q^l sector of D."""
    basis = sector_basis(ctx, L, l)
    B = np.column_stack(basis)
    return np.linalg.eigvals(B.conj().T @ op.mat @ B)
