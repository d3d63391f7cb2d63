"""Roots-of-unity arithmetic, Weyl-pair matrices, and tensor plumbing.

Everything downstream is built on an odd integer N, a primitive N-th root
of unity omega = exp(2*pi*i*P/N), and the canonical in-lattice square
roots q = omega**(M+1), q_half = q**(M+1) (N = 2M+1).  Keeping every
scalar inside the cyclic group generated by omega avoids branch cuts:
all powers are computed from a single table of exp(2*pi*i*P*j/N), with
exponents reduced mod N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class PoleError(ValueError):
    """A formula was evaluated at one of its explicit pole loci."""


class TagMismatchError(ValueError):
    """Operators built over different contexts were combined."""


class GenericityError(RuntimeError):
    """A genericity assumption failed (degenerate eigenvalues, fat null space).

    Callers are expected to redraw parameters and retry; see
    `with_generic_redraw`.
    """


@dataclass(frozen=True)
class Context:
    """Arithmetic ground: N, P and the derived unit-modulus constants.

    Invariants (checked by `make_context`): N = 2M+1 odd >= 3, gcd(P, N) = 1,
    omega primitive, q**2 = omega, q**N = 1, q_half**2 = q.
    """

    N: int
    P: int
    M: int
    omega: complex
    q: complex
    q_half: complex
    _roots: tuple = field(repr=False)

    def omega_pow(self, e: int) -> complex:
        return self._roots[int(e) % self.N]

    def q_pow(self, e: int) -> complex:
        return self._roots[((self.M + 1) * int(e)) % self.N]

    def q_half_pow(self, e: int) -> complex:
        """q**(e/2) as a lattice element: q_half**e."""
        return self._roots[((self.M + 1) * (self.M + 1) * int(e)) % self.N]


def make_context(N: int, P: int = 1) -> Context:
    """Build the arithmetic context for odd N >= 3 and gcd(P, N) = 1."""
    if N % 2 == 0 or N < 3:
        raise ValueError(f"N must be odd and >= 3, got {N}")
    if math.gcd(P, N) != 1:
        raise ValueError(f"P must be coprime to N, got gcd({P}, {N}) != 1")
    M = (N - 1) // 2
    roots = tuple(np.exp(2j * np.pi * P * j / N) for j in range(N))
    return Context(N=N, P=P, M=M, omega=roots[1 % N], q=roots[(M + 1) % N],
                   q_half=roots[((M + 1) * (M + 1)) % N], _roots=roots)


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix on the N**sites quantum space, tagged (N, sites)."""

    mat: np.ndarray
    n: int
    sites: int

    def __post_init__(self):
        d = self.n ** self.sites
        if self.mat.shape != (d, d):
            raise ValueError(f"operator shape {self.mat.shape} != ({d}, {d})")

    @property
    def dim(self) -> int:
        return self.n ** self.sites

    @property
    def ctx_tag(self):
        return (self.n, self.sites)

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.mat + other.mat, self.n, self.sites)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.mat - other.mat, self.n, self.sites)

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.mat @ other.mat, self.n, self.sites)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.mat * scalar, self.n, self.sites)

    __rmul__ = __mul__

    def _check(self, other: "Operator"):
        if self.ctx_tag != other.ctx_tag:
            raise TagMismatchError(f"tags differ: {self.ctx_tag} vs {other.ctx_tag}")


def identity_op(ctx: Context, sites: int = 1) -> Operator:
    return Operator(np.eye(ctx.N ** sites, dtype=complex), ctx.N, sites)


def weyl_matrices(ctx: Context) -> dict:
    """The Weyl pair and their product on C^N.

    Z|k> = omega^k |k>, X|k> = |k+1>, Y = ZX; ZX = omega XZ and
    X^N = Z^N = I hold as exact matrix identities up to roundoff.
    """
    N = ctx.N
    X = np.zeros((N, N), dtype=complex)
    Z = np.zeros((N, N), dtype=complex)
    for k in range(N):
        X[k, (k - 1) % N] = 1.0
        Z[k, k] = ctx.omega_pow(k)
    return {"X": Operator(X, N, 1), "Z": Operator(Z, N, 1),
            "Y": Operator(Z @ X, N, 1)}


def kron(ops) -> Operator:
    """Tensor product of operators in the given order."""
    ops = list(ops)
    if not ops:
        raise ValueError("kron of empty list")
    n = ops[0].n
    out = ops[0].mat
    sites = ops[0].sites
    for op in ops[1:]:
        if op.n != n:
            raise TagMismatchError(f"mixed N in kron: {n} vs {op.n}")
        out = np.kron(out, op.mat)
        sites += op.sites
    return Operator(out, n, sites)


def pochhammer(a: complex, rho: complex, n: int) -> complex:
    """rho-shifted factorial (a; rho)_n = (1-a)(1-a rho)...(1-a rho^(n-1))."""
    if n < 0:
        raise ValueError(f"pochhammer order must be >= 0, got {n}")
    out = 1.0 + 0.0j
    cur = complex(a)
    for _ in range(n):
        out *= 1.0 - cur
        cur *= rho
    return out


def global_shift_D(ctx: Context, L: int) -> Operator:
    """D = q^{-L} (tensor power of Y); unitary, D^N = I, spectrum {q^l}."""
    if L < 1:
        raise ValueError("L must be >= 1")
    Y = weyl_matrices(ctx)["Y"]
    return ctx.q_pow(-L) * kron([Y] * L)


def sector_basis(ctx: Context, L: int, l: int) -> list:
    """Orthonormal basis of the q^l-eigenspace of D, dimension N^(L-1).

    D acts on basis states by shifting every site index by one with a
    phase, so its eigenvectors are supported on the N-element orbits of
    the diagonal shift; one eigenvector per orbit per eigenvalue.  The
    construction is exact (no numerical eigensolve).
    """
    N = ctx.N
    l = int(l) % N
    basis = []
    # orbit representatives: multi-indices with first entry 0
    for rep in range(N ** (L - 1)):
        digits = [0]
        r = rep
        for _ in range(L - 1):
            digits.append(r % N)
            r //= N
        R = sum(digits)
        v = np.zeros(N ** L, dtype=complex)
        amp = 1.0 / math.sqrt(N)
        for t in range(N):
            idx = 0
            for d in digits:
                idx = idx * N + (d + t) % N
            v[idx] = amp
            # D|rep + t*1> = phi_t |rep + (t+1)*1>, phi_t = q^{-L} omega^{R + L(t+1)}
            phi_t = ctx.q_pow(-L) * ctx.omega_pow(R + L * (t + 1))
            amp = amp * ctx.q_pow(-l) * phi_t
        basis.append(v)
    return basis


def sector_project(op: Operator, basis) -> np.ndarray:
    """Matrix of op restricted to the span of an orthonormal basis."""
    B = np.column_stack(basis)
    return B.conj().T @ op.mat @ B


def unit_draws(rng: np.random.Generator, n: int) -> np.ndarray:
    """n unit-modulus complex numbers; the standard 'generic parameter' draw."""
    return np.exp(2j * np.pi * rng.random(n))


def with_generic_redraw(fn, rng: np.random.Generator, attempts: int = 5):
    """Run fn(rng) retrying on GenericityError up to `attempts` times."""
    last = None
    for _ in range(attempts):
        try:
            return fn(rng)
        except GenericityError as exc:
            last = exc
    raise last
