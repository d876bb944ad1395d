"""Small-amplitude periodic traveling waves of the CDG-SK equation.

A traveling wave u(x,t) = w(k(x-ct)) with 2*pi-periodic w satisfies,
after one integration in z with zero constant,

    k^4 w'''' - c w + 15 k^2 w w'' + 15 w^3 = 0.

Two independent constructions are provided: the closed-form small-a
expansion

    w = a cos z + a^2 (-15/(2k^2) + cos(2z)/(2k^2)) + a^3 (3/(16k^4)) cos(3z),
    c = k^4 + 105 a^2,

and a Fourier-Galerkin Newton iteration in the even (cosine) subspace
with the amplitude pinned as the exact cos z coefficient.  The Newton
branch is the oracle against which the expansion's O(a^4) remainder and
the speed law are measured.
"""

from dataclasses import dataclass
import numpy as np

from .fourier import FourierSeries

SPEED_QUADRATIC = 105.0  # coefficient of a^2 in c(a)


class NonConvergence(RuntimeError):
    """Newton iteration failed to reach the residual tolerance."""


class SingularJacobian(RuntimeError):
    """Linearized Galerkin system is numerically rank-deficient."""


@dataclass(frozen=True)
class WaveProfile:
    """Even real wave profile w with amplitude a, wavenumber k, speed c.

    The amplitude convention is q_1 = a where q_1 is the cos z cosine
    coefficient of w: the higher-order corrections carry no cos z part,
    so this pins the same parameterization as the expansion.  iterations
    records the Newton steps that produced the profile, when applicable.
    """

    w: FourierSeries
    a: float
    k: float
    c: float
    iterations: int = None

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("wavenumber k must be positive")
        if not (self.w.is_real and self.w.parity == "even"):
            raise ValueError("profile series must be real and even")
        q1 = self.w.cosine_coefficient(1)
        if abs(q1 - self.a) > 1e-9 * max(1.0, abs(self.a)):
            raise ValueError(f"cos z coefficient {q1} does not match amplitude {self.a}")

    def residual_norm(self, ngrid=None):
        return residual(self).sup_norm(ngrid)

    def with_truncation(self, N):
        """Same wave carried at truncation N (tail modes are ~1e-14 relative)."""
        return WaveProfile(self.w.with_truncation(N), self.a, self.k, self.c,
                           iterations=self.iterations)

    def to_json(self):
        return {"a": self.a, "k": self.k, "c": self.c,
                "series": self.w.to_json(),
                "residual_norm": self.residual_norm()}


def speed_expansion(a, k):
    """Closed-form speed law c = k^4 + 105 a^2."""
    return k ** 4 + SPEED_QUADRATIC * a ** 2


def asymptotic_profile(a, k, order=3, N=None):
    """Expansion profile truncated at the requested order in a (1, 2 or 3)."""
    if k <= 0:
        raise ValueError("wavenumber k must be positive")
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    if abs(a) >= 1.0:
        raise ValueError("amplitude out of the small-wave regime")
    if N is None:
        N = 8
    q = np.zeros(N + 1)
    q[1] = a
    if order >= 2:
        q[0] = -15.0 / (2.0 * k ** 2) * a ** 2
        q[2] = a ** 2 / (2.0 * k ** 2)
    if order >= 3:
        q[3] = 3.0 / (16.0 * k ** 4) * a ** 3
    c = k ** 4 + (SPEED_QUADRATIC * a ** 2 if order >= 2 else 0.0)
    return WaveProfile(FourierSeries.from_cosines(q), a, k, c)


def residual(p):
    """Galerkin-truncated residual k^4 w'''' - c w + 15 k^2 w w'' + 15 w^3."""
    w = p.w
    wpp = w.differentiate(2)
    w4 = w.differentiate(4)
    w2 = w.multiply(w)
    return (p.k ** 4) * w4 + (-p.c) * w + 15.0 * p.k ** 2 * w.multiply(wpp) \
        + 15.0 * w2.multiply(w)


def _cos_residual(q, c, k):
    # residual evaluated directly on cosine coefficients, no profile invariants
    w = FourierSeries.from_cosines(q)
    wpp = w.differentiate(2)
    w4 = w.differentiate(4)
    w2 = w.multiply(w)
    res = (k ** 4) * w4 + (-c) * w + 15.0 * k ** 2 * w.multiply(wpp) + 15.0 * w2.multiply(w)
    return res.cosine_coefficients(), w


def _linearization_columns(w, c, k):
    """Cosine-space matrix of k^4 d^4 - c + 15 k^2 (w d^2 + w'') + 45 w^2."""
    N = w.N
    wpp = w.differentiate(2)
    w2 = w.multiply(w)
    cols = np.empty((N + 1, N + 1))
    for n in range(N + 1):
        e = FourierSeries.cosine(n, N)
        le = (k ** 4) * e.differentiate(4) + (-c) * e \
            + 15.0 * k ** 2 * (w.multiply(e.differentiate(2)) + wpp.multiply(e)) \
            + 45.0 * w2.multiply(e)
        cols[:, n] = le.cosine_coefficients()
    return cols


def newton_solve(a, k, N=32, tol=1e-12, guess=None, max_iter=25):
    """Solve the profile equation by Newton iteration in cosine space.

    Unknowns are the cosine coefficients q_0..q_N and the speed c;
    equations are the Galerkin projections of the residual onto cos(nz)
    for n = 0..N plus the amplitude constraint q_1 = a.  The Jacobian is
    assembled analytically from the linearization
    k^4 d^4 - c + 15 k^2 (w d^2 + w''.) + 45 w^2.  Convergence is declared
    on the grid sup-norm of the residual.
    """
    if k <= 0:
        raise ValueError("wavenumber k must be positive")
    if abs(a) > 0.1:
        raise ValueError("amplitude outside the solver's validated range |a| <= 0.1")
    if N < 16:
        raise ValueError("truncation too small, need N >= 16")
    if guess is None:
        guess = asymptotic_profile(a, k, order=3, N=N)
    q = guess.w.with_truncation(N).cosine_coefficients()
    q[1] = a
    c = guess.c

    for iteration in range(max_iter + 1):
        res_cos, w = _cos_residual(q, c, k)
        prof = WaveProfile(w, a, k, c, iterations=iteration)
        if prof.residual_norm() <= tol:
            return prof
        if iteration == max_iter:
            raise NonConvergence(
                f"no convergence after {max_iter} iterations at a={a}, k={k}")
        J = np.zeros((N + 2, N + 2))
        J[:N + 1, :N + 1] = _linearization_columns(w, c, k)
        J[:N + 1, N + 1] = -q               # d residual / d c = -w
        J[N + 1, 1] = 1.0                   # amplitude constraint row
        F = np.concatenate([res_cos, [q[1] - a]])
        try:
            cond_probe = np.linalg.cond(J)
            if not np.isfinite(cond_probe) or cond_probe > 1e14:
                raise SingularJacobian(
                    f"Jacobian condition {cond_probe:.2e} at a={a}, k={k}")
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from exc
        q = q + delta[:N + 1]
        c = c + delta[N + 1]
        q[1] = a


def newton_continuation(a, k, N=32, tol=1e-12, step=0.01, max_iter=25):
    """Newton branch following from a=0 in amplitude steps (default 0.01)."""
    if a == 0.0:
        return newton_solve(0.0, k, N, tol, max_iter=max_iter)
    sign = 1.0 if a > 0 else -1.0
    amplitudes = list(np.arange(step, abs(a), step)) + [abs(a)]
    prof = None
    for aa in amplitudes:
        guess = None
        if prof is not None:
            w = prof.w.cosine_coefficients()
            w[1] = sign * aa
            guess = WaveProfile(FourierSeries.from_cosines(w), sign * aa, k, prof.c)
        prof = newton_solve(sign * aa, k, N, tol, guess=guess, max_iter=max_iter)
    return prof


def solve_profile(a, k, N=32, tol=1e-12):
    """Newton profile, with continuation engaged for the larger amplitudes."""
    if abs(a) <= 0.02:
        return newton_solve(a, k, N, tol)
    return newton_continuation(a, k, N, tol)


def fit_speed_coefficients(samples, k):
    """Least-squares fit of c(a) to c0 + c2 a^2 + c4 a^4 (even powers only).

    samples: iterable of (a, c) pairs, at least 4 distinct amplitudes,
    all |a| <= 0.02.  Returns (c0, c2, c4).
    """
    samples = list(samples)
    if len({a for a, _ in samples}) < 4:
        raise ValueError("need at least 4 distinct amplitudes")
    a = np.array([s[0] for s in samples])
    c = np.array([s[1] for s in samples])
    if np.max(np.abs(a)) > 0.02 + 1e-15:
        raise ValueError("fit restricted to |a| <= 0.02")
    A = np.column_stack([np.ones_like(a), a ** 2, a ** 4])
    coef, *_ = np.linalg.lstsq(A, c, rcond=None)
    return tuple(coef)
