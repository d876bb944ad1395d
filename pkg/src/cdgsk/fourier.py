"""Truncated Fourier series on the 2*pi torus.

Everything downstream (wave profiles, Bloch matrices, the time stepper)
is built on one representation: dense complex coefficients c_n for
|n| <= N, so that f(z) = sum_n c_n exp(i n z).  Coefficients follow the
analysis convention c_n = (1/2pi) int_0^{2pi} f(z) exp(-i n z) dz, which
makes `evaluate` the exact inverse of the coefficient map.

Products are exact discrete convolutions; no FFT and hence no aliasing
is involved at these truncation sizes (N <= 256 throughout).
"""

from dataclasses import dataclass, field
import numpy as np

_FLAG_TOL = 1e-9


def _as_coeff_array(values):
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 1 or len(arr) % 2 == 0:
        raise ValueError("coefficient array must be 1-d with odd length 2N+1")
    return arr


@dataclass(frozen=True)
class FourierSeries:
    """Immutable truncated Fourier series.

    coeffs  -- complex amplitudes, index j <-> mode n = j - N
    is_real -- c_{-n} = conj(c_n), enforced exactly after every operation
    parity  -- 'even' (c_{-n} = c_n), 'odd' (c_{-n} = -c_n) or None
    """

    coeffs: np.ndarray
    is_real: bool = False
    parity: str = None

    def __post_init__(self):
        arr = _as_coeff_array(self.coeffs)
        scale = max(np.max(np.abs(arr)), 1.0)
        if self.parity not in (None, "even", "odd"):
            raise ValueError("parity must be 'even', 'odd' or None")
        if self.is_real:
            dev = np.max(np.abs(arr - np.conj(arr[::-1])))
            if dev > _FLAG_TOL * scale:
                raise ValueError(f"realness flag violated by {dev:.2e}")
            arr = 0.5 * (arr + np.conj(arr[::-1]))
        if self.parity == "even":
            dev = np.max(np.abs(arr - arr[::-1]))
            if dev > _FLAG_TOL * scale:
                raise ValueError(f"evenness flag violated by {dev:.2e}")
            arr = 0.5 * (arr + arr[::-1])
            if self.is_real:
                arr = arr.real.astype(complex)
        elif self.parity == "odd":
            dev = np.max(np.abs(arr + arr[::-1]))
            if dev > _FLAG_TOL * scale:
                raise ValueError(f"oddness flag violated by {dev:.2e}")
            arr = 0.5 * (arr - arr[::-1])
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, N, is_real=True, parity="even"):
        return cls(np.zeros(2 * N + 1, dtype=complex), is_real, parity)

    @classmethod
    def constant(cls, value, N):
        c = np.zeros(2 * N + 1, dtype=complex)
        c[N] = value
        return cls(c, is_real=np.isreal(value), parity="even" if np.isreal(value) else None)

    @classmethod
    def cosine(cls, n, N, amplitude=1.0):
        """amplitude * cos(n z) as a series truncated at N >= n."""
        if n > N:
            raise ValueError("harmonic exceeds truncation")
        c = np.zeros(2 * N + 1, dtype=complex)
        if n == 0:
            c[N] = amplitude
        else:
            c[N + n] = amplitude / 2.0
            c[N - n] = amplitude / 2.0
        return cls(c, is_real=True, parity="even")

    @classmethod
    def sine(cls, n, N, amplitude=1.0):
        if n > N or n < 1:
            raise ValueError("harmonic out of range")
        c = np.zeros(2 * N + 1, dtype=complex)
        c[N + n] = amplitude / 2.0j
        c[N - n] = -amplitude / 2.0j
        return cls(c, is_real=True, parity="odd")

    @classmethod
    def from_cosines(cls, q):
        """Series sum_n q[n] cos(n z) from real cosine coefficients q[0..N]."""
        q = np.asarray(q, dtype=float)
        N = len(q) - 1
        c = np.zeros(2 * N + 1, dtype=complex)
        c[N] = q[0]
        c[N + 1:] = q[1:] / 2.0
        c[:N] = q[1:][::-1] / 2.0
        return cls(c, is_real=True, parity="even")

    # -- basic queries ---------------------------------------------------------

    @property
    def N(self):
        return (len(self.coeffs) - 1) // 2

    def coeff(self, n):
        """Coefficient c_n, zero outside the truncation."""
        if abs(n) > self.N:
            return 0.0 + 0.0j
        return self.coeffs[self.N + n]

    def cosine_coefficient(self, n):
        """Real coefficient of cos(n z); requires an even real series."""
        if n == 0:
            return self.coeff(0).real
        return (self.coeff(n) + self.coeff(-n)).real

    def mean(self):
        return self.coeff(0).real if self.is_real else self.coeff(0)

    def cosine_coefficients(self):
        q = np.empty(self.N + 1)
        q[0] = self.coeffs[self.N].real
        q[1:] = 2.0 * self.coeffs[self.N + 1:].real
        return q

    def evaluate(self, z):
        """Pointwise values sum_n c_n exp(i n z); real output for real series."""
        z = np.asarray(z, dtype=float)
        n = np.arange(-self.N, self.N + 1)
        vals = np.exp(1j * np.multiply.outer(z, n)) @ self.coeffs
        return vals.real if self.is_real else vals

    def sup_norm(self, ngrid=None):
        """max_z |f(z)| sampled on a uniform grid (default 8N+16 points)."""
        m = ngrid or (8 * self.N + 16)
        z = 2.0 * np.pi * np.arange(m) / m
        return float(np.max(np.abs(self.evaluate(z))))

    def l2_norm(self):
        """Norm induced by the (1/pi)-normalized inner product."""
        return float(np.sqrt(2.0 * np.sum(np.abs(self.coeffs) ** 2)))

    # -- algebra ---------------------------------------------------------------

    def differentiate(self, order=1):
        """d^order/dz^order: c_n -> (i n)^order c_n, parity flipped for odd order."""
        if order < 1:
            raise ValueError("order must be >= 1")
        n = np.arange(-self.N, self.N + 1)
        c = (1j * n) ** order * self.coeffs
        parity = self.parity
        if parity in ("even", "odd") and order % 2 == 1:
            parity = "odd" if parity == "even" else "even"
        return FourierSeries(c, self.is_real, parity)

    def multiply(self, other, mode="truncate"):
        """Product by exact convolution, truncated back to the shared N.

        mode='truncate' is the Galerkin projection of the product.
        mode='dealias' routes through a zero-padded band of ceil(3N/2)
        modes before truncating; with exact convolution both modes agree,
        the option exists to mirror the time stepper's contract.
        """
        if self.N != other.N:
            raise ValueError("operands must share the truncation order")
        if mode not in ("truncate", "dealias"):
            raise ValueError("mode must be 'truncate' or 'dealias'")
        N = self.N
        if mode == "dealias":
            M = int(np.ceil(3 * N / 2))
            a = np.zeros(2 * M + 1, dtype=complex)
            b = np.zeros(2 * M + 1, dtype=complex)
            a[M - N:M + N + 1] = self.coeffs
            b[M - N:M + N + 1] = other.coeffs
            full = np.convolve(a, b)
            c = full[2 * M - N:2 * M + N + 1]
        else:
            full = np.convolve(self.coeffs, other.coeffs)
            c = full[2 * N - N:2 * N + N + 1]
        is_real = self.is_real and other.is_real
        parity = None
        if self.parity and other.parity:
            parity = "even" if self.parity == other.parity else "odd"
        return FourierSeries(c, is_real, parity)

    def inner_product(self, other):
        """(1/pi) int_0^{2pi} f conj(g) dz = 2 sum_n f_n conj(g_n).

        Under this normalization {cos z, sin z, 1/sqrt(2)} is orthonormal.
        """
        if self.N != other.N:
            raise ValueError("operands must share the truncation order")
        return complex(2.0 * np.vdot(other.coeffs, self.coeffs))

    def __add__(self, other):
        if self.N != other.N:
            raise ValueError("operands must share the truncation order")
        parity = self.parity if self.parity == other.parity else None
        return FourierSeries(self.coeffs + other.coeffs,
                             self.is_real and other.is_real, parity)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        is_real = self.is_real and bool(np.isreal(scalar))
        return FourierSeries(scalar * self.coeffs, is_real,
                             self.parity if np.isreal(scalar) else None)

    def reflect(self):
        """f(z) -> f(-z)."""
        parity = self.parity
        return FourierSeries(self.coeffs[::-1], self.is_real, parity)

    def even_part(self):
        c = 0.5 * (self.coeffs + self.coeffs[::-1])
        return FourierSeries(c, self.is_real, "even" if self.is_real else None)

    def odd_part(self):
        c = 0.5 * (self.coeffs - self.coeffs[::-1])
        return FourierSeries(c, self.is_real, "odd" if self.is_real else None)

    def with_truncation(self, M):
        """Pad with zeros or drop tail modes to reach truncation M."""
        c = np.zeros(2 * M + 1, dtype=complex)
        m = min(M, self.N)
        c[M - m:M + m + 1] = self.coeffs[self.N - m:self.N + m + 1]
        return FourierSeries(c, self.is_real, self.parity)

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        return {"N": self.N,
                "re": self.coeffs.real.tolist(),
                "im": self.coeffs.imag.tolist()}

    @classmethod
    def from_json(cls, obj, is_real=False, parity=None):
        c = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
        if len(c) != 2 * obj["N"] + 1:
            raise ValueError("inconsistent truncation in serialized series")
        return cls(c, is_real, parity)


def differentiate(f, order=1):
    return f.differentiate(order)


def multiply(f, g, mode="truncate"):
    return f.multiply(g, mode)


def inner_product(f, g):
    return f.inner_product(g)
