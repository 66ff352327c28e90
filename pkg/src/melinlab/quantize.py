"""Weyl quantization of polynomial symbols as finite Fock-basis matrices.

The basis is the tensor Hermite (Fock) basis adapted to hbar: the
ladder operators satisfy [a, a+] = 1 and the coordinate operators are

    yhat   = sqrt(hbar/2) (a + a+)
    etahat = i sqrt(hbar/2) (a+ - a)

so [yhat, etahat] = i*hbar.  A monomial is quantized by peeling factors
through the exact Jordan recursion

    quantize(y_s * q) = (yhat_s @ Q + Q @ yhat_s) / 2

which reproduces Weyl ordering because y_s # q + q # y_s = 2 y_s q for
linear factors.  Ladder matrices couple adjacent levels only, so
computing at internal size N + deg(p) per mode and keeping the leading
N-block yields the exact entries of the infinite matrix; truncation is
then a compression, and lowest eigenvalues are nonincreasing in N.

Everything here is desk scale: d <= 2 modes and N <= 256 per mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    MonotonicityError,
    NonHermitianError,
)
from .symbols import GradedSymbol, PolynomialSymbol, scale_symbol

__all__ = [
    "ladder",
    "mode_operators",
    "OperatorMatrix",
    "weyl_quantize",
    "number_operator",
    "lowest_eigenvalue",
    "TruncationSweep",
    "truncation_sweep",
    "conjugation_residual",
]

MAX_MODES = 2
MAX_TRUNCATION = 256
HERMITICITY_TOL = 1e-12
MONOTONICITY_TOL = 1e-10


def ladder(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Lowering and raising matrices on the first n Fock levels.

    lower[m-1, m] = sqrt(m); raise is the conjugate transpose.
    """
    if n < 2:
        raise ValueError(f"need at least 2 Fock levels, got n={n}")
    lower = np.zeros((n, n), dtype=complex)
    for m in range(1, n):
        lower[m - 1, m] = math.sqrt(m)
    return lower, lower.conj().T


def mode_operators(hbar: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Single-mode coordinate matrices (yhat, etahat) at parameter hbar."""
    if hbar <= 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    low, high = ladder(n)
    s = math.sqrt(hbar / 2.0)
    return s * (low + high), 1j * s * (high - low)


@dataclass
class OperatorMatrix:
    """A quantized symbol on the leading N^d Fock block.

    Basis ordering is lexicographic over per-mode levels with mode 1
    fastest: flat index = n_1 + N*n_2 + ...  Entries are exact values of
    the infinite matrix (up to roundoff) thanks to internal padding.
    """

    d: int
    n: int
    hbar: float
    pad: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.n ** self.d


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2.0


def _jordan_mode_matrix(ypow: int, epow: int, hbar: float, size: int) -> np.ndarray:
    """Exact single-mode Weyl matrix of y^ypow eta^epow via Jordan peeling.

    Each step is re-symmetrized: the intermediate is the quantization of
    a real monomial, hence Hermitian, and averaging with the adjoint
    removes roundoff asymmetry without changing the value.
    """
    yhat, ehat = mode_operators(hbar, size)
    m = np.eye(size, dtype=complex)
    for _ in range(ypow):
        m = _hermitize((yhat @ m + m @ yhat) / 2.0)
    for _ in range(epow):
        m = _hermitize((ehat @ m + m @ ehat) / 2.0)
    return m


def _block_indices(d: int, size: int, n: int) -> np.ndarray:
    """Flat indices of the leading n-block inside a size^d tensor grid."""
    b = np.arange(n ** d)
    out = np.zeros_like(b)
    rem = b
    for s in range(d):
        out = out + (rem % n) * size ** s
        rem = rem // n
    return out


def weyl_quantize(p: PolynomialSymbol, hbar: float, n: int) -> OperatorMatrix:
    """Weyl quantization of p on the leading N^d Fock block.

    Parameters
    ----------
    p : PolynomialSymbol
        Polynomial symbol in d <= 2 transverse modes.
    hbar : float
        Positive semiclassical parameter.
    n : int
        Per-mode truncation, 2 <= n <= 256.

    Returns
    -------
    OperatorMatrix with exact entries of the infinite matrix on the
    block; built internally at per-mode size n + deg(p).
    """
    if p.d > MAX_MODES:
        raise DimensionMismatch(f"quantization supports d <= {MAX_MODES}, got d={p.d}")
    if hbar <= 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    if not 2 <= n <= MAX_TRUNCATION:
        raise ValueError(f"truncation must satisfy 2 <= n <= {MAX_TRUNCATION}, got {n}")
    deg = max(p.degree(), 0)
    size = n + deg
    total = np.zeros((n ** p.d, n ** p.d), dtype=complex)
    block = _block_indices(p.d, size, n)
    mode_cache: dict[tuple[int, int], np.ndarray] = {}
    for idx, coeff in p.iter_terms():
        factors = []
        for s in range(p.d):
            key = (idx[s], idx[p.d + s])
            if key not in mode_cache:
                mode_cache[key] = _jordan_mode_matrix(key[0], key[1], hbar, size)
            factors.append(mode_cache[key])
        full = factors[0]
        for f in factors[1:]:
            full = np.kron(f, full)  # later modes vary slower
        total = total + coeff * full[np.ix_(block, block)]
    if p.is_real():
        skew = np.abs(total - total.conj().T).max() if total.size else 0.0
        if skew > HERMITICITY_TOL:
            raise NonHermitianError(
                f"real symbol produced non-Hermitian matrix (deviation {skew:.3e})"
            )
    return OperatorMatrix(d=p.d, n=n, hbar=hbar, pad=deg, entries=total)


def number_operator(k: int, d: int, n: int) -> OperatorMatrix:
    """The comparison operator N_k = sum_{|alpha| <= k} (L^alpha)+ L^alpha
    at hbar = 1, with L_s = i sqrt(2) a_s+.

    (L^alpha)+ L^alpha = 2^|alpha| a^alpha (a+)^alpha is diagonal in the
    Fock basis with entries 2^|alpha| prod_s (n_s+1)...(n_s+alpha_s);
    the diagonal is assembled from these exact integer products.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if not 1 <= d <= MAX_MODES:
        raise DimensionMismatch(f"need 1 <= d <= {MAX_MODES}, got d={d}")
    if not 2 <= n <= MAX_TRUNCATION:
        raise ValueError(f"truncation must satisfy 2 <= n <= {MAX_TRUNCATION}, got {n}")

    def rising(levels: np.ndarray, a: int) -> np.ndarray:
        out = np.ones_like(levels, dtype=float)
        for t in range(1, a + 1):
            out = out * (levels + t)
        return out

    dim = n ** d
    flat = np.arange(dim)
    digits = [(flat // n ** s) % n for s in range(d)]
    diag = np.zeros(dim)
    for total_order in range(k + 1):
        for alpha in _alpha_compositions(total_order, d):
            term = np.full(dim, float(2 ** total_order))
            for s, a in enumerate(alpha):
                term = term * rising(digits[s], a)
            diag += term
    return OperatorMatrix(d=d, n=n, hbar=1.0, pad=0,
                          entries=np.diag(diag).astype(complex))


def _alpha_compositions(total: int, slots: int):
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _alpha_compositions(total - head, slots - 1):
            yield (head,) + rest


def lowest_eigenvalue(m: OperatorMatrix | np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian operator matrix.

    Raises NonHermitianError if the entries deviate from Hermitian
    symmetry by more than 1e-10.
    """
    entries = m.entries if isinstance(m, OperatorMatrix) else np.asarray(m)
    skew = np.abs(entries - entries.conj().T).max() if entries.size else 0.0
    if skew > 1e-10:
        raise NonHermitianError(f"matrix is not Hermitian (deviation {skew:.3e})")
    return float(np.linalg.eigvalsh(entries)[0])


@dataclass
class TruncationSweep:
    """Lowest eigenvalues across nested truncations.

    Compression makes the values nonincreasing in N; an increase beyond
    1e-10 is rejected at construction as an exactness bug.
    """

    truncations: list[int]
    values: list[float]

    def __post_init__(self):
        if len(self.truncations) != len(self.values):
            raise ValueError("truncations and values must have equal length")
        if any(b <= a for a, b in zip(self.truncations, self.truncations[1:])):
            raise ValueError(f"truncations must be strictly increasing, got {self.truncations}")
        for i in range(1, len(self.values)):
            rise = self.values[i] - self.values[i - 1]
            if rise > MONOTONICITY_TOL:
                raise MonotonicityError(
                    f"lowest eigenvalue rose by {rise:.3e} from N={self.truncations[i - 1]} "
                    f"to N={self.truncations[i]}; padding exactness is broken"
                )

    @property
    def last_gap(self) -> float:
        if len(self.values) < 2:
            return float("inf")
        return abs(self.values[-1] - self.values[-2])

    @property
    def lambda_min(self) -> float:
        return self.values[-1]


def truncation_sweep(p: PolynomialSymbol, hbar: float, ns: list[int]) -> TruncationSweep:
    """Lowest eigenvalue of quantize(p, hbar) at each truncation in ns.

    The matrix is built once at the largest N (entries are exact, so
    smaller truncations are its leading blocks).
    """
    ns = [int(v) for v in ns]
    if not ns:
        raise ValueError("need at least one truncation")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"truncations must be strictly increasing, got {ns}")
    big = weyl_quantize(p, hbar, ns[-1])
    values = []
    for n in ns:
        block = _block_indices(p.d, ns[-1], n)
        values.append(float(np.linalg.eigvalsh(big.entries[np.ix_(block, block)])[0]))
    return TruncationSweep(truncations=ns, values=values)


def conjugation_residual(p: GradedSymbol, lam: float, n: int) -> float:
    """Relative max-norm residual of the scaling conjugation identity.

    quantize(fold(p, Lambda), hbar=1/Lambda) must equal
    quantize(scale_symbol(p) folded at Lambda, hbar=1) on the exact
    block; the identity is algebraic, so the residual is pure roundoff.
    """
    if lam < 1:
        raise ValueError(f"Lambda must be >= 1, got {lam}")
    left = weyl_quantize(p.fold(lam), 1.0 / lam, n).entries
    right = weyl_quantize(scale_symbol(p, fold=True, lam=lam), 1.0, n).entries
    scale = max(np.abs(left).max() if left.size else 0.0,
                np.abs(right).max() if right.size else 0.0)
    if scale == 0.0:
        return 0.0
    return float(np.abs(left - right).max() / scale)
