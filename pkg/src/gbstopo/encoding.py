"""Turn a complex-weighted graph into a simulated GBS machine program.

The adjacency matrix A is rescaled to A' = c*A + d*I so that its largest
singular value sits strictly below 1, then factorized as
A' = U diag(lambda) U^T with U unitary and lambda the singular values of
A' (Autonne/Takagi form). The per-mode squeezing parameters follow as
r_i = atanh(lambda_i).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import FormatError, InvariantError
from .graph import ComplexGraph

RECON_TOL = 1e-10
SYM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GBSEncoding:
    """Machine program: rescaling constants, interferometer, squeezings."""

    c: float
    d: float
    u: np.ndarray
    lambdas: np.ndarray
    squeezings: np.ndarray

    @property
    def n(self) -> int:
        return len(self.lambdas)


def _sigma_max(m: np.ndarray) -> float:
    return float(np.linalg.svd(m, compute_uv=False)[0])


def rescale(
    a: ComplexGraph, target_spectral: float = 0.7, d: float = 0.0
) -> tuple[float, np.ndarray]:
    """Find c such that A' = c*A + d*I has largest singular value
    target_spectral, and return (c, A').

    With d = 0 this is simply c = target / sigma_max(A). With d != 0 the
    scale is the fixed point of c = target / sigma_max(A + (d/c) I),
    resolved by damped iteration. A zero matrix forces c = 1 and
    A' = d*I (the target is unattainable there; d = 0 is an error).
    """
    if not 0.0 < target_spectral < 1.0:
        raise ValueError("target spectral value must lie in (0, 1)")
    w = a.weights
    smax = _sigma_max(w)
    if smax == 0.0:
        if d == 0.0:
            raise ValueError("zero matrix with d = 0 admits no rescaling")
        return 1.0, d * np.eye(a.n, dtype=complex)
    if d == 0.0:
        c = target_spectral / smax
        return c, c * w
    eye = np.eye(a.n)
    c = target_spectral / smax
    for _ in range(1000):
        c_next = target_spectral / _sigma_max(w + (d / c) * eye)
        if abs(c_next - c) < 1e-13:
            c = c_next
            break
        c = 0.5 * (c + c_next)
    a_prime = c * w + d * eye
    if abs(_sigma_max(a_prime) - target_spectral) > 1e-9:
        raise InvariantError(
            f"rescale iteration did not converge for d={d}"
        )
    return c, a_prime


def takagi(a_prime: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factorize a complex symmetric matrix as A' = U diag(lam) U^T.

    Returns (U, lam) with U unitary and lam the singular values of A' in
    descending order. Built on the SVD: with A' = U0 S V†, the matrix
    Z = U0† conj(V) is block diagonal over groups of equal singular
    values and symmetric unitary on each nonzero block, so U = U0 sqrt(Z)
    computed blockwise does the job. Zero singular values get an identity
    block (their columns never touch the reconstruction).
    """
    a_prime = np.asarray(a_prime, dtype=complex)
    if a_prime.ndim != 2 or a_prime.shape[0] != a_prime.shape[1]:
        raise ValueError("input must be a square matrix")
    asym = float(np.max(np.abs(a_prime - a_prime.T))) if a_prime.size else 0.0
    if asym > SYM_TOL:
        raise ValueError(f"matrix is not symmetric (max deviation {asym:.2e})")
    n = a_prime.shape[0]
    u0, sigma, vh = np.linalg.svd(a_prime)
    z = u0.conj().T @ vh.T
    scale = sigma[0] if n else 0.0
    group_tol = 1e-8 * scale + 1e-14
    blocks = []
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and sigma[start] - sigma[stop] <= group_tol:
            stop += 1
        idx = slice(start, stop)
        if sigma[start] <= group_tol:
            blocks.append(np.eye(stop - start, dtype=complex))
        else:
            zg = z[idx, idx]
            zg = 0.5 * (zg + zg.T)
            blocks.append(scipy.linalg.sqrtm(zg).astype(complex))
        start = stop
    u = u0 @ scipy.linalg.block_diag(*blocks)
    return u, sigma


def reconstruct(u: np.ndarray, lambdas: np.ndarray) -> np.ndarray:
    """Evaluate U diag(lam) U^T."""
    u = np.asarray(u, dtype=complex)
    lambdas = np.asarray(lambdas, dtype=float)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[1] != len(lambdas):
        raise ValueError("dimension mismatch between U and lambdas")
    return u @ np.diag(lambdas) @ u.T


def encode(
    a: ComplexGraph, target_spectral: float = 0.7, d: float = 0.0
) -> GBSEncoding:
    """Full graph-to-machine encoding; validates its own reconstruction."""
    c, a_prime = rescale(a, target_spectral, d)
    u, lambdas = takagi(a_prime)
    if lambdas[0] >= 1.0:
        raise ValueError(
            f"largest Takagi value {lambdas[0]} >= 1; reduce target or |d|"
        )
    err = float(np.max(np.abs(reconstruct(u, lambdas) - a_prime)))
    unit = float(np.max(np.abs(u.conj().T @ u - np.eye(a.n))))
    if err > RECON_TOL or unit > RECON_TOL:
        raise InvariantError(
            f"encoding failed validation: reconstruction {err:.2e}, "
            f"unitarity {unit:.2e}"
        )
    squeezings = np.arctanh(lambdas)
    return GBSEncoding(c=c, d=d, u=u, lambdas=lambdas, squeezings=squeezings)


def mean_photon_number(e: GBSEncoding) -> float:
    """Expected total photons, sum_i sinh^2(r_i) = sum_i lam_i^2/(1-lam_i^2)."""
    lam2 = e.lambdas**2
    return float(np.sum(lam2 / (1.0 - lam2)))


def save_encoding(e: GBSEncoding) -> bytes:
    u_flat = [
        {"re": z.real, "im": z.imag} for z in e.u.reshape(-1)
    ]
    doc = {
        "n": e.n,
        "c": e.c,
        "d": e.d,
        "lambdas": [float(x) for x in e.lambdas],
        "squeezings": [float(x) for x in e.squeezings],
        "u": u_flat,
    }
    return json.dumps(doc, indent=1).encode("utf-8")


def load_encoding(source) -> GBSEncoding:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise FormatError(f"encoding document is not valid JSON: {exc}") from exc
    try:
        n = int(doc["n"])
        u = np.array(
            [complex(rec["re"], rec["im"]) for rec in doc["u"]], dtype=complex
        ).reshape(n, n)
        return GBSEncoding(
            c=float(doc["c"]),
            d=float(doc["d"]),
            u=u,
            lambdas=np.array(doc["lambdas"], dtype=float),
            squeezings=np.array(doc["squeezings"], dtype=float),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad encoding document: {exc}") from exc
