"""Gaussian-state algebra in shot-noise units.

Conventions used throughout the package:

* quadrature ordering ``(x1, p1, x2, p2, ...)``;
* vacuum covariance is the identity (one shot-noise unit, SNU, per quadrature);
* ``x`` is the amplitude quadrature X1, ``p`` the phase quadrature X2;
* the squeeze parameter ``r`` is an amplitude parameter, so a squeezed
  quadrature has variance ``exp(-2 r)``;
* two-mode squeezing on vacuum yields the cross block ``sinh(2r) diag(1, -1)``.

States are immutable. Every operation returns a new :class:`GaussianState`
whose covariance has been symmetrised.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-9


class UnphysicalStateError(ValueError):
    """Raised when a covariance matrix violates the uncertainty principle."""


class GaussianState:
    """Mean vector and covariance matrix of ``n_modes`` optical modes.

    Parameters
    ----------
    mean : array_like, shape (2n,)
    cov : array_like, shape (2n, 2n)
        Symmetric, physical covariance matrix in SNU.
    """

    __slots__ = ("_mean", "_cov")

    def __init__(self, mean, cov):
        mean = np.array(mean, dtype=float)
        cov = np.array(cov, dtype=float)
        if mean.ndim != 1 or mean.size == 0 or mean.size % 2:
            raise ValueError(f"mean must be a non-empty vector of even length, got shape {mean.shape}")
        dim = mean.size
        if cov.shape != (dim, dim):
            raise ValueError(f"cov must have shape {(dim, dim)}, got {cov.shape}")
        if not np.all(np.isfinite(cov)) or not np.all(np.isfinite(mean)):
            raise ValueError("mean and cov must be finite")
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
            raise ValueError("cov is not symmetric")
        cov = 0.5 * (cov + cov.T)
        nu = _symplectic_spectrum(cov)
        if nu[0] < 1.0 - PHYSICAL_TOL:
            raise UnphysicalStateError(
                f"smallest symplectic eigenvalue {nu[0]:.12g} is below 1"
            )
        self._set(mean, cov)

    def _set(self, mean, cov):
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "_mean", mean)
        object.__setattr__(self, "_cov", cov)

    @classmethod
    def _trusted(cls, mean, cov):
        # skips the physicality audit; only for outputs of symplectic/loss maps
        obj = cls.__new__(cls)
        obj._set(np.asarray(mean, dtype=float), 0.5 * (cov + cov.T))
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussianState is immutable")

    @property
    def mean(self):
        return self._mean

    @property
    def cov(self):
        return self._cov

    @property
    def n_modes(self):
        return self._mean.size // 2

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes})"

    def reduced(self, modes):
        """Marginal state of the listed modes (partial trace)."""
        modes = [int(m) for m in np.atleast_1d(modes)]
        for m in modes:
            _check_mode(self, m)
        idx = np.ravel([[2 * m, 2 * m + 1] for m in modes])
        return GaussianState._trusted(self._mean[idx].copy(), self._cov[np.ix_(idx, idx)].copy())

    def tensor(self, other):
        """Product state ``self ⊗ other``; ``other``'s modes are appended."""
        d1, d2 = 2 * self.n_modes, 2 * other.n_modes
        cov = np.zeros((d1 + d2, d1 + d2))
        cov[:d1, :d1] = self._cov
        cov[d1:, d1:] = other._cov
        return GaussianState._trusted(np.concatenate([self._mean, other._mean]), cov)


def _check_mode(state, mode):
    if not 0 <= mode < state.n_modes:
        raise IndexError(f"mode {mode} out of range for a {state.n_modes}-mode state")


def _check_unit_interval(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


@lru_cache(maxsize=32)
def symplectic_form(n):
    """Block-diagonal symplectic form ``⊕ [[0, 1], [-1, 0]]`` (read-only, cached)."""
    omega = np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    omega.setflags(write=False)
    return omega


@lru_cache(maxsize=256)
def _mode_index(modes):
    idx = np.array([k for m in modes for k in (2 * m, 2 * m + 1)])
    idx.setflags(write=False)
    return idx


def _symplectic_spectrum(cov):
    n = cov.shape[0] // 2
    if n == 1:
        return np.array([np.sqrt(max(cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0], 0.0))])
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        # not positive definite, so certainly unphysical; fall back to the general spectrum
        ev = np.abs(np.linalg.eigvals(symplectic_form(n) @ cov))
        return np.sort(ev)[::2]
    # L^T (i Omega) L is Hermitian and similar to i Omega V: eigenvalues are ±nu
    herm = chol.T @ (1j * symplectic_form(n)) @ chol
    ev = np.linalg.eigvalsh(herm)
    return ev[n:]


def _apply_local(state, modes, S):
    """Conjugate ``state`` by symplectic ``S`` acting on ``modes``."""
    if len(modes) == 1 or (len(modes) == 2 and modes[1] == modes[0] + 1):
        idx = slice(2 * modes[0], 2 * modes[-1] + 2)
    else:
        idx = _mode_index(tuple(modes))
    mean = state.mean.copy()
    mean[idx] = S @ mean[idx]
    cov = state.cov.copy()
    # rows then columns: V -> S V S^T restricted to the touched index set
    cov[idx, :] = S @ cov[idx, :]
    cov[:, idx] = cov[:, idx] @ S.T
    return GaussianState._trusted(mean, cov)


def vacuum(n):
    """``n``-mode vacuum: zero mean, identity covariance."""
    if int(n) != n or n < 1:
        raise ValueError(f"number of modes must be a positive integer, got {n}")
    n = int(n)
    return GaussianState._trusted(np.zeros(2 * n), np.eye(2 * n))


def rotation_matrix(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def squeeze_matrix(r, phase=0.0):
    """Single-mode squeezer; ``phase = 0`` squeezes the p quadrature."""
    c, s = np.cos(phase), np.sin(phase)
    return np.cosh(r) * np.eye(2) + np.sinh(r) * np.array([[c, s], [s, -c]])


def two_mode_squeeze_matrix(r):
    ch, sh = np.cosh(r), np.sinh(r)
    return np.array([
        [ch, 0.0, sh, 0.0],
        [0.0, ch, 0.0, -sh],
        [sh, 0.0, ch, 0.0],
        [0.0, -sh, 0.0, ch],
    ])


def beamsplitter_matrix(transmissivity):
    t = np.sqrt(transmissivity)
    rr = np.sqrt(1.0 - transmissivity)
    return np.array([
        [t, 0.0, rr, 0.0],
        [0.0, t, 0.0, rr],
        [-rr, 0.0, t, 0.0],
        [0.0, -rr, 0.0, t],
    ])


def squeeze(state, mode, r, phase=0.0):
    """Squeeze one mode by ``r`` (variance ``e^{-2r}`` along the squeezed axis).

    With ``phase = 0`` the p quadrature is squeezed and x anti-squeezed.
    The squeezed axis rotates by ``phase / 2``.
    """
    _check_mode(state, mode)
    if r < 0:
        raise ValueError(f"squeeze parameter must be non-negative, got {r}")
    return _apply_local(state, [mode], squeeze_matrix(r, phase))


def two_mode_squeeze(state, i, j, r):
    """Two-mode squeezing between modes ``i`` and ``j``.

    On vacuum this gives reduced covariances ``cosh(2r) I`` and the cross
    block ``sinh(2r) diag(1, -1)``, so ``x_i - x_j`` and ``p_i + p_j`` are
    squeezed.
    """
    _check_mode(state, i)
    _check_mode(state, j)
    if i == j:
        raise ValueError("two-mode squeezing needs two distinct modes")
    if r < 0:
        raise ValueError(f"squeeze parameter must be non-negative, got {r}")
    return _apply_local(state, [i, j], two_mode_squeeze_matrix(r))


def displace(state, mode, dx, dp):
    _check_mode(state, mode)
    mean = state.mean.copy()
    mean[2 * mode] += dx
    mean[2 * mode + 1] += dp
    return GaussianState._trusted(mean, state.cov.copy())


def phase_rotate(state, mode, theta):
    """Rotate the (x, p) plane of one mode counter-clockwise by ``theta``."""
    _check_mode(state, mode)
    return _apply_local(state, [mode], rotation_matrix(theta))


def beamsplitter(state, i, j, transmissivity):
    """Mix modes ``i`` and ``j`` on a beamsplitter of power transmissivity ``T``.

    ``a_i -> sqrt(T) a_i + sqrt(1-T) a_j`` and
    ``a_j -> -sqrt(1-T) a_i + sqrt(T) a_j``.
    """
    _check_mode(state, i)
    _check_mode(state, j)
    if i == j:
        raise ValueError("beamsplitter needs two distinct modes")
    _check_unit_interval("transmissivity", transmissivity)
    return _apply_local(state, [i, j], beamsplitter_matrix(transmissivity))


def loss(state, mode, eta):
    """Pure-loss channel of efficiency ``eta`` on one mode.

    The mode's covariance block becomes ``eta V + (1 - eta) I`` and its
    mean is scaled by ``sqrt(eta)``.
    """
    _check_mode(state, mode)
    _check_unit_interval("eta", eta)
    k = np.sqrt(eta)
    sl = slice(2 * mode, 2 * mode + 2)
    mean = state.mean.copy()
    mean[sl] *= k
    cov = state.cov.copy()
    cov[sl, :] *= k
    cov[:, sl] *= k
    cov[2 * mode, 2 * mode] += 1.0 - eta
    cov[2 * mode + 1, 2 * mode + 1] += 1.0 - eta
    return GaussianState._trusted(mean, cov)


def quadrature_variance(state, coeffs):
    """Variance ``q^T V q`` of the quadrature combination with coefficients ``q``.

    For unit-norm ``q`` and vacuum input the result is 1 SNU.
    """
    q = np.asarray(coeffs, dtype=float)
    if q.shape != state.mean.shape:
        raise ValueError(f"coefficient vector must have length {state.mean.size}, got {q.shape}")
    if not np.any(q):
        raise ValueError("coefficient vector must be non-zero")
    return float(q @ state.cov @ q)


def symplectic_eigenvalues(state):
    """Sorted symplectic eigenvalues; all are >= 1 for a physical state."""
    return _symplectic_spectrum(state.cov)


def purity(state):
    """``Tr rho^2 = 1 / sqrt(det V)`` in SNU."""
    return float(1.0 / np.sqrt(np.linalg.det(state.cov)))


def is_physical(state, tol=PHYSICAL_TOL):
    return bool(symplectic_eigenvalues(state)[0] >= 1.0 - tol)
