"""Honeycomb and brick-wall tight-binding models with complex NNN hopping.

Provides the lattice geometries, the two-band Bloch Hamiltonians, the
analytic topological phase boundaries, and a plaquette Berry-flux Chern
oracle used throughout the package as ground truth.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import GapClosedError, NotConvergedError

SQRT3 = np.sqrt(3.0)


class ModelKind(Enum):
    HALDANE = "haldane"
    BRICKWALL = "brickwall"

    @classmethod
    def parse(cls, name):
        key = str(name).strip().lower().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown model kind: {name!r}")


@dataclass(frozen=True)
class LatticeGeometry:
    """Hopping vectors and Bravais/reciprocal basis of one model.

    nn are the three nearest-neighbor vectors a1..a3, nnn the
    next-nearest-neighbor vectors b_i (three for the honeycomb, two for
    the brick wall).  All in dimensionless lattice units.
    """

    nn: np.ndarray          # (3, 2)
    nnn: np.ndarray         # (2 or 3, 2)
    lattice: np.ndarray     # (2, 2) rows A1, A2
    reciprocal: np.ndarray  # (2, 2) rows G1, G2


@dataclass(frozen=True)
class HaldaneParams:
    """Dimensionless model parameters: sublattice mass, NNN flux, hoppings."""

    m: float
    phi: float
    t1: float = 1.0
    t2: float = 1.0

    def __post_init__(self):
        if not -np.pi <= self.phi <= np.pi:
            raise ValueError(f"phi must lie in [-pi, pi], got {self.phi}")
        if self.t1 <= 0:
            raise ValueError("t1 must be positive")
        if self.t2 < 0:
            raise ValueError("t2 must be non-negative")


@dataclass(frozen=True)
class DVector:
    """Pauli decomposition H = eps*I + dx*sx + dy*sy + dz*sz at one k."""

    eps: float
    dx: float
    dy: float
    dz: float

    def norm(self):
        return float(np.sqrt(self.dx**2 + self.dy**2 + self.dz**2))


def _nn_vectors(kind):
    if kind is ModelKind.HALDANE:
        return np.array([[SQRT3 / 2, 0.5], [-SQRT3 / 2, 0.5], [0.0, -1.0]])
    return np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, -1.0]])


def geometry(kind):
    """Return the :class:`LatticeGeometry` for a model kind.

    NNN vectors are b1 = a2 - a3, b2 = a3 - a1 (and b3 = a1 - a2 for the
    honeycomb; the brick-wall geometry removes b3).  Bravais vectors are
    A1 = a1 - a2, A2 = a2 - a3 and the reciprocal basis solves
    G_i . A_j = 2*pi*delta_ij.
    """
    nn = _nn_vectors(kind)
    a1, a2, a3 = nn
    b1, b2, b3 = a2 - a3, a3 - a1, a1 - a2
    nnn = np.array([b1, b2]) if kind is ModelKind.BRICKWALL else np.array([b1, b2, b3])
    lattice = np.array([a1 - a2, a2 - a3])
    reciprocal = 2.0 * np.pi * np.linalg.inv(lattice).T
    return LatticeGeometry(nn=nn, nnn=nnn, lattice=lattice, reciprocal=reciprocal)


def reciprocal_vectors(kind):
    """Reciprocal basis (G1, G2) with G_i . A_j = 2*pi*delta_ij."""
    geo = geometry(kind)
    return geo.reciprocal[0].copy(), geo.reciprocal[1].copy()


def d_vector(kind, params, k):
    """Pauli coefficients of the Bloch Hamiltonian at quasi-momentum k.

    The in-plane part is built in the periodic gauge (NN phases referenced
    to a3, so all phase factors live on Bravais vectors and
    H(k + G) = H(k) exactly); eps and dz are gauge-independent.
    """
    geo = geometry(kind)
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)):
        raise ValueError("k must be finite")
    ka = (geo.nn - geo.nn[2]) @ k
    kb = geo.nnn @ k
    f = np.exp(1j * ka).sum()
    eps = 2.0 * params.t2 * np.cos(params.phi) * np.cos(kb).sum()
    dz = params.m - 2.0 * params.t2 * np.sin(params.phi) * np.sin(kb).sum()
    return DVector(
        eps=float(eps),
        dx=float(params.t1 * f.real),
        dy=float(params.t1 * f.imag),
        dz=float(dz),
    )


def bloch_hamiltonian(kind, params, k):
    """Traceless 2x2 Bloch Hamiltonian d(k).sigma (identity shift excluded)."""
    d = d_vector(kind, params, k)
    return np.array(
        [[d.dz, d.dx - 1j * d.dy], [d.dx + 1j * d.dy, -d.dz]], dtype=complex
    )


def bloch_map(kind, params):
    """Vectorized k -> 2x2 Hamiltonian map for the Chern oracle.

    Accepts k of shape (2,) or (..., 2) and returns (..., 2, 2).
    """
    geo = geometry(kind)
    nn_rel = geo.nn - geo.nn[2]
    nnn = geo.nnn
    t1, t2, m, phi = params.t1, params.t2, params.m, params.phi

    def h(k):
        k = np.asarray(k, dtype=float)
        ka = k @ nn_rel.T
        kb = k @ nnn.T
        f = np.exp(1j * ka).sum(axis=-1)
        dz = m - 2.0 * t2 * np.sin(phi) * np.sin(kb).sum(axis=-1)
        out = np.empty(k.shape[:-1] + (2, 2), dtype=complex)
        out[..., 0, 0] = dz
        out[..., 1, 1] = -dz
        out[..., 0, 1] = t1 * np.conj(f)
        out[..., 1, 0] = t1 * f
        return out

    return h


def phase_boundary(kind, phi):
    """Critical masses (+M_b, -M_b) where the band gap closes."""
    scale = 3.0 * SQRT3 if kind is ModelKind.HALDANE else 2.0 * SQRT3
    mb = scale * np.sin(phi)
    return float(mb), float(-mb)


GAP_TOL = 1e-9
INTEGER_TOL = 0.01


def chern_number(h, geo, grid_n):
    """Chern number of the lower band via plaquette Berry fluxes.

    Discretizes the Brillouin-zone parallelogram spanned by the reciprocal
    basis into ``grid_n``^2 plaquettes, takes U(1) link variables of the
    lower-band eigenvectors on the (grid_n+1)^2 point grid (edges evaluated
    directly from the map, which keeps the sum correct for maps that are
    periodic only up to a gauge rotation), and sums the plaquette phases.

    Parameters
    ----------
    h : callable
        Map from k (shape (..., 2)) to Hermitian 2x2 matrices (..., 2, 2).
        A scalar-only callable is looped over automatically.
    geo : LatticeGeometry
        Supplies the reciprocal basis spanning the integration cell.
    grid_n : int
        Number of plaquettes per side, at least 16.

    Raises
    ------
    GapClosedError
        If the two bands approach within ``GAP_TOL`` at any grid point.
    NotConvergedError
        If the flux sum is farther than ``INTEGER_TOL`` from an integer.
    """
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    g1, g2 = geo.reciprocal
    frac = np.linspace(0.0, 1.0, grid_n + 1)
    ki, kj = np.meshgrid(frac, frac, indexing="ij")
    kpts = ki[..., None] * g1 + kj[..., None] * g2

    try:
        hk = np.asarray(h(kpts))
        if hk.shape != kpts.shape[:-1] + (2, 2):
            raise ValueError
    except Exception:
        hk = np.empty(kpts.shape[:-1] + (2, 2), dtype=complex)
        for i in range(grid_n + 1):
            for j in range(grid_n + 1):
                hk[i, j] = h(kpts[i, j])

    evals, evecs = np.linalg.eigh(hk)
    if np.min(evals[..., 1] - evals[..., 0]) < GAP_TOL:
        raise GapClosedError(
            f"band gap below {GAP_TOL} on the k grid; point is at a phase boundary"
        )
    u = evecs[..., 0]  # lower band

    # U(1) link variables along the two grid directions.
    link1 = np.einsum("ijk,ijk->ij", np.conj(u[:-1, :]), u[1:, :])
    link2 = np.einsum("ijk,ijk->ij", np.conj(u[:, :-1]), u[:, 1:])
    plaq = (
        link1[:, :-1]
        * link2[1:, :]
        * np.conj(link1[:, 1:])
        * np.conj(link2[:-1, :])
    )
    total = np.angle(plaq).sum() / (2.0 * np.pi)
    c = round(total)
    if abs(total - c) > INTEGER_TOL:
        raise NotConvergedError(
            f"plaquette sum {total:.4f} is not integer-like; refine grid_n"
        )
    return int(c)
