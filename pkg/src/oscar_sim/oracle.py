"""Brute-force truncated-Fock-space master-equation oracle.

This module integrates the full master equation

    d rho / dt = -i [H, rho] + L_damp rho

on spin (x) cantilever (x) readout Fock spaces, with the ohmic
high-temperature damping superoperator acting on the cantilever,

    L_damp rho = -(gamma/4) [X, {Y, rho}] - (gamma/2)(N + 1/2) [X, [X, rho]],
    X = a + a†,  Y = a - a†,

exactly in that double-commutator form (it is not rearranged into Lindblad
shape; its positivity inequality only holds approximately, so small negative
density eigenvalues are expected and reported rather than "fixed").

Two Hamiltonians are available:

* ``effective``       H = a†a + eps S_z + chi a†a S_z - kappa b†b X
* ``pre_adiabatic``   H = a†a + eps S_z - (sqrt(2) eta S_x + kappa b†b) X

Both conserve the readout photon number, and the effective Hamiltonian is
block diagonal in the spin, so the ``ee``/``gg`` spin blocks evolve
autonomously; ``block="ee"``/``"gg"`` builds the generator on the
cantilever (x) readout factor alone, which is an exact restriction and keeps
the verification runs affordable.  Everything here works in unscaled time
``t`` (cantilever-frequency units); the damping-scaled ``tau = gamma t``
conversion happens at the comparison boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sps
from scipy.integrate import solve_ivp
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln

from .errors import DimensionError, IntegrationError, LeakageError
from .gaussian_dynamics import theta_matrix
from .model import DimensionlessParams
from .phase import PhaseDistribution, SystemState, assemble_from_theta, _grid

#: dynamical leakage threshold on the top cantilever level
LEAKAGE_LIMIT = 1e-6

#: density matrices whose smallest eigenvalue drops below this are flagged
MIN_EIGENVALUE_FLOOR = -1e-6


@dataclass(frozen=True)
class TruncatedSpace:
    """Fock cutoffs: spin (2) x cantilever (d_c) x readout (d_r)."""

    d_c: int
    d_r: int

    def __post_init__(self):
        if self.d_c < 2 or self.d_r < 2:
            raise DimensionError(
                f"cutoffs must be >= 2, got d_c={self.d_c}, d_r={self.d_r}")

    @property
    def dim(self) -> int:
        return 2 * self.d_c * self.d_r

    @property
    def block_dim(self) -> int:
        return self.d_c * self.d_r


def _destroy(d: int) -> sps.csr_matrix:
    return sps.diags(np.sqrt(np.arange(1, d)), 1, format="csr", dtype=complex)


def _left_right(A: sps.spmatrix, B: sps.spmatrix) -> sps.csr_matrix:
    """Superoperator for rho -> A rho B on row-major vec(rho)."""
    return sps.kron(A, B.T, format="csr")


@dataclass
class Liouvillian:
    """Sparse generator of the vectorized master equation (t units)."""

    matrix: sps.csr_matrix
    space: TruncatedSpace
    hamiltonian: str
    block: str
    params: DimensionlessParams

    @property
    def dim(self) -> int:
        return int(round(math.sqrt(self.matrix.shape[0])))


def _block_ops(space: TruncatedSpace):
    Ic = sps.identity(space.d_c, format="csr", dtype=complex)
    Ir = sps.identity(space.d_r, format="csr", dtype=complex)
    a = sps.kron(_destroy(space.d_c), Ir, format="csr")
    b = sps.kron(Ic, _destroy(space.d_r), format="csr")
    return a, b


def _full_ops(space: TruncatedSpace):
    I2 = sps.identity(2, format="csr", dtype=complex)
    Icr = sps.identity(space.block_dim, format="csr", dtype=complex)
    a_blk, b_blk = _block_ops(space)
    a = sps.kron(I2, a_blk, format="csr")
    b = sps.kron(I2, b_blk, format="csr")
    sz = sps.kron(sps.diags([1.0, -1.0], 0, dtype=complex), Icr, format="csr")
    sx = sps.kron(sps.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]],
                                          dtype=complex)), Icr, format="csr")
    return a, b, sz, sx


def _dissipator(a: sps.spmatrix, gamma: float, N: float,
                dim: int) -> sps.csr_matrix:
    X = (a + a.conj().T).tocsr()
    Y = (a - a.conj().T).tocsr()
    Id = sps.identity(dim, format="csr", dtype=complex)
    kT = N + 0.5
    L = -(gamma / 4.0) * (_left_right(X @ Y, Id) + _left_right(X, Y)
                          - _left_right(Y, X) - _left_right(Id, Y @ X))
    L -= (gamma / 2.0) * kT * (_left_right(X @ X, Id) - 2.0 * _left_right(X, X)
                               + _left_right(Id, X @ X))
    return L.tocsr()


def build_generator(params: DimensionlessParams, space: TruncatedSpace,
                    hamiltonian: str = "effective",
                    block: str = "full") -> Liouvillian:
    """Assemble the sparse Liouvillian.

    ``block="ee"``/``"gg"`` restricts the effective Hamiltonian to one spin
    branch on the cantilever (x) readout factor (an exact reduction: the
    branch blocks never couple).  The pre-adiabatic Hamiltonian flips the
    spin, so it only exists with ``block="full"``.  Spin-sector constants
    (the ``eps S_z`` energy) drop out of branch-restricted commutators and
    are omitted there.
    """
    if block not in ("full", "ee", "gg"):
        raise ValueError(f"block must be 'full', 'ee' or 'gg', got {block!r}")
    if hamiltonian not in ("effective", "pre_adiabatic"):
        raise ValueError(f"unknown hamiltonian {hamiltonian!r}")
    if hamiltonian == "pre_adiabatic":
        if block != "full":
            raise ValueError("the pre-adiabatic Hamiltonian couples the spin "
                             "branches; use block='full'")
        if params.epsilon is None or params.eta is None:
            raise ValueError("pre_adiabatic needs params.epsilon and params.eta")

    if block == "full":
        a, b, sz, sx = _full_ops(space)
        dim = space.dim
        eps = params.epsilon if params.epsilon is not None else 0.0
        X = (a + a.conj().T).tocsr()
        num_c = (a.conj().T @ a).tocsr()
        num_r = (b.conj().T @ b).tocsr()
        if hamiltonian == "effective":
            H = num_c + eps * sz + params.chi * (num_c @ sz) \
                - params.kappa * (num_r @ X)
        else:
            H = num_c + eps * sz \
                - (math.sqrt(2.0) * params.eta * sx + params.kappa * num_r) @ X
    else:
        a, b = _block_ops(space)
        dim = space.block_dim
        sign = +1.0 if block == "ee" else -1.0
        X = (a + a.conj().T).tocsr()
        H = (1.0 + sign * params.chi) * (a.conj().T @ a) \
            - params.kappa * ((b.conj().T @ b) @ X)

    Id = sps.identity(dim, format="csr", dtype=complex)
    L = -1j * (_left_right(H, Id) - _left_right(Id, H))
    L = (L + _dissipator(a, params.gamma, params.N_th, dim)).tocsr()
    return Liouvillian(matrix=L, space=space, hamiltonian=hamiltonian,
                       block=block, params=params)


# --------------------------------------------------------------------------
# initial states
# --------------------------------------------------------------------------

def displaced_thermal_density(d: int, alpha: complex, n_occ: float
                              ) -> np.ndarray:
    """Thermal cantilever state with mean occupation ``n_occ``, displaced."""
    if n_occ > 0:
        ratio = n_occ / (1.0 + n_occ)
        p = ratio ** np.arange(d) / (1.0 + n_occ)
    else:
        p = np.zeros(d)
        p[0] = 1.0
    rho = np.diag(p.astype(complex))
    if alpha != 0:
        a = _destroy(d).toarray()
        D = expm(alpha * a.conj().T - np.conj(alpha) * a)
        rho = D @ rho @ D.conj().T
    return rho


def coherent_amplitudes(d: int, beta: complex) -> np.ndarray:
    if beta == 0:
        c = np.zeros(d, dtype=complex)
        c[0] = 1.0
        return c
    ns = np.arange(d)
    logmag = -0.5 * abs(beta) ** 2 + ns * math.log(abs(beta)) \
        - 0.5 * gammaln(ns + 1.0)
    return np.exp(logmag) * np.exp(1j * ns * np.angle(beta))


def initial_density(params: DimensionlessParams, state: SystemState,
                    space: TruncatedSpace, block: str = "full") -> np.ndarray:
    """Initial density matrix.

    Cantilever: thermal at occupation ``N_th + 1/2`` (matching the Gaussian
    solver's initial variance) displaced by ``alpha``.  Readout: coherent
    ``beta``.  Spin (full space): the branch-population mixture
    diag(w_e, w_g).  The truncated matrix is renormalized to unit trace so
    trace preservation is checkable to 1e-9 during integration.
    """
    rho_c = displaced_thermal_density(space.d_c, complex(state.alpha),
                                      params.N_th + 0.5)
    cvec = coherent_amplitudes(space.d_r, complex(state.beta))
    rho_r = np.outer(cvec, cvec.conj())
    blk = np.kron(rho_c, rho_r)
    if block == "full":
        rho_s = np.diag([state.w_e, state.w_g]).astype(complex)
        rho = np.kron(rho_s, blk)
    elif block in ("ee", "gg"):
        rho = blk
    else:
        raise ValueError(f"block must be 'full', 'ee' or 'gg', got {block!r}")
    tr = np.trace(rho).real
    if tr <= 0:
        raise ValueError("truncated initial state has non-positive trace; "
                         "cutoffs far too small")
    return rho / tr


# --------------------------------------------------------------------------
# integration
# --------------------------------------------------------------------------

@dataclass
class TrajectoryPoint:
    t: float
    trace_error: float
    herm_error: float
    leak_cantilever_top: float
    leak_cantilever_next: float
    leak_field_top: float
    min_eigenvalue: Optional[float]
    s_z: Optional[float]
    theta: np.ndarray
    rho: Optional[np.ndarray]


@dataclass
class DensityTrajectory:
    points: List[TrajectoryPoint]
    liouvillian: Liouvillian

    @property
    def times(self) -> List[float]:
        return [p.t for p in self.points]

    def final_rho(self) -> np.ndarray:
        last = self.points[-1]
        if last.rho is None:
            raise ValueError("states were not stored; pass store_states=True")
        return last.rho


def _reshaped(rho: np.ndarray, space: TruncatedSpace, block: str):
    if block == "full":
        return rho.reshape(2, space.d_c, space.d_r, 2, space.d_c, space.d_r)
    return rho.reshape(space.d_c, space.d_r, space.d_c, space.d_r)


def field_theta(rho: np.ndarray, space: TruncatedSpace,
                block: str = "full") -> np.ndarray:
    """Readout matrix elements Theta_nm(0) = Tr_{rest} <n| rho |m>."""
    r = _reshaped(rho, space, block)
    if block == "full":
        return np.einsum("scnscm->nm", r)
    return np.einsum("cncm->nm", r)


def _diagnostics(rho: np.ndarray, t: float, space: TruncatedSpace, block: str,
                 compute_spectrum: bool, store: bool) -> TrajectoryPoint:
    r = _reshaped(rho, space, block)
    if block == "full":
        pop_c = np.einsum("scnscn->c", r).real
        pop_r = np.einsum("scnscn->n", r).real
        s_z = float(np.einsum("scnscn->s", r).real @ np.array([1.0, -1.0]))
    else:
        pop_c = np.einsum("cncn->c", r).real
        pop_r = np.einsum("cncn->n", r).real
        s_z = None
    herm = float(np.abs(rho - rho.conj().T).max())
    trace_err = float(abs(np.trace(rho).real - 1.0))
    min_eig = None
    if compute_spectrum:
        min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0).min())
    return TrajectoryPoint(
        t=t, trace_error=trace_err, herm_error=herm,
        leak_cantilever_top=float(pop_c[-1]),
        leak_cantilever_next=float(pop_c[-2]),
        leak_field_top=float(pop_r[-1]),
        min_eigenvalue=min_eig, s_z=s_z,
        theta=field_theta(rho, space, block),
        rho=rho.copy() if store else None)


def integrate(rho0: np.ndarray, liou: Liouvillian, times: Sequence[float],
              engine: str = "auto", rtol: float = 1e-9, atol: float = 1e-12,
              store_states: bool = False, check_leakage: bool = True,
              compute_spectrum: bool = True) -> DensityTrajectory:
    """Propagate ``rho0`` and collect diagnostics at each output time.

    Engines: ``dop853`` (adaptive explicit on the vectorized density
    matrix), ``expm`` (sparse matrix-exponential action, exact to roundoff
    per step), ``auto`` (expm above dimension 64, else dop853).

    Raises
    ------
    LeakageError
        If the top cantilever level accumulates more than 1e-6 population
        (the cantilever is the dynamically driven mode; readout photon
        number is conserved by both Hamiltonians, so the readout tail is a
        static property of the initial state, reported but not fatal).
    IntegrationError
        If the adaptive solver fails.
    """
    space, block = liou.space, liou.block
    d = int(round(math.sqrt(liou.matrix.shape[0])))
    if rho0.shape != (d, d):
        raise ValueError(f"rho0 has shape {rho0.shape}, generator wants {(d, d)}")
    times = list(times)
    if any(t < 0 for t in times) or list(times) != sorted(times):
        raise ValueError("times must be non-negative and ascending")
    if engine == "auto":
        engine = "expm" if d > 64 else "dop853"

    points: List[TrajectoryPoint] = []

    def record(rho: np.ndarray, t: float):
        pt = _diagnostics(rho, t, space, block, compute_spectrum, store_states)
        points.append(pt)
        if check_leakage and pt.leak_cantilever_top > LEAKAGE_LIMIT:
            raise LeakageError(
                f"top cantilever level holds {pt.leak_cantilever_top:.3e} "
                f"> {LEAKAGE_LIMIT} population at t={t}; raise d_c")

    if engine == "expm":
        v = rho0.reshape(-1).astype(complex)
        t_prev = 0.0
        for t in times:
            if t > t_prev:
                v = expm_multiply(liou.matrix * (t - t_prev), v)
                t_prev = t
            record(v.reshape(d, d), t)
    elif engine == "dop853":
        t_end = times[-1] if times else 0.0
        if t_end == 0.0:
            record(rho0.astype(complex), 0.0)
        else:
            L = liou.matrix
            sol = solve_ivp(lambda t, v: L @ v, (0.0, t_end),
                            rho0.reshape(-1).astype(complex), method="DOP853",
                            rtol=rtol, atol=atol, t_eval=times,
                            dense_output=False)
            if not sol.success:
                raise IntegrationError(f"DOP853 failed: {sol.message}")
            for i, t in enumerate(sol.t):
                record(sol.y[:, i].reshape(d, d), float(t))
    else:
        raise ValueError(f"unknown engine {engine!r}")

    return DensityTrajectory(points=points, liouvillian=liou)


def dense_expm_reference(liou: Liouvillian, rho0: np.ndarray,
                         t: float) -> np.ndarray:
    """rho(t) via a dense matrix exponential; for small-dimension checks."""
    U = expm(liou.matrix.toarray() * t)
    return (U @ rho0.reshape(-1)).reshape(rho0.shape)


# --------------------------------------------------------------------------
# phase distribution from oracle states
# --------------------------------------------------------------------------

def phase_from_density(rho: np.ndarray, space: TruncatedSpace,
                       block: str = "full", grid_size: int = 512,
                       tau: float = float("nan")) -> PhaseDistribution:
    """Phase distribution of the readout mode from an oracle density matrix."""
    Th = field_theta(rho, space, block)
    P = assemble_from_theta([Th], grid_size)
    residue = float(np.abs(P.imag).max())
    raw = P.real
    return PhaseDistribution(
        thetas=_grid(grid_size), values=np.clip(raw, 0.0, None), tau=tau,
        meta={"source": "oracle", "block": block, "d_c": space.d_c,
              "d_r": space.d_r, "imag_residue": residue,
              "raw_min": float(raw.min()), "grid_size": grid_size})


def phase_from_thetas(thetas_nm: Sequence[np.ndarray], grid_size: int = 512,
                      tau: float = float("nan"),
                      meta: Optional[dict] = None) -> PhaseDistribution:
    """Phase distribution from pre-weighted Theta matrices (branch sum)."""
    P = assemble_from_theta(list(thetas_nm), grid_size)
    raw = P.real
    out_meta = {"source": "oracle", "imag_residue": float(np.abs(P.imag).max()),
                "raw_min": float(raw.min()), "grid_size": grid_size}
    if meta:
        out_meta.update(meta)
    return PhaseDistribution(thetas=_grid(grid_size),
                             values=np.clip(raw, 0.0, None), tau=tau,
                             meta=out_meta)


# --------------------------------------------------------------------------
# cross-validation against the Gaussian solver
# --------------------------------------------------------------------------

@dataclass
class ComparisonReport:
    taus: List[float]
    linf_phase: List[float]
    max_theta_diff: float
    worst_trace_error: float
    worst_herm_error: float
    worst_leakage: float
    min_eigenvalue: Optional[float]
    tolerance: float
    trajectories: Optional[Dict[str, DensityTrajectory]] = None

    @property
    def passed(self) -> bool:
        return max(self.linf_phase) < self.tolerance

    def as_dict(self) -> dict:
        return {
            "taus": self.taus, "linf_phase": self.linf_phase,
            "max_theta_diff": self.max_theta_diff,
            "worst_trace_error": self.worst_trace_error,
            "worst_herm_error": self.worst_herm_error,
            "worst_leakage": self.worst_leakage,
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance, "passed": self.passed,
        }


def compare_with_gaussian(params: DimensionlessParams, state: SystemState,
                          space: TruncatedSpace, taus: Sequence[float],
                          grid_size: int = 512, tolerance: float = 1e-3,
                          engine: str = "auto",
                          compute_spectrum: bool = True) -> ComparisonReport:
    """Evolve the spin blocks in the oracle and compare P(theta, tau).

    The Gaussian side is evaluated with the same readout cutoff
    (n_max = d_r - 1) so both distributions sum identical index sets and the
    difference reflects the dynamics, not bookkeeping.
    """
    taus = list(taus)
    times = [tau / params.gamma for tau in taus]
    theta_by_tau: Dict[float, np.ndarray] = {
        tau: np.zeros((space.d_r, space.d_r), dtype=complex) for tau in taus}
    worst_trace = worst_herm = worst_leak = 0.0
    min_eig = None
    trajectories: Dict[str, DensityTrajectory] = {}
    for branch, w in (("e", state.w_e), ("g", state.w_g)):
        if w == 0.0:
            continue
        liou = build_generator(params, space, "effective",
                               block={"e": "ee", "g": "gg"}[branch])
        rho0 = initial_density(params, state, space, block="ee")
        traj = integrate(rho0, liou, times, engine=engine,
                         compute_spectrum=compute_spectrum)
        trajectories[branch] = traj
        for tau, pt in zip(taus, traj.points):
            theta_by_tau[tau] += w * pt.theta
            worst_trace = max(worst_trace, pt.trace_error)
            worst_herm = max(worst_herm, pt.herm_error)
            worst_leak = max(worst_leak, pt.leak_cantilever_top)
            if pt.min_eigenvalue is not None:
                min_eig = pt.min_eigenvalue if min_eig is None \
                    else min(min_eig, pt.min_eigenvalue)

    linf = []
    max_theta_diff = 0.0
    n_max = space.d_r - 1
    for tau in taus:
        P_oracle = phase_from_thetas([theta_by_tau[tau]], grid_size, tau=tau)
        mats = []
        th_gauss = np.zeros((space.d_r, space.d_r), dtype=complex)
        for branch, w in (("e", state.w_e), ("g", state.w_g)):
            if w == 0.0:
                continue
            th_gauss += theta_matrix(params, state, branch, tau, n_max)
        mats.append(th_gauss)
        P_gauss = phase_from_thetas(mats, grid_size, tau=tau)
        linf.append(float(np.abs(P_gauss.values - P_oracle.values).max()))
        max_theta_diff = max(max_theta_diff,
                             float(np.abs(th_gauss - theta_by_tau[tau]).max()))
    return ComparisonReport(
        taus=taus, linf_phase=linf, max_theta_diff=max_theta_diff,
        worst_trace_error=worst_trace, worst_herm_error=worst_herm,
        worst_leakage=worst_leak, min_eigenvalue=min_eig, tolerance=tolerance,
        trajectories=trajectories)


# --------------------------------------------------------------------------
# adiabatic-elimination validation
# --------------------------------------------------------------------------

@dataclass
class DiscrepancyReport:
    epsilon: float
    eta: float
    chi_model: float
    chi_splitting: float
    times: List[float]
    linf_phase: List[float]
    delta_s_z: List[float]
    max_linf_phase: float
    max_delta_s_z: float
    regime_ok: bool

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon, "eta": self.eta,
            "chi_model": self.chi_model, "chi_splitting": self.chi_splitting,
            "times": self.times, "linf_phase": self.linf_phase,
            "delta_s_z": self.delta_s_z,
            "max_linf_phase": self.max_linf_phase,
            "max_delta_s_z": self.max_delta_s_z,
            "regime_ok": self.regime_ok,
        }


def validate_adiabatic(params: DimensionlessParams, state: SystemState,
                       space: TruncatedSpace, t_final: float,
                       n_out: int = 20, grid_size: int = 256,
                       engine: str = "expm",
                       check_leakage: bool = True) -> DiscrepancyReport:
    """Compare the effective model against the pre-adiabatic Hamiltonian.

    Both generators start from the same density matrix and are sampled at
    ``n_out`` uniformly spaced times; the report carries the maximum phase
    distribution L-infinity distance and the maximum ``<S_z>`` mismatch,
    which measure what the dispersive elimination discards.  ``params``
    must supply ``epsilon``, ``eta`` and the effective ``chi`` to test
    against; ``chi_splitting`` echoes the second-order level-splitting value
    ``8 eta^2 eps / (4 eps^2 - 1)`` for reference.
    """
    if params.epsilon is None or params.eta is None:
        raise ValueError("validate_adiabatic needs params.epsilon and params.eta")
    times = [t_final * (i + 1) / n_out for i in range(n_out)]
    L_eff = build_generator(params, space, "effective", block="full")
    L_pre = build_generator(params, space, "pre_adiabatic", block="full")
    rho0 = initial_density(params, state, space, block="full")
    tr_eff = integrate(rho0, L_eff, times, engine=engine,
                       compute_spectrum=False, check_leakage=check_leakage)
    tr_pre = integrate(rho0, L_pre, times, engine=engine,
                       compute_spectrum=False, check_leakage=check_leakage)
    linf, dsz = [], []
    for pe, pp in zip(tr_eff.points, tr_pre.points):
        Pe = phase_from_thetas([pe.theta], grid_size)
        Pp = phase_from_thetas([pp.theta], grid_size)
        linf.append(float(np.abs(Pe.values - Pp.values).max()))
        dsz.append(abs((pe.s_z or 0.0) - (pp.s_z or 0.0)))
    eps, eta = params.epsilon, params.eta
    return DiscrepancyReport(
        epsilon=eps, eta=eta, chi_model=params.chi,
        chi_splitting=8.0 * eta * eta * eps / (4.0 * eps * eps - 1.0),
        times=times, linf_phase=linf, delta_s_z=dsz,
        max_linf_phase=max(linf), max_delta_s_z=max(dsz),
        regime_ok=eps > 1.0 + eta)


def matched_eta_sequence(chi_anchor: float, eps_anchor: float,
                         epsilons: Sequence[float]
                         ) -> List[Tuple[float, float, float]]:
    """(epsilon, eta, chi_effective) triples at constant eta^2 epsilon.

    The product eta^2 epsilon is fixed by requiring the anchor point to
    realize ``chi_anchor`` as its exact dispersive splitting; each triple's
    ``chi_effective`` is the splitting value for that (epsilon, eta), so an
    effective-model run at ``chi_effective`` is the like-for-like partner of
    the pre-adiabatic run at (epsilon, eta).
    """
    eta2eps = chi_anchor * (4.0 * eps_anchor ** 2 - 1.0) / 8.0
    out = []
    for eps in epsilons:
        eta = math.sqrt(eta2eps / eps)
        chi_eff = 8.0 * eta * eta * eps / (4.0 * eps * eps - 1.0)
        out.append((eps, eta, chi_eff))
    return out


# --------------------------------------------------------------------------
# export
# --------------------------------------------------------------------------

def write_trajectory_csv(traj: DensityTrajectory, path,
                         theta_indices: Sequence[Tuple[int, int]] = ((0, 0), (1, 0))
                         ) -> None:
    """CSV of per-time diagnostics and selected Theta_nm values."""
    cols = ["t", "trace_error", "min_eigenvalue", "leak_cantilever_top",
            "leak_field_top", "s_z"]
    for n, m in theta_indices:
        cols += [f"re_theta_{n}{m}", f"im_theta_{n}{m}"]
    lines = [",".join(cols)]
    for pt in traj.points:
        row = [f"{pt.t:.12g}", f"{pt.trace_error:.12g}",
               "" if pt.min_eigenvalue is None else f"{pt.min_eigenvalue:.12g}",
               f"{pt.leak_cantilever_top:.12g}", f"{pt.leak_field_top:.12g}",
               "" if pt.s_z is None else f"{pt.s_z:.12g}"]
        for n, m in theta_indices:
            v = pt.theta[n, m]
            row += [f"{v.real:.12g}", f"{v.imag:.12g}"]
        lines.append(",".join(row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
